use iwagrowth::asymptotics::fit_iwasawa;
use iwagrowth::corpus;
use iwagrowth::gamma::{self, GammaModule};
use iwagrowth::lambda::resultant_val_exact;
use iwagrowth::multivar::{cm_growth, HModule, HRing, HStructure};
use iwagrowth::padic::PrecisionPolicy;
use iwagrowth::skew::{self, GModule};
use iwagrowth::{Exec, ZPoly};

fn pol() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

fn orders(m: &GammaModule, top: u32, exec: Exec) -> Vec<i128> {
    gamma::coinvariant_order_seq(m, &(0..=top).collect::<Vec<_>>(), &pol(), exec).unwrap().values()
}

#[test]
fn kernel_formula_on_corpus() {
    for p in [3u64, 5] {
        for s in corpus::divisors(2024, p, 20, 3) {
            let m = GammaModule::divisors(p, vec![s.f.clone()]).unwrap();
            let e = orders(&m, 3, Exec::default());
            for n in 1..=3u32 {
                let r = resultant_val_exact(&s.f, &ZPoly::phi(p, n), p, &pol()).unwrap();
                assert_eq!(i128::from(r), e[n as usize] - e[n as usize - 1], "F = {}, n = {n}", s.f);
                let deg = p.pow(n - 1) * (p - 1);
                if deg as usize > s.lambda {
                    assert_eq!(u64::from(r), u64::from(s.mu) * deg + s.lambda as u64);
                }
            }
        }
    }
}

#[test]
fn telescoping_on_certified_window() {
    for p in [3u64, 5] {
        for s in corpus::divisors(2024, p, 20, 3) {
            let m = GammaModule::divisors(p, vec![s.f.clone()]).unwrap();
            let e = orders(&m, 3, Exec::default());
            let n0 = gamma::stabilization_index(p, s.lambda);
            for n in n0..=3 {
                let lhs = e[n as usize] - e[n0 as usize];
                let rhs = i128::from(s.mu) * (i128::from(p).pow(n) - i128::from(p).pow(n0)) + s.lambda as i128 * i128::from(n - n0);
                assert_eq!(lhs, rhs, "F = {}", s.f);
            }
        }
    }
}

#[test]
fn pseudo_null_shift() {
    for (f, c) in corpus::pseudo_null_pairs(99, 3, 5, 3) {
        let plain = orders(&GammaModule::divisors(3, vec![f.clone()]).unwrap(), 3, Exec::Sequential);
        let with = orders(&GammaModule::with_finite_summand(3, f, c).unwrap(), 3, Exec::Sequential);
        for (a, b) in with.iter().zip(&plain) {
            assert_eq!(*a, b + i128::from(c));
        }
    }
}

#[test]
fn iwasawa_fit_recovers_construction() {
    for s in corpus::divisors(5, 3, 8, 4) {
        let m = GammaModule::divisors(3, vec![s.f.clone()]).unwrap();
        let t = gamma::coinvariant_order_seq(&m, &[0, 1, 2, 3, 4], &pol(), Exec::default()).unwrap();
        let inv = gamma::extract_invariants(&m, &pol(), Exec::default()).unwrap();
        assert_eq!((inv.mu, inv.lambda), (s.mu, s.lambda));
        // The fit needs four points inside the stable range.
        if inv.n0 <= 1 {
            let f = fit_iwasawa(&t).unwrap();
            assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(i128::from(inv.mu)), Some(inv.lambda as i128), Some(inv.nu)));
        }
    }
}

#[test]
fn execution_modes_agree() {
    let f: ZPoly = "X^3+3X^2+9".parse().unwrap();
    let m = GammaModule::divisors(3, vec![f, "X-3".parse().unwrap()]).unwrap();
    assert_eq!(orders(&m, 4, Exec::Sequential), orders(&m, 4, Exec::default()));
    let h = HModule::cyclic_constant(HRing::new(3, 3).unwrap(), 3).unwrap();
    let a = cm_growth(&h, &HStructure::empty(), &[0, 1, 2], &pol(), Exec::Sequential).unwrap();
    let b = cm_growth(&h, &HStructure::empty(), &[0, 1, 2], &pol(), Exec::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pipeline_commutation_on_random_modules() {
    for m in corpus::gmodules(17, 10).unwrap() {
        let ring = m.ring_for(2).unwrap();
        for n in 0..=2 {
            for lvl in 0..=2 {
                let a = skew::two_stage(&m, &ring, n, lvl, &pol(), Exec::Sequential).unwrap();
                let b = skew::one_shot_coinvariants(&m, &ring, n, lvl, &pol(), Exec::Sequential).unwrap();
                assert_eq!((&a.torsion, a.free_rank), (&b.torsion, b.free_rank), "{m:?} at n={n} m={lvl}");
            }
        }
    }
}

#[test]
fn etilde_never_exceeds_e() {
    for m in [GModule::gamma_minus(3, 4, 4).unwrap(), GModule::cyclic_constant(3, 4, 9).unwrap()] {
        let ring = m.ring_for(2).unwrap();
        let rep = skew::gnn_growth(&m, &ring, &[1, 2], &pol(), Exec::default()).unwrap();
        for r in rep.rows {
            assert!(r.etilde <= r.e);
        }
    }
}
