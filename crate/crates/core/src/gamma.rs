//! Modules over `Lambda(Gamma) = Z_p[[X]]` and their coinvariant growth.
//!
//! A module is given by elementary divisors, by an integer action matrix on
//! a free `Z_p`-module, or by a relation matrix over `Z[X]`. The
//! `Gamma_n`-coinvariants `M / omega_n M` are presented over `Z_p` and
//! measured with the Smith normal form oracle.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{Axis, GrowthPoint, GrowthTable};
use crate::error::{Error, Level, Result};
use crate::exec::Exec;
use crate::lambda::{prep_exact, resultant_val_exact};
use crate::linalg::{self, Matrix};
use crate::oracle::{build_matrix, certify, Arith, Coker, PMatrix, Presentation, RowBuilder};
use crate::padic::{is_prime, Ctx, PrecisionPolicy};
use crate::serial::{dec, dec_opt, Dec};
use crate::zpoly::ZPoly;

/// The three presentation forms of a `Lambda(Gamma)`-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaForm {
    /// `(+) Lambda/(F_i)`.
    Divisors(Vec<ZPoly>),
    /// `Z_p^r` with `gamma v = A v`.
    Action(Matrix<BigInt>),
    /// `Lambda^generators / (rows)`, each row a relation `sum_j r_j e_j`.
    Relations { generators: usize, rows: Vec<Vec<ZPoly>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GammaJson", into = "GammaJson")]
pub struct GammaModule {
    pub p: u64,
    pub form: GammaForm,
    /// Optional starting precision recorded with the module.
    pub precision: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    ring: String,
    #[serde(with = "dec")]
    p: u64,
    #[serde(rename = "K", default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    divisors: Option<Vec<ZPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Vec<Vec<Dec>>>,
    #[serde(default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    generators: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relations: Option<Vec<Vec<ZPoly>>>,
}

impl TryFrom<GammaJson> for GammaModule {
    type Error = Error;
    fn try_from(j: GammaJson) -> Result<Self> {
        if j.ring != "gamma" {
            return Err(Error::Parse(format!("expected ring \"gamma\", found \"{}\"", j.ring)));
        }
        let missing = |f: &str| Error::Parse(format!("form \"{}\" needs a \"{f}\" field", j.form));
        let mut m = match j.form.as_str() {
            "divisors" => GammaModule::divisors(j.p, j.divisors.clone().ok_or_else(|| missing("divisors"))?)?,
            "action" => {
                let a = j.action.clone().ok_or_else(|| missing("action"))?;
                GammaModule::action(j.p, a.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())?
            }
            "relations" => {
                let rows = j.relations.clone().ok_or_else(|| missing("relations"))?;
                let g = j.generators.or_else(|| rows.first().map(Vec::len)).ok_or_else(|| missing("generators"))?;
                GammaModule::relations(j.p, g, rows)?
            }
            other => return Err(Error::Parse(format!("unknown form \"{other}\""))),
        };
        m.precision = j.k;
        Ok(m)
    }
}

impl From<GammaModule> for GammaJson {
    fn from(m: GammaModule) -> Self {
        let mut j = GammaJson { ring: "gamma".into(), p: m.p, k: m.precision, form: String::new(), divisors: None, action: None, generators: None, relations: None };
        match m.form {
            GammaForm::Divisors(d) => {
                j.form = "divisors".into();
                j.divisors = Some(d);
            }
            GammaForm::Action(a) => {
                j.form = "action".into();
                j.action = Some(a.into_iter().map(|r| r.into_iter().map(Dec).collect()).collect());
            }
            GammaForm::Relations { generators, rows } => {
                j.form = "relations".into();
                j.generators = Some(generators);
                j.relations = Some(rows);
            }
        }
        j
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidContext(format!("p = {p} is not an odd prime")));
    }
    Ok(())
}

impl GammaModule {
    pub fn divisors(p: u64, f: Vec<ZPoly>) -> Result<Self> {
        check_prime(p)?;
        if f.iter().any(ZPoly::is_zero) {
            return Err(Error::BadRange("elementary divisors must be nonzero".into()));
        }
        Ok(GammaModule { p, form: GammaForm::Divisors(f), precision: None })
    }

    pub fn action(p: u64, a: Matrix<BigInt>) -> Result<Self> {
        check_prime(p)?;
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::BadRange("action matrix must be square".into()));
        }
        let det = linalg::determinant(&a);
        if (det % BigInt::from(p)).is_zero() {
            return Err(Error::BadRange("action matrix must be invertible mod p".into()));
        }
        Ok(GammaModule { p, form: GammaForm::Action(a), precision: None })
    }

    pub fn relations(p: u64, generators: usize, rows: Vec<Vec<ZPoly>>) -> Result<Self> {
        check_prime(p)?;
        if rows.iter().any(|r| r.len() != generators) {
            return Err(Error::BadRange(format!("every relation needs {generators} entries")));
        }
        Ok(GammaModule { p, form: GammaForm::Relations { generators, rows }, precision: None })
    }

    /// `Lambda/(F) (+) Z/p^c` with trivial action on the finite summand.
    pub fn with_finite_summand(p: u64, f: ZPoly, c: u32) -> Result<Self> {
        let pc = ZPoly::constant(BigInt::from(p).pow(c));
        GammaModule::relations(p, 2, vec![vec![f, ZPoly::zero()], vec![ZPoly::zero(), pc], vec![ZPoly::zero(), ZPoly::x()]])
    }

    /// Direct sum of two modules, as relations.
    pub fn direct_sum(&self, other: &GammaModule) -> Result<GammaModule> {
        if self.p != other.p {
            return Err(Error::ContextMismatch { left: (self.p, 0), right: (other.p, 0) });
        }
        if let (GammaForm::Divisors(a), GammaForm::Divisors(b)) = (&self.form, &other.form) {
            return GammaModule::divisors(self.p, a.iter().chain(b).cloned().collect());
        }
        let (g1, r1) = self.as_relations();
        let (g2, r2) = other.as_relations();
        let mut rows = Vec::new();
        for r in r1 {
            let mut row = r;
            row.extend(std::iter::repeat_n(ZPoly::zero(), g2));
            rows.push(row);
        }
        for r in r2 {
            let mut row = vec![ZPoly::zero(); g1];
            row.extend(r);
            rows.push(row);
        }
        GammaModule::relations(self.p, g1 + g2, rows)
    }

    /// Relation form of any presentation.
    pub fn as_relations(&self) -> (usize, Vec<Vec<ZPoly>>) {
        match &self.form {
            GammaForm::Divisors(f) => {
                let g = f.len();
                (g, f.iter().enumerate().map(|(i, fi)| (0..g).map(|j| if i == j { fi.clone() } else { ZPoly::zero() }).collect()).collect())
            }
            GammaForm::Action(a) => {
                // Row j of (1+X) I - A^T says gamma e_j = sum_i A_ij e_i.
                let g = a.len();
                let rows = (0..g)
                    .map(|j| {
                        (0..g)
                            .map(|i| {
                                let c = if i == j { ZPoly::from_i64s(&[1, 1]) } else { ZPoly::zero() };
                                &c - &ZPoly::constant(a[i][j].clone())
                            })
                            .collect()
                    })
                    .collect();
                (g, rows)
            }
            GammaForm::Relations { generators, rows } => (*generators, rows.clone()),
        }
    }

    /// Number of `Lambda`-generators of the presentation.
    pub fn generators(&self) -> usize {
        match &self.form {
            GammaForm::Divisors(f) => f.len(),
            GammaForm::Action(a) => a.len(),
            GammaForm::Relations { generators, .. } => *generators,
        }
    }

    /// Convert a relation form `(1+X) B - D` with `B` a signed permutation
    /// into action form, when `gamma` then acts unipotently mod `p` so the
    /// module is `Z_p`-free of rank equal to the number of generators.
    pub fn to_action_form(&self) -> Option<GammaModule> {
        let GammaForm::Relations { generators: g, rows } = &self.form else {
            return matches!(self.form, GammaForm::Action(_)).then(|| self.clone());
        };
        let g = *g;
        if rows.len() != g || g == 0 || rows.iter().flatten().any(|x| x.degree().is_some_and(|d| d > 1)) {
            return None;
        }
        let b: Matrix<BigInt> = rows.iter().map(|r| r.iter().map(|x| x.coeff(1)).collect()).collect();
        let c0: Matrix<BigInt> = rows.iter().map(|r| r.iter().map(|x| x.coeff(0)).collect()).collect();
        for (i, row) in b.iter().enumerate() {
            let nz: Vec<&BigInt> = row.iter().filter(|x| !x.is_zero()).collect();
            if nz.len() != 1 || !nz[0].abs().is_one() {
                return None;
            }
            if (0..g).filter(|&k| !b[k][i].is_zero()).count() != 1 {
                return None;
            }
        }
        // (1+X) B e = D e with D = B - C0; in the basis f = B e, gamma f = D B^T f.
        let dmat: Matrix<BigInt> = (0..g).map(|i| (0..g).map(|j| &b[i][j] - &c0[i][j]).collect()).collect();
        let e: Matrix<BigInt> = (0..g).map(|i| (0..g).map(|l| (0..g).map(|j| &dmat[i][j] * &b[l][j]).sum()).collect()).collect();
        let p = BigInt::from(self.p);
        let n: Matrix<BigInt> = (0..g).map(|i| (0..g).map(|j| (&e[i][j] - BigInt::from((i == j) as u8)) % &p).collect()).collect();
        let mut pw = n.clone();
        for _ in 1..g {
            pw = (0..g).map(|i| (0..g).map(|j| (0..g).map(|k| &pw[i][k] * &n[k][j]).sum::<BigInt>() % &p).collect()).collect();
        }
        if pw.iter().flatten().any(|x| !x.is_zero()) {
            return None;
        }
        let a: Matrix<BigInt> = (0..g).map(|i| (0..g).map(|j| e[j][i].clone()).collect()).collect();
        GammaModule::action(self.p, a).ok()
    }

    /// Presentation of `M_{Gamma_n}` over `Z_p`.
    pub fn at_level(&self, n: u32) -> GammaLevel<'_> {
        GammaLevel { module: self, n }
    }
}

/// `M / omega_n M` as a [`Presentation`].
pub struct GammaLevel<'a> {
    module: &'a GammaModule,
    n: u32,
}

struct CyclicRows<'a> {
    generators: usize,
    rows: Vec<Vec<(usize, &'a ZPoly)>>,
    omega: ZPoly,
}

/// `cur <- X * cur mod omega`, with `omega` monic of degree `cur.len()`.
pub(crate) fn mul_x<A: Arith>(ar: &A, cur: &mut [A::E], w: &[A::E]) {
    let d = cur.len();
    let t = cur[d - 1].clone();
    for i in (1..d).rev() {
        cur[i] = ar.sub_mul(&cur[i - 1], &t, &w[i]);
    }
    cur[0] = ar.sub_mul(&ar.zero(), &t, &w[0]);
}

impl RowBuilder for CyclicRows<'_> {
    fn cols(&self) -> usize {
        self.generators * self.omega.degree().unwrap_or(0)
    }

    fn rows<A: Arith>(&self, ar: &A) -> Result<Vec<Vec<A::E>>> {
        let d = self.omega.degree().expect("omega is nonzero");
        let w: Vec<A::E> = (0..d).map(|i| ar.from_bigint(&self.omega.coeff(i))).collect();
        let mut out = Vec::with_capacity(self.rows.len() * d);
        for row in &self.rows {
            let mut cur: Vec<(usize, Vec<A::E>)> = row
                .iter()
                .map(|&(j, f)| {
                    let r = f.rem_monic(&self.omega).expect("omega is monic");
                    (j, (0..d).map(|i| ar.from_bigint(&r.coeff(i))).collect())
                })
                .collect();
            for k in 0..d {
                let mut full = vec![ar.zero(); self.generators * d];
                for (j, v) in &cur {
                    full[j * d..(j + 1) * d].clone_from_slice(v);
                }
                out.push(full);
                if k + 1 < d {
                    for (_, v) in cur.iter_mut() {
                        mul_x(ar, v, &w);
                    }
                }
            }
        }
        Ok(out)
    }
}

struct ActionRows<'a> {
    a: &'a Matrix<BigInt>,
    exponent: u64,
}

fn mat_mul<A: Arith>(ar: &A, x: &[Vec<A::E>], y: &[Vec<A::E>]) -> Vec<Vec<A::E>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ar.zero();
                    for k in 0..n {
                        acc = ar.add(&acc, &ar.mul(&x[i][k], &y[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

impl RowBuilder for ActionRows<'_> {
    fn cols(&self) -> usize {
        self.a.len()
    }

    fn rows<A: Arith>(&self, ar: &A) -> Result<Vec<Vec<A::E>>> {
        let n = self.a.len();
        let one = ar.from_bigint(&BigInt::one());
        let mut base: Vec<Vec<A::E>> = self.a.iter().map(|r| r.iter().map(|x| ar.from_bigint(x)).collect()).collect();
        let mut acc: Vec<Vec<A::E>> = (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { ar.zero() }).collect()).collect();
        let mut e = self.exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul(ar, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mat_mul(ar, &base, &base);
            }
        }
        // Cokernel of gamma^(p^n) - 1 acting on columns: rows of its transpose.
        Ok((0..n).map(|j| (0..n).map(|i| if i == j { ar.sub(&acc[i][j], &one) } else { acc[i][j].clone() }).collect()).collect())
    }
}

impl Presentation for GammaLevel<'_> {
    fn prime(&self) -> u64 {
        self.module.p
    }

    fn relation_matrix(&self, ctx: &Ctx) -> Result<PMatrix> {
        let p = self.module.p;
        match &self.module.form {
            GammaForm::Action(a) => build_matrix(ctx, &ActionRows { a, exponent: p.pow(self.n) }),
            GammaForm::Divisors(f) => {
                let rows = f.iter().enumerate().map(|(i, fi)| vec![(i, fi)]).collect();
                build_matrix(ctx, &CyclicRows { generators: f.len(), rows, omega: ZPoly::omega(p, self.n) })
            }
            GammaForm::Relations { generators, rows } => {
                let rows = rows.iter().map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
                build_matrix(ctx, &CyclicRows { generators: *generators, rows, omega: ZPoly::omega(p, self.n) })
            }
        }
    }
}

/// Certified structure of `M_{Gamma_n}`.
pub fn coinvariants(m: &GammaModule, n: u32, policy: &PrecisionPolicy, exec: Exec) -> Result<Coker> {
    certify(&m.at_level(n), &policy_for(m, policy), exec)
}

fn policy_for(m: &GammaModule, policy: &PrecisionPolicy) -> PrecisionPolicy {
    match m.precision {
        Some(k) => PrecisionPolicy::new(k, policy.max.max(k)),
        None => *policy,
    }
}

/// `e(M_{Gamma_n})`, failing with `InfiniteModule` at the offending level.
pub fn coinvariant_order(m: &GammaModule, n: u32, policy: &PrecisionPolicy, exec: Exec) -> Result<u64> {
    coinvariants(m, n, policy, exec)?.finite_exponent().map_err(|e| e.at_level(Level::gamma(n)))
}

/// The table `(n, e(M_{Gamma_n}))` over `ns`, computed level by level in
/// parallel when `exec` allows.
pub fn coinvariant_order_seq(m: &GammaModule, ns: &[u32], policy: &PrecisionPolicy, exec: Exec) -> Result<GrowthTable> {
    let es = exec.map(ns.to_vec(), |n| coinvariant_order(m, n, policy, exec).map(|e| (n, e)));
    let points = es.into_iter().map(|r| r.map(|(n, e)| GrowthPoint { n, m: 0, e: i128::from(e) })).collect::<Result<Vec<_>>>()?;
    GrowthTable::new(m.p, Axis::N, points)
}

/// `Z_p`-rank of `Lambda/(F, omega_n)`: the total degree of the `Phi_k`
/// (`k <= n`) dividing `F`.
pub fn shared_rank_with_omega(f: &ZPoly, p: u64, n: u32) -> usize {
    (0..=n).filter(|&k| f.divisible_by_monic(&ZPoly::phi(p, k)).unwrap_or(false)).map(|k| ZPoly::phi(p, k).degree().unwrap_or(0)).sum()
}

/// `e(ker(M_{Gamma_n} -> M_{Gamma_{n-1}}))` for `M = Lambda/(F)`, as
/// `v_p(Res(F, Phi_n))`.
pub fn kernel_order(f: &ZPoly, p: u64, n: u32, policy: &PrecisionPolicy) -> Result<u32> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::BadRange("the transition kernel is defined for n >= 1".into()));
    }
    let rank = shared_rank_with_omega(f, p, n);
    if rank > 0 {
        return Err(Error::InfiniteModule { free_rank: rank, level: Level::gamma(n) });
    }
    resultant_val_exact(f, &ZPoly::phi(p, n), p, policy)
}

/// `det((1+X) I - A)`.
pub fn char_poly_from_action(a: &Matrix<BigInt>) -> ZPoly {
    linalg::char_poly(a).taylor_shift(&BigInt::one())
}

/// Limit on the number of maximal minors examined for a relation form.
pub const MAX_MINORS: u128 = 4096;

/// A generator of the characteristic ideal, or zero when the module is not
/// torsion. For relation forms this is the gcd of the maximal minors: the
/// `p`-part is the least content valuation, the rest the primitive gcd
/// over `Q[X]` (common roots of integer polynomials are algebraic, so the
/// gcd over `Q` sees every common factor over `Z_p`).
pub fn characteristic_element(m: &GammaModule) -> Result<ZPoly> {
    match &m.form {
        GammaForm::Divisors(f) => Ok(f.iter().fold(ZPoly::one(), |acc, x| &acc * x)),
        GammaForm::Action(a) => Ok(char_poly_from_action(a)),
        GammaForm::Relations { generators, rows } => {
            let (rows, g) = linalg::eliminate_unit_pivots(rows.clone(), *generators);
            if g == 0 {
                return Ok(ZPoly::one());
            }
            if rows.len() < g {
                return Ok(ZPoly::zero());
            }
            let count = linalg::binomial(rows.len(), g);
            if count > MAX_MINORS {
                return Err(Error::Unsupported(format!("{count} maximal minors exceed the limit of {MAX_MINORS}")));
            }
            let mut mu: Option<u32> = None;
            let mut gcd: Option<ZPoly> = None;
            let mut dup = std::collections::HashSet::new();
            linalg::for_each_subset(rows.len(), g, |idx| {
                if gcd.as_ref().is_some_and(|x| x.degree() == Some(0)) && mu == Some(0) {
                    return;
                }
                let sub: Matrix<ZPoly> = idx.iter().map(|&i| rows[i].clone()).collect();
                let det = linalg::determinant(&sub);
                if det.is_zero() || !dup.insert(det.clone()) {
                    return;
                }
                let v = det.content_valuation(m.p).expect("nonzero");
                mu = Some(mu.map_or(v, |x| x.min(v)));
                gcd = Some(match gcd.take() {
                    None => det.primitive(),
                    Some(x) => x.gcd_primitive(&det),
                });
            });
            match (mu, gcd) {
                (Some(mu), Some(g)) => Ok(g.scale(&BigInt::from(m.p).pow(mu))),
                _ => Ok(ZPoly::zero()),
            }
        }
    }
}

/// `(mu, lambda)` of the characteristic ideal, from Weierstrass data.
pub fn char_mu_lambda(m: &GammaModule, policy: &PrecisionPolicy) -> Result<(u32, usize, ZPoly)> {
    let f = characteristic_element(m)?;
    if f.is_zero() {
        return Err(Error::InfiniteModule { free_rank: 0, level: Level::default() });
    }
    let w = prep_exact(&f, m.p, policy)?;
    Ok((w.mu, w.lambda(), f))
}

/// Iwasawa invariants `e_n = mu p^n + lambda n + nu` for `n >= n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaInvariants {
    #[serde(with = "dec")]
    pub mu: u32,
    #[serde(with = "dec")]
    pub lambda: usize,
    #[serde(with = "dec")]
    pub nu: i128,
    #[serde(with = "dec")]
    pub n0: u32,
    pub char_element: ZPoly,
}

impl GammaInvariants {
    pub fn predict(&self, p: u64, n: u32) -> i128 {
        i128::from(self.mu) * i128::from(p).pow(n) + self.lambda as i128 * i128::from(n) + self.nu
    }
}

/// Smallest `n0 >= 0` with `p^(n0-1)(p-1) > lambda`; zero exactly when
/// `lambda = 0`. This bounds the degree of every distinguished factor.
pub fn stabilization_index(p: u64, lambda: usize) -> u32 {
    if lambda == 0 {
        return 0;
    }
    let mut n0 = 1u32;
    while (p.pow(n0 - 1) * (p - 1)) as usize <= lambda {
        n0 += 1;
    }
    n0
}

/// `mu` and `lambda` from the characteristic ideal, `n0` from `lambda`, and
/// `nu = e_{n0} - mu p^{n0} - lambda n0` from one oracle value.
pub fn extract_invariants(m: &GammaModule, policy: &PrecisionPolicy, exec: Exec) -> Result<GammaInvariants> {
    let (mu, lambda, f) = char_mu_lambda(m, policy)?;
    let n0 = stabilization_index(m.p, lambda);
    let e0 = coinvariant_order(m, n0, policy, exec)?;
    let nu = i128::from(e0) - i128::from(mu) * i128::from(m.p).pow(n0) - lambda as i128 * i128::from(n0);
    Ok(GammaInvariants { mu, lambda, nu, n0, char_element: f })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn seq(m: &GammaModule, n: u32) -> Vec<i128> {
        coinvariant_order_seq(m, &(0..=n).collect::<Vec<_>>(), &pol(), Exec::Sequential).unwrap().values()
    }

    fn int_matrix(v: &[&[i64]]) -> Matrix<BigInt> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly_from_action(&int_matrix(&[&[1]])), ZPoly::x());
        assert_eq!(char_poly_from_action(&int_matrix(&[&[4]])), zp("X-3"));
    }

    /// Multiplication by `1+X` on `Z[X]/(X^3 - 3)` in the basis `1, X, X^2`.
    fn twist_matrix() -> Matrix<BigInt> {
        int_matrix(&[&[1, 0, 3], &[1, 1, 0], &[0, 1, 1]])
    }

    #[test]
    fn action_recovers_cyclic_module() {
        let a = twist_matrix();
        let f = char_poly_from_action(&a);
        assert_eq!(f, zp("X^3-3"));
        let w = prep_exact(&f, 3, &pol()).unwrap();
        assert_eq!((w.mu, w.lambda()), (0, 3));
        let act = GammaModule::action(3, a).unwrap();
        let cyc = GammaModule::divisors(3, vec![f]).unwrap();
        assert_eq!(seq(&act, 3), seq(&cyc, 3));
    }

    #[test]
    fn sequences() {
        let m = GammaModule::divisors(3, vec![zp("X-3")]).unwrap();
        assert_eq!(seq(&m, 4), vec![1, 2, 3, 4, 5]);
        let m = GammaModule::divisors(3, vec![zp("9")]).unwrap();
        assert_eq!(seq(&m, 3), vec![2, 6, 18, 54]);
        let m = GammaModule::divisors(3, vec![ZPoly::phi(3, 1)]).unwrap();
        assert_eq!(coinvariant_order(&m, 0, &pol(), Exec::Sequential).unwrap(), 1);
        assert!(matches!(coinvariant_order(&m, 1, &pol(), Exec::Sequential), Err(Error::InfiniteModule { free_rank: 2, level }) if level == Level::gamma(1)));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_order(&zp("X-3"), 3, 2, &pol()).unwrap(), 1);
        assert_eq!(kernel_order(&zp("3"), 3, 1, &pol()).unwrap(), 2);
        let f = &ZPoly::phi(3, 1) * &zp("X-3");
        assert!(matches!(kernel_order(&f, 3, 3, &pol()), Err(Error::InfiniteModule { .. })));
        let f = &ZPoly::phi(3, 1) + &zp("3");
        let m = GammaModule::divisors(3, vec![f.clone()]).unwrap();
        let s = seq(&m, 3);
        for n in 1..=3 {
            assert_eq!(i128::from(kernel_order(&f, 3, n as u32, &pol()).unwrap()), s[n] - s[n - 1]);
        }
    }

    #[test]
    fn invariants_examples() {
        let m = GammaModule::divisors(3, vec![zp("X-3")]).unwrap();
        let inv = extract_invariants(&m, &pol(), Exec::Sequential).unwrap();
        assert_eq!((inv.mu, inv.lambda, inv.nu, inv.n0), (0, 1, 1, 1));
        for a in 1..=3u32 {
            let m = GammaModule::divisors(3, vec![ZPoly::constant(BigInt::from(3).pow(a))]).unwrap();
            let inv = extract_invariants(&m, &pol(), Exec::Sequential).unwrap();
            assert_eq!((inv.mu, inv.lambda, inv.nu, inv.n0), (a, 0, 0, 0));
        }
        let m = GammaModule::divisors(3, vec![zp("3"), zp("X-3")]).unwrap();
        let inv = extract_invariants(&m, &pol(), Exec::Sequential).unwrap();
        assert_eq!((inv.mu, inv.lambda), (1, 1));
        let s = seq(&m, 3);
        for n in 0..=3u32 {
            assert_eq!(s[n as usize], 3i128.pow(n) + i128::from(n) + 1);
            if n >= inv.n0 {
                assert_eq!(inv.predict(3, n), s[n as usize]);
            }
        }
    }

    #[test]
    fn stabilization_index_values() {
        assert_eq!(stabilization_index(3, 0), 0);
        assert_eq!(stabilization_index(3, 1), 1);
        assert_eq!(stabilization_index(3, 2), 2);
        assert_eq!(stabilization_index(3, 5), 2);
        assert_eq!(stabilization_index(3, 6), 3);
        assert_eq!(stabilization_index(5, 4), 2);
    }

    #[test]
    fn finite_summand_shifts_by_c() {
        let f = zp("X^2+3X+6");
        let base = GammaModule::divisors(3, vec![f.clone()]).unwrap();
        for c in 1..=3 {
            let m = GammaModule::with_finite_summand(3, f.clone(), c).unwrap();
            let a = seq(&m, 3);
            let b = seq(&base, 3);
            assert!(a.iter().zip(&b).all(|(x, y)| *x == y + i128::from(c)));
            let (mu, lambda, _) = char_mu_lambda(&m, &pol()).unwrap();
            assert_eq!((mu, lambda), (0, 2));
        }
    }

    #[test]
    fn forms_agree() {
        let a = twist_matrix();
        let act = GammaModule::action(3, a.clone()).unwrap();
        let (g, rows) = act.as_relations();
        let rel = GammaModule::relations(3, g, rows).unwrap();
        assert_eq!(seq(&act, 3), seq(&rel, 3));
        assert_eq!(rel.to_action_form().unwrap(), act);
        assert_eq!(characteristic_element(&rel).unwrap(), characteristic_element(&act).unwrap());
        let div = GammaModule::divisors(3, vec![zp("X-3"), zp("X^2+3")]).unwrap();
        let (g, rows) = div.as_relations();
        assert_eq!(seq(&div, 3), seq(&GammaModule::relations(3, g, rows).unwrap(), 3));
    }

    #[test]
    fn direct_sum_is_additive() {
        let a = GammaModule::divisors(3, vec![zp("X-3")]).unwrap();
        let b = GammaModule::action(3, twist_matrix()).unwrap();
        let s = a.direct_sum(&b).unwrap();
        let (sa, sb, ss) = (seq(&a, 3), seq(&b, 3), seq(&s, 3));
        assert!(ss.iter().zip(sa.iter().zip(&sb)).all(|(x, (y, z))| *x == y + z));
        let (ia, ib, is) = (char_mu_lambda(&a, &pol()).unwrap(), char_mu_lambda(&b, &pol()).unwrap(), char_mu_lambda(&s, &pol()).unwrap());
        assert_eq!((is.0, is.1), (ia.0 + ib.0, ia.1 + ib.1));
    }

    #[test]
    fn json_round_trip() {
        let m: GammaModule = serde_json::from_str(r#"{"ring":"gamma","p":"3","form":"divisors","divisors":["X-3",["9"]]}"#).unwrap();
        assert_eq!(m, GammaModule::divisors(3, vec![zp("X-3"), zp("9")]).unwrap());
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<GammaModule>(&text).unwrap(), m);
        let a: GammaModule = serde_json::from_str(r#"{"ring":"gamma","p":3,"K":"12","form":"action","action":[["4"]]}"#).unwrap();
        assert_eq!(a.precision, Some(12));
        assert!(serde_json::from_str::<GammaModule>(r#"{"ring":"h","p":"3","form":"divisors","divisors":[]}"#).is_err());
        assert!(serde_json::from_str::<GammaModule>(r#"{"ring":"gamma","p":"3","form":"action","action":[["3"]]}"#).is_err());
    }

    #[test]
    fn non_torsion_is_reported() {
        let m = GammaModule::relations(3, 2, vec![vec![zp("X-3"), zp("X")]]).unwrap();
        assert!(matches!(char_mu_lambda(&m, &pol()), Err(Error::InfiniteModule { .. })));
    }
}
