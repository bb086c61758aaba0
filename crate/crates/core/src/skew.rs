//! The skew group `G = H x| Gamma` with `gamma h gamma^-1 = h^U`, finite
//! levels `G_{n,m} = H_m x| Gamma_n`, and coinvariants of finitely presented
//! left `Lambda(G)`-modules.
//!
//! Group elements are kept in the normal form `h^a gamma^b`; moving `gamma`
//! past `h` uses `gamma^b h^a = h^(U^b a) gamma^b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{Axis, GrowthPoint, GrowthTable};
use crate::error::{Error, Level, Result};
use crate::exec::Exec;
use crate::gamma::{self, GammaModule};
use crate::linalg::Matrix;
use crate::oracle::{certify, Coker, PMatrix, Presentation};
use crate::padic::{is_prime, valuation_of_int, Ctx, PrecisionPolicy};
use crate::serial::{dec, dec_opt, dec_vec, Dec};
use crate::zpoly::ZPoly;

type IMat = Vec<Vec<i128>>;

fn mat_mul(a: &IMat, b: &IMat, q: i128) -> IMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(0i128, |s, k| (s + a[i][k] * b[k][j]) % q)).collect()).collect()
}

fn mat_pow(a: &IMat, mut e: u64, q: i128) -> IMat {
    let n = a.len();
    let mut acc: IMat = (0..n).map(|i| (0..n).map(|j| i128::from(i == j) % q).collect()).collect();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, q);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base, q);
        }
    }
    acc
}

fn mat_vec(a: &IMat, v: &[i128], q: i128) -> Vec<i128> {
    a.iter().map(|r| r.iter().zip(v).fold(0i128, |s, (x, y)| (s + x * y) % q)).collect()
}

/// `U^-1 mod p^e` as `sum_{k<e} (I - U)^k`, valid because `I - U = 0 mod p`.
fn mat_inv(a: &IMat, e: u32, q: i128) -> IMat {
    let n = a.len();
    let id: IMat = (0..n).map(|i| (0..n).map(|j| i128::from(i == j) % q).collect()).collect();
    let nil: IMat = (0..n).map(|i| (0..n).map(|j| (id[i][j] - a[i][j]).rem_euclid(q)).collect()).collect();
    let mut acc = id.clone();
    let mut pw = id;
    for _ in 1..e.max(1) {
        pw = mat_mul(&pw, &nil, q);
        acc = acc.iter().zip(&pw).map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x + y) % q).collect()).collect();
    }
    acc
}

fn reduce(a: &Matrix<BigInt>, q: i128) -> IMat {
    let qb = BigInt::from(q);
    a.iter().map(|r| r.iter().map(|x| x.mod_floor(&qb).to_i128().expect("reduced")).collect()).collect()
}

fn modulus(p: u64, e: u32) -> Result<i128> {
    i128::from(p).checked_pow(e).filter(|&q| q < 1i128 << 62).ok_or_else(|| Error::Unsupported(format!("level {e} is too large for p = {p}")))
}

/// `G` together with working level caps `(n', m')` at which `G_{n',m'}` is
/// normal, so that `G / G_{n',m'}` is a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewGroupRing {
    p: u64,
    d: u32,
    action: Matrix<BigInt>,
    n_cap: u32,
    m_cap: u32,
}

/// Default action unit `1 + p`.
pub fn default_unit(p: u64) -> BigInt {
    BigInt::from(p) + 1
}

fn check_action(p: u64, d: u32, action: &Matrix<BigInt>) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidContext(format!("p = {p} is not an odd prime")));
    }
    if d < 2 {
        return Err(Error::BadRange(format!("d = {d}, need d >= 2")));
    }
    let r = d as usize - 1;
    if action.len() != r || action.iter().any(|row| row.len() != r) {
        return Err(Error::BadRange(format!("the action must be a {r} x {r} matrix")));
    }
    let pb = BigInt::from(p);
    for (i, row) in action.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !(x - BigInt::from(u8::from(i == j))).is_multiple_of(&pb) {
                return Err(Error::BadRange("the action must be congruent to the identity mod p".into()));
            }
        }
    }
    Ok(())
}

/// Least valuation of the entries of `U - I`, capped at `cap`.
fn action_depth(p: u64, action: &Matrix<BigInt>, cap: u32) -> u32 {
    let mut v = cap;
    for (i, row) in action.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let y = x - BigInt::from(u8::from(i == j));
            if !y.is_zero() {
                v = v.min(valuation_of_int(&y, p).unwrap_or(cap));
            }
        }
    }
    v
}

impl SkewGroupRing {
    pub fn new(p: u64, d: u32, action: Matrix<BigInt>, n_cap: u32, m_cap: u32) -> Result<Self> {
        check_action(p, d, &action)?;
        let q = modulus(p, m_cap)?;
        let u = reduce(&action, q);
        let pw = mat_pow(&u, p.pow(n_cap), q);
        let id = mat_pow(&u, 0, q);
        if pw != id {
            return Err(Error::BadRange(format!("U^(p^{n_cap}) is not the identity mod p^{m_cap}: G_{{{n_cap},{m_cap}}} is not normal")));
        }
        Ok(SkewGroupRing { p, d, action, n_cap, m_cap })
    }

    /// `d = 2` with `gamma h gamma^-1 = h^u`.
    pub fn with_unit(p: u64, u: impl Into<BigInt>, n_cap: u32, m_cap: u32) -> Result<Self> {
        SkewGroupRing::new(p, 2, vec![vec![u.into()]], n_cap, m_cap)
    }

    /// Caps covering levels `n, m <= n_max`: `m' = n_max + 1` and
    /// `n' = max(n_max, m' - v_p(U - 1))`.
    pub fn for_range(p: u64, d: u32, action: Matrix<BigInt>, n_max: u32) -> Result<Self> {
        check_action(p, d, &action)?;
        let m_cap = n_max + 1;
        let v = action_depth(p, &action, m_cap);
        let n_cap = n_max.max(m_cap.saturating_sub(v));
        SkewGroupRing::new(p, d, action, n_cap, m_cap)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn action(&self) -> &Matrix<BigInt> {
        &self.action
    }

    pub fn caps(&self) -> (u32, u32) {
        (self.n_cap, self.m_cap)
    }

    fn check_level(&self, n: Option<u32>, m: u32) -> Result<()> {
        if m > self.m_cap || n.is_some_and(|n| n > self.n_cap) {
            return Err(Error::LevelExceeded { requested: Level { n, m: Some(m) }, cap: Level::both(self.n_cap, self.m_cap) });
        }
        Ok(())
    }

    /// Product of normal forms `h^a1 gamma^b1 * h^a2 gamma^b2`, exponents of
    /// `h` reduced mod `p^m`.
    pub fn mul(&self, m: u32, x: (&[i128], u64), y: (&[i128], u64)) -> Result<(Vec<i128>, u64)> {
        let q = modulus(self.p, m)?;
        let u = mat_pow(&reduce(&self.action, q), x.1, q);
        let moved = mat_vec(&u, y.0, q);
        Ok((x.0.iter().zip(moved).map(|(a, b)| (a + b).rem_euclid(q)).collect(), x.1 + y.1))
    }
}

/// `coef * h^h gamma^gamma * e_gen`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTerm {
    pub coef: BigInt,
    pub h: Vec<BigInt>,
    pub gamma: u64,
    pub gen: usize,
}

impl GTerm {
    pub fn new(coef: impl Into<BigInt>, h: Vec<i64>, gamma: u64, gen: usize) -> Self {
        GTerm { coef: coef.into(), h: h.into_iter().map(BigInt::from).collect(), gamma, gen }
    }
}

/// A left `Lambda(G)`-module `Lambda(G)^generators / sum Lambda(G) r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GJson", into = "GJson")]
pub struct GModule {
    pub p: u64,
    pub d: u32,
    pub action: Matrix<BigInt>,
    pub generators: usize,
    pub relations: Vec<Vec<GTerm>>,
}

impl GModule {
    pub fn new(p: u64, d: u32, action: Matrix<BigInt>, generators: usize, relations: Vec<Vec<GTerm>>) -> Result<Self> {
        check_action(p, d, &action)?;
        for t in relations.iter().flatten() {
            if t.h.len() != d as usize - 1 {
                return Err(Error::BadRange(format!("h exponent needs {} entries", d - 1)));
            }
            if t.gen >= generators {
                return Err(Error::BadRange(format!("generator {} out of range", t.gen)));
            }
        }
        Ok(GModule { p, d, action, generators, relations })
    }

    /// `d = 2` with action unit `u`.
    pub fn with_unit(p: u64, u: impl Into<BigInt>, generators: usize, relations: Vec<Vec<GTerm>>) -> Result<Self> {
        GModule::new(p, 2, vec![vec![u.into()]], generators, relations)
    }

    /// `Lambda(G)/(c)`.
    pub fn cyclic_constant(p: u64, u: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        GModule::with_unit(p, u, 1, vec![vec![GTerm::new(c, vec![0], 0, 0)]])
    }

    /// `Lambda(G)/Lambda(G)(gamma - c)`.
    pub fn gamma_minus(p: u64, u: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let c: BigInt = c.into();
        GModule::with_unit(p, u, 1, vec![vec![GTerm::new(1, vec![0], 1, 0), GTerm::new(-c, vec![0], 0, 0)]])
    }

    /// The ring at caps large enough for levels up to `n_max`.
    pub fn ring_for(&self, n_max: u32) -> Result<SkewGroupRing> {
        SkewGroupRing::for_range(self.p, self.d, self.action.clone(), n_max)
    }

    fn check_ring(&self, ring: &SkewGroupRing) -> Result<()> {
        if ring.p != self.p || ring.d != self.d || ring.action != self.action {
            return Err(Error::BadRange("module and ring disagree on p, d or the action".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GTermJson {
    coef: Dec,
    #[serde(with = "dec_vec")]
    h: Vec<BigInt>,
    #[serde(with = "dec")]
    gamma: u64,
    #[serde(default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    gen: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GJson {
    ring: String,
    #[serde(with = "dec")]
    p: u64,
    #[serde(with = "dec")]
    d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<Dec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Vec<Vec<Dec>>>,
    #[serde(default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    generators: Option<usize>,
    relations: Vec<Vec<GTermJson>>,
}

impl TryFrom<GJson> for GModule {
    type Error = Error;
    fn try_from(j: GJson) -> Result<Self> {
        if j.ring != "g" {
            return Err(Error::Parse(format!("expected ring \"g\", found \"{}\"", j.ring)));
        }
        let r = (j.d as usize).max(2) - 1;
        let action = match (j.u, j.action) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either \"u\" or \"action\", not both".into())),
            (Some(u), None) if j.d == 2 => vec![vec![u.0]],
            (Some(_), None) => return Err(Error::Parse("\"u\" is only meaningful for d = 2; use \"action\"".into())),
            (None, Some(a)) => a.into_iter().map(|row| row.into_iter().map(|x| x.0).collect()).collect(),
            (None, None) => (0..r).map(|i| (0..r).map(|k| if i == k { default_unit(j.p) } else { BigInt::zero() }).collect()).collect(),
        };
        let seen = j.relations.iter().flatten().map(|t| t.gen.unwrap_or(0) + 1).max().unwrap_or(1);
        let relations = j
            .relations
            .into_iter()
            .map(|rel| rel.into_iter().map(|t| GTerm { coef: t.coef.0, h: t.h, gamma: t.gamma, gen: t.gen.unwrap_or(0) }).collect())
            .collect();
        GModule::new(j.p, j.d, action, j.generators.unwrap_or(seen), relations)
    }
}

impl From<GModule> for GJson {
    fn from(m: GModule) -> Self {
        let (u, action) = if m.d == 2 { (Some(Dec(m.action[0][0].clone())), None) } else { (None, Some(m.action.into_iter().map(|r| r.into_iter().map(Dec).collect()).collect())) };
        GJson {
            ring: "g".into(),
            p: m.p,
            d: m.d,
            u,
            action,
            generators: Some(m.generators),
            relations: m
                .relations
                .into_iter()
                .map(|rel| rel.into_iter().map(|t| GTermJson { coef: Dec(t.coef), h: t.h, gamma: t.gamma, gen: Some(t.gen) }).collect())
                .collect(),
        }
    }
}

/// Mixed-radix index of `x in (Z/p^m)^r`, first coordinate most significant.
fn index_of(x: &[i128], side: i128) -> usize {
    x.iter().fold(0usize, |acc, &a| acc * side as usize + a as usize)
}

fn point_of(mut i: usize, side: usize, r: usize) -> Vec<i128> {
    let mut x = vec![0i128; r];
    for slot in x.iter_mut().rev() {
        *slot = (i % side) as i128;
        i /= side;
    }
    x
}

fn h_vec(t: &GTerm, q: i128) -> Vec<i128> {
    let qb = BigInt::from(q);
    t.h.iter().map(|a| a.mod_floor(&qb).to_i128().expect("reduced")).collect()
}

/// `M_{H_m}` as a `Lambda(Gamma)`-module. It is free on `h^c e_j` over
/// `c in H/H_m`; the relation `h^c r` sends a term `h^a gamma^b` to
/// `(1+X)^b` at `h^(U^-b (c+a))`. The result is in action form when the
/// module is `Z_p`-free of the expected shape, else in relation form.
pub fn h_coinvariants(module: &GModule, ring: &SkewGroupRing, m: u32) -> Result<GammaModule> {
    module.check_ring(ring)?;
    ring.check_level(None, m)?;
    let r = module.d as usize - 1;
    let q = modulus(module.p, m)?;
    let side = (module.p as usize).pow(m);
    let cells = side.pow(r as u32);
    let u_inv = mat_inv(&reduce(&module.action, q), m, q);
    let cols = module.generators * cells;
    let mut rows = Vec::with_capacity(module.relations.len() * cells);
    for rel in &module.relations {
        let prepared: Vec<(IMat, Vec<i128>, ZPoly)> = rel
            .iter()
            .map(|t| (mat_pow(&u_inv, t.gamma, q), h_vec(t, q), ZPoly::from_i64s(&[1, 1]).pow(t.gamma).scale(&t.coef)))
            .collect();
        for ci in 0..cells {
            let c = point_of(ci, side, r);
            let mut row = vec![ZPoly::zero(); cols];
            for ((w, a, f), t) in prepared.iter().zip(rel) {
                let s: Vec<i128> = c.iter().zip(a).map(|(x, y)| (x + y) % q).collect();
                let col = t.gen * cells + index_of(&mat_vec(w, &s, q), q);
                row[col] = &row[col] + f;
            }
            rows.push(row);
        }
    }
    let rel = GammaModule::relations(module.p, cols, rows)?;
    Ok(rel.to_action_form().unwrap_or(rel))
}

/// `M_{G_{n,m}}` presented directly on the cosets `G_{n,m} \ G`, with
/// representatives `h^x gamma^y`, `x` mod `p^m` and `0 <= y < p^n`.
pub struct OneShot<'a> {
    module: &'a GModule,
    n: u32,
    m: u32,
}

pub fn one_shot<'a>(module: &'a GModule, ring: &SkewGroupRing, n: u32, m: u32) -> Result<OneShot<'a>> {
    module.check_ring(ring)?;
    ring.check_level(Some(n), m)?;
    Ok(OneShot { module, n, m })
}

impl Presentation for OneShot<'_> {
    fn prime(&self) -> u64 {
        self.module.p
    }

    fn relation_matrix(&self, ctx: &Ctx) -> Result<PMatrix> {
        let md = self.module;
        let r = md.d as usize - 1;
        let q = modulus(md.p, self.m)?;
        let pn = md.p.pow(self.n);
        let side = (md.p as usize).pow(self.m);
        let cells = side.pow(r as u32);
        let cosets = cells * pn as usize;
        let u = reduce(&md.action, q);
        let back = mat_pow(&mat_inv(&u, self.m, q), pn, q);
        let coset = |x: Vec<i128>, y: u64| -> usize {
            let x = mat_vec(&mat_pow(&back, y / pn, q), &x, q);
            index_of(&x, q) * pn as usize + (y % pn) as usize
        };
        let cols = md.generators * cosets;
        let mut out = PMatrix::zeros(ctx, 0, cols);
        for rel in &md.relations {
            let prepared: Vec<Vec<i128>> = rel.iter().map(|t| h_vec(t, q)).collect();
            for ci in 0..cells {
                let x0 = point_of(ci, side, r);
                for y0 in 0..pn {
                    let turn = mat_pow(&u, y0, q);
                    let mut row = vec![BigInt::zero(); cols];
                    for (t, a) in rel.iter().zip(&prepared) {
                        let moved = mat_vec(&turn, a, q);
                        let x: Vec<i128> = x0.iter().zip(moved).map(|(s, t)| (s + t) % q).collect();
                        let col = t.gen * cosets + coset(x, y0 + t.gamma);
                        row[col] += &t.coef;
                    }
                    out.push_bigint_row(&row);
                }
            }
        }
        Ok(out)
    }
}

/// `(M_{H_m})_{Gamma_n}`.
pub fn two_stage(module: &GModule, ring: &SkewGroupRing, n: u32, m: u32, policy: &PrecisionPolicy, exec: Exec) -> Result<Coker> {
    ring.check_level(Some(n), m)?;
    let hm = h_coinvariants(module, ring, m)?;
    gamma::coinvariants(&hm, n, policy, exec)
}

/// `M_{G_{n,m}}` from the coset presentation.
pub fn one_shot_coinvariants(module: &GModule, ring: &SkewGroupRing, n: u32, m: u32, policy: &PrecisionPolicy, exec: Exec) -> Result<Coker> {
    certify(&one_shot(module, ring, n, m)?, policy, exec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnnRow {
    #[serde(with = "dec")]
    pub n: u32,
    /// `e` of `M_{G_{n,n}}`.
    #[serde(with = "dec")]
    pub e: u64,
    /// `e` of `M_{G_{n,n}} / p^n`.
    #[serde(with = "dec")]
    pub etilde: u64,
    #[serde(with = "dec")]
    pub free_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnnReport {
    #[serde(with = "dec")]
    pub p: u64,
    pub rows: Vec<GnnRow>,
}

impl GnnReport {
    pub fn e_table(&self) -> Result<GrowthTable> {
        self.table(|r| r.e)
    }

    pub fn etilde_table(&self) -> Result<GrowthTable> {
        self.table(|r| r.etilde)
    }

    fn table(&self, f: impl Fn(&GnnRow) -> u64) -> Result<GrowthTable> {
        GrowthTable::new(self.p, Axis::Diagonal, self.rows.iter().map(|r| GrowthPoint { n: r.n, m: r.n, e: i128::from(f(r)) }).collect())
    }
}

/// `e_{n,n}` and `etilde_{n,n}` over `ns` with the two-stage pipeline.
pub fn gnn_growth(module: &GModule, ring: &SkewGroupRing, ns: &[u32], policy: &PrecisionPolicy, exec: Exec) -> Result<GnnReport> {
    let found = exec.map(ns.to_vec(), |n| two_stage(module, ring, n, n, policy, exec).map(|c| (n, c)));
    let mut rows = Vec::new();
    for r in found {
        let (n, c) = r?;
        if c.free_rank > 0 {
            return Err(Error::InfiniteModule { free_rank: c.free_rank, level: Level::both(n, n) });
        }
        rows.push(GnnRow { n, e: c.exponent(), etilde: c.exponent_mod_pn(n), free_rank: c.free_rank });
    }
    Ok(GnnReport { p: module.p, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HLevelInvariants {
    #[serde(with = "dec")]
    pub m: u32,
    #[serde(with = "dec")]
    pub mu_gamma: u32,
    #[serde(with = "dec")]
    pub lambda_gamma: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub levels: Vec<HLevelInvariants>,
    /// `lambda_Gamma / p^((d-1)m)` rounded, agreeing on the last two levels.
    #[serde(with = "dec")]
    pub tau: i128,
    /// `mu_Gamma / p^((d-1)m)`, exact on every level.
    #[serde(with = "dec_opt")]
    pub mu_g: Option<u32>,
}

/// `(mu_Gamma, lambda_Gamma)` of `M_{H_m}` for each `m`, with the slope
/// `tau` and `mu_G` read off.
pub fn mu_lambda_of_h_coinvariants(module: &GModule, ring: &SkewGroupRing, ms: &[u32], policy: &PrecisionPolicy, exec: Exec) -> Result<TransferReport> {
    if ms.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let found = exec.map(ms.to_vec(), |m| {
        let hm = h_coinvariants(module, ring, m)?;
        let (mu, lambda, _) = gamma::char_mu_lambda(&hm, policy).map_err(|e| e.at_level(Level::h(m)))?;
        Ok(HLevelInvariants { m, mu_gamma: mu, lambda_gamma: lambda })
    });
    let levels = found.into_iter().collect::<Result<Vec<_>>>()?;
    let index = |m: u32| BigInt::from(module.p).pow((module.d - 1) * m);
    let taus: Vec<BigInt> = levels.iter().map(|l| crate::asymptotics::round_ties_to_zero(&BigInt::from(l.lambda_gamma), &index(l.m))).collect();
    if taus.len() >= 2 && taus[taus.len() - 1] != taus[taus.len() - 2] {
        return Err(Error::NoStabilization(format!("tau rounds to {} and then {} on the last two levels", taus[taus.len() - 2], taus[taus.len() - 1])));
    }
    let tau = taus.last().and_then(|t| t.to_i128()).expect("nonempty");
    let mu_g = levels
        .iter()
        .map(|l| {
            let (q, r) = BigInt::from(l.mu_gamma).div_rem(&index(l.m));
            r.is_zero().then(|| q.to_u32()).flatten()
        })
        .collect::<Option<Vec<u32>>>()
        .filter(|v| v.windows(2).all(|w| w[0] == w[1]))
        .and_then(|v| v.first().copied());
    Ok(TransferReport { levels, tau, mu_g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{fit_diagonal, DiagonalModel};
    use crate::gamma::GammaForm;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    const SEQ: Exec = Exec::Sequential;

    #[test]
    fn normality_guard() {
        assert!(SkewGroupRing::with_unit(3, 4, 1, 2).is_ok());
        assert!(matches!(SkewGroupRing::with_unit(3, 4, 1, 3), Err(Error::BadRange(_))));
        assert!(SkewGroupRing::with_unit(3, 10, 1, 3).is_ok());
        assert!(matches!(SkewGroupRing::with_unit(3, 5, 1, 1), Err(Error::BadRange(_))));
        let r = SkewGroupRing::for_range(3, 2, vec![vec![BigInt::from(4)]], 3).unwrap();
        assert_eq!(r.caps(), (3, 4));
    }

    #[test]
    fn normal_form_product() {
        let r = SkewGroupRing::with_unit(3, 4, 2, 3).unwrap();
        // h gamma * h = h^(1+4) gamma.
        assert_eq!(r.mul(3, (&[1], 1), (&[1], 0)).unwrap(), (vec![5], 1));
        assert_eq!(r.mul(1, (&[1], 2), (&[2], 1)).unwrap(), (vec![(1 + 16 * 2) % 3], 3));
    }

    #[test]
    fn h_coinvariants_twisted_line() {
        let m = GModule::gamma_minus(3, 4, 4).unwrap();
        let ring = m.ring_for(2).unwrap();
        let h1 = h_coinvariants(&m, &ring, 1).unwrap();
        let GammaForm::Action(a) = &h1.form else { panic!("expected an action form") };
        // gamma e_a = 4 e_{4a}: on Z/3 this is 4 times the identity.
        let four: Matrix<BigInt> = (0..3).map(|i| (0..3).map(|j| BigInt::from(if i == j { 4 } else { 0 })).collect()).collect();
        assert_eq!(a, &four);
        let h2 = h_coinvariants(&m, &ring, 2).unwrap();
        let GammaForm::Action(a) = &h2.form else { panic!("expected an action form") };
        for c in 0..9 {
            assert_eq!(a[(4 * c) % 9][c], BigInt::from(4));
        }
        assert!(matches!(h_coinvariants(&m, &ring, 4), Err(Error::LevelExceeded { .. })));
    }

    #[test]
    fn h_coinvariants_mod_p_is_free_over_gamma_line() {
        let m = GModule::cyclic_constant(3, 4, 3).unwrap();
        let ring = m.ring_for(2).unwrap();
        let h1 = h_coinvariants(&m, &ring, 1).unwrap();
        assert_eq!(h1.generators(), 3);
        let t = gamma::coinvariant_order_seq(&h1, &[0, 1, 2], &pol(), SEQ).unwrap();
        assert_eq!(t.values(), vec![3, 9, 27]);
    }

    #[test]
    fn trivial_h_action_is_level_independent() {
        let rels = vec![vec![GTerm::new(1, vec![1], 0, 0), GTerm::new(-1, vec![0], 0, 0)], vec![GTerm::new(1, vec![0], 1, 0), GTerm::new(-4, vec![0], 0, 0)]];
        let m = GModule::with_unit(3, 4, 1, rels).unwrap();
        let ring = m.ring_for(2).unwrap();
        for lvl in 0..=2 {
            let hm = h_coinvariants(&m, &ring, lvl).unwrap();
            let t = gamma::coinvariant_order_seq(&hm, &[0, 1, 2], &pol(), SEQ).unwrap();
            assert_eq!(t.values(), vec![1, 2, 3]);
        }
        let rep = mu_lambda_of_h_coinvariants(&m, &ring, &[0, 1, 2], &pol(), SEQ).unwrap();
        assert!(rep.levels.iter().all(|l| (l.mu_gamma, l.lambda_gamma) == (0, 1)));
        assert_eq!(rep.tau, 0);
    }

    #[test]
    fn diagonal_growth() {
        let m = GModule::gamma_minus(3, 4, 4).unwrap();
        let ring = m.ring_for(3).unwrap();
        let rep = gnn_growth(&m, &ring, &[1, 2, 3], &pol(), SEQ).unwrap();
        let e: Vec<u64> = rep.rows.iter().map(|r| r.e).collect();
        let et: Vec<u64> = rep.rows.iter().map(|r| r.etilde).collect();
        assert_eq!(e, vec![6, 27, 108]);
        assert_eq!(et, vec![3, 18, 81]);
        let fit = fit_diagonal(&rep.e_table().unwrap(), &DiagonalModel::Main, 2).unwrap();
        assert_eq!((fit.param("tau"), fit.witnessed_c), (Some(1), Some(1)));
        for n in 1..=2 {
            let one = one_shot_coinvariants(&m, &ring, n, n, &pol(), SEQ).unwrap();
            assert_eq!(one.exponent(), e[n as usize - 1]);
        }
    }

    #[test]
    fn mod_p_diagonal() {
        let m = GModule::cyclic_constant(3, 4, 3).unwrap();
        let ring = m.ring_for(2).unwrap();
        let rep = gnn_growth(&m, &ring, &[1, 2], &pol(), SEQ).unwrap();
        assert!(rep.rows.iter().all(|r| r.e == 9u64.pow(r.n) && r.etilde == r.e));
    }

    #[test]
    fn transfer_of_mu_and_lambda() {
        for a in 1..=2u32 {
            let m = GModule::cyclic_constant(3, 4, 3i64.pow(a)).unwrap();
            let ring = m.ring_for(2).unwrap();
            let rep = mu_lambda_of_h_coinvariants(&m, &ring, &[0, 1, 2], &pol(), SEQ).unwrap();
            for l in &rep.levels {
                assert_eq!((l.mu_gamma, l.lambda_gamma), (a * 3u32.pow(l.m), 0));
            }
            assert_eq!(rep.mu_g, Some(a));
        }
        let m = GModule::gamma_minus(3, 4, 1).unwrap();
        let ring = m.ring_for(2).unwrap();
        let rep = mu_lambda_of_h_coinvariants(&m, &ring, &[0, 1, 2], &pol(), SEQ).unwrap();
        for l in &rep.levels {
            assert_eq!((l.mu_gamma, l.lambda_gamma), (0, 3usize.pow(l.m)));
        }
        assert_eq!((rep.tau, rep.mu_g), (1, Some(0)));
    }

    #[test]
    fn infinite_diagonal_is_reported() {
        let m = GModule::gamma_minus(3, 4, 1).unwrap();
        let ring = m.ring_for(1).unwrap();
        assert!(matches!(gnn_growth(&m, &ring, &[1], &pol(), SEQ), Err(Error::InfiniteModule { level, .. }) if level == Level::both(1, 1)));
    }

    #[test]
    fn pipelines_commute_on_two_generators() {
        let rels = vec![
            vec![GTerm::new(1, vec![1], 1, 0), GTerm::new(-2, vec![0], 0, 1), GTerm::new(3, vec![2], 0, 0)],
            vec![GTerm::new(9, vec![0], 0, 1), GTerm::new(1, vec![4], 2, 0)],
        ];
        let m = GModule::with_unit(3, 4, 2, rels).unwrap();
        let ring = m.ring_for(2).unwrap();
        for n in 0..=2 {
            for lvl in 0..=2 {
                let a = two_stage(&m, &ring, n, lvl, &pol(), SEQ).unwrap();
                let b = one_shot_coinvariants(&m, &ring, n, lvl, &pol(), SEQ).unwrap();
                assert_eq!((a.torsion, a.free_rank), (b.torsion, b.free_rank), "n={n} m={lvl}");
            }
        }
    }

    #[test]
    fn higher_dimension_orders() {
        let action = vec![vec![BigInt::from(4), BigInt::from(3)], vec![BigInt::from(0), BigInt::from(1)]];
        let m = GModule::new(3, 3, action, 1, vec![vec![GTerm::new(3, vec![0, 0], 0, 0)]]).unwrap();
        let ring = m.ring_for(1).unwrap();
        let a = two_stage(&m, &ring, 1, 1, &pol(), SEQ).unwrap();
        let b = one_shot_coinvariants(&m, &ring, 1, 1, &pol(), SEQ).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.exponent(), 27);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"ring":"g","p":"3","d":"2","u":"4","relations":[[{"coef":"1","h":["0"],"gamma":"1"},{"coef":"-4","h":["0"],"gamma":"0"}]]}"#;
        let m: GModule = serde_json::from_str(text).unwrap();
        assert_eq!(m, GModule::gamma_minus(3, 4, 4).unwrap());
        let back: GModule = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let dflt: GModule = serde_json::from_str(r#"{"ring":"g","p":"5","d":"2","relations":[[{"coef":"5","h":["0"],"gamma":"0"}]]}"#).unwrap();
        assert_eq!(dflt.action, vec![vec![BigInt::from(6)]]);
        assert!(serde_json::from_str::<GModule>(r#"{"ring":"g","p":"3","d":"2","u":"5","relations":[]}"#).is_err());
    }
}
