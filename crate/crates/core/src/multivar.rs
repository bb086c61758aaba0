//! Modules over `Lambda(H) = Z_p[[T_1, ..., T_{d-1}]]`, the submodules
//! `A_m(S) = I_{H_m} M + sum_i Phi_{m/m0}(tau_i) M_i` attached to a
//! structure `S`, and the growth of `e(M / A_m(S))`.
//!
//! At level `m` everything lives in `R_m = Z_p[T]/((1+T_j)^{p^m} - 1)`,
//! which is `Z_p`-free on the monomials `T^a` with `0 <= a_j < p^m`. Those
//! monomials are stored densely in mixed radix, `T_1` most significant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{fit_cm_law, Axis, FitReport, GrowthPoint, GrowthTable};
use crate::error::{Error, Level, Result};
use crate::exec::Exec;
use crate::gamma::mul_x;
use crate::oracle::{build_matrix, certify, Arith, Coker, PMatrix, Presentation, RowBuilder};
use crate::padic::{is_prime, Ctx, PrecisionPolicy};
use crate::serial::{dec, dec_opt, dec_vec, Dec};
use crate::zpoly::ZPoly;

/// `Lambda(H)` for `H = Z_p^(d-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HRing {
    p: u64,
    d: u32,
}

impl HRing {
    pub fn new(p: u64, d: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} is not an odd prime")));
        }
        if d < 2 {
            return Err(Error::BadRange(format!("d = {d}, need d >= 2")));
        }
        Ok(HRing { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of variables, `d - 1`.
    pub fn vars(&self) -> usize {
        self.d as usize - 1
    }

    /// `Z_p`-rank of `R_m`, that is `p^((d-1)m)`.
    pub fn level_rank(&self, m: u32) -> usize {
        (self.p as usize).pow(m).pow(self.vars() as u32)
    }
}

/// `coef * T^mono * e_gen`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTerm {
    pub coef: BigInt,
    pub mono: Vec<u64>,
    pub gen: usize,
}

impl HTerm {
    pub fn new(coef: impl Into<BigInt>, mono: Vec<u64>, gen: usize) -> Self {
        HTerm { coef: coef.into(), mono, gen }
    }
}

/// One pair `(tau, M_i)`: `tau` is the exponent vector of a group element
/// `prod (1+T_j)^{a_j}` and `M_i` is spanned by the listed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauPair {
    pub tau: Vec<BigInt>,
    pub gens: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HStructure {
    pub m0: u32,
    pub pairs: Vec<TauPair>,
}

impl HStructure {
    pub fn empty() -> Self {
        HStructure::default()
    }

    pub fn new(m0: u32, pairs: Vec<TauPair>) -> Self {
        HStructure { m0, pairs }
    }

    fn validate(&self, ring: &HRing, generators: usize) -> Result<()> {
        let p = BigInt::from(ring.p);
        for pair in &self.pairs {
            if pair.tau.len() != ring.vars() {
                return Err(Error::BadRange(format!("tau needs {} exponents", ring.vars())));
            }
            if pair.tau.iter().all(|a| a.is_multiple_of(&p)) {
                return Err(Error::BadRange("tau must lie outside H_1".into()));
            }
            if let Some(g) = pair.gens.iter().find(|&&g| g >= generators) {
                return Err(Error::BadRange(format!("generator {g} out of range")));
            }
        }
        Ok(())
    }
}

/// A finitely presented `Lambda(H)`-module with an attached structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HJson", into = "HJson")]
pub struct HModule {
    pub ring: HRing,
    pub generators: usize,
    pub relations: Vec<Vec<HTerm>>,
    pub structure: HStructure,
}

impl HModule {
    pub fn new(ring: HRing, generators: usize, relations: Vec<Vec<HTerm>>) -> Result<Self> {
        for t in relations.iter().flatten() {
            if t.mono.len() != ring.vars() {
                return Err(Error::BadRange(format!("monomial needs {} exponents", ring.vars())));
            }
            if t.gen >= generators {
                return Err(Error::BadRange(format!("generator {} out of range", t.gen)));
            }
        }
        Ok(HModule { ring, generators, relations, structure: HStructure::empty() })
    }

    /// `Lambda(H)/(c)` for an integer `c`.
    pub fn cyclic_constant(ring: HRing, c: impl Into<BigInt>) -> Result<Self> {
        HModule::new(ring, 1, vec![vec![HTerm::new(c, vec![0; ring.vars()], 0)]])
    }

    /// `Lambda(H)/(F(T_1))` for a one-variable polynomial.
    pub fn cyclic_poly(ring: HRing, f: &ZPoly) -> Result<Self> {
        let rel = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut mono = vec![0; ring.vars()];
                mono[0] = i as u64;
                HTerm::new(c.clone(), mono, 0)
            })
            .collect();
        HModule::new(ring, 1, vec![rel])
    }

    pub fn with_structure(mut self, s: HStructure) -> Result<Self> {
        s.validate(&self.ring, self.generators)?;
        self.structure = s;
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn d(&self) -> u32 {
        self.ring.d
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: Dec,
    #[serde(with = "dec_vec")]
    mono: Vec<u64>,
    #[serde(default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    gen: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    #[serde(with = "dec_vec")]
    tau: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<Dec>>,
}

/// Serialized form of an [`HStructure`].
#[derive(Serialize, Deserialize)]
pub struct StructureSpec {
    #[serde(with = "dec")]
    m0: u32,
    #[serde(default)]
    pairs: Vec<PairJson>,
}

#[derive(Serialize, Deserialize)]
struct HJson {
    ring: String,
    #[serde(with = "dec")]
    p: u64,
    #[serde(with = "dec")]
    d: u32,
    #[serde(default, with = "dec_opt", skip_serializing_if = "Option::is_none")]
    generators: Option<usize>,
    relations: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    structure: Option<StructureSpec>,
}

impl HModule {
    /// Resolve a standalone structure `{"m0": .., "pairs": [..]}`; a pair
    /// without `gens` spans every generator.
    pub fn resolve_structure(&self, spec: StructureSpec) -> Result<HStructure> {
        let s = resolve_structure(spec, self.generators)?;
        s.validate(&self.ring, self.generators)?;
        Ok(s)
    }
}

fn resolve_structure(s: StructureSpec, generators: usize) -> Result<HStructure> {
    let mut pairs = Vec::new();
    for pj in s.pairs {
        let gens = match pj.gens {
            None => (0..generators).collect(),
            Some(g) => g.into_iter().map(|x| usize::try_from(&x.0).map_err(|_| Error::Parse(format!("bad generator index {x}")))).collect::<Result<_>>()?,
        };
        pairs.push(TauPair { tau: pj.tau, gens });
    }
    Ok(HStructure::new(s.m0, pairs))
}

impl TryFrom<HJson> for HModule {
    type Error = Error;
    fn try_from(j: HJson) -> Result<Self> {
        if j.ring != "h" {
            return Err(Error::Parse(format!("expected ring \"h\", found \"{}\"", j.ring)));
        }
        let ring = HRing::new(j.p, j.d)?;
        let seen = j.relations.iter().flatten().map(|t| t.gen.unwrap_or(0) + 1).max().unwrap_or(1);
        let generators = j.generators.unwrap_or(seen);
        let relations = j
            .relations
            .into_iter()
            .map(|r| r.into_iter().map(|t| HTerm { coef: t.coef.0, mono: t.mono, gen: t.gen.unwrap_or(0) }).collect())
            .collect();
        let m = HModule::new(ring, generators, relations)?;
        let Some(s) = j.structure else { return Ok(m) };
        let s = resolve_structure(s, generators)?;
        m.with_structure(s)
    }
}

impl From<HModule> for HJson {
    fn from(m: HModule) -> Self {
        let structure = (m.structure != HStructure::empty()).then(|| StructureSpec {
            m0: m.structure.m0,
            pairs: m
                .structure
                .pairs
                .iter()
                .map(|pr| PairJson { tau: pr.tau.clone(), gens: Some(pr.gens.iter().map(|&g| Dec::from(g as i64)).collect()) })
                .collect(),
        });
        HJson {
            ring: "h".into(),
            p: m.ring.p,
            d: m.ring.d,
            generators: Some(m.generators),
            relations: m
                .relations
                .into_iter()
                .map(|r| r.into_iter().map(|t| TermJson { coef: Dec(t.coef), mono: t.mono, gen: Some(t.gen) }).collect())
                .collect(),
            structure,
        }
    }
}

/// The quotient `M / A_m(S)` as a [`Presentation`] over `Z_p`.
pub struct HQuotient<'a> {
    module: &'a HModule,
    structure: &'a HStructure,
    m: u32,
}

impl HQuotient<'_> {
    pub fn level(&self) -> u32 {
        self.m
    }
}

/// Presentation of `M / A_m(S)`: the relations of `M` times every monomial
/// of `R_m`, and `Phi_{m/m0}(tau_i)` times every monomial on each generator
/// of `M_i`.
pub fn a_m_submodule<'a>(module: &'a HModule, structure: &'a HStructure, m: u32) -> Result<HQuotient<'a>> {
    if m < structure.m0 {
        return Err(Error::BadRange(format!("m = {m} is below m0 = {}", structure.m0)));
    }
    structure.validate(&module.ring, module.generators)?;
    Ok(HQuotient { module, structure, m })
}

struct LevelArith<'r, A: Arith> {
    ar: &'r A,
    /// `p^m`.
    side: usize,
    vars: usize,
    omega: Vec<A::E>,
}

impl<A: Arith> LevelArith<'_, A> {
    fn size(&self) -> usize {
        self.side.pow(self.vars as u32)
    }

    /// Multiply by `T_axis` in place.
    fn mul_var(&self, v: &mut [A::E], axis: usize) {
        let stride = self.side.pow((self.vars - 1 - axis) as u32);
        let block = stride * self.side;
        let mut fiber = vec![self.ar.zero(); self.side];
        for base in (0..v.len()).step_by(block) {
            for inner in 0..stride {
                for (t, f) in fiber.iter_mut().enumerate() {
                    *f = v[base + inner + t * stride].clone();
                }
                mul_x(self.ar, &mut fiber, &self.omega);
                for (t, f) in fiber.iter().enumerate() {
                    v[base + inner + t * stride] = f.clone();
                }
            }
        }
    }

    /// `T^e mod omega_m` in one variable.
    fn power(&self, e: u64) -> Vec<A::E> {
        let mut v = vec![self.ar.zero(); self.side];
        v[0] = self.ar.from_bigint(&BigInt::one());
        for _ in 0..e {
            mul_x(self.ar, &mut v, &self.omega);
        }
        v
    }

    /// `(1+T)^e` for `0 <= e < p^m`, already reduced.
    fn binomial_row(&self, e: usize) -> Vec<A::E> {
        let mut v = vec![self.ar.zero(); self.side];
        let mut c = BigInt::one();
        for (i, slot) in v.iter_mut().enumerate().take(e + 1) {
            *slot = self.ar.from_bigint(&c);
            c = c * BigInt::from(e - i) / BigInt::from(i + 1);
        }
        v
    }

    /// Add `c * (f_0 (x) f_1 (x) ...)` into `acc`.
    fn add_tensor(&self, acc: &mut [A::E], c: &A::E, factors: &[Vec<A::E>]) {
        let mut cur = vec![c.clone()];
        for f in factors {
            let mut next = Vec::with_capacity(cur.len() * self.side);
            for x in &cur {
                for y in f {
                    next.push(self.ar.mul(x, y));
                }
            }
            cur = next;
        }
        for (a, x) in acc.iter_mut().zip(cur) {
            *a = self.ar.add(a, &x);
        }
    }

    /// `Phi_{m/m0}(tau) = sum_{k < p^{m-m0}} tau^{k p^{m0}}`.
    fn phi_of(&self, p: u64, tau: &[BigInt], m0: u32, m: u32) -> Vec<A::E> {
        let side = BigInt::from(self.side);
        let step: Vec<usize> = tau
            .iter()
            .map(|a| (a * BigInt::from(p).pow(m0)).mod_floor(&side).try_into().expect("reduced below p^m"))
            .collect();
        let one = self.ar.from_bigint(&BigInt::one());
        let mut acc = vec![self.ar.zero(); self.size()];
        for k in 0..(p as usize).pow(m - m0) {
            let rows: Vec<Vec<A::E>> = step.iter().map(|&s| self.binomial_row(k * s % self.side)).collect();
            self.add_tensor(&mut acc, &one, &rows);
        }
        acc
    }

    fn expand(&self, elt: &[Vec<A::E>], out: &mut Vec<Vec<A::E>>) {
        self.expand_axis(elt.to_vec(), 0, out);
    }

    fn expand_axis(&self, mut cur: Vec<Vec<A::E>>, axis: usize, out: &mut Vec<Vec<A::E>>) {
        if axis == self.vars {
            out.push(cur.concat());
            return;
        }
        for t in 0..self.side {
            if t + 1 == self.side {
                self.expand_axis(cur, axis + 1, out);
                break;
            }
            self.expand_axis(cur.clone(), axis + 1, out);
            for v in cur.iter_mut() {
                self.mul_var(v, axis);
            }
        }
    }
}

impl RowBuilder for HQuotient<'_> {
    fn cols(&self) -> usize {
        self.module.generators * self.module.ring.level_rank(self.m)
    }

    fn rows<A: Arith>(&self, ar: &A) -> Result<Vec<Vec<A::E>>> {
        let ring = &self.module.ring;
        let side = (ring.p as usize).pow(self.m);
        let w = ZPoly::omega(ring.p, self.m);
        let la = LevelArith { ar, side, vars: ring.vars(), omega: (0..side).map(|i| ar.from_bigint(&w.coeff(i))).collect() };
        let g = self.module.generators;
        let n = la.size();
        let mut out = Vec::new();
        for rel in &self.module.relations {
            let mut elt = vec![vec![ar.zero(); n]; g];
            for t in rel {
                let factors: Vec<Vec<A::E>> = t.mono.iter().map(|&e| la.power(e)).collect();
                la.add_tensor(&mut elt[t.gen], &ar.from_bigint(&t.coef), &factors);
            }
            la.expand(&elt, &mut out);
        }
        for pair in &self.structure.pairs {
            let phi = la.phi_of(ring.p, &pair.tau, self.structure.m0, self.m);
            for &gi in &pair.gens {
                let mut elt = vec![vec![ar.zero(); n]; g];
                elt[gi] = phi.clone();
                la.expand(&elt, &mut out);
            }
        }
        Ok(out)
    }
}

impl Presentation for HQuotient<'_> {
    fn prime(&self) -> u64 {
        self.module.ring.p
    }

    fn relation_matrix(&self, ctx: &Ctx) -> Result<PMatrix> {
        build_matrix(ctx, self)
    }
}

/// Certified structure of `M / A_m(S)`.
pub fn quotient_coker(module: &HModule, structure: &HStructure, m: u32, policy: &PrecisionPolicy, exec: Exec) -> Result<Coker> {
    certify(&a_m_submodule(module, structure, m)?, policy, exec)
}

/// Observed `Z_p`-rank of `M / A_m(S)` against the admissibility bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    #[serde(with = "dec")]
    pub m: u32,
    #[serde(with = "dec")]
    pub rank: usize,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmGrowth {
    pub table: GrowthTable,
    pub ranks: Vec<RankRecord>,
}

/// `(m, e(M / A_m(S)))` over `ms`, one independent computation per level.
pub fn cm_growth(module: &HModule, structure: &HStructure, ms: &[u32], policy: &PrecisionPolicy, exec: Exec) -> Result<CmGrowth> {
    let found = exec.map(ms.to_vec(), |m| quotient_coker(module, structure, m, policy, exec).map(|c| (m, c)));
    let mut points = Vec::new();
    let mut ranks = Vec::new();
    for r in found {
        let (m, c) = r?;
        let bound = match module.ring.d {
            2 => None,
            d => Some((module.ring.p as u128).pow((d - 3) * m)),
        };
        ranks.push(RankRecord { m, rank: c.free_rank, admissible: bound.is_none_or(|b| c.free_rank as u128 <= b) });
        let e = c.finite_exponent().map_err(|e| e.at_level(Level::h(m)))?;
        points.push(GrowthPoint { n: 0, m, e: i128::from(e) });
    }
    Ok(CmGrowth { table: GrowthTable::new(module.ring.p, Axis::M, points)?, ranks })
}

/// Fit `e_m = mu_H p^((d-1)m) + lambda_H m p^((d-2)m) + O(p^((d-2)m))`.
pub fn fit_cm(table: &GrowthTable, d: u32) -> Result<FitReport> {
    fit_cm_law(table, d)
}
