//! Ground truth for module orders: Smith normal form over `Z/p^K`.
//!
//! A presentation matrix `A` with `r` rows and `c` columns describes the
//! cokernel `Z_p^c / rowspace(A)`. Elimination picks an entry of minimal
//! valuation (ties to the lowest row, then column) and clears its column
//! with row operations; the pivot row needs no column operations because
//! every other entry in it has valuation at least the pivot's. The pivot
//! valuations are then the elementary divisors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Ctx, PadicInt, PrecisionPolicy, Valuation};

#[derive(Clone)]
enum Entries {
    Word(Vec<Vec<u64>>),
    Big(Vec<Vec<BigUint>>),
}

/// A dense matrix over `Z/p^K`.
#[derive(Clone)]
pub struct PMatrix {
    rows: usize,
    cols: usize,
    data: Entries,
    ctx: Ctx,
}

impl PMatrix {
    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        let data = match ctx.word_modulus() {
            Some(_) => Entries::Word(vec![vec![0; cols]; rows]),
            None => Entries::Big(vec![vec![BigUint::zero(); cols]; rows]),
        };
        PMatrix { rows, cols, data, ctx: ctx.clone() }
    }

    /// Rows of exact integers, reduced mod `p^K`. Every row must have
    /// `cols` entries.
    pub fn from_bigint_rows(ctx: &Ctx, cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut out = PMatrix::zeros(ctx, 0, cols);
        for r in rows {
            out.push_bigint_row(r);
        }
        out
    }

    pub fn from_i64_rows(ctx: &Ctx, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        PMatrix::from_bigint_rows(ctx, cols, &big)
    }

    pub fn from_padic_rows(ctx: &Ctx, cols: usize, rows: &[Vec<PadicInt>]) -> Result<Self> {
        let mut out = PMatrix::zeros(ctx, 0, cols);
        for r in rows {
            if let Some(bad) = r.iter().find(|x| **x.ctx() != **ctx) {
                return Err(Error::ContextMismatch { left: (ctx.p(), ctx.precision()), right: (bad.ctx().p(), bad.ctx().precision()) });
            }
            out.push_residue_row(r.iter().map(|x| x.residue().clone()).collect());
        }
        Ok(out)
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
        PMatrix::from_bigint_rows(ctx, n, &rows)
    }

    pub fn diagonal(ctx: &Ctx, d: &[i64]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { BigInt::from(d[i]) } else { BigInt::zero() }).collect()).collect();
        PMatrix::from_bigint_rows(ctx, d.len(), &rows)
    }

    pub fn push_bigint_row(&mut self, r: &[BigInt]) {
        assert_eq!(r.len(), self.cols, "row length must match the column count");
        let m = BigInt::from(self.ctx.modulus().clone());
        let res: Vec<BigUint> = r.iter().map(|x| x.mod_floor(&m).to_biguint().expect("nonnegative")).collect();
        self.push_residue_row(res);
    }

    /// Append a row of residues already in `[0, p^K)`.
    pub fn push_residue_row(&mut self, r: Vec<BigUint>) {
        assert_eq!(r.len(), self.cols, "row length must match the column count");
        match &mut self.data {
            Entries::Word(rows) => rows.push(r.iter().map(|x| x.to_u64().expect("word residue")).collect()),
            Entries::Big(rows) => rows.push(r),
        }
        self.rows += 1;
    }

    /// Append a row of word residues (requires a word-sized modulus).
    pub fn push_word_row(&mut self, r: Vec<u64>) {
        assert_eq!(r.len(), self.cols, "row length must match the column count");
        match &mut self.data {
            Entries::Word(rows) => rows.push(r),
            Entries::Big(rows) => rows.push(r.into_iter().map(BigUint::from).collect()),
        }
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> PadicInt {
        match &self.data {
            Entries::Word(r) => PadicInt::from_residue(&self.ctx, BigUint::from(r[i][j])),
            Entries::Big(r) => PadicInt::from_residue(&self.ctx, r[i][j].clone()),
        }
    }
}

impl std::fmt::Debug for PMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PMatrix {}x{} mod {}^{}", self.rows, self.cols, self.ctx.p(), self.ctx.precision())?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(12)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Modular arithmetic shared by the elimination kernel and the
/// presentation builders.
pub(crate) trait Arith: Sync {
    type E: Clone + Send + Sync + PartialEq + std::fmt::Debug;
    #[allow(clippy::wrong_self_convention)]
    fn from_bigint(&self, x: &BigInt) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn into_matrix(ctx: &Ctx, cols: usize, rows: Vec<Vec<Self::E>>) -> PMatrix;
    fn is_zero(x: &Self::E) -> bool;
    fn zero(&self) -> Self::E;
    /// `min(v_p(x), bound)` for nonzero `x`.
    fn val_upto(&self, x: &Self::E, bound: u32) -> u32;
    fn shift_down(&self, x: &Self::E, v: u32) -> Self::E;
    fn inv(&self, x: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `x - f*y`.
    fn sub_mul(&self, x: &Self::E, f: &Self::E, y: &Self::E) -> Self::E;
}

pub(crate) struct WordArith {
    p: u64,
    m: u64,
    ppow: Vec<u64>,
}

impl Arith for WordArith {
    type E = u64;
    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.m)).to_u64().expect("reduced")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - b + a
        }
    }
    fn into_matrix(ctx: &Ctx, cols: usize, rows: Vec<Vec<u64>>) -> PMatrix {
        PMatrix { rows: rows.len(), cols, data: Entries::Word(rows), ctx: ctx.clone() }
    }
    fn is_zero(x: &u64) -> bool {
        *x == 0
    }
    fn zero(&self) -> u64 {
        0
    }
    fn val_upto(&self, x: &u64, bound: u32) -> u32 {
        let mut x = *x;
        let mut v = 0;
        while v < bound && x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }
    fn shift_down(&self, x: &u64, v: u32) -> u64 {
        x / self.ppow[v as usize]
    }
    fn inv(&self, x: &u64) -> u64 {
        let (mut a, mut b) = (*x as i128, self.m as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(a, 1);
        s0.rem_euclid(self.m as i128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn sub_mul(&self, x: &u64, f: &u64, y: &u64) -> u64 {
        let t = self.mul(f, y);
        if *x >= t {
            x - t
        } else {
            self.m - t + x
        }
    }
}

pub(crate) struct BigArith {
    p: BigUint,
    m: BigUint,
}

impl Arith for BigArith {
    type E = BigUint;
    fn from_bigint(&self, x: &BigInt) -> BigUint {
        x.mod_floor(&BigInt::from(self.m.clone())).to_biguint().expect("reduced")
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.m {
            s - &self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.m - b + a
        }
    }
    fn into_matrix(ctx: &Ctx, cols: usize, rows: Vec<Vec<BigUint>>) -> PMatrix {
        PMatrix { rows: rows.len(), cols, data: Entries::Big(rows), ctx: ctx.clone() }
    }
    fn is_zero(x: &BigUint) -> bool {
        x.is_zero()
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn val_upto(&self, x: &BigUint, bound: u32) -> u32 {
        let mut x = x.clone();
        let mut v = 0;
        while v < bound {
            let (q, r) = x.div_rem(&self.p);
            if !r.is_zero() {
                break;
            }
            x = q;
            v += 1;
        }
        v
    }
    fn shift_down(&self, x: &BigUint, v: u32) -> BigUint {
        x / self.p.pow(v)
    }
    fn inv(&self, x: &BigUint) -> BigUint {
        let a = BigInt::from(x.clone());
        let m = BigInt::from(self.m.clone());
        let eg = a.extended_gcd(&m);
        debug_assert!(eg.gcd.is_one());
        eg.x.mod_floor(&m).to_biguint().expect("nonnegative")
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.m
    }
    fn sub_mul(&self, x: &BigUint, f: &BigUint, y: &BigUint) -> BigUint {
        let t = (f * y) % &self.m;
        if *x >= t {
            x - t
        } else {
            &self.m - t + x
        }
    }
}

/// Row generation generic over the modular arithmetic of a context.
pub(crate) trait RowBuilder {
    fn cols(&self) -> usize;
    fn rows<A: Arith>(&self, ar: &A) -> Result<Vec<Vec<A::E>>>;
}

/// Build a matrix with word arithmetic when `p^K` fits a machine word.
pub(crate) fn build_matrix<B: RowBuilder>(ctx: &Ctx, b: &B) -> Result<PMatrix> {
    let p = ctx.p();
    let k = ctx.precision();
    match ctx.word_modulus() {
        Some(m) => {
            let ar = WordArith { p, m, ppow: (0..=k).map(|e| p.pow(e)).collect() };
            Ok(WordArith::into_matrix(ctx, b.cols(), b.rows(&ar)?))
        }
        None => {
            let ar = BigArith { p: BigUint::from(p), m: ctx.modulus().clone() };
            Ok(BigArith::into_matrix(ctx, b.cols(), b.rows(&ar)?))
        }
    }
}

/// Elementary divisors of a matrix at one precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Pivot valuations in increasing order, followed by one saturated entry
    /// per diagonal position that vanished at this precision.
    pub diag: Vec<Valuation>,
    /// Number of nonzero pivots.
    pub pivots: usize,
    pub rows: usize,
    pub cols: usize,
    pub precision: u32,
}

impl SnfResult {
    /// Diagonal positions that vanished mod `p^K`.
    pub fn saturated(&self) -> usize {
        self.rows.min(self.cols) - self.pivots
    }

    /// Columns with no diagonal position at all.
    pub fn column_deficit(&self) -> usize {
        self.cols - self.rows.min(self.cols)
    }

    /// Candidates for free rank: saturated positions plus the deficit.
    pub fn free_candidates(&self) -> usize {
        self.cols - self.pivots
    }

    pub fn finite_valuations(&self) -> Vec<u32> {
        self.diag.iter().filter_map(|v| v.finite()).collect()
    }

    pub fn torsion_exponent(&self) -> u64 {
        self.diag.iter().filter_map(|v| v.finite()).map(u64::from).sum()
    }
}

fn row_min<A: Arith>(ar: &A, row: &[A::E], live: &[bool], k: u32) -> Option<(u32, usize)> {
    let mut best: Option<(u32, usize)> = None;
    for (j, x) in row.iter().enumerate() {
        if !live[j] || A::is_zero(x) {
            continue;
        }
        let bound = best.map_or(k, |(b, _)| b);
        if bound == 0 {
            break;
        }
        let v = ar.val_upto(x, bound);
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, j));
        }
    }
    best
}

struct RowState<E> {
    data: Vec<E>,
    min: Option<(u32, usize)>,
}

fn snf_kernel<A: Arith>(ar: &A, rows: Vec<Vec<A::E>>, cols: usize, k: u32, exec: Exec) -> (Vec<u32>, usize) {
    let nrows = rows.len();
    let mut live = vec![true; cols];
    let mut state: Vec<RowState<A::E>> = rows.into_iter().map(|data| RowState { data, min: None }).collect();
    exec.for_each_mut(&mut state, |r| r.min = row_min(ar, &r.data, &live, k));
    let mut pivots = Vec::new();
    while pivots.len() < nrows.min(cols) {
        state.retain(|r| r.min.is_some());
        // Rows stay in original order, so the first minimum is the lowest row.
        let Some(pi) = state.iter().enumerate().min_by_key(|(i, r)| (r.min.expect("retained").0, *i)).map(|(i, _)| i) else {
            break;
        };
        let prow = state.remove(pi);
        let (v, c) = prow.min.expect("retained");
        live[c] = false;
        let winv = ar.inv(&ar.shift_down(&prow.data[c], v));
        let nz: Vec<usize> = (0..cols).filter(|&j| live[j] && !A::is_zero(&prow.data[j])).collect();
        let live_ref = &live;
        let work = state.len() * nz.len().max(1);
        let mode = if work >= 1 << 14 { exec } else { Exec::Sequential };
        mode.for_each_mut(&mut state, |r| {
            if A::is_zero(&r.data[c]) {
                return;
            }
            let f = ar.mul(&ar.shift_down(&r.data[c], v), &winv);
            for &j in &nz {
                r.data[j] = ar.sub_mul(&r.data[j], &f, &prow.data[j]);
            }
            r.data[c] = ar.zero();
            r.min = row_min(ar, &r.data, live_ref, k);
        });
        pivots.push(v);
    }
    (pivots, nrows)
}

/// Smith normal form at the matrix's precision, sequentially.
pub fn snf(a: &PMatrix) -> SnfResult {
    snf_with(a, Exec::Sequential)
}

/// Smith normal form with the elimination loop run in the given mode.
pub fn snf_with(a: &PMatrix, exec: Exec) -> SnfResult {
    let k = a.ctx.precision();
    let p = a.ctx.p();
    let (mut piv, rows) = match &a.data {
        Entries::Word(rows) => {
            let m = a.ctx.word_modulus().expect("word storage implies word modulus");
            let ppow = (0..=k).map(|e| p.pow(e)).collect();
            snf_kernel(&WordArith { p, m, ppow }, rows.clone(), a.cols, k, exec)
        }
        Entries::Big(rows) => snf_kernel(&BigArith { p: BigUint::from(p), m: a.ctx.modulus().clone() }, rows.clone(), a.cols, k, exec),
    };
    piv.sort_unstable();
    let pivots = piv.len();
    let mut diag: Vec<Valuation> = piv.into_iter().map(Valuation::Finite).collect();
    diag.extend(std::iter::repeat_n(Valuation::AtLeast(k), rows.min(a.cols) - pivots));
    SnfResult { diag, pivots, rows, cols: a.cols, precision: k }
}

/// `e(coker A)` at a single precision.
///
/// Fails with `InfiniteModule` when the cokernel certainly has free rank
/// (only a column deficit), and with `PrecisionExhausted` when some
/// diagonal position vanished and may be a divisor beyond `p^K`.
pub fn coker_order(a: &PMatrix) -> Result<u64> {
    let s = snf(a);
    if s.free_candidates() == 0 {
        Ok(s.torsion_exponent())
    } else if s.saturated() == 0 {
        Err(Error::InfiniteModule { free_rank: s.column_deficit(), level: Default::default() })
    } else {
        Err(Error::PrecisionExhausted { precision: s.precision })
    }
}

/// Free rank of `coker A` at a single precision; see [`certify`] for the
/// escalating version.
pub fn coker_rank(a: &PMatrix) -> Result<usize> {
    let s = snf(a);
    if s.saturated() == 0 {
        Ok(s.column_deficit())
    } else {
        Err(Error::PrecisionExhausted { precision: s.precision })
    }
}

/// Anything that can be written down as a relation matrix at a requested
/// precision.
pub trait Presentation: Sync {
    fn prime(&self) -> u64;
    fn relation_matrix(&self, ctx: &Ctx) -> Result<PMatrix>;
}

impl<F> Presentation for (u64, F)
where
    F: Fn(&Ctx) -> Result<PMatrix> + Sync,
{
    fn prime(&self) -> u64 {
        self.0
    }
    fn relation_matrix(&self, ctx: &Ctx) -> Result<PMatrix> {
        (self.1)(ctx)
    }
}

/// The structure `Z_p^free_rank + (+) Z/p^v_i` of a cokernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coker {
    pub torsion: Vec<u32>,
    pub free_rank: usize,
    /// Precision at which the result was certified.
    pub precision: u32,
}

impl Coker {
    /// `e` of the torsion part.
    pub fn exponent(&self) -> u64 {
        self.torsion.iter().map(|&v| u64::from(v)).sum()
    }

    /// `e` of the module modulo `p^n`.
    pub fn exponent_mod_pn(&self, n: u32) -> u64 {
        self.torsion.iter().map(|&v| u64::from(v.min(n))).sum::<u64>() + self.free_rank as u64 * u64::from(n)
    }

    /// `e` when the module is finite.
    pub fn finite_exponent(&self) -> Result<u64> {
        if self.free_rank > 0 {
            Err(Error::InfiniteModule { free_rank: self.free_rank, level: Default::default() })
        } else {
            Ok(self.exponent())
        }
    }
}

/// Compute the cokernel structure, doubling the precision until either no
/// diagonal position vanishes or the vanishing count agrees at `K` and `2K`.
pub fn certify<P: Presentation + ?Sized>(pres: &P, policy: &PrecisionPolicy, exec: Exec) -> Result<Coker> {
    let mut prev: Option<usize> = None;
    let mut last_k = policy.start;
    for k in policy.ladder() {
        let ctx = crate::padic::PrimeContext::new(pres.prime(), k)?;
        let s = snf_with(&pres.relation_matrix(&ctx)?, exec);
        last_k = k;
        let free = s.free_candidates();
        if free == 0 || prev == Some(free) {
            return Ok(Coker { torsion: s.finite_valuations(), free_rank: free, precision: k });
        }
        // A pure column deficit is free at every precision.
        if s.saturated() == 0 {
            return Ok(Coker { torsion: s.finite_valuations(), free_rank: free, precision: k });
        }
        prev = Some(free);
    }
    Err(Error::PrecisionExhausted { precision: last_k })
}

/// Certified `e(coker)`; `InfiniteModule` when the free rank is positive.
pub fn certified_order<P: Presentation + ?Sized>(pres: &P, policy: &PrecisionPolicy, exec: Exec) -> Result<u64> {
    certify(pres, policy, exec)?.finite_exponent()
}

/// Certified free rank of the cokernel.
pub fn certified_rank<P: Presentation + ?Sized>(pres: &P, policy: &PrecisionPolicy, exec: Exec) -> Result<usize> {
    Ok(certify(pres, policy, exec)?.free_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::padic::{valuation_of_int, PrimeContext};
    use crate::zpoly::ZPoly;
    use proptest::prelude::*;

    fn ctx(p: u64, k: u32) -> Ctx {
        PrimeContext::new(p, k).unwrap()
    }

    /// Relations `F * X^i mod omega_n` on the basis `1, X, ..., X^(p^n - 1)`.
    fn cyclic(f: &ZPoly, p: u64, n: u32) -> impl Fn(&Ctx) -> Result<PMatrix> + Sync {
        let w = ZPoly::omega(p, n);
        let f = f.clone();
        move |ctx: &Ctx| {
            let d = w.degree().unwrap();
            let mut m = PMatrix::zeros(ctx, 0, d);
            let mut cur = f.rem_monic(&w)?;
            for _ in 0..d {
                m.push_bigint_row(&(0..d).map(|i| cur.coeff(i)).collect::<Vec<_>>());
                cur = (&cur * &ZPoly::x()).rem_monic(&w)?;
            }
            Ok(m)
        }
    }

    #[test]
    fn diagonal_examples() {
        let c = ctx(3, 5);
        let s = snf(&PMatrix::diagonal(&c, &[3, 9]));
        assert_eq!(s.diag, vec![Valuation::Finite(1), Valuation::Finite(2)]);
        assert_eq!(coker_order(&PMatrix::diagonal(&c, &[3, 9])).unwrap(), 3);
        assert_eq!(coker_order(&PMatrix::identity(&c, 4)).unwrap(), 0);
        assert_eq!(coker_rank(&PMatrix::identity(&c, 4)).unwrap(), 0);
    }

    #[test]
    fn zero_matrix_has_full_rank() {
        let pol = PrecisionPolicy::default();
        let pres = (3u64, |c: &Ctx| Ok(PMatrix::zeros(c, 2, 2)));
        assert_eq!(certified_rank(&pres, &pol, Exec::Sequential).unwrap(), 2);
        assert!(matches!(coker_rank(&PMatrix::zeros(&ctx(3, 4), 2, 2)), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn cyclic_quotients() {
        let pol = PrecisionPolicy::default();
        let e = Exec::Sequential;
        let x3: ZPoly = "X-3".parse().unwrap();
        assert_eq!(certified_order(&(3u64, cyclic(&x3, 3, 2)), &pol, e).unwrap(), 3);
        assert_eq!(certified_order(&(3u64, cyclic(&ZPoly::from_i64s(&[3]), 3, 2)), &pol, e).unwrap(), 9);
        assert_eq!(certified_order(&(3u64, cyclic(&x3, 3, 0)), &pol, e).unwrap(), 1);
        let r = certified_order(&(3u64, cyclic(&ZPoly::x(), 3, 1)), &pol, e);
        assert!(matches!(r, Err(Error::InfiniteModule { free_rank: 1, .. })));
    }

    #[test]
    fn large_divisor_needs_escalation() {
        // Z/3^12 vanishes at K = 8 and is certified after one doubling.
        let pres = (3u64, |c: &Ctx| Ok(PMatrix::from_bigint_rows(c, 1, &[vec![BigInt::from(3u32).pow(12)]])));
        let co = certify(&pres, &PrecisionPolicy::new(8, 256), Exec::Sequential).unwrap();
        assert_eq!(co.torsion, vec![12]);
        assert_eq!(co.precision, 16);
        // A divisor that vanishes at both K and 2K is read as free.
        let pres = (3u64, |c: &Ctx| Ok(PMatrix::from_bigint_rows(c, 1, &[vec![BigInt::from(3u32).pow(40)]])));
        assert_eq!(certify(&pres, &PrecisionPolicy::new(8, 256), Exec::Sequential).unwrap().free_rank, 1);
    }

    #[test]
    fn big_modulus_path_matches_word_path() {
        let rows = vec![vec![6, 3, 9], vec![2, 4, 27], vec![81, 1, 5], vec![0, 3, 3]];
        let small = snf(&PMatrix::from_i64_rows(&ctx(3, 10), &rows));
        let big = snf(&PMatrix::from_i64_rows(&ctx(3, 60), &rows));
        assert_eq!(small.finite_valuations(), big.finite_valuations());
    }

    #[test]
    fn tie_breaking_is_deterministic() {
        let c = ctx(5, 6);
        let rows = vec![vec![5, 5, 0], vec![25, 5, 5], vec![5, 0, 125]];
        let a = PMatrix::from_i64_rows(&c, &rows);
        assert_eq!(snf_with(&a, Exec::Sequential), snf_with(&a, Exec::Parallel));
    }

    fn arb_rows(n: usize, m: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-60i64..60, m), n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn determinant_valuation_is_conserved(rows in arb_rows(4, 4)) {
            let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let det = linalg::determinant(&big);
            prop_assume!(!det.is_zero());
            let pres = (3u64, |c: &Ctx| Ok(PMatrix::from_i64_rows(c, &rows)));
            let co = certify(&pres, &PrecisionPolicy::default(), Exec::Sequential).unwrap();
            prop_assert_eq!(co.free_rank, 0);
            prop_assert_eq!(co.exponent(), u64::from(valuation_of_int(&det, 3).unwrap()));
        }

        #[test]
        fn snf_is_idempotent(rows in arb_rows(3, 5)) {
            let c = ctx(3, 12);
            let s = snf(&PMatrix::from_i64_rows(&c, &rows));
            let d: Vec<i64> = s.finite_valuations().iter().map(|&v| 3i64.pow(v)).collect();
            let again = snf(&PMatrix::diagonal(&c, &d));
            prop_assert_eq!(again.finite_valuations(), s.finite_valuations());
        }

        #[test]
        fn modes_agree(rows in arb_rows(30, 24)) {
            let a = PMatrix::from_i64_rows(&ctx(3, 9), &rows);
            prop_assert_eq!(snf_with(&a, Exec::Sequential), snf_with(&a, Exec::Parallel));
        }

        #[test]
        fn row_order_does_not_matter(rows in arb_rows(5, 4), seed in any::<u64>()) {
            let c = ctx(5, 10);
            let mut shuffled = rows.clone();
            let n = shuffled.len();
            for i in 0..n {
                shuffled.swap(i, (seed as usize).wrapping_add(i * 7) % n);
            }
            prop_assert_eq!(snf(&PMatrix::from_i64_rows(&c, &rows)).diag, snf(&PMatrix::from_i64_rows(&c, &shuffled)).diag);
        }
    }
}
