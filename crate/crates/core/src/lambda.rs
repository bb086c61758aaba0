//! The one-variable Iwasawa algebra `Z_p[[X]]` at finite precision.
//!
//! [`LambdaPoly`] is a polynomial with coefficients in `Z/p^K`;
//! [`LambdaSeries`] is a power series truncated above degree `D`. The
//! variable `X` stands for `gamma - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{Ctx, PadicInt, PrecisionPolicy, PrimeContext, Valuation};
use crate::zpoly::ZPoly;

/// A polynomial over `Z/p^K` with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: Vec<PadicInt>,
    ctx: Ctx,
}

impl LambdaPoly {
    pub fn new(ctx: &Ctx, mut coeffs: Vec<PadicInt>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| **c.ctx() != **ctx) {
            return Err(Error::ContextMismatch { left: (ctx.p(), ctx.precision()), right: (bad.ctx().p(), bad.ctx().precision()) });
        }
        while coeffs.last().is_some_and(PadicInt::is_zero) {
            coeffs.pop();
        }
        Ok(LambdaPoly { coeffs, ctx: ctx.clone() })
    }

    fn from_vec(ctx: &Ctx, mut coeffs: Vec<PadicInt>) -> Self {
        while coeffs.last().is_some_and(PadicInt::is_zero) {
            coeffs.pop();
        }
        LambdaPoly { coeffs, ctx: ctx.clone() }
    }

    pub fn from_zpoly(ctx: &Ctx, f: &ZPoly) -> Self {
        LambdaPoly::from_vec(ctx, f.coeffs().iter().map(|c| ctx.from_bigint(c)).collect())
    }

    pub fn from_i64s(ctx: &Ctx, c: &[i64]) -> Self {
        LambdaPoly::from_vec(ctx, c.iter().map(|&v| ctx.from_i64(v)).collect())
    }

    pub fn zero(ctx: &Ctx) -> Self {
        LambdaPoly { coeffs: Vec::new(), ctx: ctx.clone() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        LambdaPoly::from_i64s(ctx, &[1])
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == self.ctx.one())
    }

    /// Monic with every lower coefficient divisible by `p`.
    pub fn is_distinguished(&self) -> bool {
        self.is_monic() && self.coeffs[..self.coeffs.len() - 1].iter().all(|c| !c.is_unit())
    }

    /// Lift with balanced coefficients.
    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(PadicInt::balanced).collect())
    }

    fn check(&self, o: &LambdaPoly) -> Result<()> {
        if *self.ctx == *o.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: (self.ctx.p(), self.ctx.precision()), right: (o.ctx.p(), o.ctx.precision()) })
        }
    }

    pub fn checked_add(&self, o: &LambdaPoly) -> Result<LambdaPoly> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(LambdaPoly::from_vec(&self.ctx, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect()))
    }

    pub fn checked_sub(&self, o: &LambdaPoly) -> Result<LambdaPoly> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(LambdaPoly::from_vec(&self.ctx, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect()))
    }

    pub fn checked_mul(&self, o: &LambdaPoly) -> Result<LambdaPoly> {
        self.check(o)?;
        Ok(LambdaPoly::from_vec(&self.ctx, mul_trunc(&self.ctx, &self.coeffs, &o.coeffs, usize::MAX)))
    }

    pub fn scale(&self, k: &PadicInt) -> LambdaPoly {
        LambdaPoly::from_vec(&self.ctx, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Division by a monic polynomial over `Z/p^K`.
    pub fn div_rem_monic(&self, g: &LambdaPoly) -> Result<(LambdaPoly, LambdaPoly)> {
        self.check(g)?;
        if !g.is_monic() {
            return Err(Error::Unsupported("divisor must be monic".into()));
        }
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((LambdaPoly::zero(&self.ctx), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![self.ctx.zero(); r.len() - dg];
        for i in (dg..r.len()).rev() {
            let t = std::mem::replace(&mut r[i], self.ctx.zero());
            if t.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs[..dg].iter().enumerate() {
                r[i - dg + j] = &r[i - dg + j] - &(&t * gj);
            }
            q[i - dg] = t;
        }
        r.truncate(dg);
        Ok((LambdaPoly::from_vec(&self.ctx, q), LambdaPoly::from_vec(&self.ctx, r)))
    }

    /// Minimal coefficient valuation and the first index attaining it.
    pub fn min_valuation(&self) -> Option<(u32, usize)> {
        min_val(&self.coeffs)
    }
}

fn min_val(c: &[PadicInt]) -> Option<(u32, usize)> {
    let mut best: Option<(u32, usize)> = None;
    for (i, a) in c.iter().enumerate() {
        if let Valuation::Finite(v) = a.val() {
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, i));
            }
        }
    }
    best
}

fn mul_trunc(ctx: &Ctx, a: &[PadicInt], b: &[PadicInt], cap: usize) -> Vec<PadicInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(cap.saturating_add(1));
    let mut out = vec![ctx.zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() || i >= len {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_zpoly().fmt(f)
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self, self.ctx.p(), self.ctx.precision())
    }
}

impl Serialize for LambdaPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_zpoly().serialize(s)
    }
}

/// A power series over `Z/p^K` known up to `X^cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaSeries {
    coeffs: Vec<PadicInt>,
    ctx: Ctx,
    cap: usize,
}

impl LambdaSeries {
    /// Truncate a polynomial at degree `cap`. Fails with `CapExceeded` when a
    /// dropped coefficient has smaller valuation than every retained one,
    /// since the invariants of the series would then be misread.
    pub fn from_poly(f: &LambdaPoly, cap: usize) -> Result<Self> {
        let mut coeffs: Vec<PadicInt> = f.coeffs.iter().take(cap + 1).cloned().collect();
        if f.coeffs.len() > cap + 1 {
            let kept = min_val(&coeffs).map(|(v, _)| v);
            let dropped = min_val(&f.coeffs[cap + 1..]).map(|(v, _)| v);
            if let Some(d) = dropped {
                if kept.is_none_or(|k| d < k) {
                    return Err(Error::CapExceeded { needed: f.coeffs.len() - 1, cap });
                }
            }
        }
        while coeffs.last().is_some_and(PadicInt::is_zero) {
            coeffs.pop();
        }
        Ok(LambdaSeries { coeffs, ctx: f.ctx.clone(), cap })
    }

    pub fn from_zpoly(ctx: &Ctx, f: &ZPoly, cap: usize) -> Result<Self> {
        LambdaSeries::from_poly(&LambdaPoly::from_zpoly(ctx, f), cap)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    /// The retained coefficients as a polynomial.
    pub fn to_poly(&self) -> LambdaPoly {
        LambdaPoly::from_vec(&self.ctx, self.coeffs.clone())
    }

    pub fn is_unit(&self) -> bool {
        self.coeff(0).is_unit()
    }

    pub fn checked_mul(&self, o: &LambdaSeries) -> Result<LambdaSeries> {
        self.to_poly().check(&o.to_poly())?;
        let cap = self.cap.min(o.cap);
        let c = mul_trunc(&self.ctx, &self.coeffs, &o.coeffs, cap);
        Ok(LambdaSeries::from_poly(&LambdaPoly::from_vec(&self.ctx, c), cap).expect("already truncated"))
    }

    /// Multiplicative inverse up to `X^cap`.
    pub fn inverse(&self) -> Result<LambdaSeries> {
        let c0inv = self.coeff(0).inv()?;
        let n = self.cap + 1;
        let mut out: Vec<PadicInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { self.ctx.one() } else { self.ctx.zero() };
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = &acc - &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(&acc * &c0inv);
        }
        LambdaSeries::from_poly(&LambdaPoly::from_vec(&self.ctx, out), self.cap)
    }
}

impl fmt::Debug for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(X^{}) (mod {}^{})", self.to_poly(), self.cap + 1, self.ctx.p(), self.ctx.precision())
    }
}

/// `F = u * p^mu * g` with `u` a unit and `g` distinguished.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    /// Unit factor, known to precision `K - mu`.
    pub unit: LambdaSeries,
    pub mu: u32,
    pub distinguished: LambdaPoly,
}

impl WeierstrassData {
    pub fn lambda(&self) -> usize {
        self.distinguished.degree().unwrap_or(0)
    }

    /// `u * g`, i.e. `F / p^mu`, up to the cap of the unit, at precision `K - mu`.
    pub fn recombine(&self) -> LambdaPoly {
        let g = LambdaSeries::from_poly(&self.distinguished, self.unit.cap.max(self.lambda())).expect("monic poly within cap");
        self.unit.checked_mul(&g).expect("same context").to_poly()
    }
}

/// `(1+X)^(p^n) - 1`. `cap` bounds the admissible degree.
pub fn omega(ctx: &Ctx, n: u32, cap: Option<usize>) -> Result<LambdaPoly> {
    let deg = ctx.p().checked_pow(n).ok_or(Error::CapExceeded { needed: usize::MAX, cap: cap.unwrap_or(usize::MAX) })?;
    if let Some(c) = cap {
        if deg as usize > c {
            return Err(Error::CapExceeded { needed: deg as usize, cap: c });
        }
    }
    Ok(LambdaPoly::from_zpoly(ctx, &ZPoly::omega(ctx.p(), n)))
}

/// `Phi_n = omega_n / omega_{n-1}` (`Phi_0 = X`).
pub fn phi(ctx: &Ctx, n: u32) -> LambdaPoly {
    LambdaPoly::from_zpoly(ctx, &ZPoly::phi(ctx.p(), n))
}

/// `omega_n / omega_{n0}` as an exact quotient.
pub fn phi_rel(ctx: &Ctx, n: u32, n0: u32) -> Result<LambdaPoly> {
    Ok(LambdaPoly::from_zpoly(ctx, &ZPoly::phi_rel(ctx.p(), n, n0)?))
}

/// `F = q*g + r` with `deg r < deg g` for a monic `g`. The series is divided
/// through its truncation, so `q` has degree at most `cap - deg g`.
pub fn weierstrass_div(f: &LambdaSeries, g: &LambdaPoly) -> Result<(LambdaSeries, LambdaPoly)> {
    let dg = g.degree().ok_or_else(|| Error::BadRange("division by zero".into()))?;
    if dg > f.cap {
        return Err(Error::CapExceeded { needed: dg, cap: f.cap });
    }
    let (q, r) = f.to_poly().div_rem_monic(g)?;
    Ok((LambdaSeries::from_poly(&q, f.cap)?, r))
}

/// Weierstrass preparation of a truncated series.
///
/// `mu` is the least coefficient valuation and `lambda` the first index
/// attaining it. The distinguished factor is `X^lambda - r` where `r` is the
/// remainder of `X^lambda` modulo `F / p^mu`, found by iterative division;
/// each step gains a factor of `p`, so `K - mu + 1` steps suffice.
pub fn weierstrass_prep(f: &LambdaSeries) -> Result<WeierstrassData> {
    let k = f.ctx.precision();
    let (mu, lambda) = min_val(&f.coeffs).ok_or(Error::PrecisionExhausted { precision: k })?;
    let ctx = f.ctx.with_precision(k - mu)?;
    let fp: Vec<PadicInt> = f
        .coeffs
        .iter()
        .map(|c| if c.is_zero() { ctx.zero() } else { PadicInt::from_residue(&ctx, c.shift_down(mu).expect("v >= mu").residue().clone()) })
        .collect();
    let low = &fp[..lambda];
    let high = LambdaSeries { coeffs: fp[lambda..].to_vec(), ctx: ctx.clone(), cap: (ctx.precision() as usize + 2) * lambda.max(1) };
    let uinv = high.inverse()?;

    let iterations = ctx.precision() as usize + 1;
    let work_cap = high.cap;
    let mut cur: Vec<PadicInt> = vec![ctx.zero(); lambda + 1];
    cur[lambda] = ctx.one();
    let mut converged = false;
    for _ in 0..iterations {
        if cur.len() <= lambda || cur[lambda..].iter().all(PadicInt::is_zero) {
            converged = true;
            break;
        }
        let tau: Vec<PadicInt> = cur[lambda..].to_vec();
        let q = mul_trunc(&ctx, &tau, &uinv.coeffs, work_cap);
        let corr = mul_trunc(&ctx, low, &q, work_cap);
        let mut next: Vec<PadicInt> = cur[..lambda].to_vec();
        next.resize(corr.len().max(lambda), ctx.zero());
        for (i, c) in corr.iter().enumerate() {
            next[i] = &next[i] - c;
        }
        cur = next;
    }
    if !converged && !(cur.len() <= lambda || cur[lambda..].iter().all(PadicInt::is_zero)) {
        return Err(Error::ConvergenceFailure { iterations });
    }
    let mut gc: Vec<PadicInt> = (0..lambda).map(|i| -&cur.get(i).cloned().unwrap_or_else(|| ctx.zero())).collect();
    gc.push(ctx.one());
    let g = LambdaPoly::from_vec(&ctx, gc);

    // F/p^mu is a polynomial multiple of g, and the quotient is the unit.
    let fpoly = LambdaPoly::from_vec(&ctx, fp);
    let (u, rem) = fpoly.div_rem_monic(&g)?;
    if !rem.is_zero() {
        return Err(Error::ConvergenceFailure { iterations });
    }
    let unit = LambdaSeries::from_poly(&u, f.cap)?;
    debug_assert!(unit.is_unit());
    Ok(WeierstrassData { unit, mu, distinguished: g })
}

/// `v_p(Res(F, G))` via elimination of the Sylvester matrix with
/// minimal-valuation pivots. Fails with `PrecisionExhausted` when the
/// determinant is zero at the working precision.
pub fn resultant_val(f: &LambdaPoly, g: &LambdaPoly) -> Result<u32> {
    f.check(g)?;
    let ctx = f.ctx.clone();
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::BadRange("resultant of a zero polynomial".into()));
    };
    let size = m + n;
    if size == 0 {
        return Ok(0);
    }
    let mut rows: Vec<Vec<PadicInt>> = Vec::with_capacity(size);
    for (poly, shifts, deg) in [(f, n, m), (g, m, n)] {
        for s in 0..shifts {
            let mut row = vec![ctx.zero(); size];
            for i in 0..=deg {
                row[s + i] = poly.coeff(deg - i);
            }
            rows.push(row);
        }
    }
    let mut total = 0u32;
    let mut live_cols: Vec<usize> = (0..size).collect();
    while !rows.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                if let Valuation::Finite(v) = row[c].val() {
                    if best.is_none_or(|(b, _, _)| v < b) {
                        best = Some((v, ri, ci));
                    }
                }
            }
        }
        let Some((v, ri, ci)) = best else {
            return Err(Error::PrecisionExhausted { precision: ctx.precision() });
        };
        let col = live_cols.remove(ci);
        let prow = rows.swap_remove(ri);
        let unit_inv = prow[col].shift_down(v)?.inv()?;
        for row in rows.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col].shift_down(v)? * &unit_inv;
            for &c in &live_cols {
                if !prow[c].is_zero() {
                    row[c] = &row[c] - &(&factor * &prow[c]);
                }
            }
            row[col] = ctx.zero();
        }
        total += v;
    }
    Ok(total)
}

/// Weierstrass data of an exact polynomial, escalating precision as needed.
pub fn prep_exact(f: &ZPoly, p: u64, policy: &PrecisionPolicy) -> Result<WeierstrassData> {
    if f.is_zero() {
        return Err(Error::BadRange("Weierstrass preparation of zero".into()));
    }
    let cap = f.degree().unwrap_or(0);
    policy.escalate(p, |ctx| weierstrass_prep(&LambdaSeries::from_zpoly(ctx, f, cap)?))
}

/// `v_p(Res(F, G))` of exact polynomials, escalating precision as needed.
pub fn resultant_val_exact(f: &ZPoly, g: &ZPoly, p: u64, policy: &PrecisionPolicy) -> Result<u32> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::BadRange("resultant of a zero polynomial".into()));
    }
    policy.escalate(p, |ctx| resultant_val(&LambdaPoly::from_zpoly(ctx, f), &LambdaPoly::from_zpoly(ctx, g)))
}

/// `(mu, lambda)` read directly from integer coefficients.
pub fn mu_lambda_direct(f: &ZPoly, p: u64) -> Option<(u32, usize)> {
    let ctx = PrimeContext::new(p, 1).ok()?;
    let mu = f.content_valuation(p)?;
    let pm = BigInt::from(p).pow(mu);
    let lambda = f.coeffs().iter().position(|c| !(c / &pm % BigInt::from(ctx.p())).is_zero())?;
    Some((mu, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, k: u32) -> Ctx {
        PrimeContext::new(p, k).unwrap()
    }

    fn zp(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    #[test]
    fn omega_and_caps() {
        let c = ctx(3, 10);
        assert_eq!(omega(&c, 1, None).unwrap().to_zpoly(), zp("X^3+3X^2+3X"));
        assert_eq!(omega(&c, 0, None).unwrap().to_zpoly(), zp("X"));
        assert_eq!(omega(&ctx(5, 10), 1, None).unwrap().to_zpoly(), zp("X^5+5X^4+10X^3+10X^2+5X"));
        assert!(matches!(omega(&c, 3, Some(20)), Err(Error::CapExceeded { needed: 27, cap: 20 })));
        assert_eq!(phi_rel(&c, 1, 0).unwrap().to_zpoly(), zp("X^2+3X+3"));
        assert_eq!(phi_rel(&c, 2, 2).unwrap().to_zpoly(), ZPoly::one());
        assert!(matches!(phi_rel(&c, 0, 1), Err(Error::BadRange(_))));
    }

    #[test]
    fn division_examples() {
        let c = ctx(3, 10);
        let w = LambdaSeries::from_poly(&omega(&c, 1, None).unwrap(), 10).unwrap();
        let (q, r) = weierstrass_div(&w, &phi(&c, 1)).unwrap();
        assert_eq!(q.to_poly().to_zpoly(), zp("X"));
        assert!(r.is_zero());
        let one = LambdaSeries::from_zpoly(&c, &ZPoly::one(), 4).unwrap();
        let (q, r) = weierstrass_div(&one, &LambdaPoly::from_i64s(&c, &[0, 1])).unwrap();
        assert!(q.to_poly().is_zero());
        assert_eq!(r.to_zpoly(), ZPoly::one());
    }

    #[test]
    fn preparation_examples() {
        let c = ctx(3, 12);
        let w = weierstrass_prep(&LambdaSeries::from_zpoly(&c, &zp("6+3X+X^2"), 8).unwrap()).unwrap();
        assert_eq!((w.mu, w.lambda()), (0, 2));
        assert_eq!(w.distinguished.to_zpoly(), zp("X^2+3X+6"));
        assert_eq!(w.unit.to_poly().to_zpoly(), ZPoly::one());

        let w = weierstrass_prep(&LambdaSeries::from_zpoly(&c, &zp("4+X"), 8).unwrap()).unwrap();
        assert_eq!((w.mu, w.lambda()), (0, 0));
        assert_eq!(w.unit.to_poly().to_zpoly(), zp("4+X"));

        let w = weierstrass_prep(&LambdaSeries::from_zpoly(&c, &zp("3(X^2+3X+3)"), 8).unwrap()).unwrap();
        assert_eq!((w.mu, w.lambda()), (1, 2));
        assert_eq!(w.distinguished.to_zpoly(), zp("X^2+3X+3"));
        assert_eq!(w.unit.to_poly().to_zpoly(), ZPoly::one());
        assert_eq!(w.unit.ctx().precision(), 11);
    }

    #[test]
    fn preparation_of_non_distinguished() {
        // 3 + 3X + X^2 + X^3 has lambda = 2 and needs a genuine unit factor.
        let c = ctx(3, 15);
        let f = LambdaSeries::from_zpoly(&c, &zp("3+3X+X^2+X^3"), 10).unwrap();
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.lambda(), 2);
        assert!(w.distinguished.is_distinguished());
        assert_eq!(w.recombine().to_zpoly(), zp("3+3X+X^2+X^3"));
    }

    #[test]
    fn preparation_errors() {
        let c = ctx(3, 3);
        let f = LambdaSeries::from_zpoly(&c, &zp("27+27X"), 4).unwrap();
        assert_eq!(weierstrass_prep(&f).unwrap_err(), Error::PrecisionExhausted { precision: 3 });
        let f = LambdaPoly::from_zpoly(&c, &zp("3+3X+X^5"));
        assert!(matches!(LambdaSeries::from_poly(&f, 3), Err(Error::CapExceeded { .. })));
        assert!(prep_exact(&zp("27+27X"), 3, &PrecisionPolicy::new(2, 64)).is_ok());
    }

    #[test]
    fn resultant_examples() {
        let c = ctx(3, 10);
        let f = LambdaPoly::from_zpoly(&c, &zp("X-3"));
        assert_eq!(resultant_val(&f, &phi(&c, 1)).unwrap(), 1);
        assert_eq!(resultant_val(&LambdaPoly::from_zpoly(&c, &zp("X")), &phi(&c, 1)).unwrap(), 1);
        assert_eq!(resultant_val(&f, &phi(&c, 2)).unwrap(), 1);
        // Phi_1 shares a root with omega_1.
        assert_eq!(resultant_val(&phi(&c, 1), &omega(&c, 1, None).unwrap()).unwrap_err(), Error::PrecisionExhausted { precision: 10 });
    }

    #[test]
    fn resultant_multiplicative_in_second_argument() {
        let p = 3;
        let pol = PrecisionPolicy::default();
        for f in ["X-3", "X^2+3X+6", "9+X^3", "3X+4"] {
            let f = zp(f);
            for n in 1..=3u32 {
                let lhs = resultant_val_exact(&f, &ZPoly::omega(p, n), p, &pol).unwrap();
                let mut rhs = resultant_val_exact(&f, &ZPoly::omega(p, 0), p, &pol).unwrap();
                for k in 1..=n {
                    rhs += resultant_val_exact(&f, &ZPoly::phi(p, k), p, &pol).unwrap();
                }
                assert_eq!(lhs, rhs, "F = {f}, n = {n}");
            }
        }
    }

    /// Product of `F(z)` over the `p^n`-th roots of unity `z != 1`, evaluated
    /// as a norm: `Res(F, Phi_n)` equals `prod F(zeta - 1)`, computed here as
    /// the determinant of multiplication by `F` on `Z[X]/(Phi_n)`.
    fn norm_valuation(f: &ZPoly, p: u64, n: u32) -> u32 {
        let phin = ZPoly::phi(p, n);
        let d = phin.degree().unwrap();
        let mut mat: Vec<Vec<BigInt>> = Vec::new();
        let mut cur = f.rem_monic(&phin).unwrap();
        for _ in 0..d {
            mat.push((0..d).map(|i| cur.coeff(i)).collect());
            cur = (&cur * &ZPoly::x()).rem_monic(&phin).unwrap();
        }
        let det = crate::linalg::determinant(&mat);
        crate::padic::valuation_of_int(&det, p).expect("coprime")
    }

    fn arb_poly() -> impl Strategy<Value = ZPoly> {
        prop::collection::vec(-30i64..30, 1..6).prop_map(|v| ZPoly::from_i64s(&v)).prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn resultant_matches_norm(f in arb_poly(), n in 1u32..3) {
            prop_assume!(f.shares_factor_with_omega(3, n).is_none());
            let r = resultant_val_exact(&f, &ZPoly::phi(3, n), 3, &PrecisionPolicy::default()).unwrap();
            prop_assert_eq!(r, norm_valuation(&f, 3, n));
        }

        #[test]
        fn preparation_recombines(f in arb_poly()) {
            let c = ctx(3, 20);
            let deg = f.degree().unwrap();
            let s = LambdaSeries::from_zpoly(&c, &f, deg).unwrap();
            let w = weierstrass_prep(&s).unwrap();
            prop_assert!(w.distinguished.is_distinguished());
            prop_assert!(w.unit.is_unit());
            let (mu, lambda) = mu_lambda_direct(&f, 3).unwrap();
            prop_assert_eq!((w.mu, w.lambda()), (mu, lambda));
            let k2 = c.with_precision(20 - w.mu).unwrap();
            let target: Vec<BigInt> = f.coeffs().iter().map(|a| a / BigInt::from(3u32).pow(w.mu)).collect();
            prop_assert_eq!(w.recombine(), LambdaPoly::from_zpoly(&k2, &ZPoly::new(target)));
        }

        #[test]
        fn invariants_survive_unit_multiplication(f in arb_poly(), u in prop::collection::vec(-9i64..9, 0..3), c0 in 1i64..3) {
            let mut uc = vec![c0];
            uc.extend(u);
            let unit = ZPoly::from_i64s(&uc);
            let pol = PrecisionPolicy::default();
            let a = prep_exact(&f, 3, &pol).unwrap();
            let b = prep_exact(&(&f * &unit), 3, &pol).unwrap();
            prop_assert_eq!((a.mu, a.lambda()), (b.mu, b.lambda()));
        }

        #[test]
        fn division_identity(f in prop::collection::vec(-40i64..40, 0..7)) {
            let c = ctx(3, 8);
            let f = LambdaSeries::from_zpoly(&c, &ZPoly::from_i64s(&f), 6).unwrap();
            let g = LambdaPoly::from_i64s(&c, &[3, 0, 1]);
            let (q, r) = weierstrass_div(&f, &g).unwrap();
            prop_assert!(r.degree() < Some(2));
            prop_assert_eq!(q.to_poly().checked_mul(&g).unwrap().checked_add(&r).unwrap(), f.to_poly());
        }
    }
}
