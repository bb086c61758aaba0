//! Arithmetic in `Z/p^K` with explicit precision.
//!
//! Precision lives in a shared [`PrimeContext`]; every [`PadicInt`] carries a
//! handle to its context and operations between elements of different
//! contexts are rejected. A residue of zero is reported with the saturated
//! valuation `>= K`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared handle to a prime context.
pub type Ctx = Arc<PrimeContext>;

/// An odd prime `p` together with a working precision `K`.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    precision: u32,
    modulus: BigUint,
    word_modulus: Option<u64>,
}

impl PartialEq for PrimeContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.precision == other.precision
    }
}

impl Eq for PrimeContext {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u64, precision: u32) -> Result<Ctx> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} is not an odd prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidContext("precision K must be at least 1".into()));
        }
        let modulus = BigUint::from(p).pow(precision);
        let word_modulus = modulus.to_u64().filter(|&m| m < (1u64 << 62));
        Ok(Arc::new(PrimeContext { p, precision, modulus, word_modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent `K` of the modulus `p^K`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `p^K` as a machine word, when it fits comfortably below `2^62`.
    pub fn word_modulus(&self) -> Option<u64> {
        self.word_modulus
    }

    /// The same prime at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Ctx> {
        PrimeContext::new(self.p, precision)
    }

    pub(crate) fn key(&self) -> (u64, u32) {
        (self.p, self.precision)
    }

    pub fn zero(self: &Arc<Self>) -> PadicInt {
        PadicInt { residue: BigUint::zero(), ctx: Arc::clone(self) }
    }

    pub fn one(self: &Arc<Self>) -> PadicInt {
        PadicInt { residue: BigUint::one(), ctx: Arc::clone(self) }
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> PadicInt {
        PadicInt::from_bigint(self, &BigInt::from(v))
    }

    pub fn from_bigint(self: &Arc<Self>, v: &BigInt) -> PadicInt {
        PadicInt::from_bigint(self, v)
    }

    /// `p^e` reduced mod `p^K` (zero once `e >= K`).
    pub fn p_pow(self: &Arc<Self>, e: u32) -> PadicInt {
        if e >= self.precision {
            return self.zero();
        }
        PadicInt { residue: BigUint::from(self.p).pow(e), ctx: Arc::clone(self) }
    }
}

/// A p-adic valuation, possibly saturated at the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// The residue is zero mod `p^K`; the true valuation is at least `K`.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, Valuation::AtLeast(_))
    }

    /// Lower bound on the true valuation.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }

    /// Valuation of a product, saturating at `precision`.
    pub fn saturating_add(self, other: Valuation, precision: u32) -> Valuation {
        let sum = self.lower_bound().saturating_add(other.lower_bound());
        if self.is_saturated() || other.is_saturated() || sum >= precision {
            Valuation::AtLeast(precision)
        } else {
            Valuation::Finite(sum)
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::AtLeast(_)) => Ordering::Less,
            (Valuation::AtLeast(_), Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::AtLeast(a), Valuation::AtLeast(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// `v_p` of a nonzero integer; `None` for zero.
pub fn valuation_of(n: &BigUint, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        m = q;
    }
}

pub fn valuation_of_int(n: &BigInt, p: u64) -> Option<u32> {
    valuation_of(n.magnitude(), p)
}

/// An element of `Z/p^K`.
#[derive(Clone)]
pub struct PadicInt {
    residue: BigUint,
    ctx: Ctx,
}

impl PadicInt {
    pub fn from_bigint(ctx: &Ctx, v: &BigInt) -> Self {
        let m = BigInt::from(ctx.modulus.clone());
        let r = v.mod_floor(&m);
        PadicInt { residue: r.to_biguint().expect("mod_floor is nonnegative"), ctx: Arc::clone(ctx) }
    }

    pub fn from_residue(ctx: &Ctx, residue: BigUint) -> Self {
        let residue = if residue >= ctx.modulus { residue % &ctx.modulus } else { residue };
        PadicInt { residue, ctx: Arc::clone(ctx) }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// Canonical representative in `[0, p^K)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// Representative in `(-p^K/2, p^K/2]`.
    pub fn balanced(&self) -> BigInt {
        let r = BigInt::from(self.residue.clone());
        let m = BigInt::from(self.ctx.modulus.clone());
        if &r + &r > m {
            r - m
        } else {
            r
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.ctx.p).is_zero()
    }

    pub fn val(&self) -> Valuation {
        match valuation_of(&self.residue, self.ctx.p) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.ctx.precision),
        }
    }

    pub fn inv(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NonUnit(self.val()));
        }
        let m = BigInt::from(self.ctx.modulus.clone());
        let a = BigInt::from(self.residue.clone());
        let eg = a.extended_gcd(&m);
        debug_assert!(eg.gcd.is_one());
        Ok(PadicInt::from_bigint(&self.ctx, &eg.x))
    }

    pub fn pow(&self, e: u64) -> PadicInt {
        PadicInt {
            residue: self.residue.modpow(&BigUint::from(e), &self.ctx.modulus),
            ctx: Arc::clone(&self.ctx),
        }
    }

    /// Exact division of the residue by `p^e`. The top `e` digits of the
    /// result are unknown, so it is meaningful only to precision `K - e`.
    pub fn shift_down(&self, e: u32) -> Result<PadicInt> {
        if e == 0 {
            return Ok(self.clone());
        }
        let d = BigUint::from(self.ctx.p).pow(e);
        let (q, r) = self.residue.div_rem(&d);
        if !r.is_zero() {
            return Err(Error::NonUnit(self.val()));
        }
        Ok(PadicInt { residue: q, ctx: Arc::clone(&self.ctx) })
    }

    /// The same residue read at a different (lower or equal) precision.
    pub fn reduce_to(&self, ctx: &Ctx) -> Result<PadicInt> {
        if ctx.p != self.ctx.p || ctx.precision > self.ctx.precision {
            return Err(Error::ContextMismatch { left: self.ctx.key(), right: ctx.key() });
        }
        Ok(PadicInt::from_residue(ctx, self.residue.clone()))
    }

    fn check(&self, other: &PadicInt) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.ctx.key(), right: other.ctx.key() })
        }
    }

    pub fn checked_add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check(other)?;
        let mut r = &self.residue + &other.residue;
        if r >= self.ctx.modulus {
            r -= &self.ctx.modulus;
        }
        Ok(PadicInt { residue: r, ctx: Arc::clone(&self.ctx) })
    }

    pub fn checked_sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check(other)?;
        let r = if self.residue >= other.residue {
            &self.residue - &other.residue
        } else {
            &self.ctx.modulus - &other.residue + &self.residue
        };
        Ok(PadicInt { residue: r, ctx: Arc::clone(&self.ctx) })
    }

    pub fn checked_mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check(other)?;
        if self.residue.is_zero() || other.residue.is_zero() {
            return Ok(self.ctx.zero());
        }
        Ok(PadicInt {
            residue: (&self.residue * &other.residue) % &self.ctx.modulus,
            ctx: Arc::clone(&self.ctx),
        })
    }
}

impl PartialEq for PadicInt {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.residue == other.residue
    }
}

impl Eq for PadicInt {}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.ctx.p, self.ctx.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.balanced())
    }
}

// Operator forms panic on mixed contexts; use the `checked_*` methods to
// handle the mismatch as an error.
impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.checked_add(rhs).expect("PadicInt addition across contexts")
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.checked_sub(rhs).expect("PadicInt subtraction across contexts")
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.checked_mul(rhs).expect("PadicInt multiplication across contexts")
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        if self.residue.is_zero() {
            return self.clone();
        }
        PadicInt { residue: &self.ctx.modulus - &self.residue, ctx: Arc::clone(&self.ctx) }
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        &self + &rhs
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        &self - &rhs
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        &self * &rhs
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

/// Precision ladder used when a computation reports a saturated
/// valuation: start at `start` and double up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start: 8, max: 1024 }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, max: u32) -> Self {
        PrecisionPolicy { start: start.max(1), max: max.max(start.max(1)) }
    }

    /// `start, 2*start, 4*start, ...` up to `max`.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let max = self.max;
        std::iter::successors(Some(self.start.max(1)), |&k| k.checked_mul(2)).take_while(move |&k| k <= max)
    }

    /// Run `f` at increasing precision until it stops reporting
    /// `PrecisionExhausted`.
    pub fn escalate<T>(&self, p: u64, mut f: impl FnMut(&Ctx) -> Result<T>) -> Result<T> {
        let mut last = Error::PrecisionExhausted { precision: self.start };
        for k in self.ladder() {
            let ctx = PrimeContext::new(p, k)?;
            match f(&ctx) {
                Err(e @ Error::PrecisionExhausted { .. }) => last = e,
                other => return other,
            }
        }
        Err(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, k: u32) -> Ctx {
        PrimeContext::new(p, k).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(3, 5);
        assert_eq!(c.from_i64(18).val(), Valuation::Finite(2));
        assert_eq!(c.from_i64(0).val(), Valuation::AtLeast(5));
        assert_eq!(c.from_i64(0).val().to_string(), ">=5");
        assert_eq!(ctx(5, 4).from_i64(7).val(), Valuation::Finite(0));
    }

    #[test]
    fn inverse_examples() {
        let c = ctx(3, 2);
        assert_eq!(c.from_i64(2).inv().unwrap(), c.from_i64(5));
        assert_eq!(ctx(3, 1).from_i64(1).inv().unwrap(), ctx(3, 1).one());
        assert_eq!(c.from_i64(3).inv(), Err(Error::NonUnit(Valuation::Finite(1))));
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(PrimeContext::new(2, 4).is_err());
        assert!(PrimeContext::new(9, 4).is_err());
        assert!(PrimeContext::new(3, 0).is_err());
    }

    #[test]
    fn mixed_precision_is_rejected() {
        let a = ctx(3, 4).from_i64(2);
        let b = ctx(3, 5).from_i64(2);
        assert!(matches!(a.checked_mul(&b), Err(Error::ContextMismatch { .. })));
        assert!(matches!(a.checked_add(&ctx(5, 4).one()), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn ladder_doubles() {
        let l: Vec<u32> = PrecisionPolicy::new(5, 40).ladder().collect();
        assert_eq!(l, vec![5, 10, 20, 40]);
        let r = PrecisionPolicy::new(2, 64).escalate(3, |c| {
            if c.precision() < 16 {
                Err(Error::PrecisionExhausted { precision: c.precision() })
            } else {
                Ok(c.precision())
            }
        });
        assert_eq!(r, Ok(16));
    }

    #[test]
    fn balanced_representatives() {
        let c = ctx(3, 3);
        assert_eq!(c.from_i64(-3).balanced(), BigInt::from(-3));
        assert_eq!(c.from_i64(13).balanced(), BigInt::from(13));
        assert_eq!(c.from_i64(14).balanced(), BigInt::from(-13));
    }

    proptest! {
        #[test]
        fn valuation_is_saturating_additive(a in -5000i64..5000, b in -5000i64..5000, p in prop::sample::select(vec![3u64, 5, 7])) {
            let c = ctx(p, 6);
            let (x, y) = (c.from_i64(a), c.from_i64(b));
            prop_assert_eq!((&x * &y).val(), x.val().saturating_add(y.val(), 6));
        }

        #[test]
        fn ring_axioms_hold(a in any::<i64>(), b in any::<i64>(), c0 in any::<i64>()) {
            let c = ctx(5, 9);
            let (x, y, z) = (c.from_i64(a), c.from_i64(b), c.from_i64(c0));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            prop_assert_eq!(&x + &(-&x), c.zero());
        }

        #[test]
        fn inverse_is_involutive(a in any::<i64>()) {
            let c = ctx(3, 12);
            let x = c.from_i64(a);
            prop_assume!(x.is_unit());
            let xi = x.inv().unwrap();
            prop_assert_eq!(&x * &xi, c.one());
            prop_assert_eq!(xi.inv().unwrap(), x);
        }
    }
}
