//! Exact polynomials over `Z`.
//!
//! Module inputs are kept as exact integer polynomials so that a driver can
//! reduce them again at a larger precision after a saturated valuation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::valuation_of_int;
use crate::serial::Dec;

/// A polynomial with integer coefficients, index `i` holding the
/// coefficient of `X^i`. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        ZPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(v: BigInt) -> Self {
        ZPoly::new(vec![v])
    }

    /// The variable `X`.
    pub fn x() -> Self {
        ZPoly::from_i64s(&[0, 1])
    }

    /// `c * X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        ZPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.c.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(One::is_one)
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn pow(&self, mut e: u64) -> ZPoly {
        let mut base = self.clone();
        let mut acc = ZPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by `X^k`.
    pub fn shift_up(&self, k: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.c.iter().cloned());
        ZPoly { c: v }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    /// `f(X + t)`.
    pub fn taylor_shift(&self, t: &BigInt) -> ZPoly {
        let lin = ZPoly::new(vec![t.clone(), BigInt::one()]);
        self.c.iter().rev().fold(ZPoly::zero(), |acc, a| &(&acc * &lin) + &ZPoly::constant(a.clone()))
    }

    /// Division by a monic polynomial, exact over `Z`.
    pub fn div_rem_monic(&self, d: &ZPoly) -> Result<(ZPoly, ZPoly)> {
        if !d.is_monic() {
            return Err(Error::Unsupported("division requires a monic divisor".into()));
        }
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return Ok((ZPoly::zero(), self.clone()));
        }
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let t = std::mem::take(&mut r[i]);
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c[..dd].iter().enumerate() {
                r[i - dd + j] -= &t * dj;
            }
            q[i - dd] = t;
        }
        r.truncate(dd);
        Ok((ZPoly::new(q), ZPoly::new(r)))
    }

    pub fn rem_monic(&self, d: &ZPoly) -> Result<ZPoly> {
        Ok(self.div_rem_monic(d)?.1)
    }

    /// Whether the monic `d` divides `self` in `Z[X]` (equivalently in `Q[X]`).
    pub fn divisible_by_monic(&self, d: &ZPoly) -> Result<bool> {
        Ok(self.rem_monic(d)?.is_zero())
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lead().is_some_and(Signed::is_negative) {
            g = -g;
        }
        ZPoly::new(self.c.iter().map(|a| a / &g).collect())
    }

    /// `v_p` of the content, the p-power part of the Weierstrass
    /// factorisation. `None` for zero.
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        valuation_of_int(&self.content(), p)
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let (Some(da), Some(dd)) = (self.degree(), d.degree()) else {
            return self.clone();
        };
        if da < dd {
            return self.clone();
        }
        let lc = d.lead().expect("nonzero divisor").clone();
        let mut r = self.c.clone();
        for i in (dd..=da).rev() {
            let t = std::mem::take(&mut r[i]);
            for a in r[..i].iter_mut() {
                *a *= &lc;
            }
            if !t.is_zero() {
                for (j, dj) in d.c[..dd].iter().enumerate() {
                    r[i - dd + j] -= &t * dj;
                }
            }
        }
        r.truncate(dd);
        ZPoly::new(r)
    }

    /// Primitive gcd over `Q[X]`, normalised to positive leading coefficient.
    pub fn gcd_primitive(&self, other: &ZPoly) -> ZPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// `(1+X)^(p^n) - 1`.
    pub fn omega(p: u64, n: u32) -> ZPoly {
        let e = p.pow(n);
        let mut c = Vec::with_capacity(e as usize + 1);
        let mut b = BigInt::one();
        c.push(BigInt::zero());
        for k in 1..=e {
            b = b * BigInt::from(e - k + 1) / BigInt::from(k);
            c.push(b.clone());
        }
        ZPoly::new(c)
    }

    /// `omega(n) / omega(n0)`.
    pub fn phi_rel(p: u64, n: u32, n0: u32) -> Result<ZPoly> {
        if n < n0 {
            return Err(Error::BadRange(format!("phi_rel needs n >= n0, got n = {n}, n0 = {n0}")));
        }
        let (q, r) = ZPoly::omega(p, n).div_rem_monic(&ZPoly::omega(p, n0))?;
        debug_assert!(r.is_zero());
        Ok(q)
    }

    /// `Phi_n = omega(n) / omega(n-1)`; by convention `Phi_0 = X`.
    pub fn phi(p: u64, n: u32) -> ZPoly {
        if n == 0 {
            ZPoly::x()
        } else {
            ZPoly::phi_rel(p, n, n - 1).expect("n >= n - 1")
        }
    }

    /// Largest `k <= n` with `Phi_k | self`, i.e. a witness that
    /// `gcd(self, omega_n) != 1`.
    pub fn shares_factor_with_omega(&self, p: u64, n: u32) -> Option<u32> {
        (0..=n).rev().find(|&k| self.divisible_by_monic(&ZPoly::phi(p, k)).unwrap_or(false))
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.c.len().max(rhs.c.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.c.len().max(rhs.c.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ZPoly {
            type Output = ZPoly;
            fn $m(self, rhs: ZPoly) -> ZPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        -&self
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn number(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<ZPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ZPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'(' | b'X' | b'x') => acc = &acc * &self.factor()?,
                Some(c) if c.is_ascii_digit() => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ZPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?.to_u64().ok_or_else(|| self.err("exponent too large"))?;
            if e > 1 << 20 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ZPoly> {
        match self.peek() {
            Some(b'X' | b'x') => {
                self.pos += 1;
                Ok(ZPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(ZPoly::constant(self.number()?)),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FromStr for ZPoly {
    type Err = Error;

    /// Parses sums and products such as `X^3+3*X+3`, `3(X^2+3X+3)` or `-X+4`.
    fn from_str(s: &str) -> Result<ZPoly> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl Serialize for ZPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Dec> = self.c.iter().cloned().map(Dec).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZPoly {
    /// Accepts either a coefficient array (index = degree) or a string.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Coeffs(Vec<Dec>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(de::Error::custom),
            Repr::Coeffs(c) => Ok(ZPoly::new(c.into_iter().map(|x| x.0).collect())),
        }
    }
}
