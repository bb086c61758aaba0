//! Exact integer fitting of growth laws.
//!
//! Every fit works with integer arithmetic on the table entries. Fitted
//! integers come either from solving a small linear system exactly or from
//! rounding an exact rational (to nearest, ties toward zero) and requiring
//! the rounding to agree on the last two points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serial::{dec, dec_opt, Dec};

/// Which index varies along a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// `m` fixed, `n` varies.
    N,
    /// `n` fixed, `m` varies.
    M,
    /// `n = m`.
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPoint {
    #[serde(with = "dec")]
    pub n: u32,
    #[serde(with = "dec")]
    pub m: u32,
    #[serde(with = "dec")]
    pub e: i128,
}

/// A sequence of exponents `e_{n,m}` along one axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    #[serde(with = "dec")]
    pub p: u64,
    pub axis: Axis,
    pub points: Vec<GrowthPoint>,
}

impl GrowthTable {
    pub fn new(p: u64, axis: Axis, points: Vec<GrowthPoint>) -> Result<Self> {
        let t = GrowthTable { p, axis, points };
        t.validate()?;
        Ok(t)
    }

    /// Points `start, start+1, ...` along `axis`, the other index zero (or
    /// equal, on the diagonal).
    pub fn from_sequence(p: u64, axis: Axis, start: u32, e: &[i128]) -> Result<Self> {
        let points = e
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let k = start + i as u32;
                match axis {
                    Axis::N => GrowthPoint { n: k, m: 0, e },
                    Axis::M => GrowthPoint { n: 0, m: k, e },
                    Axis::Diagonal => GrowthPoint { n: k, m: k, e },
                }
            })
            .collect();
        GrowthTable::new(p, axis, points)
    }

    pub fn index(&self, pt: &GrowthPoint) -> u32 {
        match self.axis {
            Axis::N | Axis::Diagonal => pt.n,
            Axis::M => pt.m,
        }
    }

    pub fn indices(&self) -> Vec<u32> {
        self.points.iter().map(|pt| self.index(pt)).collect()
    }

    pub fn values(&self) -> Vec<i128> {
        self.points.iter().map(|pt| pt.e).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::padic::is_prime(self.p) || self.p < 3 {
            return Err(Error::InvalidContext(format!("p = {} is not an odd prime", self.p)));
        }
        for pt in &self.points {
            if pt.e < 0 {
                return Err(Error::Parse(format!("negative exponent e = {} at (n={}, m={})", pt.e, pt.n, pt.m)));
            }
            if self.axis == Axis::Diagonal && pt.n != pt.m {
                return Err(Error::Parse(format!("diagonal table has n = {} != m = {}", pt.n, pt.m)));
            }
        }
        for w in self.points.windows(2) {
            if self.index(&w[1]) <= self.index(&w[0]) {
                return Err(Error::Parse("table indices must be strictly increasing".into()));
            }
            let fixed = |pt: &GrowthPoint| match self.axis {
                Axis::N => Some(pt.m),
                Axis::M => Some(pt.n),
                Axis::Diagonal => None,
            };
            if fixed(&w[0]) != fixed(&w[1]) {
                return Err(Error::Parse("the fixed index changes along the table".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "dec")]
    pub start: u32,
    #[serde(with = "dec")]
    pub end: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    #[serde(with = "dec")]
    pub index: u32,
    #[serde(with = "dec")]
    pub r: i128,
}

/// Fitted integers of one growth model, with the residual certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    #[serde(with = "dec")]
    pub p: u64,
    #[serde(with = "dec")]
    pub d: u32,
    pub params: BTreeMap<String, Dec>,
    pub window: Window,
    pub residuals: Vec<Residual>,
    /// Least constant `C` that bounds the residuals on the window, in the
    /// model's error scale.
    #[serde(with = "dec_opt")]
    pub witnessed_c: Option<i128>,
    pub notes: Vec<String>,
}

impl FitReport {
    pub fn param(&self, name: &str) -> Option<i128> {
        self.params.get(name).and_then(|d| d.0.to_i128())
    }
}

fn big(v: i128) -> BigInt {
    BigInt::from(v)
}

fn pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128().ok_or_else(|| Error::Unsupported(format!("value {v} overflows 128 bits")))
}

/// Nearest integer to `num/den` (`den > 0`), ties toward zero.
pub fn round_ties_to_zero(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(den.is_positive(), "denominator must be positive");
    let (q, r) = num.div_mod_floor(den);
    let twice: BigInt = &r * 2u32;
    match twice.cmp(den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_negative() {
                q + 1
            } else {
                q
            }
        }
    }
}

/// Smallest integer `>= num/den` (`den > 0`).
fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

fn params(kv: &[(&str, &BigInt)]) -> BTreeMap<String, Dec> {
    kv.iter().map(|(k, v)| (k.to_string(), Dec((*v).clone()))).collect()
}

/// Solve `mu*p^k + lambda*k + nu = e` through three points exactly.
fn solve_iwasawa(p: u64, pts: &[(u32, i128)]) -> Option<(BigInt, BigInt, BigInt)> {
    let rows: Vec<[BigInt; 3]> = pts.iter().map(|&(k, _)| [pow(p, k), BigInt::from(k), BigInt::from(1)]).collect();
    let rhs: Vec<BigInt> = pts.iter().map(|&(_, e)| big(e)).collect();
    let det3 = |m: &[[BigInt; 3]]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det3(&rows);
    if d.is_zero() {
        return None;
    }
    let mut sol = Vec::with_capacity(3);
    for c in 0..3 {
        let mut m = rows.clone();
        for (r, row) in m.iter_mut().enumerate() {
            row[c] = rhs[r].clone();
        }
        let (q, rem) = det3(&m).div_rem(&d);
        if !rem.is_zero() {
            return None;
        }
        sol.push(q);
    }
    let nu = sol.pop()?;
    let lambda = sol.pop()?;
    let mu = sol.pop()?;
    Some((mu, lambda, nu))
}

/// Fit `e_n = mu*p^n + lambda*n + nu` on the longest suffix of the table
/// that the law reproduces exactly.
pub fn fit_iwasawa(t: &GrowthTable) -> Result<FitReport> {
    t.validate()?;
    let pts: Vec<(u32, i128)> = t.points.iter().map(|pt| (t.index(pt), pt.e)).collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: pts.len() });
    }
    let p = t.p;
    for s in 0..=pts.len() - 3 {
        let Some((mu, lambda, nu)) = solve_iwasawa(p, &pts[s..s + 3]) else {
            continue;
        };
        if mu.is_negative() || lambda.is_negative() {
            continue;
        }
        let model = |k: u32| &mu * pow(p, k) + &lambda * BigInt::from(k) + &nu;
        if pts[s..].iter().all(|&(k, e)| model(k) == big(e)) {
            let residuals = pts.iter().map(|&(k, e)| Ok(Residual { index: k, r: to_i128(&(big(e) - model(k)))? })).collect::<Result<Vec<_>>>()?;
            let n0 = BigInt::from(pts[s].0);
            return Ok(FitReport {
                model: "iwasawa".into(),
                p,
                d: 2,
                params: params(&[("mu", &mu), ("lambda", &lambda), ("nu", &nu), ("n0", &n0)]),
                window: Window { start: pts[s].0, end: pts[pts.len() - 1].0 },
                residuals,
                witnessed_c: Some(0),
                notes: vec!["exact on the window; n0 is the first index of the longest exact suffix".into()],
            });
        }
    }
    Err(Error::NoStabilization("no suffix of length >= 3 is reproduced exactly by mu*p^n + lambda*n + nu".into()))
}

fn agree_last_two(vals: &[BigInt], what: &str) -> Result<BigInt> {
    let n = vals.len();
    if vals[n - 1] != vals[n - 2] {
        return Err(Error::NoStabilization(format!("{what} rounds to {} and then {} on the last two points", vals[n - 2], vals[n - 1])));
    }
    Ok(vals[n - 1].clone())
}

/// Fit `e_m = mu_H p^((d-1)m) + lambda_H m p^((d-2)m) + O(p^((d-2)m))`.
pub fn fit_cm_law(t: &GrowthTable, d: u32) -> Result<FitReport> {
    t.validate()?;
    if d < 2 {
        return Err(Error::BadRange(format!("dimension d = {d} must be at least 2")));
    }
    let pts: Vec<(u32, i128)> = t.points.iter().map(|pt| (t.index(pt), pt.e)).collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: pts.len() });
    }
    let p = t.p;
    let tail = &pts[pts.len() - 2..];
    if tail[0].0 == 0 {
        return Err(Error::InsufficientData { needed: 3, got: pts.len() });
    }
    let mus: Vec<BigInt> = tail.iter().map(|&(m, e)| round_ties_to_zero(&big(e), &pow(p, (d - 1) * m))).collect();
    let mu = agree_last_two(&mus, "mu_H")?;
    let lams: Vec<BigInt> =
        tail.iter().map(|&(m, e)| round_ties_to_zero(&(big(e) - &mu * pow(p, (d - 1) * m)), &(BigInt::from(m) * pow(p, (d - 2) * m)))).collect();
    let lambda = agree_last_two(&lams, "lambda_H")?;
    let mut residuals = Vec::new();
    let mut c = BigInt::zero();
    for &(m, e) in &pts {
        let r = big(e) - &mu * pow(p, (d - 1) * m) - &lambda * BigInt::from(m) * pow(p, (d - 2) * m);
        c = c.max(ceil_div(&r.abs(), &pow(p, (d - 2) * m)));
        residuals.push(Residual { index: m, r: to_i128(&r)? });
    }
    Ok(FitReport {
        model: "cm".into(),
        p,
        d,
        params: params(&[("mu_h", &mu), ("lambda_h", &lambda)]),
        window: Window { start: pts[0].0, end: pts[pts.len() - 1].0 },
        residuals,
        witnessed_c: Some(to_i128(&c)?),
        notes: vec![format!("|r_m| <= C * p^({}m) on the window", d - 2)],
    })
}

/// Diagonal growth models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalModel {
    /// `e_{n,n} = tau n p^((d-1)n) + O(p^((d-1)n))`.
    Main,
    /// Check `e <= mu_G p^(dn) + tau n p^((d-1)n) + C p^((d-1)n)`, reporting
    /// the least `C`; `c_max` turns the check into a hard bound.
    Upper { mu_g: i128, tau: i128, c_max: Option<i128> },
    /// `e = rho n p^(dn) + mu p^(dn) + O(n p^((d-1)n))`.
    Perbet,
}

pub fn fit_diagonal(t: &GrowthTable, model: &DiagonalModel, d: u32) -> Result<FitReport> {
    t.validate()?;
    if d < 2 {
        return Err(Error::BadRange(format!("dimension d = {d} must be at least 2")));
    }
    let p = t.p;
    let pts: Vec<(u32, i128)> = t.points.iter().map(|pt| (t.index(pt), pt.e)).collect();
    let window = |pts: &[(u32, i128)]| Window { start: pts[0].0, end: pts[pts.len() - 1].0 };
    match model {
        DiagonalModel::Main => {
            let pos: Vec<(u32, i128)> = pts.iter().copied().filter(|&(n, _)| n > 0).collect();
            if pos.len() < 2 || pts.len() < 3 {
                return Err(Error::InsufficientData { needed: 3, got: pts.len() });
            }
            let taus: Vec<BigInt> =
                pos[pos.len() - 2..].iter().map(|&(n, e)| round_ties_to_zero(&big(e), &(BigInt::from(n) * pow(p, (d - 1) * n)))).collect();
            let tau = agree_last_two(&taus, "tau")?;
            let mut residuals = Vec::new();
            let mut c = BigInt::zero();
            for &(n, e) in &pts {
                let r = big(e) - &tau * BigInt::from(n) * pow(p, (d - 1) * n);
                c = c.max(ceil_div(&r.abs(), &pow(p, (d - 1) * n)));
                residuals.push(Residual { index: n, r: to_i128(&r)? });
            }
            Ok(FitReport {
                model: "main".into(),
                p,
                d,
                params: params(&[("tau", &tau)]),
                window: window(&pts),
                residuals,
                witnessed_c: Some(to_i128(&c)?),
                notes: vec![format!("|r_n| <= C * p^({}n) on the window", d - 1)],
            })
        }
        DiagonalModel::Upper { mu_g, tau, c_max } => {
            if pts.is_empty() {
                return Err(Error::InsufficientData { needed: 1, got: 0 });
            }
            let mut residuals = Vec::new();
            let mut c = BigInt::zero();
            for &(n, e) in &pts {
                let r = big(e) - big(*mu_g) * pow(p, d * n) - big(*tau) * BigInt::from(n) * pow(p, (d - 1) * n);
                let need = ceil_div(&r, &pow(p, (d - 1) * n));
                if let Some(cm) = c_max {
                    if need > big(*cm) {
                        return Err(Error::BoundViolated { n: u64::from(n), witnessed: to_i128(&need)?, allowed: *cm });
                    }
                }
                c = c.max(need);
                residuals.push(Residual { index: n, r: to_i128(&r)? });
            }
            let mut kv = vec![("mu_g", big(*mu_g)), ("tau", big(*tau)), ("c", c.clone())];
            if let Some(cm) = c_max {
                kv.push(("c_max", big(*cm)));
            }
            Ok(FitReport {
                model: "upper".into(),
                p,
                d,
                params: kv.into_iter().map(|(k, v)| (k.to_string(), Dec(v))).collect(),
                window: window(&pts),
                residuals,
                witnessed_c: Some(to_i128(&c)?),
                notes: vec!["least C >= 0 with e <= mu_G p^(dn) + tau n p^((d-1)n) + C p^((d-1)n)".into()],
            })
        }
        DiagonalModel::Perbet => {
            if pts.len() < 3 {
                return Err(Error::InsufficientData { needed: 3, got: pts.len() });
            }
            let k = pts.len();
            let slope = |i: usize| {
                let (n1, e1) = pts[i];
                let (n0, e0) = pts[i - 1];
                // q_n1 - q_n0 over (n1 - n0), with q_n = e_n / p^(dn).
                let num = big(e1) - big(e0) * pow(p, d * (n1 - n0));
                round_ties_to_zero(&num, &(pow(p, d * n1) * BigInt::from(n1 - n0)))
            };
            let rho = agree_last_two(&[slope(k - 2), slope(k - 1)], "rho")?;
            let icpt = |i: usize| {
                let (n, e) = pts[i];
                round_ties_to_zero(&(big(e) - &rho * BigInt::from(n) * pow(p, d * n)), &pow(p, d * n))
            };
            let mu = agree_last_two(&[icpt(k - 2), icpt(k - 1)], "mu")?;
            let mut residuals = Vec::new();
            let mut c = BigInt::zero();
            for &(n, e) in &pts {
                let r = big(e) - &rho * BigInt::from(n) * pow(p, d * n) - &mu * pow(p, d * n);
                if n > 0 {
                    c = c.max(ceil_div(&r.abs(), &(BigInt::from(n) * pow(p, (d - 1) * n))));
                }
                residuals.push(Residual { index: n, r: to_i128(&r)? });
            }
            Ok(FitReport {
                model: "perbet".into(),
                p,
                d,
                params: params(&[("rho", &rho), ("mu", &mu)]),
                window: window(&pts),
                residuals,
                witnessed_c: Some(to_i128(&c)?),
                notes: vec![format!("|r_n| <= C * n p^({}n) for n >= 1", d - 1)],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(p: u64, axis: Axis, start: u32, f: impl Fn(u32) -> i128, len: u32) -> GrowthTable {
        let e: Vec<i128> = (start..start + len).map(f).collect();
        GrowthTable::from_sequence(p, axis, start, &e).unwrap()
    }

    #[test]
    fn rounding_rule() {
        let r = |a: i64, b: i64| round_ties_to_zero(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(r(3, 2), BigInt::from(1));
        assert_eq!(r(-1, 2), BigInt::from(0));
        assert_eq!(r(-3, 2), BigInt::from(-1));
        assert_eq!(r(5, 3), BigInt::from(2));
        assert_eq!(r(-5, 3), BigInt::from(-2));
        assert_eq!(r(4, 3), BigInt::from(1));
    }

    #[test]
    fn iwasawa_examples() {
        let f = fit_iwasawa(&seq(3, Axis::N, 0, |n| n as i128 + 1, 5)).unwrap();
        assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(0), Some(1), Some(1)));
        assert_eq!(f.window.start, 0);
        let f = fit_iwasawa(&seq(3, Axis::N, 0, |n| 2 * 3i128.pow(n), 5)).unwrap();
        assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(2), Some(0), Some(0)));
        let f = fit_iwasawa(&seq(3, Axis::N, 0, |n| 3i128.pow(n) + n as i128 + 7, 6)).unwrap();
        assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(1), Some(1), Some(7)));
    }

    #[test]
    fn iwasawa_window_skips_irregular_start() {
        let mut e: Vec<i128> = (0..7).map(|n| 3i128.pow(n) + 2 * n as i128 + 5).collect();
        e[0] = 40;
        e[1] = 2;
        let f = fit_iwasawa(&GrowthTable::from_sequence(3, Axis::N, 0, &e).unwrap()).unwrap();
        assert_eq!(f.window.start, 2);
        assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(1), Some(2), Some(5)));
        assert_eq!(f.residuals[0].r, 40 - 6);
    }

    #[test]
    fn iwasawa_errors() {
        assert!(matches!(fit_iwasawa(&seq(3, Axis::N, 0, |n| n as i128, 3)), Err(Error::InsufficientData { .. })));
        let e = [0i128, 7, 1, 30, 2];
        assert!(matches!(fit_iwasawa(&GrowthTable::from_sequence(3, Axis::N, 0, &e).unwrap()), Err(Error::NoStabilization(_))));
    }

    #[test]
    fn cm_examples() {
        let f = fit_cm_law(&seq(3, Axis::M, 0, |m| 3i128.pow(2 * m), 4), 3).unwrap();
        assert_eq!((f.param("mu_h"), f.param("lambda_h"), f.witnessed_c), (Some(1), Some(0), Some(0)));
        let f = fit_cm_law(&seq(3, Axis::M, 0, |m| 3i128.pow(2 * m) - 3i128.pow(m), 4), 3).unwrap();
        assert_eq!((f.param("mu_h"), f.param("lambda_h"), f.witnessed_c), (Some(1), Some(0), Some(1)));
        let f = fit_cm_law(&seq(3, Axis::M, 0, |m| 2 * 3i128.pow(m) + 3 * m as i128, 5), 2).unwrap();
        assert_eq!((f.param("mu_h"), f.param("lambda_h")), (Some(2), Some(3)));
    }

    #[test]
    fn diagonal_examples() {
        let main = fit_diagonal(&seq(3, Axis::Diagonal, 1, |n| (n as i128 + 1) * 3i128.pow(n), 3), &DiagonalModel::Main, 2).unwrap();
        assert_eq!((main.param("tau"), main.witnessed_c), (Some(1), Some(1)));
        let tilde = seq(3, Axis::Diagonal, 1, |n| n as i128 * 3i128.pow(n), 3);
        let up = fit_diagonal(&tilde, &DiagonalModel::Upper { mu_g: 0, tau: 1, c_max: Some(0) }, 2).unwrap();
        assert_eq!(up.witnessed_c, Some(0));
        let pb = fit_diagonal(&seq(3, Axis::Diagonal, 1, |n| 2 * 3i128.pow(2 * n), 3), &DiagonalModel::Perbet, 2).unwrap();
        assert_eq!((pb.param("rho"), pb.param("mu")), (Some(0), Some(2)));
    }

    #[test]
    fn upper_bound_violation_names_n() {
        let t = seq(3, Axis::Diagonal, 1, |n| (n as i128 + 1) * 3i128.pow(n) + if n == 2 { 40 } else { 0 }, 3);
        let err = fit_diagonal(&t, &DiagonalModel::Upper { mu_g: 0, tau: 1, c_max: Some(1) }, 2).unwrap_err();
        assert_eq!(err, Error::BoundViolated { n: 2, witnessed: 6, allowed: 1 });
    }

    #[test]
    fn table_validation() {
        assert!(GrowthTable::from_sequence(3, Axis::N, 0, &[1, -1]).is_err());
        let pts = vec![GrowthPoint { n: 2, m: 0, e: 1 }, GrowthPoint { n: 1, m: 0, e: 1 }];
        assert!(GrowthTable::new(3, Axis::N, pts).is_err());
        assert!(GrowthTable::from_sequence(4, Axis::N, 0, &[1]).is_err());
    }

    #[test]
    fn report_json_uses_strings() {
        let f = fit_iwasawa(&seq(3, Axis::N, 0, |n| n as i128 + 1, 5)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["params"]["lambda"], "1");
        assert_eq!(v["window"]["start"], "0");
        assert_eq!(serde_json::from_value::<FitReport>(v).unwrap(), f);
    }

    proptest! {
        #[test]
        fn iwasawa_round_trip(mu in 0i128..4, lambda in 0i128..6, nu in -5i128..20, p in prop::sample::select(vec![3u64, 5, 7])) {
            let pi = p as i128;
            let f = |n: u32| mu * pi.pow(n) + lambda * n as i128 + nu;
            prop_assume!((0..6).all(|n| f(n) >= 0));
            let t = seq(p, Axis::N, 0, f, 6);
            let f = fit_iwasawa(&t).unwrap();
            prop_assert_eq!((f.param("mu"), f.param("lambda"), f.param("nu")), (Some(mu), Some(lambda), Some(nu)));
            // Dropping the first point inside the window changes nothing.
            let mut short = t.clone();
            short.points.remove(0);
            let g = fit_iwasawa(&short).unwrap();
            prop_assert_eq!(g.params, f.params.clone().into_iter().map(|(k, v)| if k == "n0" { (k, Dec::from(1)) } else { (k, v) }).collect::<BTreeMap<_, _>>());
        }

        #[test]
        fn cm_round_trip(mu in 0i128..4, lambda in -3i128..4, d in 2u32..4) {
            let p = 3i128;
            let f = |m: u32| mu * p.pow((d - 1) * m) + lambda * m as i128 * p.pow((d - 2) * m) + 1;
            prop_assume!((0..6).all(|m| f(m) >= 0));
            let t = seq(3, Axis::M, 0, f, 6);
            let f = fit_cm_law(&t, d).unwrap();
            prop_assert_eq!((f.param("mu_h"), f.param("lambda_h")), (Some(mu), Some(lambda)));
        }
    }
}
