//! Division-free exact linear algebra over commutative rings.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::zpoly::ZPoly;

/// The commutative ring operations Berkowitz needs.
pub trait CRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl CRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl CRing for ZPoly {
    fn zero() -> Self {
        ZPoly::zero()
    }
    fn one() -> Self {
        ZPoly::one()
    }
    fn is_zero(&self) -> bool {
        ZPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

pub type Matrix<R> = Vec<Vec<R>>;

/// Coefficients of `det(Y*I - A)`, highest degree first (length `n + 1`),
/// by Berkowitz's algorithm.
pub fn berkowitz<R: CRing>(a: &Matrix<R>) -> Vec<R> {
    let n = a.len();
    if n == 0 {
        return vec![R::one()];
    }
    let mut v = vec![R::one(), a[0][0].neg()];
    for r in 1..n {
        // `a[r][r]` joins the leading r x r block `m`, with row part `row`
        // and column part `col`.
        let row: Vec<R> = a[r][..r].to_vec();
        let mut col: Vec<R> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(R::one());
        t.push(a[r][r].neg());
        for _ in 0..r {
            let dot = row.iter().zip(&col).fold(R::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(dot.neg());
            col = (0..r)
                .map(|i| (0..r).fold(R::zero(), |acc, j| if a[i][j].is_zero() || col[j].is_zero() { acc } else { acc.add(&a[i][j].mul(&col[j])) }))
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = R::zero();
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                if i - j < t.len() && !vj.is_zero() {
                    acc = acc.add(&t[i - j].mul(vj));
                }
            }
            next.push(acc);
        }
        v = next;
    }
    v
}

pub fn determinant<R: CRing>(a: &Matrix<R>) -> R {
    let n = a.len();
    let cp = berkowitz(a);
    let last = cp[n].clone();
    if n % 2 == 1 {
        last.neg()
    } else {
        last
    }
}

/// Characteristic polynomial `det(Y*I - A)` of an integer matrix as a [`ZPoly`] in `Y`.
pub fn char_poly(a: &Matrix<BigInt>) -> ZPoly {
    let mut c = berkowitz(a);
    c.reverse();
    ZPoly::new(c)
}

/// Eliminate relations of a polynomial presentation that carry a constant
/// `+-1` entry: that generator is expressed through the others, so its row
/// and column can be dropped. Zero rows are removed. Exact over `Z[X]`.
pub fn eliminate_unit_pivots(mut rows: Matrix<ZPoly>, mut cols: usize) -> (Matrix<ZPoly>, usize) {
    loop {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let pivot = rows.iter().enumerate().find_map(|(i, r)| {
            r.iter().position(|x| x.degree() == Some(0) && x.coeff(0).abs().is_one()).map(|j| (i, j))
        });
        let Some((pi, pj)) = pivot else {
            return (rows, cols);
        };
        let prow = rows.swap_remove(pi);
        let sign = prow[pj].coeff(0);
        for r in rows.iter_mut() {
            if r[pj].is_zero() {
                continue;
            }
            // r -= (r[pj] / sign) * prow, with sign = +-1.
            let f = r[pj].scale(&sign);
            for (x, y) in r.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            debug_assert!(r[pj].is_zero());
        }
        for r in rows.iter_mut() {
            r.remove(pj);
        }
        cols -= 1;
    }
}

/// Number of `k`-subsets of an `n`-set, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Visit every increasing `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_matrix(v: &[&[i64]]) -> Matrix<BigInt> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Cofactor expansion, for small matrices only.
    fn det_naive(a: &Matrix<BigInt>) -> BigInt {
        let n = a.len();
        if n == 0 {
            return <BigInt as One>::one();
        }
        let mut acc = <BigInt as Zero>::zero();
        for j in 0..n {
            let minor: Matrix<BigInt> = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &a[0][j] * det_naive(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn char_poly_small() {
        let a = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(char_poly(&a), ZPoly::from_i64s(&[-2, -5, 1]));
        assert_eq!(char_poly(&int_matrix(&[&[4]])), ZPoly::from_i64s(&[-4, 1]));
        assert_eq!(determinant(&int_matrix(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), BigInt::from(6));
    }

    #[test]
    fn polynomial_determinant() {
        let x = ZPoly::x();
        let m = vec![vec![x.clone(), ZPoly::from_i64s(&[3])], vec![ZPoly::one(), x.clone()]];
        assert_eq!(determinant(&m), ZPoly::from_i64s(&[-3, 0, 1]));
    }

    #[test]
    fn unit_pivot_elimination() {
        // <e1, e2 | e1 - X e2, (X - 3) e1> is Lambda/(X(X - 3)).
        let rows = vec![
            vec![ZPoly::one(), -ZPoly::x()],
            vec![ZPoly::from_i64s(&[-3, 1]), ZPoly::zero()],
        ];
        let (r, c) = eliminate_unit_pivots(rows, 2);
        assert_eq!(c, 1);
        assert_eq!(r, vec![vec![ZPoly::from_i64s(&[0, -3, 1])]]);
    }

    #[test]
    fn subsets_enumerate() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len() as u128, binomial(4, 2));
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }

    proptest! {
        #[test]
        fn berkowitz_matches_cofactors(v in prop::collection::vec(-6i64..6, 16)) {
            let a: Matrix<BigInt> = v.chunks(4).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            prop_assert_eq!(determinant(&a), det_naive(&a));
            let cp = char_poly(&a);
            prop_assert_eq!(cp.degree(), Some(4));
            prop_assert_eq!(cp.coeff(3), -(0..4).map(|i| a[i][i].clone()).sum::<BigInt>());
        }
    }
}
