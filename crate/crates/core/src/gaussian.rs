//! Exact Gaussian-integer arithmetic and fraction-free determinants.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{DimerError, Result};

/// `re + im * i` with arbitrary-precision components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `self / divisor`, defined only when the remainder is zero.
    pub fn exact_div(&self, divisor: &GaussianInt) -> Result<GaussianInt> {
        let norm = divisor.norm();
        if norm.is_zero() {
            return Err(DimerError::InexactDivision);
        }
        let num = self * &divisor.conj();
        let (re, r1) = num.re.div_rem(&norm);
        let (im, r2) = num.im.div_rem(&norm);
        if !r1.is_zero() || !r2.is_zero() {
            return Err(DimerError::InexactDivision);
        }
        Ok(GaussianInt { re, im })
    }

    /// If `self` is a unit multiple of a nonnegative integer (`±k` or
    /// `±ik`), returns that integer.
    pub fn axis_magnitude(&self) -> Option<BigInt> {
        if self.im.is_zero() {
            Some(self.re.abs())
        } else if self.re.is_zero() {
            Some(self.im.abs())
        } else {
            None
        }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(v: i64) -> Self {
        GaussianInt::new(v, 0)
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl AddAssign<&GaussianInt> for GaussianInt {
    fn add_assign(&mut self, rhs: &GaussianInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        &self - &rhs
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// Dense square matrix of Gaussian integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianMatrix {
    dim: usize,
    entries: Vec<GaussianInt>,
}

impl GaussianMatrix {
    pub fn zeros(dim: usize) -> Self {
        GaussianMatrix {
            dim,
            entries: vec![GaussianInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.set(k, k, GaussianInt::one());
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<GaussianInt>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        GaussianMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianInt {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: GaussianInt) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &GaussianInt) {
        self.entries[row * self.dim + col] += value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.dim {
            self.entries.swap(a * self.dim + c, b * self.dim + c);
        }
    }

    /// Positions where `self` and `other` disagree.
    pub fn differing_entries(&self, other: &GaussianMatrix) -> Vec<(usize, usize)> {
        assert_eq!(self.dim, other.dim);
        let mut out = Vec::new();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if self.get(r, c) != other.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Block matrix `[[0, self], [self^T, 0]]`.
    pub fn bipartite_double(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(2 * d);
        for r in 0..d {
            for c in 0..d {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.set(r, d + c, v.clone());
                    out.set(d + c, r, v.clone());
                }
            }
        }
        out
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
///
/// The pivot for each column is the first nonzero entry at or below the
/// diagonal; a column with no such entry makes the matrix singular. Every
/// division in the elimination is exact over the Gaussian integers, so a
/// failed division is a bug and panics.
pub fn det_exact(matrix: &GaussianMatrix) -> GaussianInt {
    let n = matrix.dim();
    if n == 0 {
        return GaussianInt::one();
    }
    let mut a = matrix.clone();
    let mut negate = false;
    let mut prev = GaussianInt::one();
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
            return GaussianInt::zero();
        };
        if pivot_row != k {
            a.swap_rows(pivot_row, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            let lead = a.get(i, k).clone();
            for j in k + 1..n {
                let value = &(a.get(i, j) * &pivot) - &(&lead * a.get(k, j));
                let value = value
                    .exact_div(&prev)
                    .expect("Bareiss elimination divides exactly");
                a.set(i, j, value);
            }
            a.set(i, k, GaussianInt::zero());
        }
        prev = pivot;
    }
    let det = a.get(n - 1, n - 1).clone();
    if negate {
        -det
    } else {
        det
    }
}

/// One of the four units `1, i, -1, -i` of the Gaussian integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaussianUnit {
    One,
    I,
    MinusOne,
    MinusI,
}

impl GaussianUnit {
    /// `i^k`.
    pub fn i_pow(k: usize) -> Self {
        match k % 4 {
            0 => GaussianUnit::One,
            1 => GaussianUnit::I,
            2 => GaussianUnit::MinusOne,
            _ => GaussianUnit::MinusI,
        }
    }

    fn exponent(self) -> usize {
        match self {
            GaussianUnit::One => 0,
            GaussianUnit::I => 1,
            GaussianUnit::MinusOne => 2,
            GaussianUnit::MinusI => 3,
        }
    }

    pub fn mul(self, other: GaussianUnit) -> Self {
        Self::i_pow(self.exponent() + other.exponent())
    }

    pub fn negate(self) -> Self {
        self.mul(GaussianUnit::MinusOne)
    }

    /// `Some(±1)` for the real units.
    pub fn as_real(self) -> Option<i8> {
        match self {
            GaussianUnit::One => Some(1),
            GaussianUnit::MinusOne => Some(-1),
            _ => None,
        }
    }

    pub fn to_gaussian(self) -> GaussianInt {
        match self {
            GaussianUnit::One => GaussianInt::new(1, 0),
            GaussianUnit::I => GaussianInt::new(0, 1),
            GaussianUnit::MinusOne => GaussianInt::new(-1, 0),
            GaussianUnit::MinusI => GaussianInt::new(0, -1),
        }
    }
}

impl fmt::Display for GaussianUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaussianUnit::One => "+1",
            GaussianUnit::I => "+i",
            GaussianUnit::MinusOne => "-1",
            GaussianUnit::MinusI => "-i",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    /// Cofactor expansion along the first row; test-only oracle.
    fn det_cofactor(m: &GaussianMatrix) -> GaussianInt {
        let n = m.dim();
        if n == 0 {
            return GaussianInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut total = GaussianInt::zero();
        for c in 0..n {
            let minor_rows: Vec<Vec<GaussianInt>> = (1..n)
                .map(|r| (0..n).filter(|&cc| cc != c).map(|cc| m.get(r, cc).clone()).collect())
                .collect();
            let term = m.get(0, c) * &det_cofactor(&GaussianMatrix::from_rows(minor_rows));
            total = if c % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&g(1, 1) * &g(1, -1), g(2, 0));
        assert_eq!(g(2, 0).exact_div(&g(1, 1)).unwrap(), g(1, -1));
        assert_eq!(&g(3, -4) + &GaussianInt::zero(), g(3, -4));
        assert_eq!(g(1, 0).exact_div(&g(1, 1)), Err(DimerError::InexactDivision));
        assert_eq!(g(1, 0).exact_div(&GaussianInt::zero()), Err(DimerError::InexactDivision));
    }

    #[test]
    fn determinant_examples() {
        for d in [1, 3, 7] {
            assert_eq!(det_exact(&GaussianMatrix::identity(d)), GaussianInt::one());
        }
        let m = GaussianMatrix::from_rows(vec![vec![g(0, 0), g(0, 1)], vec![g(0, 1), g(0, 0)]]);
        assert_eq!(det_exact(&m), GaussianInt::one());
        assert_eq!(det_exact(&GaussianMatrix::zeros(3)), GaussianInt::zero());
    }

    #[test]
    fn worked_three_by_two_matrix() {
        // The bipartite block with rows (1, i, 0), (i, 1, i), (0, i, 1).
        let b = GaussianMatrix::from_rows(vec![
            vec![g(1, 0), g(0, 1), g(0, 0)],
            vec![g(0, 1), g(1, 0), g(0, 1)],
            vec![g(0, 0), g(0, 1), g(1, 0)],
        ]);
        assert_eq!(det_exact(&b), g(3, 0));
        // Its 6x6 double has determinant (-1)^3 * 3^2.
        assert_eq!(det_exact(&b.bipartite_double()), g(-9, 0));
        assert_eq!(det_cofactor(&b.bipartite_double()), g(-9, 0));
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianInt> {
        (-6i64..=6, -6i64..=6).prop_map(|(a, b)| g(a, b))
    }

    fn arb_matrix() -> impl Strategy<Value = GaussianMatrix> {
        (1usize..=5).prop_flat_map(|n| {
            // Sparse-ish entries so singular and pivoting cases show up.
            proptest::collection::vec(
                prop_oneof![3 => Just(GaussianInt::zero()), 5 => arb_gauss()],
                n * n,
            )
            .prop_map(move |v| GaussianMatrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect()))
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(m in arb_matrix()) {
            prop_assert_eq!(det_exact(&m), det_cofactor(&m));
        }

        #[test]
        fn transpose_and_row_swap(m in arb_matrix(), a in 0usize..5, b in 0usize..5) {
            let d = det_exact(&m);
            prop_assert_eq!(det_exact(&m.transpose()), d.clone());
            let n = m.dim();
            let (a, b) = (a % n, b % n);
            let mut s = m.clone();
            s.swap_rows(a, b);
            let expected = if a == b { d } else { -d };
            prop_assert_eq!(det_exact(&s), expected);
        }

        #[test]
        fn exact_div_inverts_mul(a in arb_gauss(), b in arb_gauss()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn ring_axioms(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a);
        }
    }
}
