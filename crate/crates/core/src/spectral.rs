//! Counting by eigenvalue products.
//!
//! The weighted adjacency matrix of an `m x n` grid is `H (x) I + I (x) iV`
//! where `H` and `V` are the path (or cycle) matrices along the rows and
//! columns, so its eigenvalues are the sums `mu + i nu`. Pairing each
//! eigenvalue with its negative turns the product into a real product of
//! `mu^2 + nu^2` terms that equals the squared count. Everything is
//! evaluated in [`HpReal`] and then rounded; a value that does not land
//! close to an integer is an error, never a silent answer.

use num_bigint::{BigInt, Sign};
use rayon::prelude::*;

use crate::error::{DimerError, Result};
use crate::grid::GridSpec;
use crate::hp::{HpComplex, HpReal};
use crate::kasteleyn::{check_torus_mode, combination_halves, SignClass, TorusMode, CALIBRATED_SIGNS};
use crate::BigCount;

/// Rounded values must lie within `2^-ROUNDING_BITS` of an integer.
pub const ROUNDING_BITS: i64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    /// `2 cos(pi j / (s + 1))`, `j = 1..s`.
    PathGraph,
    /// `2 cos(2 pi j / s)`, `j = 1..s`.
    CirculantPlus,
    /// `2 cos((2j - 1) pi / s)`, `j = 1..s`.
    CirculantMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpectrumSpec {
    pub side: usize,
    pub kind: SpectrumKind,
}

impl SpectrumSpec {
    pub fn new(side: usize, kind: SpectrumKind) -> Self {
        SpectrumSpec { side, kind }
    }

    /// The angle of eigenvalue `j` as a fraction `(p, q)` of pi.
    fn angle(&self, j: usize) -> (i64, i64) {
        let (j, s) = (j as i64, self.side as i64);
        match self.kind {
            SpectrumKind::PathGraph => (j, s + 1),
            SpectrumKind::CirculantPlus => (2 * j, s),
            SpectrumKind::CirculantMinus => (2 * j - 1, s),
        }
    }

    pub fn eigenvalue(&self, j: usize, precision: u32) -> HpReal {
        let (p, q) = self.angle(j);
        HpReal::cos_pi_ratio(p, q, precision).ldexp(1)
    }
}

/// `mn + 64` bits: the count has about `0.42 mn` bits, the rest is guard.
pub fn default_precision(m: usize, n: usize) -> u32 {
    (m * n + 64) as u32
}

pub fn eigenvalues(spec: SpectrumSpec, precision: u32) -> Vec<HpReal> {
    (1..=spec.side).map(|j| spec.eigenvalue(j, precision)).collect()
}

fn product(values: Vec<HpReal>, precision: u32) -> HpReal {
    values
        .into_par_iter()
        .reduce(|| HpReal::from_i64(1, precision), |a, b| a.mul(&b, precision))
}

/// `prod_{nu} prod_{mu} (mu^2 + nu^2)`, where `mus_half` holds one member
/// of each `{x, -x}` pair of the paired spectrum.
fn paired_product(nus: &[HpReal], mus_half: &[HpReal], precision: u32) -> HpReal {
    let partials: Vec<HpReal> = nus
        .par_iter()
        .map(|nu| {
            let nu2 = nu.mul(nu, precision);
            mus_half.iter().fold(HpReal::from_i64(1, precision), |acc, mu| {
                let term = mu.mul(mu, precision).add(&nu2, precision);
                acc.mul(&term, precision)
            })
        })
        .collect();
    product(partials, precision)
}

/// `N(m, n)^2` as the real eigenvalue product. The even side is the one
/// that gets paired.
pub fn rectangle_square_product(m: usize, n: usize, precision: u32) -> Result<HpReal> {
    GridSpec::rectangle(m, n).validate()?;
    let (m, n) = if n % 2 == 0 { (m, n) } else { (n, m) };
    let nus = eigenvalues(SpectrumSpec::new(m, SpectrumKind::PathGraph), precision);
    let mus: Vec<HpReal> = (1..=n / 2)
        .map(|k| SpectrumSpec::new(n, SpectrumKind::PathGraph).eigenvalue(k, precision))
        .collect();
    Ok(paired_product(&nus, &mus, precision))
}

/// Rounds `value`, which came out of about `ops` correctly rounded
/// operations at `precision` bits. Fails unless both the accumulated
/// rounding error and the distance to the nearest integer stay below
/// `2^-ROUNDING_BITS`.
fn round_checked(value: &HpReal, precision: u32, ops: usize) -> Result<BigInt> {
    let nearest = value.round_to_integer();
    let distance = value.distance_to_integer(&nearest);
    let magnitude = value.magnitude_exponent().unwrap_or(0).max(0);
    let error_bits = magnitude + (usize::BITS - ops.max(1).leading_zeros()) as i64 + 1;
    let limit = HpReal::from_i64(1, 8).ldexp(-ROUNDING_BITS);
    if error_bits + ROUNDING_BITS >= precision as i64 {
        return Err(DimerError::PrecisionExhausted {
            bits: precision,
            detail: format!("value needs about {} bits to round safely", error_bits + ROUNDING_BITS + 1),
        });
    }
    if distance >= limit {
        return Err(DimerError::PrecisionExhausted {
            bits: precision,
            detail: format!("value is {} away from the nearest integer", distance.to_decimal(12)),
        });
    }
    Ok(nearest)
}

fn to_count(value: BigInt) -> Result<BigCount> {
    match value.sign() {
        Sign::Minus => Err(DimerError::SignCalibrationFailure(format!("negative count {value}"))),
        _ => Ok(value.magnitude().clone()),
    }
}

pub fn count_rectangle_spectral(m: usize, n: usize, precision: u32) -> Result<BigCount> {
    let square = rectangle_square_product(m, n, precision)?;
    to_count(round_checked(&square.sqrt(precision), precision, 4 * m * n + 1)?)
}

/// `prod_{k, j} (mu_k + i nu_j)` over all `mn` pairs, with `mu` from the
/// horizontal spectrum (size `cols`) and `nu` from the vertical one (size
/// `rows`). Equals the determinant of the full weighted adjacency matrix.
pub fn kronecker_product(horizontal: SpectrumSpec, vertical: SpectrumSpec, precision: u32) -> HpComplex {
    let mus = eigenvalues(horizontal, precision);
    let nus = eigenvalues(vertical, precision);
    let partials: Vec<HpComplex> = mus
        .par_iter()
        .map(|mu| {
            nus.iter().fold(HpComplex::one(precision), |acc, nu| {
                acc.mul(&HpComplex::new(mu.clone(), nu.clone()), precision)
            })
        })
        .collect();
    partials
        .into_iter()
        .fold(HpComplex::one(precision), |acc, z| acc.mul(&z, precision))
}

/// Horizontal and vertical spectra of the torus adjacency matrix for a
/// sign class. Flipping the wrap-around edges along an axis turns that
/// cycle's spectrum from periodic to antiperiodic.
pub fn torus_spectra(rows: usize, cols: usize, class: SignClass) -> (SpectrumSpec, SpectrumSpec) {
    let kind = |flipped| {
        if flipped {
            SpectrumKind::CirculantMinus
        } else {
            SpectrumKind::CirculantPlus
        }
    };
    (
        SpectrumSpec::new(cols, kind(class.flips_horizontal())),
        SpectrumSpec::new(rows, kind(class.flips_vertical())),
    )
}

/// `|det A_k|`, paired into real factors: on a cycle of even length the
/// eigenvalue at index `l + s/2` is the negative of the one at `l`.
pub fn torus_square_product(rows: usize, cols: usize, class: SignClass, precision: u32) -> HpReal {
    let (horizontal, vertical) = torus_spectra(rows, cols, class);
    let mus = eigenvalues(horizontal, precision);
    let nus_half: Vec<HpReal> = (1..=rows / 2).map(|l| vertical.eigenvalue(l, precision)).collect();
    paired_product(&mus, &nus_half, precision)
}

pub fn count_torus_spectral(rows: usize, cols: usize, mode: TorusMode, precision: u32) -> Result<BigCount> {
    check_torus_mode(rows, cols, mode)?;
    let coefficients = combination_halves(rows, cols);
    let magnitudes: Vec<HpReal> = SignClass::ALL
        .par_iter()
        .map(|&k| torus_square_product(rows, cols, k, precision).sqrt(precision))
        .collect();
    let mut twice = HpReal::zero(precision);
    for k in SignClass::ALL {
        let term = &magnitudes[k.index()];
        if coefficients[k.index()] * CALIBRATED_SIGNS[k.index()] > 0 {
            twice = twice.add(term, precision);
        } else {
            twice = twice.sub(term, precision);
        }
    }
    to_count(round_checked(&twice.ldexp(-1), precision, 8 * rows * cols + 8)?)
}
