//! Kasteleyn matrices and determinant counts.
//!
//! The matrix has one row per black cell and one column per white cell,
//! both in canonical order, with `+1` on horizontal edges and `+i` on
//! vertical edges. On a rectangle `|det|` is the number of tilings. On a
//! torus no single weighting works; four sign classes that flip the
//! wrap-around edges are combined instead.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{DimerError, Result};
use crate::gaussian::{det_exact, GaussianInt, GaussianMatrix, GaussianUnit};
use crate::grid::{build_grid, color_ranks, Color, Edge, GridSpec, Orientation};
use crate::oracle::{enumerate_matchings, matching_signature, EnumerationLimits, Matching, TorusParityType};
use crate::BigCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignClass {
    B0,
    B1,
    B2,
    B3,
}

impl SignClass {
    pub const ALL: [SignClass; 4] = [SignClass::B0, SignClass::B1, SignClass::B2, SignClass::B3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            SignClass::B0 => "B0",
            SignClass::B1 => "B1",
            SignClass::B2 => "B2",
            SignClass::B3 => "B3",
        }
    }

    pub fn flips_vertical(self) -> bool {
        matches!(self, SignClass::B1 | SignClass::B3)
    }

    pub fn flips_horizontal(self) -> bool {
        matches!(self, SignClass::B2 | SignClass::B3)
    }

    /// Weight of a single edge under this class.
    pub fn edge_weight(self, edge: &Edge) -> GaussianUnit {
        let (base, flipped) = match edge.orientation {
            Orientation::Horizontal => (GaussianUnit::One, self.flips_horizontal()),
            Orientation::Vertical => (GaussianUnit::I, self.flips_vertical()),
        };
        if edge.special && flipped {
            base.negate()
        } else {
            base
        }
    }

    /// `+1` or `-1` depending on how this class reweights a matching of
    /// the given parity type relative to the base weighting.
    fn character(self, t: TorusParityType) -> i8 {
        let flips = (self.flips_horizontal() && t.horizontal_odd) as u8 + (self.flips_vertical() && t.vertical_odd) as u8;
        if flips % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which torus sizes the four-determinant combination accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusMode {
    /// Both sides divisible by 4.
    Validated,
    /// Any even sides of at least 4. Results are checked against the
    /// oracle whenever the torus is small enough to enumerate.
    Experimental,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KasteleynMatrix {
    pub grid: GridSpec,
    pub sign_class: SignClass,
    pub matrix: GaussianMatrix,
}

pub fn build_kasteleyn(grid: GridSpec, sign_class: SignClass) -> Result<KasteleynMatrix> {
    let graph = build_grid(grid)?;
    if !grid.is_torus() && sign_class != SignClass::B0 {
        return Err(DimerError::InvalidSignClass(sign_class.name()));
    }
    let ranks = color_ranks(&grid);
    let mut matrix = GaussianMatrix::zeros(grid.cells() / 2);
    for e in &graph.edges {
        let (b, w) = if grid.color(e.a) == Color::Black {
            (e.a, e.b)
        } else {
            (e.b, e.a)
        };
        matrix.add_to(ranks[b], ranks[w], &sign_class.edge_weight(e).to_gaussian());
    }
    Ok(KasteleynMatrix {
        grid,
        sign_class,
        matrix,
    })
}

/// The full `mn x mn` weighted adjacency matrix in canonical order, i.e.
/// `[[0, B], [B^T, 0]]`.
pub fn adjacency_matrix(grid: GridSpec, sign_class: SignClass) -> Result<GaussianMatrix> {
    Ok(build_kasteleyn(grid, sign_class)?.matrix.bipartite_double())
}

pub fn count_rectangle_det(m: usize, n: usize) -> Result<BigCount> {
    let k = build_kasteleyn(GridSpec::rectangle(m, n), SignClass::B0)?;
    let det = det_exact(&k.matrix);
    // i^(#vertical) is real exactly when the column count is even.
    if n % 2 == 0 {
        assert!(det.is_real(), "rectangle determinant {det} is not real");
    }
    let magnitude = det
        .axis_magnitude()
        .unwrap_or_else(|| panic!("rectangle determinant {det} is not a unit times an integer"));
    Ok(magnitude.magnitude().clone())
}

/// Signed weight of a matching under the canonical order and the given sign
/// class, before normalization.
pub fn raw_signed_weight(matching: &Matching, sign_class: SignClass) -> GaussianUnit {
    let flips = matching
        .edges()
        .iter()
        .filter(|e| e.special && sign_class.edge_weight(e) != SignClass::B0.edge_weight(e))
        .count();
    let base = matching_signature(matching);
    if flips % 2 == 1 {
        base.negate()
    } else {
        base
    }
}

/// Signature of the tiling by horizontal dominoes that avoid the wrap-around
/// edges. Every normalized torus quantity is measured relative to it.
pub fn reference_sign(spec: GridSpec) -> Result<i8> {
    spec.validate()?;
    let reference = Matching::all_horizontal(spec).ok_or(
        DimerError::InvalidDimensions {
            rows: spec.rows,
            cols: spec.cols,
            reason: "reference tiling needs an even column count",
        },
    )?;
    Ok(matching_signature(&reference)
        .as_real()
        .expect("horizontal tiling has real weight"))
}

/// Contribution of one torus matching to the normalized determinant of the
/// given sign class: `+1` or `-1`.
pub fn typed_sign_contribution(matching: &Matching, sign_class: SignClass) -> i8 {
    let reference = reference_sign(*matching.spec()).expect("matching of a valid torus");
    let weight = raw_signed_weight(matching, sign_class)
        .as_real()
        .expect("torus matchings use an even number of vertical edges");
    reference * weight
}

/// Sign with which a matching of parity type `t` enters the normalized
/// `B0` determinant. For sides divisible by 4 this is `+` for `(e,e)` and
/// `-` otherwise. The general rule covers sides that are `2 mod 4` too.
pub fn b0_sign(rows: usize, cols: usize, t: TorusParityType) -> i8 {
    let (h, v) = (t.horizontal_odd as usize, t.vertical_odd as usize);
    let exponent = h * (cols / 2 + 1) + v * (rows / 2 + 1) + h * v;
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Full sign table: entry `[t][k]` for parity type index `t` and class `k`.
pub fn sign_table(rows: usize, cols: usize) -> [[i8; 4]; 4] {
    TorusParityType::ALL.map(|t| SignClass::ALL.map(|k| b0_sign(rows, cols, t) * k.character(t)))
}

/// Twice the coefficient of each normalized determinant in the count, so
/// that `2 N' = sum_k c_k d_k`. Every entry is `+1` or `-1`.
pub fn combination_halves(rows: usize, cols: usize) -> [i8; 4] {
    SignClass::ALL.map(|k| {
        let sum: i8 = TorusParityType::ALL
            .iter()
            .map(|&t| b0_sign(rows, cols, t) * k.character(t))
            .sum();
        sum / 2
    })
}

/// Sign of each normalized determinant. Every class sums matchings with a
/// net nonnegative weight; the determinant path asserts it.
pub const CALIBRATED_SIGNS: [i8; 4] = [1, 1, 1, 1];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusDeterminants {
    pub rows: usize,
    pub cols: usize,
    pub mode: TorusMode,
    /// `det B_k` as computed.
    pub raw: [GaussianInt; 4],
    pub reference_sign: i8,
    /// `reference_sign * det B_k`, always real.
    pub normalized: [BigInt; 4],
    pub coefficients: [i8; 4],
    pub count: BigCount,
    /// `Some(true)` when the oracle confirmed the count, `None` when the
    /// torus was too large to enumerate or no check was requested.
    pub oracle_verified: Option<bool>,
}

fn calibration(msg: String) -> DimerError {
    DimerError::SignCalibrationFailure(msg)
}

pub fn check_torus_mode(rows: usize, cols: usize, mode: TorusMode) -> Result<GridSpec> {
    let spec = GridSpec::torus(rows, cols);
    spec.validate()?;
    if mode == TorusMode::Validated && !spec.is_validated_torus() {
        return Err(DimerError::InvalidDimensions {
            rows,
            cols,
            reason: "validated torus path needs both sides divisible by 4 (use experimental mode)",
        });
    }
    Ok(spec)
}

/// The four determinants and their combination into `N'(m, n)`.
pub fn torus_determinants(rows: usize, cols: usize, mode: TorusMode, limits: &EnumerationLimits) -> Result<TorusDeterminants> {
    let spec = check_torus_mode(rows, cols, mode)?;
    let raw: Vec<GaussianInt> = SignClass::ALL
        .par_iter()
        .map(|&k| build_kasteleyn(spec, k).map(|km| det_exact(&km.matrix)))
        .collect::<Result<_>>()?;
    let raw: [GaussianInt; 4] = raw.try_into().expect("four classes");
    let reference = reference_sign(spec)?;
    let mut normalized: [BigInt; 4] = Default::default();
    for k in SignClass::ALL {
        let d = &raw[k.index()];
        if !d.is_real() {
            return Err(calibration(format!("det {k} = {d} is not real")));
        }
        let value = &d.re * BigInt::from(reference);
        if value.sign() == Sign::Minus && CALIBRATED_SIGNS[k.index()] > 0 {
            return Err(calibration(format!("normalized det {k} = {value} is negative")));
        }
        normalized[k.index()] = value;
    }
    if spec.is_validated_torus() && !normalized[0].is_zero() {
        return Err(calibration(format!("det B0 = {} does not vanish", normalized[0])));
    }
    let coefficients = combination_halves(rows, cols);
    let twice: BigInt = coefficients
        .iter()
        .zip(&normalized)
        .map(|(&c, d)| d * BigInt::from(c))
        .sum();
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() || half.is_negative() {
        return Err(calibration(format!("combination {twice} is not twice a nonnegative integer")));
    }
    let count = half.to_biguint().expect("nonnegative");
    let mut oracle_verified = None;
    if !spec.is_validated_torus() {
        match enumerate_matchings(spec, limits) {
            Ok(expected) => {
                if expected != count {
                    return Err(calibration(format!(
                        "experimental combination gives {count} but enumeration gives {expected}"
                    )));
                }
                oracle_verified = Some(true);
            }
            Err(DimerError::SizeLimitExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(TorusDeterminants {
        rows,
        cols,
        mode,
        raw,
        reference_sign: reference,
        normalized,
        coefficients,
        count,
        oracle_verified,
    })
}

pub fn count_torus_det(rows: usize, cols: usize, mode: TorusMode) -> Result<BigCount> {
    Ok(torus_determinants(rows, cols, mode, &EnumerationLimits::default())?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{collect_matchings, torus_typed_counts};

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn three_by_two_matrix() {
        // Black cells (1,1),(2,2),(1,3); white cells (2,1),(1,2),(2,3).
        let k = build_kasteleyn(GridSpec::rectangle(3, 2), SignClass::B0).unwrap();
        let expected = GaussianMatrix::from_rows(vec![
            vec![g(1, 0), g(0, 1), g(0, 0)],
            vec![g(0, 1), g(1, 0), g(0, 1)],
            vec![g(0, 0), g(0, 1), g(1, 0)],
        ]);
        assert_eq!(k.matrix, expected);
    }

    #[test]
    fn two_by_two_matrix_is_full() {
        let k = build_kasteleyn(GridSpec::rectangle(2, 2), SignClass::B0).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!(!k.matrix.get(r, c).is_zero());
            }
        }
    }

    #[test]
    fn rectangle_rejects_torus_classes() {
        assert_eq!(
            build_kasteleyn(GridSpec::rectangle(2, 2), SignClass::B1).unwrap_err(),
            DimerError::InvalidSignClass("B1")
        );
    }

    #[test]
    fn torus_classes_differ_on_special_edges() {
        let spec = GridSpec::torus(4, 4);
        let b0 = build_kasteleyn(spec, SignClass::B0).unwrap().matrix;
        for (k, expected) in [(SignClass::B1, 4), (SignClass::B2, 4), (SignClass::B3, 8)] {
            let bk = build_kasteleyn(spec, k).unwrap().matrix;
            assert_eq!(b0.differing_entries(&bk).len(), expected, "{k}");
        }
    }

    #[test]
    fn small_rectangle_counts() {
        assert_eq!(count_rectangle_det(3, 2).unwrap(), BigCount::from(3u8));
        assert_eq!(count_rectangle_det(1, 2).unwrap(), BigCount::from(1u8));
        assert_eq!(count_rectangle_det(8, 8).unwrap(), BigCount::from(12988816u32));
        assert_eq!(count_rectangle_det(2, 3).unwrap(), BigCount::from(3u8));
        assert!(count_rectangle_det(3, 3).is_err());
    }

    #[test]
    fn sign_table_for_multiples_of_four() {
        let table = sign_table(4, 8);
        assert_eq!(table[0], [1, 1, 1, 1]);
        assert_eq!(table[1], [-1, -1, 1, 1]);
        assert_eq!(table[2], [-1, 1, -1, 1]);
        assert_eq!(table[3], [-1, 1, 1, -1]);
        assert_eq!(combination_halves(4, 4), [-1, 1, 1, 1]);
        assert_eq!(combination_halves(4, 6), [1, 1, -1, 1]);
    }

    #[test]
    fn every_parity_type_is_counted_once() {
        for (m, n) in [(4, 4), (4, 6), (6, 4), (6, 6), (8, 12), (10, 6)] {
            let table = sign_table(m, n);
            let c = combination_halves(m, n);
            for row in table {
                let total: i8 = row.iter().zip(c).map(|(s, c)| s * c).sum();
                assert_eq!(total, 2, "{m}x{n}");
            }
        }
    }

    #[test]
    fn four_by_four_torus() {
        let t = torus_determinants(4, 4, TorusMode::Validated, &EnumerationLimits::default()).unwrap();
        assert!(t.normalized[0].is_zero());
        assert_eq!(t.count, BigCount::from(272u32));
        assert_eq!(t.oracle_verified, None);
    }

    #[test]
    fn validated_mode_rejects_two_mod_four() {
        assert!(matches!(
            count_torus_det(4, 6, TorusMode::Validated),
            Err(DimerError::InvalidDimensions { .. })
        ));
        assert!(count_torus_det(4, 2, TorusMode::Experimental).is_err());
    }

    #[test]
    fn experimental_mode_is_checked_by_the_oracle() {
        let t = torus_determinants(4, 6, TorusMode::Experimental, &EnumerationLimits::default()).unwrap();
        assert_eq!(t.count, BigCount::from(3108u32));
        assert_eq!(t.oracle_verified, Some(true));
    }

    #[test]
    fn typed_contributions_match_the_table() {
        let spec = GridSpec::torus(4, 4);
        let table = sign_table(4, 4);
        for m in collect_matchings(spec, &EnumerationLimits::default()).unwrap() {
            let t = TorusParityType::of(&m);
            for k in SignClass::ALL {
                assert_eq!(typed_sign_contribution(&m, k), table[t.index()][k.index()]);
            }
        }
    }

    #[test]
    fn normalized_determinants_are_signed_type_sums() {
        let limits = EnumerationLimits::default();
        for (m, n) in [(4, 4), (4, 6), (6, 4)] {
            let typed = torus_typed_counts(m, n, &limits).unwrap();
            let table = sign_table(m, n);
            let dets = torus_determinants(m, n, TorusMode::Experimental, &limits).unwrap();
            for k in SignClass::ALL {
                let sum: BigInt = TorusParityType::ALL
                    .iter()
                    .map(|&t| BigInt::from(typed.get(t).clone()) * BigInt::from(table[t.index()][k.index()]))
                    .sum();
                assert_eq!(dets.normalized[k.index()], sum, "{m}x{n} {k}");
            }
        }
    }
}
