//! Exact counting of domino tilings (dimer covers) of rectangles and tori.
//!
//! Three independent routes produce the same integers:
//!
//! * [`kasteleyn`]: exact Gaussian-integer determinants of weighted
//!   bipartite adjacency matrices,
//! * [`spectral`]: closed-form eigenvalue products evaluated in
//!   arbitrary-precision floating point and rounded,
//! * [`oracle`]: exhaustive enumeration.
//!
//! [`codec`] packs a tiling into one bit per domino, and [`asymptotics`]
//! relates finite counts to the entropy constant `G / pi`.

pub mod asymptotics;
pub mod codec;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod hp;
pub mod kasteleyn;
pub mod oracle;
pub mod spectral;

pub use error::{DimerError, Result};
pub use gaussian::{GaussianInt, GaussianMatrix, GaussianUnit};
pub use grid::{Color, Edge, Graph, GridSpec, Orientation, Topology, Vertex};
pub use hp::{HpComplex, HpReal};
pub use kasteleyn::{KasteleynMatrix, SignClass, TorusMode};
pub use oracle::{Matching, TorusParityType};

pub use num_bigint::BigInt;

/// Arbitrary-precision nonnegative integer used for every exact count.
pub type BigCount = num_bigint::BigUint;
