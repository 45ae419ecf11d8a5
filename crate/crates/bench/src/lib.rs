//! Shapes shared by the benchmarks.

/// Square sides used across the counting benchmarks.
pub const SQUARE_SIDES: [usize; 4] = [8, 16, 24, 32];

/// Side length at which exhaustive enumeration is still quick.
pub const ENUMERATION_SIDES: [usize; 2] = [4, 6];
