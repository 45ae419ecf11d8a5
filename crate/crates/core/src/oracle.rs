//! Brute-force ground truth.
//!
//! Everything here is exhaustive enumeration: perfect matchings of grid
//! graphs, their signatures, torus parity classes, overtilings with
//! boundary stubs, and the flip graph. The recursion always settles the
//! first uncovered cell in row-major order (the upper-left-most one).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;

use crate::codec;
use crate::error::{DimerError, Result};
use crate::gaussian::GaussianUnit;
use crate::grid::{color_ranks, Color, Edge, GridSpec, Orientation};
use crate::BigCount;

/// Size caps for exhaustive enumeration, in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub rectangle_cells: usize,
    pub torus_cells: usize,
    pub overtiling_cells: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            rectangle_cells: 36,
            torus_cells: 32,
            overtiling_cells: 16,
        }
    }
}

impl EnumerationLimits {
    fn check_grid(&self, spec: &GridSpec) -> Result<()> {
        let (what, limit) = if spec.is_torus() {
            ("torus enumeration", self.torus_cells)
        } else {
            ("rectangle enumeration", self.rectangle_cells)
        };
        if spec.cells() > limit {
            return Err(DimerError::SizeLimitExceeded {
                what,
                cells: spec.cells(),
                limit,
            });
        }
        Ok(())
    }

    fn check_board(&self, rows: usize, cols: usize) -> Result<()> {
        if rows * cols > self.overtiling_cells {
            return Err(DimerError::SizeLimitExceeded {
                what: "overtiling enumeration",
                cells: rows * cols,
                limit: self.overtiling_cells,
            });
        }
        Ok(())
    }
}

/// A perfect matching of a grid graph, stored as a partner map over cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    spec: GridSpec,
    partner: Vec<usize>,
}

impl Matching {
    /// Builds a matching from a partner map, checking that it is perfect
    /// and uses only grid edges.
    pub fn from_partners(spec: GridSpec, partner: Vec<usize>) -> Result<Self> {
        if partner.len() != spec.cells() {
            return Err(DimerError::InvalidDimensions {
                rows: spec.rows,
                cols: spec.cols,
                reason: "partner map has the wrong length",
            });
        }
        for (a, &b) in partner.iter().enumerate() {
            if b >= partner.len() || partner[b] != a || a == b || spec.edge_between(a, b).is_none() {
                return Err(DimerError::InvalidDimensions {
                    rows: spec.rows,
                    cols: spec.cols,
                    reason: "partner map is not a perfect matching of the grid",
                });
            }
        }
        Ok(Matching { spec, partner })
    }

    pub(crate) fn from_partners_unchecked(spec: GridSpec, partner: Vec<usize>) -> Self {
        Matching { spec, partner }
    }

    /// Every domino horizontal, pairing columns (1,2), (3,4), ...
    pub fn all_horizontal(spec: GridSpec) -> Option<Self> {
        if spec.cols % 2 != 0 {
            return None;
        }
        let partner = (0..spec.cells())
            .map(|i| if i % 2 == 0 { i + 1 } else { i - 1 })
            .collect();
        Some(Matching { spec, partner })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn partner(&self, cell: usize) -> usize {
        self.partner[cell]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.partner.len())
            .filter(|&a| a < self.partner[a])
            .map(|a| {
                self.spec
                    .edge_between(a, self.partner[a])
                    .expect("matching edges are grid edges")
            })
            .collect()
    }

    pub fn vertical_count(&self) -> usize {
        self.edges()
            .iter()
            .filter(|e| e.orientation == Orientation::Vertical)
            .count()
    }

    /// Parity of the permutation black rank -> white rank under the
    /// canonical vertex order. `true` when odd.
    pub fn permutation_is_odd(&self) -> bool {
        let ranks = color_ranks(&self.spec);
        let half = self.spec.cells() / 2;
        let mut perm = vec![0usize; half];
        for (cell, &p) in self.partner.iter().enumerate() {
            if self.spec.color(cell) == Color::Black {
                perm[ranks[cell]] = ranks[p];
            }
        }
        permutation_is_odd(&perm)
    }
}

/// Parity of a permutation given in one-line notation. `true` when odd.
pub fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// Parities of the special horizontal and special vertical edges a torus
/// matching uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusParityType {
    pub horizontal_odd: bool,
    pub vertical_odd: bool,
}

impl TorusParityType {
    /// (e,e), (o,e), (e,o), (o,o) in that order.
    pub const ALL: [TorusParityType; 4] = [
        TorusParityType::new(false, false),
        TorusParityType::new(true, false),
        TorusParityType::new(false, true),
        TorusParityType::new(true, true),
    ];

    pub const fn new(horizontal_odd: bool, vertical_odd: bool) -> Self {
        TorusParityType {
            horizontal_odd,
            vertical_odd,
        }
    }

    pub fn index(self) -> usize {
        self.horizontal_odd as usize + 2 * self.vertical_odd as usize
    }

    pub fn of(matching: &Matching) -> Self {
        let (mut h, mut v) = (0, 0);
        for e in matching.edges().iter().filter(|e| e.special) {
            match e.orientation {
                Orientation::Horizontal => h += 1,
                Orientation::Vertical => v += 1,
            }
        }
        TorusParityType::new(h % 2 == 1, v % 2 == 1)
    }
}

impl fmt::Display for TorusParityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |odd: bool| if odd { 'o' } else { 'e' };
        write!(f, "({},{})", p(self.horizontal_odd), p(self.vertical_odd))
    }
}

struct MatchingSearch<'a, F: FnMut(&[usize])> {
    spec: GridSpec,
    partner: Vec<usize>,
    visit: &'a mut F,
}

const FREE: usize = usize::MAX;

impl<F: FnMut(&[usize])> MatchingSearch<'_, F> {
    fn run(&mut self, from: usize) {
        let Some(cell) = (from..self.partner.len()).find(|&c| self.partner[c] == FREE) else {
            (self.visit)(&self.partner);
            return;
        };
        let spec = self.spec;
        let mut tried = [FREE; 4];
        for (slot, next) in [spec.right(cell), spec.down(cell), spec.left(cell), spec.up(cell)]
            .into_iter()
            .enumerate()
        {
            let Some(other) = next else { continue };
            if other == cell || self.partner[other] != FREE || tried.contains(&other) {
                continue;
            }
            tried[slot] = other;
            self.partner[cell] = other;
            self.partner[other] = cell;
            self.run(cell + 1);
            self.partner[cell] = FREE;
            self.partner[other] = FREE;
        }
    }
}

/// Calls `visit` once for every perfect matching of the grid.
pub fn for_each_matching<F>(spec: GridSpec, limits: &EnumerationLimits, mut visit: F) -> Result<()>
where
    F: FnMut(&Matching),
{
    spec.validate()?;
    limits.check_grid(&spec)?;
    let mut wrapped = |partner: &[usize]| {
        visit(&Matching::from_partners_unchecked(spec, partner.to_vec()));
    };
    let mut search = MatchingSearch {
        spec,
        partner: vec![FREE; spec.cells()],
        visit: &mut wrapped,
    };
    search.run(0);
    Ok(())
}

pub fn collect_matchings(spec: GridSpec, limits: &EnumerationLimits) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_matching(spec, limits, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Number of perfect matchings by exhaustive enumeration.
pub fn enumerate_matchings(spec: GridSpec, limits: &EnumerationLimits) -> Result<BigCount> {
    spec.validate()?;
    limits.check_grid(&spec)?;
    let mut count: u64 = 0;
    let mut tick = |_: &[usize]| count += 1;
    let mut search = MatchingSearch {
        spec,
        partner: vec![FREE; spec.cells()],
        visit: &mut tick,
    };
    search.run(0);
    Ok(BigUint::from(count))
}

/// Parity times weight of a matching under the canonical order, with `+1`
/// on horizontal and `+i` on vertical edges.
pub fn matching_signature(matching: &Matching) -> GaussianUnit {
    let weight = GaussianUnit::i_pow(matching.vertical_count());
    if matching.permutation_is_odd() {
        weight.negate()
    } else {
        weight
    }
}

/// Matching counts of a torus split by [`TorusParityType`], indexed by
/// [`TorusParityType::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedCounts(pub [BigCount; 4]);

impl TypedCounts {
    pub fn get(&self, t: TorusParityType) -> &BigCount {
        &self.0[t.index()]
    }

    pub fn total(&self) -> BigCount {
        self.0.iter().sum()
    }
}

pub fn torus_typed_counts(rows: usize, cols: usize, limits: &EnumerationLimits) -> Result<TypedCounts> {
    let mut counts = [0u64; 4];
    for_each_matching(GridSpec::torus(rows, cols), limits, |m| {
        counts[TorusParityType::of(m).index()] += 1;
    })?;
    Ok(TypedCounts(counts.map(BigUint::from)))
}

/// Direction in which a boundary stub leaves the board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Left, Direction::Right, Direction::Up, Direction::Down];

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l" | "left" => Some(Direction::Left),
            "r" | "right" => Some(Direction::Right),
            "u" | "up" => Some(Direction::Up),
            "d" | "down" => Some(Direction::Down),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Up => "up",
            Direction::Down => "down",
        };
        f.write_str(s)
    }
}

/// Directions that leave an `rows x cols` board from cell `(x, y)`.
pub fn outward_directions(rows: usize, cols: usize, x: usize, y: usize) -> Vec<Direction> {
    let mut out = Vec::new();
    if x == 1 {
        out.push(Direction::Left);
    }
    if x == cols {
        out.push(Direction::Right);
    }
    if y == 1 {
        out.push(Direction::Up);
    }
    if y == rows {
        out.push(Direction::Down);
    }
    out
}

/// Half of a domino that sticks out of the board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stub {
    pub x: usize,
    pub y: usize,
    pub direction: Direction,
}

/// The set of boundary-straddling dominoes of an overtiling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BoundaryConfiguration {
    pub stubs: Vec<Stub>,
}

impl BoundaryConfiguration {
    pub fn new(mut stubs: Vec<Stub>) -> Self {
        stubs.sort();
        BoundaryConfiguration { stubs }
    }

    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.stubs {
            if !(1..=cols).contains(&s.x) || !(1..=rows).contains(&s.y) {
                return Err(DimerError::InvalidBoundary(format!(
                    "cell ({}, {}) is off the {rows}x{cols} board",
                    s.x, s.y
                )));
            }
            if !outward_directions(rows, cols, s.x, s.y).contains(&s.direction) {
                return Err(DimerError::InvalidBoundary(format!(
                    "cell ({}, {}) has no outward {} neighbour",
                    s.x, s.y, s.direction
                )));
            }
            if !seen.insert((s.x, s.y)) {
                return Err(DimerError::InvalidBoundary(format!(
                    "cell ({}, {}) carries more than one stub",
                    s.x, s.y
                )));
            }
        }
        Ok(())
    }
}

/// Recursion over a plain `rows x cols` board. Stub cells are pre-covered;
/// with `allow_stubs`, uncovered boundary cells may also become stubs.
fn count_board(rows: usize, cols: usize, covered: &mut [bool], from: usize, allow_stubs: bool) -> u64 {
    let Some(cell) = (from..covered.len()).find(|&c| !covered[c]) else {
        return 1;
    };
    let (x, y) = (cell % cols + 1, cell / cols + 1);
    covered[cell] = true;
    let mut total = 0;
    if x < cols && !covered[cell + 1] {
        covered[cell + 1] = true;
        total += count_board(rows, cols, covered, cell + 1, allow_stubs);
        covered[cell + 1] = false;
    }
    if y < rows && !covered[cell + cols] {
        covered[cell + cols] = true;
        total += count_board(rows, cols, covered, cell + 1, allow_stubs);
        covered[cell + cols] = false;
    }
    if allow_stubs {
        let stubs = outward_directions(rows, cols, x, y).len() as u64;
        if stubs > 0 {
            total += stubs * count_board(rows, cols, covered, cell + 1, allow_stubs);
        }
    }
    covered[cell] = false;
    total
}

/// Number of overtilings of an `rows x cols` board: every cell is paired
/// with a neighbour on the board or is a stub leaving in an explicit
/// outward direction.
pub fn count_overtilings(rows: usize, cols: usize, limits: &EnumerationLimits) -> Result<BigCount> {
    check_board_dims(rows, cols)?;
    limits.check_board(rows, cols)?;
    let mut covered = vec![false; rows * cols];
    Ok(BigUint::from(count_board(rows, cols, &mut covered, 0, true)))
}

/// Completions of the boundary configuration `config` to a full overtiling.
pub fn count_with_boundary(
    rows: usize,
    cols: usize,
    config: &BoundaryConfiguration,
    limits: &EnumerationLimits,
) -> Result<BigCount> {
    check_board_dims(rows, cols)?;
    limits.check_board(rows, cols)?;
    config.validate(rows, cols)?;
    let mut covered = vec![false; rows * cols];
    for s in &config.stubs {
        covered[(s.y - 1) * cols + (s.x - 1)] = true;
    }
    Ok(BigUint::from(count_board(rows, cols, &mut covered, 0, false)))
}

fn check_board_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(DimerError::InvalidDimensions {
            rows,
            cols,
            reason: "sides must be positive",
        });
    }
    Ok(())
}

/// Number of distinct boundary configurations, by the product over boundary
/// cells of (1 + number of outward directions).
pub fn boundary_configuration_count(rows: usize, cols: usize) -> BigCount {
    let mut total = BigUint::from(1u32);
    for y in 1..=rows {
        for x in 1..=cols {
            total *= 1 + outward_directions(rows, cols, x, y).len() as u32;
        }
    }
    total
}

/// Visits every valid boundary configuration of the board.
pub fn for_each_boundary_configuration<F>(rows: usize, cols: usize, mut visit: F)
where
    F: FnMut(&BoundaryConfiguration),
{
    let boundary: Vec<(usize, usize, Vec<Direction>)> = (1..=rows)
        .flat_map(|y| (1..=cols).map(move |x| (x, y)))
        .map(|(x, y)| (x, y, outward_directions(rows, cols, x, y)))
        .filter(|(_, _, d)| !d.is_empty())
        .collect();
    fn rec<F: FnMut(&BoundaryConfiguration)>(
        boundary: &[(usize, usize, Vec<Direction>)],
        k: usize,
        stubs: &mut Vec<Stub>,
        visit: &mut F,
    ) {
        if k == boundary.len() {
            visit(&BoundaryConfiguration::new(stubs.clone()));
            return;
        }
        rec(boundary, k + 1, stubs, visit);
        let (x, y, dirs) = &boundary[k];
        for &direction in dirs {
            stubs.push(Stub { x: *x, y: *y, direction });
            rec(boundary, k + 1, stubs, visit);
            stubs.pop();
        }
    }
    rec(&boundary, 0, &mut Vec::new(), &mut visit);
}

/// Whether the flip graph of the rectangle (matchings joined by a single
/// 2x2 rotation) is connected.
pub fn flip_connectivity(rows: usize, cols: usize, limits: &EnumerationLimits) -> Result<bool> {
    let spec = GridSpec::rectangle(rows, cols);
    let all = collect_matchings(spec, limits)?;
    let Some(start) = all.first() else {
        return Ok(true);
    };
    let key = |m: &Matching| codec::encode(m).expect("rectangle matching encodes").to_bytes();
    let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(all.len());
    let mut queue = VecDeque::new();
    seen.insert(key(start));
    queue.push_back(start.clone());
    while let Some(m) = queue.pop_front() {
        for next in flip_neighbours(&m) {
            if seen.insert(key(&next)) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len() == all.len())
}

/// Matchings one elementary move away from `m`.
pub fn flip_neighbours(m: &Matching) -> Vec<Matching> {
    let spec = *m.spec();
    let mut out = Vec::new();
    for y in 1..spec.rows {
        for x in 1..spec.cols {
            let a = spec.index(x, y);
            let (b, c, d) = (a + 1, a + spec.cols, a + spec.cols + 1);
            let p = m.partners();
            let swapped = if p[a] == b && p[c] == d {
                Some([(a, c), (b, d)])
            } else if p[a] == c && p[b] == d {
                Some([(a, b), (c, d)])
            } else {
                None
            };
            if let Some(pairs) = swapped {
                let mut partner = p.to_vec();
                for (u, v) in pairs {
                    partner[u] = v;
                    partner[v] = u;
                }
                out.push(Matching::from_partners_unchecked(spec, partner));
            }
        }
    }
    out
}
