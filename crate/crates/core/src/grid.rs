//! Rectangular and toroidal grid graphs.
//!
//! Cells are addressed with 1-based coordinates `(x, y)`: `x` is the column
//! in `1..=cols`, `y` the row in `1..=rows`, row 1 at the top. Internally a
//! cell is the row-major index `(y - 1) * cols + (x - 1)`.

use crate::error::{DimerError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Rectangle,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
}

impl GridSpec {
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        GridSpec {
            rows,
            cols,
            topology: Topology::Rectangle,
        }
    }

    pub fn torus(rows: usize, cols: usize) -> Self {
        GridSpec {
            rows,
            cols,
            topology: Topology::Torus,
        }
    }

    pub fn is_torus(&self) -> bool {
        self.topology == Topology::Torus
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    fn invalid(&self, reason: &'static str) -> DimerError {
        DimerError::InvalidDimensions {
            rows: self.rows,
            cols: self.cols,
            reason,
        }
    }

    /// Checks the preconditions shared by every counting operation.
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(self.invalid("sides must be positive"));
        }
        if self.cells() % 2 != 0 {
            return Err(self.invalid("cell count must be even"));
        }
        if self.is_torus() {
            if self.rows % 2 != 0 || self.cols % 2 != 0 {
                return Err(self.invalid("torus sides must both be even"));
            }
            // A side of 2 turns the wrap-around edge into a parallel edge.
            if self.rows < 4 || self.cols < 4 {
                return Err(self.invalid("torus sides must be at least 4"));
            }
        }
        Ok(())
    }

    /// Whether the torus lies on the validated counting path (both sides
    /// divisible by 4).
    pub fn is_validated_torus(&self) -> bool {
        self.is_torus() && self.rows % 4 == 0 && self.cols % 4 == 0
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!((1..=self.cols).contains(&x) && (1..=self.rows).contains(&y));
        (y - 1) * self.cols + (x - 1)
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.cols + 1, index / self.cols + 1)
    }

    pub fn color(&self, index: usize) -> Color {
        let (x, y) = self.coords(index);
        if (x + y) % 2 == 0 {
            Color::Black
        } else {
            Color::White
        }
    }

    /// Right neighbour, wrapping on the torus.
    pub fn right(&self, index: usize) -> Option<usize> {
        let (x, y) = self.coords(index);
        if x < self.cols {
            Some(index + 1)
        } else if self.is_torus() {
            Some(self.index(1, y))
        } else {
            None
        }
    }

    /// Neighbour below, wrapping on the torus.
    pub fn down(&self, index: usize) -> Option<usize> {
        let (x, y) = self.coords(index);
        if y < self.rows {
            Some(index + self.cols)
        } else if self.is_torus() {
            Some(self.index(x, 1))
        } else {
            None
        }
    }

    pub fn left(&self, index: usize) -> Option<usize> {
        let (x, y) = self.coords(index);
        if x > 1 {
            Some(index - 1)
        } else if self.is_torus() {
            Some(self.index(self.cols, y))
        } else {
            None
        }
    }

    pub fn up(&self, index: usize) -> Option<usize> {
        let (x, y) = self.coords(index);
        if y > 1 {
            Some(index - self.cols)
        } else if self.is_torus() {
            Some(self.index(x, self.rows))
        } else {
            None
        }
    }

    /// Classifies the edge between two adjacent cells.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<Edge> {
        let (lo, hi) = (a.min(b), a.max(b));
        if self.right(lo) == Some(hi) || self.right(hi) == Some(lo) {
            let special = self.coords(lo).0 == 1 && self.coords(hi).0 == self.cols && self.cols > 1;
            return Some(Edge {
                a: lo,
                b: hi,
                orientation: Orientation::Horizontal,
                special: special && self.is_torus(),
            });
        }
        if self.down(lo) == Some(hi) || self.down(hi) == Some(lo) {
            let special = self.coords(lo).1 == 1 && self.coords(hi).1 == self.rows && self.rows > 1;
            return Some(Edge {
                a: lo,
                b: hi,
                orientation: Orientation::Vertical,
                special: special && self.is_torus(),
            });
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
    pub color: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An edge between cell indices `a < b`. `special` marks torus wrap-around
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub orientation: Orientation,
    pub special: bool,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    pub spec: GridSpec,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Edge ids incident to each vertex.
    pub incidence: Vec<Vec<usize>>,
    pub black: Vec<usize>,
    pub white: Vec<usize>,
}

pub fn build_grid(spec: GridSpec) -> Result<Graph> {
    spec.validate()?;
    let cells = spec.cells();
    let vertices: Vec<Vertex> = (0..cells)
        .map(|i| {
            let (x, y) = spec.coords(i);
            Vertex {
                x,
                y,
                color: spec.color(i),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..cells {
        for j in [spec.right(i), spec.down(i)].into_iter().flatten() {
            edges.push(spec.edge_between(i, j).expect("neighbours are adjacent"));
        }
    }
    let mut incidence = vec![Vec::new(); cells];
    for (id, e) in edges.iter().enumerate() {
        incidence[e.a].push(id);
        incidence[e.b].push(id);
    }
    let black = (0..cells).filter(|&i| spec.color(i) == Color::Black).collect();
    let white = (0..cells).filter(|&i| spec.color(i) == Color::White).collect();
    Ok(Graph {
        spec,
        vertices,
        edges,
        incidence,
        black,
        white,
    })
}

/// Black vertices (row-major) followed by white vertices (row-major).
pub fn canonical_vertex_order(graph: &Graph) -> Vec<usize> {
    graph.black.iter().chain(graph.white.iter()).copied().collect()
}

/// Position of each cell inside its own colour class under the canonical
/// order.
pub(crate) fn color_ranks(spec: &GridSpec) -> Vec<usize> {
    let mut ranks = vec![0; spec.cells()];
    let (mut b, mut w) = (0, 0);
    for (i, rank) in ranks.iter_mut().enumerate() {
        match spec.color(i) {
            Color::Black => {
                *rank = b;
                b += 1;
            }
            Color::White => {
                *rank = w;
                w += 1;
            }
        }
    }
    ranks
}
