//! Uniform Cartesian sampling geometry.
//!
//! Node coordinates are implied: `x_i = i * Lx / (nx - 1)`, so node `0` sits
//! at the origin and node `nx - 1` at the full extent. Fields sampled on a
//! [`Grid2D`] are flattened row-major with x fastest: `index = iy * nx + ix`.

use crate::error::{Error, Result};

/// A uniform 1D grid over `[0, Lx]` with `nx` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    nx: usize,
    lx: f64,
}

impl Grid1D {
    pub fn new(nx: usize, lx: f64) -> Result<Self> {
        if nx < 2 {
            return Err(Error::GridTooSmall { nx, ny: 1 });
        }
        if !(lx > 0.0) || !lx.is_finite() {
            return Err(Error::GridBadExtent { lx, ly: 0.0 });
        }
        Ok(Self { nx, lx })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn hx(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 * self.lx / (self.nx - 1) as f64
    }

    pub fn num_nodes(&self) -> usize {
        self.nx
    }
}

/// A uniform 2D grid over `[0, Lx] x [0, Ly]` with `nx * ny` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::GridTooSmall { nx, ny });
        }
        if !(lx > 0.0 && ly > 0.0) || !lx.is_finite() || !ly.is_finite() {
            return Err(Error::GridBadExtent { lx, ly });
        }
        Ok(Self { nx, ny, lx, ly })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn hx(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / (self.ny - 1) as f64
    }

    pub fn max_spacing(&self) -> f64 {
        self.hx().max(self.hy())
    }

    pub fn num_nodes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 * self.lx / (self.nx - 1) as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        iy as f64 * self.ly / (self.ny - 1) as f64
    }

    /// Flat node index, row-major with x fastest.
    pub fn node_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Inverse of [`node_index`](Self::node_index).
    pub fn node_coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn node_position(&self, index: usize) -> (f64, f64) {
        let (ix, iy) = self.node_coords(index);
        (self.x(ix), self.y(iy))
    }

    pub fn diagonal(&self) -> f64 {
        self.lx.hypot(self.ly)
    }
}

/// Sampling geometry of a snapshot series: either a 1D line or a 2D plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn num_nodes(&self) -> usize {
        match self {
            Grid::One(g) => g.num_nodes(),
            Grid::Two(g) => g.num_nodes(),
        }
    }

    /// The 2D grid, or an error for 1D data (contour and distance
    /// operations are 2D only).
    pub fn as_two(&self) -> Result<&Grid2D> {
        match self {
            Grid::Two(g) => Ok(g),
            Grid::One(_) => Err(Error::NotTwoDimensional),
        }
    }
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::One(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::Two(g)
    }
}
