use crate::error::{Error, Result};

/// Rectangular lattice of nodes with square spacing. The physical side
/// lengths are `(nx - 1) dx` by `(ny - 1) dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
}

impl Grid {
    /// The nine-point formula assumes square cells, so a single spacing
    /// serves both directions.
    pub fn new(nx: usize, ny: usize, dx: f64) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Domain(format!("grid must be at least 3x3, got {nx}x{ny}")));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Domain(format!("grid spacing must be positive, got {dx}")));
        }
        Ok(Self { nx, ny, dx })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lx(&self) -> f64 {
        (self.nx - 1) as f64 * self.dx
    }

    pub fn ly(&self) -> f64 {
        (self.ny - 1) as f64 * self.dx
    }
}

/// One species' density samples on a grid, row-major (`iy * nx + ix`).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn constant(grid: Grid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                values.push(f(ix as f64 * grid.dx, iy as f64 * grid.dx));
            }
        }
        Self { grid, values }
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    #[inline]
    pub fn set(&mut self, ix: usize, iy: usize, v: f64) {
        self.values[iy * self.grid.nx + ix] = v;
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Discrete mass under trapezoidal quadrature (half weight on edge nodes,
    /// quarter weight at corners). This is the quantity the reflected
    /// nine-point stencil conserves exactly in the absence of reaction.
    pub fn mass(&self) -> f64 {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut total = 0.0;
        for iy in 0..ny {
            let wy = if iy == 0 || iy == ny - 1 { 0.5 } else { 1.0 };
            for ix in 0..nx {
                let wx = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
                total += wx * wy * self.at(ix, iy);
            }
        }
        total * self.grid.dx * self.grid.dx
    }
}
