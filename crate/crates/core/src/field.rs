//! Real scalar and vector fields sampled on a grid.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Real samples in row-major layout on one of the three grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("scalar field"));
        }
        Ok(Self { grid, values })
    }

    /// Sample `f(coord1, coord2)` on every grid point.
    ///
    /// The arguments follow the grid's own coordinates: `(x1, x2)` on the
    /// torus and strip, `(r, z)` on the annulus.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = vec![0.0; grid.len()];
        match grid {
            Grid::Torus(g) => {
                for j2 in 0..g.ny {
                    for j1 in 0..g.nx {
                        values[g.idx(j1, j2)] = f(g.x1(j1), g.x2(j2));
                    }
                }
            }
            Grid::Strip(g) => {
                for j2 in 0..g.nz {
                    for j1 in 0..g.nx {
                        values[g.idx(j1, j2)] = f(g.x1(j1), g.x2(j2));
                    }
                }
            }
            Grid::Annulus(g) => {
                for ir in 0..g.nr {
                    for jz in 0..g.nz {
                        values[g.idx(ir, jz)] = f(g.r(ir), g.z(jz));
                    }
                }
            }
        }
        Self { grid, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn mean(&self) -> f64 {
        // Quadrature mean; exact sample mean on fully periodic grids.
        let mut num = 0.0;
        let mut den = 0.0;
        let (n1, n2) = self.grid.dims();
        for i in 0..n1 {
            for j in 0..n2 {
                let w = self.grid.weight(i, j);
                let v = match self.grid {
                    Grid::Torus(g) => self.values[g.idx(i, j)],
                    Grid::Strip(g) => self.values[g.idx(i, j)],
                    Grid::Annulus(g) => self.values[g.idx(i, j)],
                };
                num += w * v;
                den += w;
            }
        }
        num / den
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Quadrature of `f(value, coord1, coord2)` over the whole domain.
    pub fn integrate(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        match self.grid {
            Grid::Torus(g) => {
                for j2 in 0..g.ny {
                    for j1 in 0..g.nx {
                        acc += self.grid.weight(j1, j2)
                            * f(self.values[g.idx(j1, j2)], g.x1(j1), g.x2(j2));
                    }
                }
            }
            Grid::Strip(g) => {
                for j2 in 0..g.nz {
                    for j1 in 0..g.nx {
                        acc += self.grid.weight(j1, j2)
                            * f(self.values[g.idx(j1, j2)], g.x1(j1), g.x2(j2));
                    }
                }
            }
            Grid::Annulus(g) => {
                for ir in 0..g.nr {
                    for jz in 0..g.nz {
                        acc += self.grid.weight(ir, jz)
                            * f(self.values[g.idx(ir, jz)], g.r(ir), g.z(jz));
                    }
                }
            }
        }
        acc
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }
}

/// Two velocity components sharing a grid: `(u1, u2)` or `(u^r, u^z)`.
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub c1: ScalarField,
    pub c2: ScalarField,
}

impl VelocityField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            c1: ScalarField::zeros(grid),
            c2: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.c1.grid
    }

    /// Pointwise maximum speed.
    pub fn max_speed(&self) -> f64 {
        self.c1
            .values
            .iter()
            .zip(self.c2.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a * a + b * b).sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;

    #[test]
    fn length_checked() {
        let g = Grid::Torus(TorusGrid::new(16, 16).unwrap());
        assert!(ScalarField::new(g, vec![0.0; 17]).is_err());
        assert!(ScalarField::new(g, vec![f64::NAN; 256]).is_err());
        assert!(ScalarField::new(g, vec![0.0; 256]).is_ok());
    }

    #[test]
    fn mean_of_constant() {
        let g = Grid::Torus(TorusGrid::new(16, 16).unwrap());
        let f = ScalarField::from_fn(g, |_, _| 3.5);
        assert!((f.mean() - 3.5).abs() < 1e-12);
    }
}
