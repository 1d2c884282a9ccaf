//! Structured grids for the three computational domains.
//!
//! All periodic axes carry `n` equispaced samples `x_j = -pi + 2*pi*j/n`
//! over `(-pi, pi]`, so the lattice always contains 0, the coordinate
//! axes, and the point identified with `pi` (stored as `-pi`). Bounded
//! axes include both endpoints.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Doubly periodic square `(-pi, pi]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    pub nx: usize,
    pub ny: usize,
}

impl TorusGrid {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 16 || n % 2 != 0 {
                return Err(Error::Config(format!(
                    "torus {name} must be even and >= 16, got {n}"
                )));
            }
        }
        Ok(Self { nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * PI / self.ny as f64
    }

    pub fn x1(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.nx as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.ny as f64
    }

    /// Row-major index with x2 as the slow axis.
    pub fn idx(&self, j1: usize, j2: usize) -> usize {
        j2 * self.nx + j1
    }
}

/// Channel `T x [0, pi]`: periodic in x1, walls at x2 = 0 and x2 = pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripGrid {
    pub nx: usize,
    /// Number of x2 levels including both endpoints.
    pub nz: usize,
}

impl StripGrid {
    pub fn new(nx: usize, nz: usize) -> Result<Self> {
        if nx < 16 || nx % 2 != 0 {
            return Err(Error::Config(format!(
                "strip nx must be even and >= 16, got {nx}"
            )));
        }
        if nz < 17 {
            return Err(Error::Config(format!("strip nz must be >= 17, got {nz}")));
        }
        Ok(Self { nx, nz })
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.nx as f64
    }

    pub fn dz(&self) -> f64 {
        PI / (self.nz - 1) as f64
    }

    pub fn x1(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.nx as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        PI * j as f64 / (self.nz - 1) as f64
    }

    pub fn idx(&self, j1: usize, j2: usize) -> usize {
        j2 * self.nx + j1
    }
}

/// Annular cylinder cross-section: r in [pi, 2*pi], z periodic over (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusGrid {
    /// Number of radial levels including both endpoints.
    pub nr: usize,
    pub nz: usize,
}

impl AnnulusGrid {
    pub fn new(nr: usize, nz: usize) -> Result<Self> {
        if nr < 17 {
            return Err(Error::Config(format!("annulus nr must be >= 17, got {nr}")));
        }
        if nz < 16 || nz % 2 != 0 {
            return Err(Error::Config(format!(
                "annulus nz must be even and >= 16, got {nz}"
            )));
        }
        Ok(Self { nr, nz })
    }

    pub fn len(&self) -> usize {
        self.nr * self.nz
    }

    pub fn dr(&self) -> f64 {
        PI / (self.nr - 1) as f64
    }

    pub fn dz(&self) -> f64 {
        2.0 * PI / self.nz as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        PI + PI * i as f64 / (self.nr - 1) as f64
    }

    pub fn z(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.nz as f64
    }

    /// Row-major with the periodic z axis contiguous.
    pub fn idx(&self, ir: usize, jz: usize) -> usize {
        ir * self.nz + jz
    }
}

/// Handle to one of the three domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Torus(TorusGrid),
    Strip(StripGrid),
    Annulus(AnnulusGrid),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::Torus(g) => g.len(),
            Grid::Strip(g) => g.len(),
            Grid::Annulus(g) => g.len(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Grid::Torus(g) => (g.nx, g.ny),
            Grid::Strip(g) => (g.nx, g.nz),
            Grid::Annulus(g) => (g.nr, g.nz),
        }
    }

    /// Smallest grid spacing, used by the CFL cap.
    pub fn min_spacing(&self) -> f64 {
        match self {
            Grid::Torus(g) => g.dx().min(g.dy()),
            Grid::Strip(g) => g.dx().min(g.dz()),
            Grid::Annulus(g) => g.dr().min(g.dz()),
        }
    }

    pub fn as_torus(&self) -> Result<TorusGrid> {
        match self {
            Grid::Torus(g) => Ok(*g),
            _ => Err(Error::UnsupportedDomain {
                op: "torus operation",
                expected: "torus grid",
            }),
        }
    }

    /// Quadrature weight of sample `(i, j)` in the grid's own index order.
    ///
    /// Periodic axes use equal weights (spectrally accurate); bounded axes
    /// use trapezoid weights with halves at the endpoints.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match self {
            Grid::Torus(g) => g.dx() * g.dy(),
            Grid::Strip(g) => {
                let wz = if j == 0 || j == g.nz - 1 { 0.5 } else { 1.0 };
                g.dx() * g.dz() * wz
            }
            Grid::Annulus(g) => {
                let wr = if i == 0 || i == g.nr - 1 { 0.5 } else { 1.0 };
                g.dr() * g.dz() * wr
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_lattice_contains_axes_and_pi() {
        let g = TorusGrid::new(64, 64).unwrap();
        assert_eq!(g.x1(0), -PI);
        assert_eq!(g.x1(32), 0.0);
        assert!((g.x1(48) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(TorusGrid::new(15, 16).is_err());
        assert!(TorusGrid::new(18, 17).is_err());
        assert!(StripGrid::new(16, 16).is_err());
        assert!(StripGrid::new(17, 33).is_err());
        assert!(AnnulusGrid::new(16, 16).is_err());
        assert!(AnnulusGrid::new(17, 15).is_err());
    }

    #[test]
    fn strip_has_boundary_rows() {
        let g = StripGrid::new(32, 17).unwrap();
        assert_eq!(g.x2(0), 0.0);
        assert!((g.x2(16) - PI).abs() < 1e-15);
    }

    #[test]
    fn annulus_endpoints() {
        let g = AnnulusGrid::new(17, 32).unwrap();
        assert_eq!(g.r(0), PI);
        assert!((g.r(16) - 2.0 * PI).abs() < 1e-15);
    }
}
