//! Fourier transforms and spectral-coefficient containers.
//!
//! Conventions: a periodic axis with `n` samples at `x_j = -pi + 2*pi*j/n`
//! stores DFT coefficients `c_p = (1/n) sum_j f_j exp(-2*pi*i*p*j/n)`,
//! indexed by `p` with signed wavenumber `k = p` for `p <= n/2` and
//! `k = p - n` otherwise. Relative to the continuum coefficient `a_k` of
//! `f(x) = sum a_k exp(i*k*x)` this carries a phase `c_k = (-1)^k a_k`,
//! which every diagonal multiplier (derivatives, norms) is blind to.
//! Spectral sums are scaled so they equal physical integrals.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;
use once_cell::sync::Lazy;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

struct PlanCache {
    planner: FftPlanner<f64>,
    fwd: HashMap<usize, Arc<dyn Fft<f64>>>,
    inv: HashMap<usize, Arc<dyn Fft<f64>>>,
}

static PLANS: Lazy<Mutex<PlanCache>> = Lazy::new(|| {
    Mutex::new(PlanCache {
        planner: FftPlanner::new(),
        fwd: HashMap::new(),
        inv: HashMap::new(),
    })
});

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = PLANS.lock().unwrap();
    let PlanCache { planner, fwd, inv } = &mut *cache;
    let map = if inverse { inv } else { fwd };
    map.entry(n)
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// In-place DFT of one line; forward applies the 1/n analysis factor.
fn dft_line(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    plan(n, inverse).process(data);
    if !inverse {
        let s = 1.0 / n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

/// Signed wavenumber of frequency slot `p` on an axis with `n` samples.
pub fn wavenumber(p: usize, n: usize) -> i64 {
    if p <= n / 2 {
        p as i64
    } else {
        p as i64 - n as i64
    }
}

/// Complex coefficients: full 2D modes on the torus, per-level modes along
/// the periodic axis on the strip and annulus.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: Grid,
    pub data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Torus coefficient accessor by frequency slots `(p1, p2)`.
    pub fn at(&self, p1: usize, p2: usize) -> Complex64 {
        let (n1, _) = self.grid.dims();
        self.data[p2 * n1 + p1]
    }

    /// Map every torus mode through `f(k1, k2, coeff)`.
    pub fn map_modes(&self, f: impl Fn(i64, i64, Complex64) -> Complex64) -> Self {
        let g = self.grid.as_torus().expect("torus spectral field");
        let mut out = self.clone();
        for p2 in 0..g.ny {
            let k2 = wavenumber(p2, g.ny);
            for p1 in 0..g.nx {
                let k1 = wavenumber(p1, g.nx);
                let idx = p2 * g.nx + p1;
                out.data[idx] = f(k1, k2, self.data[idx]);
            }
        }
        out
    }

    /// Weighted sum of `f(k1, k2, |coeff|^2)` over torus modes, scaled by
    /// `(2*pi)^2` so that `f = 1` reproduces the physical integral of the
    /// squared field.
    pub fn mode_sum(&self, f: impl Fn(i64, i64, f64) -> f64) -> f64 {
        let g = self.grid.as_torus().expect("torus spectral field");
        let mut acc = 0.0;
        for p2 in 0..g.ny {
            let k2 = wavenumber(p2, g.ny);
            for p1 in 0..g.nx {
                let k1 = wavenumber(p1, g.nx);
                acc += f(k1, k2, self.data[p2 * g.nx + p1].norm_sqr());
            }
        }
        (2.0 * PI) * (2.0 * PI) * acc
    }
}

fn rows_to_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Trigonometric interpolant of real samples on a periodic lattice
/// `x_j = -pi + 2*pi*j/n`, evaluable anywhere. The Nyquist slot is folded
/// into a real cosine so the interpolant is real and symmetric.
#[derive(Debug, Clone)]
pub struct TrigInterp1d {
    coeffs: Vec<Complex64>,
}

impl TrigInterp1d {
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut coeffs = rows_to_complex(samples);
        dft_line(&mut coeffs, false);
        Self { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        // stored c_k carry the lattice phase: f(x) = sum c_k exp(i k (x+pi))
        let y = x + PI;
        let mut acc = self.coeffs[0].re;
        for k in 1..n / 2 {
            let phase = Complex64::from_polar(1.0, k as f64 * y);
            acc += 2.0 * (self.coeffs[k] * phase).re;
        }
        acc += self.coeffs[n / 2].re * ((n / 2) as f64 * y).cos();
        acc
    }
}

/// Raw 2D forward DFT of torus samples.
pub(crate) fn fft2_fwd(g: crate::grid::TorusGrid, values: &[f64]) -> Vec<Complex64> {
    let mut data = rows_to_complex(values);
    for row in data.chunks_mut(g.nx) {
        dft_line(row, false);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); g.ny];
    for p1 in 0..g.nx {
        for j2 in 0..g.ny {
            col[j2] = data[j2 * g.nx + p1];
        }
        dft_line(&mut col, false);
        for p2 in 0..g.ny {
            data[p2 * g.nx + p1] = col[p2];
        }
    }
    data
}

/// Raw 2D inverse DFT returning the real parts.
pub(crate) fn fft2_inv(g: crate::grid::TorusGrid, spec: &[Complex64]) -> Vec<f64> {
    let mut data = spec.to_vec();
    let mut col = vec![Complex64::new(0.0, 0.0); g.ny];
    for p1 in 0..g.nx {
        for p2 in 0..g.ny {
            col[p2] = data[p2 * g.nx + p1];
        }
        dft_line(&mut col, true);
        for j2 in 0..g.ny {
            data[j2 * g.nx + p1] = col[j2];
        }
    }
    for row in data.chunks_mut(g.nx) {
        dft_line(row, true);
    }
    data.iter().map(|c| c.re).collect()
}

/// Forward DFT coefficients of one real periodic line.
pub fn fft_line_fwd(samples: &[f64]) -> Vec<Complex64> {
    let mut data = rows_to_complex(samples);
    dft_line(&mut data, false);
    data
}

/// Forward DFT of each contiguous row of length `n_fast`.
pub(crate) fn fft_rows_fwd(n_fast: usize, values: &[f64]) -> Vec<Complex64> {
    let mut data = rows_to_complex(values);
    for row in data.chunks_mut(n_fast) {
        dft_line(row, false);
    }
    data
}

/// Inverse DFT of each contiguous row, returning real parts.
pub(crate) fn fft_rows_inv(n_fast: usize, spec: &[Complex64]) -> Vec<f64> {
    let mut data = spec.to_vec();
    for row in data.chunks_mut(n_fast) {
        dft_line(row, true);
    }
    data.iter().map(|c| c.re).collect()
}

/// Forward transform: 2D on the torus, periodic-axis-only elsewhere.
pub fn transform(f: &ScalarField) -> SpectralField {
    let data = match f.grid {
        Grid::Torus(g) => fft2_fwd(g, &f.values),
        Grid::Strip(g) => fft_rows_fwd(g.nx, &f.values),
        Grid::Annulus(g) => fft_rows_fwd(g.nz, &f.values),
    };
    SpectralField { grid: f.grid, data }
}

/// Inverse of [`transform`]; imaginary residue is dropped after rounding
/// through a conjugate-symmetric spectrum.
pub fn inverse_transform(s: &SpectralField) -> ScalarField {
    let values = match s.grid {
        Grid::Torus(g) => fft2_inv(g, &s.data),
        Grid::Strip(g) => fft_rows_inv(g.nx, &s.data),
        Grid::Annulus(g) => fft_rows_inv(g.nz, &s.data),
    };
    ScalarField { grid: s.grid, values }
}

/// Physical integral of `f^2` evaluated from the spectrum (Parseval).
pub fn spectral_l2_sq(s: &SpectralField) -> f64 {
    match s.grid {
        Grid::Torus(_) => s.mode_sum(|_, _, m| m),
        Grid::Strip(g) => {
            let mut acc = 0.0;
            for j2 in 0..g.nz {
                let w = if j2 == 0 || j2 == g.nz - 1 { 0.5 } else { 1.0 } * g.dz();
                let row = &s.data[j2 * g.nx..(j2 + 1) * g.nx];
                acc += w * 2.0 * PI * row.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
            acc
        }
        Grid::Annulus(g) => {
            let mut acc = 0.0;
            for ir in 0..g.nr {
                let w = if ir == 0 || ir == g.nr - 1 { 0.5 } else { 1.0 } * g.dr();
                let row = &s.data[ir * g.nz..(ir + 1) * g.nz];
                acc += w * 2.0 * PI * row.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
            acc
        }
    }
}

/// Zero every mode above the 2/3 cutoff of the periodic axes, in place.
pub fn dealias(s: &mut SpectralField) {
    match s.grid {
        Grid::Torus(g) => {
            let c1 = g.nx as i64 / 3;
            let c2 = g.ny as i64 / 3;
            for p2 in 0..g.ny {
                let k2 = wavenumber(p2, g.ny);
                for p1 in 0..g.nx {
                    let k1 = wavenumber(p1, g.nx);
                    if k1.abs() > c1 || k2.abs() > c2 {
                        s.data[p2 * g.nx + p1] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
        Grid::Strip(g) => {
            let c1 = g.nx as i64 / 3;
            for j2 in 0..g.nz {
                for p1 in 0..g.nx {
                    if wavenumber(p1, g.nx).abs() > c1 {
                        s.data[j2 * g.nx + p1] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
        Grid::Annulus(g) => {
            let cz = g.nz as i64 / 3;
            for ir in 0..g.nr {
                for pz in 0..g.nz {
                    if wavenumber(pz, g.nz).abs() > cz {
                        s.data[ir * g.nz + pz] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
    }
}

/// Multiply by `i*k` along one periodic axis, in place. The Nyquist slot is
/// zeroed to keep the result conjugate-symmetric.
///
/// `axis`: 0 for the fast axis (x1 on torus/strip, z on annulus), 1 for the
/// torus x2 axis.
pub fn spectral_derivative(s: &mut SpectralField, axis: usize) -> Result<()> {
    let i = Complex64::new(0.0, 1.0);
    match (s.grid, axis) {
        (Grid::Torus(g), 0) | (Grid::Torus(g), 1) => {
            for p2 in 0..g.ny {
                for p1 in 0..g.nx {
                    let (k, n, p) = if axis == 0 {
                        (wavenumber(p1, g.nx), g.nx, p1)
                    } else {
                        (wavenumber(p2, g.ny), g.ny, p2)
                    };
                    let m = if p == n / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        i * k as f64
                    };
                    s.data[p2 * g.nx + p1] *= m;
                }
            }
            Ok(())
        }
        (Grid::Strip(g), 0) => {
            for j2 in 0..g.nz {
                for p1 in 0..g.nx {
                    let m = if p1 == g.nx / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        i * wavenumber(p1, g.nx) as f64
                    };
                    s.data[j2 * g.nx + p1] *= m;
                }
            }
            Ok(())
        }
        (Grid::Annulus(g), 0) => {
            for ir in 0..g.nr {
                for pz in 0..g.nz {
                    let m = if pz == g.nz / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        i * wavenumber(pz, g.nz) as f64
                    };
                    s.data[ir * g.nz + pz] *= m;
                }
            }
            Ok(())
        }
        _ => Err(Error::UnsupportedDomain {
            op: "spectral derivative",
            expected: "periodic axis",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AnnulusGrid, StripGrid, TorusGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn torus(n: usize) -> Grid {
        Grid::Torus(TorusGrid::new(n, n).unwrap())
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let f = ScalarField::zeros(torus(32));
        let s = transform(&f);
        assert!(s.data.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn cosine_hits_two_modes() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |x1, _| x1.cos());
        let s = transform(&f);
        let mut nonzero = 0;
        for p2 in 0..64 {
            for p1 in 0..64 {
                let c = s.at(p1, p2);
                if c.norm() > 1e-12 {
                    nonzero += 1;
                    let k1 = wavenumber(p1, 64);
                    let k2 = wavenumber(p2, 64);
                    assert_eq!(k1.abs(), 1);
                    assert_eq!(k2, 0);
                    assert!((c.norm() - 0.5).abs() < 1e-12);
                }
            }
        }
        assert_eq!(nonzero, 2);
    }

    fn random_band_limited(grid: Grid, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, f64, f64)> = (0..20)
            .map(|_| {
                (
                    rng.gen_range(-6..=6i64) as f64,
                    rng.gen_range(-6..=6i64) as f64,
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        ScalarField::from_fn(grid, |a, b| {
            modes
                .iter()
                .map(|(k1, k2, amp, ph)| amp * (k1 * a + k2 * b + ph).cos())
                .sum()
        })
    }

    #[test]
    fn round_trip_all_grids() {
        for grid in [
            torus(48),
            Grid::Strip(StripGrid::new(32, 21).unwrap()),
            Grid::Annulus(AnnulusGrid::new(21, 32).unwrap()),
        ] {
            let f = random_band_limited(grid, 7);
            let back = inverse_transform(&transform(&f));
            let err = f
                .values
                .iter()
                .zip(back.values.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-12, "round trip err {err} on {grid:?}");
        }
    }

    #[test]
    fn parseval_all_grids() {
        for grid in [
            torus(48),
            Grid::Strip(StripGrid::new(32, 33).unwrap()),
            Grid::Annulus(AnnulusGrid::new(33, 32).unwrap()),
        ] {
            let f = random_band_limited(grid, 3);
            let phys = f.integrate(|v, _, _| v * v);
            let spec = spectral_l2_sq(&transform(&f));
            assert!(
                (phys - spec).abs() <= 1e-10 * phys.abs().max(1.0),
                "parseval {phys} vs {spec} on {grid:?}"
            );
        }
    }

    #[test]
    fn derivative_of_single_harmonic_is_exact() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |x1, _| x1.cos());
        let mut s = transform(&f);
        spectral_derivative(&mut s, 0).unwrap();
        let d = inverse_transform(&s);
        let exact = ScalarField::from_fn(g, |x1, _| -x1.sin());
        let err = d
            .values
            .iter()
            .zip(exact.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12);
    }

    #[test]
    fn dealias_clears_high_modes() {
        let g = torus(48);
        let f = ScalarField::from_fn(g, |x1, x2| (17.0 * x1).cos() + (2.0 * x2).sin());
        let mut s = transform(&f);
        dealias(&mut s);
        let back = inverse_transform(&s);
        let expected = ScalarField::from_fn(g, |_, x2| (2.0 * x2).sin());
        let err = back
            .values
            .iter()
            .zip(expected.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12);
    }

    #[test]
    fn random_round_trip_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let g = torus(32);
        let values: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = ScalarField::new(g, values).unwrap();
        let back = inverse_transform(&transform(&f));
        let err = f
            .values
            .iter()
            .zip(back.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12);
    }
}
