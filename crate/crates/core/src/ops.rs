//! Differential and integral operators on scalar/velocity fields.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::Grid;
use crate::spectral::{inverse_transform, spectral_derivative, transform};
use rustfft::num_complex::Complex64;

/// Coordinate axis selector: `A1` is x1 (or r), `A2` is x2 (or z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    A1,
    A2,
}

/// 4th-order differences along the slow (bounded) axis with one-sided
/// closures at the two rows nearest each wall.
fn fd4_slow_axis(values: &[f64], n_fast: usize, n_slow: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let v = |i: usize, j: usize| values[i * n_fast + j];
    let s = 1.0 / (12.0 * h);
    for j in 0..n_fast {
        out[j] = s * (-25.0 * v(0, j) + 48.0 * v(1, j) - 36.0 * v(2, j) + 16.0 * v(3, j)
            - 3.0 * v(4, j));
        out[n_fast + j] =
            s * (-3.0 * v(0, j) - 10.0 * v(1, j) + 18.0 * v(2, j) - 6.0 * v(3, j) + v(4, j));
        for i in 2..n_slow - 2 {
            out[i * n_fast + j] =
                s * (v(i - 2, j) - 8.0 * v(i - 1, j) + 8.0 * v(i + 1, j) - v(i + 2, j));
        }
        let m = n_slow - 1;
        out[(m - 1) * n_fast + j] = -s
            * (-3.0 * v(m, j) - 10.0 * v(m - 1, j) + 18.0 * v(m - 2, j) - 6.0 * v(m - 3, j)
                + v(m - 4, j));
        out[m * n_fast + j] = -s
            * (-25.0 * v(m, j) + 48.0 * v(m - 1, j) - 36.0 * v(m - 2, j) + 16.0 * v(m - 3, j)
                - 3.0 * v(m - 4, j));
    }
    out
}

/// Partial derivative: spectral multiplier on periodic axes, 4th-order
/// differences on bounded axes.
pub fn derivative(f: &ScalarField, axis: Axis) -> Result<ScalarField> {
    if !f.is_finite() {
        return Err(Error::NonFinite("derivative input"));
    }
    match (f.grid, axis) {
        (Grid::Torus(_), _) => {
            let mut s = transform(f);
            spectral_derivative(&mut s, if axis == Axis::A1 { 0 } else { 1 })?;
            Ok(inverse_transform(&s))
        }
        (Grid::Strip(_), Axis::A1) => {
            let mut s = transform(f);
            spectral_derivative(&mut s, 0)?;
            Ok(inverse_transform(&s))
        }
        (Grid::Strip(g), Axis::A2) => Ok(ScalarField {
            grid: f.grid,
            values: fd4_slow_axis(&f.values, g.nx, g.nz, g.dz()),
        }),
        (Grid::Annulus(g), Axis::A1) => Ok(ScalarField {
            grid: f.grid,
            values: fd4_slow_axis(&f.values, g.nz, g.nr, g.dr()),
        }),
        (Grid::Annulus(_), Axis::A2) => {
            let mut s = transform(f);
            spectral_derivative(&mut s, 0)?;
            Ok(inverse_transform(&s))
        }
    }
}

/// Mean-zero solution of `-lap g = f - mean(f)` on the torus.
pub fn inverse_laplacian_torus(f: &ScalarField) -> Result<ScalarField> {
    f.grid.as_torus()?;
    let s = transform(f);
    let g = s.map_modes(|k1, k2, c| {
        let k2sum = (k1 * k1 + k2 * k2) as f64;
        if k2sum == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            c / k2sum
        }
    });
    Ok(inverse_transform(&g))
}

/// Velocity recovery from vorticity on the torus.
///
/// Orientation is fixed by the requirement `curl u = omega` (the mean of
/// `omega` is subtracted): `u1_hat = i k2 w_hat/|k|^2`,
/// `u2_hat = -i k1 w_hat/|k|^2`.
pub fn biot_savart_torus(omega: &ScalarField) -> Result<VelocityField> {
    omega.grid.as_torus()?;
    let s = transform(omega);
    let i = Complex64::new(0.0, 1.0);
    let u1 = s.map_modes(|k1, k2, c| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            i * k2 as f64 * c / ksq
        }
    });
    let u2 = s.map_modes(|k1, k2, c| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            -i * k1 as f64 * c / ksq
        }
    });
    Ok(VelocityField {
        c1: inverse_transform(&u1),
        c2: inverse_transform(&u2),
    })
}

/// Torus vorticity of a velocity field, `d1 u2 - d2 u1`.
pub fn curl_torus(u: &VelocityField) -> Result<ScalarField> {
    let d1u2 = derivative(&u.c2, Axis::A1)?;
    let d2u1 = derivative(&u.c1, Axis::A2)?;
    Ok(d1u2.zip(&d2u1, |a, b| a - b))
}

/// Discrete divergence in the grid's own metric.
///
/// Torus: spectral both axes. Strip: spectral x1 + 4th-order x2. Annulus:
/// cylindrical form `(1/r) d_r(r u^r) + d_z u^z`.
pub fn divergence(u: &VelocityField) -> Result<ScalarField> {
    match u.grid() {
        Grid::Torus(_) | Grid::Strip(_) => {
            let d1 = derivative(&u.c1, Axis::A1)?;
            let d2 = derivative(&u.c2, Axis::A2)?;
            Ok(d1.zip(&d2, |a, b| a + b))
        }
        Grid::Annulus(g) => {
            let mut ru_r = u.c1.clone();
            for ir in 0..g.nr {
                let r = g.r(ir);
                for jz in 0..g.nz {
                    ru_r.values[g.idx(ir, jz)] *= r;
                }
            }
            let mut d_r = derivative(&ru_r, Axis::A1)?;
            for ir in 0..g.nr {
                let r = g.r(ir);
                for jz in 0..g.nz {
                    d_r.values[g.idx(ir, jz)] /= r;
                }
            }
            let d_z = derivative(&u.c2, Axis::A2)?;
            Ok(d_r.zip(&d_z, |a, b| a + b))
        }
    }
}

/// Homogeneous Sobolev norm on the torus via the `|k|^s` multiplier, zero
/// mode excluded, scaled so `s = 0` matches the physical L2 norm of the
/// mean-free part.
pub fn sobolev_norm(f: &ScalarField, s: f64) -> Result<f64> {
    f.grid.as_torus()?;
    if !(-2.0..=6.0).contains(&s) {
        return Err(Error::DomainArg(format!("sobolev order s={s} outside [-2, 6]")));
    }
    let spec = transform(f);
    let sum = spec.mode_sum(|k1, k2, m| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            0.0
        } else {
            ksq.powf(s) * m
        }
    });
    Ok(sum.max(0.0).sqrt())
}

/// `delta = ||d1 f||^2` in the H^-1 seminorm: the `k1^2/|k|^2` multiplier
/// sum, zero mode excluded. Always at most the squared L2 norm.
pub fn delta_functional(f: &ScalarField) -> Result<f64> {
    f.grid.as_torus()?;
    let spec = transform(f);
    Ok(spec.mode_sum(|k1, k2, m| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            0.0
        } else {
            (k1 * k1) as f64 / ksq * m
        }
    }))
}

/// Same multiplier sum evaluated on an already-transformed field.
pub fn delta_of_spectrum(spec: &crate::spectral::SpectralField) -> f64 {
    spec.mode_sum(|k1, k2, m| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            0.0
        } else {
            (k1 * k1) as f64 / ksq * m
        }
    })
}

/// Lp norm by grid quadrature; `p = inf` returns the sample max.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::DomainArg(format!("lp order p={p} < 1")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let int = f.integrate(|v, _, _| v.abs().powf(p));
    Ok(int.powf(1.0 / p))
}

/// Sup of `|grad f|` over the samples, using [`derivative`] per axis.
pub fn grad_sup(f: &ScalarField) -> Result<f64> {
    let d1 = derivative(f, Axis::A1)?;
    let d2 = derivative(f, Axis::A2)?;
    Ok(d1
        .values
        .iter()
        .zip(d2.values.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a * a + b * b).sqrt())))
}

/// `||grad u||_{L2}^2` on the torus, via the vorticity identity
/// `int |grad u|^2 = int omega^2` for mean-free divergence-free fields.
pub fn grad_u_l2_sq_from_omega_spec(omega_spec: &crate::spectral::SpectralField) -> f64 {
    omega_spec.mode_sum(|k1, k2, m| if k1 == 0 && k2 == 0 { 0.0 } else { m })
}

/// Trapezoid quadrature over the sub-square `Q = [0,pi]^2` of a torus field.
pub fn integrate_torus_q(f: &ScalarField) -> Result<f64> {
    let g = f.grid.as_torus()?;
    let (hx, hy) = (g.dx(), g.dy());
    let (mx, my) = (g.nx / 2, g.ny / 2);
    let mut acc = 0.0;
    for i in 0..=mx {
        // Q spans lattice slots nx/2 .. nx with the wrap standing in for pi.
        let j1 = (g.nx / 2 + i) % g.nx;
        let w1 = if i == 0 || i == mx { 0.5 } else { 1.0 };
        for j in 0..=my {
            let j2 = (g.ny / 2 + j) % g.ny;
            let w2 = if j == 0 || j == my { 0.5 } else { 1.0 };
            acc += w1 * w2 * f.values[g.idx(j1, j2)];
        }
    }
    Ok(acc * hx * hy)
}

/// Trapezoid quadrature over `Q = [0,pi]^2` of a strip field.
pub fn integrate_strip_q(f: &ScalarField) -> Result<f64> {
    match f.grid {
        Grid::Strip(g) => {
            let (hx, hz) = (g.dx(), g.dz());
            let mx = g.nx / 2;
            let mut acc = 0.0;
            for i in 0..=mx {
                let j1 = (g.nx / 2 + i) % g.nx;
                let w1 = if i == 0 || i == mx { 0.5 } else { 1.0 };
                for j2 in 0..g.nz {
                    let w2 = if j2 == 0 || j2 == g.nz - 1 { 0.5 } else { 1.0 };
                    acc += w1 * w2 * f.values[g.idx(j1, j2)];
                }
            }
            Ok(acc * hx * hz)
        }
        _ => Err(Error::UnsupportedDomain {
            op: "integrate_strip_q",
            expected: "strip grid",
        }),
    }
}

/// Trapezoid quadrature over `Q = [pi,2pi] x [0,pi]` of an annulus field,
/// plain `dr dz` measure.
pub fn integrate_annulus_q(f: &ScalarField) -> Result<f64> {
    match f.grid {
        Grid::Annulus(g) => {
            let (hr, hz) = (g.dr(), g.dz());
            let mz = g.nz / 2;
            let mut acc = 0.0;
            for ir in 0..g.nr {
                let wr = if ir == 0 || ir == g.nr - 1 { 0.5 } else { 1.0 };
                for j in 0..=mz {
                    let jz = (g.nz / 2 + j) % g.nz;
                    let wz = if j == 0 || j == mz { 0.5 } else { 1.0 };
                    acc += wr * wz * f.values[g.idx(ir, jz)];
                }
            }
            Ok(acc * hr * hz)
        }
        _ => Err(Error::UnsupportedDomain {
            op: "integrate_annulus_q",
            expected: "annulus grid",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AnnulusGrid, StripGrid, TorusGrid};
    use std::f64::consts::PI;

    fn torus(n: usize) -> Grid {
        Grid::Torus(TorusGrid::new(n, n).unwrap())
    }

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        a.values
            .iter()
            .zip(b.values.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn derivative_examples() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |x1, _| x1.cos());
        let d = derivative(&f, Axis::A1).unwrap();
        let exact = ScalarField::from_fn(g, |x1, _| -x1.sin());
        assert!(max_diff(&d, &exact) <= 1e-12);

        let h = ScalarField::from_fn(g, |x1, _| (2.0 * x1).sin());
        let d2 = derivative(&h, Axis::A2).unwrap();
        assert!(d2.max_abs() <= 1e-12);
    }

    #[test]
    fn strip_x2_derivative_is_fourth_order() {
        let errs: Vec<f64> = [33usize, 65]
            .iter()
            .map(|&nz| {
                let g = Grid::Strip(StripGrid::new(16, nz).unwrap());
                let f = ScalarField::from_fn(g, |_, x2| x2.sin());
                let d = derivative(&f, Axis::A2).unwrap();
                let exact = ScalarField::from_fn(g, |_, x2| x2.cos());
                max_diff(&d, &exact)
            })
            .collect();
        let rate = errs[0] / errs[1];
        assert!(rate > 8.0 && rate < 40.0, "refinement ratio {rate}, errs {errs:?}");
    }

    #[test]
    fn annulus_r_derivative_is_fourth_order() {
        let errs: Vec<f64> = [33usize, 65]
            .iter()
            .map(|&nr| {
                let g = Grid::Annulus(AnnulusGrid::new(nr, 16).unwrap());
                let f = ScalarField::from_fn(g, |r, _| (r - PI).sin());
                let d = derivative(&f, Axis::A1).unwrap();
                let exact = ScalarField::from_fn(g, |r, _| (r - PI).cos());
                max_diff(&d, &exact)
            })
            .collect();
        let rate = errs[0] / errs[1];
        assert!(rate > 8.0 && rate < 40.0, "refinement ratio {rate}");
    }

    #[test]
    fn inverse_laplacian_eigenfunctions() {
        let g = torus(48);
        let f = ScalarField::from_fn(g, |x1, _| x1.cos());
        let sol = inverse_laplacian_torus(&f).unwrap();
        assert!(max_diff(&sol, &f) <= 1e-12);

        let f2 = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        let sol2 = inverse_laplacian_torus(&f2).unwrap();
        let exact = f2.scale(0.5);
        assert!(max_diff(&sol2, &exact) <= 1e-12);
    }

    #[test]
    fn inverse_laplacian_forward_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g = torus(48);
        let modes: Vec<(f64, f64, f64)> = (0..15)
            .map(|_| {
                (
                    rng.gen_range(-8..=8i64) as f64,
                    rng.gen_range(-8..=8i64) as f64,
                    rng.gen_range(-1.0..1.0),
                )
            })
            .filter(|(k1, k2, _)| *k1 != 0.0 || *k2 != 0.0)
            .collect();
        let f = ScalarField::from_fn(g, |x1, x2| {
            modes.iter().map(|(k1, k2, a)| a * (k1 * x1 + k2 * x2).cos()).sum()
        });
        let sol = inverse_laplacian_torus(&f).unwrap();
        // forward -lap via spectral |k|^2 multiplier
        let spec = transform(&sol);
        let lap = spec.map_modes(|k1, k2, c| c * ((k1 * k1 + k2 * k2) as f64));
        let fwd = inverse_transform(&lap);
        let mean = f.mean();
        let target = f.map(|v| v - mean);
        assert!(max_diff(&fwd, &target) <= 1e-10 * f.max_abs());
    }

    #[test]
    fn biot_savart_zero() {
        let u = biot_savart_torus(&ScalarField::zeros(torus(32))).unwrap();
        assert_eq!(u.max_speed(), 0.0);
    }

    #[test]
    fn biot_savart_closed_form_and_curl_oracle() {
        let g = torus(48);
        let omega = ScalarField::from_fn(g, |x1, x2| 2.0 * x1.sin() * x2.sin());
        let u = biot_savart_torus(&omega).unwrap();
        // curl u must reproduce omega
        let w = curl_torus(&u).unwrap();
        assert!(max_diff(&w, &omega) <= 1e-10 * omega.max_abs());
        // stream function is sin(x1) sin(x2); orientation with curl u = +omega
        let exact1 = ScalarField::from_fn(g, |x1, x2| x1.sin() * x2.cos());
        let exact2 = ScalarField::from_fn(g, |x1, x2| -x1.cos() * x2.sin());
        assert!(max_diff(&u.c1, &exact1) <= 1e-12);
        assert!(max_diff(&u.c2, &exact2) <= 1e-12);
        let div = divergence(&u).unwrap();
        assert!(div.max_abs() <= 1e-10);
    }

    #[test]
    fn biot_savart_random_suite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = torus(48);
        for _ in 0..100 {
            let modes: Vec<(f64, f64, f64, f64)> = (0..12)
                .map(|_| {
                    (
                        rng.gen_range(-8..=8i64) as f64,
                        rng.gen_range(-8..=8i64) as f64,
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(0.0..2.0 * PI),
                    )
                })
                .filter(|(k1, k2, _, _)| *k1 != 0.0 || *k2 != 0.0)
                .collect();
            let omega = ScalarField::from_fn(g, |x1, x2| {
                modes
                    .iter()
                    .map(|(k1, k2, a, p)| a * (k1 * x1 + k2 * x2 + p).cos())
                    .sum()
            });
            let u = biot_savart_torus(&omega).unwrap();
            let div = divergence(&u).unwrap();
            assert!(div.max_abs() <= 1e-10);
            let w = curl_torus(&u).unwrap();
            let scale = omega.max_abs().max(1e-30);
            assert!(max_diff(&w, &omega) / scale <= 1e-10);
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        assert!((sobolev_norm(&f, 0.0).unwrap() - PI).abs() <= 1e-12);
        assert!((sobolev_norm(&f, 1.0).unwrap() - 2f64.sqrt() * PI).abs() <= 1e-12);
        let c = ScalarField::from_fn(g, |_, _| 4.2);
        assert!(sobolev_norm(&c, 2.0).unwrap() <= 1e-12);
        assert!(sobolev_norm(&f, 7.0).is_err());
        let strip = ScalarField::zeros(Grid::Strip(StripGrid::new(16, 17).unwrap()));
        assert!(sobolev_norm(&strip, 1.0).is_err());
    }

    #[test]
    fn delta_functional_examples() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |_, x2| x2.sin());
        assert!(delta_functional(&f).unwrap().abs() <= 1e-13);
        let f2 = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        assert!((delta_functional(&f2).unwrap() - PI * PI / 2.0).abs() <= 1e-12);
        // delta <= L2 norm squared
        let l2 = lp_norm(&f2, 2.0).unwrap();
        assert!(delta_functional(&f2).unwrap() <= l2 * l2 + 1e-10);
    }

    #[test]
    fn lp_and_grad_sup_examples() {
        let g = torus(64);
        let f = ScalarField::from_fn(g, |_, x2| x2.sin());
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() <= 1e-14);
        assert!(lp_norm(&f, 0.5).is_err());

        let f2 = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        assert!((grad_sup(&f2).unwrap() - 1.0).abs() <= 1e-12);

        let ones = ScalarField::from_fn(Grid::Strip(StripGrid::new(32, 33).unwrap()), |_, _| 1.0);
        assert!((lp_norm(&ones, 1.0).unwrap() - 2.0 * PI * PI).abs() <= 1e-10);
    }

    #[test]
    fn q_quadrature_examples() {
        let g = torus(256);
        let w = ScalarField::from_fn(g, |x1, x2| 2.0 * x1.sin() * x2.sin());
        let a = integrate_torus_q(&w).unwrap();
        assert!((a - 8.0).abs() <= 1e-3 * 8.0, "vort_int {a}");
    }
}
