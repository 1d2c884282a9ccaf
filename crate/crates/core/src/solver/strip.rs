//! Inviscid Boussinesq on the channel with a Dirichlet streamfunction solve.
//!
//! x1 is spectral, x2 uses finite differences: 2nd-order three-point inside
//! the per-wavenumber Poisson solve, 4th-order stencils for transport
//! derivatives.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::{Grid, StripGrid};
use crate::ops::{derivative, Axis};
use crate::scenario::{symmetry_project, SymmetryClass};
use crate::spectral::{fft_rows_fwd, fft_rows_inv, wavenumber};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct StripState {
    pub t: f64,
    pub rho: ScalarField,
    pub omega: ScalarField,
    /// Streamfunction with psi = 0 on both walls.
    pub psi: ScalarField,
    pub u: VelocityField,
}

impl StripState {
    pub fn new(t: f64, rho: ScalarField, omega: ScalarField) -> Result<Self> {
        let g = match rho.grid {
            Grid::Strip(g) => g,
            _ => {
                return Err(Error::UnsupportedDomain {
                    op: "strip state",
                    expected: "strip grid",
                })
            }
        };
        if rho.grid != omega.grid {
            return Err(Error::GridMismatch);
        }
        let psi = poisson_dirichlet_strip(&omega)?;
        let u = velocity_from_psi(g, &psi)?;
        Ok(Self { t, rho, omega, psi, u })
    }
}

/// Solve `(k^2 - D2^2) psi_k = omega_k` per x1 wavenumber with homogeneous
/// Dirichlet ends; D2^2 is the three-point second difference.
fn poisson_spec(g: StripGrid, omega_spec: &[Complex64]) -> Vec<Complex64> {
    let n = g.nz;
    let h = g.dz();
    let inv_h2 = 1.0 / (h * h);
    let mut psi = vec![Complex64::new(0.0, 0.0); omega_spec.len()];
    let m = n - 2; // interior unknowns
    let mut cp = vec![0.0; m];
    let mut dp = vec![Complex64::new(0.0, 0.0); m];
    for p1 in 0..g.nx {
        let k = wavenumber(p1, g.nx) as f64;
        let diag = k * k + 2.0 * inv_h2;
        let off = -inv_h2;
        // Thomas forward sweep
        cp[0] = off / diag;
        dp[0] = omega_spec[g.nx + p1] / diag;
        for i in 1..m {
            let denom = diag - off * cp[i - 1];
            cp[i] = off / denom;
            dp[i] = (omega_spec[(i + 1) * g.nx + p1] - off * dp[i - 1]) / denom;
        }
        // back substitution
        let mut prev = dp[m - 1];
        psi[m * g.nx + p1] = prev;
        for i in (0..m - 1).rev() {
            prev = dp[i] - cp[i] * prev;
            psi[(i + 1) * g.nx + p1] = prev;
        }
    }
    psi
}

/// Streamfunction of a strip vorticity field, `-lap psi = omega`, psi = 0
/// on both walls.
pub fn poisson_dirichlet_strip(omega: &ScalarField) -> Result<ScalarField> {
    let g = match omega.grid {
        Grid::Strip(g) => g,
        _ => {
            return Err(Error::UnsupportedDomain {
                op: "poisson_dirichlet_strip",
                expected: "strip grid",
            })
        }
    };
    let spec = fft_rows_fwd(g.nx, &omega.values);
    let psi_spec = poisson_spec(g, &spec);
    Ok(ScalarField {
        grid: omega.grid,
        values: fft_rows_inv(g.nx, &psi_spec),
    })
}

/// Residual of the discrete operator `(k^2 - D2^2) psi - omega`, sup over
/// interior modes. Test oracle for the solver.
pub fn poisson_residual_strip(omega: &ScalarField, psi: &ScalarField) -> Result<f64> {
    let g = match omega.grid {
        Grid::Strip(g) => g,
        _ => {
            return Err(Error::UnsupportedDomain {
                op: "poisson_residual_strip",
                expected: "strip grid",
            })
        }
    };
    let ws = fft_rows_fwd(g.nx, &omega.values);
    let ps = fft_rows_fwd(g.nx, &psi.values);
    let inv_h2 = 1.0 / (g.dz() * g.dz());
    let mut worst = 0.0f64;
    for p1 in 0..g.nx {
        let k = wavenumber(p1, g.nx) as f64;
        for i in 1..g.nz - 1 {
            let lap = (ps[(i + 1) * g.nx + p1] - 2.0 * ps[i * g.nx + p1]
                + ps[(i - 1) * g.nx + p1])
                * inv_h2;
            let r = (k * k * ps[i * g.nx + p1] - lap) - ws[i * g.nx + p1];
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Velocity `(d2 psi, -d1 psi)`; the curl of this orientation reproduces
/// `omega = -lap psi`. u2 vanishes identically on the walls since psi does.
fn velocity_from_psi(g: StripGrid, psi: &ScalarField) -> Result<VelocityField> {
    let u1 = derivative(psi, Axis::A2)?;
    let mut spec = fft_rows_fwd(g.nx, &psi.values);
    let i = Complex64::new(0.0, 1.0);
    for j2 in 0..g.nz {
        for p1 in 0..g.nx {
            let m = if p1 == g.nx / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                -i * wavenumber(p1, g.nx) as f64
            };
            spec[j2 * g.nx + p1] *= m;
        }
    }
    let u2 = ScalarField {
        grid: psi.grid,
        values: fft_rows_inv(g.nx, &spec),
    };
    Ok(VelocityField { c1: u1, c2: u2 })
}

pub fn cfl_limit(state: &StripState, cfl: f64) -> f64 {
    cfl * state.rho.grid.min_spacing() / state.u.max_speed().max(1.0)
}

fn mask_x1(g: StripGrid, spec: &mut [Complex64]) {
    let cut = g.nx as i64 / 3;
    for j2 in 0..g.nz {
        for p1 in 0..g.nx {
            if wavenumber(p1, g.nx).abs() > cut {
                spec[j2 * g.nx + p1] = Complex64::new(0.0, 0.0);
            }
        }
    }
}

fn d1_spec(g: StripGrid, spec: &[Complex64]) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = spec.to_vec();
    for j2 in 0..g.nz {
        for p1 in 0..g.nx {
            let m = if p1 == g.nx / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                i * wavenumber(p1, g.nx) as f64
            };
            out[j2 * g.nx + p1] *= m;
        }
    }
    out
}

struct StripStage {
    d_rho: Vec<f64>,
    d_omega: Vec<f64>,
}

fn stage_rhs(
    g: StripGrid,
    rho: &[f64],
    omega: &[f64],
    class: SymmetryClass,
) -> Result<StripStage> {
    let grid = Grid::Strip(g);
    let (rho_p, _) = symmetry_project(
        &ScalarField {
            grid,
            values: rho.to_vec(),
        },
        class.scalar,
    );
    let (omega_p, _) = symmetry_project(
        &ScalarField {
            grid,
            values: omega.to_vec(),
        },
        class.vorticity,
    );

    let mut rho_hat = fft_rows_fwd(g.nx, &rho_p.values);
    let mut omega_hat = fft_rows_fwd(g.nx, &omega_p.values);
    mask_x1(g, &mut rho_hat);
    mask_x1(g, &mut omega_hat);
    let rho_m = fft_rows_inv(g.nx, &rho_hat);
    let omega_m = fft_rows_inv(g.nx, &omega_hat);

    let psi_hat = poisson_spec(g, &omega_hat);
    let psi = ScalarField {
        grid,
        values: fft_rows_inv(g.nx, &psi_hat),
    };
    let u = velocity_from_psi(g, &psi)?;

    let d1r = fft_rows_inv(g.nx, &d1_spec(g, &rho_hat));
    let d1w = fft_rows_inv(g.nx, &d1_spec(g, &omega_hat));
    let d2r = derivative(
        &ScalarField {
            grid,
            values: rho_m,
        },
        Axis::A2,
    )?;
    let d2w = derivative(
        &ScalarField {
            grid,
            values: omega_m,
        },
        Axis::A2,
    )?;

    let n = g.len();
    let mut t_rho = vec![0.0; n];
    let mut t_omega = vec![0.0; n];
    for i in 0..n {
        t_rho[i] = -(u.c1.values[i] * d1r[i] + u.c2.values[i] * d2r.values[i]);
        t_omega[i] = -(u.c1.values[i] * d1w[i] + u.c2.values[i] * d2w.values[i]) - d1r[i];
    }
    let mut tr_hat = fft_rows_fwd(g.nx, &t_rho);
    let mut tw_hat = fft_rows_fwd(g.nx, &t_omega);
    mask_x1(g, &mut tr_hat);
    mask_x1(g, &mut tw_hat);
    let d_rho = fft_rows_inv(g.nx, &tr_hat);
    let d_omega = fft_rows_inv(g.nx, &tw_hat);
    if !d_rho.iter().all(|v| v.is_finite()) || !d_omega.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("strip tendencies"));
    }
    Ok(StripStage { d_rho, d_omega })
}

/// One classical RK4 step; each stage re-solves psi and re-projects the
/// symmetry class.
pub fn step_strip(
    state: &StripState,
    dt: f64,
    cfl: f64,
    class: SymmetryClass,
) -> Result<StripState> {
    let limit = cfl_limit(state, cfl);
    if dt > limit * (1.0 + 1e-9) {
        return Err(Error::CflViolation { dt, limit });
    }
    let g = match state.rho.grid {
        Grid::Strip(g) => g,
        _ => unreachable!(),
    };
    let n = g.len();
    let add = |y: &[f64], a: f64, x: &[f64]| -> Vec<f64> {
        y.iter().zip(x.iter()).map(|(y, x)| y + a * x).collect()
    };

    let blow = |e: Error| match e {
        Error::NonFinite(_) => Error::Blowup { t: state.t },
        e => e,
    };

    let k1 = stage_rhs(g, &state.rho.values, &state.omega.values, class).map_err(blow)?;
    let k2 = stage_rhs(
        g,
        &add(&state.rho.values, dt / 2.0, &k1.d_rho),
        &add(&state.omega.values, dt / 2.0, &k1.d_omega),
        class,
    )
    .map_err(blow)?;
    let k3 = stage_rhs(
        g,
        &add(&state.rho.values, dt / 2.0, &k2.d_rho),
        &add(&state.omega.values, dt / 2.0, &k2.d_omega),
        class,
    )
    .map_err(blow)?;
    let k4 = stage_rhs(
        g,
        &add(&state.rho.values, dt, &k3.d_rho),
        &add(&state.omega.values, dt, &k3.d_omega),
        class,
    )
    .map_err(blow)?;

    let mut rho = vec![0.0; n];
    let mut omega = vec![0.0; n];
    for i in 0..n {
        rho[i] = state.rho.values[i]
            + dt / 6.0 * (k1.d_rho[i] + 2.0 * (k2.d_rho[i] + k3.d_rho[i]) + k4.d_rho[i]);
        omega[i] = state.omega.values[i]
            + dt / 6.0
                * (k1.d_omega[i] + 2.0 * (k2.d_omega[i] + k3.d_omega[i]) + k4.d_omega[i]);
    }
    if !rho.iter().all(|v| v.is_finite()) || !omega.iter().all(|v| v.is_finite()) {
        return Err(Error::Blowup { t: state.t + dt });
    }
    let grid = Grid::Strip(g);
    let (rho, _) = symmetry_project(&ScalarField { grid, values: rho }, class.scalar);
    let (omega, _) = symmetry_project(&ScalarField { grid, values: omega }, class.vorticity);
    StripState::new(state.t + dt, rho, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::StripGrid;
    use crate::ops::{integrate_strip_q, lp_norm};
    use crate::scenario::ScenarioName;
    use std::f64::consts::PI;

    fn grid(nx: usize, nz: usize) -> Grid {
        Grid::Strip(StripGrid::new(nx, nz).unwrap())
    }

    #[test]
    fn poisson_zero() {
        let psi = poisson_dirichlet_strip(&ScalarField::zeros(grid(32, 17))).unwrap();
        assert_eq!(psi.max_abs(), 0.0);
    }

    #[test]
    fn poisson_eigenfunction_second_order() {
        let errs: Vec<f64> = [33usize, 65]
            .iter()
            .map(|&nz| {
                let g = grid(32, nz);
                let omega = ScalarField::from_fn(g, |x1, x2| 2.0 * x1.sin() * x2.sin());
                let psi = poisson_dirichlet_strip(&omega).unwrap();
                let exact = ScalarField::from_fn(g, |x1, x2| x1.sin() * x2.sin());
                psi.values
                    .iter()
                    .zip(exact.values.iter())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            })
            .collect();
        let rate = errs[0] / errs[1];
        assert!(rate > 3.0 && rate < 6.0, "rate {rate}, errs {errs:?}");
    }

    #[test]
    fn poisson_discrete_residual() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = grid(32, 33);
        let vals: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let omega = ScalarField::new(g, vals).unwrap();
        let psi = poisson_dirichlet_strip(&omega).unwrap();
        let res = poisson_residual_strip(&omega, &psi).unwrap();
        assert!(res <= 1e-12 * omega.max_abs().max(1.0), "residual {res}");
    }

    #[test]
    fn walls_have_no_normal_flow() {
        let g = grid(48, 33);
        let omega = ScalarField::from_fn(g, |x1, x2| x1.sin() * (2.0 * x2).sin());
        let st = StripState::new(0.0, ScalarField::zeros(g), omega).unwrap();
        let sg = match g {
            Grid::Strip(s) => s,
            _ => unreachable!(),
        };
        for j1 in 0..sg.nx {
            assert_eq!(st.u.c2.values[sg.idx(j1, 0)], 0.0);
            assert_eq!(st.u.c2.values[sg.idx(j1, sg.nz - 1)], 0.0);
        }
    }

    #[test]
    fn zero_and_stratified_states_are_steady() {
        let g = grid(32, 33);
        let class = ScenarioName::StripInvB.class();
        let zero = StripState::new(0.0, ScalarField::zeros(g), ScalarField::zeros(g)).unwrap();
        let next = step_strip(&zero, 0.01, 0.5, class).unwrap();
        assert_eq!(next.rho.max_abs(), 0.0);

        let rho = ScalarField::from_fn(g, |_, x2| (x2 - PI / 2.0).tanh());
        let st = StripState::new(0.0, rho.clone(), ScalarField::zeros(g)).unwrap();
        let next = step_strip(&st, 0.01, 0.5, class).unwrap();
        let drift = next
            .rho
            .values
            .iter()
            .zip(rho.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(drift <= 1e-13, "stratified drift {drift}");
        assert!(next.omega.max_abs() <= 1e-13);
    }

    #[test]
    fn initial_vorticity_flux_is_two_pi() {
        // d/dt int_Q omega at t=0 for rho0 = cos x1 equals
        // int_0^pi rho(0) - rho(pi) dx2 = 2 pi
        let g = grid(64, 33);
        let class = ScenarioName::StripInvB.class();
        let rho = ScalarField::from_fn(g, |x1, _| x1.cos());
        let st = StripState::new(0.0, rho, ScalarField::zeros(g)).unwrap();
        let dt = 2e-3;
        let s1 = step_strip(&st, dt, 0.5, class).unwrap();
        let s2 = step_strip(&s1, dt, 0.5, class).unwrap();
        let a0 = integrate_strip_q(&st.omega).unwrap();
        let a1 = integrate_strip_q(&s1.omega).unwrap();
        let a2 = integrate_strip_q(&s2.omega).unwrap();
        let rate = (-3.0 * a0 + 4.0 * a1 - a2) / (2.0 * dt);
        assert!(
            (rate - 2.0 * PI).abs() <= 0.005 * 2.0 * PI,
            "measured A'(0) = {rate}"
        );
    }

    #[test]
    fn short_run_conserves_density_norms() {
        let g = grid(64, 33);
        let class = ScenarioName::StripInvB.class();
        let rho = ScalarField::from_fn(g, |x1, _| x1.cos());
        let mut st = StripState::new(0.0, rho, ScalarField::zeros(g)).unwrap();
        let l1_0 = lp_norm(&st.rho, 1.0).unwrap();
        let linf_0 = lp_norm(&st.rho, f64::INFINITY).unwrap();
        for _ in 0..40 {
            st = step_strip(&st, 0.01, 0.5, class).unwrap();
        }
        let l1 = lp_norm(&st.rho, 1.0).unwrap();
        let linf = lp_norm(&st.rho, f64::INFINITY).unwrap();
        assert!((l1 - l1_0).abs() / l1_0 <= 5e-3, "L1 drift");
        assert!((linf - linf_0).abs() / linf_0 <= 5e-3, "Linf drift");
    }
}
