//! Boussinesq solver on the torus in vorticity form.
//!
//! Time stepping is classical RK4 on the advective/buoyancy part with an
//! exact per-mode integrating factor for the viscous term, so the advective
//! CFL is the only step-size constraint.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::{Grid, TorusGrid};
use crate::ops::biot_savart_torus;
use crate::scenario::SymmetryClass;
use crate::solver::tracer::{advect_with_stages, TracerSet};
use crate::spectral::{fft2_fwd, fft2_inv, wavenumber, TrigInterp1d};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct TorusState {
    pub t: f64,
    pub rho: ScalarField,
    pub omega: ScalarField,
    /// Cached velocity, consistent with `omega` via Biot-Savart.
    pub u: VelocityField,
}

impl TorusState {
    pub fn new(t: f64, rho: ScalarField, omega: ScalarField) -> Result<Self> {
        rho.grid.as_torus()?;
        if rho.grid != omega.grid {
            return Err(Error::GridMismatch);
        }
        let u = biot_savart_torus(&omega)?;
        Ok(Self { t, rho, omega, u })
    }

    fn grid(&self) -> TorusGrid {
        self.rho.grid.as_torus().unwrap()
    }
}

/// Advective time-step cap `cfl * min(h) / max(1, |u|_inf)`.
pub fn cfl_limit(state: &TorusState, cfl: f64) -> f64 {
    cfl * state.rho.grid.min_spacing() / state.u.max_speed().max(1.0)
}

fn dealias_mask(g: TorusGrid) -> Vec<bool> {
    let c1 = g.nx as i64 / 3;
    let c2 = g.ny as i64 / 3;
    let mut mask = vec![false; g.len()];
    for p2 in 0..g.ny {
        let k2 = wavenumber(p2, g.ny);
        for p1 in 0..g.nx {
            let k1 = wavenumber(p1, g.nx);
            mask[p2 * g.nx + p1] = k1.abs() <= c1 && k2.abs() <= c2;
        }
    }
    mask
}

fn apply_mask(spec: &mut [Complex64], mask: &[bool]) {
    for (c, keep) in spec.iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

fn deriv(g: TorusGrid, spec: &[Complex64], axis: usize) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = spec.to_vec();
    for p2 in 0..g.ny {
        let k2 = wavenumber(p2, g.ny);
        for p1 in 0..g.nx {
            let k1 = wavenumber(p1, g.nx);
            let idx = p2 * g.nx + p1;
            let m = if axis == 0 {
                if p1 == g.nx / 2 { 0.0 } else { k1 as f64 }
            } else if p2 == g.ny / 2 {
                0.0
            } else {
                k2 as f64
            };
            out[idx] *= i * m;
        }
    }
    out
}

fn velocity_spec(g: TorusGrid, omega_spec: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut u1 = omega_spec.to_vec();
    let mut u2 = omega_spec.to_vec();
    for p2 in 0..g.ny {
        let k2 = wavenumber(p2, g.ny);
        for p1 in 0..g.nx {
            let k1 = wavenumber(p1, g.nx);
            let idx = p2 * g.nx + p1;
            let ksq = (k1 * k1 + k2 * k2) as f64;
            if ksq == 0.0 {
                u1[idx] = Complex64::new(0.0, 0.0);
                u2[idx] = Complex64::new(0.0, 0.0);
            } else {
                let w = omega_spec[idx];
                u1[idx] = i * (k2 as f64) * w / ksq;
                u2[idx] = -i * (k1 as f64) * w / ksq;
            }
        }
    }
    (u1, u2)
}

struct StageOut {
    d_rho: Vec<Complex64>,
    d_omega: Vec<Complex64>,
    /// Interpolant of u2 along the segment x1 = 0, for tracer coupling.
    line_u2: Option<TrigInterp1d>,
    u_max: f64,
}

/// Advective+buoyancy tendency in spectral space, with 2/3-rule dealiasing
/// of product inputs and outputs. Viscosity is handled by the integrating
/// factor outside.
fn stage_rhs(
    g: TorusGrid,
    rho_spec: &[Complex64],
    omega_spec: &[Complex64],
    mask: &[bool],
    want_line: bool,
) -> StageOut {
    let mut rs = rho_spec.to_vec();
    let mut ws = omega_spec.to_vec();
    apply_mask(&mut rs, mask);
    apply_mask(&mut ws, mask);

    let (mut u1s, mut u2s) = velocity_spec(g, &ws);
    apply_mask(&mut u1s, mask);
    apply_mask(&mut u2s, mask);
    let u1 = fft2_inv(g, &u1s);
    let u2 = fft2_inv(g, &u2s);

    let d1r = fft2_inv(g, &deriv(g, &rs, 0));
    let d2r = fft2_inv(g, &deriv(g, &rs, 1));
    let d1w = fft2_inv(g, &deriv(g, &ws, 0));
    let d2w = fft2_inv(g, &deriv(g, &ws, 1));

    let n = g.len();
    let mut trho = vec![0.0; n];
    let mut tomega = vec![0.0; n];
    for i in 0..n {
        trho[i] = -(u1[i] * d1r[i] + u2[i] * d2r[i]);
        tomega[i] = -(u1[i] * d1w[i] + u2[i] * d2w[i]);
    }

    let mut d_rho = fft2_fwd(g, &trho);
    let mut d_omega = fft2_fwd(g, &tomega);
    apply_mask(&mut d_rho, mask);
    apply_mask(&mut d_omega, mask);
    // buoyancy torque -d1(rho), added spectrally
    let d1rho_spec = deriv(g, &rs, 0);
    for (o, s) in d_omega.iter_mut().zip(d1rho_spec.iter()) {
        *o -= s;
    }

    let line_u2 = want_line.then(|| {
        let col: Vec<f64> = (0..g.ny).map(|j2| u2[g.idx(g.nx / 2, j2)]).collect();
        TrigInterp1d::from_samples(&col)
    });
    let u_max = u1
        .iter()
        .zip(u2.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a * a + b * b).sqrt()));

    StageOut {
        d_rho,
        d_omega,
        line_u2,
        u_max,
    }
}

/// Tendencies of the full system including the viscous term, as physical
/// fields. This is the reporting/test surface; `step` integrates the same
/// nonlinear core with the viscous part folded into the integrating factor.
pub fn rhs_torus(state: &TorusState, nu: f64) -> Result<(ScalarField, ScalarField)> {
    let g = state.grid();
    let mask = dealias_mask(g);
    let rho_spec = fft2_fwd(g, &state.rho.values);
    let omega_spec = fft2_fwd(g, &state.omega.values);
    let stage = stage_rhs(g, &rho_spec, &omega_spec, &mask, false);
    let mut d_omega = stage.d_omega;
    if nu > 0.0 {
        for p2 in 0..g.ny {
            let k2 = wavenumber(p2, g.ny);
            for p1 in 0..g.nx {
                let k1 = wavenumber(p1, g.nx);
                let idx = p2 * g.nx + p1;
                d_omega[idx] -= nu * ((k1 * k1 + k2 * k2) as f64) * omega_spec[idx];
            }
        }
    }
    let drho = fft2_inv(g, &stage.d_rho);
    let domega = fft2_inv(g, &d_omega);
    if !drho.iter().all(|v| v.is_finite()) || !domega.iter().all(|v| v.is_finite()) {
        return Err(Error::Blowup { t: state.t });
    }
    Ok((
        ScalarField {
            grid: state.rho.grid,
            values: drho,
        },
        ScalarField {
            grid: state.rho.grid,
            values: domega,
        },
    ))
}

fn axpy(y: &[Complex64], a: f64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x.iter()).map(|(y, x)| y + a * x).collect()
}

fn scaled(e: &[f64], x: &[Complex64]) -> Vec<Complex64> {
    e.iter().zip(x.iter()).map(|(e, x)| x * *e).collect()
}

/// One IF-RK4 step, optionally advancing tracers through the stage
/// velocities. Re-projects the symmetry class after the step.
pub fn step_with_tracers(
    state: &TorusState,
    dt: f64,
    nu: f64,
    cfl: f64,
    class: SymmetryClass,
    tracers: Option<&TracerSet>,
) -> Result<(TorusState, Option<TracerSet>)> {
    let limit = cfl_limit(state, cfl);
    if dt > limit * (1.0 + 1e-9) {
        return Err(Error::CflViolation { dt, limit });
    }
    let g = state.grid();
    let mask = dealias_mask(g);
    let want_line = tracers.is_some();

    let rho0 = fft2_fwd(g, &state.rho.values);
    let omega0 = fft2_fwd(g, &state.omega.values);

    // per-mode half/full-step integrating factors for nu*lap
    let n = g.len();
    let mut e_half = vec![1.0; n];
    let mut e_full = vec![1.0; n];
    if nu > 0.0 {
        for p2 in 0..g.ny {
            let k2 = wavenumber(p2, g.ny);
            for p1 in 0..g.nx {
                let k1 = wavenumber(p1, g.nx);
                let idx = p2 * g.nx + p1;
                let f = (-nu * ((k1 * k1 + k2 * k2) as f64) * dt / 2.0).exp();
                e_half[idx] = f;
                e_full[idx] = f * f;
            }
        }
    }

    let s1 = stage_rhs(g, &rho0, &omega0, &mask, want_line);

    let rho_b = axpy(&rho0, dt / 2.0, &s1.d_rho);
    let omega_b = scaled(&e_half, &axpy(&omega0, dt / 2.0, &s1.d_omega));
    let s2 = stage_rhs(g, &rho_b, &omega_b, &mask, want_line);

    let rho_c = axpy(&rho0, dt / 2.0, &s2.d_rho);
    let omega_c = axpy(&scaled(&e_half, &omega0), dt / 2.0, &s2.d_omega);
    let s3 = stage_rhs(g, &rho_c, &omega_c, &mask, want_line);

    let rho_d = axpy(&rho0, dt, &s3.d_rho);
    let omega_d = axpy(&scaled(&e_full, &omega0), dt, &scaled(&e_half, &s3.d_omega));
    let s4 = stage_rhs(g, &rho_d, &omega_d, &mask, want_line);

    let mut rho_new = rho0.clone();
    let mut omega_new = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        rho_new[i] = rho0[i]
            + dt / 6.0 * (s1.d_rho[i] + 2.0 * (s2.d_rho[i] + s3.d_rho[i]) + s4.d_rho[i]);
        omega_new[i] = e_full[i] * omega0[i]
            + dt / 6.0
                * (e_full[i] * s1.d_omega[i]
                    + 2.0 * e_half[i] * (s2.d_omega[i] + s3.d_omega[i])
                    + s4.d_omega[i]);
    }

    let rho_phys = fft2_inv(g, &rho_new);
    let omega_phys = fft2_inv(g, &omega_new);
    if !rho_phys.iter().all(|v| v.is_finite()) || !omega_phys.iter().all(|v| v.is_finite()) {
        return Err(Error::Blowup { t: state.t + dt });
    }

    let grid = Grid::Torus(g);
    let (rho_proj, _) = crate::scenario::symmetry_project(
        &ScalarField {
            grid,
            values: rho_phys,
        },
        class.scalar,
    );
    let (omega_proj, _) = crate::scenario::symmetry_project(
        &ScalarField {
            grid,
            values: omega_phys,
        },
        class.vorticity,
    );

    let new_tracers = tracers.map(|tr| {
        let i1 = s1.line_u2.as_ref().unwrap();
        let i2 = s2.line_u2.as_ref().unwrap();
        let i3 = s3.line_u2.as_ref().unwrap();
        let i4 = s4.line_u2.as_ref().unwrap();
        let v1 = |x: f64| i1.eval(x);
        let v2 = |x: f64| i2.eval(x);
        let v3 = |x: f64| i3.eval(x);
        let v4 = |x: f64| i4.eval(x);
        advect_with_stages(tr, dt, [&v1, &v2, &v3, &v4])
    });

    let new_state = TorusState::new(state.t + dt, rho_proj, omega_proj)?;
    let _ = (s1.u_max, s2.u_max, s3.u_max, s4.u_max);
    Ok((new_state, new_tracers))
}

pub fn step(
    state: &TorusState,
    dt: f64,
    nu: f64,
    cfl: f64,
    class: SymmetryClass,
) -> Result<TorusState> {
    Ok(step_with_tracers(state, dt, nu, cfl, class, None)?.0)
}

/// Frozen-field tracer transport: RK4 against the state's cached velocity
/// sampled by Fourier interpolation on the segment x1 = 0.
pub fn advect_tracers(state: &TorusState, tracers: &TracerSet, dt: f64) -> TracerSet {
    let g = state.grid();
    let col: Vec<f64> = (0..g.ny)
        .map(|j2| state.u.c2.values[g.idx(g.nx / 2, j2)])
        .collect();
    let interp = TrigInterp1d::from_samples(&col);
    let v = |x: f64| interp.eval(x);
    advect_with_stages(tracers, dt, [&v, &v, &v, &v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use crate::scenario::ScenarioName;

    fn grid(n: usize) -> Grid {
        Grid::Torus(TorusGrid::new(n, n).unwrap())
    }

    fn class() -> SymmetryClass {
        ScenarioName::InviscidT2.class()
    }

    fn max_abs_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        a.values
            .iter()
            .zip(b.values.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn zero_state_is_fixed() {
        let g = grid(32);
        let st = TorusState::new(0.0, ScalarField::zeros(g), ScalarField::zeros(g)).unwrap();
        let (dr, dw) = rhs_torus(&st, 0.1).unwrap();
        assert_eq!(dr.max_abs(), 0.0);
        assert_eq!(dw.max_abs(), 0.0);
        let next = step(&st, 0.01, 0.1, 0.5, class()).unwrap();
        assert_eq!(next.rho.max_abs(), 0.0);
        assert_eq!(next.omega.max_abs(), 0.0);
    }

    #[test]
    fn buoyancy_torque_closed_form() {
        let g = grid(64);
        let rho = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        let st = TorusState::new(0.0, rho, ScalarField::zeros(g)).unwrap();
        let (dr, dw) = rhs_torus(&st, 0.0).unwrap();
        assert!(dr.max_abs() <= 1e-12);
        let expected = ScalarField::from_fn(g, |x1, x2| x1.sin() * x2.sin());
        assert!(max_abs_diff(&dw, &expected) <= 1e-12);
    }

    #[test]
    fn stratified_density_is_steady() {
        let g = grid(64);
        let rho = ScalarField::from_fn(g, |_, x2| x2.sin() + 0.3 * (2.0 * x2).sin());
        let st = TorusState::new(0.0, rho.clone(), ScalarField::zeros(g)).unwrap();
        let (dr, dw) = rhs_torus(&st, 0.0).unwrap();
        assert!(dr.max_abs() <= 1e-13);
        assert!(dw.max_abs() <= 1e-13);
        // one step leaves the state unchanged to roundoff
        let next = step(
            &st,
            0.01,
            0.0,
            0.5,
            SymmetryClass {
                scalar: crate::scenario::FieldParity { a1: None, a2: None },
                vorticity: crate::scenario::FieldParity { a1: None, a2: None },
            },
        )
        .unwrap();
        assert!(max_abs_diff(&next.rho, &rho) <= 1e-13);
        assert!(next.omega.max_abs() <= 1e-13);
    }

    #[test]
    fn richardson_order_of_step() {
        // one dt step vs two dt/2 steps differ at O(dt^5)
        let g = grid(48);
        let rho = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        let omega =
            ScalarField::from_fn(g, |x1, x2| 0.7 * x1.sin() * x2.sin() + 0.2 * (2.0 * x1).sin() * x2.sin());
        let st = TorusState::new(0.0, rho, omega).unwrap();
        let nu = 0.05;
        let cl = class();

        let diff_at = |dt: f64| {
            let full = step(&st, dt, nu, 0.9, cl).unwrap();
            let half = step(&st, dt / 2.0, nu, 0.9, cl).unwrap();
            let half2 = step(&half, dt / 2.0, nu, 0.9, cl).unwrap();
            max_abs_diff(&full.omega, &half2.omega)
        };
        let d1 = diff_at(0.02);
        let d2 = diff_at(0.01);
        let rate = d1 / d2;
        assert!(
            rate > 16.0 && rate < 80.0,
            "Richardson ratio {rate} (d1 = {d1:.3e}, d2 = {d2:.3e})"
        );
    }

    #[test]
    fn cfl_violation_detected() {
        let g = grid(32);
        let omega = ScalarField::from_fn(g, |x1, x2| 40.0 * x1.sin() * x2.sin());
        let st = TorusState::new(0.0, ScalarField::zeros(g), omega).unwrap();
        let err = step(&st, 1.0, 0.0, 0.5, class());
        assert!(matches!(err, Err(Error::CflViolation { .. })));
    }

    #[test]
    fn mean_vorticity_conserved() {
        let g = grid(48);
        let rho = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        let omega = ScalarField::from_fn(g, |x1, x2| 0.5 * x1.sin() * x2.sin());
        let mut st = TorusState::new(0.0, rho, omega).unwrap();
        let m0 = st.omega.mean();
        for _ in 0..20 {
            st = step(&st, 0.01, 0.0, 0.5, class()).unwrap();
        }
        assert!((st.omega.mean() - m0).abs() <= 1e-12);
    }
}
