//! Monitored functionals, the canonical diagnostics row, and the
//! theorem-bound ratio monitors.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::Grid;
use crate::ops::{
    delta_functional, grad_sup, integrate_annulus_q, integrate_strip_q, integrate_torus_q,
    lp_norm, sobolev_norm,
};
use crate::scenario::{symmetry_project, ScenarioName, SymmetryClass};
use crate::solver::SimState;
use crate::spectral::{inverse_transform, transform, wavenumber};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

/// Lemma 3.1's universal constant.
pub const C0_LEMMA: f64 = 1.0 / (128.0 * PI * PI);

/// Uniform discretization slack applied to every theorem assertion.
pub const SLACK: f64 = 0.01;

/// One time sample of every monitored functional, in canonical CSV order.
/// Entries that do not apply to a model are emitted as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub e_p: f64,
    pub e_k: f64,
    /// Accumulated `nu * int_0^t ||grad u||_L2^2`, trapezoid per step.
    pub diss_acc: f64,
    pub delta: f64,
    pub a_press: f64,
    pub b_visc: f64,
    pub vort_int: f64,
    pub boundary_flux: f64,
    pub hs: Vec<f64>,
    pub lp_omega: Vec<f64>,
    pub u_inf: f64,
    pub grad_rho_inf: f64,
    /// Accumulated `int_0^t ||grad rho||_inf`, trapezoid per step.
    pub f_acc: f64,
    pub h_gap: f64,
    pub ms: Vec<f64>,
    pub eta: f64,
}

pub fn csv_columns(s_list: &[f64], p_list: &[f64]) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t",
        "E_P",
        "E_K",
        "diss_acc",
        "delta",
        "A_press",
        "B_visc",
        "vort_int",
        "boundary_flux",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for s in s_list {
        cols.push(format!("Hs:{s}"));
    }
    for p in p_list {
        cols.push(format!("Lp_omega:{}", fmt_p(*p)));
    }
    cols.extend(
        ["u_inf", "grad_rho_inf", "F_acc", "h"]
            .iter()
            .map(|s| s.to_string()),
    );
    for s in s_list {
        cols.push(format!("Ms:{s}"));
    }
    cols.push("eta".to_string());
    cols
}

pub fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

impl DiagnosticsRow {
    pub fn csv_line(&self) -> String {
        let mut parts: Vec<String> = vec![
            format!("{}", self.t),
            format!("{}", self.e_p),
            format!("{}", self.e_k),
            format!("{}", self.diss_acc),
            format!("{}", self.delta),
            format!("{}", self.a_press),
            format!("{}", self.b_visc),
            format!("{}", self.vort_int),
            format!("{}", self.boundary_flux),
        ];
        parts.extend(self.hs.iter().map(|v| format!("{v}")));
        parts.extend(self.lp_omega.iter().map(|v| format!("{v}")));
        parts.push(format!("{}", self.u_inf));
        parts.push(format!("{}", self.grad_rho_inf));
        parts.push(format!("{}", self.f_acc));
        parts.push(format!("{}", self.h_gap));
        parts.extend(self.ms.iter().map(|v| format!("{v}")));
        parts.push(format!("{}", self.eta));
        parts.join(",")
    }

    pub fn is_finite(&self) -> bool {
        let scalars = [
            self.t,
            self.e_p,
            self.e_k,
            self.diss_acc,
            self.delta,
            self.a_press,
            self.b_visc,
            self.vort_int,
            self.boundary_flux,
            self.u_inf,
            self.grad_rho_inf,
            self.f_acc,
            self.h_gap,
            self.eta,
        ];
        scalars.iter().all(|v| v.is_finite())
            && self.hs.iter().all(|v| v.is_finite())
            && self.lp_omega.iter().all(|v| v.is_finite())
            && self.ms.iter().all(|v| v.is_finite())
    }
}

/// Buoyancy-weighted moment `int f * x2` (z on the annulus), grid weights.
pub fn potential_energy(f: &ScalarField) -> f64 {
    f.integrate(|v, _, x2| v * x2)
}

/// `1/2 int |u|^2` on the torus and strip.
pub fn kinetic_energy(u: &VelocityField) -> f64 {
    0.5 * u
        .c1
        .integrate(|v, _, _| v * v)
        + 0.5 * u.c2.integrate(|v, _, _| v * v)
}

/// `1/2 int r (u_r^2 + u_z^2 + u_theta^2) dr dz` on the annulus.
pub fn kinetic_energy_axisym(u: &VelocityField, u_theta: &ScalarField) -> f64 {
    let merid = u
        .c1
        .zip(&u.c2, |a, b| a * a + b * b)
        .zip(u_theta, |m, s| m + s * s);
    0.5 * merid.integrate(|v, r, _| v * r)
}

/// `int rho u2` -- the rate of change of the potential energy.
pub fn ep_prime(rho: &ScalarField, u: &VelocityField) -> f64 {
    rho.zip(&u.c2, |a, b| a * b).integrate(|v, _, _| v)
}

/// The second-derivative decomposition `(A_press, B_visc, delta)` of the
/// potential energy on the torus.
pub fn ep_second_decomposition(
    rho: &ScalarField,
    u: &VelocityField,
    nu: f64,
) -> Result<(f64, f64, f64)> {
    let g = rho.grid.as_torus()?;
    let rho_spec = transform(rho);
    let i = Complex64::new(0.0, 1.0);
    // f = (-lap)^{-1} d2 rho
    let f_spec = rho_spec.map_modes(|k1, k2, c| {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            i * (k2 as f64) * c / ksq
        }
    });
    let f = inverse_transform(&f_spec);

    let du = |comp: &ScalarField, axis: usize| -> ScalarField {
        let spec = transform(comp);
        let g2 = spec.grid.as_torus().unwrap();
        let mut d = spec.clone();
        for p2 in 0..g2.ny {
            let k2 = wavenumber(p2, g2.ny);
            for p1 in 0..g2.nx {
                let k1 = wavenumber(p1, g2.nx);
                let idx = p2 * g2.nx + p1;
                let m = if axis == 0 {
                    if p1 == g2.nx / 2 { 0.0 } else { k1 as f64 }
                } else if p2 == g2.ny / 2 {
                    0.0
                } else {
                    k2 as f64
                };
                d.data[idx] = spec.data[idx] * i * m;
            }
        }
        inverse_transform(&d)
    };
    let d1u1 = du(&u.c1, 0);
    let d2u2 = du(&u.c2, 1);
    let d1u2 = du(&u.c2, 0);
    let d2u1 = du(&u.c1, 1);

    let mut a_press = 0.0;
    for j2 in 0..g.ny {
        for j1 in 0..g.nx {
            let idx = g.idx(j1, j2);
            let contr = d1u1.values[idx] * d1u1.values[idx]
                + d2u2.values[idx] * d2u2.values[idx]
                + 2.0 * d1u2.values[idx] * d2u1.values[idx];
            a_press += f.values[idx] * contr;
        }
    }
    a_press *= g.dx() * g.dy();

    let b_visc = if nu == 0.0 {
        0.0
    } else {
        let u2_spec = transform(&u.c2);
        let lap = u2_spec.map_modes(|k1, k2, c| -((k1 * k1 + k2 * k2) as f64) * c);
        let lap_u2 = inverse_transform(&lap);
        nu * rho.zip(&lap_u2, |a, b| a * b).integrate(|v, _, _| v)
    };

    let delta = delta_functional(rho)?;
    Ok((a_press, b_visc, delta))
}

/// Max relative defect of `E_P + E_K + diss_acc = E_P(0) + E_K(0)` over a
/// series of rows.
pub fn energy_budget_residual(rows: &[DiagnosticsRow]) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::Input("empty diagnostics series".into()));
    }
    let e0 = rows[0].e_p + rows[0].e_k;
    let denom = e0.abs() + 1e-12;
    Ok(rows
        .iter()
        .map(|r| (r.e_p + r.e_k + r.diss_acc - e0).abs() / denom)
        .fold(0.0, f64::max))
}

/// `int_Q omega` over the model's monitored square.
pub fn vorticity_integral(omega: &ScalarField) -> Result<f64> {
    match omega.grid {
        Grid::Torus(_) => integrate_torus_q(omega),
        Grid::Strip(_) => integrate_strip_q(omega),
        Grid::Annulus(_) => integrate_annulus_q(omega),
    }
}

fn trapz_segment(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Density line values on `{x1 = c} x [0,pi]`, ordered by increasing x2.
fn torus_line(rho: &ScalarField, j1: usize) -> Vec<f64> {
    let g = rho.grid.as_torus().unwrap();
    (0..=g.ny / 2)
        .map(|j| rho.values[g.idx(j1, (g.ny / 2 + j) % g.ny)])
        .collect()
}

/// `int_0^pi rho(0, x2) - rho(pi, x2) dx2` on the torus.
pub fn boundary_flux_torus(rho: &ScalarField) -> Result<f64> {
    let g = rho.grid.as_torus()?;
    let left = torus_line(rho, g.nx / 2);
    let right = torus_line(rho, 0);
    Ok(trapz_segment(&left, g.dy()) - trapz_segment(&right, g.dy()))
}

/// Same two line integrals on the strip.
pub fn boundary_flux_strip(rho: &ScalarField) -> Result<f64> {
    match rho.grid {
        Grid::Strip(g) => {
            let left: Vec<f64> = (0..g.nz).map(|j2| rho.values[g.idx(g.nx / 2, j2)]).collect();
            let right: Vec<f64> = (0..g.nz).map(|j2| rho.values[g.idx(0, j2)]).collect();
            Ok(trapz_segment(&left, g.dz()) - trapz_segment(&right, g.dz()))
        }
        _ => Err(Error::UnsupportedDomain {
            op: "boundary_flux_strip",
            expected: "strip grid",
        }),
    }
}

/// Swirl production `int_pi^{2pi} (1/r)(u_theta(r,pi)^2 - u_theta(r,0)^2) dr`.
pub fn swirl_production(u_theta: &ScalarField) -> Result<f64> {
    match u_theta.grid {
        Grid::Annulus(g) => {
            let vals: Vec<f64> = (0..g.nr)
                .map(|ir| {
                    let top = u_theta.values[g.idx(ir, 0)]; // z = pi (wrap)
                    let bottom = u_theta.values[g.idx(ir, g.nz / 2)]; // z = 0
                    (top * top - bottom * bottom) / g.r(ir)
                })
                .collect();
            Ok(trapz_segment(&vals, g.dr()))
        }
        _ => Err(Error::UnsupportedDomain {
            op: "swirl_production",
            expected: "annulus grid",
        }),
    }
}

/// Per-output side measurements that are not CSV columns but feed the
/// monitors and the acceptance suite.
#[derive(Debug, Clone, Default)]
pub struct SideSample {
    pub ep_prime: f64,
    /// Torus/strip: min of rho on {0} x [0,pi]. Axisym: min u_theta on z=pi.
    pub line0_min: f64,
    /// Torus/strip: max of rho on {pi} x [0,pi].
    pub linepi_max: f64,
    /// Axisym: max |u_theta| on z = 0.
    pub ceiling_abs_max: f64,
    pub gamma_max: f64,
    pub gamma_min: f64,
    pub rho_l1: f64,
    pub rho_l2: f64,
    pub rho_linf: f64,
    pub u2_wall_max: f64,
    /// Relative sup-distance of the scalar field from its symmetry class.
    pub sym_residual: f64,
    pub tracer_valid: bool,
}

/// State-derived portion of a diagnostics row. Accumulators (diss, F, h,
/// Ms, eta) are left at zero; the run loop owns them.
pub fn state_row(
    state: &SimState,
    nu: f64,
    s_list: &[f64],
    p_list: &[f64],
    class: Option<SymmetryClass>,
) -> Result<(DiagnosticsRow, SideSample)> {
    let mut row = DiagnosticsRow {
        t: state.time(),
        e_p: 0.0,
        e_k: 0.0,
        diss_acc: 0.0,
        delta: 0.0,
        a_press: 0.0,
        b_visc: 0.0,
        vort_int: 0.0,
        boundary_flux: 0.0,
        hs: vec![0.0; s_list.len()],
        lp_omega: vec![0.0; p_list.len()],
        u_inf: 0.0,
        grad_rho_inf: 0.0,
        f_acc: 0.0,
        h_gap: 0.0,
        ms: vec![0.0; s_list.len()],
        eta: 0.0,
    };
    let mut side = SideSample::default();

    match state {
        SimState::Torus(st) => {
            row.e_p = potential_energy(&st.rho);
            row.e_k = kinetic_energy(&st.u);
            let (a, b, d) = ep_second_decomposition(&st.rho, &st.u, nu)?;
            row.a_press = a;
            row.b_visc = b;
            row.delta = d;
            row.vort_int = vorticity_integral(&st.omega)?;
            row.boundary_flux = boundary_flux_torus(&st.rho)?;
            for (i, s) in s_list.iter().enumerate() {
                row.hs[i] = sobolev_norm(&st.rho, *s)?;
            }
            for (i, p) in p_list.iter().enumerate() {
                row.lp_omega[i] = lp_norm(&st.omega, *p)?;
            }
            row.u_inf = st.u.max_speed();
            row.grad_rho_inf = grad_sup(&st.rho)?;

            side.ep_prime = ep_prime(&st.rho, &st.u);
            let g = st.rho.grid.as_torus().unwrap();
            let l0 = torus_line(&st.rho, g.nx / 2);
            let lpi = torus_line(&st.rho, 0);
            side.line0_min = l0.iter().copied().fold(f64::MAX, f64::min);
            side.linepi_max = lpi.iter().copied().fold(f64::MIN, f64::max);
            side.rho_l1 = lp_norm(&st.rho, 1.0)?;
            side.rho_l2 = lp_norm(&st.rho, 2.0)?;
            side.rho_linf = lp_norm(&st.rho, f64::INFINITY)?;
            if let Some(cl) = class {
                let (_, moved) = symmetry_project(&st.rho, cl.scalar);
                side.sym_residual = moved / st.rho.max_abs().max(1e-30);
            }
        }
        SimState::Strip(st) => {
            row.e_p = potential_energy(&st.rho);
            row.e_k = kinetic_energy(&st.u);
            row.vort_int = vorticity_integral(&st.omega)?;
            row.boundary_flux = boundary_flux_strip(&st.rho)?;
            for (i, p) in p_list.iter().enumerate() {
                row.lp_omega[i] = lp_norm(&st.omega, *p)?;
            }
            row.u_inf = st.u.max_speed();
            row.grad_rho_inf = grad_sup(&st.rho)?;

            side.ep_prime = ep_prime(&st.rho, &st.u);
            let g = match st.rho.grid {
                Grid::Strip(g) => g,
                _ => unreachable!(),
            };
            side.line0_min = (0..g.nz)
                .map(|j2| st.rho.values[g.idx(g.nx / 2, j2)])
                .fold(f64::MAX, f64::min);
            side.linepi_max = (0..g.nz)
                .map(|j2| st.rho.values[g.idx(0, j2)])
                .fold(f64::MIN, f64::max);
            side.rho_l1 = lp_norm(&st.rho, 1.0)?;
            side.rho_l2 = lp_norm(&st.rho, 2.0)?;
            side.rho_linf = lp_norm(&st.rho, f64::INFINITY)?;
            side.u2_wall_max = (0..g.nx)
                .map(|j1| {
                    st.u.c2.values[g.idx(j1, 0)]
                        .abs()
                        .max(st.u.c2.values[g.idx(j1, g.nz - 1)].abs())
                })
                .fold(0.0, f64::max);
            if let Some(cl) = class {
                let (_, moved) = symmetry_project(&st.rho, cl.scalar);
                side.sym_residual = moved / st.rho.max_abs().max(1e-30);
            }
        }
        SimState::Axisym(st) => {
            let g = match st.u_theta.grid {
                Grid::Annulus(g) => g,
                _ => unreachable!(),
            };
            let gamma = ScalarField {
                grid: st.u_theta.grid,
                values: (0..g.nr)
                    .flat_map(|ir| {
                        let r = g.r(ir);
                        (0..g.nz).map(move |jz| (ir, jz, r))
                    })
                    .map(|(ir, jz, r)| r * st.u_theta.values[g.idx(ir, jz)])
                    .collect(),
            };
            row.e_p = potential_energy(&gamma);
            row.e_k = kinetic_energy_axisym(&st.u, &st.u_theta);
            row.vort_int = vorticity_integral(&st.omega_theta)?;
            row.boundary_flux = swirl_production(&st.u_theta)?;
            for (i, p) in p_list.iter().enumerate() {
                row.lp_omega[i] = lp_norm(&st.omega_theta, *p)?;
            }
            let speed3 = st
                .u
                .c1
                .values
                .iter()
                .zip(st.u.c2.values.iter())
                .zip(st.u_theta.values.iter())
                .fold(0.0f64, |m, ((a, b), c)| {
                    m.max((a * a + b * b + c * c).sqrt())
                });
            row.u_inf = speed3;

            side.line0_min = (0..g.nr)
                .map(|ir| st.u_theta.values[g.idx(ir, 0)])
                .fold(f64::MAX, f64::min);
            side.ceiling_abs_max = (0..g.nr)
                .map(|ir| st.u_theta.values[g.idx(ir, g.nz / 2)].abs())
                .fold(0.0, f64::max);
            side.gamma_max = gamma.values.iter().copied().fold(f64::MIN, f64::max);
            side.gamma_min = gamma.values.iter().copied().fold(f64::MAX, f64::min);
            if let Some(cl) = class {
                let (_, moved) = symmetry_project(&st.u_theta, cl.scalar);
                side.sym_residual = moved / st.u_theta.max_abs().max(1e-30);
            }
        }
    }
    if !row.is_finite() {
        return Err(Error::Blowup { t: state.time() });
    }
    Ok((row, side))
}

// ---------------------------------------------------------------------------
// Growth monitors
// ---------------------------------------------------------------------------

/// Scenario constants feeding the theorem-bound monitors.
#[derive(Debug, Clone)]
pub struct MonitorParams {
    pub scenario: ScenarioName,
    pub nu: f64,
    pub k0: f64,
    /// Upper bound for the kinetic energy entering the vorticity lemma.
    pub e0_lemma: f64,
    /// Vorticity integral at t = 0.
    pub a0: f64,
    pub omega0_linf: f64,
    pub omega0_l1: f64,
    pub rho0_linf: f64,
    pub s_list: Vec<f64>,
    pub p_list: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AtLeast,
    AtMost,
}

/// Outcome of one monitored bound over a run.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: String,
    pub direction: Direction,
    /// Worst observed value (min for AtLeast, max for AtMost).
    pub value: f64,
    pub threshold: f64,
    pub arg_t: f64,
    pub asserted: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct MonitorReport {
    pub rows: Vec<CheckRow>,
}

impl MonitorReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().filter(|r| r.asserted).all(|r| r.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let rel = match r.direction {
                Direction::AtLeast => ">=",
                Direction::AtMost => "<=",
            };
            let verdict = if !r.asserted {
                "REPORTED"
            } else if r.pass {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "{:<28} worst {:>13.6e} {} {:>13.6e} at t={:.4}  {}\n",
                r.name, r.value, rel, r.threshold, r.arg_t, verdict
            ));
        }
        out
    }
}

struct Mon<'a> {
    rows: &'a [DiagnosticsRow],
    side: &'a [SideSample],
    out: MonitorReport,
}

impl<'a> Mon<'a> {
    fn at_most(&mut self, name: &str, series: impl Iterator<Item = (f64, f64)>, thr: f64, asserted: bool) {
        let mut worst = f64::MIN;
        let mut arg = 0.0;
        let mut any = false;
        for (t, v) in series {
            any = true;
            if v > worst {
                worst = v;
                arg = t;
            }
        }
        if !any {
            return;
        }
        self.out.rows.push(CheckRow {
            name: name.into(),
            direction: Direction::AtMost,
            value: worst,
            threshold: thr,
            arg_t: arg,
            asserted,
            pass: worst <= thr,
        });
    }

    fn at_least(&mut self, name: &str, series: impl Iterator<Item = (f64, f64)>, thr: f64, asserted: bool) {
        let mut worst = f64::MAX;
        let mut arg = 0.0;
        let mut any = false;
        for (t, v) in series {
            any = true;
            if v < worst {
                worst = v;
                arg = t;
            }
        }
        if !any {
            return;
        }
        self.out.rows.push(CheckRow {
            name: name.into(),
            direction: Direction::AtLeast,
            value: worst,
            threshold: thr,
            arg_t: arg,
            asserted,
            pass: worst >= thr,
        });
    }

    fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Centered finite difference of a column over output times.
    fn fd(&self, get: impl Fn(&DiagnosticsRow) -> f64) -> Vec<(usize, f64)> {
        let n = self.rows.len();
        let mut out = vec![];
        for i in 1..n.saturating_sub(1) {
            let dt = self.rows[i + 1].t - self.rows[i - 1].t;
            if dt > 0.0 {
                out.push((i, (get(&self.rows[i + 1]) - get(&self.rows[i - 1])) / dt));
            }
        }
        out
    }

    /// Trapezoid prefix integral of a per-row quantity.
    fn prefix_integral(&self, vals: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; vals.len()];
        for i in 1..vals.len() {
            let dt = self.rows[i].t - self.rows[i - 1].t;
            acc[i] = acc[i - 1] + 0.5 * dt * (vals[i] + vals[i - 1]);
        }
        acc
    }

    fn flux_consistency(&mut self) {
        let fd = self.fd(|r| r.vort_int);
        let scale = self
            .rows
            .iter()
            .map(|r| r.boundary_flux.abs())
            .fold(0.0, f64::max)
            .max(1e-12);
        let series: Vec<(f64, f64)> = fd
            .iter()
            .map(|&(i, v)| {
                let flux = self.rows[i].boundary_flux;
                (self.rows[i].t, (v - flux).abs() / flux.abs().max(0.01 * scale))
            })
            .collect();
        self.at_most("flux-consistency", series.into_iter(), SLACK, true);
    }

    fn vort_monotone(&mut self) {
        let series: Vec<(f64, f64)> = self
            .rows
            .windows(2)
            .map(|w| (w[1].t, w[0].vort_int - w[1].vort_int))
            .collect();
        self.at_most("vort-int-monotone", series.into_iter(), 1e-8, true);
    }

    fn lp_conservation(&mut self, tol: f64, with_l2: bool) {
        let r0 = &self.side[0];
        let mk = |get: fn(&SideSample) -> f64, base: f64| {
            self.side
                .iter()
                .zip(self.rows.iter())
                .map(move |(s, r)| (r.t, (get(s) - base).abs() / base.max(1e-12)))
                .collect::<Vec<_>>()
        };
        let l1 = mk(|s| s.rho_l1, r0.rho_l1);
        self.at_most("rho-L1-conservation", l1.into_iter(), tol, true);
        if with_l2 {
            let l2 = mk(|s| s.rho_l2, r0.rho_l2);
            self.at_most("rho-L2-conservation", l2.into_iter(), tol, true);
        }
        let li = mk(|s| s.rho_linf, r0.rho_linf);
        self.at_most("rho-Linf-conservation", li.into_iter(), tol, true);
    }
}

fn p_exponents(p: f64) -> (f64, f64) {
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    (-1.0 + inv_p, 3.0 - 2.0 * inv_p)
}

/// Evaluate every monitored bound of the scenario over an emitted series.
pub fn growth_monitors(
    rows: &[DiagnosticsRow],
    side: &[SideSample],
    params: &MonitorParams,
) -> Result<MonitorReport> {
    if rows.len() != side.len() {
        return Err(Error::Input("series and side samples differ in length".into()));
    }
    if rows.is_empty() {
        return Ok(MonitorReport::default());
    }
    let mut mon = Mon {
        rows,
        side,
        out: MonitorReport::default(),
    };
    let times = mon.times();
    let k0 = params.k0;

    // Lemma 3.1 instantaneous bound against the measured vorticity integral
    let omega_lp_checks = |mon: &mut Mon| {
        for (ip, &p) in params.p_list.iter().enumerate() {
            let (ee, ae) = p_exponents(p);
            let series: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.vort_int.abs() > 1e-9)
                .map(|r| {
                    let bound = C0_LEMMA * params.e0_lemma.powf(ee) * r.vort_int.abs().powf(ae);
                    (r.t, r.lp_omega[ip] / bound)
                })
                .collect();
            mon.at_least(
                &format!("omega-lp-bound-p{}", fmt_p(p)),
                series.into_iter(),
                1.0 - SLACK,
                true,
            );
        }
    };
    let bd_u_check = |mon: &mut Mon| {
        let series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.vort_int.abs() > 1e-9)
            .map(|r| (r.t, 4.0 * PI * r.u_inf / r.vort_int.abs()))
            .collect();
        mon.at_least("bd-u", series.into_iter(), 1.0 - SLACK, true);
    };

    match params.scenario {
        ScenarioName::ViscousT2 => {
            let resid = energy_budget_residual(rows)?;
            mon.out.rows.push(CheckRow {
                name: "energy-budget".into(),
                direction: Direction::AtMost,
                value: resid,
                threshold: 1e-5,
                arg_t: 0.0,
                asserted: true,
                pass: resid <= 1e-5,
            });
            let e0 = rows[0].e_p + rows[0].e_k;
            mon.at_least(
                "ep-nonnegative",
                rows.iter().map(|r| (r.t, r.e_p)),
                -SLACK * e0,
                true,
            );
            mon.at_most(
                "ep-bounded",
                rows.iter().map(|r| (r.t, r.e_p)),
                e0 * (1.0 + SLACK),
                true,
            );
            // E_P' identity: centered difference of E_P vs int rho u2
            let fd = mon.fd(|r| r.e_p);
            let tol = 1e-4 * rows[0].e_p.max(1.0);
            let series: Vec<(f64, f64)> = fd
                .iter()
                .map(|&(i, v)| (times[i], (v - side[i].ep_prime).abs()))
                .collect();
            mon.at_most("ep-prime-identity", series.into_iter(), tol, true);
            // Lemma 2.1: centered difference of E_P' vs A + B - delta
            let eps: Vec<f64> = side.iter().map(|s| s.ep_prime).collect();
            let mut series = vec![];
            for i in 1..rows.len().saturating_sub(1) {
                let dt = times[i + 1] - times[i - 1];
                let fd2 = (eps[i + 1] - eps[i - 1]) / dt;
                let r = &rows[i];
                let scale = r.a_press.abs().max(r.b_visc.abs()).max(r.delta).max(1.0);
                series.push((times[i], (fd2 - (r.a_press + r.b_visc - r.delta)).abs() / scale));
            }
            mon.at_most("lemma21-identity", series.into_iter(), 1e-3, true);
            mon.lp_conservation(1e-3, true);
            mon.at_most(
                "symmetry-projection",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.sym_residual)),
                1e-12,
                true,
            );
            mon.flux_consistency();
            // Theorem 1.1 torus exponent trajectories, reported only
            for (is, &s) in params.s_list.iter().enumerate() {
                let expo = s * (2.0 * s - 1.0) / (8.0 * s - 2.0);
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.t > 0.0)
                    .map(|r| (r.t, r.ms[is] / r.t.powf(expo)))
                    .collect();
                mon.at_least(
                    &format!("thm11-ratio-s{s}"),
                    series.into_iter(),
                    0.0,
                    false,
                );
            }
        }
        ScenarioName::InviscidT2 => {
            let resid = energy_budget_residual(rows)?;
            mon.out.rows.push(CheckRow {
                name: "energy-budget".into(),
                direction: Direction::AtMost,
                value: resid,
                threshold: 1e-6,
                arg_t: 0.0,
                asserted: true,
                pass: resid <= 1e-6,
            });
            mon.at_least(
                "rho-sign-line0",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.line0_min)),
                -1e-8,
                true,
            );
            mon.at_most(
                "rho-sign-linepi",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.linepi_max)),
                1e-8,
                true,
            );
            let valid = |i: usize| side[i].tracer_valid && rows[i].h_gap > 0.0;
            let rhoc: Vec<(f64, f64)> = (0..rows.len())
                .filter(|&i| valid(i))
                .map(|i| (times[i], rows[i].grad_rho_inf * rows[i].h_gap * 2.0 / k0))
                .collect();
            mon.at_least("rhoc", rhoc.into_iter(), 1.0 - SLACK, true);
            let wml: Vec<(f64, f64)> = (0..rows.len())
                .filter(|&i| valid(i))
                .map(|i| (times[i], rows[i].boundary_flux / (0.5 * k0 * rows[i].h_gap)))
                .collect();
            mon.at_least("w-mono-lower", wml.into_iter(), 1.0 - SLACK, true);
            // ineqA: A(t) >= A(0) + (k0^2/4) int 1/grad
            let inv_grad: Vec<f64> = rows
                .iter()
                .map(|r| 1.0 / r.grad_rho_inf.max(1e-12))
                .collect();
            let acc = mon.prefix_integral(&inv_grad);
            let a0 = rows[0].vort_int;
            let series: Vec<(f64, f64)> = (1..rows.len())
                .map(|i| {
                    let bound = a0 + k0 * k0 / 4.0 * acc[i];
                    (times[i], rows[i].vort_int / bound)
                })
                .filter(|(_, v)| v.is_finite())
                .collect();
            mon.at_least("ineqA", series.into_iter(), 1.0 - SLACK, true);
            // omup upper bound
            let series: Vec<(f64, f64)> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let bound = r.f_acc + params.omega0_linf;
                    let p_inf = params
                        .p_list
                        .iter()
                        .position(|p| p.is_infinite())
                        .map(|ip| r.lp_omega[ip])
                        .unwrap_or(0.0);
                    let _ = i;
                    (r.t, (p_inf - bound) / bound.max(1e-12))
                })
                .collect();
            mon.at_most("omup", series.into_iter(), SLACK, true);
            mon.vort_monotone();
            mon.lp_conservation(1e-3, true);
            mon.at_most(
                "symmetry-projection",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.sym_residual)),
                1e-12,
                true,
            );
            mon.flux_consistency();
            // Theorem 1.2 rate, reported in its two regimes
            let run_sup: Vec<f64> = rows
                .iter()
                .scan(0.0f64, |m, r| {
                    *m = m.max(r.grad_rho_inf);
                    Some(*m)
                })
                .collect();
            let large: Vec<(f64, f64)> = (0..rows.len())
                .filter(|&i| times[i] >= 1.0)
                .map(|i| (times[i], run_sup[i] / times[i].sqrt()))
                .collect();
            mon.at_least("thm12-rate-large-t", large.into_iter(), 0.0, false);
            let floor: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.t, r.grad_rho_inf / (k0 / PI)))
                .collect();
            mon.at_least("thm12-grad-floor", floor.into_iter(), 0.0, false);
        }
        ScenarioName::StripInvB => {
            // inviscid free-slip energy conservation, relative to run scale
            let e0 = rows[0].e_p + rows[0].e_k;
            let scale = rows
                .iter()
                .map(|r| r.e_p.abs() + r.e_k.abs())
                .fold(1e-12, f64::max);
            let series: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.t, (r.e_p + r.e_k - e0).abs() / scale))
                .collect();
            mon.at_most("energy-drift", series.into_iter(), 1e-5, true);
            let tol = 1e-6 * params.rho0_linf;
            mon.at_least(
                "rho-floor-line0",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.line0_min)),
                k0 - tol,
                true,
            );
            mon.at_most(
                "rho-ceil-linepi",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.linepi_max)),
                tol,
                true,
            );
            // ineq_A with the waiting-time case split
            let a0 = rows[0].vort_int;
            if a0 >= 0.0 {
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.t > 0.0)
                    .map(|r| (r.t, r.vort_int / (k0 * PI * r.t + a0)))
                    .collect();
                mon.at_least("ineq-A", series.into_iter(), 1.0 - SLACK, true);
            } else {
                let t0 = 2.0 * a0.abs() / (k0 * PI);
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.t >= t0 && r.t > 0.0)
                    .map(|r| (r.t, r.vort_int / (0.5 * k0 * PI * r.t)))
                    .collect();
                mon.at_least("ineq-A-after-T0", series.into_iter(), 1.0 - SLACK, true);
            }
            omega_lp_checks(&mut mon);
            bd_u_check(&mut mon);
            // Remark 3.3 linear L1 growth
            if let Some(ip1) = params.p_list.iter().position(|&p| p == 1.0) {
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| k0 * PI * r.t - params.omega0_l1 > 1e-9)
                    .map(|r| (r.t, r.lp_omega[ip1] / (k0 * PI * r.t - params.omega0_l1)))
                    .collect();
                mon.at_least("omega-l1-linear", series.into_iter(), 1.0 - SLACK, true);
            }
            mon.lp_conservation(5e-3, false);
            mon.at_most(
                "u2-wall",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.u2_wall_max)),
                1e-12,
                true,
            );
            mon.vort_monotone();
            mon.flux_consistency();
            let t0 = if a0 >= 0.0 { 0.0 } else { 2.0 * a0.abs() / (k0 * PI) };
            let series: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.t > t0.max(1e-9))
                .map(|r| (r.t, 4.0 * PI * r.u_inf / (k0 * PI * r.t)))
                .collect();
            mon.at_least("u-linear-growth", series.into_iter(), 0.0, false);
        }
        ScenarioName::Axisym3d => {
            let ek0 = rows[0].e_k.max(1e-12);
            let series: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.t, (r.e_k - rows[0].e_k).abs() / ek0))
                .collect();
            mon.at_most("kinetic-energy-drift", series.into_iter(), 1e-4, true);
            mon.at_least(
                "swirl-floor-zpi",
                rows.iter().zip(side.iter()).map(|(r, s)| (r.t, s.line0_min)),
                0.5 * k0 * (1.0 - SLACK),
                true,
            );
            mon.at_most(
                "swirl-ceiling-z0",
                rows.iter()
                    .zip(side.iter())
                    .map(|(r, s)| (r.t, s.ceiling_abs_max)),
                0.25 * k0 * (1.0 + SLACK),
                true,
            );
            mon.at_least(
                "production-floor",
                rows.iter().map(|r| (r.t, r.boundary_flux)),
                k0 * k0 / 10.0 * (1.0 - SLACK),
                true,
            );
            let range0 = side[0].gamma_max.abs().max(side[0].gamma_min.abs()).max(1e-12);
            let series: Vec<(f64, f64)> = rows
                .iter()
                .zip(side.iter())
                .map(|(r, s)| {
                    let d = (s.gamma_max - side[0].gamma_max)
                        .abs()
                        .max((s.gamma_min - side[0].gamma_min).abs());
                    (r.t, d / range0)
                })
                .collect();
            mon.at_most("swirl-range-drift", series.into_iter(), 1e-3, true);
            let a0 = rows[0].vort_int;
            if a0 >= 0.0 {
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.t > 0.0)
                    .map(|r| (r.t, r.vort_int / (k0 * k0 / 10.0 * r.t + a0)))
                    .collect();
                mon.at_least("ineq-a1", series.into_iter(), 1.0 - SLACK, true);
            } else {
                let t0 = 20.0 * a0.abs() / (k0 * k0);
                let series: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.t >= t0 && r.t > 0.0)
                    .map(|r| (r.t, r.vort_int / (k0 * k0 / 20.0 * r.t)))
                    .collect();
                mon.at_least("ineq-a2-after-T0", series.into_iter(), 1.0 - SLACK, true);
            }
            omega_lp_checks(&mut mon);
            bd_u_check(&mut mon);
            mon.vort_monotone();
            mon.flux_consistency();
        }
    }
    Ok(mon.out)
}
