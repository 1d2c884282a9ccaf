//! Standalone numerical certification of the vorticity-integral lower bound
//! and the anisotropy lower bounds for the H^-1 seminorm, including every
//! proof intermediate. Continuum frequency sets are realized as lattice-mode
//! sets with unit cell weights; each report carries the mass of cells
//! straddling a set boundary and folds it into the tolerance.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;
use crate::ops::{delta_functional, integrate_torus_q, lp_norm, sobolev_norm};
use crate::scenario::{symmetry_project, FieldParity, Parity};
use crate::spectral::{transform, wavenumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Universal constant of the vorticity-integral lower bound.
pub const C0: f64 = 1.0 / (128.0 * PI * PI);

/// Uniform slack for lattice checks of continuum inequalities.
pub const SLACK: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone)]
pub struct SubCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub sense: Sense,
    pub pass: bool,
}

impl SubCheck {
    fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            sense: Sense::AtLeast,
            pass: measured >= bound,
        }
    }

    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            sense: Sense::AtMost,
            pass: measured <= bound,
        }
    }

    /// Signed relative margin; nonnegative iff the check passes.
    pub fn margin(&self) -> f64 {
        let scale = self.bound.abs().max(1e-300);
        match self.sense {
            Sense::AtLeast => (self.measured - self.bound) / scale,
            Sense::AtMost => (self.bound - self.measured) / scale,
        }
    }
}

/// Pass/fail record of one inequality chain with all intermediates.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub inputs: Vec<(String, f64)>,
    pub case: Option<String>,
    pub checks: Vec<SubCheck>,
    pub notes: Vec<String>,
    pub degenerate: bool,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn min_margin(&self) -> f64 {
        self.checks
            .iter()
            .map(SubCheck::margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k} = {v:.6e}\n"));
        }
        if let Some(c) = &self.case {
            out.push_str(&format!("  case: {c}\n"));
        }
        for c in &self.checks {
            let rel = match c.sense {
                Sense::AtLeast => ">=",
                Sense::AtMost => "<=",
            };
            out.push_str(&format!(
                "  {:<26} {:>13.6e} {} {:>13.6e}  {}\n",
                c.name,
                c.measured,
                rel,
                c.bound,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Vorticity-integral lower bound on Q = [0,pi]^2
// ---------------------------------------------------------------------------

/// Smooth flow on the square, evaluable anywhere.
pub trait FlowOnQ {
    fn velocity(&self, x1: f64, x2: f64) -> (f64, f64);
    fn vorticity(&self, x1: f64, x2: f64) -> f64;
}

/// Band-limited streamfunction `psi = sum a sin(m x1) sin(n x2)` with
/// `u = (d2 psi, -d1 psi)` and `omega = -lap psi`.
#[derive(Debug, Clone)]
pub struct TrigStream {
    pub modes: Vec<(usize, usize, f64)>,
}

impl TrigStream {
    pub fn negated(&self) -> Self {
        Self {
            modes: self.modes.iter().map(|&(m, n, a)| (m, n, -a)).collect(),
        }
    }
}

impl FlowOnQ for TrigStream {
    fn velocity(&self, x1: f64, x2: f64) -> (f64, f64) {
        let mut u1 = 0.0;
        let mut u2 = 0.0;
        for &(m, n, a) in &self.modes {
            let (mf, nf) = (m as f64, n as f64);
            u1 += a * nf * (mf * x1).sin() * (nf * x2).cos();
            u2 -= a * mf * (mf * x1).cos() * (nf * x2).sin();
        }
        (u1, u2)
    }

    fn vorticity(&self, x1: f64, x2: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(m, n, a)| {
                let (mf, nf) = (m as f64, n as f64);
                a * (mf * mf + nf * nf) * (mf * x1).sin() * (nf * x2).sin()
            })
            .sum()
    }
}

fn trapz_2d_q(n: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = PI / (n - 1) as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let wi = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let x1 = i as f64 * h;
        for j in 0..n {
            let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            acc += wi * wj * f(x1, j as f64 * h);
        }
    }
    acc * h * h
}

/// Speed line integral over the boundary of `Q_r = [r, pi-r]^2`.
fn ring_speed_integral(flow: &dyn FlowOnQ, r: f64, m: usize) -> f64 {
    let a = r;
    let b = PI - r;
    if b <= a {
        return 0.0;
    }
    let len = b - a;
    let h = len / (m - 1) as f64;
    let speed = |x1: f64, x2: f64| {
        let (u1, u2) = flow.velocity(x1, x2);
        (u1 * u1 + u2 * u2).sqrt()
    };
    let mut acc = 0.0;
    for i in 0..m {
        let w = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
        let s = a + i as f64 * h;
        acc += w * (speed(s, a) + speed(s, b) + speed(a, s) + speed(b, s));
    }
    acc * h
}

/// Check the lower bound `||omega||_p >= c0 max{E0^{-1+1/p}|A|^{3-2/p}, |A|}`
/// together with its proof intermediates.
pub fn check_omega_lp(flow: &dyn FlowOnQ, p_list: &[f64], resolution: usize) -> LemmaReport {
    let n = resolution.max(65);
    let e0 = trapz_2d_q(n, |x, y| {
        let (u1, u2) = flow.velocity(x, y);
        u1 * u1 + u2 * u2
    });
    let a_signed = trapz_2d_q(n, |x, y| flow.vorticity(x, y));
    let mut report = LemmaReport {
        inputs: vec![("E0".into(), e0), ("A".into(), a_signed)],
        case: None,
        checks: vec![],
        notes: vec![],
        degenerate: false,
    };
    let scale = e0.sqrt().max(1e-300);
    if a_signed.abs() <= 1e-12 * scale.max(1.0) {
        report.degenerate = true;
        report.notes.push(
            "A = 0: bound trivially true, intermediates skipped".into(),
        );
        return report;
    }
    // Work with the sign flip that makes the vorticity integral positive;
    // norms and |u| are invariant.
    let sgn = a_signed.signum();
    let a = a_signed.abs();

    for &p in p_list {
        let norm = if p.is_infinite() {
            let mut worst = 0.0f64;
            let h = PI / (n - 1) as f64;
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max(flow.vorticity(i as f64 * h, j as f64 * h).abs());
                }
            }
            worst
        } else {
            trapz_2d_q(n, |x, y| flow.vorticity(x, y).abs().powf(p)).powf(1.0 / p)
        };
        let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
        let bound = C0 * (e0.powf(-1.0 + inv_p) * a.powf(3.0 - 2.0 * inv_p)).max(a);
        report.checks.push(SubCheck::at_least(
            &format!("omega-lp-p{}", crate::diagnostics::fmt_p(p)),
            norm,
            bound * (1.0 - SLACK),
        ));
    }

    // r0 = inf { r : int_{dQ_r} |u| ds = A/2 }
    let m = 2 * n + 1;
    let nscan = 2048;
    let mut r0 = PI / 2.0;
    let mut found = false;
    let mut prev_r = 0.0;
    for i in 1..=nscan {
        let r = PI / 2.0 * i as f64 / (nscan + 1) as f64;
        if ring_speed_integral(flow, r, m) <= a / 2.0 {
            let mut lo = prev_r;
            let mut hi = r;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ring_speed_integral(flow, mid, m) <= a / 2.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            r0 = 0.5 * (lo + hi);
            found = true;
            break;
        }
        prev_r = r;
    }
    if !found {
        report.notes.push("ring integral never reached A/2".into());
    }
    report.inputs.push(("r0".into(), r0));
    report.checks.push(SubCheck::at_most(
        "r0-upper",
        r0,
        (16.0 * PI * e0 / (a * a)) * (1.0 + SLACK),
    ));
    // int_{Q \ Q_{r0}} omega >= A/2
    let inner = if PI - 2.0 * r0 > 1e-9 {
        let ni = n;
        let hi = (PI - 2.0 * r0) / (ni - 1) as f64;
        let mut acc = 0.0;
        for i in 0..ni {
            let wi = if i == 0 || i == ni - 1 { 0.5 } else { 1.0 };
            for j in 0..ni {
                let wj = if j == 0 || j == ni - 1 { 0.5 } else { 1.0 };
                acc += wi
                    * wj
                    * flow.vorticity(r0 + i as f64 * hi, r0 + j as f64 * hi);
            }
        }
        acc * hi * hi
    } else {
        0.0
    };
    let frame = sgn * (a_signed - inner);
    report.inputs.push(("frame_integral".into(), frame));
    report.checks.push(SubCheck::at_least(
        "frame-vorticity",
        frame,
        a / 2.0 * (1.0 - SLACK),
    ));
    report
}

// ---------------------------------------------------------------------------
// Anisotropy lower bounds for the H^-1 seminorm of d1(mu)
// ---------------------------------------------------------------------------

struct Spectrum {
    /// (k1, k2, |mu_hat|^2) with the plane-convention normalization
    /// `mu_hat = 2 pi c_k`, one unit frequency cell per mode.
    modes: Vec<(i64, i64, f64)>,
}

fn spectrum_of(mu: &ScalarField) -> Spectrum {
    let g = mu.grid.as_torus().expect("torus field");
    let s = transform(mu);
    let mut modes = Vec::with_capacity(g.len());
    for p2 in 0..g.ny {
        let k2 = wavenumber(p2, g.ny);
        for p1 in 0..g.nx {
            let k1 = wavenumber(p1, g.nx);
            let m = (2.0 * PI) * (2.0 * PI) * s.data[p2 * g.nx + p1].norm_sqr();
            modes.push((k1, k2, m));
        }
    }
    Spectrum { modes }
}

fn check_parity(mu: &ScalarField, parity: FieldParity, what: &str) -> Result<()> {
    let (_, moved) = symmetry_project(mu, parity);
    let scale = mu.max_abs().max(1e-300);
    if moved / scale > 1e-10 {
        return Err(Error::Input(format!(
            "input violates '{what}' symmetry by {:.3e} (relative)",
            moved / scale
        )));
    }
    Ok(())
}

/// Support extent along each axis (in grid cells above a tiny floor).
fn support_extent(mu: &ScalarField) -> (f64, f64) {
    let g = mu.grid.as_torus().unwrap();
    let floor = 1e-13 * mu.max_abs().max(1e-300);
    let mut used1 = vec![false; g.nx];
    let mut used2 = vec![false; g.ny];
    for j2 in 0..g.ny {
        for j1 in 0..g.nx {
            if mu.values[g.idx(j1, j2)].abs() > floor {
                used1[j1] = true;
                used2[j2] = true;
            }
        }
    }
    let extent = |used: &[bool], h: f64| used.iter().filter(|&&u| u).count() as f64 * h;
    (extent(&used1, g.dx()), extent(&used2, g.dy()))
}

/// Part (a): plane bound via a compactly supported field embedded in the
/// torus. Case 1 follows the cone/strip construction, case 2 the ball.
pub fn check_smallinx1_a(mu: &ScalarField, s_list: &[f64]) -> Result<LemmaReport> {
    mu.grid.as_torus()?;
    if mu.max_abs() == 0.0 {
        return Err(Error::Input("mu is identically zero".into()));
    }
    check_parity(
        mu,
        FieldParity {
            a1: None,
            a2: Some(Parity::Odd),
        },
        "odd in x2",
    )?;
    let (w1, w2) = support_extent(mu);
    if w1 > PI * 1.02 || w2 > PI * 1.02 {
        return Err(Error::Input(format!(
            "support extent ({w1:.3}, {w2:.3}) exceeds half the box"
        )));
    }

    let spec = spectrum_of(mu);
    let a: f64 = spec.modes.iter().map(|m| m.2).sum();
    let b = lp_norm(mu, 1.0)? / (2.0 * PI);
    let delta: f64 = spec
        .modes
        .iter()
        .filter(|(k1, k2, _)| *k1 != 0 || *k2 != 0)
        .map(|(k1, k2, m)| (k1 * k1) as f64 / ((k1 * k1 + k2 * k2) as f64) * m)
        .sum();

    let mut report = LemmaReport {
        inputs: vec![
            ("A".into(), a),
            ("B".into(), b),
            ("delta".into(), delta),
        ],
        case: None,
        checks: vec![],
        notes: vec![],
        degenerate: false,
    };
    report
        .checks
        .push(SubCheck::at_most("delta-le-A", delta, a * (1.0 + 1e-12)));

    if delta < a / 4.0 {
        report.case = Some("case 1 (delta < A/4)".into());
        let t = (2.0 * delta / a).sqrt(); // cos(theta0)
        let cot = t / (1.0 - t * t).sqrt();
        let h_delta = (a / (8.0 * b * b * cot)).sqrt();
        report.inputs.push(("h_delta".into(), h_delta));
        report.checks.push(SubCheck::at_least(
            "h-delta-lower",
            h_delta,
            a.powf(0.75) * delta.powf(-0.25) / (4.0 * b) * (1.0 - 1e-12),
        ));

        let in_cone = |x1: f64, x2: f64| {
            let r = (x1 * x1 + x2 * x2).sqrt();
            r > 0.0 && x1.abs() / r >= t
        };
        let mut mass_cone = 0.0;
        let mut mass_high = 0.0;
        let mut boundary = 0.0;
        for &(k1, k2, m) in &spec.modes {
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let (x1, x2) = (k1 as f64, k2 as f64);
            let inside = in_cone(x1, x2);
            // cell-corner disagreement marks a set-boundary cell
            let corners = [
                (x1 - 0.5, x2 - 0.5),
                (x1 + 0.5, x2 - 0.5),
                (x1 - 0.5, x2 + 0.5),
                (x1 + 0.5, x2 + 0.5),
            ];
            let cone_straddle = corners.iter().any(|&(c1, c2)| in_cone(c1, c2) != inside);
            let below = x2.abs() < h_delta;
            let line_straddle = (x2.abs() - h_delta).abs() < 0.5;
            if cone_straddle || line_straddle {
                boundary += m;
            }
            if inside {
                mass_cone += m;
            } else if !below {
                mass_high += m;
            }
        }
        let boundary_frac = boundary / a;
        report
            .inputs
            .push(("boundary_mass_frac".into(), boundary_frac));
        report.notes.push(format!(
            "set-boundary lattice mass is {:.3e} of A",
            boundary_frac
        ));
        report.checks.push(SubCheck::at_most(
            "cone-mass",
            mass_cone,
            a / 2.0 * (1.0 + 1e-9),
        ));
        let slack = SLACK + boundary_frac;
        report.checks.push(SubCheck::at_least(
            "high-strip-mass",
            mass_high,
            a / 4.0 * (1.0 - slack),
        ));
        for &s in s_list {
            let hs = sobolev_norm(mu, s)?;
            report.checks.push(SubCheck::at_least(
                &format!("chain-Hs-s{s}"),
                hs,
                a.sqrt() / 2.0 * h_delta.powf(s) * (1.0 - slack),
            ));
        }
    } else {
        report.case = Some("case 2 (delta >= A/4)".into());
        let r0 = (a / (2.0 * PI * b * b)).sqrt();
        report.inputs.push(("r0".into(), r0));
        let mut mass_ball = 0.0;
        let mut boundary = 0.0;
        for &(k1, k2, m) in &spec.modes {
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r <= r0 {
                mass_ball += m;
            }
            if (r - r0).abs() < 0.75 {
                boundary += m;
            }
        }
        let boundary_frac = boundary / a;
        report
            .inputs
            .push(("boundary_mass_frac".into(), boundary_frac));
        report.notes.push(format!(
            "set-boundary lattice mass is {:.3e} of A",
            boundary_frac
        ));
        let slack = SLACK + boundary_frac;
        report.checks.push(SubCheck::at_most(
            "ball-mass",
            mass_ball,
            a / 2.0 * (1.0 + slack),
        ));
        for &s in s_list {
            let hs = sobolev_norm(mu, s)?;
            report.checks.push(SubCheck::at_least(
                &format!("chain-Hs-s{s}"),
                hs * hs,
                r0.powf(2.0 * s) * a / 2.0 * (1.0 - slack),
            ));
        }
    }
    Ok(report)
}

/// Simpson quadrature of sin(k x2) * mu(x1, x2) over x2 in [0, pi], per x1
/// column. Requires ny divisible by 4 so the sub-range has an even number
/// of intervals.
fn sine_moment(mu: &ScalarField, k: f64) -> Result<Vec<f64>> {
    let g = mu.grid.as_torus()?;
    if g.ny % 4 != 0 {
        return Err(Error::Input(
            "part (b) requires ny divisible by 4 for Simpson weights".into(),
        ));
    }
    let m = g.ny / 2; // intervals over [0, pi]
    let h = g.dy();
    let mut out = vec![0.0; g.nx];
    for j1 in 0..g.nx {
        let mut acc = 0.0;
        for j in 0..=m {
            let j2 = (g.ny / 2 + j) % g.ny;
            let x2 = PI * j as f64 / m as f64;
            let w = if j == 0 || j == m {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * (k * x2).sin() * mu.values[g.idx(j1, j2)];
        }
        out[j1] = acc * h / 3.0;
    }
    Ok(out)
}

/// `int_0^pi sin(x)^{-1/2} dx`, evaluated with the square-root substitution
/// that removes both endpoint singularities.
pub fn sine_inverse_sqrt_integral() -> f64 {
    // int_0^{pi/2} sin(x)^{-1/2} dx = int_0^{sqrt(pi/2)} 2 t / sqrt(sin t^2) dt
    let m = 20000;
    let upper = (PI / 2.0).sqrt();
    let h = upper / m as f64;
    let f = |t: f64| {
        if t == 0.0 {
            2.0
        } else {
            2.0 * t / (t * t).sin().sqrt()
        }
    };
    let mut acc = f(0.0) + f(upper);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    2.0 * acc * h / 3.0
}

/// Part (b): torus bound via the sine moment g(x1, 1) and its properties.
/// The externally cited comparison step is reported, never asserted.
pub fn check_smallinx1_b(mu: &ScalarField, s_list: &[f64]) -> Result<LemmaReport> {
    let g = mu.grid.as_torus()?;
    if mu.max_abs() == 0.0 {
        return Err(Error::Input("mu is identically zero".into()));
    }
    check_parity(
        mu,
        FieldParity {
            a1: Some(Parity::Even),
            a2: Some(Parity::Odd),
        },
        "even in x1, odd in x2",
    )?;
    let axis_max = (0..g.ny)
        .map(|j2| mu.values[g.idx(g.nx / 2, j2)].abs())
        .fold(0.0f64, f64::max);
    if axis_max > 1e-10 * mu.max_abs() {
        return Err(Error::Input(format!(
            "input violates 'mu = 0 on the x2-axis': max {axis_max:.3e}"
        )));
    }
    let mut min_upper = f64::MAX;
    for j2 in 0..g.ny {
        if g.x2(j2) >= 0.0 {
            for j1 in 0..g.nx {
                min_upper = min_upper.min(mu.values[g.idx(j1, j2)]);
            }
        }
    }
    if min_upper < -1e-12 * mu.max_abs() {
        return Err(Error::Input(format!(
            "input violates 'mu >= 0 on T x [0,pi]': min {min_upper:.3e}"
        )));
    }

    let gvec = sine_moment(mu, 1.0)?;
    let gmax = gvec.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let gbar = gvec.iter().sum::<f64>() / g.nx as f64;
    let g_int = gvec.iter().sum::<f64>() * g.dx();

    let mut report = LemmaReport {
        inputs: vec![("gbar".into(), gbar), ("g_int".into(), g_int)],
        case: None,
        checks: vec![],
        notes: vec![],
        degenerate: false,
    };

    // property (a): even and nonnegative
    let even_defect = (0..g.nx)
        .map(|j1| (gvec[j1] - gvec[(g.nx - j1) % g.nx]).abs())
        .fold(0.0f64, f64::max);
    report
        .checks
        .push(SubCheck::at_most("prop-a-even", even_defect, 1e-10 * gmax));
    let gmin = gvec.iter().copied().fold(f64::MAX, f64::min);
    report
        .checks
        .push(SubCheck::at_least("prop-a-nonneg", gmin, -1e-12 * gmax));
    // property (b): g vanishes on the axis
    report.checks.push(SubCheck::at_most(
        "prop-b-zero-at-axis",
        gvec[g.nx / 2].abs(),
        1e-10 * gmax,
    ));
    // property (c): Holder lower bound with the numerically evaluated
    // sin^{-1/2} constant
    let sine_c = PI * sine_inverse_sqrt_integral(); // int over D of sin^{-1/2}
    let third = integrate_torus_q(&mu.map(|v| v.max(0.0).powf(1.0 / 3.0)))?;
    let c_bound = 2.0 * sine_c.powi(-2) * third.powi(3);
    report.inputs.push(("holder_const".into(), sine_c.powi(-2)));
    report.checks.push(SubCheck::at_least(
        "prop-c-holder",
        g_int,
        c_bound * (1.0 - SLACK),
    ));

    // delta >= (1/pi) int |g - gbar|^2
    let delta = delta_functional(mu)?;
    let gvar = gvec.iter().map(|v| (v - gbar) * (v - gbar)).sum::<f64>() * g.dx();
    report.inputs.push(("delta".into(), delta));
    report.inputs.push(("g_variance".into(), gvar));
    report.checks.push(SubCheck::at_least(
        "delta-ge-g-variance",
        delta,
        gvar / PI * (1.0 - SLACK),
    ));

    // comparison ||g||_{H^s(T)}^2 <= (pi/sqrt2) ||mu||_{H^s(T^2)}^2
    let gspec = crate::spectral::fft_line_fwd(&gvec);
    for &s in s_list {
        let mut g_hs_sq = 0.0;
        for (p, c) in gspec.iter().enumerate() {
            let k = wavenumber(p, g.nx);
            if k != 0 {
                g_hs_sq += ((k * k) as f64).powf(s) * c.norm_sqr();
            }
        }
        g_hs_sq *= 2.0 * PI;
        let mu_hs = sobolev_norm(mu, s)?;
        report.checks.push(SubCheck::at_most(
            &format!("ineq-g2-s{s}"),
            g_hs_sq,
            PI / 2.0f64.sqrt() * mu_hs * mu_hs * (1.0 + SLACK),
        ));
    }
    report.notes.push(
        "final 1D comparison step relies on [KY Lemma 3.3]; reported, not asserted".into(),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Randomized suites
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct SuiteOutcome {
    pub reports: Vec<(u64, LemmaReport)>,
    pub kind: &'static str,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.pass())
    }

    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|(_, r)| !r.pass()).count()
    }

    pub fn render_summary(&self) -> String {
        let worst = self
            .reports
            .iter()
            .map(|(_, r)| r.min_margin())
            .fold(f64::INFINITY, f64::min);
        format!(
            "suite {}: {} samples, {} violations, min margin {:.4e} -> {}\n",
            self.kind,
            self.reports.len(),
            self.violations(),
            worst,
            if self.pass() { "PASS" } else { "FAIL" }
        )
    }

    /// One machine-readable line per sample: seed, intermediates, min margin.
    pub fn csv(&self) -> String {
        let mut out = String::from("seed,case,inputs,min_margin,pass\n");
        for (seed, r) in &self.reports {
            let inputs = r
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={v:.9e}"))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{seed},{},{inputs},{:.9e},{}\n",
                r.case.as_deref().unwrap_or("-"),
                r.min_margin(),
                r.pass()
            ));
        }
        out
    }
}

pub fn random_stream(seed: u64) -> TrigStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_modes = rng.gen_range(3..10);
    let modes = (0..n_modes)
        .map(|_| {
            (
                rng.gen_range(1..=8usize),
                rng.gen_range(1..=8usize),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect();
    TrigStream { modes }
}

/// Smooth compactly supported bump, value 1 at the center.
fn bump(x: f64, c: f64, w: f64) -> f64 {
    let u = (x - c) / w;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Odd-in-x2 compactly supported field for the part (a) suite. Widths are
/// randomized across both the near-isotropic and x1-elongated regimes so
/// both proof cases occur.
pub fn random_mu_a(grid: Grid, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = rng.gen_range(1..4);
    let params: Vec<(f64, f64, f64, f64, f64)> = (0..terms)
        .map(|_| {
            let elongated = rng.gen_bool(0.5);
            let w1 = if elongated {
                rng.gen_range(1.0..1.5)
            } else {
                rng.gen_range(0.35..0.8)
            };
            let c1 = rng.gen_range(-0.3..0.3f64).clamp(w1 - PI / 2.0, PI / 2.0 - w1);
            let w2 = rng.gen_range(0.3..0.6);
            let c2 = rng.gen_range(w2 + 0.05..PI / 2.0 - w2 - 0.01);
            let amp = rng.gen_range(0.2..1.0);
            (amp, c1, w1, c2, w2)
        })
        .collect();
    ScalarField::from_fn(grid, move |x1, x2| {
        params
            .iter()
            .map(|&(amp, c1, w1, c2, w2)| {
                amp * bump(x1, c1, w1) * (bump(x2, c2, w2) - bump(x2, -c2, w2))
            })
            .sum()
    })
}

/// Admissible part (b) field: even, nonnegative-on-upper-half product with
/// a vanishing x2-axis column, amplitude-capped to preserve positivity.
pub fn random_mu_b(grid: Grid, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<(f64, f64)> = (1..=5)
        .map(|m| (m as f64, rng.gen_range(0.0..1.0)))
        .collect();
    let eps: Vec<(f64, f64)> = (1..=4)
        .map(|n| (n as f64, rng.gen_range(-1.0..1.0)))
        .collect();
    let cap: f64 = eps.iter().map(|(_, e)| e.abs()).sum::<f64>().max(1e-9);
    let scale = 0.85 / cap;
    ScalarField::from_fn(grid, move |x1, x2| {
        let fx: f64 = xs.iter().map(|(m, a)| a * (1.0 - (m * x1).cos())).sum();
        let modulation: f64 =
            1.0 + scale * eps.iter().map(|(n, e)| e * (n * x2).cos()).sum::<f64>();
        fx * x2.sin() * modulation
    })
}

pub fn omega_lp_suite(samples: usize, seed: u64, resolution: usize, p_list: &[f64]) -> SuiteOutcome {
    let mut reports = vec![];
    for i in 0..samples {
        let s = seed.wrapping_add(i as u64);
        let flow = random_stream(s);
        reports.push((s, check_omega_lp(&flow, p_list, resolution)));
    }
    SuiteOutcome {
        reports,
        kind: "omega-lp",
    }
}

pub fn smallinx1_a_suite(samples: usize, seed: u64, resolution: usize, s_list: &[f64]) -> Result<SuiteOutcome> {
    let grid = Grid::Torus(crate::grid::TorusGrid::new(resolution, resolution)?);
    let mut reports = vec![];
    for i in 0..samples {
        let s = seed.wrapping_add(i as u64);
        let mu = random_mu_a(grid, s);
        reports.push((s, check_smallinx1_a(&mu, s_list)?));
    }
    Ok(SuiteOutcome {
        reports,
        kind: "smallinx1-a",
    })
}

pub fn smallinx1_b_suite(samples: usize, seed: u64, resolution: usize, s_list: &[f64]) -> Result<SuiteOutcome> {
    let grid = Grid::Torus(crate::grid::TorusGrid::new(resolution, resolution)?);
    let mut reports = vec![];
    for i in 0..samples {
        let s = seed.wrapping_add(i as u64);
        let mu = random_mu_b(grid, s);
        reports.push((s, check_smallinx1_b(&mu, s_list)?));
    }
    Ok(SuiteOutcome {
        reports,
        kind: "smallinx1-b",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;

    fn torus(n: usize) -> Grid {
        Grid::Torus(TorusGrid::new(n, n).unwrap())
    }

    #[test]
    fn omega_lp_closed_form_example() {
        // psi = sin x1 sin x2: omega = 2 sin sin, A = 8, E0 = pi^2/2
        let flow = TrigStream {
            modes: vec![(1, 1, 1.0)],
        };
        let rep = check_omega_lp(&flow, &[1.0, 2.0, 4.0, f64::INFINITY], 257);
        assert!(rep.pass(), "{}", rep.render());
        let a = rep.inputs.iter().find(|(k, _)| k == "A").unwrap().1;
        let e0 = rep.inputs.iter().find(|(k, _)| k == "E0").unwrap().1;
        assert!((a - 8.0).abs() < 1e-3 * 8.0, "A = {a}");
        assert!((e0 - PI * PI / 2.0).abs() < 1e-3 * e0, "E0 = {e0}");
        // the p = inf bound value: c0 * max(E0^{-1} A^3, A) = c0 * A^3/E0
        let binf = C0 * (8.0f64.powi(3) / (PI * PI / 2.0));
        assert!((binf - 0.0821).abs() < 1e-3, "bound {binf}");
        let winf = rep
            .checks
            .iter()
            .find(|c| c.name == "omega-lp-pinf")
            .unwrap();
        assert!((winf.measured - 2.0).abs() < 1e-6);
    }

    #[test]
    fn omega_lp_zero_flow_degenerate() {
        let flow = TrigStream { modes: vec![] };
        let rep = check_omega_lp(&flow, &[1.0], 65);
        assert!(rep.degenerate);
        assert!(rep.pass());
    }

    #[test]
    fn omega_lp_sign_invariance() {
        let flow = random_stream(12);
        let rep1 = check_omega_lp(&flow, &[1.0, 2.0], 129);
        let rep2 = check_omega_lp(&flow.negated(), &[1.0, 2.0], 129);
        assert_eq!(rep1.pass(), rep2.pass());
        let a1 = rep1.inputs.iter().find(|(k, _)| k == "A").unwrap().1;
        let a2 = rep2.inputs.iter().find(|(k, _)| k == "A").unwrap().1;
        assert!((a1 + a2).abs() <= 1e-12 * a1.abs().max(1e-12));
    }

    #[test]
    fn omega_lp_l1_exceeds_integral() {
        // for p = 1 the report must show ||omega||_L1 >= |A|
        let flow = random_stream(3);
        let rep = check_omega_lp(&flow, &[1.0], 257);
        let a = rep.inputs.iter().find(|(k, _)| k == "A").unwrap().1.abs();
        let l1 = rep
            .checks
            .iter()
            .find(|c| c.name == "omega-lp-p1")
            .unwrap()
            .measured;
        assert!(l1 >= a * (1.0 - 1e-9), "L1 {l1} vs |A| {a}");
    }

    #[test]
    fn smallinx1_a_bump_chain() {
        let mu = random_mu_a(torus(128), 5);
        let rep = check_smallinx1_a(&mu, &[1.0, 2.0]).unwrap();
        assert!(rep.pass(), "{}", rep.render());
    }

    #[test]
    fn smallinx1_a_rejects_bad_input() {
        let g = torus(64);
        let even = ScalarField::from_fn(g, |x1, x2| bump(x1, 0.0, 1.0) * bump(x2, 0.0, 1.0));
        assert!(check_smallinx1_a(&even, &[1.0]).is_err());
        assert!(check_smallinx1_a(&ScalarField::zeros(g), &[1.0]).is_err());
        // wide support rejected
        let wide = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin());
        assert!(check_smallinx1_a(&wide, &[1.0]).is_err());
    }

    #[test]
    fn smallinx1_a_scaling_bookkeeping() {
        let mu = random_mu_a(torus(128), 9);
        let rep1 = check_smallinx1_a(&mu, &[1.0]).unwrap();
        let rep2 = check_smallinx1_a(&mu.scale(2.0), &[1.0]).unwrap();
        let get = |r: &LemmaReport, k: &str| r.inputs.iter().find(|(n, _)| n == k).unwrap().1;
        assert!((get(&rep2, "A") / get(&rep1, "A") - 4.0).abs() < 1e-9);
        assert!((get(&rep2, "B") / get(&rep1, "B") - 2.0).abs() < 1e-9);
        assert!((get(&rep2, "delta") / get(&rep1, "delta") - 4.0).abs() < 1e-9);
        assert!(rep1.pass() && rep2.pass());
    }

    #[test]
    fn smallinx1_b_closed_form_example() {
        // mu = (1 - cos x1) sin x2: g = (pi/2)(1 - cos x1), gbar = pi/2,
        // g variance bound pi^2/4 vs delta = pi^2/2
        let g = torus(128);
        let mu = ScalarField::from_fn(g, |x1, x2| (1.0 - x1.cos()) * x2.sin());
        let rep = check_smallinx1_b(&mu, &[1.0, 2.0]).unwrap();
        assert!(rep.pass(), "{}", rep.render());
        let get = |k: &str| rep.inputs.iter().find(|(n, _)| n == k).unwrap().1;
        assert!((get("gbar") - PI / 2.0).abs() < 1e-6, "gbar {}", get("gbar"));
        assert!((get("delta") - PI * PI / 2.0).abs() < 1e-9);
        assert!((get("g_variance") / PI - PI * PI / 4.0).abs() < 1e-5);
        // property (b) holds exactly for this closed form
        let pb = rep
            .checks
            .iter()
            .find(|c| c.name == "prop-b-zero-at-axis")
            .unwrap();
        assert!(pb.measured <= 1e-14);
    }

    #[test]
    fn smallinx1_b_rejects_sign_violation() {
        let g = torus(64);
        let mu = ScalarField::from_fn(g, |x1, x2| (1.0 - x1.cos()) * (2.0 * x2).sin());
        let err = check_smallinx1_b(&mu, &[1.0]);
        assert!(err.is_err());
        let msg = err.err().unwrap().to_string();
        assert!(msg.contains("mu >= 0"), "{msg}");
    }

    #[test]
    fn sine_integral_matches_beta_value() {
        // Gamma(1/4) Gamma(1/2) / Gamma(3/4)
        let reference = 5.244115108584239;
        let got = sine_inverse_sqrt_integral();
        assert!((got - reference).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn small_suites_pass() {
        let s1 = omega_lp_suite(10, 77, 129, &[1.0, 2.0, f64::INFINITY]);
        assert!(s1.pass(), "{}", s1.render_summary());
        let s2 = smallinx1_a_suite(10, 78, 128, &[1.0]).unwrap();
        assert!(s2.pass(), "{}", s2.render_summary());
        let s3 = smallinx1_b_suite(10, 79, 128, &[1.0]).unwrap();
        assert!(s3.pass(), "{}", s3.render_summary());
    }
}
