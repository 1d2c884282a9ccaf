//! Run loop: scenario -> time stepping -> diagnostics series -> monitors
//! and artifacts. Deterministic for a fixed (config, seed, build).

use crate::config::{ModelKind, RunConfig};
use crate::diagnostics::{
    csv_columns, growth_monitors, state_row, DiagnosticsRow, MonitorParams, MonitorReport,
    SideSample,
};
use crate::error::{Error, Result};
use crate::grid::{AnnulusGrid, Grid, StripGrid, TorusGrid};
use crate::io::{render_csv, write_checkpoint};
use crate::ops::{grad_sup, grad_u_l2_sq_from_omega_spec, integrate_torus_q, lp_norm};
use crate::scenario::{make_scenario, validate_assumptions, SymmetryClass, ValidationReport};
use crate::solver::{
    axisym, strip, torus,
    tracer::TracerSet,
    SimState,
};
use crate::spectral::transform;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub struct RunOutput {
    pub columns: Vec<String>,
    pub rows: Vec<DiagnosticsRow>,
    pub side: Vec<SideSample>,
    pub params: MonitorParams,
    pub report: MonitorReport,
    pub validation: ValidationReport,
    pub blowup_t: Option<f64>,
    pub tracer_degenerate_t: Option<f64>,
    pub checkpoints: Vec<(f64, PathBuf)>,
}

pub fn grid_for(config: &RunConfig) -> Result<Grid> {
    Ok(match config.model {
        ModelKind::TorusViscous | ModelKind::TorusInviscid => {
            Grid::Torus(TorusGrid::new(config.n1, config.n2)?)
        }
        ModelKind::StripInviscid => Grid::Strip(StripGrid::new(config.n1, config.n2)?),
        ModelKind::AxisymEuler => Grid::Annulus(AnnulusGrid::new(config.n1, config.n2)?),
    })
}

fn cfl_limit(state: &SimState, cfl: f64) -> f64 {
    match state {
        SimState::Torus(s) => torus::cfl_limit(s, cfl),
        SimState::Strip(s) => strip::cfl_limit(s, cfl),
        SimState::Axisym(s) => axisym::cfl_limit(s, cfl),
    }
}

fn do_step(
    state: &mut SimState,
    tracers: &mut Option<TracerSet>,
    dt: f64,
    nu: f64,
    cfl: f64,
    class: SymmetryClass,
) -> Result<()> {
    match state {
        SimState::Torus(s) => {
            let (next, next_tracers) =
                torus::step_with_tracers(s, dt, nu, cfl, class, tracers.as_ref())?;
            *s = next;
            if let Some(t) = next_tracers {
                *tracers = Some(t);
            }
        }
        SimState::Strip(s) => *s = strip::step_strip(s, dt, cfl, class)?,
        SimState::Axisym(s) => *s = axisym::step_axisym(s, dt, cfl, class)?,
    }
    Ok(())
}

fn set_time(state: &mut SimState, t: f64) {
    match state {
        SimState::Torus(s) => s.t = t,
        SimState::Strip(s) => s.t = t,
        SimState::Axisym(s) => s.t = t,
    }
}

/// `nu ||grad u||_L2^2`, the dissipation-rate integrand (torus only).
fn diss_integrand(state: &SimState, nu: f64) -> f64 {
    match state {
        SimState::Torus(s) if nu > 0.0 => {
            nu * grad_u_l2_sq_from_omega_spec(&transform(&s.omega))
        }
        _ => 0.0,
    }
}

/// `||grad rho||_inf`, the F(t) integrand.
fn fgrad_integrand(state: &SimState) -> f64 {
    match state {
        SimState::Torus(s) => grad_sup(&s.rho).unwrap_or(f64::NAN),
        SimState::Strip(s) => grad_sup(&s.rho).unwrap_or(f64::NAN),
        SimState::Axisym(_) => 0.0,
    }
}

fn monitor_params(config: &RunConfig, data: &crate::scenario::InitialData) -> Result<MonitorParams> {
    let scalar = &data.scalar;
    let vorticity = &data.vorticity;
    let e0_lemma = match config.model {
        ModelKind::TorusViscous | ModelKind::TorusInviscid => {
            let u0 = crate::ops::biot_savart_torus(vorticity)?;
            let speed2 = u0.c1.zip(&u0.c2, |a, b| a * a + b * b);
            let uq = integrate_torus_q(&speed2)?;
            let rho_abs = scalar.map(f64::abs);
            let l1q = integrate_torus_q(&rho_abs)?;
            uq + 4.0 * std::f64::consts::PI * l1q
        }
        ModelKind::StripInviscid => {
            let st = strip::StripState::new(0.0, scalar.clone(), vorticity.clone())?;
            let u_sq = st.u.c1.zip(&st.u.c2, |a, b| a * a + b * b);
            let l2 = u_sq.integrate(|v, _, _| v);
            let l1 = scalar.integrate(|v, _, _| v.abs());
            l2 + 4.0 * std::f64::consts::PI * l1
        }
        ModelKind::AxisymEuler => {
            let st = axisym::AxisymState::new(0.0, scalar.clone(), vorticity.clone())?;
            let ek0 = crate::diagnostics::kinetic_energy_axisym(&st.u, &st.u_theta);
            ek0 / std::f64::consts::PI
        }
    };
    Ok(MonitorParams {
        scenario: config.scenario.name,
        nu: config.nu,
        k0: data.k0,
        e0_lemma,
        a0: 0.0, // filled from the first emitted row
        omega0_linf: lp_norm(vorticity, f64::INFINITY)?,
        omega0_l1: lp_norm(vorticity, 1.0)?,
        rho0_linf: lp_norm(scalar, f64::INFINITY)?,
        s_list: config.s_list.clone(),
        p_list: config.p_list.clone(),
    })
}

/// Execute one configured run. When `out_dir` is given, `series.csv`,
/// checkpoints, and `summary.txt` are written there.
pub fn run(config: &RunConfig, out_dir: Option<&Path>) -> Result<RunOutput> {
    config.validate()?;
    let grid = grid_for(config)?;
    let data = make_scenario(&config.scenario, grid)?;
    let validation = validate_assumptions(&data, &config.scenario);
    if !validation.pass() {
        let failed: Vec<String> = validation
            .clauses
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        return Err(Error::Hypothesis(failed.join("; ")));
    }
    let class = data.class;
    let mut params = monitor_params(config, &data)?;
    let mut state = SimState::from_initial(0.0, &data)?;
    let mut tracers = data.tracers.map(TracerSet::theorem_pair);

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }

    // event schedule: output multiples, checkpoint times, horizon
    let mut events: Vec<f64> = vec![];
    let mut k = 0usize;
    loop {
        let t = k as f64 * config.output_interval;
        if t > config.horizon + 1e-12 {
            break;
        }
        events.push(t.min(config.horizon));
        k += 1;
    }
    if events.last().map_or(true, |&t| config.horizon - t > 1e-12) {
        events.push(config.horizon);
    }
    events.extend(config.checkpoint_times.iter().copied());
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let is_output = |t: f64| {
        let k = (t / config.output_interval).round();
        (t - k * config.output_interval).abs() <= 1e-9 || (t - config.horizon).abs() <= 1e-12
    };
    let is_checkpoint = |t: f64| {
        config
            .checkpoint_times
            .iter()
            .any(|&c| (c - t).abs() <= 1e-12)
    };

    let columns = csv_columns(&config.s_list, &config.p_list);
    let mut rows: Vec<DiagnosticsRow> = vec![];
    let mut side: Vec<SideSample> = vec![];
    let mut checkpoints = vec![];
    let mut blowup_t = None;
    let mut tracer_degenerate_t = None;

    let mut diss_acc = 0.0;
    let mut f_acc = 0.0;
    let mut diss_prev = diss_integrand(&state, config.nu);
    let mut fgrad_prev = fgrad_integrand(&state);
    let mut last_h = 0.0;

    let p2_index = config.p_list.iter().position(|&p| p == 2.0);

    'outer: for (ei, &target) in events.iter().enumerate() {
        // integrate up to this event
        while state.time() < target - 1e-12 {
            let limit = cfl_limit(&state, config.cfl);
            if limit < 1e-10 * config.output_interval.max(1e-3) {
                blowup_t = Some(state.time());
                break 'outer;
            }
            let dt = limit.min(target - state.time());
            match do_step(&mut state, &mut tracers, dt, config.nu, config.cfl, class) {
                Ok(()) => {}
                Err(Error::Blowup { t }) => {
                    blowup_t = Some(t);
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
            let diss_new = diss_integrand(&state, config.nu);
            let fgrad_new = fgrad_integrand(&state);
            if !diss_new.is_finite() || !fgrad_new.is_finite() {
                blowup_t = Some(state.time());
                break 'outer;
            }
            diss_acc += 0.5 * dt * (diss_prev + diss_new);
            f_acc += 0.5 * dt * (fgrad_prev + fgrad_new);
            diss_prev = diss_new;
            fgrad_prev = fgrad_new;
            if let Some(tr) = &tracers {
                if tr.degenerate && tracer_degenerate_t.is_none() {
                    tracer_degenerate_t = Some(state.time());
                }
            }
        }
        if (state.time() - target).abs() <= 1e-9 {
            set_time(&mut state, target);
        }

        if is_output(target) {
            let (mut row, mut sample) = match state_row(
                &state,
                config.nu,
                &config.s_list,
                &config.p_list,
                Some(class),
            ) {
                Ok(v) => v,
                Err(Error::Blowup { t }) => {
                    blowup_t = Some(t);
                    break 'outer;
                }
                Err(e) => return Err(e),
            };
            row.diss_acc = diss_acc;
            row.f_acc = f_acc;
            if let Some(tr) = &tracers {
                sample.tracer_valid = !tr.degenerate;
                if !tr.degenerate {
                    last_h = tr.gap().unwrap_or(0.0);
                }
                row.h_gap = last_h;
            }
            // window diagnostics over [t/2, t], sampled on output times
            let t = row.t;
            if t > 0.0 {
                let lo = t / 2.0 - 1e-12;
                let mut win_t: Vec<f64> = vec![];
                let mut win_hs: Vec<Vec<f64>> = vec![];
                let mut win_l2: Vec<f64> = vec![];
                for r in rows.iter().filter(|r| r.t >= lo) {
                    win_t.push(r.t);
                    win_hs.push(r.hs.clone());
                    win_l2.push(p2_index.map(|ip| r.lp_omega[ip]).unwrap_or(0.0));
                }
                win_t.push(row.t);
                win_hs.push(row.hs.clone());
                win_l2.push(p2_index.map(|ip| row.lp_omega[ip]).unwrap_or(0.0));
                for (i, _) in config.s_list.iter().enumerate() {
                    row.ms[i] = win_hs.iter().map(|h| h[i]).fold(0.0, f64::max);
                }
                if p2_index.is_some() {
                    let mut eta = 0.0;
                    for w in 1..win_t.len() {
                        let dt = win_t[w] - win_t[w - 1];
                        eta += 0.5 * dt * (win_l2[w].powi(2) + win_l2[w - 1].powi(2));
                    }
                    row.eta = eta;
                }
            }
            rows.push(row);
            side.push(sample);
        }

        if is_checkpoint(target) {
            if let Some(dir) = out_dir {
                let path = dir.join(format!("checkpoint_{target}.bgl"));
                write_checkpoint(&path, &state, config.model, config.nu)?;
                checkpoints.push((target, path));
            }
        }
        let _ = ei;
    }

    if let Some(first) = rows.first() {
        params.a0 = first.vort_int;
    }
    let report = growth_monitors(&rows, &side, &params)?;

    if let Some(dir) = out_dir {
        std::fs::write(dir.join("series.csv"), render_csv(&columns, &rows))?;
        let mut summary = String::new();
        summary.push_str(&format!(
            "model = {}\nscenario = {}\ngrid = {} x {}\nnu = {}\nhorizon = {}\nseed = {}\nk0 = {}\n\n",
            config.model.as_str(),
            config.scenario.name.as_str(),
            config.n1,
            config.n2,
            config.nu,
            config.horizon,
            config.seed,
            params.k0,
        ));
        summary.push_str("hypothesis validation:\n");
        for c in &validation.clauses {
            summary.push_str(&format!(
                "  {:<34} {}  ({:.3e})\n",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.measured
            ));
        }
        summary.push('\n');
        if let Some(t) = blowup_t {
            summary.push_str(&format!("numerical blowup at t = {t}\n\n"));
        }
        if let Some(t) = tracer_degenerate_t {
            summary.push_str(&format!(
                "tracer within {:.0e} of a segment endpoint at t = {t}; h monitor frozen\n\n",
                crate::solver::tracer::ENDPOINT_GUARD
            ));
        }
        summary.push_str("monitored bounds:\n");
        summary.push_str(&report.render());
        summary.push_str(&format!(
            "\noverall: {}\n",
            if blowup_t.is_some() {
                "BLOWUP"
            } else if report.all_pass() {
                "PASS"
            } else {
                "FAIL"
            }
        ));
        std::fs::write(dir.join("summary.txt"), summary)?;
    }

    Ok(RunOutput {
        columns,
        rows,
        side,
        params,
        report,
        validation,
        blowup_t,
        tracer_degenerate_t,
        checkpoints,
    })
}

/// Recompute the state-derived diagnostics of a checkpoint. Accumulator
/// columns (diss_acc, F_acc, h, Ms, eta) are path-dependent and emitted as
/// zero; see the format notes.
pub fn diagnose_checkpoint(
    state: &SimState,
    nu: f64,
    s_list: &[f64],
    p_list: &[f64],
) -> Result<(Vec<String>, DiagnosticsRow)> {
    let (row, _) = state_row(state, nu, s_list, p_list, None)?;
    Ok((csv_columns(s_list, p_list), row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{ScenarioName, ScenarioSpec};

    fn small_config() -> RunConfig {
        RunConfig {
            model: ModelKind::TorusInviscid,
            scenario: ScenarioSpec::defaults(ScenarioName::InviscidT2),
            n1: 32,
            n2: 32,
            nu: 0.0,
            cfl: 0.5,
            output_interval: 0.05,
            horizon: 0.2,
            s_list: vec![1.0],
            p_list: vec![1.0, 2.0, f64::INFINITY],
            checkpoint_times: vec![0.1],
            out_dir: "out".into(),
            seed: 0,
        }
    }

    #[test]
    fn horizon_zero_gives_single_row() {
        let mut cfg = small_config();
        cfg.horizon = 0.0;
        cfg.checkpoint_times.clear();
        let out = run(&cfg, None).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].t, 0.0);
    }

    #[test]
    fn deterministic_series() {
        let cfg = small_config();
        let a = run(&cfg, None).unwrap();
        let b = run(&cfg, None).unwrap();
        let csv_a = render_csv(&a.columns, &a.rows);
        let csv_b = render_csv(&b.columns, &b.rows);
        assert_eq!(csv_a, csv_b);
        assert_eq!(a.rows.len(), 5);
    }

    #[test]
    fn rows_at_output_multiples() {
        let out = run(&small_config(), None).unwrap();
        let times: Vec<f64> = out.rows.iter().map(|r| r.t).collect();
        let expect: Vec<f64> = (0..=4).map(|k| k as f64 * 0.05).collect();
        assert_eq!(times, expect);
    }
}
