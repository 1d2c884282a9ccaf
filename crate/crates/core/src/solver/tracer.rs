//! Labelled tracers confined to the invariant segment {0} x (0, pi).

use crate::scenario::TracerInit;
use std::f64::consts::PI;

/// Tracers closer than this to an endpoint stop the gap monitor.
pub const ENDPOINT_GUARD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Tracer {
    pub label: String,
    pub x2: f64,
}

/// Points on the segment; the x1 coordinate is identically zero.
#[derive(Debug, Clone)]
pub struct TracerSet {
    pub points: Vec<Tracer>,
    pub degenerate: bool,
}

impl TracerSet {
    pub fn theorem_pair(init: TracerInit) -> Self {
        Self {
            points: vec![
                Tracer {
                    label: "a".into(),
                    x2: init.a,
                },
                Tracer {
                    label: "b".into(),
                    x2: init.b,
                },
            ],
            degenerate: false,
        }
    }

    /// Gap h = |x2_a - x2_b| between the two labelled tracers.
    pub fn gap(&self) -> Option<f64> {
        let a = self.points.iter().find(|p| p.label == "a")?;
        let b = self.points.iter().find(|p| p.label == "b")?;
        Some((a.x2 - b.x2).abs())
    }

    pub fn endpoint_distance(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.x2.min(PI - p.x2))
            .fold(f64::MAX, f64::min)
    }
}

/// Classical RK4 update of dx/dt = v(x) with one velocity sample per stage.
pub fn rk4_segment(x: f64, dt: f64, v: [&dyn Fn(f64) -> f64; 4]) -> f64 {
    let l1 = v[0](x);
    let l2 = v[1](x + 0.5 * dt * l1);
    let l3 = v[2](x + 0.5 * dt * l2);
    let l4 = v[3](x + dt * l3);
    x + dt / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4)
}

/// Advance every tracer through per-stage samplers; flags degeneracy when a
/// point lands within [`ENDPOINT_GUARD`] of an endpoint.
pub fn advect_with_stages(set: &TracerSet, dt: f64, v: [&dyn Fn(f64) -> f64; 4]) -> TracerSet {
    let points = set
        .points
        .iter()
        .map(|p| Tracer {
            label: p.label.clone(),
            x2: rk4_segment(p.x2, dt, v),
        })
        .collect();
    let mut out = TracerSet {
        points,
        degenerate: set.degenerate,
    };
    if out.endpoint_distance() <= ENDPOINT_GUARD {
        out.degenerate = true;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_velocity_fixes_tracers() {
        let set = TracerSet::theorem_pair(TracerInit { a: 2.0, b: 0.7 });
        let zero = |_x: f64| 0.0;
        let out = advect_with_stages(&set, 0.1, [&zero, &zero, &zero, &zero]);
        assert_eq!(out.points[0].x2, 2.0);
        assert_eq!(out.points[1].x2, 0.7);
        assert!(!out.degenerate);
    }

    #[test]
    fn frozen_sine_matches_analytic_flow() {
        // dx/dt = sin x has solution x(t) = 2 atan(tan(x0/2) e^t)
        let v = |x: f64| x.sin();
        let x0 = PI / 2.0;
        let dt = 1e-3;
        let mut x = x0;
        for _ in 0..1000 {
            x = rk4_segment(x, dt, [&v, &v, &v, &v]);
        }
        let exact = 2.0 * ((x0 / 2.0).tan() * 1.0f64.exp()).atan();
        assert!((x - exact).abs() < 1e-10, "x = {x}, exact = {exact}");
        // derivative at pi/2 is 1
        let one_step = rk4_segment(x0, 1e-6, [&v, &v, &v, &v]);
        assert!(((one_step - x0) / 1e-6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn endpoint_guard_sets_degenerate() {
        let set = TracerSet::theorem_pair(TracerInit { a: 1.0, b: 1e-7 });
        let zero = |_x: f64| 0.0;
        let out = advect_with_stages(&set, 0.1, [&zero, &zero, &zero, &zero]);
        assert!(out.degenerate);
    }
}
