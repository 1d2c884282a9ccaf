//! Initial-data construction, hypothesis validation, and symmetry classes.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;
use crate::ops::Axis;
use crate::spectral::{transform, wavenumber, TrigInterp1d};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity constraints of one field along the two axes; `None` leaves an
/// axis unconstrained (always the case on bounded axes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParity {
    pub a1: Option<Parity>,
    pub a2: Option<Parity>,
}

/// Per-field parity lists of one scenario family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryClass {
    /// Density-like transported scalar: rho, or the swirl u^theta.
    pub scalar: FieldParity,
    /// Vorticity-like field: omega, or omega^theta.
    pub vorticity: FieldParity,
}

fn reflect(f: &ScalarField, axis: Axis) -> ScalarField {
    let mut out = f.clone();
    match (f.grid, axis) {
        (Grid::Torus(g), Axis::A1) => {
            for j2 in 0..g.ny {
                for j1 in 0..g.nx {
                    out.values[g.idx(j1, j2)] = f.values[g.idx((g.nx - j1) % g.nx, j2)];
                }
            }
        }
        (Grid::Torus(g), Axis::A2) => {
            for j2 in 0..g.ny {
                for j1 in 0..g.nx {
                    out.values[g.idx(j1, j2)] = f.values[g.idx(j1, (g.ny - j2) % g.ny)];
                }
            }
        }
        (Grid::Strip(g), Axis::A1) => {
            for j2 in 0..g.nz {
                for j1 in 0..g.nx {
                    out.values[g.idx(j1, j2)] = f.values[g.idx((g.nx - j1) % g.nx, j2)];
                }
            }
        }
        (Grid::Annulus(g), Axis::A2) => {
            for ir in 0..g.nr {
                for jz in 0..g.nz {
                    out.values[g.idx(ir, jz)] = f.values[g.idx(ir, (g.nz - jz) % g.nz)];
                }
            }
        }
        _ => unreachable!("reflection requested on a bounded axis"),
    }
    out
}

/// Average a field with its signed reflections. Returns the projected field
/// and the sup-norm distance moved. Idempotent.
pub fn symmetry_project(f: &ScalarField, parity: FieldParity) -> (ScalarField, f64) {
    let mut cur = f.clone();
    for (axis, p) in [(Axis::A1, parity.a1), (Axis::A2, parity.a2)] {
        if let Some(p) = p {
            let refl = reflect(&cur, axis);
            let sign = match p {
                Parity::Even => 1.0,
                Parity::Odd => -1.0,
            };
            cur = cur.zip(&refl, |a, b| 0.5 * (a + sign * b));
        }
    }
    let moved = f
        .values
        .iter()
        .zip(cur.values.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    (cur, moved)
}

/// Scenario families matching the four simulated theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    ViscousT2,
    InviscidT2,
    StripInvB,
    Axisym3d,
}

impl ScenarioName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::ViscousT2 => "viscous-t2",
            ScenarioName::InviscidT2 => "inviscid-t2",
            ScenarioName::StripInvB => "strip-invB",
            ScenarioName::Axisym3d => "axisym-3d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "viscous-t2" => Ok(ScenarioName::ViscousT2),
            "inviscid-t2" => Ok(ScenarioName::InviscidT2),
            "strip-invB" => Ok(ScenarioName::StripInvB),
            "axisym-3d" => Ok(ScenarioName::Axisym3d),
            _ => Err(Error::Config(format!("unknown scenario '{s}'"))),
        }
    }

    pub fn class(&self) -> SymmetryClass {
        match self {
            ScenarioName::ViscousT2 | ScenarioName::InviscidT2 => SymmetryClass {
                scalar: FieldParity {
                    a1: Some(Parity::Even),
                    a2: Some(Parity::Odd),
                },
                vorticity: FieldParity {
                    a1: Some(Parity::Odd),
                    a2: Some(Parity::Odd),
                },
            },
            ScenarioName::StripInvB => SymmetryClass {
                scalar: FieldParity {
                    a1: Some(Parity::Even),
                    a2: None,
                },
                vorticity: FieldParity {
                    a1: Some(Parity::Odd),
                    a2: None,
                },
            },
            ScenarioName::Axisym3d => SymmetryClass {
                scalar: FieldParity {
                    a1: None,
                    a2: Some(Parity::Even),
                },
                vorticity: FieldParity {
                    a1: None,
                    a2: Some(Parity::Odd),
                },
            },
        }
    }
}

/// Amplitude and perturbation knobs of one scenario instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    /// Base scale of the density/swirl sign condition.
    pub k0: f64,
    /// Amplitude of the initial vorticity component.
    pub amplitude: f64,
    /// Relative amplitude of the random in-class perturbation.
    pub perturb: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn defaults(name: ScenarioName) -> Self {
        let amplitude = match name {
            ScenarioName::InviscidT2 => 0.5,
            _ => 0.0,
        };
        Self {
            name,
            k0: 1.0,
            amplitude,
            perturb: 0.0,
            seed: 0,
        }
    }
}

/// Seed points of the two labelled tracers on the segment {0} x (0, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracerInit {
    /// Location of the density maximum on the segment.
    pub a: f64,
    /// Location where the density first drops to half the maximum.
    pub b: f64,
}

/// Generated initial fields plus bookkeeping consumed by the solvers.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub scalar: ScalarField,
    pub vorticity: ScalarField,
    pub class: SymmetryClass,
    /// Effective sign-condition constant measured from the generated data.
    pub k0: f64,
    pub tracers: Option<TracerInit>,
}

/// Band-limited random field projected onto a parity class, sup-capped at 1.
fn class_noise(grid: Grid, parity: FieldParity, rng: &mut ChaCha8Rng) -> ScalarField {
    let modes: Vec<(f64, f64, f64, f64)> = (0..24)
        .map(|_| {
            (
                rng.gen_range(-8..=8i64) as f64,
                rng.gen_range(1..=8i64) as f64,
                rng.gen_range(-1.0..1.0f64),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let raw = match grid {
        Grid::Torus(_) => ScalarField::from_fn(grid, |x1, x2| {
            modes
                .iter()
                .map(|(k1, k2, a, p)| a * (k1 * x1 + p).cos() * (k2 * x2 + p).sin())
                .sum()
        }),
        // Bounded-axis factor uses cos(m * chi) with chi the scaled bounded
        // coordinate, smooth on the closed interval.
        Grid::Strip(_) => ScalarField::from_fn(grid, |x1, x2| {
            modes
                .iter()
                .map(|(k1, k2, a, p)| a * (k1 * x1 + p).cos() * (k2 * x2).cos())
                .sum()
        }),
        Grid::Annulus(_) => ScalarField::from_fn(grid, |r, z| {
            modes
                .iter()
                .map(|(k1, k2, a, p)| a * (k1 * z + p).cos() * (k2 * (r - PI)).cos())
                .sum()
        }),
    };
    let (proj, _) = symmetry_project(&raw, parity);
    let cap = proj.max_abs().max(1e-12);
    proj.scale(1.0 / cap)
}

/// Column of a torus field along x1 = 0, ordered by increasing x2.
fn line_x1_zero(f: &ScalarField) -> Vec<f64> {
    let g = f.grid.as_torus().expect("torus field");
    (0..g.ny).map(|j2| f.values[g.idx(g.nx / 2, j2)]).collect()
}

fn find_tracer_seeds(rho0: &ScalarField, k0: f64) -> Result<TracerInit> {
    let samples = line_x1_zero(rho0);
    let interp = TrigInterp1d::from_samples(&samples);
    // coarse max location on (0, pi)
    let m = 4096;
    let mut a = 0.0;
    let mut best = f64::MIN;
    for i in 1..m {
        let x = PI * i as f64 / m as f64;
        let v = interp.eval(x);
        if v > best {
            best = v;
            a = x;
        }
    }
    if best <= 0.0 {
        return Err(Error::Hypothesis(
            "sup of rho0 on {0} x [0,pi] is not positive".into(),
        ));
    }
    // walk down from a to the first crossing of k0/2, then bisect
    let target = k0 / 2.0;
    let mut lo = 0.0;
    let mut found = false;
    for i in (1..m).rev() {
        let x = PI * i as f64 / m as f64;
        if x >= a {
            continue;
        }
        if interp.eval(x) < target {
            lo = x;
            found = true;
            break;
        }
    }
    if !found {
        // density stays above k0/2 all the way down; take b near the origin
        return Ok(TracerInit { a, b: PI / m as f64 });
    }
    let mut hi = lo + PI / m as f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if interp.eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TracerInit { a, b: 0.5 * (lo + hi) })
}

/// Build canonical initial data for one scenario on the given grid.
pub fn make_scenario(spec: &ScenarioSpec, grid: Grid) -> Result<InitialData> {
    if spec.k0 <= 0.0 {
        return Err(Error::Hypothesis(format!(
            "k0 must be positive (sign condition constant), got {}",
            spec.k0
        )));
    }
    let class = spec.name.class();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let data = match spec.name {
        ScenarioName::ViscousT2 => {
            grid.as_torus()?;
            let base =
                ScalarField::from_fn(grid, |x1, x2| spec.k0 * x2.sin() * (1.0 - x1.cos()));
            let scalar = if spec.perturb > 0.0 {
                // multiplicative even-even modulation keeps every sign and
                // parity clause intact
                let n = class_noise(
                    grid,
                    FieldParity {
                        a1: Some(Parity::Even),
                        a2: Some(Parity::Even),
                    },
                    &mut rng,
                );
                let eps = spec.perturb.min(0.5);
                base.zip(&n, |b, q| b * (1.0 + eps * q))
            } else {
                base
            };
            let (scalar, _) = symmetry_project(&scalar, class.scalar);
            InitialData {
                scalar,
                vorticity: ScalarField::zeros(grid),
                class,
                k0: spec.k0,
                tracers: None,
            }
        }
        ScenarioName::InviscidT2 => {
            grid.as_torus()?;
            let mut scalar =
                ScalarField::from_fn(grid, |x1, x2| spec.k0 * x1.cos() * x2.sin());
            let mut vorticity = ScalarField::from_fn(grid, |x1, x2| {
                spec.amplitude * x1.sin() * x2.sin()
            });
            if spec.perturb > 0.0 {
                let eps = spec.perturb;
                let nr = class_noise(grid, class.scalar, &mut rng);
                // the sin^2(x1) factor vanishes on both sign-condition lines
                let g = grid.as_torus().unwrap();
                for j2 in 0..g.ny {
                    for j1 in 0..g.nx {
                        let x1 = g.x1(j1);
                        scalar.values[g.idx(j1, j2)] +=
                            eps * x1.sin().powi(2) * nr.values[g.idx(j1, j2)];
                    }
                }
                let nw = class_noise(grid, class.vorticity, &mut rng);
                vorticity = vorticity.zip(&nw, |a, b| a + eps * b);
            }
            let (scalar, _) = symmetry_project(&scalar, class.scalar);
            let (vorticity, _) = symmetry_project(&vorticity, class.vorticity);
            let line = line_x1_zero(&scalar);
            let k0 = line.iter().fold(f64::MIN, |m, &v| m.max(v));
            if k0 <= 0.0 {
                return Err(Error::Hypothesis(
                    "perturbation destroyed positivity of rho0 on {0} x [0,pi]".into(),
                ));
            }
            let tracers = find_tracer_seeds(&scalar, k0)?;
            InitialData {
                scalar,
                vorticity,
                class,
                k0,
                tracers: Some(tracers),
            }
        }
        ScenarioName::StripInvB => {
            match grid {
                Grid::Strip(_) => {}
                _ => {
                    return Err(Error::UnsupportedDomain {
                        op: "strip-invB scenario",
                        expected: "strip grid",
                    })
                }
            }
            let mut scalar = ScalarField::from_fn(grid, |x1, _| spec.k0 * x1.cos());
            if spec.perturb > 0.0 {
                let n = class_noise(grid, class.scalar, &mut rng);
                // sin^2(x1) zeroes the perturbation on both boundary lines
                let g = match grid {
                    Grid::Strip(g) => g,
                    _ => unreachable!(),
                };
                for j2 in 0..g.nz {
                    for j1 in 0..g.nx {
                        let x1 = g.x1(j1);
                        scalar.values[g.idx(j1, j2)] +=
                            spec.perturb * x1.sin().powi(2) * n.values[g.idx(j1, j2)];
                    }
                }
            }
            let vorticity = ScalarField::from_fn(grid, |x1, x2| {
                spec.amplitude * x1.sin() * x2.sin()
            });
            let (scalar, _) = symmetry_project(&scalar, class.scalar);
            let (vorticity, _) = symmetry_project(&vorticity, class.vorticity);
            InitialData {
                scalar,
                vorticity,
                class,
                k0: spec.k0,
                tracers: None,
            }
        }
        ScenarioName::Axisym3d => {
            match grid {
                Grid::Annulus(_) => {}
                _ => {
                    return Err(Error::UnsupportedDomain {
                        op: "axisym-3d scenario",
                        expected: "annulus grid",
                    })
                }
            }
            let mut scalar =
                ScalarField::from_fn(grid, |_, z| spec.k0 * (1.0 - z.cos()) / 2.0);
            if spec.perturb > 0.0 {
                let n = class_noise(grid, class.scalar, &mut rng);
                let g = match grid {
                    Grid::Annulus(g) => g,
                    _ => unreachable!(),
                };
                // sin^2(z) vanishes on both the floor (z = pi) and ceiling
                // (z = 0) lines of the swirl hypotheses
                for ir in 0..g.nr {
                    for jz in 0..g.nz {
                        let z = g.z(jz);
                        scalar.values[g.idx(ir, jz)] +=
                            spec.perturb * z.sin().powi(2) * n.values[g.idx(ir, jz)];
                    }
                }
            }
            let vorticity = ScalarField::from_fn(grid, |r, z| {
                spec.amplitude * z.sin() * (r - PI).sin()
            });
            let (scalar, _) = symmetry_project(&scalar, class.scalar);
            let (vorticity, _) = symmetry_project(&vorticity, class.vorticity);
            InitialData {
                scalar,
                vorticity,
                class,
                k0: spec.k0,
                tracers: None,
            }
        }
    };
    Ok(data)
}

/// One hypothesis clause with its measured margin.
#[derive(Debug, Clone)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub clauses: Vec<Clause>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, measured: f64) {
        self.clauses.push(Clause {
            name: name.to_string(),
            pass,
            measured,
        });
    }
}

fn parity_clause(report: &mut ValidationReport, name: &str, f: &ScalarField, p: FieldParity) {
    let (_, moved) = symmetry_project(f, p);
    let scale = f.max_abs().max(1e-30);
    report.push(name, moved / scale <= 1e-12, moved / scale);
}

/// Spectral tail fraction along the periodic axes; a smoothness proxy.
fn tail_fraction(f: &ScalarField) -> f64 {
    let s = transform(f);
    let mut total = 0.0;
    let mut tail = 0.0;
    match f.grid {
        Grid::Torus(g) => {
            for p2 in 0..g.ny {
                let k2 = wavenumber(p2, g.ny);
                for p1 in 0..g.nx {
                    let k1 = wavenumber(p1, g.nx);
                    let m = s.data[p2 * g.nx + p1].norm_sqr();
                    total += m;
                    if k1.abs() > (g.nx as i64) / 3 || k2.abs() > (g.ny as i64) / 3 {
                        tail += m;
                    }
                }
            }
        }
        Grid::Strip(g) => {
            for j2 in 0..g.nz {
                for p1 in 0..g.nx {
                    let m = s.data[j2 * g.nx + p1].norm_sqr();
                    total += m;
                    if wavenumber(p1, g.nx).abs() > (g.nx as i64) / 3 {
                        tail += m;
                    }
                }
            }
        }
        Grid::Annulus(g) => {
            for ir in 0..g.nr {
                for pz in 0..g.nz {
                    let m = s.data[ir * g.nz + pz].norm_sqr();
                    total += m;
                    if wavenumber(pz, g.nz).abs() > (g.nz as i64) / 3 {
                        tail += m;
                    }
                }
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Check every hypothesis clause of the scenario's theorem against the data.
pub fn validate_assumptions(data: &InitialData, spec: &ScenarioSpec) -> ValidationReport {
    let mut rep = ValidationReport { clauses: vec![] };
    let class = spec.name.class();
    parity_clause(&mut rep, "scalar parity", &data.scalar, class.scalar);
    parity_clause(&mut rep, "vorticity parity", &data.vorticity, class.vorticity);
    let nonzero = data.scalar.max_abs() > 0.0;
    rep.push("scalar not identically zero", nonzero, data.scalar.max_abs());
    rep.push(
        "smooth scalar (spectral tail)",
        tail_fraction(&data.scalar) <= 1e-8,
        tail_fraction(&data.scalar),
    );
    rep.push(
        "smooth vorticity (spectral tail)",
        tail_fraction(&data.vorticity) <= 1e-8,
        tail_fraction(&data.vorticity),
    );

    match spec.name {
        ScenarioName::ViscousT2 => {
            let g = data.scalar.grid.as_torus().unwrap();
            let mut min_upper = f64::MAX;
            for j2 in 0..g.ny {
                let x2 = g.x2(j2);
                if x2 >= 0.0 {
                    for j1 in 0..g.nx {
                        min_upper = min_upper.min(data.scalar.values[g.idx(j1, j2)]);
                    }
                }
            }
            rep.push("rho0 >= 0 for x2 >= 0", min_upper >= -1e-12, min_upper);
            let axis_max = line_x1_zero(&data.scalar)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            rep.push("rho0 = 0 on the x2-axis", axis_max <= 1e-12, axis_max);
        }
        ScenarioName::InviscidT2 => {
            let g = data.scalar.grid.as_torus().unwrap();
            let line0 = line_x1_zero(&data.scalar);
            let mut min0 = f64::MAX;
            let mut sup0 = f64::MIN;
            let mut maxpi = f64::MIN;
            for j2 in 0..g.ny {
                let x2 = g.x2(j2);
                if (0.0..=PI).contains(&x2) {
                    min0 = min0.min(line0[j2]);
                    sup0 = sup0.max(line0[j2]);
                    maxpi = maxpi.max(data.scalar.values[g.idx(0, j2)]);
                }
            }
            rep.push("rho0 >= 0 on {0} x [0,pi]", min0 >= -1e-12, min0);
            rep.push("k0 = sup rho0(0,.) > 0", sup0 > 0.0, sup0);
            rep.push("rho0 <= 0 on {pi} x [0,pi]", maxpi <= 1e-12, maxpi);
        }
        ScenarioName::StripInvB => {
            let g = match data.scalar.grid {
                Grid::Strip(g) => g,
                _ => unreachable!(),
            };
            let mut min0 = f64::MAX;
            let mut maxpi = f64::MIN;
            for j2 in 0..g.nz {
                min0 = min0.min(data.scalar.values[g.idx(g.nx / 2, j2)]);
                maxpi = maxpi.max(data.scalar.values[g.idx(0, j2)]);
            }
            rep.push(
                "rho0 >= k0 on {0} x [0,pi]",
                min0 >= data.k0 - 1e-12,
                min0,
            );
            rep.push("rho0 <= 0 on {pi} x [0,pi]", maxpi <= 1e-12, maxpi);
        }
        ScenarioName::Axisym3d => {
            let g = match data.scalar.grid {
                Grid::Annulus(g) => g,
                _ => unreachable!(),
            };
            let mut floor = f64::MAX;
            let mut ceil = f64::MIN;
            for ir in 0..g.nr {
                floor = floor.min(data.scalar.values[g.idx(ir, 0)]); // z = -pi == pi
                ceil = ceil.max(data.scalar.values[g.idx(ir, g.nz / 2)].abs()); // z = 0
            }
            rep.push("u_theta0 >= k0 on z = pi", floor >= data.k0 - 1e-12, floor);
            rep.push(
                "|u_theta0| <= k0/8 on z = 0",
                ceil <= data.k0 / 8.0 + 1e-12,
                ceil,
            );
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AnnulusGrid, StripGrid, TorusGrid};

    fn torus(n: usize) -> Grid {
        Grid::Torus(TorusGrid::new(n, n).unwrap())
    }

    #[test]
    fn defaults_validate() {
        for (name, grid) in [
            (ScenarioName::ViscousT2, torus(64)),
            (ScenarioName::InviscidT2, torus(64)),
            (ScenarioName::StripInvB, Grid::Strip(StripGrid::new(64, 33).unwrap())),
            (ScenarioName::Axisym3d, Grid::Annulus(AnnulusGrid::new(33, 64).unwrap())),
        ] {
            let spec = ScenarioSpec::defaults(name);
            let data = make_scenario(&spec, grid).unwrap();
            let rep = validate_assumptions(&data, &spec);
            assert!(rep.pass(), "{name:?} failed: {:?}", rep.clauses);
        }
    }

    #[test]
    fn wrong_parity_fails() {
        let grid = torus(64);
        let spec = ScenarioSpec::defaults(ScenarioName::InviscidT2);
        let mut data = make_scenario(&spec, grid).unwrap();
        data.scalar = ScalarField::from_fn(grid, |x1, x2| x1.sin() * x2.sin());
        let rep = validate_assumptions(&data, &spec);
        let clause = rep.clauses.iter().find(|c| c.name == "scalar parity").unwrap();
        assert!(!clause.pass);
    }

    #[test]
    fn zero_scalar_fails() {
        let grid = torus(64);
        let spec = ScenarioSpec::defaults(ScenarioName::ViscousT2);
        let mut data = make_scenario(&spec, grid).unwrap();
        data.scalar = ScalarField::zeros(grid);
        let rep = validate_assumptions(&data, &spec);
        assert!(!rep.pass());
    }

    #[test]
    fn projection_properties() {
        let grid = torus(48);
        let f = ScalarField::from_fn(grid, |x1, x2| (x1 + 0.3).cos() * (2.0 * x2 + 1.0).sin());
        let p = FieldParity {
            a1: Some(Parity::Even),
            a2: Some(Parity::Odd),
        };
        let (p1, _) = symmetry_project(&f, p);
        let (p2, moved) = symmetry_project(&p1, p);
        assert!(moved <= 1e-15 * f.max_abs().max(1.0));
        let diff = p1
            .values
            .iter()
            .zip(p2.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff <= 1e-15);

        // already-symmetric input is unchanged
        let sym = ScalarField::from_fn(grid, |x1, x2| x1.cos() * x2.sin());
        let (q, moved) = symmetry_project(&sym, p);
        assert!(moved <= 1e-15);
        let diff = sym
            .values
            .iter()
            .zip(q.values.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff <= 1e-15);

        // pure wrong-parity content projects to zero
        let anti = ScalarField::from_fn(grid, |x1, x2| x1.sin() * x2.cos());
        let (z, _) = symmetry_project(&anti, p);
        assert!(z.max_abs() <= 1e-15);
    }

    #[test]
    fn tracer_seeds_default() {
        let spec = ScenarioSpec::defaults(ScenarioName::InviscidT2);
        let data = make_scenario(&spec, torus(128)).unwrap();
        let tr = data.tracers.unwrap();
        assert!((tr.a - PI / 2.0).abs() < 1e-3, "a = {}", tr.a);
        assert!((tr.b - PI / 6.0).abs() < 1e-3, "b = {}", tr.b);
        assert!((data.k0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_scenarios_still_validate() {
        for (name, grid) in [
            (ScenarioName::ViscousT2, torus(64)),
            (ScenarioName::InviscidT2, torus(64)),
            (ScenarioName::StripInvB, Grid::Strip(StripGrid::new(64, 33).unwrap())),
            (ScenarioName::Axisym3d, Grid::Annulus(AnnulusGrid::new(33, 64).unwrap())),
        ] {
            let mut spec = ScenarioSpec::defaults(name);
            spec.perturb = 0.05;
            spec.seed = 9;
            let data = make_scenario(&spec, grid).unwrap();
            let rep = validate_assumptions(&data, &spec);
            assert!(rep.pass(), "{name:?} failed: {:?}", rep.clauses);
        }
    }

    #[test]
    fn bad_k0_rejected() {
        let mut spec = ScenarioSpec::defaults(ScenarioName::StripInvB);
        spec.k0 = -1.0;
        let err = make_scenario(&spec, Grid::Strip(StripGrid::new(32, 17).unwrap()));
        assert!(err.is_err());
    }
}
