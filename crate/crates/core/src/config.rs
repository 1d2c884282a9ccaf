//! Run configuration: line-oriented `key = value` text with `[section]`
//! headers. Unknown sections and keys are rejected; every value has a
//! documented default. `to_text` emits the canonical serialization, which
//! `parse` round-trips exactly.

use crate::error::{Error, Result};
use crate::scenario::{ScenarioName, ScenarioSpec};

/// Model tags, fixed by the checkpoint/CSV contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    TorusViscous,
    TorusInviscid,
    StripInviscid,
    AxisymEuler,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::TorusViscous => "torus-viscous",
            ModelKind::TorusInviscid => "torus-inviscid",
            ModelKind::StripInviscid => "strip-inviscid",
            ModelKind::AxisymEuler => "axisym-euler",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "torus-viscous" => Ok(ModelKind::TorusViscous),
            "torus-inviscid" => Ok(ModelKind::TorusInviscid),
            "strip-inviscid" => Ok(ModelKind::StripInviscid),
            "axisym-euler" => Ok(ModelKind::AxisymEuler),
            _ => Err(Error::Config(format!("unknown model '{s}'"))),
        }
    }

    pub fn compatible_scenario(&self) -> ScenarioName {
        match self {
            ModelKind::TorusViscous => ScenarioName::ViscousT2,
            ModelKind::TorusInviscid => ScenarioName::InviscidT2,
            ModelKind::StripInviscid => ScenarioName::StripInvB,
            ModelKind::AxisymEuler => ScenarioName::Axisym3d,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub scenario: ScenarioSpec,
    /// Grid dims: (nx, ny) torus, (nx, nz) strip, (nr, nz) annulus.
    pub n1: usize,
    pub n2: usize,
    pub nu: f64,
    pub cfl: f64,
    pub output_interval: f64,
    pub horizon: f64,
    pub s_list: Vec<f64>,
    pub p_list: Vec<f64>,
    pub checkpoint_times: Vec<f64>,
    pub out_dir: String,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::TorusInviscid,
            scenario: ScenarioSpec::defaults(ScenarioName::InviscidT2),
            n1: 256,
            n2: 256,
            nu: 0.0,
            cfl: 0.5,
            output_interval: 0.02,
            horizon: 5.0,
            s_list: vec![1.0, 2.0],
            p_list: vec![1.0, 2.0, 4.0, f64::INFINITY],
            checkpoint_times: vec![],
            out_dir: "out".into(),
            seed: 0,
        }
    }
}

fn fmt_list(vs: &[f64]) -> String {
    vs.iter()
        .map(|v| {
            if v.is_infinite() {
                "inf".to_string()
            } else {
                format!("{v}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

impl RunConfig {
    /// Canonical serialization; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let s = &self.scenario;
        format!(
            "[run]\n\
             model = {}\n\
             scenario = {}\n\
             nu = {}\n\
             cfl = {}\n\
             horizon = {}\n\
             output_interval = {}\n\
             seed = {}\n\
             out_dir = {}\n\
             \n\
             [grid]\n\
             n1 = {}\n\
             n2 = {}\n\
             \n\
             [scenario]\n\
             k0 = {}\n\
             amplitude = {}\n\
             perturb = {}\n\
             \n\
             [diagnostics]\n\
             s_list = {}\n\
             p_list = {}\n\
             \n\
             [checkpoints]\n\
             times = {}\n",
            self.model.as_str(),
            s.name.as_str(),
            self.nu,
            self.cfl,
            self.horizon,
            self.output_interval,
            self.seed,
            self.out_dir,
            self.n1,
            self.n2,
            s.k0,
            s.amplitude,
            s.perturb,
            fmt_list(&self.s_list),
            fmt_list(&self.p_list),
            fmt_list(&self.checkpoint_times),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, constraint: &str| {
            Err(Error::Validation {
                key: key.into(),
                constraint: constraint.into(),
            })
        };
        if self.nu < 0.0 {
            return fail("nu", "must be >= 0");
        }
        if self.model == ModelKind::TorusViscous && self.nu == 0.0 {
            return fail("nu", "must be > 0 for the viscous model");
        }
        if self.model != ModelKind::TorusViscous && self.nu != 0.0 {
            return fail("nu", "must be 0 for inviscid models");
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return fail("cfl", "must lie in (0, 1]");
        }
        if self.output_interval <= 0.0 {
            return fail("output_interval", "must be > 0");
        }
        if self.horizon < 0.0 {
            return fail("horizon", "must be >= 0");
        }
        if self.n1 == 0 || self.n2 == 0 {
            return fail("n1/n2", "must be positive");
        }
        if self.scenario.k0 <= 0.0 {
            return fail("k0", "must be > 0");
        }
        if self.scenario.perturb < 0.0 {
            return fail("perturb", "must be >= 0");
        }
        for s in &self.s_list {
            if !(-2.0..=6.0).contains(s) {
                return fail("s_list", "orders must lie in [-2, 6]");
            }
        }
        for p in &self.p_list {
            if *p < 1.0 {
                return fail("p_list", "orders must be >= 1");
            }
        }
        for t in &self.checkpoint_times {
            if *t < 0.0 || *t > self.horizon {
                return fail("times", "checkpoint times must lie in [0, horizon]");
            }
        }
        if self.model.compatible_scenario() != self.scenario.name {
            return fail("scenario", "incompatible with model");
        }
        Ok(())
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    if v == "inf" {
        return Ok(f64::INFINITY);
    }
    v.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid number for {key}: '{v}'"),
    })
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(vec![]);
    }
    v.split(',')
        .map(|part| parse_f64(line, key, part.trim()))
        .collect()
}

/// Parse config text; unspecified keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section = String::new();
    let mut model_set = false;
    let mut scenario_set = false;
    let mut amplitude_set = false;
    let mut nu_set = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::Parse {
                line: lineno,
                msg: "unterminated section header".into(),
            })?;
            match name {
                "run" | "grid" | "scenario" | "diagnostics" | "checkpoints" => {
                    section = name.to_string();
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown section '[{name}]'"),
                    })
                }
            }
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Parse {
            line: lineno,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        match (section.as_str(), key) {
            ("run", "model") => {
                cfg.model = ModelKind::parse(value).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                model_set = true;
            }
            ("run", "scenario") => {
                cfg.scenario.name = ScenarioName::parse(value).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                scenario_set = true;
            }
            ("run", "nu") => {
                cfg.nu = parse_f64(lineno, key, value)?;
                nu_set = true;
            }
            ("run", "cfl") => cfg.cfl = parse_f64(lineno, key, value)?,
            ("run", "horizon") => cfg.horizon = parse_f64(lineno, key, value)?,
            ("run", "output_interval") => cfg.output_interval = parse_f64(lineno, key, value)?,
            ("run", "seed") => {
                cfg.seed = value.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid seed '{value}'"),
                })?;
                cfg.scenario.seed = cfg.seed;
            }
            ("run", "out_dir") => cfg.out_dir = value.to_string(),
            ("grid", "n1") => {
                cfg.n1 = value.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid n1 '{value}'"),
                })?
            }
            ("grid", "n2") => {
                cfg.n2 = value.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid n2 '{value}'"),
                })?
            }
            ("scenario", "k0") => cfg.scenario.k0 = parse_f64(lineno, key, value)?,
            ("scenario", "amplitude") => {
                cfg.scenario.amplitude = parse_f64(lineno, key, value)?;
                amplitude_set = true;
            }
            ("scenario", "perturb") => cfg.scenario.perturb = parse_f64(lineno, key, value)?,
            ("diagnostics", "s_list") => cfg.s_list = parse_list(lineno, key, value)?,
            ("diagnostics", "p_list") => cfg.p_list = parse_list(lineno, key, value)?,
            ("checkpoints", "times") => cfg.checkpoint_times = parse_list(lineno, key, value)?,
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown key '{key}' in section '[{section}]'"),
                })
            }
        }
    }
    // keep model/scenario/defaults coherent when only one of them is given
    if scenario_set && !model_set {
        cfg.model = match cfg.scenario.name {
            ScenarioName::ViscousT2 => ModelKind::TorusViscous,
            ScenarioName::InviscidT2 => ModelKind::TorusInviscid,
            ScenarioName::StripInvB => ModelKind::StripInviscid,
            ScenarioName::Axisym3d => ModelKind::AxisymEuler,
        };
    }
    if model_set && !scenario_set {
        cfg.scenario.name = cfg.model.compatible_scenario();
    }
    if !amplitude_set && cfg.scenario.name != ScenarioName::InviscidT2 {
        cfg.scenario.amplitude = 0.0;
    }
    if !nu_set && cfg.model == ModelKind::TorusViscous {
        cfg.nu = 0.01;
    }
    cfg.scenario.seed = cfg.seed;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.model, ModelKind::TorusInviscid);
        assert_eq!(cfg.scenario.name, ScenarioName::InviscidT2);
    }

    #[test]
    fn negative_nu_rejected() {
        let err = parse_config("[run]\nnu = -1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nu") && msg.contains(">= 0"), "{msg}");
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let err = parse_config("[run]\nbogus = 3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    fn random_config(rng: &mut ChaCha8Rng) -> RunConfig {
        let model = match rng.gen_range(0..4) {
            0 => ModelKind::TorusViscous,
            1 => ModelKind::TorusInviscid,
            2 => ModelKind::StripInviscid,
            _ => ModelKind::AxisymEuler,
        };
        let mut scenario = ScenarioSpec::defaults(model.compatible_scenario());
        scenario.k0 = rng.gen_range(1..5) as f64 / 2.0;
        scenario.amplitude = rng.gen_range(0..4) as f64 / 4.0;
        scenario.perturb = rng.gen_range(0..3) as f64 / 10.0;
        let seed = rng.gen_range(0..1000);
        scenario.seed = seed;
        RunConfig {
            model,
            scenario,
            n1: 16 * rng.gen_range(1..5),
            n2: if matches!(model, ModelKind::StripInviscid | ModelKind::AxisymEuler) {
                16 * rng.gen_range(1..5) + 1
            } else {
                16 * rng.gen_range(1..5)
            },
            nu: if model == ModelKind::TorusViscous {
                rng.gen_range(1..10) as f64 / 100.0
            } else {
                0.0
            },
            cfl: rng.gen_range(1..10) as f64 / 10.0,
            output_interval: rng.gen_range(1..5) as f64 / 50.0,
            horizon: rng.gen_range(0..10) as f64 / 2.0,
            s_list: vec![1.0, rng.gen_range(2..5) as f64 / 2.0],
            p_list: vec![1.0, 2.0, f64::INFINITY],
            checkpoint_times: vec![0.0],
            out_dir: format!("out{}", rng.gen_range(0..100)),
            seed,
        }
    }

    #[test]
    fn serialize_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let mut cfg = random_config(&mut rng);
            if cfg.checkpoint_times.iter().any(|t| *t > cfg.horizon) {
                cfg.checkpoint_times.clear();
            }
            let text = cfg.to_text();
            let back = parse_config(&text).unwrap_or_else(|e| panic!("{e}:\n{text}"));
            assert_eq!(back, cfg, "round trip failed for\n{text}");
        }
    }

    #[test]
    fn incompatible_scenario_rejected() {
        let err = parse_config("[run]\nmodel = strip-inviscid\nscenario = inviscid-t2\n");
        assert!(err.is_err());
    }
}
