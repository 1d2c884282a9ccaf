//! Checkpoint container and CSV emission.
//!
//! Checkpoint layout: one text header line
//! `BGL1 <model> <n1> <n2> <t> <nu>\n` followed by the model's prognostic
//! fields as row-major little-endian f64:
//! torus models `rho, omega`; strip `rho, omega`; axisym `u_theta,
//! omega_theta`. Velocity and streamfunction are recomputed on load.

use crate::config::ModelKind;
use crate::diagnostics::DiagnosticsRow;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{AnnulusGrid, Grid, StripGrid, TorusGrid};
use crate::solver::{axisym::AxisymState, strip::StripState, torus::TorusState, SimState};
use std::fs;
use std::io::Write;
use std::path::Path;

const MAGIC: &str = "BGL1";

fn fields_of(state: &SimState) -> (ModelKind, &ScalarField, &ScalarField) {
    match state {
        SimState::Torus(s) => (ModelKind::TorusInviscid, &s.rho, &s.omega),
        SimState::Strip(s) => (ModelKind::StripInviscid, &s.rho, &s.omega),
        SimState::Axisym(s) => (ModelKind::AxisymEuler, &s.u_theta, &s.omega_theta),
    }
}

pub fn write_checkpoint(path: &Path, state: &SimState, model: ModelKind, nu: f64) -> Result<()> {
    let (_, a, b) = fields_of(state);
    let (n1, n2) = a.grid.dims();
    let mut buf = Vec::with_capacity(64 + 16 * a.grid.len());
    writeln!(
        buf,
        "{MAGIC} {} {n1} {n2} {} {}",
        model.as_str(),
        state.time(),
        nu
    )?;
    for field in [a, b] {
        for v in &field.values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    fs::write(path, buf)?;
    Ok(())
}

pub struct Checkpoint {
    pub state: SimState,
    pub model: ModelKind,
    pub nu: f64,
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path)?;
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Input("checkpoint missing header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::Input("checkpoint header is not UTF-8".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 6 || parts[0] != MAGIC {
        return Err(Error::Input(format!("bad checkpoint header '{header}'")));
    }
    let model = ModelKind::parse(parts[1])?;
    let n1: usize = parts[2]
        .parse()
        .map_err(|_| Error::Input("bad n1 in checkpoint".into()))?;
    let n2: usize = parts[3]
        .parse()
        .map_err(|_| Error::Input("bad n2 in checkpoint".into()))?;
    let t: f64 = parts[4]
        .parse()
        .map_err(|_| Error::Input("bad time in checkpoint".into()))?;
    let nu: f64 = parts[5]
        .parse()
        .map_err(|_| Error::Input("bad nu in checkpoint".into()))?;

    let grid = match model {
        ModelKind::TorusViscous | ModelKind::TorusInviscid => {
            Grid::Torus(TorusGrid::new(n1, n2)?)
        }
        ModelKind::StripInviscid => Grid::Strip(StripGrid::new(n1, n2)?),
        ModelKind::AxisymEuler => Grid::Annulus(AnnulusGrid::new(n1, n2)?),
    };
    let n = grid.len();
    let payload = &bytes[nl + 1..];
    if payload.len() != 2 * n * 8 {
        return Err(Error::Input(format!(
            "checkpoint payload has {} bytes, expected {}",
            payload.len(),
            2 * n * 8
        )));
    }
    let read_field = |offset: usize| -> Result<ScalarField> {
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            let start = offset + 8 * i;
            let chunk: [u8; 8] = payload[start..start + 8].try_into().unwrap();
            vals.push(f64::from_le_bytes(chunk));
        }
        ScalarField::new(grid, vals)
    };
    let a = read_field(0)?;
    let b = read_field(8 * n)?;
    let state = match model {
        ModelKind::TorusViscous | ModelKind::TorusInviscid => {
            SimState::Torus(TorusState::new(t, a, b)?)
        }
        ModelKind::StripInviscid => SimState::Strip(StripState::new(t, a, b)?),
        ModelKind::AxisymEuler => SimState::Axisym(AxisymState::new(t, a, b)?),
    };
    Ok(Checkpoint { state, model, nu })
}

/// Render the canonical CSV (header plus one line per row).
pub fn render_csv(columns: &[String], rows: &[DiagnosticsRow]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;

    #[test]
    fn checkpoint_round_trip_bit_exact() {
        let dir = std::env::temp_dir().join("bglab-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ck.bgl");

        let g = Grid::Torus(TorusGrid::new(32, 32).unwrap());
        let rho = ScalarField::from_fn(g, |x1, x2| x1.cos() * x2.sin() * 0.37);
        let omega = ScalarField::from_fn(g, |x1, x2| 0.11 * x1.sin() * x2.sin());
        let state = SimState::Torus(TorusState::new(0.625, rho.clone(), omega.clone()).unwrap());
        write_checkpoint(&path, &state, ModelKind::TorusInviscid, 0.0).unwrap();
        let back = read_checkpoint(&path).unwrap();
        match back.state {
            SimState::Torus(s) => {
                assert_eq!(s.t, 0.625);
                assert_eq!(s.rho.values, rho.values);
                assert_eq!(s.omega.values, omega.values);
            }
            _ => panic!("wrong model"),
        }
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn header_is_textual() {
        let dir = std::env::temp_dir().join("bglab-io-test2");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ck.bgl");
        let g = Grid::Strip(StripGrid::new(16, 17).unwrap());
        let state = SimState::Strip(
            StripState::new(1.5, ScalarField::zeros(g), ScalarField::zeros(g)).unwrap(),
        );
        write_checkpoint(&path, &state, ModelKind::StripInviscid, 0.0).unwrap();
        let bytes = fs::read(&path).unwrap();
        let nl = bytes.iter().position(|&b| b == b'\n').unwrap();
        assert_eq!(
            std::str::from_utf8(&bytes[..nl]).unwrap(),
            "BGL1 strip-inviscid 16 17 1.5 0"
        );
        fs::remove_file(&path).unwrap();
    }
}
