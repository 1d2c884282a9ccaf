//! Time integrators for the three models.

pub mod axisym;
pub mod strip;
pub mod torus;
pub mod tracer;

use crate::error::Result;
use crate::scenario::InitialData;
use axisym::AxisymState;
use strip::StripState;
use torus::TorusState;

/// State of one simulation, whichever model it runs.
#[derive(Debug, Clone)]
pub enum SimState {
    Torus(TorusState),
    Strip(StripState),
    Axisym(AxisymState),
}

impl SimState {
    pub fn time(&self) -> f64 {
        match self {
            SimState::Torus(s) => s.t,
            SimState::Strip(s) => s.t,
            SimState::Axisym(s) => s.t,
        }
    }

    pub fn from_initial(t: f64, data: &InitialData) -> Result<Self> {
        match data.scalar.grid {
            crate::grid::Grid::Torus(_) => Ok(SimState::Torus(TorusState::new(
                t,
                data.scalar.clone(),
                data.vorticity.clone(),
            )?)),
            crate::grid::Grid::Strip(_) => Ok(SimState::Strip(StripState::new(
                t,
                data.scalar.clone(),
                data.vorticity.clone(),
            )?)),
            crate::grid::Grid::Annulus(_) => Ok(SimState::Axisym(AxisymState::new(
                t,
                data.scalar.clone(),
                data.vorticity.clone(),
            )?)),
        }
    }
}
