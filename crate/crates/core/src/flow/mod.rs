//! The Type IIA flow ∂φ = dΛdF(φ) restricted to invariant primitive
//! 3-forms, as an ODE on the fourteen A..N coordinates.

pub mod limit;
pub mod nil;
pub mod ode;
pub mod solv;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::coords::{coords_to_form, form_to_coords, PrimitiveCoords};
use crate::invariants::SymplecticForm;
use crate::liealg::InvariantSetup;
use crate::scalar::{Scalar, DEFAULT_TOL};

pub use limit::{normalized_limit, LimitReport, Normalizer, WindowControls};
pub use nil::NilData;
pub use ode::{integrate_system, Controls, OdeSolution, Status, StepStats};
pub use solv::{PositivityReport, SolvData, TPrime, UvRate, UvSystem};

/// Coordinates of dΛdF(φ) for φ with the given coordinates. Coordinates
/// refer to the standard ω, so the setup must use it.
pub fn reduced_rhs<S: Scalar>(setup: &InvariantSetup<S>, c: &PrimitiveCoords<S>) -> Result<PrimitiveCoords<S>> {
    if setup.omega != SymplecticForm::standard() {
        return Err(Error::Domain("flow coordinates need omega = e12 + e34 + e56".into()));
    }
    let out = setup.flow_operator(&coords_to_form(c))?;
    form_to_coords(&out, DEFAULT_TOL).map_err(|e| Error::Internal(format!("flow output has no coordinates: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowState {
    pub t: f64,
    pub coords: [f64; 14],
}

impl FlowState {
    pub fn coords(&self) -> PrimitiveCoords<f64> {
        PrimitiveCoords(self.coords)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<FlowState>,
    pub status: Status,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.samples.last().expect("trajectory holds the initial state")
    }

    /// Values of one coordinate along the trajectory.
    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        let k = PrimitiveCoords::<f64>::index_of(name).expect("coordinate name");
        self.samples.iter().map(|s| (s.t, s.coords[k])).collect()
    }
}

/// Integrates the reduced flow from `c0`.
pub fn integrate(setup: &InvariantSetup<f64>, c0: &PrimitiveCoords<f64>, controls: &Controls) -> Trajectory {
    let sol = integrate_system(
        |y| Ok(reduced_rhs(setup, &PrimitiveCoords::from_slice(y))?.0.to_vec()),
        c0.values(),
        controls,
    );
    Trajectory {
        samples: sol
            .times
            .iter()
            .zip(&sol.states)
            .map(|(t, y)| FlowState {
                t: *t,
                coords: PrimitiveCoords::from_slice(y).0,
            })
            .collect(),
        status: sol.status,
        stats: sol.stats,
    }
}
