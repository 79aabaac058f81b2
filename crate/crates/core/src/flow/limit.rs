//! Normalized limits φ(t)/c(t) of divergent trajectories.

use serde::Serialize;

use super::{Status, Trajectory};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::invariants::coords::{coords_to_form, PrimitiveCoords};
use crate::invariants::{classify_sp, SpOrbit, SymplecticForm, Tolerance};

/// What to divide by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalizer {
    /// One coordinate, by index into A..N.
    Coordinate(usize),
    /// The coordinate of largest magnitude in the final sample.
    Largest,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowControls {
    /// Fraction of the accepted samples forming the final window.
    pub fraction: f64,
    /// Largest allowed deviation of any normalized coordinate from its
    /// window mean.
    pub spread_tol: f64,
    /// Normalized coordinates at or below this size are zero as far as the
    /// orbit is concerned; a limit estimated at finite time cannot resolve
    /// them.
    pub resolution: f64,
}

impl Default for WindowControls {
    fn default() -> Self {
        Self {
            fraction: 0.05,
            spread_tol: 1e-3,
            resolution: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    /// Window mean of the normalized coordinates.
    pub coords: PrimitiveCoords<f64>,
    /// The mean with sub-resolution coordinates zeroed; this is what gets
    /// classified.
    pub form: Form<f64>,
    pub orbit: SpOrbit,
    pub normalizer: usize,
    pub window: usize,
    pub spread: f64,
}

/// Averages the normalized coordinates over the final window and
/// classifies the result.
pub fn normalized_limit(traj: &Trajectory, normalizer: Normalizer, window: &WindowControls) -> Result<LimitReport> {
    match &traj.status {
        Status::BlowUp { .. } | Status::ReachedTMax => {}
        Status::Converged { .. } => {
            return Err(Error::Limit("trajectory is stationary; nothing to normalize".into()));
        }
        other => return Err(Error::Limit(format!("trajectory ended with {}", other.name()))),
    }
    let last = traj.last();
    let k = match normalizer {
        Normalizer::Coordinate(k) if k < 14 => k,
        Normalizer::Coordinate(k) => return Err(Error::Limit(format!("no coordinate {k}"))),
        Normalizer::Largest => (0..14)
            .max_by(|a, b| last.coords[*a].abs().total_cmp(&last.coords[*b].abs()))
            .expect("fourteen coordinates"),
    };
    let n = traj.samples.len();
    let size = ((n as f64 * window.fraction).ceil() as usize).clamp(1, n);
    let tail = &traj.samples[n - size..];
    let mut normalized = Vec::with_capacity(size);
    for s in tail {
        let c = s.coords[k];
        if c == 0.0 || !c.is_finite() {
            return Err(Error::Limit(format!("normalizer vanishes at t = {}", s.t)));
        }
        normalized.push(s.coords.map(|x| x / c));
    }
    let mean: [f64; 14] = std::array::from_fn(|i| normalized.iter().map(|v| v[i]).sum::<f64>() / size as f64);
    let spread = normalized
        .iter()
        .flat_map(|v| v.iter().zip(&mean).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    if spread > window.spread_tol {
        return Err(Error::Limit(format!(
            "normalized coordinates vary by {spread:e} over the last {size} samples (t in [{}, {}])",
            tail[0].t, last.t
        )));
    }
    let coords = PrimitiveCoords(mean);
    let form = coords_to_form(&coords.map(|x| if x.abs() <= window.resolution { 0.0 } else { *x }));
    let orbit = classify_sp(&form, &SymplecticForm::standard(), Tolerance::default())?;
    Ok(LimitReport {
        coords,
        form,
        orbit,
        normalizer: k,
        window: size,
        spread,
    })
}
