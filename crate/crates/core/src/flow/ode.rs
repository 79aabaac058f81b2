//! Adaptive classical RK4 with step-doubling error control.

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Controls {
    pub t_max: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Local error per step, relative to max(1, |y_i|) componentwise.
    pub tol: f64,
    /// Stationary when max|rhs| stays below this for `stationary_steps`
    /// consecutive accepted steps.
    pub stationary_eps: f64,
    pub stationary_steps: usize,
    /// Blow-up needs max|y| above `blowup_norm` once the admissible step
    /// has dropped below `blowup_step`.
    pub blowup_norm: f64,
    pub blowup_step: f64,
    /// Hard floor on the step; reaching it without blow-up is an error.
    pub underflow_step: f64,
    pub max_steps: usize,
}

impl Default for Controls {
    fn default() -> Self {
        Self {
            t_max: 10.0,
            initial_step: 1e-3,
            max_step: f64::INFINITY,
            tol: 1e-10,
            stationary_eps: 1e-10,
            stationary_steps: 10,
            blowup_norm: 1e8,
            blowup_step: 1e-12,
            underflow_step: 1e-40,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    ReachedTMax,
    Converged { residual: f64 },
    BlowUp { t_b: f64 },
    StepUnderflow { t: f64, step: f64, norm: f64 },
    MaxSteps { t: f64 },
    RhsFailed { t: f64, message: String },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::ReachedTMax => "reached_t_max",
            Status::Converged { .. } => "converged",
            Status::BlowUp { .. } => "blow_up",
            Status::StepUnderflow { .. } => "step_underflow",
            Status::MaxSteps { .. } => "max_steps",
            Status::RhsFailed { .. } => "rhs_failed",
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(
            self,
            Status::StepUnderflow { .. } | Status::MaxSteps { .. } | Status::RhsFailed { .. }
        )
    }

    pub fn blow_up_time(&self) -> Option<f64> {
        match self {
            Status::BlowUp { t_b } => Some(*t_b),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub status: Status,
    pub stats: StepStats,
}

impl OdeSolution {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("solution has at least the initial sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("solution has at least the initial sample")
    }
}

fn max_abs(y: &[f64]) -> f64 {
    y.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Time as an unevaluated sum hi + lo. Near a square-root blow-up the
/// remaining time T − t falls far below the spacing of doubles at t.
#[derive(Clone, Copy, Debug)]
struct Clock {
    hi: f64,
    lo: f64,
}

impl Clock {
    fn advance(&mut self, h: f64) {
        let s = self.hi + h;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (h - bp);
        self.hi = s;
        self.lo += err;
        let s2 = self.hi + self.lo;
        self.lo -= s2 - self.hi;
        self.hi = s2;
    }

    fn remaining(&self, t_max: f64) -> f64 {
        (t_max - self.hi) - self.lo
    }
}

struct Rk4<'a, F> {
    rhs: &'a mut F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> Result<Vec<f64>>> Rk4<'_, F> {
    fn eval(&mut self, y: &[f64]) -> Result<Vec<f64>> {
        self.evals += 1;
        (self.rhs)(y)
    }

    fn step(&mut self, y: &[f64], k1: &[f64], h: f64) -> Result<Vec<f64>> {
        let k2 = self.eval(&axpy(y, h / 2.0, k1))?;
        let k3 = self.eval(&axpy(y, h / 2.0, &k2))?;
        let k4 = self.eval(&axpy(y, h, &k3))?;
        Ok((0..y.len())
            .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect())
    }
}

/// Integrates the autonomous system y' = rhs(y) from t = 0.
///
/// Every outcome is reported through [`Status`]; the function itself never
/// fails.
pub fn integrate_system<F>(mut rhs: F, y0: &[f64], controls: &Controls) -> OdeSolution
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut rk = Rk4 {
        rhs: &mut rhs,
        evals: 0,
    };
    let mut clock = Clock { hi: 0.0, lo: 0.0 };
    let mut y = y0.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![y.clone()];
    let mut stats = StepStats {
        min_step: f64::INFINITY,
        ..StepStats::default()
    };
    let mut h = controls.initial_step.min(controls.max_step);
    let mut quiet = 0usize;

    let fail = |clock: &Clock, e: crate::error::Error| Status::RhsFailed {
        t: clock.hi + clock.lo,
        message: e.to_string(),
    };

    let mut k1 = match rk.eval(&y) {
        Ok(k) => k,
        Err(e) => {
            return finish(times, states, fail(&clock, e), stats, rk.evals);
        }
    };
    if max_abs(&k1) < controls.stationary_eps {
        quiet = 1;
    }

    let status = loop {
        // An exactly vanishing right side is a fixed point; no need to wait.
        if quiet > 0 && max_abs(&k1) == 0.0 {
            break Status::Converged { residual: 0.0 };
        }
        let remaining = clock.remaining(controls.t_max);
        if remaining <= 4.0 * f64::EPSILON * controls.t_max.abs() {
            break Status::ReachedTMax;
        }
        if stats.accepted >= controls.max_steps {
            break Status::MaxSteps { t: clock.hi + clock.lo };
        }
        let clipped = h >= remaining;
        let step = h.min(remaining);
        let norm = max_abs(&y);
        if !clipped {
            if step < controls.blowup_step && norm > controls.blowup_norm {
                break Status::BlowUp {
                    t_b: clock.hi + clock.lo,
                };
            }
            if step < controls.underflow_step {
                break Status::StepUnderflow {
                    t: clock.hi + clock.lo,
                    step,
                    norm,
                };
            }
        }

        let attempt = (|| -> Result<(Vec<f64>, Vec<f64>)> {
            let full = rk.step(&y, &k1, step)?;
            let mid = rk.step(&y, &k1, step / 2.0)?;
            let k_mid = rk.eval(&mid)?;
            let two = rk.step(&mid, &k_mid, step / 2.0)?;
            Ok((full, two))
        })();
        let (full, two) = match attempt {
            Ok(p) => p,
            Err(e) => break fail(&clock, e),
        };

        let mut err = 0.0f64;
        for i in 0..y.len() {
            let scale = controls.tol * 1f64.max(y[i].abs()).max(two[i].abs());
            let e = (two[i] - full[i]).abs() / 15.0 / scale;
            err = if e.is_nan() { f64::INFINITY } else { err.max(e) };
        }
        if !err.is_finite() || err > 1.0 {
            stats.rejected += 1;
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).max(0.1)
            } else {
                0.1
            };
            h = step * factor;
            continue;
        }

        // Richardson extrapolation of the two half steps.
        y = two.iter().zip(&full).map(|(a, b)| a + (a - b) / 15.0).collect();
        clock.advance(step);
        stats.accepted += 1;
        stats.min_step = stats.min_step.min(step);
        stats.max_step = stats.max_step.max(step);

        let t = clock.hi + clock.lo;
        // Times closer than one ulp share a sample; keep the newest state.
        if t > *times.last().unwrap() {
            times.push(t);
            states.push(y.clone());
        } else {
            *states.last_mut().unwrap() = y.clone();
        }

        k1 = match rk.eval(&y) {
            Ok(k) => k,
            Err(e) => break fail(&clock, e),
        };
        let residual = max_abs(&k1);
        if residual < controls.stationary_eps {
            quiet += 1;
            if quiet >= controls.stationary_steps {
                break Status::Converged { residual };
            }
        } else {
            quiet = 0;
        }

        let grow = if err == 0.0 {
            4.0
        } else {
            (0.9 * err.powf(-0.2)).min(4.0)
        };
        h = (step * grow).min(controls.max_step);
        if clipped {
            h = h.max(step);
        }
    };
    finish(times, states, status, stats, rk.evals)
}

fn finish(times: Vec<f64>, states: Vec<Vec<f64>>, status: Status, mut stats: StepStats, evals: usize) -> OdeSolution {
    stats.rhs_evals = evals;
    if stats.accepted == 0 {
        stats.min_step = 0.0;
    }
    OdeSolution {
        times,
        states,
        status,
        stats,
    }
}
