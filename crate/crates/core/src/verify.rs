//! Randomized verification suites with deterministic JSON reports.
//!
//! Every suite draws from a ChaCha stream seeded by the caller, so equal
//! seeds and trial counts give byte-identical reports.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{interior, wedge, Vector6};
use crate::hessian::{
    affine_derivative_check, leaf_data, point_checks, polar_check, scalar_curvature, scalar_curvature_closed_form,
    BaseMetric3, FiberPoint,
};
use crate::invariants::coords::{coords_to_form, gradient_relations_check, hat_map, q_from_coords, PrimitiveCoords};
use crate::invariants::{compute_f, compute_k, compute_q_from_f, invariants, SymplecticForm};
use crate::io::{coords_to_json, form_to_json, JsonScalar};
use crate::liealg::{InvariantSetup, LieAlgebra6};
use crate::linalg::Matrix;
use crate::random::{self, SuiteRng};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    LemmaBc,
    Gradients,
    Nijenhuis,
    Hessian,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::LemmaBc,
        Suite::Gradients,
        Suite::Nijenhuis,
        Suite::Hessian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::LemmaBc => "lemma-bc",
            Suite::Gradients => "gradients",
            Suite::Nijenhuis => "nijenhuis",
            Suite::Hessian => "hessian",
        }
    }

    /// Random forms for identities and lemma-bc, float points for
    /// gradients, forms per algebra for nijenhuis, base metrics for hessian.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Identities | Suite::LemmaBc => 1000,
            Suite::Gradients => 100,
            Suite::Nijenhuis => 200,
            Suite::Hessian => 3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite \"{s}\"")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub count: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub backend: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// The first failing sample, if any.
    pub counterexample: Option<Value>,
    pub details: Value,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Collects residuals per named check and remembers the first failure.
struct Checks {
    list: Vec<Check>,
    counterexample: Option<Value>,
}

impl Checks {
    fn new(tolerances: &[(&str, f64)]) -> Self {
        Self {
            list: tolerances
                .iter()
                .map(|(name, tol)| Check {
                    name: name.to_string(),
                    passed: true,
                    count: 0,
                    max_residual: 0.0,
                    tolerance: *tol,
                })
                .collect(),
            counterexample: None,
        }
    }

    fn record(&mut self, name: &str, residual: f64, sample: impl FnOnce() -> Value) {
        let c = self
            .list
            .iter_mut()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("undeclared check {name}"));
        c.count += 1;
        if residual > c.max_residual || residual.is_nan() {
            c.max_residual = residual;
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN residuals must fail
        if !(residual <= c.tolerance) {
            c.passed = false;
            if self.counterexample.is_none() {
                let mut v = sample();
                if let Value::Object(m) = &mut v {
                    m.insert("check".into(), json!(name));
                    m.insert("residual".into(), json!(residual));
                }
                self.counterexample = Some(v);
            }
        }
    }

    fn finish(self, suite: Suite, seed: u64, trials: usize, backend: &'static str, details: Value) -> Report {
        Report {
            suite: suite.name().into(),
            seed,
            trials,
            backend,
            passed: self.list.iter().all(|c| c.passed),
            checks: self.list,
            counterexample: self.counterexample,
            details,
        }
    }
}

pub fn run(suite: Suite, seed: u64, trials: Option<usize>) -> Result<Report> {
    let n = trials.unwrap_or(suite.default_trials());
    match suite {
        Suite::Identities => identities(seed, n),
        Suite::LemmaBc => lemma_bc_with(seed, n, &hat_map),
        Suite::Gradients => gradients(seed, n),
        Suite::Nijenhuis => nijenhuis(seed, n),
        Suite::Hessian => hessian(seed, n),
    }
}

fn vector_json<S: JsonScalar>(v: &Vector6<S>) -> Value {
    Value::Array(v.0.iter().map(JsonScalar::to_json).collect())
}

/// K∘K = (Q/4)·1, K(F) = −Q·K, F(F) = −Q²·φ and the contraction identities
/// for F, on alternately primitive and general rational 3-forms.
pub fn identities(seed: u64, trials: usize) -> Result<Report> {
    const NAMES: [&str; 7] = [
        "k_squared",
        "k_of_f",
        "f_of_f",
        "o1_antisymmetry",
        "o1_half_contraction",
        "o21",
        "o22",
    ];
    let mut checks = Checks::new(&NAMES.map(|n| (n, 0.0)));
    let mut rng = random::rng(seed);
    let w = SymplecticForm::<Rational>::standard();
    let half = Rational::ratio(1, 2);
    let mut primitive = 0;
    for trial in 0..trials {
        let phi = if trial % 2 == 0 {
            primitive += 1;
            coords_to_form(&random::primitive_coords(&mut rng))
        } else {
            random::three_form(&mut rng)
        };
        let x = random::vector(&mut rng);
        let y = random::vector(&mut rng);
        let inv = invariants(&phi, &w)?;
        let (k, f, q) = (inv.k.matrix(), &inv.f, &inv.q);
        let sample = || json!({"trial": trial, "phi": form_to_json(&phi), "x": vector_json(&x), "y": vector_json(&y)});

        let quarter = q.clone() / Rational::int(4);
        checks.record(
            "k_squared",
            inv.k.squared().max_abs_diff(&Matrix::identity(6).scale(&quarter)),
            sample,
        );
        let kf = compute_k(f, &w)?;
        checks.record("k_of_f", kf.matrix().max_abs_diff(&k.scale(&-q.clone())), sample);
        let ff = compute_f(f, &w)?;
        checks.record("f_of_f", ff.max_abs_diff(&phi.scale(&-(q.clone() * q))), sample);

        let ixphi = interior(&x, &phi)?;
        let ixf = interior(&x, f)?;
        let lhs = wedge(&ixphi, f)?;
        checks.record("o1_antisymmetry", lhs.max_abs_diff(&-wedge(&phi, &ixf)?), sample);
        let contracted = interior(&x, &wedge(&phi, f)?)?.scale(&half);
        checks.record("o1_half_contraction", lhs.max_abs_diff(&contracted), sample);
        let o21 = &wedge(&ixphi, &interior(&y, f)?)? + &wedge(&interior(&y, &phi)?, &ixf)?;
        checks.record("o21", o21.max_abs(), sample);
        let left = wedge(&interior(&y, &ixphi)?, f)?;
        let right = wedge(&phi, &interior(&y, &ixf)?)?;
        checks.record("o22", left.max_abs_diff(&right), sample);
    }
    let details = json!({"primitive_samples": primitive, "general_samples": trials - primitive});
    Ok(checks.finish(Suite::Identities, seed, trials, "rational", details))
}

/// Coordinate formulas for F and Q against the brute-force definitions. The
/// hat map is a parameter so a corrupted formula can be fed in as a
/// negative control.
pub fn lemma_bc_with(
    seed: u64,
    trials: usize,
    hat: &dyn Fn(&PrimitiveCoords<Rational>) -> PrimitiveCoords<Rational>,
) -> Result<Report> {
    let mut checks = Checks::new(&[("hat_map_vs_f", 0.0), ("q_from_coords_vs_q", 0.0)]);
    let mut rng = random::rng(seed);
    let w = SymplecticForm::<Rational>::standard();
    let minus_half = Rational::ratio(-1, 2);
    for trial in 0..trials {
        let c = random::primitive_coords(&mut rng);
        let phi = coords_to_form(&c);
        let f = compute_f(&phi, &w)?;
        let q = compute_q_from_f(&phi, &f, w.vol())?;
        let sample = || json!({"trial": trial, "coords": coords_to_json(&c)});
        checks.record(
            "hat_map_vs_f",
            coords_to_form(&hat(&c)).max_abs_diff(&f.scale(&minus_half)),
            sample,
        );
        checks.record("q_from_coords_vs_q", (q_from_coords(&c) - q).abs().as_f64(), sample);
    }
    Ok(checks.finish(Suite::LemmaBc, seed, trials, "rational", json!({})))
}

/// Central-difference step for the gradient check. Q is quartic, so the
/// truncation error is h²/6 times a third derivative.
pub const GRADIENT_STEP: f64 = 1e-5;

pub fn gradients(seed: u64, trials: usize) -> Result<Report> {
    let mut checks = Checks::new(&[("gradient_relations", 1e-6)]);
    let mut rng = random::rng(seed);
    for trial in 0..trials {
        let c = random::float_coords(&mut rng);
        let err = gradient_relations_check(&c, GRADIENT_STEP);
        checks.record(
            "gradient_relations",
            err,
            || json!({"trial": trial, "coords": coords_to_json(&c)}),
        );
    }
    Ok(checks.finish(Suite::Gradients, seed, trials, "f64", json!({"step": GRADIENT_STEP})))
}

/// Exact rational stand-in for the solvable algebra's parameter; the
/// identities are polynomial in it.
pub fn exact_solv_lambda() -> Rational {
    Rational::ratio(3, 2)
}

/// Both forms of the Nijenhuis identity on nil and solv, plus N_K = 0 on
/// every F-harmonic sample. Even trials are general primitive forms, odd
/// ones sparse combinations of closed primitive forms.
pub fn nijenhuis(seed: u64, trials: usize) -> Result<Report> {
    let algebras = [
        ("nil", LieAlgebra6::<Rational>::nil()),
        ("solv", LieAlgebra6::solv(exact_solv_lambda())),
    ];
    let tolerances: Vec<(String, f64)> = algebras
        .iter()
        .flat_map(|(a, _)| {
            [
                "identity_stated",
                "identity_without_middle_term",
                "nk_zero_on_f_harmonic",
            ]
            .map(|c| (format!("{a}/{c}"), 0.0))
        })
        .collect();
    let named: Vec<(&str, f64)> = tolerances.iter().map(|(n, t)| (n.as_str(), *t)).collect();
    let mut checks = Checks::new(&named);
    let mut rng = random::rng(seed);
    let mut details = serde_json::Map::new();
    for (name, alg) in algebras {
        let setup = InvariantSetup::standard(alg)?;
        let closed = setup.closed_primitive_basis()?;
        let mut f_harmonic = 0;
        for trial in 0..trials {
            let phi = if trial % 2 == 0 {
                coords_to_form(&random::primitive_coords(&mut rng))
            } else {
                random::sparse_combination(&mut rng, &closed)
            };
            let sample = || json!({"algebra": name, "trial": trial, "phi": form_to_json(&phi)});
            let res = setup.verify_nijenhuis_identity(&phi)?;
            checks.record(&format!("{name}/identity_stated"), res.stated.as_f64(), sample);
            checks.record(
                &format!("{name}/identity_without_middle_term"),
                res.without_middle.as_f64(),
                sample,
            );
            if !phi.is_zero() && setup.integrability_flags(&phi)?.f_harmonic {
                f_harmonic += 1;
                let n = setup.nijenhuis(&phi)?;
                let worst = n.values.iter().map(|(_, v)| v.max_abs()).fold(0.0, f64::max);
                checks.record(&format!("{name}/nk_zero_on_f_harmonic"), worst, sample);
            }
        }
        details.insert(
            name.into(),
            json!({"closed_primitive_dim": closed.len(), "f_harmonic_found": f_harmonic}),
        );
    }
    details.insert("solv_lambda".into(), exact_solv_lambda().to_json());
    Ok(checks.finish(Suite::Nijenhuis, seed, trials, "rational", Value::Object(details)))
}

pub const HESSIAN_C_VALUES: [f64; 4] = [-0.1, 0.0, 0.5, 2.0];

/// Fiber coordinates sampled along each axis.
pub fn hessian_grid() -> [Rational; 4] {
    [
        Rational::ratio(-3, 2),
        Rational::ratio(-1, 2),
        Rational::ratio(1, 2),
        Rational::ratio(3, 2),
    ]
}

pub const AFFINE_STEP: f64 = 1e-5;

/// The Lagrangian-foliation example over `trials` random base metrics:
/// float checks on the whole grid for each C, exact ones at C = 0.
pub fn hessian(seed: u64, trials: usize) -> Result<Report> {
    let mut checks = Checks::new(&[
        ("primitivity", 1e-12),
        ("f_normalized", 1e-10),
        ("det_h", 1e-10),
        ("scalar_curvature", 1e-8),
        ("ricci_negative_eigenvalues", 0.0),
        ("affine_derivative", 1e-4),
        ("polar_form", 1e-8),
        ("exact_primitivity", 0.0),
        ("exact_f_normalized", 0.0),
        ("exact_det_h", 0.0),
        ("exact_flat", 0.0),
    ]);
    let mut rng: SuiteRng = random::rng(seed);
    let grid = hessian_grid();
    let mut metrics = Vec::new();
    let (mut evaluated, mut skipped) = (0usize, 0usize);
    for m in 0..trials {
        let gq = random::spd_metric(&mut rng);
        let gf = BaseMetric3::new(gq.matrix().to_f64())?;
        metrics.push(Value::Array(
            gq.matrix()
                .to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(JsonScalar::to_json).collect()))
                .collect(),
        ));
        for tq in grid_points(&grid) {
            let t = tq.clone().map(|x| x.as_f64());
            for c in HESSIAN_C_VALUES {
                let p = FiberPoint { t, c };
                let sample = || json!({"metric": m, "t": t.to_vec(), "c": c});
                let pc = match point_checks(&gf, &p) {
                    Ok(pc) => pc,
                    Err(Error::Domain(_)) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                evaluated += 1;
                checks.record("primitivity", pc.primitivity, sample);
                checks.record("f_normalized", pc.f_normalized, sample);
                let data = leaf_data(&gf, &p)?;
                let det8 = 8.0 * gf.det();
                checks.record("det_h", (data.h.det() - det8).abs() / det8.max(1.0), sample);
                let curv = scalar_curvature(&data);
                let closed = scalar_curvature_closed_form(gf.r(&t).sqrt(), c);
                checks.record(
                    "scalar_curvature",
                    (curv.scalar - closed).abs() / closed.abs().max(1.0),
                    sample,
                );
                let ric_tol = 1e-10 * curv.ricci.max_abs().max(1.0);
                checks.record(
                    "ricci_negative_eigenvalues",
                    curv.ricci.inertia(ric_tol).nminus as f64,
                    sample,
                );
                checks.record(
                    "affine_derivative",
                    affine_derivative_check(&gf, &p, AFFINE_STEP)?,
                    sample,
                );
                match polar_check(&p) {
                    Ok(r) => checks.record("polar_form", r, sample),
                    Err(Error::Domain(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            let p = FiberPoint {
                t: tq.clone(),
                c: Rational::int(0),
            };
            let sample = || json!({"metric": m, "t": tq.iter().map(JsonScalar::to_json).collect::<Vec<_>>(), "c": 0});
            let pc = point_checks(&gq, &p)?;
            checks.record("exact_primitivity", pc.primitivity, sample);
            checks.record("exact_f_normalized", pc.f_normalized, sample);
            let data = leaf_data(&gq, &p)?;
            let det8 = Rational::int(8) * gq.det();
            checks.record("exact_det_h", (data.h.det() - det8).abs().as_f64(), sample);
            checks.record("exact_flat", scalar_curvature(&data).scalar.abs().as_f64(), sample);
        }
    }
    let details = json!({
        "grid": {
            "t_axis": grid.iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
            "c": HESSIAN_C_VALUES,
            "metrics": metrics,
        },
        "points_evaluated": evaluated,
        "points_outside_domain": skipped,
        "affine_step": AFFINE_STEP,
    });
    Ok(checks.finish(Suite::Hessian, seed, trials, "mixed", details))
}

fn grid_points<S: Scalar>(axis: &[S]) -> Vec<[S; 3]> {
    let mut out = Vec::new();
    for a in axis {
        for b in axis {
            for c in axis {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_are_deterministic() {
        let a = identities(5, 6).unwrap();
        let b = identities(5, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.passed, "{a:?}");
    }

    #[test]
    fn failure_records_counterexample() {
        let mut c = Checks::new(&[("x", 0.5)]);
        c.record("x", 0.1, || json!({"i": 0}));
        c.record("x", 0.9, || json!({"i": 1}));
        c.record("x", 2.0, || json!({"i": 2}));
        let r = c.finish(Suite::Gradients, 0, 3, "f64", json!({}));
        assert!(!r.passed);
        assert_eq!(r.checks[0].max_residual, 2.0);
        assert_eq!(r.counterexample.unwrap()["i"], 1);
    }
}
