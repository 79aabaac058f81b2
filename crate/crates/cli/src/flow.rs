use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::{json, Map, Value};

use sixforms::flow::{
    integrate, normalized_limit, Controls, NilData, Normalizer, SolvData, Trajectory, UvRate, UvSystem, WindowControls,
};
use sixforms::invariants::coords::{PrimitiveCoords, NAMES};
use sixforms::io::{algebra_from_json, coords_from_json, fmt_f64, form_to_json, to_json_string, write_atomic};
use sixforms::liealg::{solv_lambda, InvariantSetup, LieAlgebra6};

#[derive(Args)]
pub struct FlowArgs {
    /// nil, solv, abelian, or an algebra JSON file.
    algebra: String,
    /// Initial coordinates, a JSON object keyed by A..N.
    coords: PathBuf,
    #[arg(long)]
    t_max: Option<f64>,
    /// Local error tolerance of the integrator.
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for trajectory.csv and status.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Refuse solv initial data that violates the positivity conditions.
    #[arg(long)]
    require_positive: bool,
}

pub fn run(args: &FlowArgs) -> Result<ExitCode> {
    let (builtin, alg_json) = crate::data::algebra_json(&args.algebra)?;
    let alg = algebra_from_json(&alg_json)?.value;
    let algebra = LieAlgebra6::new(alg.de.iter().map(|f| f.to_f64()).collect())?;
    let name = builtin
        .map(String::from)
        .or(alg.name)
        .unwrap_or_else(|| "custom".into());
    let c0 = coords_from_json(&sixforms::io::read_json(&args.coords)?)
        .with_context(|| format!("reading {}", args.coords.display()))?
        .value
        .to_f64();

    let solv = if builtin == Some("solv") {
        Some(SolvData::from_coords(&c0, solv_lambda(), 1e-12))
    } else {
        None
    };
    if args.require_positive {
        let Some(sd) = &solv else {
            bail!("--require-positive applies to the solv algebra only");
        };
        let sd = sd.as_ref().map_err(|e| anyhow::anyhow!("{e}"))?;
        let report = sd.positivity_check();
        if !report.holds() {
            bail!("initial data violates positivity: {}", report.failures().join("; "));
        }
    }

    let mut controls = Controls::default();
    if let Some(t) = args.t_max {
        controls.t_max = t;
    }
    if let Some(t) = args.tol {
        controls.tol = t;
    }
    let setup = InvariantSetup::standard(algebra)?;
    let traj = integrate(&setup, &c0, &controls);

    let nil = (builtin == Some("nil")).then(|| NilData::from_coords(&c0));
    let solv = solv.and_then(|r| r.ok());
    write_atomic(
        &args.out.join("trajectory.csv"),
        &csv_bytes(&traj, nil.as_ref(), solv.is_some(), c0.get("A"))?,
    )?;

    let mut status = Map::new();
    status.insert("algebra".into(), json!(name));
    status.insert("status".into(), serde_json::to_value(&traj.status)?);
    status.insert("t_final".into(), json!(traj.last().t));
    status.insert("samples".into(), json!(traj.samples.len()));
    status.insert("stats".into(), serde_json::to_value(traj.stats)?);
    status.insert("controls".into(), serde_json::to_value(controls)?);
    match normalized_limit(&traj, Normalizer::Largest, &WindowControls::default()) {
        Ok(l) => {
            status.insert("limit_form".into(), form_to_json(&l.form));
            status.insert("limit_orbit".into(), json!(l.orbit.label.label()));
            status.insert("limit_mu".into(), json!(l.orbit.mu));
            status.insert("limit_normalizer".into(), json!(NAMES[l.normalizer]));
            status.insert("limit_spread".into(), json!(l.spread));
        }
        Err(e) => {
            status.insert("limit_error".into(), json!(e.to_string()));
        }
    }
    if let Some(nd) = &nil {
        let a0 = *c0.get("A");
        let worst = traj
            .series("A")
            .iter()
            .map(|(t, a)| {
                let exact = nd.closed_form(a0, *t);
                (a - exact).abs() / exact.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        status.insert(
            "nil".into(),
            json!({"H": nd.h, "R": nd.r, "stationary_A": nd.stationary_a(), "max_rel_error_A": worst}),
        );
    }
    if let Some(sd) = &solv {
        let (u0, v0) = (sd.u(), sd.v());
        status.insert(
            "solv".into(),
            json!({
                "lambda": sd.lambda,
                "u0": u0,
                "v0": v0,
                "S": sd.s(),
                "positivity": serde_json::to_value(sd.positivity_check())?,
                "t_prime_printed": UvSystem::from_solv(sd, UvRate::Printed).t_prime(u0, v0),
                "t_prime_derived": UvSystem::from_solv(sd, UvRate::Derived).t_prime(u0, v0),
            }),
        );
    }
    let text = to_json_string(&Value::Object(status));
    write_atomic(&args.out.join("status.json"), text.as_bytes())?;
    print!("{text}");
    if traj.status.is_error() {
        eprintln!("integration stopped: {}", traj.status.name());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// t, A..N, then A from the closed form on nil, or u, v and the ratios
/// that stay constant on solv.
fn csv_bytes(traj: &Trajectory, nil: Option<&NilData<f64>>, solv: bool, a0: &f64) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = vec!["t"];
    header.extend(NAMES);
    if nil.is_some() {
        header.push("A_closed_form");
    }
    if solv {
        header.extend(["u", "v", "alpha_over_delta", "beta_over_gamma"]);
    }
    w.write_record(&header)?;
    for s in &traj.samples {
        let mut row: Vec<f64> = vec![s.t];
        row.extend(s.coords);
        if let Some(nd) = nil {
            row.push(nd.closed_form(*a0, s.t));
        }
        if solv {
            let c = PrimitiveCoords(s.coords);
            let (alpha, beta, gamma, delta) = (*c.get("A"), *c.get("C"), *c.get("E"), -*c.get("G"));
            row.extend([4.0 * alpha * delta, 4.0 * beta * gamma, alpha / delta, beta / gamma]);
        }
        w.write_record(row.iter().map(|x| fmt_f64(*x)))?;
    }
    Ok(w.into_inner()?)
}
