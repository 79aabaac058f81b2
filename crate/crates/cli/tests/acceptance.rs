//! Acceptance criteria 1–11, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines always show; exits nonzero if any fail.

use std::process::Command;

use rand::Rng;

use sixforms::flow::{
    integrate, integrate_system, normalized_limit, Controls, NilData, Normalizer, SolvData, Status, UvRate, UvSystem,
    WindowControls,
};
use sixforms::invariants::coords::coords_to_form;
use sixforms::invariants::{classify_gl, classify_sp, q_form, signature, subspace_dims_vol};
use sixforms::liealg::solv_lambda;
use sixforms::verify::{self, Report};
use sixforms::{
    Form, GlOrbit, InvariantSetup, LieAlgebra6, PrimitiveCoords, Rational, Scalar, SpLabel, SymplecticForm, Tolerance,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("algebraic identities", c1_identities),
        ("orbit tables", c2_orbit_tables),
        ("signature cases", c3_signatures),
        ("coordinate formulas", c4_lemma),
        ("gradient relations", c5_gradients),
        ("Nijenhuis identity", c6_nijenhuis),
        ("nilmanifold flow", c7_nil_flow),
        ("solvmanifold flow", c8_solv_flow),
        ("comparison system", c9_comparison),
        ("Hessian example", c10_hessian),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite_summary(r: &Report) -> String {
    r.checks
        .iter()
        .map(|c| {
            format!(
                "{}={}{:.3e}",
                c.name,
                if c.passed { "" } else { "FAILED:" },
                c.max_residual
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn suite_outcome(r: Report) -> Outcome {
    let s = format!("{} trials; {}", r.trials, suite_summary(&r));
    if r.passed {
        Ok(s)
    } else {
        Err(format!(
            "{s}; counterexample {}",
            r.counterexample.map(|c| c.to_string()).unwrap_or_default()
        ))
    }
}

fn c1_identities() -> Outcome {
    suite_outcome(verify::identities(1, 1000).map_err(|e| e.to_string())?)
}

fn c2_orbit_tables() -> Outcome {
    // Rows of the dimension table: ker φ, ker K, Im K, (Ann φ)^⊥.
    let dims = [
        (GlOrbit::Minus, [0, 0, 6, 6]),
        (GlOrbit::Plus, [0, 0, 6, 6]),
        (GlOrbit::Zero, [0, 3, 3, 6]),
        (GlOrbit::One, [1, 5, 1, 5]),
        (GlOrbit::Three, [3, 6, 0, 3]),
        (GlOrbit::Six, [6, 6, 0, 0]),
    ];
    let vol = Form::<Rational>::monomial(&[1, 2, 3, 4, 5, 6]);
    for (orbit, want) in dims {
        let phi = orbit.normal_form::<Rational>();
        let got = classify_gl(&phi, &vol, Tolerance::default()).map_err(|e| e.to_string())?;
        ensure(got == orbit, || format!("{orbit} normal form classified as {got}"))?;
        let d = subspace_dims_vol(&phi, &vol, 0.0)
            .map_err(|e| e.to_string())?
            .as_array();
        ensure(d == want, || format!("{orbit}: dims {d:?}, table {want:?}"))?;
    }
    let w = SymplecticForm::<Rational>::standard();
    let mut worst_mu = 0.0f64;
    for label in SpLabel::ALL {
        for mu in [Rational::ratio(1, 2), Rational::int(1), Rational::int(3)] {
            let sp = classify_sp(&label.normal_form(&mu), &w, Tolerance::default()).map_err(|e| e.to_string())?;
            ensure(sp.label == label, || {
                format!("{label} (mu {mu}) classified as {}", sp.label)
            })?;
            ensure(sp.mu.is_some() == label.has_mu(), || {
                format!("{label}: mu presence wrong")
            })?;
            if let Some(m) = sp.mu {
                let err = (m - mu.as_f64()).abs();
                worst_mu = worst_mu.max(err);
                ensure(err < 1e-10, || format!("{label}: mu {m} vs {mu}"))?;
            }
        }
    }
    Ok(format!(
        "6 GL rows with dimension quadruples, 9 Sp labels x 3 mu; worst mu error {worst_mu:.1e}"
    ))
}

fn c3_signatures() -> Outcome {
    // The O1 pairing comes from evaluating q on e135 ∓ e245 once:
    // e135 − e245 gives (5,1,0) and e135 + e245 gives (5,0,1).
    let table = [
        (SpLabel::MinusPlus, [0, 6, 0]),
        (SpLabel::MinusMinus, [0, 2, 4]),
        (SpLabel::Plus, [0, 3, 3]),
        (SpLabel::ZeroPlus, [3, 3, 0]),
        (SpLabel::ZeroMinus, [3, 1, 2]),
        (SpLabel::OnePlus, [5, 1, 0]),
        (SpLabel::OneMinus, [5, 0, 1]),
        (SpLabel::ThreePrimitive, [6, 0, 0]),
        (SpLabel::Six, [6, 0, 0]),
    ];
    let w = SymplecticForm::<Rational>::standard();
    let one_plus = Form::<Rational>::monomial(&[1, 3, 5]) - Form::monomial(&[2, 4, 5]);
    ensure(SpLabel::OnePlus.normal_form(&Rational::int(1)) == one_plus, || {
        "O1+ representative changed".into()
    })?;
    for (label, want) in table {
        for mu in [Rational::ratio(1, 2), Rational::int(1), Rational::int(3)] {
            let q = q_form(&label.normal_form(&mu), &w).map_err(|e| e.to_string())?;
            let s = signature(&q, 0.0).as_array();
            ensure(s == want, || format!("{label}: signature {s:?}, expected {want:?}"))?;
        }
    }
    Ok("all 9 Sp normal forms at 3 values of mu".into())
}

fn c4_lemma() -> Outcome {
    suite_outcome(verify::lemma_bc_with(4, 1000, &sixforms::invariants::coords::hat_map).map_err(|e| e.to_string())?)
}

fn c5_gradients() -> Outcome {
    suite_outcome(verify::gradients(5, 100).map_err(|e| e.to_string())?)
}

fn c6_nijenhuis() -> Outcome {
    let r = verify::nijenhuis(6, 200).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    for alg in ["nil", "solv"] {
        for check in ["identity_stated", "nk_zero_on_f_harmonic"] {
            let c = r.check(&format!("{alg}/{check}")).ok_or("missing check")?;
            if !c.passed {
                problems.push(format!("{alg}/{check} max residual {}", c.max_residual));
            }
        }
    }
    let detail = format!("{}; details {}", suite_summary(&r), r.details);
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", problems.join(", ")))
    }
}

fn nil_setup() -> InvariantSetup<f64> {
    InvariantSetup::standard(LieAlgebra6::nil()).expect("nil setup")
}

fn c7_nil_flow() -> Outcome {
    let setup = nil_setup();
    let mut rng = sixforms::random::rng(7);
    let (mut worst_traj, mut worst_stat) = (0.0f64, 0.0f64);
    for run in 0..20 {
        let mut c0 = sixforms::random::float_coords(&mut rng);
        while c0.get("H").abs() < 0.25 {
            c0.0[7] = rng.gen_range(-2.0..2.0);
        }
        let nd = NilData::from_coords(&c0);
        let a0 = *c0.get("A");
        let traj = integrate(&setup, &c0, &Controls::default());
        ensure(!traj.status.is_error(), || format!("run {run}: {:?}", traj.status))?;
        for s in &traj.samples {
            let exact = nd.closed_form(a0, s.t);
            let err = (s.coords[0] - exact).abs() / exact.abs().max(1.0);
            worst_traj = worst_traj.max(err);
            for k in 1..14 {
                ensure(s.coords[k] == c0.0[k], || format!("run {run}: coordinate {k} moved"))?;
            }
        }
        // Long enough for e^{-4H²t} to vanish.
        let long = Controls {
            t_max: 60.0 / (4.0 * nd.h * nd.h),
            ..Controls::default()
        };
        let traj = integrate(&setup, &c0, &long);
        let stat = nd.stationary_a().expect("H != 0");
        let err = (traj.last().coords[0] - stat).abs() / stat.abs().max(1.0);
        worst_stat = worst_stat.max(err);
    }
    ensure(worst_traj < 1e-6, || format!("closed-form deviation {worst_traj:e}"))?;
    ensure(worst_stat < 1e-6, || format!("stationary deviation {worst_stat:e}"))?;

    // H = 0 with R = 8: A grows like Rt.
    let c0 = PrimitiveCoords::with(&[("A", 0.5), ("D", 1.0), ("F", 1.0), ("G", -1.0)]);
    ensure(NilData::from_coords(&c0).r == 8.0, || "R != 8".into())?;
    let traj = integrate(
        &setup,
        &c0,
        &Controls {
            t_max: 1e6,
            ..Controls::default()
        },
    );
    ensure(traj.status == Status::ReachedTMax, || {
        format!("H = 0 run: {:?}", traj.status)
    })?;
    let lim =
        normalized_limit(&traj, Normalizer::Coordinate(0), &WindowControls::default()).map_err(|e| e.to_string())?;
    let e135 = coords_to_form(&PrimitiveCoords::<f64>::with(&[("A", 1.0)]));
    let dev = coords_to_form(&lim.coords).max_abs_diff(&e135);
    ensure(dev < 1e-6, || format!("limit differs from e135 by {dev:e}"))?;
    ensure(lim.orbit.label == SpLabel::ThreePrimitive, || {
        format!("limit classified {}", lim.orbit.label)
    })?;
    Ok(format!(
        "20 runs: max closed-form error {worst_traj:.1e}, stationary error {worst_stat:.1e}; H = 0 limit O3, |limit - e135| = {dev:.1e}"
    ))
}

/// Positive (or all-negative) solv data meeting the positivity conditions.
fn positive_solv(rng: &mut sixforms::random::SuiteRng) -> SolvData<f64> {
    loop {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut pos = || sign * rng.gen_range(0.3..2.0);
        let (alpha, beta, gamma, delta) = (pos(), pos(), pos(), pos());
        let sd = SolvData {
            alpha,
            beta,
            gamma,
            delta,
            m: rng.gen_range(-1.0..1.0),
            n: rng.gen_range(-1.0..1.0),
            lambda: solv_lambda(),
        };
        if sd.positivity_check().holds() {
            return sd;
        }
    }
}

fn c8_solv_flow() -> Outcome {
    let setup = InvariantSetup::standard(LieAlgebra6::solv(solv_lambda())).map_err(|e| e.to_string())?;
    let mut rng = sixforms::random::rng(8);
    let controls = Controls {
        t_max: 100.0,
        ..Controls::default()
    };
    let (mut ratio_drift, mut uv_worst, mut det_worst) = (0.0f64, 0.0f64, 0.0f64);
    let (mut printed_checked, mut derived_checked, mut derived_below) = (0, 0, 0);
    let mut min_margin = f64::INFINITY;
    for run in 0..20 {
        let sd = positive_solv(&mut rng);
        let traj = integrate(&setup, &sd.to_coords(), &controls);
        let Status::BlowUp { t_b } = traj.status else {
            return Err(format!("run {run}: {:?}", traj.status));
        };
        let r0 = (sd.alpha / sd.delta, sd.beta / sd.gamma);
        for s in &traj.samples {
            let c = s.coords;
            let (a, b, g, d) = (c[0], c[2], c[4], -c[6]);
            ratio_drift = ratio_drift
                .max(((a / d) / r0.0 - 1.0).abs())
                .max(((b / g) / r0.1 - 1.0).abs());
        }
        let last = traj.last().coords;
        let (a, b, g, d) = (last[0], last[2], last[4], -last[6]);
        uv_worst = uv_worst.max(((a * d) / (b * g) - 1.0).abs());
        let (u0, v0) = (sd.u(), sd.v());
        if let Some(tp) = UvSystem::from_solv(&sd, UvRate::Printed).t_prime(u0, v0).value() {
            printed_checked += 1;
            min_margin = min_margin.min(tp - t_b);
            ensure(t_b <= tp, || {
                format!("run {run}: blow-up at {t_b} after printed T' = {tp}")
            })?;
        }
        if let Some(tp) = UvSystem::from_solv(&sd, UvRate::Derived).t_prime(u0, v0).value() {
            derived_checked += 1;
            if t_b <= tp {
                derived_below += 1;
            }
        }
        let lim = normalized_limit(&traj, Normalizer::Coordinate(0), &WindowControls::default())
            .map_err(|e| format!("run {run}: {e}"))?;
        let l = lim.coords.0;
        det_worst = det_worst.max((l[0] * -l[6] - l[2] * l[4]).abs());
    }
    ensure(ratio_drift < 1e-8, || {
        format!("alpha/delta or beta/gamma drifted by {ratio_drift:e}")
    })?;
    ensure(uv_worst < 1e-2, || {
        format!("|u/v - 1| = {uv_worst:e} at the last sample")
    })?;
    ensure(det_worst < 1e-4, || format!("|a d - b g| of the limit = {det_worst:e}"))?;
    Ok(format!(
        "20 blow-ups; ratio drift {ratio_drift:.1e}; final |u/v-1| {uv_worst:.1e}; limit |ad-bg| {det_worst:.1e}; \
         t_b <= printed T' in {printed_checked}/{printed_checked} (min margin {min_margin:.2e}); \
         t_b <= derived T' in {derived_below}/{derived_checked}"
    ))
}

fn c9_comparison() -> Outcome {
    let mut rng = sixforms::random::rng(9);
    let mut worst = 0.0f64;
    for run in 0..10 {
        let (m, n) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let uv = UvSystem::new(solv_lambda(), m, n, UvRate::Derived);
        let s = uv.s();
        let u0 = s + rng.gen_range(0.1..3.0);
        // The last run starts on the diagonal, where C0 = 0.
        let v0 = if run == 9 { u0 } else { s + rng.gen_range(0.1..3.0) };
        let pole = if u0 == v0 {
            uv.symmetric_blow_up_time(u0)
        } else {
            uv.t_prime(u0, v0).value()
        }
        .ok_or_else(|| format!("run {run}: no closed-form pole"))?;
        let sol = integrate_system(
            |y| Ok(uv.comparison_rhs(y[0], y[1]).to_vec()),
            &[u0, v0],
            &Controls {
                t_max: 10.0 * pole,
                ..Controls::default()
            },
        );
        let t_b = sol
            .status
            .blow_up_time()
            .ok_or_else(|| format!("run {run}: {:?}", sol.status))?;
        let rel = (t_b - pole).abs() / pole;
        worst = worst.max(rel);
        ensure(rel < 1e-2, || format!("run {run}: blow-up {t_b} vs pole {pole}"))?;
    }
    Ok(format!("10 runs, worst relative gap to the w(t) pole {worst:.1e}"))
}

fn c10_hessian() -> Outcome {
    let r = verify::hessian(10, 3).map_err(|e| e.to_string())?;
    let evaluated = r.details["points_evaluated"].clone();
    suite_outcome(r).map(|s| format!("{evaluated} float points; {s}"))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_sixforms");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        ("identities", "40"),
        ("lemma-bc", "40"),
        ("gradients", "20"),
        ("nijenhuis", "10"),
        ("hessian", "1"),
    ];
    for (suite, trials) in runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{suite}-{k}"));
            let o = Command::new(bin)
                .args(["verify", suite, "--seed", "11", "--trials", trials, "--out"])
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            let file = std::fs::read(out.join(format!("{suite}.json"))).map_err(|e| e.to_string())?;
            ensure(file == o.stdout, || format!("{suite}: file and stdout differ"))?;
            outputs.push((o.status.code(), o.stdout));
        }
        ensure(outputs[0] == outputs[1], || {
            format!("{suite}: reports differ between runs")
        })?;
    }
    Ok("two runs per suite with seed 11 gave byte-identical reports".into())
}
