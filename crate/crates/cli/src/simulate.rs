//! `simulate`: Monte Carlo runs with closed-form predictions attached.

use serde_json::{json, Map, Value};
use twistloop::correlators::{schramm_left_passage, winding_probs};
use twistloop::geometry::{winding_coords, Anchors};
use twistloop::mc::{self, SimConfig};
use twistloop::stats::{chi_square_multinomial, wilson_interval, WILSON_Z95};
use twistloop::Complex64;

use crate::params::complex_json;
use crate::{with_manifest, CliError, RunManifest, SimMode, SimulateArgs};

/// Where the left/right words point.
pub const SIDE_CONVENTION: &str =
    "left: the curve passes to the left of the point, which ends on the positive-real-axis side";

/// Relative tolerance of the driving-law check.
pub const DRIVING_LAW_TOLERANCE: f64 = 0.02;

fn config(args: &SimulateArgs, points: &[Complex64]) -> Result<SimConfig, CliError> {
    let mut cfg = SimConfig::for_points(args.kappa, args.samples, args.seed, points);
    cfg.n_steps = args.steps;
    if let Some(t) = args.total_time {
        cfg.total_time = t;
    }
    if let Some(r) = args.escape_radius {
        cfg.escape_radius = r;
    }
    cfg.angle_tolerance = args.angle_tolerance;
    cfg.max_extension_factor = args.max_extension;
    cfg.time_grid = args.time_grid();
    cfg.refinement = args.refinement;
    cfg.threads = args.threads;
    cfg.validate()?;
    Ok(cfg)
}

fn need(z: Option<Complex64>, flag: &str) -> Result<Complex64, CliError> {
    z.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this mode")))
}

fn wilson(k: u64, n: u64) -> Value {
    match wilson_interval(k, n, WILSON_Z95) {
        Ok((lo, hi)) => json!([lo, hi]),
        Err(_) => Value::Null,
    }
}

fn finish(body: Map<String, Value>, cfg: &SimConfig, quality: twistloop::Result<()>) -> Result<Value, CliError> {
    let mut body = body;
    let message = quality.as_ref().err().map(|e| e.to_string());
    body.insert("quality".into(), json!({"passed": message.is_none(), "message": message}));
    let manifest = RunManifest::new(
        "simulate",
        serde_json::to_value(cfg).expect("config serializes"),
        Some(cfg.seed),
    );
    let out = with_manifest(Value::Object(body), &manifest);
    match message {
        None => Ok(out),
        Some(message) => Err(CliError::Quality { message, report: out }),
    }
}

pub fn run(args: &SimulateArgs) -> Result<Value, CliError> {
    match args.mode {
        SimMode::LeftPassage => left_passage(args),
        SimMode::Winding => winding(args),
        SimMode::DrivingLaw => driving_law(args),
    }
}

fn left_passage(args: &SimulateArgs) -> Result<Value, CliError> {
    let z = need(args.z, "z")?;
    if !(z.im > 0.0) {
        return Err(CliError::Domain(format!("z = {z} is not in the open upper half-plane")));
    }
    let cfg = config(args, &[z])?;
    let est = mc::simulate_left_passage(z, &cfg)?;
    let prediction = schramm_left_passage(z.arg())?;
    let mut body = Map::new();
    body.insert("mode".into(), json!("left-passage"));
    body.insert("z".into(), complex_json(z));
    body.insert("side_convention".into(), json!(SIDE_CONVENTION));
    body.insert("config".into(), serde_json::to_value(&cfg).expect("config serializes"));
    body.insert("estimate".into(), serde_json::to_value(&est).expect("estimate serializes"));
    body.insert("wilson95".into(), wilson(est.left, est.left + est.right));
    body.insert("prediction".into(), json!(prediction));
    body.insert("z_score".into(), json!((est.p - prediction) / est.stderr));
    if args.step_halving {
        let r = mc::step_halving(z, &cfg)?;
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["z_score"] = json!(r.z_score());
        body.insert("step_halving".into(), v);
    }
    finish(body, &cfg, est.quality_check())
}

fn winding(args: &SimulateArgs) -> Result<Value, CliError> {
    let za = need(args.za, "za")?;
    let zb = need(args.zb, "zb")?;
    let coords = winding_coords(za, zb, Anchors::standard())?;
    let cfg = config(args, &[za, zb])?;
    let w = mc::simulate_winding(za, zb, &cfg)?;
    let pred = winding_probs(coords.v_a, coords.v_b, coords.sigma)?;
    let decided = w.decided();
    let mut body = Map::new();
    body.insert("mode".into(), json!("winding"));
    body.insert("za".into(), complex_json(za));
    body.insert("zb".into(), complex_json(zb));
    body.insert("side_convention".into(), json!(SIDE_CONVENTION));
    body.insert("bins".into(), json!(["AB", "A", "B", "O"]));
    body.insert(
        "coords".into(),
        json!({"v_a": coords.v_a, "v_b": coords.v_b, "sigma": coords.sigma}),
    );
    body.insert("config".into(), serde_json::to_value(&cfg).expect("config serializes"));
    body.insert("estimate".into(), serde_json::to_value(&w).expect("estimate serializes"));
    body.insert("wilson95".into(), Value::Array(w.counts.iter().map(|&k| wilson(k, decided)).collect()));
    body.insert("prediction".into(), json!(pred.as_array()));
    let chi = match chi_square_multinomial(&w.counts, &pred.as_array(), decided) {
        Ok(r) => serde_json::to_value(&r).expect("report serializes"),
        Err(e) => json!({"error": e.to_string()}),
    };
    body.insert("chi_square".into(), chi);
    finish(body, &cfg, w.quality_check())
}

fn driving_law(args: &SimulateArgs) -> Result<Value, CliError> {
    let mut cfg = config(args, &[Complex64::new(0.0, 1.0)])?;
    if let Some(t) = args.total_time {
        cfg.total_time = t;
    }
    let r = mc::driving_law_check(&cfg)?;
    let mut body = Map::new();
    body.insert("mode".into(), json!("driving-law"));
    body.insert("config".into(), serde_json::to_value(&cfg).expect("config serializes"));
    body.insert("report".into(), serde_json::to_value(&r).expect("report serializes"));
    body.insert("tolerance".into(), json!(DRIVING_LAW_TOLERANCE));
    let passed = r.relative_error < DRIVING_LAW_TOLERANCE;
    body.insert("passed".into(), json!(passed));
    let quality = if passed {
        Ok(())
    } else {
        Err(twistloop::Error::Quality {
            what: "driving law",
            detail: format!("Var(W_T)/T is off by {:.2}%", 100.0 * r.relative_error),
        })
    };
    finish(body, &cfg, quality)
}
