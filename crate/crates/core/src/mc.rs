//! Chordal SLE_κ from 0 to ∞ by discretized Loewner evolution.
//!
//! Marked points are carried along the flow w = g_t(z) - W_t. A point whose
//! image ends up near the positive real axis lies to the right of the
//! curve, i.e. the curve passed to its left.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest undecided fraction accepted by the estimators.
pub const MAX_UNDECIDED_FRACTION: f64 = 0.01;

/// Placement of the time nodes on [0, total_time].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TimeGrid {
    /// t_k = T·k/n.
    #[default]
    Uniform,
    /// t_k = T·(k/n)².
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub kappa: f64,
    pub n_samples: u64,
    pub n_steps: usize,
    pub total_time: f64,
    pub seed: u64,
    pub escape_radius: f64,
    /// radians
    pub angle_tolerance: f64,
    pub max_extension_factor: f64,
    pub time_grid: TimeGrid,
    /// Grid steps are split so that √(max(κ, 4)·dt) ≤ refinement·|w| for
    /// every undecided point; 0 turns this off.
    pub refinement: f64,
    /// Worker threads; `None` uses the global pool. Never changes results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl SimConfig {
    /// Defaults for points of modulus about 1.
    pub fn new(kappa: f64, n_samples: u64, seed: u64) -> Self {
        SimConfig {
            kappa,
            n_samples,
            n_steps: 5000,
            total_time: 400.0,
            seed,
            escape_radius: 10.0,
            angle_tolerance: 0.03,
            max_extension_factor: 4.0,
            time_grid: TimeGrid::Uniform,
            refinement: 0.1,
            threads: None,
        }
    }

    /// Defaults with time and escape radius scaled to the tracked points:
    /// total_time = 400·max|z|², escape_radius = 10·max|z|.
    pub fn for_points(kappa: f64, n_samples: u64, seed: u64, points: &[C64]) -> Self {
        let r = points.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
        SimConfig {
            total_time: 400.0 * r * r,
            escape_radius: 10.0 * r,
            ..Self::new(kappa, n_samples, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |d: String| Err(Error::contract("SimConfig", d));
        if !(self.kappa > 0.0 && self.kappa < 8.0) {
            return bad(format!("κ = {} is outside (0, 8)", self.kappa));
        }
        if self.n_samples < 1 {
            return bad("n_samples must be at least 1".into());
        }
        if self.n_steps < 1 {
            return bad("n_steps must be at least 1".into());
        }
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return bad(format!("total_time = {} must be positive", self.total_time));
        }
        if !(self.angle_tolerance > 0.0 && self.angle_tolerance < 0.3) {
            return bad(format!("angle_tolerance = {} is outside (0, 0.3)", self.angle_tolerance));
        }
        if !(self.escape_radius >= 0.0) {
            return bad("escape_radius must be non-negative".into());
        }
        if !(self.refinement >= 0.0 && self.refinement.is_finite()) {
            return bad("refinement must be finite and non-negative".into());
        }
        if !(self.max_extension_factor >= 1.0) {
            return bad("max_extension_factor must be at least 1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    /// Step sizes of the main grid; they sum to `total_time`.
    pub fn steps(&self) -> Vec<f64> {
        let n = self.n_steps as f64;
        let t = self.total_time;
        (1..=self.n_steps)
            .map(|k| match self.time_grid {
                TimeGrid::Uniform => t / n,
                TimeGrid::Quadratic => t * (2.0 * k as f64 - 1.0) / (n * n),
            })
            .collect()
    }

    fn extension_steps(&self, last: f64) -> usize {
        let extra = (self.max_extension_factor - 1.0) * self.total_time;
        (extra / last).ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Undecided,
    /// Curve passed to the left of the point.
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedPoint {
    pub initial: C64,
    pub current: C64,
    pub status: Side,
    /// Flow left the upper half-plane; stays undecided.
    pub swallowed: bool,
}

impl TrackedPoint {
    pub fn new(z: C64) -> Self {
        TrackedPoint {
            initial: z,
            current: z,
            status: Side::Undecided,
            swallowed: false,
        }
    }
}

// square root in the closed upper half-plane
fn sqrt_upper(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let t = ((r + z.re.abs()) * 0.5).sqrt();
    let (re, im) = if z.re >= 0.0 {
        (t, z.im / (2.0 * t))
    } else {
        (z.im.abs() / (2.0 * t), t.copysign(z.im))
    };
    if im < 0.0 || (im == 0.0 && re < 0.0) {
        C64::new(-re, -im)
    } else {
        C64::new(re, im)
    }
}

/// One step of the flow: vertical slit map over dt, then shift by -dW.
pub fn evolve_step(w: C64, dt: f64, dw: f64) -> Result<C64> {
    if !(w.im > 0.0) {
        return Err(Error::contract("evolve_step", format!("Im w = {} is not positive", w.im)));
    }
    if !(dt > 0.0) {
        return Err(Error::contract("evolve_step", format!("dt = {dt} is not positive")));
    }
    Ok(sqrt_upper(w * w + 4.0 * dt) - dw)
}

/// Side decided from the current flow value alone.
pub fn classify_side(point: &TrackedPoint, cfg: &SimConfig) -> Side {
    if point.status != Side::Undecided || point.swallowed {
        return point.status;
    }
    let w = point.current;
    if w.norm() <= cfg.escape_radius {
        return Side::Undecided;
    }
    let arg = w.arg();
    if arg.abs() < cfg.angle_tolerance {
        Side::Left
    } else if (arg - std::f64::consts::PI).abs() < cfg.angle_tolerance {
        Side::Right
    } else {
        Side::Undecided
    }
}

/// Per-sample generator: the master seed's stream `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn advance(points: &mut [TrackedPoint], dt: f64, dw: f64, cfg: &SimConfig) -> bool {
    let mut open = false;
    for p in points.iter_mut() {
        if p.status != Side::Undecided || p.swallowed {
            continue;
        }
        match evolve_step(p.current, dt, dw) {
            Ok(w) if w.im > 0.0 => {
                p.current = w;
                p.status = classify_side(p, cfg);
                open |= p.status == Side::Undecided;
            }
            _ => p.swallowed = true,
        }
    }
    open
}

/// Substeps allowed per sample before the remaining points are left undecided.
pub const MAX_SUBSTEPS: usize = 2_000_000;

struct Driver<'a> {
    cfg: &'a SimConfig,
    rng: ChaCha8Rng,
    sk: f64,
    spread: f64,
    substeps: usize,
}

impl Driver<'_> {
    // one grid step, split as the tracked points require; false once done
    fn step(&mut self, points: &mut [TrackedPoint], dt: f64) -> bool {
        let mut left = dt;
        while left > 0.0 {
            let mut h = left;
            if self.cfg.refinement > 0.0 {
                let d = points
                    .iter()
                    .filter(|p| p.status == Side::Undecided && !p.swallowed)
                    .map(|p| p.current.norm_sqr())
                    .fold(f64::INFINITY, f64::min);
                let cap = self.cfg.refinement * self.cfg.refinement * d / self.spread;
                if cap < left {
                    h = cap.max(left * 1e-12);
                }
            }
            self.substeps += 1;
            if self.substeps > MAX_SUBSTEPS {
                return false;
            }
            let dw = self.sk * h.sqrt() * self.rng.sample::<f64, _>(StandardNormal);
            if !advance(points, h, dw, self.cfg) {
                return false;
            }
            left -= h;
        }
        true
    }
}

/// Runs one driving path and returns the final state of every point.
pub fn simulate_sample(points: &[C64], cfg: &SimConfig, steps: &[f64], index: u64) -> Vec<TrackedPoint> {
    let mut driver = Driver {
        cfg,
        rng: sample_rng(cfg.seed, index),
        sk: cfg.kappa.sqrt(),
        spread: cfg.kappa.max(4.0),
        substeps: 0,
    };
    let mut tracked: Vec<TrackedPoint> = points.iter().map(|&z| TrackedPoint::new(z)).collect();
    for &dt in steps {
        if !driver.step(&mut tracked, dt) {
            return tracked;
        }
    }
    let last = *steps.last().expect("n_steps ≥ 1");
    for _ in 0..cfg.extension_steps(last) {
        if !driver.step(&mut tracked, last) {
            break;
        }
    }
    tracked
}

fn check_points(points: &[C64]) -> Result<()> {
    for z in points {
        if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("simulation", format!("{z} is not in the open upper half-plane")));
        }
    }
    Ok(())
}

fn run<T: Send>(cfg: &SimConfig, job: impl Fn(u64) -> T + Sync + Send) -> Result<Vec<T>> {
    let work = || (0..cfg.n_samples).into_par_iter().map(&job).collect::<Vec<T>>();
    match cfg.threads {
        None => Ok(work()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(work))
            .map_err(|e| Error::numeric("simulation", format!("thread pool: {e}"))),
    }
}

fn simulate_all(points: &[C64], cfg: &SimConfig) -> Result<Vec<Vec<TrackedPoint>>> {
    cfg.validate()?;
    check_points(points)?;
    let steps = cfg.steps();
    run(cfg, |i| simulate_sample(points, cfg, &steps, i))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeftPassageEstimate {
    pub p: f64,
    pub stderr: f64,
    pub undecided_fraction: f64,
    pub left: u64,
    pub right: u64,
    pub undecided: u64,
    pub swallowed: u64,
    pub n_samples: u64,
}

impl LeftPassageEstimate {
    pub fn quality_check(&self) -> Result<()> {
        quality(self.undecided_fraction, self.undecided)
    }
}

fn quality(fraction: f64, undecided: u64) -> Result<()> {
    if fraction > MAX_UNDECIDED_FRACTION {
        Err(Error::quality(
            "simulation",
            format!(
                "{undecided} samples ({:.2}%) undecided; increase total_time or max_extension_factor",
                100.0 * fraction
            ),
        ))
    } else {
        Ok(())
    }
}

fn binomial(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let p = k as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

/// Left-passage counts without the quality check.
pub fn simulate_left_passage(z: C64, cfg: &SimConfig) -> Result<LeftPassageEstimate> {
    let runs = simulate_all(&[z], cfg)?;
    let mut left = 0;
    let mut right = 0;
    let mut swallowed = 0;
    for r in &runs {
        match r[0].status {
            Side::Left => left += 1,
            Side::Right => right += 1,
            Side::Undecided => swallowed += r[0].swallowed as u64,
        }
    }
    let undecided = cfg.n_samples - left - right;
    let (p, stderr) = binomial(left, left + right);
    Ok(LeftPassageEstimate {
        p,
        stderr,
        undecided_fraction: undecided as f64 / cfg.n_samples as f64,
        left,
        right,
        undecided,
        swallowed,
        n_samples: cfg.n_samples,
    })
}

/// Probability that the curve passes to the left of z, over decided samples.
pub fn estimate_left_passage(z: C64, cfg: &SimConfig) -> Result<LeftPassageEstimate> {
    let est = simulate_left_passage(z, cfg)?;
    est.quality_check()?;
    Ok(est)
}

/// Empirical winding counts in the order AB, A, B, O.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalWinding {
    pub counts: [u64; 4],
    pub undecided: u64,
    pub swallowed: u64,
    pub n_samples: u64,
    pub fractions: [f64; 4],
    pub stderr: [f64; 4],
    pub undecided_fraction: f64,
}

impl EmpiricalWinding {
    pub fn decided(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn quality_check(&self) -> Result<()> {
        quality(self.undecided_fraction, self.undecided)
    }
}

/// Bin of a pair of sides: (left, left) → AB, (left, right) → A,
/// (right, left) → B, (right, right) → O.
pub fn winding_bin(a: Side, b: Side) -> Option<usize> {
    match (a, b) {
        (Side::Left, Side::Left) => Some(0),
        (Side::Left, Side::Right) => Some(1),
        (Side::Right, Side::Left) => Some(2),
        (Side::Right, Side::Right) => Some(3),
        _ => None,
    }
}

/// Winding counts without the quality check.
pub fn simulate_winding(za: C64, zb: C64, cfg: &SimConfig) -> Result<EmpiricalWinding> {
    let runs = simulate_all(&[za, zb], cfg)?;
    let mut counts = [0u64; 4];
    let mut swallowed = 0;
    for r in &runs {
        match winding_bin(r[0].status, r[1].status) {
            Some(b) => counts[b] += 1,
            None => swallowed += (r[0].swallowed || r[1].swallowed) as u64,
        }
    }
    let decided: u64 = counts.iter().sum();
    let undecided = cfg.n_samples - decided;
    let mut fractions = [f64::NAN; 4];
    let mut stderr = [f64::NAN; 4];
    for i in 0..4 {
        (fractions[i], stderr[i]) = binomial(counts[i], decided);
    }
    Ok(EmpiricalWinding {
        counts,
        undecided,
        swallowed,
        n_samples: cfg.n_samples,
        fractions,
        stderr,
        undecided_fraction: undecided as f64 / cfg.n_samples as f64,
    })
}

/// Both points tracked through the same driving path.
pub fn estimate_winding(za: C64, zb: C64, cfg: &SimConfig) -> Result<EmpiricalWinding> {
    let w = simulate_winding(za, zb, cfg)?;
    w.quality_check()?;
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepHalvingReport {
    pub coarse: LeftPassageEstimate,
    pub fine: LeftPassageEstimate,
    pub difference: f64,
    pub joint_stderr: f64,
}

impl StepHalvingReport {
    /// |difference| in units of the joint standard error.
    pub fn z_score(&self) -> f64 {
        self.difference / self.joint_stderr
    }
}

/// Left passage at n_steps and 2·n_steps with the same seed.
pub fn step_halving(z: C64, cfg: &SimConfig) -> Result<StepHalvingReport> {
    let coarse = simulate_left_passage(z, cfg)?;
    let fine_cfg = SimConfig {
        n_steps: 2 * cfg.n_steps,
        ..cfg.clone()
    };
    let fine = simulate_left_passage(z, &fine_cfg)?;
    Ok(StepHalvingReport {
        difference: fine.p - coarse.p,
        joint_stderr: (coarse.stderr.powi(2) + fine.stderr.powi(2)).sqrt(),
        coarse,
        fine,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrivingLawReport {
    pub kappa: f64,
    pub total_time: f64,
    pub n_samples: u64,
    /// sample variance of W_T divided by T
    pub var_over_t: f64,
    /// mean of Σ dW² divided by T
    pub quadratic_variation_over_t: f64,
    pub relative_error: f64,
}

/// Regenerates the driving increments of every sample over the main grid.
pub fn driving_law_check(cfg: &SimConfig) -> Result<DrivingLawReport> {
    cfg.validate()?;
    let steps = cfg.steps();
    let sk = cfg.kappa.sqrt();
    let paths = run(cfg, |i| {
        let mut rng = sample_rng(cfg.seed, i);
        let mut w = 0.0;
        let mut qv = 0.0;
        for &dt in &steps {
            let dw = sk * dt.sqrt() * rng.sample::<f64, _>(StandardNormal);
            w += dw;
            qv += dw * dw;
        }
        (w, qv)
    })?;
    let n = paths.len() as f64;
    let mean = paths.iter().map(|p| p.0).sum::<f64>() / n;
    let var = paths.iter().map(|p| (p.0 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let qv = paths.iter().map(|p| p.1).sum::<f64>() / n;
    let t = cfg.total_time;
    Ok(DrivingLawReport {
        kappa: cfg.kappa,
        total_time: t,
        n_samples: cfg.n_samples,
        var_over_t: var / t,
        quadratic_variation_over_t: qv / t,
        relative_error: (var / t - cfg.kappa).abs() / cfg.kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slit_map_arithmetic() {
        let w = evolve_step(C64::new(0.0, 2.0), 0.25, 0.0).unwrap();
        assert!((w - C64::new(0.0, 3f64.sqrt())).norm() < 1e-15);
        assert!(evolve_step(C64::new(1.0, 0.0), 0.1, 0.0).is_err());
        assert!(evolve_step(C64::new(1.0, 1.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn slit_map_matches_vector_field_far_away() {
        let w = C64::new(50.0, 1e-3);
        let dt = 1e-3;
        let dw = 0.01;
        let got = evolve_step(w, dt, dw).unwrap();
        let want = w + 2.0 * dt / w - dw;
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn upper_sqrt_branch() {
        for z in [C64::new(-3.0, 0.0), C64::new(-3.0, -1e-9), C64::new(2.0, -1.0), C64::new(0.5, 4.0)] {
            let s = sqrt_upper(z);
            assert!(s.im >= 0.0);
            assert!((s * s - z).norm() < 1e-14 * z.norm().max(1.0));
        }
    }

    #[test]
    fn quadratic_grid_sums_to_total() {
        let cfg = SimConfig::new(8.0 / 3.0, 10, 1);
        let s: f64 = cfg.steps().iter().sum();
        assert!((s - cfg.total_time).abs() < 1e-9);
        let u = SimConfig { time_grid: TimeGrid::Uniform, ..cfg };
        assert!((u.steps().iter().sum::<f64>() - u.total_time).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let ok = SimConfig::new(3.0, 1, 0);
        assert!(ok.validate().is_ok());
        assert!(SimConfig { n_samples: 0, ..ok.clone() }.validate().is_err());
        assert!(SimConfig { angle_tolerance: 0.3, ..ok.clone() }.validate().is_err());
        assert!(SimConfig { total_time: 0.0, ..ok.clone() }.validate().is_err());
        assert!(SimConfig { kappa: 8.0, ..ok }.validate().is_err());
    }

    #[test]
    fn far_right_point_is_passed_on_the_left() {
        let cfg = SimConfig::for_points(8.0 / 3.0, 200, 7, &[C64::new(30.0, 0.5)]);
        let est = simulate_left_passage(C64::new(30.0, 0.5), &cfg).unwrap();
        assert!(est.p > 0.99, "{est:?}");
    }
}
