//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
//! complex argument.
//!
//! Evaluation routes:
//!
//! * `|z| <= 0.75`: the defining power series.
//! * `|1 - z| <= 0.75`: the connection formula at `z = 1`, including the
//!   logarithmic form when `c - a - b` is an integer.
//! * elsewhere: analytic continuation of the hypergeometric ODE by a chain of
//!   Taylor re-expansions, starting from the series disk. The path stays in
//!   the half-plane of the target, which fixes the branch.
//!
//! The continuation route replaces the usual `1/z` transformation: every
//! parameter triple used by the twist-operator blocks has `a - b` integer,
//! which is exactly the degenerate (logarithmic) case of that transformation.

use num_complex::Complex64 as C64;

use super::gamma::{digamma, gamma_real, rgamma};
use crate::error::{Error, Result};

/// Series terms allowed before giving up.
pub const MAX_TERMS: usize = 10_000;
/// A term counts as negligible below this fraction of the partial sum.
pub const TERM_TOLERANCE: f64 = 1e-17;
/// Consecutive negligible terms required to declare convergence.
pub const CONSECUTIVE_SMALL: usize = 3;
/// Tolerance used to decide whether `c - a - b` is an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

const SERIES_RADIUS: f64 = 0.75;
const CONNECTION_RADIUS: f64 = 0.75;

/// Parameters (a, b, c) of a ₂F₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `c - a - b` is an integer: the expansion about `z = 1` has logarithms.
    pub log_case: bool,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::domain("Hyp2F1Params", "parameters must be finite"));
        }
        if c <= 0.0 && (c - c.round()).abs() < INTEGER_TOLERANCE {
            return Err(Error::domain(
                "Hyp2F1Params",
                format!("c = {c} is a pole of the hypergeometric series"),
            ));
        }
        let m = c - a - b;
        Ok(Hyp2F1Params {
            a,
            b,
            c,
            log_case: (m - m.round()).abs() < INTEGER_TOLERANCE,
        })
    }

    /// `a` and `b` in a canonical order, so that results are symmetric in
    /// the two numerator parameters bit for bit.
    fn ordered(&self) -> (f64, f64) {
        if self.a.total_cmp(&self.b).is_le() {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }

    fn polynomial_degree(&self) -> Option<usize> {
        let (a, b) = self.ordered();
        [a, b]
            .into_iter()
            .filter(|x| *x <= 0.0 && *x == x.round())
            .map(|x| (-x) as usize)
            .min()
    }
}

/// Which side of the branch cut `[1, ∞)` a real argument is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// `z + i0`
    Upper,
    /// `z - i0`
    Lower,
}

impl CutSide {
    fn sign(self) -> f64 {
        match self {
            CutSide::Upper => 1.0,
            CutSide::Lower => -1.0,
        }
    }
}

/// Regular part and logarithm coefficient of the expansion about `z = 1`:
/// `₂F₁ = regular + log_coefficient · log(1 - z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSplit {
    pub regular: C64,
    pub log_coefficient: C64,
}

impl LogSplit {
    pub fn recombine(&self, one_minus_z: C64) -> C64 {
        self.regular + self.log_coefficient * one_minus_z.ln()
    }
}

fn on_cut(z: C64) -> bool {
    z.im == 0.0 && z.re > 1.0
}

/// ₂F₁(a, b; c; z) on the principal branch.
///
/// Arguments on the cut `(1, ∞)` are rejected; use [`hyp2f1_side`] there.
pub fn hyp2f1(p: &Hyp2F1Params, z: C64) -> Result<C64> {
    if on_cut(z) && p.polynomial_degree().is_none() {
        return Err(Error::domain(
            "hyp2f1",
            format!("z = {z} lies on the branch cut [1, inf); an explicit side is required"),
        ));
    }
    let side = if z.im < 0.0 {
        CutSide::Lower
    } else {
        CutSide::Upper
    };
    hyp2f1_side(p, z, side)
}

/// ₂F₁ with an explicit side for arguments on the cut. Off the cut the side
/// is ignored.
pub fn hyp2f1_side(p: &Hyp2F1Params, z: C64, side: CutSide) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("hyp2f1", format!("non-finite argument {z}")));
    }
    if let Some(degree) = p.polynomial_degree() {
        return Ok(polynomial(p, degree, z));
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if z == C64::new(1.0, 0.0) {
        return gauss_value(p).map(|v| C64::new(v, 0.0));
    }
    if z.norm() <= SERIES_RADIUS {
        return hyp2f1_series(p, z);
    }
    if (C64::new(1.0, 0.0) - z).norm() <= CONNECTION_RADIUS {
        return hyp2f1_one_minus_z(p, z, side);
    }
    let side = if z.im > 0.0 {
        CutSide::Upper
    } else if z.im < 0.0 {
        CutSide::Lower
    } else {
        side
    };
    continue_to(p, z, side)
}

/// Gauss's value ₂F₁(a, b; c; 1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)), for c-a-b > 0.
pub fn gauss_value(p: &Hyp2F1Params) -> Result<f64> {
    let (a, b) = p.ordered();
    let m = p.c - a - b;
    if m <= 0.0 {
        return Err(Error::domain(
            "hyp2f1",
            format!("series diverges at z = 1 since c - a - b = {m} <= 0"),
        ));
    }
    Ok(gamma_real(p.c)? * gamma_real(m)? * (rgamma(p.c - a) * rgamma(p.c - b)))
}

fn polynomial(p: &Hyp2F1Params, degree: usize, z: C64) -> C64 {
    let (a, b) = p.ordered();
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..degree {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((p.c + nf) * (nf + 1.0)));
        sum += term;
    }
    sum
}

/// Running sum with the "three consecutive negligible terms" stopping rule.
struct Accumulator {
    what: &'static str,
    small_run: usize,
}

impl Accumulator {
    fn new(what: &'static str) -> Self {
        Accumulator { what, small_run: 0 }
    }

    /// Returns true once the series may be truncated.
    fn negligible(&mut self, term_size: f64, reference: f64) -> bool {
        if term_size <= TERM_TOLERANCE * reference {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= CONSECUTIVE_SMALL
    }

    fn fail(&self, last_term: f64, partial: C64) -> Error {
        Error::numeric(
            self.what,
            format!(
                "no convergence after {MAX_TERMS} terms (last term {last_term:e}, partial sum {partial})"
            ),
        )
    }
}

/// Direct power series, valid for `|z| < 1`.
pub fn hyp2f1_series(p: &Hyp2F1Params, z: C64) -> Result<C64> {
    let (a, b) = p.ordered();
    series_raw(a, b, p.c, z)
}

fn series_raw(a: f64, b: f64, c: f64, z: C64) -> Result<C64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(
            "hyp2f1_series",
            format!("|z| = {} is outside the disk of convergence", z.norm()),
        ));
    }
    let mut acc = Accumulator::new("hyp2f1_series");
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        if acc.negligible(term.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(acc.fail(term.norm(), sum))
}

fn log_one_minus(w: C64, side: CutSide) -> C64 {
    // w = 1 - z; z + i0 on the cut means w - i0.
    if w.im == 0.0 && w.re < 0.0 {
        C64::new(w.re.abs().ln(), -side.sign() * std::f64::consts::PI)
    } else {
        w.ln()
    }
}

/// Connection formula about `z = 1`, valid for `|1 - z| < 1`.
pub fn hyp2f1_one_minus_z(p: &Hyp2F1Params, z: C64, side: CutSide) -> Result<C64> {
    let w = C64::new(1.0, 0.0) - z;
    if w.norm() >= 1.0 {
        return Err(Error::domain(
            "hyp2f1_one_minus_z",
            format!("|1 - z| = {} is outside the disk of convergence", w.norm()),
        ));
    }
    if let Some(degree) = p.polynomial_degree() {
        return Ok(polynomial(p, degree, z));
    }
    let log_w = log_one_minus(w, side);
    if p.log_case {
        let split = log_split(p, w)?;
        return Ok(split.regular + split.log_coefficient * log_w);
    }
    let (a, b) = p.ordered();
    let c = p.c;
    let m = c - a - b;
    let gc = gamma_real(c)?;
    let first = gc * gamma_real(m)? * (rgamma(c - a) * rgamma(c - b));
    let second = gc * gamma_real(-m)? * (rgamma(a) * rgamma(b));
    let mut value = C64::new(0.0, 0.0);
    if first != 0.0 {
        value += first * series_raw(a, b, 1.0 - m, w)?;
    }
    if second != 0.0 {
        let (ca, cb) = ordered_pair(c - a, c - b);
        value += second * (m * log_w).exp() * series_raw(ca, cb, 1.0 + m, w)?;
    }
    Ok(value)
}

fn ordered_pair(x: f64, y: f64) -> (f64, f64) {
    if x.total_cmp(&y).is_le() {
        (x, y)
    } else {
        (y, x)
    }
}

/// Split of ₂F₁ about `z = 1` into a regular part and the coefficient of
/// `log(1 - z)`, for integer `c - a - b`.
pub fn hyp2f1_log_connection(p: &Hyp2F1Params, one_minus_z: C64) -> Result<LogSplit> {
    if !p.log_case {
        return Err(Error::contract(
            "hyp2f1_log_connection",
            format!("c - a - b = {} is not an integer", p.c - p.a - p.b),
        ));
    }
    if one_minus_z.norm() >= 1.0 {
        return Err(Error::domain(
            "hyp2f1_log_connection",
            format!("|1 - z| = {} is outside the disk of convergence", one_minus_z.norm()),
        ));
    }
    if let Some(degree) = p.polynomial_degree() {
        return Ok(LogSplit {
            regular: polynomial(p, degree, C64::new(1.0, 0.0) - one_minus_z),
            log_coefficient: C64::new(0.0, 0.0),
        });
    }
    log_split(p, one_minus_z)
}

fn log_split(p: &Hyp2F1Params, w: C64) -> Result<LogSplit> {
    let (a, b) = p.ordered();
    let c = p.c;
    let m = (c - a - b).round() as i64;
    let k = m.unsigned_abs() as usize;
    let gc = gamma_real(c)?;

    // Finite part and the Pochhammer shifts of the infinite part.
    let (finite, alpha, beta, rg_pair, w_pow) = if m >= 0 {
        let mut finite = C64::new(0.0, 0.0);
        if k > 0 {
            let pref = gamma_real(k as f64)? * gc * (rgamma(a + k as f64) * rgamma(b + k as f64));
            finite = pref * finite_sum(a, b, k, w);
        }
        (finite, a + k as f64, b + k as f64, rgamma(a) * rgamma(b), w.powi(k as i32))
    } else {
        let pref = gamma_real(k as f64)? * gc * (rgamma(a) * rgamma(b));
        let shifted = finite_sum(a - k as f64, b - k as f64, k, w);
        let finite = pref * shifted / w.powi(k as i32);
        (
            finite,
            a,
            b,
            rgamma(a - k as f64) * rgamma(b - k as f64),
            C64::new(1.0, 0.0),
        )
    };

    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let pref = -sign * gc * rg_pair * w_pow;
    if rg_pair == 0.0 {
        return Ok(LogSplit {
            regular: finite,
            log_coefficient: C64::new(0.0, 0.0),
        });
    }

    // Σ T_n and Σ T_n D_n, with
    // T_n = (α)_n (β)_n / (n! (n+k)!) wⁿ,
    // D_n = ψ(α+n) + ψ(β+n) - ψ(n+1) - ψ(n+k+1).
    let mut psi_1 = digamma(1.0)?;
    let mut psi_k1 = digamma(k as f64 + 1.0)?;
    let mut psi_a = digamma(alpha)?;
    let mut psi_b = digamma(beta)?;
    let mut term = C64::new(1.0 / factorial(k), 0.0);
    let mut sum_t = C64::new(0.0, 0.0);
    let mut sum_td = C64::new(0.0, 0.0);
    let mut acc = Accumulator::new("hyp2f1_log_connection");
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let d = (psi_a + psi_b) - (psi_1 + psi_k1);
        sum_t += term;
        sum_td += term * d;
        let size = term.norm() * (1.0 + d.abs());
        if acc.negligible(size, sum_t.norm().max(sum_td.norm())) {
            return Ok(LogSplit {
                regular: finite + pref * sum_td,
                log_coefficient: pref * sum_t,
            });
        }
        term *= w * ((alpha + nf) * (beta + nf) / ((nf + 1.0) * (nf + k as f64 + 1.0)));
        psi_1 += 1.0 / (nf + 1.0);
        psi_k1 += 1.0 / (nf + k as f64 + 1.0);
        psi_a += 1.0 / (alpha + nf);
        psi_b += 1.0 / (beta + nf);
    }
    Err(acc.fail(term.norm(), sum_t))
}

/// Σ_{n<k} (a)_n (b)_n / (n! (1-k)_n) wⁿ
fn finite_sum(a: f64, b: f64, k: usize, w: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..k.saturating_sub(1) {
        let nf = n as f64;
        term *= w * ((a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - k as f64 + nf)));
        sum += term;
    }
    sum
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Taylor re-expansion of the hypergeometric ODE,
/// `z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0`,
/// about `center`, evaluated at `center + step`. Returns (F, F').
fn taylor_step(a: f64, b: f64, c: f64, center: C64, f: C64, df: C64, step: C64) -> Result<(C64, C64)> {
    let p0 = center * (C64::new(1.0, 0.0) - center);
    let p1 = C64::new(1.0, 0.0) - 2.0 * center;
    let p2 = -1.0;
    let q0 = c - (a + b + 1.0) * center;
    let q1 = -(a + b + 1.0);
    let r = -a * b;

    let mut acc = Accumulator::new("hyp2f1 continuation");
    // coefficients f_k scaled by step^k, to stay well conditioned
    let mut prev = f; // f_k h^k
    let mut cur = df * step; // f_{k+1} h^{k+1}
    let mut value = prev + cur;
    let mut deriv = df;
    for kk in 0..MAX_TERMS {
        let k = kk as f64;
        // f_{k+2} = -[(p1 k(k+1) + q0 (k+1)) f_{k+1} + (p2 k(k-1) + q1 k + r) f_k] / (p0 (k+2)(k+1))
        let next = -((p1 * (k * (k + 1.0)) + q0 * (k + 1.0)) * cur * step
            + (p2 * k * (k - 1.0) + q1 * k + r) * prev * step * step)
            / (p0 * ((k + 2.0) * (k + 1.0)));
        value += next;
        deriv += next * ((k + 2.0) / step);
        if acc.negligible(next.norm(), value.norm()) {
            return Ok((value, deriv));
        }
        prev = cur;
        cur = next;
    }
    Err(acc.fail(cur.norm(), value))
}

fn continuation_waypoints(z: C64, side: CutSide) -> Vec<C64> {
    let one = C64::new(1.0, 0.0);
    let t = (z.re / z.norm_sqr()).clamp(0.0, 1.0);
    let closest = (z * t - one).norm();
    if closest >= 0.5 {
        vec![z * (0.5 / z.norm()), z]
    } else {
        vec![C64::new(0.5, 0.0), C64::new(1.0, 0.6 * side.sign()), z]
    }
}

fn continue_to(p: &Hyp2F1Params, z: C64, side: CutSide) -> Result<C64> {
    let (a, b) = p.ordered();
    let c = p.c;
    let waypoints = continuation_waypoints(z, side);
    let mut w = waypoints[0];
    let mut f = series_raw(a, b, c, w)?;
    let mut df = series_raw(a + 1.0, b + 1.0, c + 1.0, w)? * (a * b / c);
    for &target in &waypoints[1..] {
        for _ in 0..MAX_TERMS {
            let remaining = target - w;
            let dist = remaining.norm();
            if dist == 0.0 {
                break;
            }
            let radius = w.norm().min((w - 1.0).norm());
            let h = (0.5 * radius).min(dist);
            let step = if h == dist { remaining } else { remaining * (h / dist) };
            let (nf, ndf) = taylor_step(a, b, c, w, f, df, step)?;
            f = nf;
            df = ndf;
            w = if h == dist { target } else { w + step };
        }
        if w != target {
            return Err(Error::numeric("hyp2f1 continuation", format!("could not reach {target}")));
        }
    }
    Ok(f)
}
