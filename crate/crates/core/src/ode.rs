//! Numerical checks of the linear ODEs behind the closed forms: finite
//! difference residuals, analytic continuation along loops, and monodromy.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

type CoeffFn = dyn Fn(C64) -> Vec<C64> + Send + Sync;

/// Linear ODE F⁽ⁿ⁾ + c_{n-1}F⁽ⁿ⁻¹⁾ + … + c_0 F = 0 with coefficients
/// singular only at x = 0 and x = 1.
#[derive(Clone)]
pub struct OdeSpec {
    pub label: String,
    pub order: usize,
    coeffs: Arc<CoeffFn>,
}

impl fmt::Debug for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeSpec")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl OdeSpec {
    /// `coeffs(x)` returns `[c_0, …, c_{n-1}]`.
    pub fn new(
        label: impl Into<String>,
        order: usize,
        coeffs: impl Fn(C64) -> Vec<C64> + Send + Sync + 'static,
    ) -> Self {
        OdeSpec {
            label: label.into(),
            order,
            coeffs: Arc::new(coeffs),
        }
    }

    /// F'' + p F' + q F = 0.
    pub fn second_order(
        label: impl Into<String>,
        p: impl Fn(C64) -> C64 + Send + Sync + 'static,
        q: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, 2, move |x| vec![q(x), p(x)])
    }

    pub fn coefficients(&self, x: C64) -> Vec<C64> {
        (self.coeffs)(x)
    }

    /// Bulk twist / 2-leg equation at x ∈ {0, x, 1, ∞}.
    pub fn bulk_twist(kappa: f64) -> Self {
        let k = kappa;
        Self::second_order(
            format!("bulk twist, κ = {k}"),
            move |x| ((8.0 - 2.0 * k) - (8.0 - k) * x) / (4.0 * x * (1.0 - x)),
            move |x| -C64::new(k * (8.0 - k) / 64.0, 0.0) / ((1.0 - x) * (1.0 - x)),
        )
    }

    /// Single twist with an SLE: the bulk (twist) null-state equation.
    pub fn single_twist_bulk(kappa: f64) -> Self {
        let k = kappa;
        Self::second_order(
            format!("single twist, twist null state, κ = {k}"),
            move |x| (2.0 * (4.0 - k) - (8.0 - k) * x) / (4.0 * x * (1.0 - x)),
            move |x| -C64::new((6.0 - k) / 8.0, 0.0) / ((1.0 - x) * (1.0 - x)),
        )
    }

    /// Single twist with an SLE: the boundary (SLE) null-state equation.
    pub fn single_twist_boundary(kappa: f64) -> Self {
        let k = kappa;
        Self::second_order(
            format!("single twist, boundary null state, κ = {k}"),
            move |x| -(2.0 * (4.0 - k) - (4.0 - 2.0 * k) * x) / (k * x * (1.0 - x)),
            move |x| -C64::new((3.0 * k - 8.0) / (4.0 * k), 0.0) / ((1.0 - x) * (1.0 - x)),
        )
    }

    /// Twist with a double SLE: the second-order (twist) equation.
    pub fn double_twist_bulk(kappa: f64) -> Self {
        let k = kappa;
        Self::second_order(
            format!("double twist, twist null state, κ = {k}"),
            move |x| (2.0 * (4.0 - k) - (8.0 - k) * x) / (4.0 * x * (1.0 - x)),
            move |x| -C64::new((8.0 - k) / 4.0, 0.0) / ((1.0 - x) * (1.0 - x)),
        )
    }

    /// Twist with a double SLE: the third-order (2-leg boundary) equation.
    pub fn double_twist_boundary(kappa: f64) -> Self {
        let k = kappa;
        Self::new(format!("double twist, boundary null state, κ = {k}"), 3, move |x| {
            let w = 1.0 - x;
            let c2 = -2.0 * (16.0 - 3.0 * k + (3.0 * k - 8.0) * x) / (k * x * w);
            let c1 = (6.0 * (8.0 - k) * (4.0 - k) + 4.0 * (6.0 - k) * (3.0 * k - 8.0) * x
                - (8.0 - k) * (3.0 * k - 8.0) * x * x)
                / (k * k * x * x * w * w);
            let c0 = (3.0 * k - 8.0) * (8.0 - k) * (2.0 - x) / (k * k * x * w * w * w);
            vec![c0, c1, c2]
        })
    }

    /// F'' = 0.
    pub fn trivial() -> Self {
        Self::new("F'' = 0", 2, |_| vec![C64::new(0.0, 0.0); 2])
    }
}

/// Singular points of every equation handled here.
pub const SINGULAR_POINTS: [f64; 2] = [0.0, 1.0];

fn singular_distance(x: C64) -> f64 {
    SINGULAR_POINTS
        .iter()
        .map(|&s| (x - s).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Evaluable function of one complex variable.
pub type Func<'a> = &'a dyn Fn(C64) -> Result<C64>;

fn stencil(f: Func, x: C64, h: f64, order: usize) -> Result<C64> {
    let at = |k: f64| f(x + h * k);
    Ok(match order {
        0 => f(x)?,
        1 => (at(-2.0)? - at(-1.0)? * 8.0 + at(1.0)? * 8.0 - at(2.0)?) / (12.0 * h),
        2 => (-at(-2.0)? + at(-1.0)? * 16.0 - f(x)? * 30.0 + at(1.0)? * 16.0 - at(2.0)?) / (12.0 * h * h),
        3 => (at(-3.0)? - at(-2.0)? * 8.0 + at(-1.0)? * 13.0 - at(1.0)? * 13.0 + at(2.0)? * 8.0 - at(3.0)?)
            / (8.0 * h * h * h),
        _ => return Err(Error::contract("derivative", format!("order {order} is not supported"))),
    })
}

/// Derivative of `order` ≤ 3 at x: central differences with error O(h⁴),
/// improved by one Richardson step.
pub fn derivative(f: Func, x: C64, h: f64, order: usize) -> Result<C64> {
    if order == 0 {
        return f(x);
    }
    let coarse = stencil(f, x, h, order)?;
    let fine = stencil(f, x, 0.5 * h, order)?;
    Ok((fine * 16.0 - coarse) / 15.0)
}

/// Default finite-difference step at x for derivatives up to `order`.
pub fn default_step(x: C64, order: usize) -> f64 {
    let scale = singular_distance(x).min(1.0);
    if order >= 3 {
        1e-2 * scale
    } else {
        1e-3 * scale
    }
}

/// Relative residual |F⁽ⁿ⁾ + Σ c_j F⁽ʲ⁾| of `f` at x, divided by the largest
/// of |F| and the individual terms.
pub fn ode_residual(spec: &OdeSpec, f: Func, x: C64, h: f64) -> Result<f64> {
    let reach = if spec.order >= 3 { 3.0 } else { 2.0 };
    if singular_distance(x) <= 10.0 * h.max(reach * h) {
        return Err(Error::domain(
            "ode_residual",
            format!("x = {x} is within 10h of a singular point (h = {h})"),
        ));
    }
    let coeffs = spec.coefficients(x);
    let mut total = derivative(f, x, h, spec.order)?;
    let mut scale = total.norm().max(f(x)?.norm());
    for (j, c) in coeffs.iter().enumerate() {
        let term = *c * derivative(f, x, h, j)?;
        scale = scale.max(term.norm());
        total += term;
    }
    Ok(total.norm() / scale.max(f64::MIN_POSITIVE))
}

/// Piece of an integration path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// Arc around `center`; positive `sweep` is counterclockwise.
    Arc { center: C64, radius: f64, start_angle: f64, sweep: f64 },
}

impl Segment {
    fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start_angle, sweep } => {
                center + C64::from_polar(radius, start_angle + sweep * t)
            }
        }
    }

    fn velocity(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start_angle, sweep, .. } => {
                C64::new(0.0, sweep) * C64::from_polar(radius, start_angle + sweep * t)
            }
        }
    }

    fn end(&self) -> C64 {
        self.point(1.0)
    }

    fn max_step(&self) -> f64 {
        match *self {
            Segment::Line { .. } => 1.0 / 64.0,
            Segment::Arc { sweep, .. } => {
                let nodes = (MIN_LOOP_NODES as f64 * sweep.abs() / std::f64::consts::TAU).ceil().max(1.0);
                1.0 / nodes
            }
        }
    }
}

/// Minimum number of integration nodes on a full circle.
pub const MIN_LOOP_NODES: usize = 720;
/// Relative tolerance of the adaptive integrator.
pub const RK_RTOL: f64 = 1e-10;
const RK_ATOL: f64 = 1e-14;
const RK_MIN_STEP: f64 = 1e-12;
const RK_MAX_STEPS: usize = 1_000_000;

/// Closed path from `base` clockwise once around `center`: radial leg in to
/// half the distance, a full circle, radial leg out.
pub fn clockwise_loop(center: C64, base: C64) -> Vec<Segment> {
    let d = base - center;
    let radius = 0.5 * d.norm();
    let turn = center + d * 0.5;
    vec![
        Segment::Line { from: base, to: turn },
        Segment::Arc {
            center,
            radius,
            start_angle: d.arg(),
            sweep: -std::f64::consts::TAU,
        },
        Segment::Line { from: turn, to: base },
    ]
}

/// Result of continuing a set of solutions along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuation {
    /// `values[i][k]`: k-th derivative of solution i at the path end.
    pub values: Vec<Vec<C64>>,
    /// ∫ c_{n-1}(x) dx along the path.
    pub trace_integral: C64,
    pub steps: usize,
}

struct Companion<'a> {
    spec: &'a OdeSpec,
    n: usize,
    m: usize,
}

impl Companion<'_> {
    // state layout: m solutions × n derivatives, then the trace integral
    fn rhs(&self, seg: &Segment, t: f64, y: &[C64], out: &mut [C64]) {
        let x = seg.point(t);
        let v = seg.velocity(t);
        let c = self.spec.coefficients(x);
        let n = self.n;
        for s in 0..self.m {
            let base = s * n;
            let mut top = C64::new(0.0, 0.0);
            for j in 0..n {
                top -= c[j] * y[base + j];
            }
            for j in 0..n - 1 {
                out[base + j] = v * y[base + j + 1];
            }
            out[base + n - 1] = v * top;
        }
        out[self.m * n] = v * c[n - 1];
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn integrate_segment(sys: &Companion, seg: &Segment, y: &mut Vec<C64>) -> Result<usize> {
    let dim = y.len();
    let mut k = vec![vec![C64::new(0.0, 0.0); dim]; 7];
    let mut tmp = vec![C64::new(0.0, 0.0); dim];
    let mut t = 0.0;
    let h_max = seg.max_step();
    let mut h = h_max;
    let mut steps = 0;
    while t < 1.0 {
        if steps > RK_MAX_STEPS {
            return Err(Error::numeric("continuation", "step budget exhausted"));
        }
        h = h.min(1.0 - t);
        for s in 0..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for r in 0..s {
                    acc += k[r][i] * (h * A[s][r]);
                }
                tmp[i] = acc;
            }
            let (ks, _) = k.split_at_mut(s + 1);
            sys.rhs(seg, t + C[s] * h, &tmp, &mut ks[s]);
        }
        let mut err = 0.0f64;
        let mut next = vec![C64::new(0.0, 0.0); dim];
        for i in 0..dim {
            let mut hi = y[i];
            let mut diff = C64::new(0.0, 0.0);
            for s in 0..7 {
                hi += k[s][i] * (h * B5[s]);
                diff += k[s][i] * (h * (B5[s] - B4[s]));
            }
            let scale = RK_ATOL + RK_RTOL * y[i].norm().max(hi.norm());
            err = err.max(diff.norm() / scale);
            next[i] = hi;
        }
        if !err.is_finite() {
            return Err(Error::numeric("continuation", format!("non-finite state at t = {t}")));
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t += h;
            *y = next;
            steps += 1;
            h = (h * factor).min(h_max);
        } else {
            h *= factor;
        }
        if t < 1.0 && h < RK_MIN_STEP {
            return Err(Error::numeric(
                "continuation",
                format!("step size underflow near x = {}", seg.point(t)),
            ));
        }
    }
    Ok(steps)
}

/// Continues solutions along `path`. `initial[i]` holds (F, F', …, F⁽ⁿ⁻¹⁾)
/// of solution i at the path start.
pub fn continue_along(spec: &OdeSpec, path: &[Segment], initial: &[Vec<C64>]) -> Result<Continuation> {
    let n = spec.order;
    let m = initial.len();
    if initial.iter().any(|v| v.len() != n) {
        return Err(Error::contract("continue_along", format!("each initial vector needs {n} entries")));
    }
    for seg in path {
        for i in 0..=64 {
            let x = seg.point(i as f64 / 64.0);
            if singular_distance(x) < 1e-6 {
                return Err(Error::domain("continue_along", format!("path passes through a singular point near {x}")));
            }
        }
    }
    let sys = Companion { spec, n, m };
    let mut y: Vec<C64> = initial.iter().flatten().copied().collect();
    y.push(C64::new(0.0, 0.0));
    let mut steps = 0;
    for seg in path {
        steps += integrate_segment(&sys, seg, &mut y)?;
    }
    let values = (0..m).map(|s| y[s * n..(s + 1) * n].to_vec()).collect();
    Ok(Continuation {
        values,
        trace_integral: y[m * n],
        steps,
    })
}

/// Derivatives (F, F', …) of `f` at x for use as initial data.
pub fn jet(f: Func, x: C64, order: usize) -> Result<Vec<C64>> {
    let h = default_step(x, order.saturating_sub(1).max(1));
    (0..order).map(|k| derivative(f, x, h, k)).collect()
}

/// Monodromy matrix M of a basis: continuing basis element i around the
/// loop yields Σ_j M[i][j]·(basis element j).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyResult {
    pub matrix: Vec<Vec<C64>>,
    pub base: C64,
    pub center: C64,
    pub label: String,
    /// exp(-∮ c_{n-1} dx), what det M must equal.
    pub expected_determinant: C64,
    pub determinant: C64,
    pub steps: usize,
}

impl MonodromyResult {
    pub fn determinant_error(&self) -> f64 {
        (self.determinant - self.expected_determinant).norm() / self.expected_determinant.norm()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[i][j]
    }
}

fn solve(mut a: Vec<Vec<C64>>, mut b: Vec<Vec<C64>>) -> Result<Vec<Vec<C64>>> {
    // Gaussian elimination with partial pivoting; b has several right-hand sides
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty");
        if a[pivot][col].norm() == 0.0 {
            return Err(Error::numeric("monodromy", "basis is linearly dependent at the base point"));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            for k in 0..b[row].len() {
                let v = b[col][k];
                b[row][k] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        for k in 0..b[col].len() {
            let mut v = b[col][k];
            for j in col + 1..n {
                v -= a[col][j] * b[j][k];
            }
            b[col][k] = v / a[col][col];
        }
    }
    Ok(b)
}

fn determinant(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty");
        if a[pivot][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
        }
    }
    det
}

/// Monodromy of `basis` along an arbitrary closed path starting and ending
/// at `path[0]`'s start.
pub fn monodromy_along(spec: &OdeSpec, basis: &[Func], path: &[Segment], center: C64) -> Result<MonodromyResult> {
    let n = spec.order;
    if basis.len() != n {
        return Err(Error::contract("monodromy", format!("need {n} basis functions, got {}", basis.len())));
    }
    let base = match path.first() {
        Some(Segment::Line { from, .. }) => *from,
        Some(seg) => seg.point(0.0),
        None => return Err(Error::contract("monodromy", "empty path")),
    };
    let end = path.last().expect("non-empty").end();
    if (end - base).norm() > 1e-12 * base.norm().max(1.0) {
        return Err(Error::contract("monodromy", "path is not closed"));
    }
    let initial: Vec<Vec<C64>> = basis.iter().map(|f| jet(*f, base, n)).collect::<Result<_>>()?;
    let cont = continue_along(spec, path, &initial)?;
    // continued_i = Σ_j M_ij initial_j, i.e. for each derivative order k:
    // Σ_j initial_j[k] M_ij = continued_i[k]. Solve Wᵀ-system per row of M.
    let w: Vec<Vec<C64>> = (0..n).map(|k| (0..n).map(|j| initial[j][k]).collect()).collect();
    let rhs: Vec<Vec<C64>> = (0..n).map(|k| (0..n).map(|i| cont.values[i][k]).collect()).collect();
    let sol = solve(w, rhs)?; // sol[j][i] = M_ij
    let matrix: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| sol[j][i]).collect()).collect();
    let det = determinant(&matrix);
    Ok(MonodromyResult {
        matrix,
        base,
        center,
        label: spec.label.clone(),
        expected_determinant: (-cont.trace_integral).exp(),
        determinant: det,
        steps: cont.steps,
    })
}

/// Monodromy of `basis` once clockwise around `center`, based at `base_x`.
pub fn monodromy(spec: &OdeSpec, basis: &[Func], center: C64, base_x: C64) -> Result<MonodromyResult> {
    if SINGULAR_POINTS.iter().any(|&s| (base_x - s).norm() < 1e-9) {
        return Err(Error::domain("monodromy", "base point is a singular point"));
    }
    let path = clockwise_loop(center, base_x);
    monodromy_along(spec, basis, &path, center)
}

/// Grid used by [`pde_residuals_sigma_tau`].
pub const PDE_SIGMA: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const PDE_TAU: [f64; 6] = [-3.0, -1.0, -0.25, 0.4, 1.0, 2.5];

/// Maximum relative residuals of ∂τ²H = 0 and
/// (1-σ)τH - τ(1+τ+σ-στ)∂τH + 3σ(1-σ)∂σH = 0 over a grid inside
/// σ ∈ (0.05, 0.95).
pub fn pde_residuals_sigma_tau(h: &dyn Fn(f64, f64) -> Result<f64>) -> Result<(f64, f64)> {
    let step = 1e-3;
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for &s in &PDE_SIGMA {
        for &t in &PDE_TAU {
            let along_tau = |z: C64| h(s, z.re).map(|v| C64::new(v, 0.0));
            let along_sigma = |z: C64| h(z.re, t).map(|v| C64::new(v, 0.0));
            let x0 = C64::new(t, 0.0);
            let value = h(s, t)?;
            let h_t = derivative(&along_tau, x0, step, 1)?.re;
            let h_tt = derivative(&along_tau, x0, step, 2)?.re;
            let h_s = derivative(&along_sigma, C64::new(s, 0.0), step, 1)?.re;
            let scale1 = value.abs().max(h_t.abs()).max(1.0);
            r1 = r1.max(h_tt.abs() / scale1);
            let terms = [
                (1.0 - s) * t * value,
                -t * (1.0 + t + s - s * t) * h_t,
                3.0 * s * (1.0 - s) * h_s,
            ];
            let scale2 = terms.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            r2 = r2.max(terms.iter().sum::<f64>().abs() / scale2);
        }
    }
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trivial_equation_has_identity_monodromy() {
        let spec = OdeSpec::trivial();
        let f0 = |_x: C64| Ok(one());
        let f1 = |x: C64| Ok(x);
        let m = monodromy(&spec, &[&f0, &f1], C64::new(0.0, 0.0), C64::new(0.5, 0.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m.entry(i, j) - want).norm() < 1e-10);
            }
        }
        assert!(m.determinant_error() < 1e-10);
    }

    #[test]
    fn power_function_picks_up_phase() {
        // F'' - (a(a-1)/x²)F = 0 has solutions x^a and x^{1-a}
        let a = 0.3;
        let spec = OdeSpec::second_order("power", |_| C64::new(0.0, 0.0), move |x| -(a * (a - 1.0)) / (x * x));
        let f = move |x: C64| Ok((x.ln() * a).exp());
        let g = move |x: C64| Ok((x.ln() * (1.0 - a)).exp());
        let m = monodromy(&spec, &[&f, &g], C64::new(0.0, 0.0), C64::new(0.5, 0.2)).unwrap();
        let phase = C64::from_polar(1.0, -2.0 * PI * a);
        assert!((m.entry(0, 0) - phase).norm() < 1e-8, "{:?}", m.matrix);
        assert!(m.entry(0, 1).norm() < 1e-8);
        assert!(m.determinant_error() < 1e-8);
    }

    #[test]
    fn residual_of_exact_solution() {
        let spec = OdeSpec::trivial();
        let f = |x: C64| Ok(x * 3.0 + 1.0);
        let r = ode_residual(&spec, &f, C64::new(0.4, 0.1), 1e-3).unwrap();
        assert!(r < 1e-8, "{r}");
        let g = |x: C64| Ok(x * x);
        assert!(ode_residual(&spec, &g, C64::new(0.4, 0.1), 1e-3).unwrap() > 0.1);
    }

    #[test]
    fn residual_near_singularity_is_rejected() {
        let spec = OdeSpec::bulk_twist(3.0);
        let f = |_x: C64| Ok(one());
        assert!(ode_residual(&spec, &f, C64::new(0.005, 0.0), 1e-3).unwrap_err().is_domain());
    }
}
