//! Named verification suites: residuals of the closed forms against their
//! equations, monodromy, crossing relations and probability identities.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::correlators::{
    block_f_norm, block_g_norm, boundary_double_twist, boundary_single_twist, h_general, h_general_product,
    mag_4pt_x, physical_bulk, physical_bulk_from_g, sal_prob_x, winding_probs, winding_probs_halfplane,
    xing_sym_rhs, FBlock, GBlock,
};
use crate::error::{Error, Result};
use crate::geometry::Anchors;
use crate::ode::{self, default_step, ode_residual, Func, OdeSpec, Segment};

pub const DEFAULT_KAPPAS: [f64; 3] = [2.5, 3.0, 3.7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ode,
    Monodromy,
    Crossing,
    Pde,
    Identities,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Ode, Suite::Monodromy, Suite::Crossing, Suite::Pde, Suite::Identities];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ode => "ode",
            Suite::Monodromy => "monodromy",
            Suite::Crossing => "crossing",
            Suite::Pde => "pde",
            Suite::Identities => "identities",
            Suite::All => "all",
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
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::contract("suite", format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Largest error seen; NaN when the evaluation itself failed.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// The residual must exceed `tolerance` instead of staying below it.
    pub negative_control: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn below(name: impl Into<String>, residual: Result<f64>, tolerance: f64) -> Self {
        match residual {
            Ok(r) => Check {
                name: name.into(),
                residual: r,
                tolerance,
                passed: r.is_finite() && r < tolerance,
                negative_control: false,
                detail: None,
            },
            Err(e) => Check {
                name: name.into(),
                residual: f64::NAN,
                tolerance,
                passed: false,
                negative_control: false,
                detail: Some(e.to_string()),
            },
        }
    }

    /// Negative control: passes when the residual exceeds `threshold`.
    fn above(name: impl Into<String>, residual: Result<f64>, threshold: f64) -> Self {
        let mut c = Self::below(name, residual, threshold);
        c.passed = c.residual.is_finite() && c.residual > threshold;
        c.negative_control = true;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub kappas: Vec<f64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn report(suite: Suite, kappas: &[f64], checks: Vec<Check>) -> SuiteReport {
    SuiteReport {
        suite,
        kappas: kappas.to_vec(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run(suite: Suite, kappas: &[f64]) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|&s| run_one(s, kappas)).collect(),
        s => vec![run_one(s, kappas)],
    }
}

fn run_one(suite: Suite, kappas: &[f64]) -> SuiteReport {
    let checks = match suite {
        Suite::Ode => ode_checks(kappas),
        Suite::Monodromy => monodromy_checks(kappas),
        Suite::Crossing => crossing_checks(kappas),
        Suite::Pde => pde_checks(),
        Suite::Identities => identity_checks(kappas),
        Suite::All => unreachable!("expanded by run"),
    };
    report(suite, kappas, checks)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Interior evaluation points for the residual checks.
pub fn interior_grid() -> Vec<C64> {
    vec![
        c(0.2, 0.0),
        c(0.35, 0.0),
        c(0.5, 0.0),
        c(0.65, 0.0),
        c(0.8, 0.0),
        c(0.25, 0.1),
        c(0.3, 0.3),
        c(0.6, -0.25),
        c(0.5, 0.4),
        c(0.75, 0.2),
    ]
}

fn residual_over(spec: &OdeSpec, f: Func, order_for_step: usize, real_only: bool) -> Result<f64> {
    max_of(
        interior_grid()
            .into_iter()
            .filter(|x| !real_only || x.im == 0.0)
            .map(|x| ode_residual(spec, f, x, default_step(x, order_for_step))),
    )
}

const ODE_TOL: f64 = 1e-6;

pub fn ode_checks(kappas: &[f64]) -> Vec<Check> {
    let mut out = Vec::new();
    for &k in kappas {
        let spec = OdeSpec::bulk_twist(k);
        let f11 = move |x| block_f_norm(FBlock::F11, x, k);
        let f31 = move |x| block_f_norm(FBlock::F31, x, k);
        let g11 = move |x: C64| block_g_norm(GBlock::G11, 1.0 - x, k, 0.5);
        let gm = move |x: C64| block_g_norm(GBlock::Gm11, 1.0 - x, k, 0.5);
        for (name, f) in [("F11", &f11 as Func), ("F31", &f31), ("G11", &g11), ("G-11", &gm)] {
            out.push(Check::below(
                format!("bulk twist equation, block {name}, κ = {k}"),
                residual_over(&spec, f, 2, false),
                ODE_TOL,
            ));
        }
        let single = |x| boundary_single_twist(x);
        for spec in [OdeSpec::single_twist_bulk(k), OdeSpec::single_twist_boundary(k)] {
            out.push(Check::below(spec.label.clone(), residual_over(&spec, &single, 2, false), ODE_TOL));
        }
        let double = move |x| boundary_double_twist(x, k);
        let second = OdeSpec::double_twist_bulk(k);
        out.push(Check::below(second.label.clone(), residual_over(&second, &double, 2, false), ODE_TOL));
        let third = OdeSpec::double_twist_boundary(k);
        out.push(Check::below(third.label.clone(), residual_over(&third, &double, 3, false), ODE_TOL));
    }
    out
}

/// Expected monodromy around 0 in the (𝓕₁₁, 𝓕₃₁) basis.
pub fn expected_monodromy_zero(kappa: f64) -> [[C64; 2]; 2] {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), C64::from_polar(1.0, -kappa * PI)]]
}

/// Expected monodromy around 1 in the (𝓕₁₁, 𝓕₃₁) basis.
pub fn expected_monodromy_one(kappa: f64) -> [[C64; 2]; 2] {
    let t = kappa * PI / 4.0;
    let sec = 1.0 / t.cos();
    let off = c(0.0, 1.0) * C64::from_polar(t.tan(), t);
    [[c(sec, 0.0), off], [-off, C64::from_polar(sec, 2.0 * t)]]
}

fn entry_diff(m: &[Vec<C64>], e: &[[C64; 2]; 2]) -> f64 {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).fold(0.0, |d, (i, j)| d.max((m[i][j] - e[i][j]).norm()))
}

fn mul2(a: &[Vec<C64>], b: &[Vec<C64>]) -> [[C64; 2]; 2] {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

// max |Mᵀ D M̄ - D| with D = diag(1, -1)
fn invariance_error(m: &[Vec<C64>]) -> f64 {
    let d = [1.0, -1.0];
    let mut err = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            let s: C64 = (0..2).map(|i| m[i][a] * d[i] * m[i][b].conj()).sum();
            let want = if a == b { d[a] } else { 0.0 };
            err = err.max((s - want).norm());
        }
    }
    err
}

pub const MONODROMY_TOL: f64 = 1e-6;
pub const COMPOSITION_TOL: f64 = 1e-5;

pub fn monodromy_checks(kappas: &[f64]) -> Vec<Check> {
    let mut out = Vec::new();
    let base = c(0.5, 0.0);
    for &k in kappas {
        let spec = OdeSpec::bulk_twist(k);
        let f11 = move |x| block_f_norm(FBlock::F11, x, k);
        let f31 = move |x| block_f_norm(FBlock::F31, x, k);
        let basis: [Func; 2] = [&f11, &f31];
        let m0 = ode::monodromy(&spec, &basis, c(0.0, 0.0), base);
        let m1 = ode::monodromy(&spec, &basis, c(1.0, 0.0), base);
        for (label, m, e) in [("0", &m0, expected_monodromy_zero(k)), ("1", &m1, expected_monodromy_one(k))] {
            out.push(Check::below(
                format!("monodromy around {label}, κ = {k}"),
                m.clone().map(|m| entry_diff(&m.matrix, &e)),
                MONODROMY_TOL,
            ));
            out.push(Check::below(
                format!("Wronskian determinant around {label}, κ = {k}"),
                m.clone().map(|m| m.determinant_error()),
                MONODROMY_TOL,
            ));
            out.push(Check::below(
                format!("physical combination invariant around {label}, κ = {k}"),
                m.clone().map(|m| invariance_error(&m.matrix)),
                MONODROMY_TOL,
            ));
        }
        let top = c(0.5, 1.0);
        let path = [
            Segment::Line { from: base, to: top },
            Segment::Arc { center: base, radius: 1.0, start_angle: PI / 2.0, sweep: -2.0 * PI },
            Segment::Line { from: top, to: base },
        ];
        let composed = (|| {
            let big = ode::monodromy_along(&spec, &basis, &path, base)?;
            let product = mul2(&m1.clone()?.matrix, &m0.clone()?.matrix);
            Ok(entry_diff(&big.matrix, &product))
        })();
        out.push(Check::below(format!("loop around 0 and 1 equals M1·M0, κ = {k}"), composed, COMPOSITION_TOL));
    }
    out
}

pub const CROSSING_TOL: f64 = 1e-9;

fn crossing_points() -> [C64; 4] {
    [c(0.37, 0.0), c(0.3, 0.2), c(0.6, -0.25), c(0.45, 0.4)]
}

pub fn crossing_checks(kappas: &[f64]) -> Vec<Check> {
    let mut out = Vec::new();
    for &k in kappas {
        for a in [0.0, 0.5, 1.7] {
            let err = max_of(crossing_points().into_iter().map(|x| {
                let w = 1.0 - x;
                let f11 = block_f_norm(FBlock::F11, x, k)?;
                let f31 = block_f_norm(FBlock::F31, x, k)?;
                let g11 = block_g_norm(GBlock::G11, w, k, a)?;
                let gm = block_g_norm(GBlock::Gm11, w, k, a)?;
                Ok([
                    (f11 - (g11 + gm * (1.0 - a))).norm(),
                    (f31 - (g11 - gm * a)).norm(),
                    (gm - (f11 - f31)).norm(),
                ]
                .into_iter()
                .fold(0.0, f64::max))
            }));
            out.push(Check::below(format!("block crossing relations, κ = {k}, A = {a}"), err, CROSSING_TOL));
        }
    }
    let err = max_of((1..=19).map(|i| {
        let s = 0.05 * i as f64;
        let mut m = 0.0f64;
        for (rho, rt) in [(1.0, 1.0), (0.3, -2.0), (2.0, 0.5)] {
            m = m.max((h_general_product(s, rho, rt, 1.0, 0.0)? - xing_sym_rhs(s, rho, rt)?).abs());
        }
        Ok(m)
    }));
    out.push(Check::below("winding solution crossing identity", err, CROSSING_TOL));
    out
}

pub const PDE_TOL: f64 = 1e-6;

pub fn pde_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (c1, c2) in [(1.0, 0.0), (0.0, 1.0)] {
        let h = move |s: f64, t: f64| h_general(s, t, c1, c2);
        let r = ode::pde_residuals_sigma_tau(&h);
        out.push(Check::below(
            format!("second τ-derivative, (c1, c2) = ({c1}, {c2})"),
            r.clone().map(|r| r.0),
            PDE_TOL,
        ));
        out.push(Check::below(
            format!("first-order σ-τ equation, (c1, c2) = ({c1}, {c2})"),
            r.map(|r| r.1),
            PDE_TOL,
        ));
    }
    let bad = |s: f64, t: f64| Ok(s * t * t);
    out.push(Check::above(
        "negative control σ·τ² violates the τ equation",
        ode::pde_residuals_sigma_tau(&bad).map(|r| r.0),
        1e-3,
    ));
    out
}

/// (v_A, v_B, σ) grid of the identity checks.
pub fn winding_grid() -> Vec<(f64, f64, f64)> {
    let mut g = Vec::with_capacity(4000);
    for i in 0..20 {
        for j in 0..20 {
            for s in 0..10 {
                let va = PI * (i as f64 + 0.5) / 20.0;
                let vb = PI * (j as f64 + 0.5) / 20.0;
                g.push((va, vb, (s as f64 + 0.5) / 10.0));
            }
        }
    }
    g
}

pub fn identity_checks(kappas: &[f64]) -> Vec<Check> {
    let mut out = Vec::new();
    let grid = winding_grid();
    out.push(Check::below(
        "winding probabilities sum to one",
        max_of(grid.iter().map(|&(a, b, s)| Ok((winding_probs(a, b, s)?.total() - 1.0).abs()))),
        1e-12,
    ));
    out.push(Check::below(
        "P_AB + P_A = cos²(v_A/2) and P_AB + P_B = cos²(v_B/2)",
        max_of(grid.iter().map(|&(a, b, s)| {
            let w = winding_probs(a, b, s)?;
            Ok((w.p_ab + w.p_a - (a / 2.0).cos().powi(2))
                .abs()
                .max((w.p_ab + w.p_b - (b / 2.0).cos().powi(2)).abs()))
        })),
        1e-12,
    ));
    out.push(Check::below(
        "factorization at σ = 1 - 1e-8",
        max_of(grid.iter().filter(|g| g.2 == 0.05).map(|&(a, b, _)| {
            let w = winding_probs(a, b, 1.0 - 1e-8)?;
            let (la, lb) = ((a / 2.0).cos().powi(2), (b / 2.0).cos().powi(2));
            let want = [la * lb, la * (1.0 - lb), (1.0 - la) * lb, (1.0 - la) * (1.0 - lb)];
            Ok(w.as_array().iter().zip(want).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
        })),
        1e-8,
    ));
    out.push(Check::below(
        "coincident points reduce to one-point passage",
        max_of((1..12).map(|i| {
            let v = PI * i as f64 / 12.0;
            let z = C64::from_polar(1.3, v);
            let w = winding_probs_halfplane(z, z, Anchors::standard())?;
            Ok((w.p_ab - (v / 2.0).cos().powi(2)).abs().max(w.p_a.abs()).max(w.p_b.abs()))
        })),
        1e-8,
    ));
    for &k in kappas.iter().filter(|&&k| k > 2.0 && k < 4.0) {
        out.push(Check::below(
            format!("physical bulk solution independent of A, κ = {k}"),
            max_of(crossing_points().into_iter().flat_map(|x| {
                [0.0, 0.5, 1.7].map(move |a| Ok((physical_bulk_from_g(x, k, a)? - physical_bulk(x, k)?).abs()))
            })),
            1e-10,
        ));
    }
    let xs = [c(0.3, 0.2), c(-0.7, 0.4), c(2.0, 0.0), c(1.5, -0.8), c(0.1, 0.0), c(-3.0, 0.0), c(0.9, 0.05)];
    out.push(Check::below(
        "magnetization = 1 - separation probability",
        max_of(xs.into_iter().map(|x| Ok((mag_4pt_x(x)? - (1.0 - sal_prob_x(x)?)).abs()))),
        1e-10,
    ));
    out.extend(crossing_checks(kappas));
    out
}
