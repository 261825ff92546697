mod common;

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;
use twistloop::correlators::*;
use twistloop::geometry::{sigma_halfplane, Anchors, Point};
use twistloop::params::{twist_weight, two_leg_weight};
use twistloop::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------- blocks ----------

#[test]
fn crossing_relations_hold() {
    let points = [c(0.37, 0.0), c(0.3, 0.2), c(0.6, -0.25), c(0.45, 0.4)];
    for &k in &[2.5, 8.0 / 3.0, 3.1, 3.7] {
        for &a in &[0.0, 0.5, 1.7] {
            for &x in &points {
                let w = 1.0 - x;
                let f11 = block_f_norm(FBlock::F11, x, k).unwrap();
                let f31 = block_f_norm(FBlock::F31, x, k).unwrap();
                let g11 = block_g_norm(GBlock::G11, w, k, a).unwrap();
                let gm = block_g_norm(GBlock::Gm11, w, k, a).unwrap();
                let tol = 1e-10;
                assert!((f11 - (g11 + gm * (1.0 - a))).norm() < tol, "κ={k} A={a} x={x}");
                assert!((f31 - (g11 - gm * a)).norm() < tol, "κ={k} A={a} x={x}");
                assert!((g11 - (f11 * a + f31 * (1.0 - a))).norm() < tol);
                assert!((gm - (f11 - f31)).norm() < tol, "κ={k} x={x}: {gm} vs {}", f11 - f31);
            }
        }
    }
}

#[test]
fn f31_leading_exponent() {
    for &k in &[2.5, 3.0, 3.7] {
        let (x1, x2) = (1e-6, 1e-5);
        let f1 = block_f(FBlock::F31, c(x1, 0.0), k).unwrap().re;
        let f2 = block_f(FBlock::F31, c(x2, 0.0), k).unwrap().re;
        let slope = (f2.ln() - f1.ln()) / (x2.ln() - x1.ln());
        assert!((slope - (k / 2.0 - 1.0)).abs() < 1e-4, "κ={k}: slope {slope}");
    }
}

#[test]
fn physical_solution_is_independent_of_a() {
    let xs = [c(0.3, 0.2), c(0.7, 0.1), c(0.5, -0.3), c(0.45, 0.05)];
    for &k in &[2.5, 8.0 / 3.0, 3.3] {
        for &x in &xs {
            let reference = physical_bulk(x, k).unwrap();
            for &a in &[0.0, 0.5, 1.7] {
                let g = physical_bulk_from_g(x, k, a).unwrap();
                assert!((g - reference).abs() < 1e-10, "κ={k} A={a} x={x}: {g} vs {reference}");
            }
        }
    }
}

// ---------- bulk four-point function ----------

fn bulk_oracle(z: [Complex64; 4], k: f64) -> f64 {
    let z21 = z[1] - z[0];
    let z43 = z[3] - z[2];
    let x = z21 * z43 / ((z[2] - z[0]) * (z[3] - z[1]));
    z21.norm().powf(-4.0 * twist_weight(k).unwrap())
        * z43.norm().powf(-4.0 * two_leg_weight(k).unwrap())
        * physical_bulk(x, k).unwrap()
}

fn plane_point() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn separated(z: &[Complex64]) -> bool {
    for i in 0..z.len() {
        for j in 0..i {
            if (z[i] - z[j]).norm() < 0.1 {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bulk_correlator_is_real_and_matches_blocks(
        z in proptest::collection::vec(plane_point(), 4),
        k in 2.2..3.9f64,
    ) {
        prop_assume!(separated(&z));
        let z = [z[0], z[1], z[2], z[3]];
        let sewn = bulk_twist_4pt_sewn(z, k).unwrap();
        prop_assert!(sewn.im.abs() <= 1e-12 * sewn.re.abs().max(1e-300), "{sewn}");
        let oracle = bulk_oracle(z, k);
        prop_assert!((sewn.re - oracle).abs() < 1e-9 * oracle.abs().max(1e-3), "{} vs {oracle}", sewn.re);
    }
}

#[test]
fn bulk_correlator_factorizes_for_close_pairs() {
    let k = 3.0;
    for &d in &[1e-3, 1e-4] {
        let z = [c(0.0, 0.0), c(d, 0.3 * d), c(10.0, 1.0), c(10.0 + 0.5 * d, 1.0 + d)];
        let z21 = (z[1] - z[0]).norm();
        let z43 = (z[3] - z[2]).norm();
        let two_point = z21.powf(-4.0 * twist_weight(k).unwrap()) * z43.powf(-4.0 * two_leg_weight(k).unwrap());
        let ratio = bulk_twist_4pt(z, k).unwrap() / two_point;
        assert!((ratio - 1.0).abs() < 1e-5, "d={d}: {ratio}");
    }
}

#[test]
fn bulk_correlator_rejects_bad_input() {
    let z = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)];
    assert!(bulk_twist_4pt(z, 3.0).unwrap_err().is_domain());
    let z = [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 1.0), c(2.0, 0.0)];
    assert!(bulk_twist_4pt(z, 4.5).is_err());
}

// ---------- self-avoiding loop ----------

fn four_distinct() -> impl Strategy<Value = [Complex64; 4]> {
    proptest::collection::vec(plane_point(), 4)
        .prop_filter("separated", |z| separated(z))
        .prop_map(|z| [z[0], z[1], z[2], z[3]])
}

fn sal(z: [Complex64; 4]) -> f64 {
    sal_separation_prob(z[0].into(), z[1].into(), z[2].into(), z[3].into()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sal_probability_is_bounded_and_symmetric(z in four_distinct()) {
        let p = sal(z);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "{p}");
        let swapped12 = sal([z[1], z[0], z[2], z[3]]);
        let swapped34 = sal([z[0], z[1], z[3], z[2]]);
        prop_assert!((p - swapped12).abs() < 1e-9, "{p} vs {swapped12}");
        prop_assert!((p - swapped34).abs() < 1e-9, "{p} vs {swapped34}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn magnetization_is_the_complement(z in four_distinct()) {
        let pts: Vec<Point> = z.iter().map(|&w| w.into()).collect();
        let p = sal(z);
        let m = mag_4pt(pts[0], pts[1], pts[2], pts[3]).unwrap();
        prop_assert!((m - (1.0 - p)).abs() < 1e-10);
    }

    #[test]
    fn probability_from_twist_partition_function(z in four_distinct()) {
        let p = sal(z);
        let ratio = z_twist(z).unwrap() / sal_two_point(z[2], z[3]).unwrap();
        prop_assert!((p - 0.5 * (1.0 - ratio)).abs() < 1e-10);
    }
}

#[test]
fn p_max_value_and_stability() {
    // mpmath, 30 digits
    let reference = 0.650_108_388_872_733_893;
    let p = sal_prob_max().unwrap();
    assert!((p - reference).abs() < 1e-6);
    assert!((p_max_closed_form() - reference).abs() < 1e-14);
    let loose = sal_prob_x(c(2.0, 1e-6)).unwrap();
    assert!((loose - p).abs() < 1e-6);
    let below = sal_prob_x(c(2.0, -1e-8)).unwrap();
    assert!((below - p).abs() < 1e-6);
}

#[test]
fn sal_probability_vanishes_for_distant_twists() {
    let p = |r: f64| {
        sal_separation_prob(c(r, 0.0).into(), Point::Infinity, c(-1.0, 0.0).into(), c(1.0, 0.0).into()).unwrap()
    };
    assert!(p(1e2) > p(1e4) && p(1e4) > p(1e6));
    assert!(p(1e6) < 1e-3);
}

// ---------- boundary correlators ----------

#[test]
fn single_twist_strip_form() {
    for i in 1..30 {
        let v = PI / 2.0 * i as f64 / 30.0;
        let x = 1.0 - (Complex64::i() * 2.0 * v).exp();
        assert!((boundary_single_twist(x).unwrap() - single_twist_strip(v).unwrap()).norm() < 1e-13);
    }
}

#[test]
fn double_twist_strip_form() {
    for &k in &[2.5, 8.0 / 3.0, 3.5, 5.0] {
        for i in 1..30 {
            let v = PI * i as f64 / 30.0;
            let x = 1.0 - (Complex64::i() * 2.0 * v).exp();
            let f = boundary_double_twist(x, k).unwrap();
            assert!((f - double_twist_strip(v, k).unwrap()).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn percolation_properties(
        re in -3.0..3.0f64,
        im in 0.01..3.0f64,
        gaps in proptest::collection::vec(0.05..2.0f64, 4),
        start in -4.0..0.0f64,
        scale in 0.1..10.0f64,
        shift in -5.0..5.0f64,
    ) {
        let z = c(re, im);
        let mut x = [start; 4];
        for i in 1..4 {
            x[i] = x[i - 1] + gaps[i];
        }
        let v = percolation_6pt(z, x).unwrap();
        prop_assert!(v > 0.0);
        let scaled = percolation_6pt(z * scale, x.map(|t| t * scale)).unwrap();
        prop_assert!((scaled / v - scale.powf(-1.25)).abs() < 1e-12 * scale.powf(-1.25));
        let moved = percolation_6pt(z + shift, x.map(|t| t + shift)).unwrap();
        prop_assert!((moved - v).abs() < 1e-12 * v);
    }
}

// ---------- winding ----------

fn k_oracle(sigma: f64) -> f64 {
    1.0 - sigma * common::hyp2f1_euler(1.0, 4.0 / 3.0, 5.0 / 3.0, 1.0 - sigma)
}

#[test]
fn winding_k_against_euler_integral() {
    for i in 1..=19 {
        let s = 0.05 * i as f64;
        let got = winding_k(s).unwrap();
        let want = k_oracle(s);
        assert!((got - want).abs() < 1e-11, "σ={s}: {got} vs {want}");
    }
}

fn grid() -> impl Iterator<Item = (f64, f64, f64)> {
    (0..20).flat_map(|i| {
        (0..20).flat_map(move |j| {
            (0..10).map(move |l| {
                let va = PI * (i as f64 + 0.5) / 20.0;
                let vb = PI * (j as f64 + 0.5) / 20.0;
                let s = (l as f64 + 0.5) / 10.0;
                (va, vb, s)
            })
        })
    })
}

#[test]
fn winding_probabilities_sum_to_one_and_marginalize() {
    for (va, vb, s) in grid() {
        let w = winding_probs(va, vb, s).unwrap();
        assert!((w.total() - 1.0).abs() < 1e-12);
        let left_a = schramm_left_passage(va).unwrap();
        let left_b = schramm_left_passage(vb).unwrap();
        assert!((w.p_ab + w.p_a - left_a).abs() < 1e-12);
        assert!((w.p_ab + w.p_b - left_b).abs() < 1e-12);
        // σ is bounded below by its value at Δu = 0 for any actual pair of points
        let sigma_min = (0.5 * (vb - va)).sin().powi(2) / (0.5 * (vb + va)).sin().powi(2);
        if s >= sigma_min {
            for p in w.as_array() {
                assert!((-1e-12..=1.0 + 1e-12).contains(&p), "({va}, {vb}, {s}): {w:?}");
            }
        }
    }
}

#[test]
fn winding_boundary_limits() {
    let e = 1e-6;
    for &vb in &[0.3, 1.5, 2.8] {
        for &s in &[0.1, 0.5, 0.9] {
            let w = winding_probs(e, vb, s).unwrap();
            assert!(w.p_b.abs() < 1e-5 && w.p_o.abs() < 1e-5, "{w:?}");
            let w = winding_probs(PI - e, vb, s).unwrap();
            assert!(w.p_ab.abs() < 1e-5 && w.p_a.abs() < 1e-5, "{w:?}");
        }
    }
}

#[test]
fn winding_independence_and_coincidence() {
    for &(va, vb) in &[(0.4, 2.0), (1.0, 1.0), (2.9, 0.2)] {
        let w = winding_probs(va, vb, 1.0 - 1e-8).unwrap();
        let (ca, cb) = (va.cos(), vb.cos());
        assert!((w.p_ab - 0.25 * (1.0 + ca) * (1.0 + cb)).abs() < 1e-8);
        assert!((w.p_o - 0.25 * (1.0 - ca) * (1.0 - cb)).abs() < 1e-8);
        let exact = winding_probs(va, vb, 1.0).unwrap();
        assert!((exact.p_ab - 0.25 * (1.0 + ca) * (1.0 + cb)).abs() < 1e-15);
    }
    for &v in &[0.2, 1.0, 2.5] {
        let z = Complex64::from_polar(1.3, v);
        let w = winding_probs_halfplane(z, z, Anchors::standard()).unwrap();
        assert!((w.p_ab - (0.5 * v).cos().powi(2)).abs() < 1e-8);
        assert!(w.p_a.abs() < 1e-8 && w.p_b.abs() < 1e-8);
    }
}

#[test]
fn crossing_symmetry_of_the_winding_solution() {
    for i in 1..=9 {
        let s = 0.1 * i as f64;
        let lhs = h_general_product(s, 1.0, 1.0, 1.0, 0.0).unwrap();
        let rhs = xing_sym_rhs(s, 1.0, 1.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "σ={s}: {lhs} vs {rhs}");
    }
}

#[test]
fn winding_matches_linear_system() {
    let za = Complex64::from_polar(1.0, PI / 3.0);
    let zb = Complex64::from_polar(2.0, PI / 4.0);
    let (va, vb) = (PI / 3.0, PI / 4.0);
    let (ra, rb) = (1.0f64, 2.0f64);
    let sigma = (ra * ra - 2.0 * ra * rb * (va - vb).cos() + rb * rb)
        / (ra * ra - 2.0 * ra * rb * (va + vb).cos() + rb * rb);
    assert!((sigma - sigma_halfplane(za, zb)).abs() < 1e-14);
    let ab_twist = va.cos() * vb.cos() + va.sin() * vb.sin() * k_oracle(sigma);
    let m = Matrix4::new(
        1.0, 1.0, 1.0, 1.0, //
        1.0, 1.0, -1.0, -1.0, //
        1.0, -1.0, 1.0, -1.0, //
        1.0, -1.0, -1.0, 1.0,
    );
    let rhs = Vector4::new(1.0, va.cos(), vb.cos(), ab_twist);
    let sol = m.lu().solve(&rhs).unwrap();
    let w = winding_probs(va, vb, sigma).unwrap();
    let got = w.as_array();
    for i in 0..4 {
        assert!((got[i] - sol[i]).abs() < 1e-11, "bin {i}: {} vs {}", got[i], sol[i]);
    }
    assert!((pll_halfplane(za, zb).unwrap() - sol[0]).abs() < 1e-11);
    let via_coords = winding_probs_halfplane(za, zb, Anchors::standard()).unwrap();
    assert!((via_coords.p_ab - sol[0]).abs() < 1e-11);
}

#[test]
fn h_general_limits() {
    assert!((h_general(1.0 - 1e-10, 3.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-8);
    assert!(h_general(1.0, 1.0, 0.5, 2.0).unwrap_err().is_domain());
    let a = h_general(1.0 - 1e-6, 1.0, 0.0, 1.0).unwrap();
    let b = h_general(1.0 - 1e-9, 1.0, 0.0, 1.0).unwrap();
    assert!(b > 50.0 * a);
    assert!(winding_probs(1.0, 1.0, 1.2).unwrap_err().is_domain());
}
