use std::f64::consts::PI;

use proptest::prelude::*;
use twistloop::geometry::{
    cross_ratio, sigma_strip, strip_from_halfplane, winding_coords, Anchors, Point,
};
use twistloop::Complex64;

#[derive(Debug, Clone, Copy)]
struct Mobius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Mobius {
    fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
    fn apply_real(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }
    fn pole(&self) -> f64 {
        -self.d / self.c
    }
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

fn mobius() -> impl Strategy<Value = Mobius> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_filter("positive determinant", |(a, b, c, d)| a * d - b * c > 0.2)
        .prop_map(|(a, b, c, d)| Mobius { a, b, c, d })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn winding_coords_are_mobius_invariant(
        za in upper(),
        zb in upper(),
        x1 in -2.0..0.0f64,
        len in 0.3..3.0f64,
        m in mobius(),
    ) {
        let x2 = x1 + len;
        let p = m.pole();
        prop_assume!(!(p > x1 - 0.05 && p < x2 + 0.05));
        prop_assume!(m.c.abs() > 1e-3 || m.d.abs() > 1e-3);
        let before = winding_coords(za, zb, Anchors::new(x1, x2).unwrap()).unwrap();
        let anchors = Anchors::new(m.apply_real(x1), m.apply_real(x2)).unwrap();
        let after = winding_coords(m.apply(za), m.apply(zb), anchors).unwrap();
        prop_assert!(close(before.lambda, after.lambda, 1e-10), "λ {} vs {}", before.lambda, after.lambda);
        prop_assert!(close(before.mu, after.mu, 1e-10));
        prop_assert!(close(before.nu, after.nu, 1e-10), "ν {} vs {}", before.nu, after.nu);
        prop_assert!(close(before.sigma, after.sigma, 1e-10));
        prop_assert!(close(before.rho_tau, after.rho_tau, 1e-10));
    }

    #[test]
    fn sending_an_anchor_to_infinity(za in upper(), zb in upper(), x1 in -2.0..0.0f64, len in 0.3..3.0f64) {
        let x2 = x1 + len;
        // z ↦ -1/(z - x2) fixes H and sends x2 to ∞
        let m = Mobius { a: 0.0, b: -1.0, c: 1.0, d: -x2 };
        let before = winding_coords(za, zb, Anchors::new(x1, x2).unwrap()).unwrap();
        let after = winding_coords(
            m.apply(za),
            m.apply(zb),
            Anchors::to_infinity(m.apply_real(x1)).unwrap(),
        )
        .unwrap();
        prop_assert!(close(before.lambda, after.lambda, 1e-10));
        prop_assert!(close(before.mu, after.mu, 1e-10));
        prop_assert!(close(before.nu, after.nu, 1e-10));
        prop_assert!(close(before.sigma, after.sigma, 1e-10));
    }

    #[test]
    fn cross_ratio_expressions_match_strip(za in upper(), zb in upper(), x1 in -2.0..0.0f64, len in 0.3..3.0f64) {
        let anchors = Anchors::new(x1, x1 + len).unwrap();
        let w = winding_coords(za, zb, anchors).unwrap();
        let sa = strip_from_halfplane(za, anchors).unwrap();
        let sb = strip_from_halfplane(zb, anchors).unwrap();
        prop_assert!((w.lambda - sa.im.cos()).abs() < 1e-12);
        prop_assert!((w.mu - sb.im.cos()).abs() < 1e-12);
        prop_assert!(close(w.nu, (sb.re - sa.re).cosh(), 1e-12));
        prop_assert!((w.sigma - sigma_strip(sa, sb)).abs() < 1e-12);
        prop_assert!((w.rho - w.lambda * w.mu).abs() < 1e-15);
        let root = ((1.0 - w.lambda * w.lambda) * (1.0 - w.mu * w.mu)).sqrt();
        prop_assert!((w.rho_tau - root).abs() < 1e-12);
        if let Some(tau) = w.tau {
            prop_assert!(close(tau * w.rho, w.rho_tau, 1e-12));
            prop_assert!(close(tau, sa.im.tan() * sb.im.tan(), 1e-9));
        }
        prop_assert!((-1.0..=1.0).contains(&w.lambda) && (-1.0..=1.0).contains(&w.mu));
        prop_assert!(w.nu >= 1.0);
        prop_assert!((0.0..=1.0).contains(&w.sigma));
        prop_assert!(sa.im > 0.0 && sa.im < PI);
    }

    #[test]
    fn cross_ratio_is_mobius_invariant(
        z in proptest::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 4),
        m in mobius(),
    ) {
        let z: Vec<Complex64> = z.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let x = cross_ratio(z[0].into(), z[1].into(), z[2].into(), z[3].into()).unwrap();
        let y = cross_ratio(
            m.apply(z[0]).into(),
            m.apply(z[1]).into(),
            m.apply(z[2]).into(),
            m.apply(z[3]).into(),
        )
        .unwrap();
        prop_assert!((x - y).norm() < 1e-8 * x.norm().max(1.0));
    }
}

#[test]
fn sigma_example_configuration() {
    let za = Complex64::from_polar(1.0, PI / 3.0);
    let zb = Complex64::from_polar(2.0, PI / 4.0);
    let w = winding_coords(za, zb, Anchors::standard()).unwrap();
    let strip = sigma_strip(
        Complex64::new(0.0, PI / 3.0),
        Complex64::new(2f64.ln(), PI / 4.0),
    );
    assert!((w.sigma - strip).abs() < 1e-12);
    assert!((w.v_a - PI / 3.0).abs() < 1e-15);
    assert!((w.v_b - PI / 4.0).abs() < 1e-15);
}

#[test]
fn p_max_configuration_has_cross_ratio_two() {
    let x = cross_ratio(
        Complex64::new(0.0, 0.0).into(),
        Point::Infinity,
        Complex64::new(-1.0, 0.0).into(),
        Complex64::new(1.0, 0.0).into(),
    )
    .unwrap();
    assert_eq!(x, Complex64::new(2.0, 0.0));
}
