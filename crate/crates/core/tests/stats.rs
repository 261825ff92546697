use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use twistloop::stats::*;

fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64]) -> Vec<u64> {
    let mut left = n;
    let mut mass = 1.0;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(left);
            break;
        }
        let k = Binomial::new(left, (p / mass).min(1.0)).unwrap().sample(rng);
        out.push(k);
        left -= k;
        mass -= p;
    }
    out
}

fn null_p_values(reps: usize, seed: u64) -> Vec<f64> {
    let probs = [0.4, 0.3, 0.2, 0.1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..reps)
        .map(|_| {
            let n = 2000;
            let obs = multinomial(&mut rng, n, &probs);
            chi_square_multinomial(&obs, &probs, n).unwrap().p_value
        })
        .collect()
}

#[test]
fn p_values_uniform_under_the_null() {
    // 1% critical value of the KS distance at 1000 draws is 1.63/√1000
    let d = ks_uniform(&null_p_values(1000, 1));
    assert!(d < 1.63 / 1000f64.sqrt(), "{d}");
    let d = ks_uniform(&null_p_values(20000, 2));
    assert!(d < 0.02, "{d}");
}

#[test]
fn five_percent_point_against_statrs() {
    let p = chi_square_sf(7.81, 3).unwrap();
    let oracle = 1.0 - ChiSquared::new(3.0).unwrap().cdf(7.81);
    assert!((p - oracle).abs() < 1e-12);
    assert!((p - 0.05).abs() < 1e-3);
}

#[test]
fn wilson_coverage_near_the_boundary() {
    let (p, n) = (0.02, 60);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let reps = 20000;
    let covered = (0..reps)
        .filter(|_| {
            let k = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
            let (lo, hi) = wilson_interval(k, n, WILSON_Z95).unwrap();
            lo <= p && p <= hi
        })
        .count();
    let rate = covered as f64 / reps as f64;
    assert!(rate > 0.9, "{rate}");
}

#[test]
fn wilson_contains_estimate() {
    for (k, n) in [(0u64, 10u64), (3, 10), (10, 10), (500, 20000)] {
        let (lo, hi) = wilson_interval(k, n, WILSON_Z95).unwrap();
        let p = k as f64 / n as f64;
        assert!(lo <= p + 1e-15 && p <= hi + 1e-15);
    }
    assert!(wilson_interval(3, 2, WILSON_Z95).is_err());
}

#[test]
fn count_mismatch_is_a_contract_error() {
    assert!(chi_square_multinomial(&[1, 2, 3, 4], &[0.25; 4], 11).is_err());
    assert!(chi_square_multinomial(&[25, 25, 25, 25], &[0.3, 0.3, 0.3, 0.3], 100).is_err());
}

proptest! {
    #[test]
    fn sf_matches_statrs(chi2 in 0.0f64..60.0, dof in 1usize..12) {
        let p = chi_square_sf(chi2, dof).unwrap();
        let oracle = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(chi2);
        prop_assert!((p - oracle).abs() < 1e-10, "{p} vs {oracle}");
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn p_value_decreases_with_chi2(a in 0.0f64..40.0, b in 0.0f64..40.0, dof in 1usize..8) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(chi_square_sf(lo, dof).unwrap() >= chi_square_sf(hi, dof).unwrap());
    }

    #[test]
    fn z_scores_match_counts(o in proptest::array::uniform4(100u64..1000)) {
        let n: u64 = o.iter().sum();
        let probs = [0.25; 4];
        let r = chi_square_multinomial(&o, &probs, n).unwrap();
        let e = n as f64 / 4.0;
        let chi2: f64 = o.iter().map(|&x| (x as f64 - e).powi(2) / e).sum();
        prop_assert!((r.chi2 - chi2).abs() < 1e-9 * chi2.max(1.0));
        let zsq: f64 = r.z_scores.iter().flatten().map(|z| z * z * 0.75).sum();
        prop_assert!((zsq - chi2).abs() < 1e-9 * chi2.max(1.0));
    }
}
