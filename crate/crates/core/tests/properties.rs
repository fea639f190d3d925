use proptest::prelude::*;

use lsmix_core::approx::{
    bv_coefficient_bound_check, compressed_approx, compressed_error_bound, linear_approx,
    linear_error_bound, SampledFunction,
};
use lsmix_core::collections::{all_subsets, binomial_subsets};
use lsmix_core::design::standard_basis;
use lsmix_core::mixer::{mix, mix_with, Exponent};
use lsmix_core::model::Subspace;
use lsmix_core::shrinkage::{
    shrink_binomial_prior, shrink_known_variance, shrink_unknown_variance,
};
use lsmix_core::tuning::{beta_max_theorem1, check_theorem1_conditions, phi, phi_inverse};
use lsmix_core::vector::{dist_sq, norm_sq};
use lsmix_core::{DesignFamily, InnerProduct, LRule, MixConfig, VarianceMode, Vector};

fn random_design(n: usize, p: usize, seed: &[f64]) -> DesignFamily {
    let cols = (0..p)
        .map(|j| {
            Vector::new(
                (0..n)
                    .map(|i| seed[(i * 7 + j * 13) % seed.len()] + (i == j) as u8 as f64)
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    DesignFamily::new(cols, InnerProduct::Euclidean).unwrap()
}

/// `Y` whose first `p` entries are `z` and whose residual has squared norm `s2 (n - p)`.
fn observation(z: &[f64], s2: f64, extra: usize) -> Vec<f64> {
    let mut y = z.to_vec();
    let r = (s2).sqrt();
    y.extend(std::iter::repeat_n(r, extra));
    y
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent_and_pythagorean(
        seed in prop::collection::vec(-1.0f64..1.0, 17),
        y in prop::collection::vec(-5.0f64..5.0, 9),
    ) {
        let d = random_design(9, 4, &seed);
        let s = Subspace::spanned_by(&d, &[0, 2, 3]).unwrap();
        let py = s.project(&y);
        let ppy = s.project(&py);
        prop_assert!(dist_sq(&py, &ppy) < 1e-18 * (1.0 + norm_sq(&y)));
        let total = norm_sq(&y);
        prop_assert!((norm_sq(&py) + s.residual_norm_sq(&y) - total).abs() < 1e-10 * (1.0 + total));
        let smaller = Subspace::spanned_by(&d, &[0, 3]).unwrap();
        prop_assert!(smaller.residual_norm_sq(&y) >= s.residual_norm_sq(&y) - 1e-10);
    }

    #[test]
    fn mixture_equals_closed_form(
        z in prop::collection::vec(-4.0f64..4.0, 1..=7),
        s2 in 0.05f64..5.0,
        beta in 0.05f64..0.5,
        alpha in prop::sample::select(vec![0.5, 1.0, 2.0]),
        b in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let p = z.len();
        let n = p + 2;
        let coll = all_subsets(standard_basis(n, p).unwrap(), alpha, b).unwrap();
        let y = observation(&z, s2, 2);
        let cfg = MixConfig::residual(beta, LRule::PerModel).unwrap();
        let m = mix(&y, &coll, &cfg).unwrap();
        prop_assert!((m.sigma2_hat - s2).abs() < 1e-12 * s2.max(1.0));
        let sh = shrink_unknown_variance(&z, m.sigma2_hat, beta, alpha, b).unwrap();
        for j in 0..p {
            prop_assert!((m.mu_hat[j] - sh.shrunk[j]).abs() < 1e-10);
        }
        prop_assert!(m.mu_hat[p..].iter().all(|v| v.abs() < 1e-12));
        let w_sum: f64 = m.weights.iter().sum();
        prop_assert!((w_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_variance_mixture_equals_closed_form(
        z in prop::collection::vec(-4.0f64..4.0, 1..=6),
        s2 in 0.2f64..3.0,
        beta in 0.1f64..0.5,
        alpha in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let p = z.len();
        let coll = all_subsets(standard_basis(p + 2, p).unwrap(), alpha, 0.0).unwrap();
        let y = observation(&z, 0.7, 2);
        let cfg = MixConfig::new(beta, LRule::PerModel, VarianceMode::Known(s2)).unwrap();
        let m = mix(&y, &coll, &cfg).unwrap();
        let sh = shrink_known_variance(&z, s2, beta, alpha).unwrap();
        for j in 0..p {
            prop_assert!((m.mu_hat[j] - sh.shrunk[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn star_distance_exponent_gives_same_weights(
        z in prop::collection::vec(-3.0f64..3.0, 2..=5),
        s2 in 0.1f64..3.0,
        beta in 0.05f64..0.3,
    ) {
        let p = z.len();
        let coll = all_subsets(standard_basis(p + 3, p).unwrap(), 1.0, 1.0).unwrap();
        let y = observation(&z, s2, 3);
        let cfg = MixConfig::residual(beta, LRule::PerModel).unwrap();
        let a = mix_with(&y, &coll, &cfg, Exponent::ProjectionNorm).unwrap();
        let b = mix_with(&y, &coll, &cfg, Exponent::StarDistance).unwrap();
        for (u, v) in a.weights.iter().zip(&b.weights) {
            prop_assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_is_scale_equivariant(
        seed in prop::collection::vec(-1.0f64..1.0, 11),
        y in prop::collection::vec(-3.0f64..3.0, 8),
        scale in 0.01f64..100.0,
    ) {
        let d = random_design(8, 3, &seed);
        let coll = all_subsets(d, 1.0, 0.5).unwrap();
        let cfg = MixConfig::residual(0.1, LRule::PerModel).unwrap();
        let a = mix(&y, &coll, &cfg).unwrap();
        let ys: Vec<f64> = y.iter().map(|v| v * scale).collect();
        let b = mix(&ys, &coll, &cfg).unwrap();
        for (u, v) in a.weights.iter().zip(&b.weights) {
            prop_assert!((u - v).abs() < 1e-9);
        }
        for (u, v) in a.mu_hat.iter().zip(b.mu_hat.iter()) {
            prop_assert!((u * scale - v).abs() < 1e-9 * scale.max(1.0) * (1.0 + u.abs()));
        }
    }

    #[test]
    fn binomial_prior_matches_enumeration(
        z in prop::collection::vec(-3.0f64..3.0, 5),
        s2 in 0.3f64..3.0,
        beta in 0.1f64..0.5,
        b in 0.0f64..2.0,
    ) {
        let coll = binomial_subsets(standard_basis(7, 5).unwrap(), b).unwrap();
        let y = observation(&z, s2, 2);
        let m = mix(&y, &coll, &MixConfig::residual(beta, LRule::PerModel).unwrap()).unwrap();
        let sh = shrink_binomial_prior(&z, m.sigma2_hat, beta, b).unwrap();
        for j in 0..5 {
            prop_assert!((m.mu_hat[j] - sh.shrunk[j]).abs() < 1e-8, "{} vs {}", m.mu_hat[j], sh.shrunk[j]);
        }
    }

    #[test]
    fn phi_round_trip(x in 1e-9f64..(1.0 - 1e-9)) {
        let y = phi(x).unwrap();
        let back = phi_inverse(y).unwrap();
        prop_assert!((phi(back).unwrap() - y).abs() <= 1e-12 * y.max(1e-3));
        prop_assert!(y > (1.0 - x) * (1.0 - x) / 4.0);
    }

    #[test]
    fn beta_max_is_admissible_and_monotone(n in 10usize..5000, frac in 0.2f64..0.9) {
        let n_star = ((n as f64 * frac) as usize).max(3);
        let b = beta_max_theorem1(n, n_star).unwrap();
        prop_assert!(b > 0.0 && b < 0.25);
        prop_assert!(check_theorem1_conditions(b, n_star, n));
        prop_assert!(!check_theorem1_conditions(b * (1.0 + 1e-6), n_star, n) || b * (1.0 + 1e-6) >= 0.25 || b > 0.2499);
        let bigger = beta_max_theorem1(n, n_star + 50).unwrap();
        prop_assert!(bigger >= b);
    }

    #[test]
    fn haar_approximation_bounds(jumps in prop::collection::vec((0.0f64..1.0, -2.0f64..2.0), 0..6)) {
        let f = SampledFunction::sample(128, |x| jumps.iter().filter(|(a, _)| x >= *a).map(|(_, h)| h).sum::<f64>() + 0.3 * x).unwrap();
        let v = f.total_variation();
        for check in bv_coefficient_bound_check(&f) {
            prop_assert!(check.holds, "level {}: {} > {}", check.level, check.abs_sum, check.bound);
        }
        for j in 0..=7 {
            let lin = linear_approx(&f, j).unwrap();
            prop_assert!(f.distance(&lin) <= linear_error_bound(v, j) + 1e-12);
            if j >= 1 {
                let c = compressed_approx(&f, j).unwrap();
                prop_assert!(f.distance(&c.function) <= compressed_error_bound(v, j) + 1e-12);
                prop_assert!(c.kept <= 1 << j);
            }
        }
    }
}
