//! Property tests for the library's structural invariants.

use proptest::prelude::*;

use emproc::chaining::{dyadic_blocks, z_statistic};
use emproc::distributions::DistributionModel;
use emproc::edf::{build_edf, weighted_sup_norm};
use emproc::functionals::{risk_one_sided, v_statistic, RiskParams, VKernel};
use emproc::weights::WeightFunction;

fn arb_model() -> impl Strategy<Value = DistributionModel> {
    prop_oneof![
        Just(DistributionModel::Uniform01),
        Just(DistributionModel::StdNormal),
        // x0 >= 1 keeps the tail mass (c1+c2) x0^-alpha below 1
        (1.0f64..5.0, 1.0f64..2.0).prop_map(|(alpha, x0)| {
            DistributionModel::pareto(alpha, x0, 0.2, 0.3).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn galois_connection(model in arb_model(), u in 1e-9f64..1.0, x in -50.0f64..50.0) {
        let lhs = model.quantile_left(u) <= x;
        let rhs = u <= model.cdf(x);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn edf_eval_matches_counting(sample in prop::collection::vec(-100.0f64..100.0, 1..60),
                                 x in -120.0f64..120.0) {
        let edf = build_edf(&sample).unwrap();
        let count = sample.iter().filter(|&&v| v <= x).count();
        prop_assert_eq!(edf.eval(x), count as f64 / sample.len() as f64);
    }

    #[test]
    fn edf_quantile_galois(sample in prop::collection::vec(-10.0f64..10.0, 1..40),
                           y in 0.01f64..1.0, x in -12.0f64..12.0) {
        let edf = build_edf(&sample).unwrap();
        // quantile_left(y) <= x  <=>  y <= F_n(x)
        prop_assert_eq!(edf.quantile_left(y) <= x, y <= edf.eval(x));
    }

    #[test]
    fn sup_norm_dominates_probes(seed in any::<u64>(), n in 1usize..80) {
        let model = DistributionModel::StdNormal;
        let weight = WeightFunction::poly(1.0).unwrap();
        let sample = model.sample_iid(n, seed).unwrap();
        let edf = build_edf(&sample).unwrap();
        let sup = weighted_sup_norm(&edf, &model, &weight, 8);
        for k in 0..200 {
            let x = -8.0 + 16.0 * k as f64 / 199.0;
            let probe = (edf.eval(x) - model.cdf(x)).abs() * weight.eval(x);
            prop_assert!(sup >= probe - 1e-12);
        }
    }

    #[test]
    fn v_statistic_half_squared_diff_is_biased_variance(
        sample in prop::collection::vec(-50.0f64..50.0, 1..50)
    ) {
        let edf = build_edf(&sample).unwrap();
        let n = sample.len() as f64;
        let mean = sample.iter().sum::<f64>() / n;
        let var = sample.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let v = v_statistic(&edf, &VKernel::HalfSquaredDiff);
        prop_assert!((v - var).abs() <= 1e-12 * var.abs().max(1.0));
    }

    #[test]
    fn risk_cash_and_scale(sample in prop::collection::vec(-20.0f64..20.0, 1..40),
                           m in -5.0f64..5.0, lambda in 0.0f64..4.0,
                           p in 1.0f64..4.0, a in 0.0f64..1.0) {
        let params = RiskParams::new(p, a).unwrap();
        let base = risk_one_sided(&sample, &params).unwrap();
        let shifted: Vec<f64> = sample.iter().map(|x| x + m).collect();
        let scaled: Vec<f64> = sample.iter().map(|x| lambda * x).collect();
        let rs = risk_one_sided(&shifted, &params).unwrap();
        let rl = risk_one_sided(&scaled, &params).unwrap();
        prop_assert!((rs - (base + m)).abs() <= 1e-9 * base.abs().max(1.0));
        prop_assert!((rl - lambda * base).abs() <= 1e-9 * (lambda * base).abs().max(1.0));
    }

    #[test]
    fn z_window_subadditivity(seed in any::<u64>(), p in 0usize..20, q in 1usize..30,
                              extra in 1usize..30, t in 0.0f64..1.0) {
        let model = DistributionModel::Uniform01;
        let u = model.sample_iid(p + q + extra, seed).unwrap();
        let whole = z_statistic(&u, p, q + extra, t).unwrap();
        let first = z_statistic(&u, p, q, t).unwrap();
        let second = z_statistic(&u, p + q, extra, t).unwrap();
        prop_assert!(whole <= first + second + 1e-9);
    }

    #[test]
    fn dyadic_blocks_reconstruct(n in 1usize..100_000) {
        let d = dyadic_blocks(n);
        let total: usize = d.blocks.iter().map(|&(_, len)| len).sum();
        prop_assert_eq!(total, n);
        let base = 1usize << d.n_exp;
        prop_assert!(base <= n && n < 2 * base);
        for eb in d.extra_blocks() {
            prop_assert_eq!(eb.start, base + eb.b * (1usize << eb.j));
            prop_assert!(eb.b < (1usize << (d.n_exp - eb.j)));
        }
    }
}
