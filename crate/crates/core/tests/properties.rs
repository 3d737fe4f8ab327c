use proptest::collection::vec;
use proptest::prelude::*;
use rblab_core::estimators::{
    decelerated_w, deceleration_params, estimate_diffusion, estimate_lambda_known,
    riemann_drift_sums, two_variation, w_statistic, Interval, WForm,
};
use rblab_core::harness::{fit_loglog_slope, seed_for_replication, CellStats};
use rblab_core::noise::{
    FbmSpec, HurstParam, NoiseGenerator, NoiseSpec, RosenblattSpec, SynthesisMethod,
};
use rblab_core::sde::{downsample, euler_maruyama, DriftPoly, ModelSpec, NoiseModel};
use rblab_core::stats::skewness;
use rblab_core::SamplePath;

fn h(v: f64) -> HurstParam {
    HurstParam::new(v).unwrap()
}

/// A random walk with `2^k` steps.
fn arb_path() -> impl Strategy<Value = SamplePath> {
    (3u32..9).prop_flat_map(|k| {
        vec(-1.0f64..1.0, 1usize << k).prop_map(|inc| {
            let mut v = Vec::with_capacity(inc.len() + 1);
            let mut x = 0.0;
            v.push(x);
            for d in inc {
                x += d;
                v.push(x);
            }
            SamplePath::new(v).unwrap()
        })
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hurst_estimate_is_affine_invariant(path in arb_path(), c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], b in -10.0f64..10.0) {
        prop_assume!(estimate_diffusion(&path).is_ok());
        let base = estimate_diffusion(&path).unwrap();
        let moved = estimate_diffusion(&path.affine(c, b).unwrap()).unwrap();
        prop_assert!((base.h_hat - moved.h_hat).abs() <= 1e-12 * (1.0 + base.h_hat.abs()) + 1e-12);
        prop_assert!(close(moved.sigma_hat, c.abs() * base.sigma_hat, 1e-11));
    }

    #[test]
    fn w_is_additive_over_the_halves(path in arb_path(), hv in 0.55f64..0.95, sigma in 0.1f64..5.0, d in 0.1f64..1.5) {
        let first = w_statistic(&path, Interval::FirstHalf, h(hv), sigma, d).unwrap();
        let second = w_statistic(&path, Interval::SecondHalf, h(hv), sigma, d).unwrap();
        let full = w_statistic(&path, Interval::Full, h(hv), sigma, d).unwrap();
        prop_assert_eq!(full, first + second);
    }

    #[test]
    fn two_variation_is_bounded_below(path in arb_path(), hv in 0.51f64..0.99) {
        prop_assert!(two_variation(&path, h(hv)).unwrap().v_n >= -1.0);
    }

    #[test]
    fn decelerated_w_with_k_one_is_the_plain_statistic(path in arb_path(), hv in 0.55f64..0.95, d in 0.2f64..1.2) {
        let n = path.n_steps();
        let mut params = deceleration_params(n, 0.5).unwrap();
        params.k = 1;
        params.n_n = n;
        params.h_n = 1.0 / n as f64;
        let plain = w_statistic(&path, Interval::Full, h(hv), 1.0, d).unwrap();
        let dec = decelerated_w(&path, Interval::Full, &params, h(hv), 1.0, d, WForm::Plain).unwrap();
        prop_assert!(close(plain, dec, 1e-10) || (plain - dec).abs() < 1e-12);
    }

    #[test]
    fn least_squares_solves_the_normal_equation(path in arb_path(), hv in 0.55f64..0.95, sigma in 0.1f64..3.0, d in 0.2f64..1.2) {
        let drift = DriftPoly::new(vec![0.3, -1.0]).unwrap();
        let est = match estimate_lambda_known(&path, &drift, h(hv), sigma, d) {
            Ok(e) => e,
            Err(_) => return Ok(()),
        };
        let z = est.regressor;
        let u = est.response;
        let residual = z[0] * (u[0] - est.lambda_hat * z[0]) + z[1] * (u[1] - est.lambda_hat * z[1]);
        let scale = z[0].abs() * u[0].abs() + z[1].abs() * u[1].abs() + 1e-300;
        prop_assert!(residual.abs() <= 1e-12 * scale);
        let (z0, z1) = riemann_drift_sums(&path, &drift).unwrap();
        prop_assert_eq!([z0, z1], z);
    }

    #[test]
    fn rmse_decomposes_into_bias_and_variance(values in vec(-100.0f64..100.0, 2..200), truth in -50.0f64..50.0) {
        let s = CellStats::compute(&values, truth);
        let var = CellStats::variance_of(&values);
        let lhs = s.rmse * s.rmse;
        let rhs = s.bias * s.bias + var;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs));
        prop_assert!(s.q1 <= s.median && s.median <= s.q3);
    }

    #[test]
    fn summaries_ignore_the_order_of_results(mut values in vec(-10.0f64..10.0, 2..100), truth in -5.0f64..5.0, seed in any::<u64>()) {
        let a = CellStats::compute(&values, truth);
        let k = (seed % values.len() as u64) as usize;
        values.rotate_left(k);
        values.reverse();
        let b = CellStats::compute(&values, truth);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn skewness_flips_sign_under_reflection(values in vec(-10.0f64..10.0, 3..50)) {
        let neg: Vec<f64> = values.iter().map(|v| -v).collect();
        prop_assert!((skewness(&values) + skewness(&neg)).abs() <= 1e-9);
    }

    #[test]
    fn power_laws_have_their_exponent_as_slope(c in 0.01f64..100.0, a in -2.0f64..2.0) {
        let pts: Vec<(usize, f64)> = [128usize, 512, 2048, 8192].iter().map(|&n| (n, c * (n as f64).powf(-a))).collect();
        prop_assert!((fit_loglog_slope(&pts).unwrap() + a).abs() < 1e-10);
    }

    #[test]
    fn replication_seeds_are_deterministic(master in any::<u64>(), index in any::<u64>()) {
        prop_assert_eq!(seed_for_replication(master, index), seed_for_replication(master, index));
    }
}

#[test]
fn linear_path_gives_unit_hurst_and_diffusion() {
    for k in 2..16 {
        let n = 1usize << k;
        let path = SamplePath::new((0..=n).map(|i| i as f64 / n as f64).collect()).unwrap();
        let est = estimate_diffusion(&path).unwrap();
        assert!(
            (est.h_hat - 1.0).abs() <= 4.0 * f64::EPSILON,
            "N = {n}: {}",
            est.h_hat
        );
        assert!(
            (est.sigma_hat - 1.0).abs() <= 64.0 * f64::EPSILON,
            "N = {n}: {}",
            est.sigma_hat
        );
    }
    for n in [6usize, 10, 100, 1000] {
        let path = SamplePath::new((0..=n).map(|i| i as f64 / n as f64).collect()).unwrap();
        let est = estimate_diffusion(&path).unwrap();
        assert!((est.h_hat - 1.0).abs() < 1e-12);
        assert!((est.sigma_hat - 1.0).abs() < 1e-12);
    }
}

#[test]
fn constant_drift_without_noise_recovers_lambda_exactly() {
    let one = DriftPoly::new(vec![1.0]).unwrap();
    for lambda in [5.0, -2.0, 0.75, 3.0] {
        let model = ModelSpec {
            x0: 0.5,
            lambda,
            sigma: 0.0,
            drift: one.clone(),
            noise: NoiseModel::Rosenblatt {
                h: h(0.75),
                inner_ratio: 2,
                method: SynthesisMethod::WickSquare,
            },
            fine_steps: 4096,
        };
        let noise = NoiseGenerator::new(&model.noise_spec(1)).unwrap().sample(1);
        let sol = euler_maruyama(&model, &noise).unwrap();
        for n in [64usize, 256, 1024, 4096] {
            let p = downsample(&sol.solution, n).unwrap();
            let est = estimate_lambda_known(&p, &one, h(0.75), 0.0, 0.65).unwrap();
            assert_eq!(est.lambda_hat, lambda, "N = {n}");
        }
    }
}

#[test]
fn synthesis_is_deterministic_in_the_seed() {
    let specs = [
        NoiseSpec::Rosenblatt(RosenblattSpec {
            h: h(0.7),
            n_steps: 64,
            inner_resolution: 256,
            seed: 0,
            method: SynthesisMethod::WickSquare,
        }),
        NoiseSpec::Rosenblatt(RosenblattSpec {
            h: h(0.8),
            n_steps: 32,
            inner_resolution: 128,
            seed: 0,
            method: SynthesisMethod::KernelGrid,
        }),
        NoiseSpec::Fbm(FbmSpec {
            h: h(0.65),
            n_steps: 100,
            seed: 0,
        }),
    ];
    for spec in &specs {
        let g = NoiseGenerator::new(spec).unwrap();
        assert_eq!(g.sample(17), g.sample(17));
        assert_ne!(g.sample(17), g.sample(18));
        let again = NoiseGenerator::new(spec).unwrap();
        assert_eq!(g.sample(17), again.sample(17));
        assert_eq!(g.sample(17).values()[0], 0.0);
    }
}
