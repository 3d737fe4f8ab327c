//! Shared fixtures for the criterion benchmarks under `benches/`.

use rblab_core::noise::{HurstParam, NoiseGenerator, NoiseSpec, RosenblattSpec, SynthesisMethod};
use rblab_core::sde::{euler_maruyama, DriftPoly, ModelSpec, NoiseModel};
use rblab_core::SamplePath;

pub fn hurst(h: f64) -> HurstParam {
    HurstParam::new(h).expect("valid Hurst parameter")
}

pub fn rosenblatt_generator(
    h: f64,
    n: usize,
    inner: usize,
    method: SynthesisMethod,
) -> NoiseGenerator {
    NoiseGenerator::new(&NoiseSpec::Rosenblatt(RosenblattSpec {
        h: hurst(h),
        n_steps: n,
        inner_resolution: inner,
        seed: 0,
        method,
    }))
    .expect("valid noise spec")
}

/// One Rosenblatt Ornstein-Uhlenbeck path with `n` steps.
pub fn rou_path(n: usize, seed: u64) -> SamplePath {
    let model = ModelSpec {
        x0: 0.5,
        lambda: 5.0,
        sigma: 1.0,
        drift: DriftPoly::new(vec![0.0, -1.0]).expect("linear drift"),
        noise: NoiseModel::Rosenblatt {
            h: hurst(0.75),
            inner_ratio: 4,
            method: SynthesisMethod::WickSquare,
        },
        fine_steps: n,
    };
    let noise = NoiseGenerator::new(&model.noise_spec(seed))
        .expect("valid noise")
        .sample(seed);
    euler_maruyama(&model, &noise)
        .expect("stable integration")
        .solution
}
