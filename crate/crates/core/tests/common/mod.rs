//! Independent reference computations shared by the integration tests and
//! the acceptance target. Nothing here calls into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Kernel values from an arbitrary-precision evaluation, rounded to the
/// nearest double, as `(t, x1, x2, H, value)`.
pub const KERNEL_FROZEN: [(f64, f64, f64, f64, f64); 3] = [
    (1.0, 0.2, 0.4, 0.75, 0.519_708_191_719_616_9),
    (1.0, 0.5, 0.51, 0.75, 1.105_528_323_201_226),
    (0.6, 0.1, 0.3, 0.75, 0.494_431_466_946_351_15),
];

/// `C_H^Z` from an arbitrary-precision evaluation, as `(H, value)`.
pub const CHZ_FROZEN: [(f64, f64); 3] = [
    (0.6, 0.047_915_610_767_686_745),
    (0.75, 0.072_276_572_924_505_14),
    (0.9, 0.051_788_118_694_047_59),
];

/// Split-mix finalizer written with 128-bit intermediates reduced mod 2^64.
pub fn splitmix_oracle(master: u64, index: u64) -> u64 {
    const M: u128 = 1 << 64;
    let gamma: u128 = 0x9E37_79B9_7F4A_7C15;
    let mut z: u128 = (master as u128 + (index as u128 + 1) * gamma % M) % M;
    z = ((z ^ (z >> 30)) * 0xBF58_476D_1CE4_E5B9u128) % M;
    z = ((z ^ (z >> 27)) * 0x94D0_49BB_1331_11EBu128) % M;
    (z ^ (z >> 31)) as u64
}

/// Largest `k` with `k^q <= N^(q-p)`, that is `⌊N^{1-p/q}⌋`, in exact integer arithmetic.
pub fn floor_root_oracle(n: u64, p: u32, q: u32) -> u64 {
    let target = (n as u128)
        .checked_pow(q - p)
        .expect("N^(q-p) fits in u128");
    let fits = |k: u64| (k as u128).checked_pow(q).is_some_and(|v| v <= target);
    let (mut lo, mut hi) = (1u64, n);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `(N, p, q)` triples for `δ = p / q`, chosen to include exact perfect powers
/// and values just below an integer.
pub const DECELERATION_TABLE: [(u64, u32, u32); 20] = [
    (1024, 1, 2),
    (1000, 1, 2),
    (4096, 1, 2),
    (16384, 1, 2),
    (10000, 1, 2),
    (1000, 2, 3),
    (1000, 1, 3),
    (4096, 2, 3),
    (512, 2, 5),
    (2048, 2, 5),
    (8192, 3, 5),
    (1024, 4, 5),
    (16384, 4, 5),
    (100, 1, 2),
    (6561, 3, 4),
    (65536, 1, 4),
    (3000, 7, 10),
    (8192, 9, 10),
    (250, 1, 3),
    (4095, 1, 2),
];

/// Tanh-sinh rule on `[a, b]` for integrands given as a function of
/// `(u, u - a, b - u)`, so endpoint distances never suffer cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let step = 1.0 / 128.0;
    let half = 0.5 * (b - a);
    let mut total = 0.0;
    let mut k: i64 = -(6.5 / step) as i64;
    while (k as f64) * step <= 6.5 {
        let s = k as f64 * step;
        let y = 0.5 * PI * s.sinh();
        let from_a = (b - a) / (1.0 + (-2.0 * y).exp());
        let from_b = (b - a) / (1.0 + (2.0 * y).exp());
        let w = half * 0.5 * PI * s.cosh() / y.cosh().powi(2);
        if from_a > 0.0 && from_b > 0.0 && w > 0.0 {
            let v = f(a + from_a, from_a, from_b);
            if v.is_finite() {
                total += w * v;
            }
        }
        k += 1;
    }
    total * step
}

/// `C_H^Z` via Lanczos-free log-gamma: Stirling series after shifting the argument.
pub fn chz_oracle(h: f64) -> f64 {
    fn ln_gamma(x: f64) -> f64 {
        let mut shift = 0.0;
        let mut z = x;
        while z < 20.0 {
            shift -= z.ln();
            z += 1.0;
        }
        let z2 = z * z;
        shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * z)
            - 1.0 / (360.0 * z * z2)
            + 1.0 / (1260.0 * z2 * z2 * z)
            - 1.0 / (1680.0 * z2 * z2 * z2 * z)
    }
    let beta = (ln_gamma(1.0 - h) + ln_gamma(h / 2.0) - ln_gamma(1.0 - h / 2.0)).exp();
    (2.0 * h * (2.0 * h - 1.0)).sqrt() / (2.0 * beta)
}

/// Kernel by direct tanh-sinh quadrature of the defining integral.
pub fn kernel_oracle(t: f64, x1: f64, x2: f64, h: f64) -> f64 {
    if x1 <= 0.0 || x2 <= 0.0 || x1 >= t || x2 >= t {
        return 0.0;
    }
    let a = 0.5 * h - 1.0;
    let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let inner = tanh_sinh(
        |u, du, _| u.powf(h) * du.powf(a) * (du + (hi - lo)).powf(a),
        hi,
        t,
    );
    chz_oracle(h) * (x1 * x2).powf(-0.5 * h) * inner
}

/// Classical RK4 for `x' = g(x)` on `[0, 1]` with `steps` steps.
pub fn rk4<G: Fn(f64) -> f64>(g: G, x0: f64, steps: usize) -> Vec<f64> {
    let dt = 1.0 / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(x);
    for _ in 0..steps {
        let k1 = g(x);
        let k2 = g(x + 0.5 * dt * k1);
        let k3 = g(x + 0.5 * dt * k2);
        let k4 = g(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push(x);
    }
    out
}

/// Closed-form covariance of a process with `E|Z(t)-Z(s)|² = |t-s|^{2H}` and `Var Z(1) = 1`.
pub fn covariance_closed_form(h: f64, s: f64, t: f64) -> f64 {
    0.5 * (s.powf(2.0 * h) + t.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
}
