//! Numerical integration: globally adaptive Gauss–Kronrod and Gauss rules
//! built by the Golub–Welsch eigenvalue method.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 200,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let s = f(c - h * x) + f(c + h * x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive 7/15-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// error falls below `max(abs_tol, rel_tol * |value|)` or the subdivision
/// budget is exhausted; the best available estimate is returned either way.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        };
    }
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 0;
    while total_err > opts.abs_tol.max(opts.rel_tol * total.abs())
        && subdivisions < opts.max_subdivisions
    {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
    // Re-add from the leaves to shed accumulated cancellation error.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    QuadResult {
        value,
        error,
        subdivisions,
    }
}

/// Nodes and weights of a Gauss rule on some interval.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Jacobi rule for the weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
    pub fn jacobi(n: usize, alpha: f64, beta: f64) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        assert!(
            alpha > -1.0 && beta > -1.0,
            "Jacobi exponents must exceed -1"
        );
        let ab = alpha + beta;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let k = i as f64;
            let diag = if i == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
            };
            jac[(i, i)] = diag;
            if i + 1 < n {
                let m = k + 1.0;
                let s = 2.0 * m + ab;
                let off = (4.0 * m * (m + alpha) * (m + beta) * (m + ab)
                    / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt();
                jac[(i, i + 1)] = off;
                jac[(i + 1, i)] = off;
            }
        }
        let mu0 =
            ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
                - ln_gamma(ab + 2.0))
            .exp();
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn legendre(n: usize) -> Self {
        Self::jacobi(n, 0.0, 0.0)
    }

    /// Maps a Legendre rule from `[-1, 1]` onto `[a, b]`.
    pub fn legendre_on(n: usize, a: f64, b: f64) -> Self {
        let base = Self::legendre(n);
        let half = 0.5 * (b - a);
        Self {
            nodes: base.nodes.iter().map(|x| a + half * (x + 1.0)).collect(),
            weights: base.weights.iter().map(|w| w * half).collect(),
        }
    }

    /// Rule for `∫_0^c θ^p g(θ) dθ`; the weight `θ^p` is absorbed into the weights.
    pub fn left_singular_on(n: usize, p: f64, c: f64) -> Self {
        let base = Self::jacobi(n, 0.0, p);
        // θ = c (1 + x) / 2, so θ^p dθ = (c/2)^(p+1) (1 + x)^p dx.
        let scale = (0.5 * c).powf(p + 1.0);
        Self {
            nodes: base.nodes.iter().map(|x| 0.5 * c * (x + 1.0)).collect(),
            weights: base.weights.iter().map(|w| w * scale).collect(),
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_handles_smooth_integrands() {
        let r = integrate(|x: f64| x.exp(), 0.0, 1.0, QuadOptions::default());
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-14);
        let r = integrate(
            |x: f64| 1.0 / (1.0 + 25.0 * x * x),
            -1.0,
            1.0,
            QuadOptions::default(),
        );
        assert_relative_eq!(r.value, 0.4 * 5f64.atan(), max_relative = 1e-10);
    }

    #[test]
    fn kronrod_refines_near_endpoint_singularity() {
        let opts = QuadOptions {
            rel_tol: 1e-10,
            ..Default::default()
        };
        let r = integrate(|x: f64| x.powf(-0.6), 0.0, 1.0, opts);
        assert_relative_eq!(r.value, 2.5, max_relative = 1e-8);
        assert!(r.subdivisions > 5);
    }

    #[test]
    fn legendre_is_exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussRule::legendre_on(5, 0.0, 2.0);
        for p in 0..10 {
            let exact = 2f64.powi(p + 1) / (p + 1) as f64;
            assert_relative_eq!(rule.apply(|x| x.powi(p)), exact, max_relative = 1e-13);
        }
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn singular_rule_integrates_power_weights_exactly() {
        let p = -0.625;
        let c = 0.5;
        let rule = GaussRule::left_singular_on(6, p, c);
        for k in 0..12 {
            let e = p + k as f64 + 1.0;
            let exact = c.powf(e) / e;
            assert_relative_eq!(rule.apply(|x| x.powi(k)), exact, max_relative = 1e-12);
        }
        assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < c));
    }
}
