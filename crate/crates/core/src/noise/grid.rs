use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use super::{c_h_z, HurstParam, SamplePath};
use crate::error::{Error, Result};
use crate::quadrature::GaussRule;

const NODES: usize = 8;

#[derive(Clone)]
struct Node {
    theta: f64,
    weight: f64,
    kernel: Vec<Complex64>,
    kernel_sq: Vec<Complex64>,
}

/// Off-diagonal double sum `Σ_{p≠q} L_t(x_p, x_q) ΔW_p ΔW_q` over midpoint
/// Wiener cells `x_p = (p - 1/2) / M`, evaluated for every grid time at once.
///
/// Writing `Y(u) = Σ_p x_p^{-H/2} (u - x_p)_+^{H/2-1} ΔW_p` and `D(u)` for the
/// matching sum of squares, the double sum equals `C ∫_0^t u^H (Y² - D)(u) du`.
/// The `u`-integral is split at the Wiener midpoints; inside each piece `Y` is
/// a discrete convolution, so all pieces are obtained with FFTs. The
/// singular cross term on the left half of each piece uses a Gauss–Jacobi rule.
#[derive(Clone)]
pub struct KernelGrid {
    h: HurstParam,
    n_steps: usize,
    inner: usize,
    c: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    singular: Vec<Node>,
    left: Vec<Node>,
    right: Vec<Node>,
}

impl KernelGrid {
    pub fn new(h: HurstParam, n_steps: usize, inner_resolution: usize) -> Result<Self> {
        if n_steps == 0 || !inner_resolution.is_multiple_of(n_steps) {
            return Err(Error::IncompatibleGrid(format!(
                "inner resolution {inner_resolution} is not a multiple of {n_steps}"
            )));
        }
        let m = inner_resolution;
        let len = 2 * m;
        let a = 0.5 * h.value() - 1.0;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);

        let spectrum = |theta: f64, with_origin: bool, power: i32| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (j, z) in buf.iter_mut().enumerate().take(m) {
                if j == 0 && !with_origin {
                    continue;
                }
                z.re = ((j as f64 + theta) / m as f64).powf(a).powi(power);
            }
            fwd.process(&mut buf);
            buf
        };
        let make = |rule: &GaussRule, with_origin: bool, squares: bool| -> Vec<Node> {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&theta, &weight)| Node {
                    theta,
                    weight,
                    kernel: spectrum(theta, with_origin, 1),
                    kernel_sq: if squares {
                        spectrum(theta, with_origin, 2)
                    } else {
                        Vec::new()
                    },
                })
                .collect()
        };
        let singular = make(&GaussRule::left_singular_on(NODES, a, 0.5), false, false);
        let left = make(&GaussRule::legendre_on(NODES, 0.0, 0.5), false, true);
        let right = make(&GaussRule::legendre_on(NODES, 0.5, 1.0), true, true);
        Ok(Self {
            h,
            n_steps,
            inner: m,
            c: c_h_z(h),
            fwd,
            inv,
            singular,
            left,
            right,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn inner_resolution(&self) -> usize {
        self.inner
    }

    pub fn sample(&self, seed: u64) -> SamplePath {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = (self.inner as f64).sqrt().recip();
        let dw: Vec<f64> = (0..self.inner)
            .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
            .collect();
        self.path_from_increments(&dw)
    }

    /// Deterministic map from the Wiener cell increments to the path.
    pub fn path_from_increments(&self, dw: &[f64]) -> SamplePath {
        assert_eq!(dw.len(), self.inner, "one Wiener increment per inner cell");
        let m = self.inner;
        let mf = m as f64;
        let len = 2 * m;
        let hv = self.h.value();
        let a = 0.5 * hv - 1.0;
        let norm = 1.0 / len as f64;

        let mut v = vec![Complex64::new(0.0, 0.0); len];
        let mut w = vec![Complex64::new(0.0, 0.0); len];
        for p in 0..m {
            let x = (p as f64 + 0.5) / mf;
            v[p].re = x.powf(-0.5 * hv) * dw[p];
            w[p].re = x.powf(-hv) * dw[p] * dw[p];
        }
        let vr: Vec<f64> = v.iter().map(|z| z.re).collect();
        self.fwd.process(&mut v);
        self.fwd.process(&mut w);

        let mut first = vec![0.0; m];
        let mut second = vec![0.0; m];
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        let cross = 2.0 * mf.powf(-a);
        for node in &self.singular {
            for ((b, x), k) in buf.iter_mut().zip(&v).zip(&node.kernel) {
                *b = x * k;
            }
            self.inv.process(&mut buf);
            for i in 0..m {
                let u = (i as f64 + 0.5 + node.theta) / mf;
                first[i] += node.weight * u.powf(hv) * cross * vr[i] * buf[i].re * norm;
            }
        }
        let mut smooth = |nodes: &[Node], out: &mut [f64]| {
            for node in nodes {
                for (((b, x), y), (k, k2)) in buf
                    .iter_mut()
                    .zip(&v)
                    .zip(&w)
                    .zip(node.kernel.iter().zip(&node.kernel_sq))
                {
                    *b = x * k + Complex64::i() * y * k2;
                }
                self.inv.process(&mut buf);
                for i in 0..m {
                    let u = (i as f64 + 0.5 + node.theta) / mf;
                    let y = buf[i].re * norm;
                    let d = buf[i].im * norm;
                    out[i] += node.weight * u.powf(hv) * (y * y - d);
                }
            }
        };
        smooth(&self.left, &mut first);
        smooth(&self.right, &mut second);

        // Cell m (1-based) covers u in [(m - 1/2)/M, (m + 1/2)/M]; its left half
        // ends at m/M and its right half starts there.
        let r = m / self.n_steps;
        let scale = self.c / mf;
        let mut inc = vec![0.0; self.n_steps];
        for i in 0..m {
            let cell = i + 1;
            inc[cell.div_ceil(r) - 1] += scale * first[i];
            if cell < m {
                inc[cell / r] += scale * second[i];
            }
        }
        SamplePath::new(super::cumulative(inc))
            .expect("finite Wiener increments give a finite path")
    }
}
