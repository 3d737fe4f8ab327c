use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest sequence length for which the dense Cholesky fallback is attempted.
pub const DENSE_FALLBACK_LIMIT: usize = 4096;

/// Relative size of a negative circulant eigenvalue that is treated as rounding noise.
const EIGEN_TOLERANCE: f64 = 1e-10;

#[derive(Clone)]
enum Factor {
    Circulant {
        scale: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Dense {
        lower: DMatrix<f64>,
    },
}

/// Exact sampler for a stationary centered Gaussian sequence of length `n`.
///
/// Circulant embedding of size `2n` is used when every eigenvalue is
/// nonnegative; otherwise the Toeplitz covariance is factored densely.
#[derive(Clone)]
pub struct StationaryGaussian {
    n: usize,
    factor: Factor,
}

impl StationaryGaussian {
    /// `acov[k]` is the covariance at lag `k`; `acov.len()` must be `n + 1`.
    pub fn new(acov: &[f64]) -> Result<Self> {
        Self::with_fallback_limit(acov, DENSE_FALLBACK_LIMIT)
    }

    pub fn with_fallback_limit(acov: &[f64], dense_limit: usize) -> Result<Self> {
        if acov.len() < 2 {
            return Err(Error::InvalidArgument(
                "need autocovariances at lags 0..=n with n >= 1".into(),
            ));
        }
        let n = acov.len() - 1;
        let len = 2 * n;
        let mut row: Vec<Complex64> = Vec::with_capacity(len);
        row.extend(acov.iter().map(|&c| Complex64::new(c, 0.0)));
        row.extend(acov[1..n].iter().rev().map(|&c| Complex64::new(c, 0.0)));
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        fft.process(&mut row);
        let eig: Vec<f64> = row.iter().map(|z| z.re).collect();
        let max = eig.iter().cloned().fold(0.0_f64, f64::max);
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min >= -EIGEN_TOLERANCE * max {
            let scale = eig
                .iter()
                .map(|&l| (l.max(0.0) / len as f64).sqrt())
                .collect();
            return Ok(Self {
                n,
                factor: Factor::Circulant { scale, fft },
            });
        }
        if n > dense_limit {
            return Err(Error::EmbeddingFailure {
                min_eigenvalue: min,
                reason: format!("length {n} exceeds the dense limit {dense_limit}"),
            });
        }
        let cov = DMatrix::from_fn(n, n, |i, j| acov[i.abs_diff(j)]);
        match Cholesky::new(cov) {
            Some(ch) => Ok(Self {
                n,
                factor: Factor::Dense { lower: ch.l() },
            }),
            None => Err(Error::EmbeddingFailure {
                min_eigenvalue: min,
                reason: "covariance matrix is not positive definite".into(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn uses_circulant(&self) -> bool {
        matches!(self.factor, Factor::Circulant { .. })
    }

    pub fn sample_seeded(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample(&mut rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.factor {
            Factor::Circulant { scale, fft } => {
                let mut buf: Vec<Complex64> = scale
                    .iter()
                    .map(|&s| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                buf[..self.n].iter().map(|z| z.re).collect()
            }
            Factor::Dense { lower } => {
                let z = DVector::from_fn(self.n, |_, _| rng.sample::<f64, _>(StandardNormal));
                (lower * z).iter().copied().collect()
            }
        }
    }
}
