use super::{c_h_z, HurstParam};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// The Rosenblatt kernel `L_t^H(x1, x2)` with the default relative tolerance 1e-8.
pub fn kernel_l(t: f64, x1: f64, x2: f64, h: HurstParam) -> Result<f64> {
    kernel_l_with(
        t,
        x1,
        x2,
        h,
        QuadOptions {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 1000,
        },
    )
}

/// Kernel evaluation with explicit quadrature tolerances.
///
/// The inner integral `∫_{x1∨x2}^t u^H (u-x1)^{H/2-1} (u-x2)^{H/2-1} du` is
/// rewritten with `u = x1∨x2 + τ^{2/H}`, which turns the singular factor at
/// the lower limit into a constant; the remaining factor is smooth because the
/// other abscissa lies strictly below the lower limit.
pub fn kernel_l_with(t: f64, x1: f64, x2: f64, h: HurstParam, opts: QuadOptions) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel time {t} must lie in (0, 1]"
        )));
    }
    let inside = |x: f64| x > 0.0 && x < t;
    if !inside(x1) || !inside(x2) {
        return Ok(0.0);
    }
    if x1 == x2 {
        return Err(Error::DiagonalEvaluation(x1));
    }
    let hv = h.value();
    let a = 0.5 * hv - 1.0;
    let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let upper = (t - hi).powf(0.5 * hv);
    let p = 2.0 / hv;
    let integrand = |tau: f64| {
        let s = tau.powf(p);
        let u = hi + s;
        p * u.powf(hv) * (s + (hi - lo)).powf(a)
    };
    let inner = integrate(integrand, 0.0, upper, opts).value;
    Ok(c_h_z(h) * (x1 * x2).powf(-0.5 * hv) * inner)
}
