//! Univariate Student-t distribution function, used as the reference curve
//! for goodness-of-fit checks on standardized draws.

use crate::error::{Error, Result};
use crate::special::reg_inc_beta;

/// CDF of the standard Student-t distribution with `nu` degrees of freedom.
///
/// Uses the regularized incomplete beta identity through t = ν/(ν+x²),
/// which keeps both tails accurate: F(x) = ½·I_t(ν/2, ½) for x ≤ 0 and
/// 1 − ½·I_t(ν/2, ½) for x > 0. Fractional ν is supported.
pub fn student_t_cdf(x: f64, nu: f64) -> Result<f64> {
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::InvalidDof);
    }
    debug_assert!(!x.is_nan(), "evaluation point is NaN");
    let t = nu / (nu + x * x);
    let half_tail = 0.5 * reg_inc_beta(nu / 2.0, 0.5, t);
    Ok(if x <= 0.0 { half_tail } else { 1.0 - half_tail })
}
