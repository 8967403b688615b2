//! Five-point central finite differences for first and second derivatives,
//! fourth-order accurate in the step.

use crate::{Error, Result};

/// Central-difference derivative of `f` at `x`.
///
/// `order` selects the first or second derivative; any other value is
/// rejected. The stencil spans `[x - 2*step, x + 2*step]`.
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: u8, step: f64) -> Result<f64> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive and finite, got {step}"
        )));
    }
    let eval = |p: f64| -> Result<f64> {
        let y = f(p);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite(format!(
                "stencil evaluation f({p}) = {y} is not finite"
            )))
        }
    };
    let fm2 = eval(x - 2.0 * step)?;
    let fm1 = eval(x - step)?;
    let fp1 = eval(x + step)?;
    let fp2 = eval(x + 2.0 * step)?;
    match order {
        1 => Ok((fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * step)),
        2 => {
            let f0 = eval(x)?;
            Ok((-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * step * step))
        }
        other => Err(Error::InvalidParameter(format!(
            "derivative order must be 1 or 2, got {other}"
        ))),
    }
}
