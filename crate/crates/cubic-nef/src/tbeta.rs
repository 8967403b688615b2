//! Mean-fractional transport of exponential families.
//!
//! The transport with parameter `beta` sends a family with variance
//! function `V(m)` to one with variance `(1+beta*m)^3 V(m/(1+beta*m))`; it
//! maps the quadratic catalog onto families with cubic variance. This
//! module exposes the transport at three levels: on variance functions
//! (`variance_tbeta`), on mean values (`mean_transport`), and on whole
//! cumulant models (`transport_cumulant`), together with the restricted
//! domain sets on which the transport is defined and the density of the
//! transported generating measure.

use crate::family::{combined_power_logdensity, CumulantModel};
use crate::numerics::Interval;
use crate::{Error, Result};

/// A model paired with its beta-restricted domains.
#[derive(Debug, Clone)]
pub struct TBetaContext {
    pub beta: f64,
    pub family: CumulantModel,
    /// Mean domain restricted to `1 + beta*m > 0`.
    pub m_beta: Interval,
    /// Image of `m_beta` under the inverse mean map.
    pub theta_beta: Interval,
}

impl TBetaContext {
    pub fn new(family: CumulantModel, beta: f64) -> Result<Self> {
        let m_beta = m_beta_set(&family, beta).ok_or_else(|| {
            Error::TransportUndefined(format!(
                "no mean of {} satisfies 1 + beta*m > 0 at beta = {beta}",
                family.name()
            ))
        })?;
        let theta_beta = theta_beta_set(&family, beta).expect("m_beta nonempty");
        Ok(Self { beta, family, m_beta, theta_beta })
    }
}

/// The restriction of the mean domain to `{m : 1 + beta*m > 0}`.
/// `None` signals an empty intersection.
pub fn m_beta_set(model: &CumulantModel, beta: f64) -> Option<Interval> {
    let constraint = positivity_interval(beta);
    model.mean_domain().intersect(&constraint)
}

/// The natural-domain restriction `{theta : 1 + beta*k1(theta) > 0}`,
/// computed as the image of `m_beta_set` under the inverse mean map.
pub fn theta_beta_set(model: &CumulantModel, beta: f64) -> Option<Interval> {
    let m_beta = m_beta_set(model, beta)?;
    let mdom = model.mean_domain();
    let lo = if m_beta.lo() == mdom.lo() {
        model.theta_domain().lo()
    } else {
        model.psi_unchecked(m_beta.lo())
    };
    let hi = if m_beta.hi() == mdom.hi() {
        model.theta_domain().hi()
    } else {
        model.psi_unchecked(m_beta.hi())
    };
    Some(Interval::new(lo, hi, false, false).expect("psi is increasing"))
}

/// Whether the transport parameter is admissible for the family: true iff
/// the restricted mean set is nonempty.
pub fn beta_in_b(model: &CumulantModel, beta: f64) -> bool {
    m_beta_set(model, beta).is_some()
}

/// Natural-parameter reparametrization, base side: `theta = lambda - beta * k_mu(lambda)`.
pub fn lambda_to_theta(mu_model: &CumulantModel, beta: f64, lambda: f64) -> Result<f64> {
    mu_model.k(lambda).map(|k| lambda - beta * k)
}

/// Natural-parameter reparametrization, transported side:
/// `lambda = theta + beta * k_nu(theta)`; inverse of `lambda_to_theta`
/// where `1 - beta * k1_mu(lambda) > 0`.
pub fn theta_to_lambda(nu_model: &CumulantModel, beta: f64, theta: f64) -> Result<f64> {
    nu_model.k(theta).map(|k| theta + beta * k)
}

/// Build the transported model: cumulant `k_nu(theta) = k_mu(lambda(theta))`
/// where `lambda(theta)` solves `theta = lambda - beta * k_mu(lambda)` on
/// the branch with `1 - beta * k1_mu > 0`.
pub fn transport_cumulant(base: &CumulantModel, beta: f64) -> Result<CumulantModel> {
    CumulantModel::transported(base.clone(), beta)
}

/// Variance transport: `(1+beta*m)^3 * V_base(m/(1+beta*m))`.
pub fn variance_tbeta<F>(base_variance: F, beta: f64, m: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let w = 1.0 + beta * m;
    if !(w > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "1 + beta*m = {w} must be positive (beta = {beta}, m = {m})"
        )));
    }
    base_variance(m / w).map(|v| w * w * w * v)
}

/// Mean transport `m -> m/(1+beta*m)`.
pub fn mean_transport(m: f64, beta: f64) -> Result<f64> {
    let w = 1.0 + beta * m;
    if w == 0.0 || !w.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "mean transport pole: 1 + beta*m = {w} at m = {m}"
        )));
    }
    Ok(m / w)
}

/// Inverse mean transport `m' -> m'/(1-beta*m')`.
pub fn mean_transport_inverse(m_prime: f64, beta: f64) -> Result<f64> {
    let w = 1.0 - beta * m_prime;
    if w == 0.0 || !w.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "inverse mean transport pole: 1 - beta*m' = {w} at m' = {m_prime}"
        )));
    }
    Ok(m_prime / w)
}

/// Log density of the measure with density `(1-beta*x)^{-1} h(1-beta*x, x)`
/// against the base measure of `model`, where `h` is the model's power
/// density. For the inverse-Gaussian kind the combined expression
/// simplifies so that only `1 + (1-beta)*x > 0` is required; for the other
/// kinds the power argument `1 - beta*x` must be an admissible power.
pub fn tbeta_measure_logdensity(model: &CumulantModel, beta: f64, x: f64) -> Result<f64> {
    if model.support().is_lattice() {
        // Lattice alignment is power-invariant, so enforce it here; the
        // interval part of the support is governed by the power argument
        // inside the combined density.
        let idx = x.round();
        if (x - idx).abs() > 1e-9 || idx < -1e-9 {
            return Err(Error::OutOfDomain(format!(
                "x = {x} is not a lattice point of {}",
                model.name()
            )));
        }
    }
    combined_power_logdensity(model, 1.0 - beta * x, x)
}

/// `{m : 1 + beta*m > 0}` as an interval.
fn positivity_interval(beta: f64) -> Interval {
    if beta > 0.0 {
        Interval::open(-1.0 / beta, f64::INFINITY)
    } else if beta < 0.0 {
        Interval::open(f64::NEG_INFINITY, -1.0 / beta)
    } else {
        Interval::real_line()
    }
}
