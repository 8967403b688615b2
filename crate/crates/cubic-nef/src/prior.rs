//! Conjugate prior families on the natural and mean parameters.
//!
//! Four families are implemented. With hyperparameters `t > 0`, `m0`, and
//! transport parameter `beta`:
//!
//! * standard natural: density proportional to `exp(t*(m0*theta - k(theta)))`
//!   on the natural domain (`beta = 0` only);
//! * standard mean: the same exponent through `psi` on the mean domain;
//! * generalized natural: `(1 + beta*k1(theta)) * exp(t*m0*theta - t*k(theta))`
//!   on the restricted natural domain;
//! * generalized mean: `(1+beta*m)^{-2} * exp(t*m0*psi(m) - t*k(psi(m)))`
//!   on the restricted mean domain.
//!
//! Normalizing constants always come from quadrature; no closed-form
//! normalizer is trusted. Sampling is inverse-CDF on a dense grid and is
//! deterministic per seed.

use crate::family::CumulantModel;
use crate::numerics::{integrate, log_end_grid, Interval, RngStream, Tolerance};
use crate::tbeta::{m_beta_set, theta_beta_set};
use crate::{Error, Result};

/// Hyperparameters of a conjugate prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub t: f64,
    pub m0: f64,
    pub beta: f64,
}

impl HyperParams {
    /// Validate `t > 0` and `m0` in the beta-restricted mean domain of the
    /// model.
    pub fn new(t: f64, m0: f64, beta: f64, model: &CumulantModel) -> Result<Self> {
        let hp = Self { t, m0, beta };
        hp.validate(model)?;
        Ok(hp)
    }

    pub fn validate(&self, model: &CumulantModel) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prior weight t must satisfy t > 0, got {}",
                self.t
            )));
        }
        let m_beta = m_beta_set(model, self.beta).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "beta = {} leaves no admissible mean for {}",
                self.beta,
                model.name()
            ))
        })?;
        if !m_beta.contains(self.m0) {
            return Err(Error::InvalidParameter(format!(
                "prior mean m0 = {} outside the admissible set {} (mean domain \
                 restricted to 1 + beta*m > 0, beta = {})",
                self.m0,
                m_beta.describe(),
                self.beta
            )));
        }
        Ok(())
    }
}

/// Which of the four prior families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorKind {
    /// On theta, `beta = 0` only.
    StandardNatural,
    /// On m, `beta = 0` only.
    StandardMean,
    /// On theta with the `(1 + beta*k1)` factor.
    GeneralizedNatural,
    /// On m with the `(1+beta*m)^{-2}` factor.
    GeneralizedMean,
}

impl PriorKind {
    pub fn is_natural(&self) -> bool {
        matches!(self, PriorKind::StandardNatural | PriorKind::GeneralizedNatural)
    }

    fn check_beta(&self, beta: f64) -> Result<()> {
        match self {
            PriorKind::StandardNatural | PriorKind::StandardMean if beta != 0.0 => {
                Err(Error::InvalidParameter(format!(
                    "standard prior kinds require beta = 0, got {beta}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// The prior's domain: the (restricted) natural domain for natural kinds,
/// the (restricted) mean domain for mean kinds.
pub fn prior_domain(kind: PriorKind, beta: f64, model: &CumulantModel) -> Result<Interval> {
    let set = if kind.is_natural() {
        theta_beta_set(model, beta)
    } else {
        m_beta_set(model, beta)
    };
    set.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "beta = {beta} leaves an empty prior domain for {}",
            model.name()
        ))
    })
}

/// Log of the unnormalized prior density at `point` (theta for natural
/// kinds, m for mean kinds).
pub fn log_unnormalized(
    kind: PriorKind,
    hp: &HyperParams,
    model: &CumulantModel,
    point: f64,
) -> Result<f64> {
    kind.check_beta(hp.beta)?;
    let domain = prior_domain(kind, hp.beta, model)?;
    if !domain.contains(point) {
        return Err(Error::OutOfDomain(format!(
            "point {point} outside prior domain {}",
            domain.describe()
        )));
    }
    let value = match kind {
        PriorKind::StandardNatural => {
            hp.t * (hp.m0 * point - model.k_unchecked(point))
        }
        PriorKind::GeneralizedNatural => {
            let weight = (1.0 + hp.beta * model.k1_unchecked(point)).ln();
            weight + hp.t * hp.m0 * point - hp.t * model.k_unchecked(point)
        }
        PriorKind::StandardMean => {
            let theta = model.psi_unchecked(point);
            hp.t * (hp.m0 * theta - model.k_unchecked(theta))
        }
        PriorKind::GeneralizedMean => {
            let theta = model.psi_unchecked(point);
            -2.0 * (1.0 + hp.beta * point).ln() + hp.t * hp.m0 * theta
                - hp.t * model.k_unchecked(theta)
        }
    };
    // Deep-tail points can exceed floating-point range (NaN here); report
    // them as errors so integration layers treat them as vanished tails.
    // Negative infinity is a legitimate log density and passes through.
    if value.is_nan() {
        return Err(Error::NonFinite(format!(
            "prior log density is beyond floating-point range at {point}"
        )));
    }
    Ok(value)
}

/// A prior with its normalizing constant computed by quadrature.
#[derive(Debug, Clone)]
pub struct NormalizedPrior {
    pub kind: PriorKind,
    pub hp: HyperParams,
    model: CumulantModel,
    pub log_normalizer: f64,
    pub domain: Interval,
}

/// Normalize a prior: `log_normalizer = ln of the integral of the
/// unnormalized density` over the kind's domain.
pub fn normalize(
    kind: PriorKind,
    hp: &HyperParams,
    model: &CumulantModel,
) -> Result<NormalizedPrior> {
    normalize_with(kind, hp, model, &Tolerance::default())
}

/// `normalize` with an explicit quadrature tolerance.
pub fn normalize_with(
    kind: PriorKind,
    hp: &HyperParams,
    model: &CumulantModel,
    tol: &Tolerance,
) -> Result<NormalizedPrior> {
    kind.check_beta(hp.beta)?;
    hp.validate(model)?;
    let domain = prior_domain(kind, hp.beta, model)?;
    // Shift by the grid maximum so the integrand is O(1) at its peak.
    let scan = log_end_grid(&domain, 256, 1e-6);
    let mut peak = f64::NEG_INFINITY;
    for &p in &scan {
        if let Ok(v) = log_unnormalized(kind, hp, model, p) {
            if v > peak {
                peak = v;
            }
        }
    }
    if !peak.is_finite() {
        return Err(Error::NonIntegrable(format!(
            "unnormalized prior density has no finite value on {}",
            domain.describe()
        )));
    }
    let integrand = |p: f64| {
        log_unnormalized(kind, hp, model, p)
            .map(|v| (v - peak).exp())
            .unwrap_or(0.0)
    };
    let quad = integrate(integrand, &domain, tol).map_err(|e| {
        Error::NonIntegrable(format!(
            "prior normalizer quadrature failed on {}: {e}",
            domain.describe()
        ))
    })?;
    if !(quad.value > 0.0) || !quad.value.is_finite() {
        return Err(Error::NonIntegrable(format!(
            "prior normalizer is not a positive finite number: {}",
            quad.value
        )));
    }
    Ok(NormalizedPrior {
        kind,
        hp: *hp,
        model: model.clone(),
        log_normalizer: quad.value.ln() + peak,
        domain,
    })
}

impl NormalizedPrior {
    pub fn model(&self) -> &CumulantModel {
        &self.model
    }

    /// Normalized log density at a point of the prior's domain.
    pub fn log_density(&self, point: f64) -> Result<f64> {
        log_unnormalized(self.kind, &self.hp, &self.model, point)
            .map(|v| v - self.log_normalizer)
    }

    /// Expectation of `g` against the prior by quadrature.
    pub fn expectation<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(f64) -> f64,
    {
        self.expectation_with(g, &Tolerance::default())
    }

    /// `expectation` with an explicit quadrature tolerance.
    pub fn expectation_with<G>(&self, g: G, tol: &Tolerance) -> Result<f64>
    where
        G: Fn(f64) -> f64,
    {
        let integrand = |p: f64| match self.log_density(p) {
            Ok(ld) => {
                let w = ld.exp();
                if w == 0.0 {
                    0.0
                } else {
                    g(p) * w
                }
            }
            Err(_) => 0.0,
        };
        integrate(integrand, &self.domain, tol).map(|q| q.value)
    }

    /// `n` draws by inverse CDF on a 2048-point grid with endpoint
    /// refinement; deterministic per seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let grid = log_end_grid(&self.domain, 2048, 1e-6);
        let mut logs = Vec::with_capacity(grid.len());
        let mut peak = f64::NEG_INFINITY;
        for &p in &grid {
            let v = self.log_density(p).unwrap_or(f64::NEG_INFINITY);
            if v > peak {
                peak = v;
            }
            logs.push(v);
        }
        if !peak.is_finite() {
            return Err(Error::NonIntegrable(
                "prior density vanishes on the whole sampling grid".into(),
            ));
        }
        // Cell masses by the trapezoid rule on the shifted density.
        let mut cum = Vec::with_capacity(grid.len());
        cum.push(0.0);
        let mut total = 0.0;
        for i in 1..grid.len() {
            let f0 = (logs[i - 1] - peak).exp();
            let f1 = (logs[i] - peak).exp();
            total += 0.5 * (f0 + f1) * (grid[i] - grid[i - 1]);
            cum.push(total);
        }
        if !(total > 0.0) {
            return Err(Error::NonIntegrable(
                "prior mass on the sampling grid is zero".into(),
            ));
        }
        let mut rng = RngStream::new(seed);
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64() * total;
            // First cell whose cumulative mass exceeds u.
            let idx = cum.partition_point(|&c| c <= u).clamp(1, grid.len() - 1);
            let (c0, c1) = (cum[idx - 1], cum[idx]);
            let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
            draws.push(grid[idx - 1] + frac * (grid[idx] - grid[idx - 1]));
        }
        Ok(draws)
    }
}

/// Log density of the image of a generalized natural prior under the mean
/// map `k1`: `ln C + ln(1+beta*m) - ln V(m) + t*m0*psi(m) - t*k(psi(m))`
/// where `ln C` is minus the prior's log normalizer.
pub fn pushforward_kprime_logdensity(prior: &NormalizedPrior, m: f64) -> Result<f64> {
    if prior.kind != PriorKind::GeneralizedNatural {
        return Err(Error::InvalidParameter(
            "pushforward density is defined for the generalized natural prior".into(),
        ));
    }
    let model = &prior.model;
    let hp = &prior.hp;
    let m_beta = m_beta_set(model, hp.beta).ok_or_else(|| {
        Error::InvalidParameter("empty restricted mean domain".into())
    })?;
    if !m_beta.contains(m) {
        return Err(Error::OutOfDomain(format!(
            "m = {m} outside the restricted mean domain {}",
            m_beta.describe()
        )));
    }
    let theta = model.psi_unchecked(m);
    let v = model.k2_unchecked(theta);
    Ok((1.0 + hp.beta * m).ln() - v.ln() + hp.t * hp.m0 * theta
        - hp.t * model.k_unchecked(theta)
        - prior.log_normalizer)
}

/// Expectation of `g` against a normalized prior (free-function form).
pub fn prior_expectation<G>(prior: &NormalizedPrior, g: G) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    prior.expectation(g)
}
