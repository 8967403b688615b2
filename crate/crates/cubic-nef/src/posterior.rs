//! Conjugate posterior updates and posterior functionals.
//!
//! The generalized natural prior with hyperparameters `(t, m0, beta)` is
//! conjugate for the likelihood whose per-observation log contribution is
//! `theta*x - (1 - beta*x)*k(theta)`: the posterior after `n` observations
//! with mean `xbar` is the same prior family at
//! `t' = t + n - beta*n*xbar`, `m0' = (t*m0 + n*xbar)/t'`.
//!
//! The posterior functional is the posterior expectation of
//! `k1(theta) / (1 + beta*k1(theta))`; its closed-form counterpart
//! `(t*m0 + n*xbar) / (t*(1 + beta*m0) + n)` is exactly affine in `xbar`.

use crate::family::CumulantModel;
use crate::numerics::{integrate, log_end_grid, Interval, Tolerance};
use crate::prior::{log_unnormalized, normalize_with, prior_domain, HyperParams, PriorKind};
use crate::tbeta::tbeta_measure_logdensity;
use crate::{Error, Result};

/// A validated batch of observations.
#[derive(Debug, Clone)]
pub struct DataBatch {
    observations: Vec<f64>,
    n: usize,
    sample_mean: f64,
}

impl DataBatch {
    /// Validate observations against the family: each `x` must satisfy
    /// `1 - beta*x` in the Jorgensen set of the model, and must lie where
    /// the reweighted measure density is defined.
    pub fn new(observations: Vec<f64>, model: &CumulantModel, beta: f64) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::InvalidData("observation batch is empty".into()));
        }
        for (i, &x) in observations.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidData(format!(
                    "observation {} is not finite: {x}",
                    i + 1
                )));
            }
            let power = 1.0 - beta * x;
            if !model.jorgensen().contains(power) {
                return Err(Error::InvalidData(format!(
                    "observation {} (x = {x}) has 1 - beta*x = {power} outside the \
                     admissible power set {}",
                    i + 1,
                    model.jorgensen().describe()
                )));
            }
            if let Err(e) = tbeta_measure_logdensity(model, beta, x) {
                return Err(Error::InvalidData(format!(
                    "observation {} (x = {x}) outside the reweighted support: {e}",
                    i + 1
                )));
            }
        }
        let n = observations.len();
        let sample_mean = observations.iter().sum::<f64>() / n as f64;
        Ok(Self { observations, n, sample_mean })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample_mean(&self) -> f64 {
        self.sample_mean
    }
}

/// A prior or posterior state of the conjugate family.
#[derive(Debug, Clone)]
pub struct PosteriorState {
    pub hp: HyperParams,
    model: CumulantModel,
}

impl PosteriorState {
    pub fn new(model: CumulantModel, hp: HyperParams) -> Result<Self> {
        hp.validate(&model)?;
        Ok(Self { hp, model })
    }

    pub fn model(&self) -> &CumulantModel {
        &self.model
    }
}

/// The update arithmetic on hyperparameters, exact in (t, m0).
fn updated_hyper(hp: &HyperParams, n: usize, xbar: f64) -> (f64, f64) {
    if n == 0 {
        return (hp.t, hp.m0);
    }
    let nf = n as f64;
    let t_new = hp.t + nf - hp.beta * nf * xbar;
    let m_new = (hp.t * hp.m0 + nf * xbar) / t_new;
    (t_new, m_new)
}

/// Conjugate update with a validated batch.
pub fn update(state: &PosteriorState, data: &DataBatch) -> Result<PosteriorState> {
    update_summary(state, data.n, data.sample_mean)
}

/// Conjugate update from the sufficient summary `(n, xbar)`; `n = 0` is the
/// identity.
pub fn update_summary(state: &PosteriorState, n: usize, xbar: f64) -> Result<PosteriorState> {
    let (t_new, m_new) = updated_hyper(&state.hp, n, xbar);
    let hp = HyperParams::new(t_new, m_new, state.hp.beta, &state.model)?;
    Ok(PosteriorState { hp, model: state.model.clone() })
}

/// The Bayes-rule posterior computed independently of the conjugate
/// arithmetic: unnormalized log posterior is the prior plus a literal sum
/// of per-observation likelihood terms, normalized by its own quadrature.
#[derive(Debug, Clone)]
pub struct BayesPosterior {
    state: PosteriorState,
    observations: Vec<f64>,
    log_z: f64,
    pub domain: Interval,
}

impl BayesPosterior {
    pub fn new(state: &PosteriorState, data: &DataBatch) -> Result<Self> {
        let domain = prior_domain(PriorKind::GeneralizedNatural, state.hp.beta, &state.model)?;
        let log_num = |theta: f64| -> Result<f64> {
            bayes_log_numerator(state, data.observations(), theta)
        };
        let scan = log_end_grid(&domain, 256, 1e-6);
        let mut peak = f64::NEG_INFINITY;
        for &p in &scan {
            if let Ok(v) = log_num(p) {
                if v > peak {
                    peak = v;
                }
            }
        }
        if !peak.is_finite() {
            return Err(Error::NonIntegrable(
                "posterior numerator has no finite value on the domain".into(),
            ));
        }
        let tol = Tolerance::default();
        let quad = integrate(
            |theta| log_num(theta).map(|v| (v - peak).exp()).unwrap_or(0.0),
            &domain,
            &tol,
        )?;
        if !(quad.value > 0.0) || !quad.value.is_finite() {
            return Err(Error::NonIntegrable(format!(
                "posterior normalizer is not positive and finite: {}",
                quad.value
            )));
        }
        Ok(Self {
            state: state.clone(),
            observations: data.observations().to_vec(),
            log_z: quad.value.ln() + peak,
            domain,
        })
    }

    pub fn log_density(&self, theta: f64) -> Result<f64> {
        bayes_log_numerator(&self.state, &self.observations, theta).map(|v| v - self.log_z)
    }
}

/// Prior log density plus the literal per-observation likelihood sum.
fn bayes_log_numerator(state: &PosteriorState, observations: &[f64], theta: f64) -> Result<f64> {
    let mut total = log_unnormalized(
        PriorKind::GeneralizedNatural,
        &state.hp,
        &state.model,
        theta,
    )?;
    let k = state.model.k(theta)?;
    for &x in observations {
        total += theta * x - (1.0 - state.hp.beta * x) * k;
    }
    Ok(total)
}

/// Normalized Bayes posterior log density at one point; for sweeps over
/// many points construct `BayesPosterior` once instead.
pub fn posterior_logdensity(state: &PosteriorState, data: &DataBatch, theta: f64) -> Result<f64> {
    BayesPosterior::new(state, data)?.log_density(theta)
}

/// Posterior expectation of `k1/(1 + beta*k1)` by quadrature against the
/// updated conjugate prior.
pub fn posterior_functional(state: &PosteriorState, data: &DataBatch) -> Result<f64> {
    posterior_functional_summary(state, data.n, data.sample_mean)
}

/// Same functional from the sufficient summary; `n = 0` gives the prior
/// expectation.
pub fn posterior_functional_summary(
    state: &PosteriorState,
    n: usize,
    xbar: f64,
) -> Result<f64> {
    posterior_functional_summary_with(state, n, xbar, &Tolerance::default())
}

/// `posterior_functional_summary` with an explicit quadrature tolerance.
pub fn posterior_functional_summary_with(
    state: &PosteriorState,
    n: usize,
    xbar: f64,
    tol: &Tolerance,
) -> Result<f64> {
    let post = update_summary(state, n, xbar)?;
    let prior = normalize_with(PriorKind::GeneralizedNatural, &post.hp, &post.model, tol)?;
    let beta = post.hp.beta;
    let model = post.model.clone();
    prior.expectation_with(
        move |theta| {
            let m = model.k1_unchecked(theta);
            m / (1.0 + beta * m)
        },
        tol,
    )
}

/// The closed-form posterior functional `(t*m0 + n*xbar)/(t*(1+beta*m0) + n)`,
/// exactly affine in `xbar` for fixed `n`.
pub fn closed_form_functional(state: &PosteriorState, n: usize, xbar: f64) -> f64 {
    let hp = &state.hp;
    let nf = n as f64;
    (hp.t * hp.m0 + nf * xbar) / (hp.t * (1.0 + hp.beta * hp.m0) + nf)
}

/// Seeded samplers for simulated observation batches.
pub mod simulate {
    use crate::numerics::RngStream;

    /// Standard normal draws by the Box-Muller transform.
    pub fn gaussian(rng: &mut RngStream, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let u1 = rng.next_f64().max(f64::MIN_POSITIVE);
            let u2 = rng.next_f64();
            let r = (-2.0 * u1.ln()).sqrt();
            let a = 2.0 * std::f64::consts::PI * u2;
            out.push(r * a.cos());
            if out.len() < n {
                out.push(r * a.sin());
            }
        }
        out
    }

    /// Poisson draws by CDF inversion (intended for moderate means).
    pub fn poisson(rng: &mut RngStream, mean: f64, n: usize) -> Vec<f64> {
        assert!(mean > 0.0 && mean.is_finite());
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            let mut k = 0.0_f64;
            let mut p = (-mean).exp();
            let mut c = p;
            while c < u && k < 1e6 {
                k += 1.0;
                p *= mean / k;
                c += p;
            }
            out.push(k);
        }
        out
    }

    /// Gamma(shape, scale 1) draws by the Marsaglia-Tsang squeeze, with the
    /// standard power boost for shape below one.
    pub fn gamma(rng: &mut RngStream, shape: f64, n: usize) -> Vec<f64> {
        assert!(shape > 0.0 && shape.is_finite());
        let boosted = shape < 1.0;
        let d = if boosted { shape + 1.0 } else { shape } - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let z = {
                // One normal draw via Box-Muller.
                let u1 = rng.next_f64().max(f64::MIN_POSITIVE);
                let u2 = rng.next_f64();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            };
            let v = 1.0 + c * z;
            if v <= 0.0 {
                continue;
            }
            let v3 = v * v * v;
            let u = rng.next_f64().max(f64::MIN_POSITIVE);
            if u.ln() < 0.5 * z * z + d - d * v3 + d * v3.ln() {
                let mut g = d * v3;
                if boosted {
                    let w = rng.next_f64().max(f64::MIN_POSITIVE);
                    g *= w.powf(1.0 / shape);
                }
                out.push(g);
            }
        }
        out
    }

    /// Inverse-Gaussian(mu, lambda) draws by the transformation method with
    /// a uniform auxiliary (Michael-Schucany-Haas).
    pub fn inverse_gaussian(rng: &mut RngStream, mu: f64, lambda: f64, n: usize) -> Vec<f64> {
        assert!(mu > 0.0 && lambda > 0.0);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let z = {
                let u1 = rng.next_f64().max(f64::MIN_POSITIVE);
                let u2 = rng.next_f64();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            };
            let y = z * z;
            let x = mu + mu * mu * y / (2.0 * lambda)
                - mu / (2.0 * lambda) * (4.0 * mu * lambda * y + mu * mu * y * y).sqrt();
            let u = rng.next_f64();
            out.push(if u <= mu / (mu + x) { x } else { mu * mu / x });
        }
        out
    }

    /// Draws from the cubic inverse-Gaussian-type family member with mean
    /// `m > -1`: a unit-shape inverse-Gaussian shifted left by one.
    pub fn inverse_gaussian_type(rng: &mut RngStream, m: f64, n: usize) -> Vec<f64> {
        assert!(m > -1.0);
        inverse_gaussian(rng, 1.0 + m, 1.0, n)
            .into_iter()
            .map(|y| y - 1.0)
            .collect()
    }
}
