//! Closed-form and asymptotic coherence expressions.
//!
//! These are plain evaluators. Each low- or high-temperature law only holds
//! in its regime; choosing the regime is up to the caller.

use crate::models::Model;
use crate::{Error, Result};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Exact `C_1` of the direct model at any temperature.
pub fn c1_direct_exact(gamma: f64, omega1: f64, omega2: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    positive("omega1", omega1)?;
    positive("omega2", omega2)?;
    let dressed = gamma.hypot(omega1);
    Ok(gamma.abs() * (omega2 / (2.0 * temperature)).tanh() * (dressed / (2.0 * temperature)).tanh() / dressed)
}

/// Low-temperature plateau of the direct model with its leading
/// exponential correction.
pub fn c1_direct_low_t(gamma: f64, omega1: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    positive("omega1", omega1)?;
    let dressed = gamma.hypot(omega1);
    Ok(gamma.abs() / dressed * (1.0 - 2.0 * (-dressed / temperature).exp()))
}

/// Low-temperature `C_2` of the indirect model.
pub fn c2_indirect_low_t(gamma: f64, theta: f64, omega1: f64, omega2: f64) -> Result<f64> {
    positive("omega1", omega1)?;
    positive("omega2", omega2)?;
    let dressed = omega1.hypot(gamma);
    let denom =
        (theta * theta + omega2 * omega2 + dressed * dressed).powi(2) - 4.0 * omega2 * omega2 * dressed * dressed;
    let numer = theta * theta + (omega2 - dressed).powi(2);
    if denom.abs() < 1e-300 {
        return Err(Error::Singular(format!(
            "resonant denominator at omega2 = {omega2}, dressed omega1 = {dressed}, theta = {theta}"
        )));
    }
    Ok((theta * gamma).abs() / dressed * (numer / denom).sqrt())
}

/// Weak-coupling limit of [`c2_indirect_low_t`]: `θγ/(ω1(ω1 + ω2))`.
pub fn c2_indirect_low_t_weak(gamma: f64, theta: f64, omega1: f64, omega2: f64) -> Result<f64> {
    positive("omega1", omega1)?;
    positive("omega2", omega2)?;
    Ok((theta * gamma).abs() / (omega1 * (omega1 + omega2)))
}

/// Approximate coupling maximising low-temperature `C_2` at fixed `θ`.
/// Intended for `ω1 ≲ ω2`, `θ ≲ ω2`.
pub fn gamma_opt(theta: f64, omega1: f64, omega2: f64) -> f64 {
    omega1.powf(2.0 / 3.0)
        * (omega2.powf(1.0 / 3.0) + theta.powi(2) / (3.0 * omega2.powf(5.0 / 3.0))
            - theta.powi(4) / (9.0 * omega2.powf(11.0 / 3.0)))
}

/// Low-temperature `C_0` of the transferred model.
pub fn c0_transferred_low_t(gamma: f64, theta: f64, omega0: f64, omega1: f64) -> Result<f64> {
    positive("omega0", omega0)?;
    positive("omega1", omega1)?;
    let tg = theta * gamma;
    Ok(tg.abs() / (tg * tg + omega0 * omega0 * (gamma * gamma + omega1 * omega1)).sqrt())
}

/// Low-temperature `C_1` with `N` direct sources: the couplings add up.
pub fn c1_direct_low_t_n(gammas: &[f64], omega1: f64) -> Result<f64> {
    if gammas.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one source coupling is required".into(),
        ));
    }
    positive("omega1", omega1)?;
    let total: f64 = gammas.iter().sum();
    Ok(total.abs() / total.hypot(omega1))
}

/// Validity regime of [`ct_indirect_low_t_n`].
pub const CT_INDIRECT_N_REGIME: &str = "T << N*gamma^2 << omega_1, omega_T (leading order only)";

/// Leading-order low-temperature `C_T` with `N` indirect sources
/// (`γ_j = θ_j = γ`, source frequency `ω1`).
pub fn ct_indirect_low_t_n(n: usize, gamma: f64, omega1: f64, omega_target: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    positive("omega1", omega1)?;
    positive("omega_target", omega_target)?;
    Ok(n as f64 * gamma * gamma / (omega1 * (omega_target + omega1)))
}

/// Low-temperature `C_0` with `N` identical sources feeding the mediator.
pub fn c0_transferred_low_t_n(n: usize, gamma: f64, theta: f64, omega0: f64, omega1: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let ng = n as f64 * gamma;
    c0_transferred_low_t(ng, theta, omega0, omega1)
}

/// `C ≈ prefactor · T^exponent` for `T` far above every energy scale.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoteLaw {
    pub exponent: f64,
    /// `None` where only the exponent is known.
    pub prefactor: Option<f64>,
    /// Which site's coherence the law describes.
    pub site: usize,
    pub validity: &'static str,
}

const HIGH_T: &str = "T >> all frequencies and couplings";

/// High-temperature law for the coherence carrier of each catalogue model.
///
/// For N-source models with non-identical sources the prefactors use
/// `Σ γ_j ω_j` and `Σ γ_j θ_j`, which reduce to the uniform-source forms.
pub fn high_t_asymptote(model: &Model) -> Result<AsymptoteLaw> {
    let law = |exponent: f64, prefactor: Option<f64>, site: usize| AsymptoteLaw {
        exponent,
        prefactor: prefactor.map(f64::abs),
        site,
        validity: HIGH_T,
    };
    Ok(match model {
        Model::Direct { omega2, gamma, .. } => law(-2.0, Some(gamma * omega2 / 4.0), 0),
        Model::Indirect {
            omega2, gamma, theta, ..
        } => law(-3.0, Some(gamma * theta * omega2 / 24.0), 1),
        Model::Transferred {
            omega2, gamma, theta, ..
        } => law(-3.0, Some(gamma * theta * omega2 / 8.0), 0),
        Model::DirectN {
            omega_sources,
            gamma_sources,
            ..
        } => {
            let s: f64 = omega_sources.iter().zip(gamma_sources).map(|(w, g)| w * g).sum();
            law(-2.0, Some(s / 4.0), 0)
        }
        Model::IndirectN {
            omega_target,
            gamma_sources,
            theta_sources,
            ..
        } => {
            let s: f64 = gamma_sources.iter().zip(theta_sources).map(|(g, t)| g * t).sum();
            law(-3.0, Some(s * omega_target / 24.0), 0)
        }
        Model::TransferredN { .. } => law(-3.0, None, 0),
        Model::Xyz { .. } => {
            return Err(Error::UnknownModel(
                "xyz (symmetric model, coherence vanishes identically)".into(),
            ))
        }
    })
}

/// Same as [`high_t_asymptote`], looked up by tag string and flat parameters.
pub fn high_t_asymptote_by_tag(tag: &str, model: &Model) -> Result<AsymptoteLaw> {
    let wanted: crate::models::ModelTag = tag.parse()?;
    if wanted != model.tag() {
        return Err(Error::InvalidParameter(format!(
            "tag `{tag}` does not match model {}",
            model.tag()
        )));
    }
    high_t_asymptote(model)
}
