use crate::coherence::SpectralCoherence;
use crate::models::indirect_model;
use crate::operator::build_operator;
use crate::thermal::eig_hermitian;
use crate::{Error, Result};

const BRACKET_LO: f64 = 1e-6;
const SCAN_POINTS: usize = 50;
const GAMMA_TOL: f64 = 1e-6;
const FLAT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalCoupling {
    pub gamma: f64,
    pub coherence: f64,
}

/// Exact partner coherence of the indirect model.
pub fn indirect_c2(gamma: f64, theta: f64, omega1: f64, omega2: f64, temperature: f64) -> Result<f64> {
    let spec = indirect_model(omega1, omega2, gamma, theta)?;
    let eval = SpectralCoherence::new(eig_hermitian(&build_operator(&spec)?)?, &[1])?;
    Ok(eval.at(temperature)?[0])
}

/// Golden-section maximisation of a unimodal `f` on `[a, b]` to width `tol`.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Argmax over γ ∈ [1e-6, 3·ω2] of the exact C_2 at fixed θ, ω1, ω2, T.
///
/// A 50-point pre-scan rejects flat objectives and objectives with more
/// than one local maximum before the golden-section refinement.
pub fn find_optimal_gamma(theta: f64, omega1: f64, omega2: f64, temperature: f64) -> Result<OptimalCoupling> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    let c2 = |g: f64| indirect_c2(g, theta, omega1, omega2, temperature);
    let hi = 3.0 * omega2;
    if !(hi > BRACKET_LO) {
        return Err(Error::InvalidParameter(format!(
            "omega2 = {omega2} gives an empty bracket"
        )));
    }
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| BRACKET_LO + (hi - BRACKET_LO) * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let vals = grid.iter().map(|&g| c2(g)).collect::<Result<Vec<_>>>()?;
    let peak = vals.iter().cloned().fold(0.0, f64::max);
    if peak < FLAT_THRESHOLD {
        return Err(Error::FlatObjective);
    }

    let last = SCAN_POINTS - 1;
    let maxima: Vec<usize> = (0..SCAN_POINTS)
        .filter(|&i| {
            let left_ok = i == 0 || vals[i] > vals[i - 1];
            let right_ok = i == last || vals[i] >= vals[i + 1];
            left_ok && right_ok
        })
        .collect();
    if maxima.len() != 1 {
        return Err(Error::NotUnimodal {
            candidates: maxima.iter().map(|&i| grid[i]).collect(),
        });
    }
    let i = maxima[0];
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(last)];
    let gamma = golden_section_max(c2, a, b, GAMMA_TOL)?;
    Ok(OptimalCoupling {
        gamma,
        coherence: c2(gamma)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::c2_indirect_low_t;
    use approx::assert_relative_eq;

    #[test]
    fn golden_section_on_parabola() {
        let x = golden_section_max(|x| Ok(-(x - 0.7f64).powi(2)), 0.0, 2.0, 1e-9).unwrap();
        assert!((x - 0.7).abs() < 1e-8);
        // monotone objective converges to the bracket edge
        let x = golden_section_max(Ok, 0.0, 1.0, 1e-9).unwrap();
        assert!(x > 1.0 - 1e-8);
    }

    #[test]
    fn c2_matches_low_temperature_formula() {
        let exact = indirect_c2(0.5, 0.5, 0.5, 1.0, 0.01).unwrap();
        assert_relative_eq!(exact, c2_indirect_low_t(0.5, 0.5, 0.5, 1.0).unwrap(), epsilon = 1e-9);
        assert_relative_eq!(exact, 0.198_756_853_415_513, epsilon = 1e-9);
    }

    #[test]
    fn optimum_of_smaller_case() {
        // independent oracle: dense scan of the exact C_2 at T = 0.01 puts the peak at 0.73325
        let opt = find_optimal_gamma(0.2, 0.5, 1.0, 0.01).unwrap();
        assert!((opt.gamma - 0.733_252_5).abs() < 1e-4, "{opt:?}");
        let at_omega1 = indirect_c2(0.5, 0.2, 0.5, 1.0, 0.01).unwrap();
        assert!(opt.coherence >= at_omega1);
        assert!(opt.coherence / at_omega1 - 1.0 <= 0.10);
    }

    #[test]
    fn flat_objective() {
        assert!(matches!(
            find_optimal_gamma(0.0, 0.8, 1.0, 0.01),
            Err(Error::FlatObjective)
        ));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            find_optimal_gamma(0.3, 0.8, 1.0, 0.0),
            Err(Error::NonPositiveTemperature(_))
        ));
        assert!(find_optimal_gamma(f64::NAN, 0.8, 1.0, 0.01).is_err());
        assert!(find_optimal_gamma(0.3, 0.8, -1.0, 0.01).is_err());
    }
}
