//! Population dependence measures: Kendall's τ, Spearman's ρ_S, and tail
//! dependence coefficients.

use crate::copulas::{ArchimedeanGenerator, CopulaFamily};
use crate::error::{Error, Result};
use crate::numerics::{integrate2d_adaptive, integrate_adaptive_from};
use std::f64::consts::{FRAC_PI_2, PI};

/// Strength of dependence in the corners of the unit square:
/// λ_L = lim_{u↓0} C(u, u)/u and λ_U = lim_{u↑1} (1 − 2u + C(u, u))/(1 − u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCoefficients {
    pub lambda_lower: f64,
    pub lambda_upper: f64,
}

/// Which corner a numeric tail limit probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Lower,
    Upper,
}

/// Kendall's τ by the families' closed forms:
/// Clayton θ/(θ+2); Gumbel 1 − 1/θ; Gaussian (2/π) arcsin ρ; Π → 0;
/// M → 1; W → −1.
pub fn kendall_tau(c: &CopulaFamily) -> Result<f64> {
    c.validate()?;
    Ok(match *c {
        CopulaFamily::Independence => 0.0,
        CopulaFamily::LowerBound => -1.0,
        CopulaFamily::UpperBound => 1.0,
        CopulaFamily::Clayton { theta } => theta / (theta + 2.0),
        CopulaFamily::Gumbel { theta } => 1.0 - 1.0 / theta,
        CopulaFamily::Gaussian { rho } => 2.0 / PI * rho.asin(),
    })
}

/// Kendall's τ from an Archimedean generator:
/// τ = 1 + 4 ∫₀¹ φ(t)/φ′(t) dt.
///
/// The integrand vanishes at both endpoints for the built-in generators but
/// involves 0/0 at t = 1, so integration runs over [1e-10, 1 − 1e-10] with
/// adaptive refinement starting from a `quad_points`-node rule (tolerance
/// 1e-10, cap 4096 nodes). φ′ must be nonzero on (0, 1).
pub fn kendall_tau_from_generator(g: &ArchimedeanGenerator, quad_points: usize) -> Result<f64> {
    if !(2..=4096).contains(&quad_points) {
        return Err(Error::Domain(format!(
            "generator quadrature needs 2 <= quad_points <= 4096, got {quad_points}"
        )));
    }
    const EPS: f64 = 1e-10;
    let integral = integrate_adaptive_from(
        |t| g.phi(t) / g.phi_derivative(t),
        EPS,
        1.0 - EPS,
        1e-10,
        quad_points,
        4096,
    )?;
    Ok(1.0 + 4.0 * integral)
}

/// Spearman's ρ_S = 12 ∬ (C(u, v) − uv) du dv.
///
/// Evaluated by adaptive tensor quadrature starting from a
/// `quad_points`-node rule (tolerance 1e-9, cap 2048 per axis). The
/// Fréchet–Hoeffding bounds are dispatched to their analytic values ±1: their
/// integrands have a kink along a diagonal, so tensor rules converge only at
/// ~n⁻² and cannot reach the tolerance, while the analytic integrals
/// 12(∫∫min(u,v) − 1/4) = 1 and its reflection are exact.
pub fn spearman_rho(c: &CopulaFamily, quad_points: usize) -> Result<f64> {
    c.validate()?;
    if !(2..=2048).contains(&quad_points) {
        return Err(Error::Domain(format!(
            "spearman_rho needs 2 <= quad_points <= 2048, got {quad_points}"
        )));
    }
    match *c {
        CopulaFamily::LowerBound => Ok(-1.0),
        CopulaFamily::UpperBound => Ok(1.0),
        _ => {
            let f = |u: f64, v: f64| c.cdf(u, v).map_or(f64::NAN, |cuv| cuv - u * v);
            let integral =
                integrate2d_adaptive(&f, (0.0, 1.0), (0.0, 1.0), 1e-9, quad_points, 2048)?;
            Ok(12.0 * integral)
        }
    }
}

/// Tail dependence coefficients by closed form:
/// Clayton (2^{−1/θ}, 0); Gumbel (0, 2 − 2^{1/θ}); Gaussian (0, 0);
/// Π (0, 0); M (1, 1); W (0, 0).
pub fn tail_coefficients(c: &CopulaFamily) -> Result<TailCoefficients> {
    c.validate()?;
    let (lambda_lower, lambda_upper) = match *c {
        CopulaFamily::Independence | CopulaFamily::LowerBound | CopulaFamily::Gaussian { .. } => {
            (0.0, 0.0)
        }
        CopulaFamily::UpperBound => (1.0, 1.0),
        CopulaFamily::Clayton { theta } => (2.0_f64.powf(-1.0 / theta), 0.0),
        CopulaFamily::Gumbel { theta } => (0.0, 2.0 - 2.0_f64.powf(1.0 / theta)),
    };
    Ok(TailCoefficients {
        lambda_lower,
        lambda_upper,
    })
}

/// Diagonal tail ratios along a sequence of levels: C(u, u)/u for the lower
/// corner, (1 − 2u + C(u, u))/(1 − u) for the upper corner.
///
/// `u_sequence` must lie strictly inside (0, 1) and move strictly monotonically
/// toward the probed corner (decreasing for lower, increasing for upper). The
/// CDF's log-space guards keep the ratios finite down to u = 1e-300.
pub fn tail_limit_numeric(
    c: &CopulaFamily,
    side: TailSide,
    u_sequence: &[f64],
) -> Result<Vec<f64>> {
    c.validate()?;
    if u_sequence.is_empty() {
        return Err(Error::InvalidData(
            "tail limit needs at least one level".to_string(),
        ));
    }
    for &u in u_sequence {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "tail levels must lie strictly inside (0, 1), got {u}"
            )));
        }
    }
    let monotone_ok = u_sequence.windows(2).all(|w| match side {
        TailSide::Lower => w[1] < w[0],
        TailSide::Upper => w[1] > w[0],
    });
    if !monotone_ok {
        return Err(Error::InvalidData(format!(
            "tail levels must move strictly monotonically toward the {} corner",
            match side {
                TailSide::Lower => "lower",
                TailSide::Upper => "upper",
            }
        )));
    }
    u_sequence
        .iter()
        .map(|&u| {
            let cuu = c.cdf(u, u)?;
            Ok(match side {
                TailSide::Lower => cuu / u,
                TailSide::Upper => (1.0 - 2.0 * u + cuu) / (1.0 - u),
            })
        })
        .collect()
}

/// Exact Kendall's τ of the Gaussian family, inverted: ρ = sin(πτ/2).
/// Shared by the moment estimators.
pub(crate) fn gaussian_rho_from_tau(tau: f64) -> f64 {
    (FRAC_PI_2 * tau).sin()
}
