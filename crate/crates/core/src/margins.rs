//! Univariate margins: CDF, quantile, and density for the distributions a
//! joint model can carry on each axis.
//!
//! Supported margins and their textual specifications (the grammar used by
//! the CLI's `--margins` flag):
//!
//! | spec             | distribution                               |
//! |------------------|--------------------------------------------|
//! | `uniform`        | Uniform on [0, 1]                          |
//! | `exp:<rate>`     | Exponential with rate λ > 0                |
//! | `stdnormal`      | Standard normal                            |
//! | `lognormal:<s>`  | exp(s·Z) for standard normal Z, shape s > 0 |

use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
use std::fmt;
use std::str::FromStr;

/// A continuous univariate margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Margin {
    /// Uniform on [0, 1].
    Uniform01,
    /// Exponential with rate λ > 0: F(x) = 1 − e^(−λx) on x ≥ 0.
    Exponential {
        /// Rate parameter λ > 0.
        rate: f64,
    },
    /// Standard normal.
    StdNormal,
    /// Log-normal, X = exp(s·Z) with Z standard normal and shape s > 0.
    LogNormal {
        /// Shape parameter s > 0 (the log-scale standard deviation).
        shape: f64,
    },
}

impl Margin {
    /// Exponential margin with the given rate; rejects λ ≤ 0 and non-finite λ.
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Parameter(format!(
                "exponential rate must be a positive finite number, got {rate}"
            )));
        }
        Ok(Margin::Exponential { rate })
    }

    /// Log-normal margin with the given shape; rejects s ≤ 0 and non-finite s.
    pub fn log_normal(shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::Parameter(format!(
                "log-normal shape must be a positive finite number, got {shape}"
            )));
        }
        Ok(Margin::LogNormal { shape })
    }

    /// Cumulative distribution function F(x).
    ///
    /// Total on the extended reals; nondecreasing with limits 0 and 1.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Margin::Uniform01 => x.clamp(0.0, 1.0),
            Margin::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    // 1 - e^(-λx) evaluated as -expm1(-λx) to keep precision
                    // for small λx.
                    -(-rate * x).exp_m1()
                }
            }
            Margin::StdNormal => std_normal_cdf(x),
            Margin::LogNormal { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf(x.ln() / shape)
                }
            }
        }
    }

    /// Quantile function F⁻¹(p) for p ∈ (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires p in (0, 1), got {p}"
            )));
        }
        Ok(match *self {
            Margin::Uniform01 => p,
            // -ln(1-p)/λ via ln_1p for precision near p = 0.
            Margin::Exponential { rate } => -(-p).ln_1p() / rate,
            Margin::StdNormal => std_normal_quantile(p)?,
            Margin::LogNormal { shape } => (shape * std_normal_quantile(p)?).exp(),
        })
    }

    /// Probability density function f(x); zero off the support.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Margin::Uniform01 => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Margin::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Margin::StdNormal => std_normal_pdf(x),
            Margin::LogNormal { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_pdf(x.ln() / shape) / (shape * x)
                }
            }
        }
    }
}

impl fmt::Display for Margin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Margin::Uniform01 => write!(f, "uniform"),
            Margin::Exponential { rate } => write!(f, "exp:{rate}"),
            Margin::StdNormal => write!(f, "stdnormal"),
            Margin::LogNormal { shape } => write!(f, "lognormal:{shape}"),
        }
    }
}

impl FromStr for Margin {
    type Err = Error;

    /// Parses the margin grammar: `uniform`, `exp:<rate>`, `stdnormal`,
    /// `lognormal:<shape>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => return Ok(Margin::Uniform01),
            "stdnormal" => return Ok(Margin::StdNormal),
            _ => {}
        }
        if let Some(arg) = s.strip_prefix("exp:") {
            let rate: f64 = arg
                .parse()
                .map_err(|_| Error::Parse(format!("margin `{s}`: `{arg}` is not a number")))?;
            return Margin::exponential(rate);
        }
        if let Some(arg) = s.strip_prefix("lognormal:") {
            let shape: f64 = arg
                .parse()
                .map_err(|_| Error::Parse(format!("margin `{s}`: `{arg}` is not a number")))?;
            return Margin::log_normal(shape);
        }
        Err(Error::Parse(format!(
            "unknown margin `{s}` (expected uniform, exp:<rate>, stdnormal, or lognormal:<shape>)"
        )))
    }
}
