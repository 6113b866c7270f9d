//! Bivariate copula families: CDFs, densities, Archimedean generators,
//! axiom checking, and Sklar-style joint models.
//!
//! A bivariate copula is a CDF on the unit square with uniform margins.
//! Every copula is squeezed between the Fréchet–Hoeffding bounds
//! W(u, v) = max(u + v − 1, 0) and M(u, v) = min(u, v); the toolkit treats
//! both bounds as first-class (singular) families alongside the parametric
//! Clayton, Gumbel, and Gaussian families.

use crate::error::{Error, Result};
use crate::exec;
use crate::margins::Margin;
use crate::numerics::{bivariate_normal_cdf, integrate2d_adaptive, std_normal_quantile};
use std::fmt;
use std::str::FromStr;

/// Below this coordinate the Clayton CDF switches to a log-space evaluation
/// so that `u.powf(-theta)` cannot overflow for large `theta`.
const LOG_SPACE_CUTOFF: f64 = 1e-8;

/// A bivariate copula family with its parameter, if any.
///
/// Parameter ranges are enforced by the constructors and re-checked by every
/// operation (the variants have public fields, so values can also be built
/// directly):
///
/// * Clayton: `theta > 0`
/// * Gumbel: `theta >= 1`
/// * Gaussian: `-1 < rho < 1`
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaFamily {
    /// Π(u, v) = uv.
    Independence,
    /// The lower Fréchet–Hoeffding bound W(u, v) = max(u + v − 1, 0);
    /// the CDF of (U, 1 − U), perfect negative dependence.
    LowerBound,
    /// The upper Fréchet–Hoeffding bound M(u, v) = min(u, v);
    /// the CDF of (U, U), perfect positive dependence.
    UpperBound,
    /// Clayton: C(u, v) = (u^{−θ} + v^{−θ} − 1)^{−1/θ}, lower-tail dependent.
    Clayton { theta: f64 },
    /// Gumbel: C(u, v) = exp(−((−ln u)^θ + (−ln v)^θ)^{1/θ}), upper-tail
    /// dependent.
    Gumbel { theta: f64 },
    /// Gaussian: C(u, v) = Φ₂(Φ⁻¹(u), Φ⁻¹(v); ρ), tail independent.
    Gaussian { rho: f64 },
}

impl CopulaFamily {
    /// Clayton copula with dependence parameter `theta > 0`.
    pub fn clayton(theta: f64) -> Result<Self> {
        let c = CopulaFamily::Clayton { theta };
        c.validate()?;
        Ok(c)
    }

    /// Gumbel copula with dependence parameter `theta >= 1`
    /// (`theta == 1` is independence).
    pub fn gumbel(theta: f64) -> Result<Self> {
        let c = CopulaFamily::Gumbel { theta };
        c.validate()?;
        Ok(c)
    }

    /// Gaussian copula with correlation `rho` strictly inside (−1, 1).
    pub fn gaussian(rho: f64) -> Result<Self> {
        let c = CopulaFamily::Gaussian { rho };
        c.validate()?;
        Ok(c)
    }

    /// Checks the parameter range for the variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            CopulaFamily::Independence | CopulaFamily::LowerBound | CopulaFamily::UpperBound => {
                Ok(())
            }
            CopulaFamily::Clayton { theta } => {
                if theta.is_finite() && theta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "Clayton theta must be a positive finite number, got {theta}"
                    )))
                }
            }
            CopulaFamily::Gumbel { theta } => {
                if theta.is_finite() && theta >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "Gumbel theta must be finite and >= 1, got {theta}"
                    )))
                }
            }
            CopulaFamily::Gaussian { rho } => {
                if rho.is_finite() && rho.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "Gaussian rho must lie strictly inside (-1, 1), got {rho}"
                    )))
                }
            }
        }
    }

    /// Copula CDF C(u, v) for (u, v) in the closed unit square.
    ///
    /// Boundary values are returned exactly: C(u, 0) = C(0, v) = 0,
    /// C(u, 1) = u, C(1, v) = v. Coordinates outside [0, 1] (or NaN) are a
    /// domain error. The result always satisfies W(u, v) ≤ C(u, v) ≤ M(u, v).
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        check_closed_unit_square(u, v)?;
        if u == 0.0 || v == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(v);
        }
        if v == 1.0 {
            return Ok(u);
        }
        let value = match *self {
            CopulaFamily::Independence => u * v,
            CopulaFamily::LowerBound => (u + v - 1.0).max(0.0),
            CopulaFamily::UpperBound => u.min(v),
            CopulaFamily::Clayton { theta } => clayton_cdf(theta, u, v),
            CopulaFamily::Gumbel { theta } => gumbel_cdf(theta, u, v),
            CopulaFamily::Gaussian { rho } => {
                let x = std_normal_quantile(u)?;
                let y = std_normal_quantile(v)?;
                bivariate_normal_cdf(x, y, rho)?
            }
        };
        Ok(value)
    }

    /// Copula density c(u, v) = ∂²C/∂u∂v for (u, v) strictly inside the unit
    /// square.
    ///
    /// The Fréchet–Hoeffding bounds concentrate their mass on a line segment
    /// and have no density ([`Error::NoDensity`]); boundary points are a
    /// domain error for every family.
    pub fn density(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.log_density(u, v)?.exp())
    }

    /// Natural logarithm of the copula density, computed directly in
    /// log-space so extreme parameters and near-boundary points do not
    /// overflow. Same domain rules as [`CopulaFamily::density`].
    pub fn log_density(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!(
                "density needs (u, v) strictly inside the unit square, got ({u}, {v})"
            )));
        }
        match *self {
            CopulaFamily::Independence => Ok(0.0),
            CopulaFamily::LowerBound | CopulaFamily::UpperBound => Err(Error::NoDensity(
                "the Fréchet–Hoeffding bounds are singular: all mass lies on a line segment"
                    .to_string(),
            )),
            CopulaFamily::Clayton { theta } => Ok(clayton_log_density(theta, u, v)),
            CopulaFamily::Gumbel { theta } => Ok(gumbel_log_density(theta, u, v)),
            CopulaFamily::Gaussian { rho } => {
                let x = std_normal_quantile(u)?;
                let y = std_normal_quantile(v)?;
                let r2 = 1.0 - rho * rho;
                Ok(-0.5 * r2.ln() - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2))
            }
        }
    }
}

impl fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CopulaFamily::Independence => write!(f, "indep"),
            CopulaFamily::LowerBound => write!(f, "w"),
            CopulaFamily::UpperBound => write!(f, "m"),
            CopulaFamily::Clayton { theta } => write!(f, "clayton:{theta}"),
            CopulaFamily::Gumbel { theta } => write!(f, "gumbel:{theta}"),
            CopulaFamily::Gaussian { rho } => write!(f, "gauss:{rho}"),
        }
    }
}

impl FromStr for CopulaFamily {
    type Err = Error;

    /// Parses the copula grammar: `indep`, `w`, `m`, `clayton:<theta>`,
    /// `gumbel:<theta>`, `gauss:<rho>`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let (name, param) = match text.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (text, None),
        };
        let need = |param: Option<&str>| -> Result<f64> {
            let tok = param.ok_or_else(|| {
                Error::Parse(format!("'{name}' needs a parameter, e.g. {name}:2.0"))
            })?;
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid number '{tok}' in copula '{text}'")))
        };
        let reject_param = |family: CopulaFamily| -> Result<CopulaFamily> {
            match param {
                Some(p) => Err(Error::Parse(format!(
                    "'{name}' takes no parameter, got '{name}:{p}'"
                ))),
                None => Ok(family),
            }
        };
        match name {
            "indep" => reject_param(CopulaFamily::Independence),
            "w" => reject_param(CopulaFamily::LowerBound),
            "m" => reject_param(CopulaFamily::UpperBound),
            "clayton" => CopulaFamily::clayton(need(param)?),
            "gumbel" => CopulaFamily::gumbel(need(param)?),
            "gauss" => CopulaFamily::gaussian(need(param)?),
            other => Err(Error::Parse(format!(
                "unknown copula family '{other}' (expected indep, w, m, \
                 clayton:<theta>, gumbel:<theta>, or gauss:<rho>)"
            ))),
        }
    }
}

fn check_closed_unit_square(u: f64, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "copula CDF needs (u, v) in the closed unit square, got ({u}, {v})"
        )))
    }
}

/// ln(u^{−θ} + v^{−θ} − 1) evaluated from a = −θ ln u and b = −θ ln v, so it
/// stays finite when the direct powers would overflow. With m = max(a, b),
/// the shifted sum e^{a−m} + e^{b−m} − e^{−m} lies in (0, 2] for interior
/// (u, v): one exponential is exactly 1 and e^{−m} < 1 because m > 0.
fn clayton_ln_sum(theta: f64, u: f64, v: f64) -> f64 {
    let a = -theta * u.ln();
    let b = -theta * v.ln();
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp() - (-m).exp()).ln()
}

fn clayton_cdf(theta: f64, u: f64, v: f64) -> f64 {
    let direct_overflows = theta * (-u.ln().min(v.ln())) > 690.0;
    if u < LOG_SPACE_CUTOFF || v < LOG_SPACE_CUTOFF || direct_overflows {
        (-clayton_ln_sum(theta, u, v) / theta).exp()
    } else {
        (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
    }
}

/// ln c(u, v) for Clayton:
/// ln(1 + θ) − (θ + 1)(ln u + ln v) − (1/θ + 2) ln(u^{−θ} + v^{−θ} − 1).
fn clayton_log_density(theta: f64, u: f64, v: f64) -> f64 {
    (1.0 + theta).ln() - (theta + 1.0) * (u.ln() + v.ln())
        - (1.0 / theta + 2.0) * clayton_ln_sum(theta, u, v)
}

/// s(u, v) = ((−ln u)^θ + (−ln v)^θ)^{1/θ}, factored as
/// hi · (1 + (lo/hi)^θ)^{1/θ} so the inner power never overflows.
fn gumbel_s(theta: f64, u: f64, v: f64) -> f64 {
    let x = -u.ln();
    let y = -v.ln();
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi * ((lo / hi).powf(theta).ln_1p() / theta).exp()
}

fn gumbel_cdf(theta: f64, u: f64, v: f64) -> f64 {
    (-gumbel_s(theta, u, v)).exp()
}

/// ln c(u, v) for Gumbel with x = −ln u, y = −ln v, s = (x^θ + y^θ)^{1/θ}:
/// ln c = −s + (θ − 1)(ln x + ln y) + (1 − 2θ) ln s + ln(s + θ − 1) + x + y.
fn gumbel_log_density(theta: f64, u: f64, v: f64) -> f64 {
    let x = -u.ln();
    let y = -v.ln();
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let ln_s = hi.ln() + (lo / hi).powf(theta).ln_1p() / theta;
    let s = ln_s.exp();
    -s + (theta - 1.0) * (x.ln() + y.ln()) + (1.0 - 2.0 * theta) * ln_s
        + (s + theta - 1.0).ln()
        + x
        + y
}

// ---------------------------------------------------------------------------
// Archimedean generators
// ---------------------------------------------------------------------------

/// An Archimedean generator φ: (0, 1] → [0, ∞): continuous, strictly
/// decreasing, convex, with φ(1) = 0. It induces the copula
/// C(u, v) = φ⁻¹(φ(u) + φ(v)).
///
/// For non-strict generators (φ(0⁺) finite), `phi_inverse` must map arguments
/// beyond φ(0⁺) to 0; the built-in constructors are all strict.
pub struct ArchimedeanGenerator {
    phi: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    phi_inverse: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    phi_derivative: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    parameter: f64,
}

impl ArchimedeanGenerator {
    /// Wraps caller-supplied closures for φ, φ⁻¹, and φ′. The caller is
    /// responsible for the generator axioms; [`crate::dependence`] and the
    /// tests probe them numerically (φ(1) = 0, strict decrease, convexity,
    /// round-trip φ⁻¹(φ(t)) = t).
    pub fn new<P, I, D>(parameter: f64, phi: P, phi_inverse: I, phi_derivative: D) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        I: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ArchimedeanGenerator {
            phi: Box::new(phi),
            phi_inverse: Box::new(phi_inverse),
            phi_derivative: Box::new(phi_derivative),
            parameter,
        }
    }

    /// Power generator φ(t) = t^{−θ} − 1 with θ > 0; induces the Clayton
    /// family.
    pub fn power(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::Parameter(format!(
                "power generator needs finite theta > 0, got {theta}"
            )));
        }
        Ok(Self::new(
            theta,
            move |t| t.powf(-theta) - 1.0,
            move |s| (1.0 + s).powf(-1.0 / theta),
            move |t| -theta * t.powf(-theta - 1.0),
        ))
    }

    /// Logarithmic power generator φ(t) = (−ln t)^θ with θ ≥ 1; induces the
    /// Gumbel family (θ = 1 gives φ(t) = −ln t, the independence generator).
    pub fn log_power(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta >= 1.0) {
            return Err(Error::Parameter(format!(
                "log-power generator needs finite theta >= 1, got {theta}"
            )));
        }
        Ok(Self::new(
            theta,
            move |t| (-t.ln()).powf(theta),
            move |s| (-s.powf(1.0 / theta)).exp(),
            move |t| -theta * (-t.ln()).powf(theta - 1.0) / t,
        ))
    }

    /// The dependence parameter the generator was built with.
    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    /// φ(t).
    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    /// φ⁻¹(s).
    pub fn phi_inverse(&self, s: f64) -> f64 {
        (self.phi_inverse)(s)
    }

    /// φ′(t).
    pub fn phi_derivative(&self, t: f64) -> f64 {
        (self.phi_derivative)(t)
    }

    /// The induced copula CDF C(u, v) = φ⁻¹(φ(u) + φ(v)) for (u, v) in
    /// (0, 1]².
    ///
    /// Zero coordinates are rejected: a strict generator is unbounded there,
    /// so φ(0) is not evaluable. (The grounded value C(0, v) = 0 is available
    /// through [`CopulaFamily::cdf`] for the parametric families.)
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0 && v > 0.0 && v <= 1.0) {
            return Err(Error::Domain(format!(
                "generator CDF needs (u, v) in (0, 1]^2 (phi may be unbounded at 0), got ({u}, {v})"
            )));
        }
        Ok(self.phi_inverse(self.phi(u) + self.phi(v)).clamp(0.0, 1.0))
    }
}

impl fmt::Debug for ArchimedeanGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArchimedeanGenerator")
            .field("parameter", &self.parameter)
            .finish_non_exhaustive()
    }
}

// ---------------------------------------------------------------------------
// Axiom and bound checks
// ---------------------------------------------------------------------------

/// Outcome of a grid check of the three copula axioms. Produced by
/// [`check_copula_axioms`] / [`check_axioms_fn`]; failures are reported here
/// rather than as errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomReport {
    /// Points per axis of the checking grid (includes 0 and 1).
    pub grid_size: usize,
    /// Largest |C(u, 0)| or |C(0, v)| on the grid; 0 for a grounded copula.
    pub worst_grounding_error: f64,
    /// Largest |C(u, 1) − u| or |C(1, v) − v| on the grid.
    pub worst_margin_error: f64,
    /// Smallest mass C(u₂,v₂) − C(u₁,v₂) − C(u₂,v₁) + C(u₁,v₁) over *all*
    /// grid rectangles, not only adjacent cells.
    pub min_rectangle_mass: f64,
}

impl AxiomReport {
    /// Shared tolerance for all three axiom checks.
    pub const TOLERANCE: f64 = 1e-12;

    /// True when grounding, uniform margins, and two-increasingness all hold
    /// within [`AxiomReport::TOLERANCE`].
    pub fn passes(&self) -> bool {
        self.worst_grounding_error <= Self::TOLERANCE
            && self.worst_margin_error <= Self::TOLERANCE
            && self.min_rectangle_mass >= -Self::TOLERANCE
    }
}

fn unit_grid(grid_size: usize) -> Vec<f64> {
    let last = (grid_size - 1) as f64;
    (0..grid_size).map(|i| i as f64 / last).collect()
}

/// Evaluates `f` on the `pts × pts` grid (row-major: `values[i * g + j] =
/// f(pts[i], pts[j])`), chunking rows through the execution driver.
fn grid_values<F>(f: &F, pts: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let g = pts.len();
    let rows = exec::map_chunks(g, 4, |_, range| {
        let mut out = Vec::with_capacity(range.len() * g);
        for i in range {
            for j in 0..g {
                out.push(f(pts[i], pts[j]));
            }
        }
        out
    });
    rows.into_iter().collect()
}

/// Checks grounding, uniform margins, and two-increasingness of an arbitrary
/// function on a `grid_size × grid_size` grid over the closed unit square
/// (`grid_size >= 2`). Two-increasingness scans every grid rectangle, because
/// the per-rectangle tolerance does not accumulate over unions of cells.
pub fn check_axioms_fn<F>(f: F, grid_size: usize) -> Result<AxiomReport>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    if grid_size < 2 {
        return Err(Error::Domain(format!(
            "axiom check needs grid_size >= 2, got {grid_size}"
        )));
    }
    let pts = unit_grid(grid_size);
    let g = grid_size;
    let cval = grid_values(&f, &pts)?;

    let mut worst_grounding_error: f64 = 0.0;
    let mut worst_margin_error: f64 = 0.0;
    for i in 0..g {
        worst_grounding_error = worst_grounding_error
            .max(cval[i * g].abs()) // C(u, 0)
            .max(cval[i].abs()); // C(0, v)
        worst_margin_error = worst_margin_error
            .max((cval[i * g + (g - 1)] - pts[i]).abs()) // C(u, 1)
            .max((cval[(g - 1) * g + i] - pts[i]).abs()); // C(1, v)
    }

    let mut min_rectangle_mass = f64::INFINITY;
    for i1 in 0..g {
        for i2 in (i1 + 1)..g {
            for j1 in 0..g {
                for j2 in (j1 + 1)..g {
                    let mass = cval[i2 * g + j2] - cval[i1 * g + j2] - cval[i2 * g + j1]
                        + cval[i1 * g + j1];
                    if mass < min_rectangle_mass {
                        min_rectangle_mass = mass;
                    }
                }
            }
        }
    }

    Ok(AxiomReport {
        grid_size,
        worst_grounding_error,
        worst_margin_error,
        min_rectangle_mass,
    })
}

/// [`check_axioms_fn`] applied to a copula family's CDF.
pub fn check_copula_axioms(c: &CopulaFamily, grid_size: usize) -> Result<AxiomReport> {
    c.validate()?;
    check_axioms_fn(|u, v| c.cdf(u, v), grid_size)
}

/// Largest violation of the Fréchet–Hoeffding bounds,
/// max(W(u, v) − C(u, v), C(u, v) − M(u, v), 0), over a
/// `grid_size × grid_size` grid. Exactly 0 when the family is itself one of
/// the bounds.
pub fn frechet_bounds_check(c: &CopulaFamily, grid_size: usize) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::Domain(format!(
            "bounds check needs grid_size >= 2, got {grid_size}"
        )));
    }
    c.validate()?;
    let pts = unit_grid(grid_size);
    let cval = grid_values(&|u, v| c.cdf(u, v), &pts)?;
    let g = grid_size;
    let mut worst: f64 = 0.0;
    for i in 0..g {
        for j in 0..g {
            let (u, v) = (pts[i], pts[j]);
            // Evaluate the envelope through the bound copulas themselves so
            // their boundary shortcuts apply: the inline u + v − 1 picks up a
            // half-ulp against C(1, v) = v when 1 + v rounds.
            let w = CopulaFamily::LowerBound.cdf(u, v)?;
            let m = CopulaFamily::UpperBound.cdf(u, v)?;
            let cuv = cval[i * g + j];
            worst = worst.max(w - cuv).max(cuv - m);
        }
    }
    Ok(worst)
}

/// Direction of quadrant dependence, decided on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadrantVerdict {
    /// C(u, v) ≥ uv everywhere on the grid (within tolerance).
    Positive,
    /// C(u, v) ≤ uv everywhere on the grid (within tolerance).
    Negative,
    /// The deviation C − Π changes sign on the grid.
    Neither,
}

/// Grid summary of C(u, v) − uv from [`quadrant_dependence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantReport {
    pub verdict: QuadrantVerdict,
    /// Smallest C(u, v) − uv over the grid.
    pub min_deviation: f64,
    /// Largest C(u, v) − uv over the grid.
    pub max_deviation: f64,
}

/// Classifies the family as positively / negatively quadrant dependent by
/// the sign of C(u, v) − uv on a `grid_size × grid_size` grid (tolerance
/// 1e-12). Positive is checked first, so the independence copula — which is
/// both — reports [`QuadrantVerdict::Positive`] with zero deviations.
pub fn quadrant_dependence(c: &CopulaFamily, grid_size: usize) -> Result<QuadrantReport> {
    if grid_size < 2 {
        return Err(Error::Domain(format!(
            "quadrant check needs grid_size >= 2, got {grid_size}"
        )));
    }
    c.validate()?;
    let pts = unit_grid(grid_size);
    let cval = grid_values(&|u, v| c.cdf(u, v), &pts)?;
    let g = grid_size;
    let mut min_dev = f64::INFINITY;
    let mut max_dev = f64::NEG_INFINITY;
    for i in 0..g {
        for j in 0..g {
            let dev = cval[i * g + j] - pts[i] * pts[j];
            min_dev = min_dev.min(dev);
            max_dev = max_dev.max(dev);
        }
    }
    const TOL: f64 = 1e-12;
    let verdict = if min_dev >= -TOL {
        QuadrantVerdict::Positive
    } else if max_dev <= TOL {
        QuadrantVerdict::Negative
    } else {
        QuadrantVerdict::Neither
    };
    Ok(QuadrantReport {
        verdict,
        min_deviation: min_dev,
        max_deviation: max_dev,
    })
}

// ---------------------------------------------------------------------------
// Sklar composition
// ---------------------------------------------------------------------------

/// A bivariate distribution assembled Sklar-style from a copula and two
/// margins: F(x, y) = C(F_X(x), F_Y(y)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointModel {
    pub copula: CopulaFamily,
    pub margin_x: Margin,
    pub margin_y: Margin,
}

impl JointModel {
    pub fn new(copula: CopulaFamily, margin_x: Margin, margin_y: Margin) -> Result<Self> {
        copula.validate()?;
        Ok(JointModel {
            copula,
            margin_x,
            margin_y,
        })
    }

    /// Joint CDF F(x, y) = C(F_X(x), F_Y(y)). Sending one coordinate to +∞
    /// recovers the other margin because C(u, 1) = u.
    pub fn cdf(&self, x: f64, y: f64) -> Result<f64> {
        self.copula.cdf(self.margin_x.cdf(x), self.margin_y.cdf(y))
    }
}

/// Covariance of (X, Y) under the joint model, via Hoeffding's identity
/// Cov(X, Y) = ∬ (F(x, y) − F_X(x) F_Y(y)) dx dy.
///
/// The integral is taken over the product of the margins' [ε, 1 − ε]
/// quantile windows with ε = 5e-9 (≥ 1 − 1e-8 of the mass per margin) and
/// refined by doubling the per-axis rule from `quad_points` until two
/// estimates agree to 1e-7, up to 4096 points per axis
/// ([`Error::NoConvergence`] if still moving there).
pub fn hoeffding_covariance(j: &JointModel, quad_points: usize) -> Result<f64> {
    j.copula.validate()?;
    if !(2..=4096).contains(&quad_points) {
        return Err(Error::Domain(format!(
            "hoeffding_covariance needs 2 <= quad_points <= 4096, got {quad_points}"
        )));
    }
    const EPS: f64 = 5e-9;
    let x_window = (j.margin_x.quantile(EPS)?, j.margin_x.quantile(1.0 - EPS)?);
    let y_window = (j.margin_y.quantile(EPS)?, j.margin_y.quantile(1.0 - EPS)?);
    // Copula evaluation cannot fail here (the family is validated and margin
    // CDFs land in [0, 1]); an unexpected error becomes NaN, which poisons
    // the convergence test and surfaces as NoConvergence.
    let integrand = |x: f64, y: f64| -> f64 {
        let fx = j.margin_x.cdf(x);
        let fy = j.margin_y.cdf(y);
        j.copula.cdf(fx, fy).map_or(f64::NAN, |c| c - fx * fy)
    };
    integrate2d_adaptive(&integrand, x_window, y_window, 1e-7, quad_points, 4096)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::margins::Margin;

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: got {actual}, expected {expected} (tol {tol})"
        );
    }

    #[test]
    fn constructors_enforce_parameter_ranges() {
        assert!(CopulaFamily::clayton(2.88).is_ok());
        assert!(matches!(
            CopulaFamily::clayton(0.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            CopulaFamily::clayton(f64::NAN),
            Err(Error::Parameter(_))
        ));
        assert!(CopulaFamily::gumbel(1.0).is_ok());
        assert!(matches!(
            CopulaFamily::gumbel(0.99),
            Err(Error::Parameter(_))
        ));
        assert!(CopulaFamily::gaussian(-0.9999).is_ok());
        assert!(matches!(
            CopulaFamily::gaussian(1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            CopulaFamily::gaussian(f64::INFINITY),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn cdf_matches_closed_form_examples() {
        let indep = CopulaFamily::Independence;
        assert_close(indep.cdf(0.3, 0.5).unwrap(), 0.15, 1e-15, "indep(0.3,0.5)");

        let clayton = CopulaFamily::clayton(1.0).unwrap();
        assert_close(
            clayton.cdf(0.5, 0.5).unwrap(),
            1.0 / 3.0,
            1e-15,
            "clayton_1(0.5,0.5)",
        );

        let w = CopulaFamily::LowerBound;
        let m = CopulaFamily::UpperBound;
        assert_eq!(w.cdf(0.3, 0.4).unwrap(), 0.0);
        assert_eq!(m.cdf(0.3, 0.4).unwrap(), 0.3);

        // Φ₂(0, 0; 0.8) = 1/4 + asin(0.8) / (2π).
        let gauss = CopulaFamily::gaussian(0.8).unwrap();
        assert_close(
            gauss.cdf(0.5, 0.5).unwrap(),
            0.39758361765043326,
            1e-12,
            "gauss_0.8(0.5,0.5)",
        );
    }

    #[test]
    fn cdf_boundary_values_are_exact() {
        let families = [
            CopulaFamily::Independence,
            CopulaFamily::LowerBound,
            CopulaFamily::UpperBound,
            CopulaFamily::clayton(2.88).unwrap(),
            CopulaFamily::gumbel(2.44).unwrap(),
            CopulaFamily::gaussian(0.8).unwrap(),
        ];
        for c in &families {
            for t in [0.0, 0.25, 0.7, 1.0] {
                assert_eq!(c.cdf(t, 0.0).unwrap(), 0.0, "{c}: C({t}, 0)");
                assert_eq!(c.cdf(0.0, t).unwrap(), 0.0, "{c}: C(0, {t})");
                assert_eq!(c.cdf(t, 1.0).unwrap(), t, "{c}: C({t}, 1)");
                assert_eq!(c.cdf(1.0, t).unwrap(), t, "{c}: C(1, {t})");
            }
        }
    }

    #[test]
    fn cdf_rejects_points_outside_the_unit_square() {
        let c = CopulaFamily::clayton(1.0).unwrap();
        for (u, v) in [(-0.1, 0.5), (0.5, 1.1), (f64::NAN, 0.5), (0.5, f64::NAN)] {
            assert!(
                matches!(c.cdf(u, v), Err(Error::Domain(_))),
                "expected domain error at ({u}, {v})"
            );
        }
        let invalid = CopulaFamily::Clayton { theta: -1.0 };
        assert!(matches!(invalid.cdf(0.5, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn clayton_log_space_path_matches_direct_evaluation() {
        // u below the cutoff forces the log-space branch; the direct formula
        // is still finite here, so the two must agree to relative 1e-12.
        let theta = 2.0;
        let (u, v) = (1e-10, 0.5);
        let stable = clayton_cdf(theta, u, v);
        let direct = (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta);
        assert!(
            ((stable - direct) / direct).abs() < 1e-12,
            "log-space {stable} vs direct {direct}"
        );

        // Here u^{-θ} = 10^{400} overflows the direct path; the log-space
        // value must stay finite, positive, and below min(u, v).
        let c = CopulaFamily::clayton(50.0).unwrap();
        let tiny = c.cdf(1e-8, 0.5).unwrap();
        assert!(
            tiny.is_finite() && tiny > 0.0 && tiny <= 1e-8,
            "got {tiny}"
        );
    }

    #[test]
    fn gumbel_cdf_handles_extreme_parameters_and_corners() {
        // θ = 1 is exactly independence.
        let c1 = CopulaFamily::gumbel(1.0).unwrap();
        assert_close(c1.cdf(0.3, 0.7).unwrap(), 0.21, 1e-15, "gumbel_1 = indep");

        // Large θ approaches the upper bound M.
        let c = CopulaFamily::gumbel(500.0).unwrap();
        assert_close(c.cdf(0.3, 0.7).unwrap(), 0.3, 1e-3, "gumbel_500 ≈ M");

        // Near-zero coordinate stays finite.
        let tiny = c.cdf(1e-300, 0.5).unwrap();
        assert!(tiny.is_finite() && (0.0..=1e-299).contains(&tiny), "got {tiny}");
    }

    #[test]
    fn density_closed_form_values() {
        let indep = CopulaFamily::Independence;
        assert_eq!(indep.density(0.42, 0.9).unwrap(), 1.0);

        // Clayton θ = 1 at (0.5, 0.5): 2 · 0.5^{-4} · 3^{-3} = 32/27.
        let clayton = CopulaFamily::clayton(1.0).unwrap();
        assert_close(
            clayton.density(0.5, 0.5).unwrap(),
            32.0 / 27.0,
            1e-12,
            "clayton_1 density(0.5,0.5)",
        );
        assert_close(
            clayton.log_density(0.5, 0.5).unwrap(),
            (32.0f64 / 27.0).ln(),
            1e-12,
            "clayton_1 log-density(0.5,0.5)",
        );

        // Gaussian ρ = 0 is independence.
        let g0 = CopulaFamily::gaussian(0.0).unwrap();
        assert_eq!(g0.density(0.3, 0.7).unwrap(), 1.0);

        // Gaussian at (0.5, 0.5): both quantiles are 0, so c = (1 − ρ²)^{-1/2}.
        let g = CopulaFamily::gaussian(0.8).unwrap();
        assert_close(
            g.density(0.5, 0.5).unwrap(),
            1.0 / 0.6,
            1e-12,
            "gauss_0.8 density(0.5,0.5)",
        );

        // Gumbel θ = 1 is independence.
        let g1 = CopulaFamily::gumbel(1.0).unwrap();
        assert_close(
            g1.density(0.25, 0.75).unwrap(),
            1.0,
            1e-12,
            "gumbel_1 density",
        );
    }

    #[test]
    fn density_rejects_boundary_and_singular_families() {
        let clayton = CopulaFamily::clayton(2.0).unwrap();
        for (u, v) in [(0.0, 0.5), (0.5, 1.0), (1.0, 0.0), (f64::NAN, 0.5)] {
            assert!(
                matches!(clayton.density(u, v), Err(Error::Domain(_))),
                "expected domain error at ({u}, {v})"
            );
        }
        assert!(matches!(
            CopulaFamily::LowerBound.density(0.5, 0.5),
            Err(Error::NoDensity(_))
        ));
        assert!(matches!(
            CopulaFamily::UpperBound.density(0.5, 0.5),
            Err(Error::NoDensity(_))
        ));
    }

    #[test]
    fn log_density_stays_finite_near_the_boundary() {
        let families = [
            CopulaFamily::clayton(10.0).unwrap(),
            CopulaFamily::gumbel(5.0).unwrap(),
            CopulaFamily::gaussian(0.9).unwrap(),
        ];
        for c in &families {
            for &(u, v) in &[(1e-12, 0.5), (0.5, 1e-12), (1e-12, 1.0 - 1e-12)] {
                let ld = c.log_density(u, v).unwrap();
                assert!(ld.is_finite(), "{c}: log-density at ({u}, {v}) = {ld}");
            }
        }
    }

    #[test]
    fn copula_grammar_round_trips() {
        for text in ["indep", "w", "m", "clayton:2.88", "gumbel:2.44", "gauss:0.8"] {
            let c: CopulaFamily = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        assert_eq!(
            "gauss:-0.5".parse::<CopulaFamily>().unwrap(),
            CopulaFamily::Gaussian { rho: -0.5 }
        );
    }

    #[test]
    fn copula_grammar_rejects_malformed_input() {
        for text in ["", "frank:2", "clayton", "clayton:", "clayton:abc", "indep:1", "w:0.5"] {
            assert!(
                matches!(text.parse::<CopulaFamily>(), Err(Error::Parse(_))),
                "expected parse error for '{text}'"
            );
        }
        // Well-formed syntax with an out-of-range parameter is a parameter
        // error, not a parse error.
        assert!(matches!(
            "gauss:1.5".parse::<CopulaFamily>(),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            "clayton:-2".parse::<CopulaFamily>(),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn custom_generator_matches_frozen_value() {
        // φ(t) = t^{-2} − 1 at (0.5, 0.5): φ(u) + φ(v) = 6, so
        // C = (1 + 6)^{-1/2} = 7^{-1/2}.
        let g = ArchimedeanGenerator::new(
            2.0,
            |t: f64| t.powf(-2.0) - 1.0,
            |s: f64| (1.0 + s).powf(-0.5),
            |t: f64| -2.0 * t.powf(-3.0),
        );
        assert_close(
            g.cdf(0.5, 0.5).unwrap(),
            0.37796447300922725,
            1e-12,
            "phi = t^-2 - 1 at (0.5, 0.5)",
        );
    }

    #[test]
    fn generator_cdf_rejects_zero_coordinates() {
        let g = ArchimedeanGenerator::power(2.0).unwrap();
        for (u, v) in [(0.0, 0.5), (0.5, 0.0), (-0.1, 0.5), (0.5, 1.5)] {
            assert!(
                matches!(g.cdf(u, v), Err(Error::Domain(_))),
                "expected domain error at ({u}, {v})"
            );
        }
        assert!(g.cdf(1.0, 1.0).is_ok());
    }

    #[test]
    fn log_power_generator_with_theta_one_gives_independence() {
        let g = ArchimedeanGenerator::log_power(1.0).unwrap();
        for &(u, v) in &[(0.2, 0.9), (0.5, 0.5), (0.99, 0.01)] {
            assert_close(g.cdf(u, v).unwrap(), u * v, 1e-12, "log-power theta=1");
        }
    }

    #[test]
    fn built_in_generators_reproduce_their_families() {
        let gen_c = ArchimedeanGenerator::power(2.0).unwrap();
        let clayton = CopulaFamily::clayton(2.0).unwrap();
        let gen_g = ArchimedeanGenerator::log_power(2.44).unwrap();
        let gumbel = CopulaFamily::gumbel(2.44).unwrap();
        for &(u, v) in &[(0.1, 0.9), (0.5, 0.5), (0.8, 0.3), (0.05, 0.05)] {
            assert_close(
                gen_c.cdf(u, v).unwrap(),
                clayton.cdf(u, v).unwrap(),
                1e-12,
                "power generator vs Clayton",
            );
            assert_close(
                gen_g.cdf(u, v).unwrap(),
                gumbel.cdf(u, v).unwrap(),
                1e-12,
                "log-power generator vs Gumbel",
            );
        }
    }

    #[test]
    fn generator_axioms_hold_numerically() {
        let gens = [
            ArchimedeanGenerator::power(0.5).unwrap(),
            ArchimedeanGenerator::power(2.88).unwrap(),
            ArchimedeanGenerator::log_power(1.0).unwrap(),
            ArchimedeanGenerator::log_power(3.0).unwrap(),
        ];
        for g in &gens {
            assert!(
                g.phi(1.0).abs() <= 1e-15,
                "phi(1) = {} for parameter {}",
                g.phi(1.0),
                g.parameter()
            );
            let mut t = 0.02;
            while t < 1.0 {
                // Round trip.
                assert_close(
                    g.phi_inverse(g.phi(t)),
                    t,
                    1e-10,
                    "phi_inverse(phi(t)) = t",
                );
                // Derivative closure vs central difference.
                let h = 1e-6;
                let fd = (g.phi(t + h) - g.phi(t - h)) / (2.0 * h);
                let d = g.phi_derivative(t);
                assert!(
                    (fd - d).abs() <= 1e-4 * d.abs().max(1.0),
                    "phi' mismatch at t={t}: closure {d}, central difference {fd}"
                );
                assert!(d < 0.0, "phi must be strictly decreasing, phi'({t}) = {d}");
                // Convexity via second differences.
                let h2 = 1e-3;
                let second = g.phi(t + h2) - 2.0 * g.phi(t) + g.phi(t - h2);
                assert!(
                    second >= -1e-9,
                    "second difference {second} < -1e-9 at t={t}"
                );
                t += 0.02;
            }
        }
    }

    #[test]
    fn axiom_check_passes_for_real_copulas() {
        let families = [
            CopulaFamily::Independence,
            CopulaFamily::LowerBound,
            CopulaFamily::UpperBound,
            CopulaFamily::clayton(2.88).unwrap(),
            CopulaFamily::gumbel(2.44).unwrap(),
            CopulaFamily::gaussian(0.8).unwrap(),
        ];
        for c in &families {
            let report = check_copula_axioms(c, 21).unwrap();
            assert!(
                report.passes(),
                "{c}: grounding {}, margin {}, min mass {}",
                report.worst_grounding_error,
                report.worst_margin_error,
                report.min_rectangle_mass
            );
        }
    }

    #[test]
    fn axiom_check_flags_a_corrupted_function() {
        // u + v − uv is the survival-style dual of Π: grounded fails
        // (f(u, 0) = u), margins fail (f(u, 1) = 1), and every rectangle has
        // negative mass.
        let report = check_axioms_fn(|u, v| Ok(u + v - u * v), 21).unwrap();
        assert!(!report.passes());
        assert!(report.worst_margin_error > AxiomReport::TOLERANCE);
        assert!(report.worst_grounding_error > AxiomReport::TOLERANCE);
        assert!(report.min_rectangle_mass < -AxiomReport::TOLERANCE);
    }

    #[test]
    fn axiom_check_rejects_degenerate_grid() {
        assert!(matches!(
            check_copula_axioms(&CopulaFamily::Independence, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn frechet_bounds_hold_on_grids() {
        assert_eq!(
            frechet_bounds_check(&CopulaFamily::LowerBound, 101).unwrap(),
            0.0
        );
        assert_eq!(
            frechet_bounds_check(&CopulaFamily::UpperBound, 101).unwrap(),
            0.0
        );
        let worst = frechet_bounds_check(&CopulaFamily::gaussian(0.8).unwrap(), 101).unwrap();
        assert!(worst <= 1e-12, "worst bound violation {worst}");
    }

    #[test]
    fn quadrant_dependence_classifies_families() {
        let indep = quadrant_dependence(&CopulaFamily::Independence, 21).unwrap();
        assert_eq!(indep.verdict, QuadrantVerdict::Positive);
        assert_eq!(indep.min_deviation, 0.0);
        assert_eq!(indep.max_deviation, 0.0);

        let clayton = quadrant_dependence(&CopulaFamily::clayton(2.0).unwrap(), 21).unwrap();
        assert_eq!(clayton.verdict, QuadrantVerdict::Positive);
        assert!(clayton.max_deviation > 0.01);

        let w = quadrant_dependence(&CopulaFamily::LowerBound, 21).unwrap();
        assert_eq!(w.verdict, QuadrantVerdict::Negative);
        assert!(w.min_deviation < -0.01);

        let neg = quadrant_dependence(&CopulaFamily::gaussian(-0.9).unwrap(), 21).unwrap();
        assert_eq!(neg.verdict, QuadrantVerdict::Negative);
    }

    #[test]
    fn joint_cdf_composes_copula_and_margins() {
        let exp = Margin::exponential(1.0).unwrap();
        let ln2 = std::f64::consts::LN_2;

        let indep = JointModel::new(CopulaFamily::Independence, exp, exp).unwrap();
        assert_close(indep.cdf(ln2, ln2).unwrap(), 0.25, 1e-15, "Π ∘ Exp(1)²");

        let clayton = JointModel::new(CopulaFamily::clayton(1.0).unwrap(), exp, exp).unwrap();
        assert_close(
            clayton.cdf(ln2, ln2).unwrap(),
            1.0 / 3.0,
            1e-15,
            "Clayton₁ ∘ Exp(1)²",
        );
    }

    #[test]
    fn joint_cdf_recovers_margins_in_the_limit() {
        let model = JointModel::new(
            CopulaFamily::gumbel(2.44).unwrap(),
            Margin::exponential(0.5).unwrap(),
            Margin::StdNormal,
        )
        .unwrap();
        for x in [0.1, 1.0, 4.0] {
            assert_close(
                model.cdf(x, 1e12).unwrap(),
                model.margin_x.cdf(x),
                1e-12,
                "y → ∞ recovers F_X",
            );
        }
        assert_close(
            model.cdf(1e12, 0.3).unwrap(),
            model.margin_y.cdf(0.3),
            1e-12,
            "x → ∞ recovers F_Y",
        );
    }

    #[test]
    fn hoeffding_covariance_matches_closed_forms() {
        let uniform = Margin::Uniform01;
        let exp = Margin::exponential(1.0).unwrap();

        // Independence: zero for any margins.
        for margins in [(uniform, uniform), (exp, exp), (uniform, exp)] {
            let j = JointModel::new(CopulaFamily::Independence, margins.0, margins.1).unwrap();
            let cov = hoeffding_covariance(&j, 64).unwrap();
            assert!(cov.abs() <= 1e-8, "independence covariance {cov}");
        }

        // (U, U): Cov = Var(U) = 1/12; (U, 1 − U): −1/12.
        let m = JointModel::new(CopulaFamily::UpperBound, uniform, uniform).unwrap();
        assert_close(
            hoeffding_covariance(&m, 64).unwrap(),
            1.0 / 12.0,
            1e-6,
            "Cov(U, U)",
        );
        let w = JointModel::new(CopulaFamily::LowerBound, uniform, uniform).unwrap();
        assert_close(
            hoeffding_covariance(&w, 64).unwrap(),
            -1.0 / 12.0,
            1e-6,
            "Cov(U, 1 − U)",
        );

        // Clayton θ = 2 with Exp(1) margins is strongly positively dependent.
        let c = JointModel::new(CopulaFamily::clayton(2.0).unwrap(), exp, exp).unwrap();
        assert!(hoeffding_covariance(&c, 64).unwrap() > 0.05);
    }

    #[test]
    fn hoeffding_covariance_validates_quad_points() {
        let j = JointModel::new(
            CopulaFamily::Independence,
            Margin::Uniform01,
            Margin::Uniform01,
        )
        .unwrap();
        assert!(matches!(
            hoeffding_covariance(&j, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hoeffding_covariance(&j, 5000),
            Err(Error::Domain(_))
        ));
    }
}
