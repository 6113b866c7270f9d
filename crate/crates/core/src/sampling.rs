//! Seeded random generation from each copula family and from Sklar-composed
//! joint models.
//!
//! All bulk samplers fill the output in fixed-size chunks, each chunk driven
//! by its own sub-seeded stream. The chunk boundaries and the per-chunk seeds
//! depend only on the parent source, so the output is bit-identical whether
//! the chunks run in parallel or sequentially.

use crate::copulas::{CopulaFamily, JointModel};
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{std_normal_cdf, std_normal_quantile};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::f64::consts::PI;

/// Pairs drawn per sub-seeded chunk in the bulk samplers.
const CHUNK: usize = 4096;

/// Largest double strictly below 1; with [`f64::MIN_POSITIVE`] it brackets
/// the open unit interval that pseudo-observations must stay inside.
const OPEN_UNIT_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

fn clamp_open_unit(x: f64) -> f64 {
    x.clamp(f64::MIN_POSITIVE, OPEN_UNIT_MAX)
}

/// A point on the copula scale: both coordinates strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoObservationPair {
    pub u: f64,
    pub v: f64,
}

/// A seedable stream of random variates.
///
/// The same seed always reproduces the same stream within one build of this
/// crate; cross-implementation bit-exactness is not promised. Statistically
/// independent child streams come from [`RandomSource::split`].
#[derive(Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this source was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child source. One 64-bit word is drawn from
    /// this stream and passed through a SplitMix64 finalizer, so repeated
    /// splits (and draws interleaved with splits) yield distinct children.
    pub fn split(&mut self) -> RandomSource {
        RandomSource::new(splitmix64(self.rng.next_u64()))
    }

    /// Uniform draw strictly inside (0, 1): the top 52 bits of one 64-bit
    /// word, offset by half a step, giving values in [2⁻⁵³, 1 − 2⁻⁵³].
    pub fn next_uniform(&mut self) -> f64 {
        const TWO_POW_52: f64 = 4_503_599_627_370_496.0;
        ((self.rng.next_u64() >> 12) as f64 + 0.5) / TWO_POW_52
    }

    /// Exponential(1) draw via inversion: −ln(1 − U), strictly positive.
    pub fn next_exponential(&mut self) -> f64 {
        -(-self.next_uniform()).ln_1p()
    }

    /// Standard normal draw via the quantile transform of one uniform, so a
    /// sample is a deterministic function of the uniform stream.
    pub fn next_std_normal(&mut self) -> f64 {
        std_normal_quantile(self.next_uniform())
            .expect("uniform draws are strictly inside (0, 1)")
    }
}

impl std::fmt::Debug for RandomSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RandomSource")
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_seed(batch: u64, chunk_index: usize) -> u64 {
    splitmix64(batch ^ splitmix64(chunk_index as u64))
}

fn check_count(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::Domain("sample size must be at least 1, got 0".to_string()))
    }
}

/// Draws one u64 batch id from `src` (so successive calls differ), then
/// fills `n` pairs chunk by chunk from sub-seeded child streams.
fn sample_pairs<F>(src: &mut RandomSource, n: usize, draw: F) -> Vec<PseudoObservationPair>
where
    F: Fn(&mut RandomSource) -> PseudoObservationPair + Sync,
{
    let batch = src.rng.next_u64();
    exec::map_chunks(n, CHUNK, |ci, range| {
        let mut child = RandomSource::new(chunk_seed(batch, ci));
        range.map(|_| draw(&mut child)).collect()
    })
}

/// The Clayton conditional draw: given U = u and a uniform w for the
/// conditional quantile level, returns
/// v = ((w^{1/(1+θ)} u)^{−θ} + 1 − u^{−θ})^{−1/θ},
/// evaluated as u · (expm1(−θ/(1+θ) · ln w) + u^θ)^{−1/θ} so that u^{−θ}
/// is never formed (it overflows for small u at large θ) and the bracket
/// stays strictly positive. Assumes u, w ∈ (0, 1) and θ > 0.
pub fn clayton_conditional(u: f64, w: f64, theta: f64) -> f64 {
    let bracket = (-theta / (1.0 + theta) * w.ln()).exp_m1() + u.powf(theta);
    clamp_open_unit(u * bracket.powf(-1.0 / theta))
}

/// Samples `n` pairs from the Clayton copula (θ > 0) by conditional
/// inversion: u uniform, then v from [`clayton_conditional`].
pub fn sample_clayton(
    src: &mut RandomSource,
    n: usize,
    theta: f64,
) -> Result<Vec<PseudoObservationPair>> {
    CopulaFamily::clayton(theta)?;
    check_count(n)?;
    Ok(sample_pairs(src, n, move |s| {
        let u = s.next_uniform();
        let w = s.next_uniform();
        PseudoObservationPair {
            u,
            v: clayton_conditional(u, w, theta),
        }
    }))
}

/// Samples `n` pairs from the Gaussian copula (|ρ| < 1): a correlated normal
/// pair from the 2×2 Cholesky factor (z₁, ρz₁ + √(1−ρ²)z₂), mapped through Φ.
pub fn sample_gaussian(
    src: &mut RandomSource,
    n: usize,
    rho: f64,
) -> Result<Vec<PseudoObservationPair>> {
    CopulaFamily::gaussian(rho)?;
    check_count(n)?;
    let b = (1.0 - rho * rho).sqrt();
    Ok(sample_pairs(src, n, move |s| {
        let z1 = s.next_std_normal();
        let z2 = s.next_std_normal();
        PseudoObservationPair {
            u: clamp_open_unit(std_normal_cdf(z1)),
            v: clamp_open_unit(std_normal_cdf(rho * z1 + b * z2)),
        }
    }))
}

fn positive_stable_draw(s: &mut RandomSource, alpha: f64) -> f64 {
    // V uniform on (0, π); resample within 1e-12 of the endpoints to keep
    // sin(V) away from zero (a measure-zero event).
    let v = loop {
        let cand = PI * s.next_uniform();
        if cand > 1e-12 && cand < PI - 1e-12 {
            break cand;
        }
    };
    let e = s.next_exponential();
    (alpha * v).sin() / v.sin().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).sin() / e).powf((1.0 - alpha) / alpha)
}

/// One draw from the positive α-stable distribution with Laplace transform
/// E[exp(−t·S)] = exp(−t^α), 0 < α ≤ 1:
/// S = (sin(αV)/sin(V)^{1/α}) · (sin((1−α)V)/E)^{(1−α)/α},
/// V ~ Uniform(0, π), E ~ Exponential(1). At α = 1 the draw degenerates to
/// the constant 1.
pub fn sample_positive_stable(src: &mut RandomSource, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!(
            "stable index alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(positive_stable_draw(src, alpha))
}

/// Samples `n` pairs from the Gumbel copula (θ ≥ 1) by the Marshall–Olkin
/// mixture: with S positive α-stable for α = 1/θ and e₁, e₂ exponential,
/// u = exp(−(e₁/S)^α) and v = exp(−(e₂/S)^α).
pub fn sample_gumbel(
    src: &mut RandomSource,
    n: usize,
    theta: f64,
) -> Result<Vec<PseudoObservationPair>> {
    CopulaFamily::gumbel(theta)?;
    check_count(n)?;
    let alpha = 1.0 / theta;
    Ok(sample_pairs(src, n, move |s| {
        let stable = positive_stable_draw(s, alpha);
        let e1 = s.next_exponential();
        let e2 = s.next_exponential();
        PseudoObservationPair {
            u: clamp_open_unit((-(e1 / stable).powf(alpha)).exp()),
            v: clamp_open_unit((-(e2 / stable).powf(alpha)).exp()),
        }
    }))
}

/// Samples `n` pairs from any copula family. The Fréchet–Hoeffding bounds
/// are sampled on their support: (u, 1 − u) for W and (u, u) for M.
pub fn sample_copula(
    src: &mut RandomSource,
    c: &CopulaFamily,
    n: usize,
) -> Result<Vec<PseudoObservationPair>> {
    c.validate()?;
    match *c {
        CopulaFamily::Independence => {
            check_count(n)?;
            Ok(sample_pairs(src, n, |s| {
                let u = s.next_uniform();
                let v = s.next_uniform();
                PseudoObservationPair { u, v }
            }))
        }
        CopulaFamily::LowerBound => {
            check_count(n)?;
            Ok(sample_pairs(src, n, |s| {
                let u = s.next_uniform();
                PseudoObservationPair {
                    u,
                    v: clamp_open_unit(1.0 - u),
                }
            }))
        }
        CopulaFamily::UpperBound => {
            check_count(n)?;
            Ok(sample_pairs(src, n, |s| {
                let u = s.next_uniform();
                PseudoObservationPair { u, v: u }
            }))
        }
        CopulaFamily::Clayton { theta } => sample_clayton(src, n, theta),
        CopulaFamily::Gumbel { theta } => sample_gumbel(src, n, theta),
        CopulaFamily::Gaussian { rho } => sample_gaussian(src, n, rho),
    }
}

/// Samples `n` points (x, y) from a joint model by drawing copula pairs and
/// pushing them through the marginal quantile functions:
/// (x, y) = (F_X⁻¹(U), F_Y⁻¹(V)).
pub fn sample_joint(src: &mut RandomSource, j: &JointModel, n: usize) -> Result<Vec<(f64, f64)>> {
    let pairs = sample_copula(src, &j.copula, n)?;
    let mapped = exec::map_chunks(pairs.len(), CHUNK, |_, range| {
        range
            .map(|i| {
                let p = pairs[i];
                match (j.margin_x.quantile(p.u), j.margin_y.quantile(p.v)) {
                    (Ok(x), Ok(y)) => Ok((x, y)),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            })
            .collect()
    });
    mapped.into_iter().collect()
}
