//! Rank statistics: ranks, pseudo-observations, the empirical copula, and
//! sample versions of Kendall's τ and Spearman's ρ_S.

use crate::error::{Error, Result};
use crate::exec;
use crate::sampling::PseudoObservationPair;

/// A bivariate sample reduced to its ranks.
///
/// Ranks run from 1 (smallest) to n (largest); tied values receive midranks
/// and set the corresponding tie flag. Pseudo-observations are exactly
/// rank/(n + 1), which keeps them strictly inside (0, 1). Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSample {
    n: usize,
    ranks_x: Vec<f64>,
    ranks_y: Vec<f64>,
    pseudo: Vec<PseudoObservationPair>,
    ties_x: bool,
    ties_y: bool,
}

impl RankedSample {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ranks of the x coordinates (midranks where tied).
    pub fn ranks_x(&self) -> &[f64] {
        &self.ranks_x
    }

    /// Ranks of the y coordinates (midranks where tied).
    pub fn ranks_y(&self) -> &[f64] {
        &self.ranks_y
    }

    /// Pseudo-observations (Rᵢ/(n+1), Sᵢ/(n+1)).
    pub fn pseudo(&self) -> &[PseudoObservationPair] {
        &self.pseudo
    }

    pub fn ties_x(&self) -> bool {
        self.ties_x
    }

    pub fn ties_y(&self) -> bool {
        self.ties_y
    }

    /// True when either coordinate contained ties (midranks were used).
    pub fn has_ties(&self) -> bool {
        self.ties_x || self.ties_y
    }
}

/// Ranks one coordinate; returns (ranks, had_ties). Equal values share the
/// average of the positions they occupy.
fn midranks(values: &[f64]) -> (Vec<f64>, bool) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .expect("NaN rejected before ranking")
    });
    let mut ranks = vec![0.0; n];
    let mut ties = false;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        if j > i {
            ties = true;
        }
        // Positions i..=j are 1-based ranks i+1 ..= j+1; share their mean.
        let rank = (i + j + 2) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    (ranks, ties)
}

/// Ranks a bivariate sample and forms pseudo-observations with divisor n + 1.
/// Needs n ≥ 2 and finite coordinates; ties get midranks plus a flag.
pub fn rank_transform(data: &[(f64, f64)]) -> Result<RankedSample> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidData(format!(
            "rank transform needs at least 2 observations, got {n}"
        )));
    }
    for (i, &(x, y)) in data.iter().enumerate() {
        if x.is_nan() || y.is_nan() {
            return Err(Error::InvalidData(format!(
                "observation {i} has a NaN coordinate: ({x}, {y})"
            )));
        }
    }
    let xs: Vec<f64> = data.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = data.iter().map(|p| p.1).collect();
    let (ranks_x, ties_x) = midranks(&xs);
    let (ranks_y, ties_y) = midranks(&ys);
    let divisor = (n + 1) as f64;
    let pseudo = ranks_x
        .iter()
        .zip(&ranks_y)
        .map(|(&r, &s)| PseudoObservationPair {
            u: r / divisor,
            v: s / divisor,
        })
        .collect();
    Ok(RankedSample {
        n,
        ranks_x,
        ranks_y,
        pseudo,
        ties_x,
        ties_y,
    })
}

/// The empirical copula C_n(u, v) = (1/n) Σ 1(Uᵢ ≤ u, Vᵢ ≤ v) evaluated at
/// one point of the closed unit square.
pub fn empirical_copula(rs: &RankedSample, u: f64, v: f64) -> Result<f64> {
    if !((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)) {
        return Err(Error::Domain(format!(
            "empirical copula needs (u, v) in the closed unit square, got ({u}, {v})"
        )));
    }
    let count = rs.pseudo.iter().filter(|p| p.u <= u && p.v <= v).count();
    Ok(count as f64 / rs.n as f64)
}

/// Sample Kendall's τ by the O(n²) concordance counter:
/// (concordant − discordant) / C(n, 2). Pairs tied in either coordinate
/// contribute zero to the numerator.
///
/// Each chunk's partial count is an exact integer in f64, so the chunked
/// summation is exact regardless of execution order.
pub fn sample_kendall_tau(rs: &RankedSample) -> f64 {
    let n = rs.n;
    let rx = &rs.ranks_x;
    let ry = &rs.ranks_y;
    let numerator = exec::sum_chunks(n, 256, |_, range| {
        let mut acc = 0.0;
        for i in range {
            for j in (i + 1)..n {
                let prod = (rx[i] - rx[j]) * (ry[i] - ry[j]);
                if prod > 0.0 {
                    acc += 1.0;
                } else if prod < 0.0 {
                    acc -= 1.0;
                }
            }
        }
        acc
    });
    numerator / (n as f64 * (n as f64 - 1.0) / 2.0)
}

/// Sample Spearman's ρ_S: the Pearson correlation of the rank vectors.
/// Errors with [`Error::Degenerate`] when either rank vector has zero
/// variance (all values tied).
pub fn sample_spearman_rho(rs: &RankedSample) -> Result<f64> {
    let n = rs.n as f64;
    let mean_x = rs.ranks_x.iter().sum::<f64>() / n;
    let mean_y = rs.ranks_y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&r, &s) in rs.ranks_x.iter().zip(&rs.ranks_y) {
        let dx = r - mean_x;
        let dy = s - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate(
            "rank variance is zero (all values tie); Spearman correlation undefined".to_string(),
        ));
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// One-sample Kolmogorov–Smirnov distance between `values` and the
/// Uniform(0, 1) CDF: D_n = max_i max(i/n − x₍ᵢ₎, x₍ᵢ₎ − (i−1)/n).
/// At the 1% level the critical value is approximately 1.63/√n.
pub fn ks_statistic_uniform(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidData(
            "KS statistic needs at least one value".to_string(),
        ));
    }
    let mut sorted = values.to_vec();
    for &x in &sorted {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidData(format!(
                "KS against Uniform(0,1) needs values in [0, 1], got {x}"
            )));
        }
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("range check rejects NaN"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let hi = (i + 1) as f64 / n - x;
        let lo = x - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    Ok(d)
}
