//! Nonnegative weight per OAM index: the measurable output of both the
//! walk and the mode sorter.

use crate::error::{Error, Result};

/// Normalized weights over a contiguous OAM index range.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lmin: i64,
    weights: Vec<f64>,
}

impl Spectrum {
    /// Builds a spectrum from raw nonnegative weights and normalizes.
    pub fn from_weights(lmin: i64, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::ZeroTotalWeight);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(Spectrum {
            lmin,
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Delta distribution at a single site.
    pub fn delta(l: i64, lmin: i64, lmax: i64) -> Result<Self> {
        if lmin > lmax {
            return Err(Error::InvalidLatticeBounds { lmin, lmax });
        }
        if l < lmin || l > lmax {
            return Err(Error::SiteOutOfRange { l, lmin, lmax });
        }
        let mut w = vec![0.0; (lmax - lmin + 1) as usize];
        w[(l - lmin) as usize] = 1.0;
        Ok(Spectrum { lmin, weights: w })
    }

    pub fn lmin(&self) -> i64 {
        self.lmin
    }

    pub fn lmax(&self) -> i64 {
        self.lmin + self.weights.len() as i64 - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at site `l`, zero outside the stored range.
    pub fn weight(&self, l: i64) -> f64 {
        if l < self.lmin || l > self.lmax() {
            0.0
        } else {
            self.weights[(l - self.lmin) as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Iterator over (l, weight) pairs in ascending l.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.lmin + i as i64, w))
    }

    /// Mean of l under the distribution.
    pub fn mean(&self) -> f64 {
        self.iter().map(|(l, w)| l as f64 * w).sum()
    }

    /// Variance of l: sum P(l) l^2 - (sum P(l) l)^2.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let m2: f64 = self.iter().map(|(l, w)| (l as f64).powi(2) * w).sum();
        m2 - m * m
    }

    /// Site of the largest weight (smallest l wins ties).
    pub fn argmax(&self) -> i64 {
        let mut best = self.lmin;
        let mut best_w = f64::NEG_INFINITY;
        for (l, w) in self.iter() {
            if w > best_w {
                best_w = w;
                best = l;
            }
        }
        best
    }
}

/// Bhattacharyya-style similarity between two weight distributions:
/// S = [sum sqrt(We * Wt)]^2 / (sum We * sum Wt).
///
/// Both arguments must cover the same l range; the score is invariant
/// under rescaling of either argument.
pub fn similarity(w_exp: &Spectrum, w_th: &Spectrum) -> Result<f64> {
    if w_exp.lmin != w_th.lmin || w_exp.weights.len() != w_th.weights.len() {
        return Err(Error::SupportMismatch);
    }
    let se = w_exp.total();
    let st = w_th.total();
    if se <= 0.0 || st <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let cross: f64 = w_exp
        .weights
        .iter()
        .zip(&w_th.weights)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum();
    Ok(cross * cross / (se * st))
}
