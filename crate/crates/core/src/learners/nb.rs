//! Naive Bayes over mixed features: multinomial for term columns, Gaussian
//! for dense columns.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::SparseRow;

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Per-class parameters. Index 0 is the negative class, 1 the positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub alpha: f64,
    pub priors: [f64; 2],
    /// `log P(term | class)`, one vector per class.
    pub term_log_probs: [Vec<f64>; 2],
    /// `(mean, variance)` of each dense feature, one vector per class.
    pub gaussians: [Vec<(f64, f64)>; 2],
}

/// Fits the model. `terms[i]` holds nonnegative term weights over `n_terms`
/// columns, `dense[i]` the remaining features of example `i`.
pub fn train_nb(
    terms: &[SparseRow],
    dense: &[Vec<f64>],
    n_terms: usize,
    labels: &[Label],
    alpha: f64,
) -> Result<NbModel> {
    if terms.len() != labels.len() || dense.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: if terms.len() != labels.len() {
                terms.len()
            } else {
                dense.len()
            },
        });
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!("alpha must be >= 0, got {alpha}")));
    }
    let mut n = [0usize; 2];
    for l in labels {
        n[l.is_positive() as usize] += 1;
    }
    if n[0] == 0 || n[1] == 0 {
        return Err(Error::SingleClass);
    }
    let n_dense = dense.first().map_or(0, Vec::len);
    if let Some(row) = dense.iter().find(|r| r.len() != n_dense) {
        return Err(Error::LengthMismatch {
            left: n_dense,
            right: row.len(),
        });
    }

    let total = labels.len() as f64;
    let priors = [n[0] as f64 / total, n[1] as f64 / total];

    let mut counts = [vec![0.0; n_terms], vec![0.0; n_terms]];
    let mut sums = [vec![0.0; n_dense], vec![0.0; n_dense]];
    for ((row, d), l) in terms.iter().zip(dense).zip(labels) {
        let c = l.is_positive() as usize;
        for &(t, v) in row {
            if t >= n_terms || v < 0.0 {
                return Err(Error::InvalidParams(format!("bad term entry ({t}, {v})")));
            }
            counts[c][t] += v;
        }
        for (s, &x) in sums[c].iter_mut().zip(d) {
            *s += x;
        }
    }
    let term_log_probs = counts.map(|cnt| {
        let denom = cnt.iter().sum::<f64>() + alpha * n_terms as f64;
        cnt.iter().map(|&x| ((x + alpha) / denom).ln()).collect()
    });

    let means: [Vec<f64>; 2] = [0, 1].map(|c| sums[c].iter().map(|s| s / n[c] as f64).collect());
    let mut sq = [vec![0.0; n_dense], vec![0.0; n_dense]];
    for (d, l) in dense.iter().zip(labels) {
        let c = l.is_positive() as usize;
        for ((s, &x), &m) in sq[c].iter_mut().zip(d).zip(&means[c]) {
            *s += (x - m) * (x - m);
        }
    }
    let gaussians = [0, 1].map(|c| {
        means[c]
            .iter()
            .zip(&sq[c])
            .map(|(&m, &s)| (m, (s / n[c] as f64).max(VARIANCE_FLOOR)))
            .collect()
    });

    Ok(NbModel {
        alpha,
        priors,
        term_log_probs,
        gaussians,
    })
}

fn gaussian_log_pdf(x: f64, (mean, var): (f64, f64)) -> f64 {
    -0.5 * (2.0 * PI * var).ln() - (x - mean) * (x - mean) / (2.0 * var)
}

impl NbModel {
    /// Unnormalized log joint `log P(class) + log P(x | class)`.
    pub fn log_joint(&self, terms: &SparseRow, dense: &[f64]) -> [f64; 2] {
        [0, 1].map(|c| {
            let mut s = self.priors[c].ln();
            for &(t, v) in terms {
                if v != 0.0 {
                    s += v * self.term_log_probs[c][t];
                }
            }
            for (&x, &g) in dense.iter().zip(&self.gaussians[c]) {
                s += gaussian_log_pdf(x, g);
            }
            s
        })
    }

    /// `log P(D | x) - log P(N | x)`.
    pub fn score(&self, terms: &SparseRow, dense: &[f64]) -> f64 {
        let [neg, pos] = self.log_joint(terms, dense);
        pos - neg
    }

    /// Posterior probability of the positive class.
    pub fn posterior(&self, terms: &SparseRow, dense: &[f64]) -> f64 {
        1.0 / (1.0 + (-self.score(terms, dense)).exp())
    }

    /// Exact ties go to the negative class.
    pub fn predict(&self, terms: &SparseRow, dense: &[f64]) -> (Label, f64) {
        let s = self.score(terms, dense);
        (Label::from_positive(s > 0.0), s)
    }
}
