//! Entropy, information gain and top-k term selection.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::TermMatrix;

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("{p:?}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(-p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>())
}

/// Entropy of a two-class count pair. Symmetric in its arguments bit for bit.
pub fn binary_entropy(a: usize, b: usize) -> f64 {
    let n = (a + b) as f64;
    if a == 0 || b == 0 {
        return 0.0;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (pl, ph) = (lo as f64 / n, hi as f64 / n);
    -(pl * pl.log2() + ph * ph.log2())
}

/// Information gain of a binary split given class counts on each side.
pub fn split_gain(pos_left: usize, neg_left: usize, pos_right: usize, neg_right: usize) -> f64 {
    let n_left = pos_left + neg_left;
    let n_right = pos_right + neg_right;
    let n = (n_left + n_right) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let parent = binary_entropy(pos_left + pos_right, neg_left + neg_right);
    let children = (n_left as f64 / n) * binary_entropy(pos_left, neg_left)
        + (n_right as f64 / n) * binary_entropy(pos_right, neg_right);
    // Clamp tiny negative round-off.
    (parent - children).max(0.0)
}

/// `H(labels) - [P(present) H(labels | present) + P(absent) H(labels | absent)]`.
pub fn info_gain(presence: &[bool], labels: &[Label]) -> Result<f64> {
    if presence.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: presence.len(),
            right: labels.len(),
        });
    }
    let mut c = [[0usize; 2]; 2];
    for (&present, &label) in presence.iter().zip(labels) {
        c[present as usize][label.is_positive() as usize] += 1;
    }
    Ok(split_gain(c[1][1], c[1][0], c[0][1], c[0][0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Selector {
    InfoGain,
    MostFrequent,
}

/// Ranking key for a gain or score: values agreeing to 12 decimals tie.
pub fn score_key(score: f64) -> i64 {
    (score * 1e12).round() as i64
}

/// Picks up to `k` terms of `m` using statistics of `rows` only.
///
/// Candidates are terms with a nonzero entry in some training row that also
/// pass `allowed`. Ranking is by information gain of term presence or by
/// total count; ties go to the lexicographically smaller term.
pub fn select_terms(
    m: &TermMatrix,
    labels: &[Label],
    rows: &[usize],
    selector: Selector,
    k: usize,
    allowed: impl Fn(&str) -> bool,
) -> Result<Vec<String>> {
    if labels.len() != m.n_rows() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: m.n_rows(),
        });
    }
    let n_terms = m.n_terms();
    let mut pos_present = vec![0usize; n_terms];
    let mut neg_present = vec![0usize; n_terms];
    let mut totals = vec![0.0f64; n_terms];
    let (mut n_pos, mut n_neg) = (0usize, 0usize);
    for &r in rows {
        let positive = labels[r].is_positive();
        if positive {
            n_pos += 1;
        } else {
            n_neg += 1;
        }
        for &(t, v) in m.row(r) {
            if positive {
                pos_present[t] += 1;
            } else {
                neg_present[t] += 1;
            }
            totals[t] += v;
        }
    }

    let mut scored: Vec<(i64, usize)> = (0..n_terms)
        .filter(|&t| pos_present[t] + neg_present[t] > 0 && allowed(&m.vocabulary()[t]))
        .map(|t| {
            let score = match selector {
                Selector::InfoGain => split_gain(
                    pos_present[t],
                    neg_present[t],
                    n_pos - pos_present[t],
                    n_neg - neg_present[t],
                ),
                Selector::MostFrequent => totals[t],
            };
            (score_key(score), t)
        })
        .collect();
    // Vocabulary is sorted, so the index order is the lexicographic order.
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(scored
        .into_iter()
        .take(k)
        .map(|(_, t)| m.vocabulary()[t].clone())
        .collect())
}
