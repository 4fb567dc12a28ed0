//! Confusion matrices, threshold metrics and ROC analysis. Depressed is
//! the positive class throughout.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn add(&mut self, pred: Label, truth: Label) {
        match (pred.is_positive(), truth.is_positive()) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    /// `[[TN, FP], [FN, TP]]`.
    pub fn as_table(&self) -> [[usize; 2]; 2] {
        [[self.tn, self.fp], [self.fn_, self.tp]]
    }
}

pub fn confusion(preds: &[Label], labels: &[Label]) -> Result<ConfusionMatrix> {
    if preds.len() != labels.len() || preds.is_empty() {
        return Err(Error::LengthMismatch {
            left: preds.len(),
            right: labels.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &t) in preds.iter().zip(labels) {
        cm.add(p, t);
    }
    Ok(cm)
}

/// Threshold metrics. A zero denominator gives 0 and sets the matching
/// `*_undefined` flag.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub f1_undefined: bool,
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

/// Harmonic mean of precision and recall; `None` when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> Option<f64> {
    let s = precision + recall;
    (s > 0.0).then(|| 2.0 * precision * recall / s)
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let (accuracy, _) = ratio(cm.tp + cm.tn, cm.total());
    let (precision, precision_undefined) = ratio(cm.tp, cm.tp + cm.fp);
    let (recall, recall_undefined) = ratio(cm.tp, cm.tp + cm.fn_);
    let f1 = f1_score(precision, recall);
    Metrics {
        accuracy,
        precision,
        recall,
        f1: f1.unwrap_or(0.0),
        precision_undefined,
        recall_undefined,
        f1_undefined: f1.is_none(),
    }
}

/// ROC points and trapezoidal AUC.
///
/// Thresholds sweep the distinct scores from high to low; tied scores move
/// the curve in one diagonal step, which is what makes the area equal the
/// tie-corrected rank statistic.
pub fn roc_auc(scores: &[f64], labels: &[Label]) -> Result<(Vec<(f64, f64)>, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::InvalidParams(format!("score {s}")));
    }
    let n_pos = labels.iter().filter(|l| l.is_positive()).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::OneClassOnly);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut k = 0;
    while k < order.len() {
        let s = scores[order[k]];
        while k < order.len() && scores[order[k]] == s {
            if labels[order[k]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        let (x0, y0) = *points.last().unwrap();
        let p = (fp as f64 / n_neg as f64, tp as f64 / n_pos as f64);
        auc += (p.0 - x0) * (p.1 + y0) / 2.0;
        points.push(p);
    }
    Ok((points, auc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Depressed as D, NotDepressed as N};

    #[test]
    fn confusion_examples() {
        let cm = confusion(&[D, N], &[D, N]).unwrap();
        assert_eq!((cm.tp, cm.tn, cm.fp, cm.fn_), (1, 1, 0, 0));
        let cm = confusion(&[D; 3], &[N; 3]).unwrap();
        assert_eq!((cm.tp, cm.tn, cm.fp, cm.fn_), (0, 0, 3, 0));
        let cm = confusion(&[D, D, N, N], &[D, N, D, N]).unwrap();
        assert_eq!((cm.tp, cm.tn, cm.fp, cm.fn_), (1, 1, 1, 1));
        assert_eq!(cm.as_table(), [[1, 1], [1, 1]]);
        assert!(confusion(&[D], &[D, N]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn undefined_metrics_are_flagged() {
        let m = metrics(&confusion(&[N, N], &[N, D]).unwrap());
        assert_eq!(m.accuracy, 0.5);
        assert!(m.precision_undefined && !m.recall_undefined && m.f1_undefined);
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn f1_matches_fixtures() {
        for (p, r, f) in [
            (0.73913, 0.85, 0.790698),
            (0.5625, 0.473684, 0.514286),
            (1.0, 0.3, 0.461538),
        ] {
            assert!((f1_score(p, r).unwrap() - f).abs() < 1e-5);
        }
    }

    #[test]
    fn auc_examples() {
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &[D, D, N, N]).unwrap().1, 1.0);
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &[N, N, D, D]).unwrap().1, 0.0);
        let (points, auc) = roc_auc(&[3.0, 2.0, 1.0, 0.0], &[D, N, D, N]).unwrap();
        assert_eq!(auc, 0.75);
        assert_eq!(points.first(), Some(&(0.0, 0.0)));
        assert_eq!(points.last(), Some(&(1.0, 1.0)));
        assert_eq!(roc_auc(&[1.0; 4], &[D, N, D, N]).unwrap().1, 0.5);
        assert!(matches!(roc_auc(&[1.0, 2.0], &[D, D]), Err(Error::OneClassOnly)));
    }
}
