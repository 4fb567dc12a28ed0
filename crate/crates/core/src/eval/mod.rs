//! Evaluation: confusion matrices, Acc/P/R/F1, ROC/AUC and stratified
//! cross validation.

pub mod cv;
pub mod metrics;

pub use cv::{
    cross_validate, fit_fold, holdout_split, run_cv, stratified_folds, CvSettings, FoldOutcome, FoldReport,
    MetricsReport, Prediction, DEFAULT_FOLDS,
};
pub use metrics::{confusion, f1_score, metrics, roc_auc, ConfusionMatrix, Metrics};
