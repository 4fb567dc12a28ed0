//! The four classifiers behind one train/predict contract.
//!
//! ```
//! use std::sync::Arc;
//! use ddacf::corpus::Label;
//! use ddacf::features::{assemble_features, FeatureSchema};
//! use ddacf::learners::{ModelKind, ModelSpec, TrainedModel};
//!
//! let schema = Arc::new(FeatureSchema::new(vec![], vec!["x".into()], false));
//! let ids: Vec<String> = (0..4).map(|i| format!("u{i}")).collect();
//! let labels = [Label::NotDepressed, Label::NotDepressed, Label::Depressed, Label::Depressed];
//! let rows = vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]];
//! let fvs = assemble_features(schema, &ids, &labels, vec![vec![]; 4], rows, None).unwrap();
//!
//! let model = TrainedModel::train(&ModelSpec::new(ModelKind::DecisionTree), &fvs).unwrap();
//! let (label, score) = model.predict(&fvs[3]).unwrap();
//! assert_eq!((label, score), (Label::Depressed, 1.0));
//! ```

pub mod dt;
pub mod nb;
pub mod svm;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

pub use dt::{best_split, train_dt, DtModel, DtNode, DtParams, Split};
pub use nb::{train_nb, NbModel};
pub use svm::{solve_smo, train_svm, Kernel, KernelSpec, SmoSolution, Standardizer, SvmModel, SvmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    NaiveBayes,
    DecisionTree,
    SvmLinear,
    SvmRbf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::DecisionTree,
        ModelKind::NaiveBayes,
        ModelKind::SvmLinear,
        ModelKind::SvmRbf,
    ];
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::NaiveBayes => "nb",
            ModelKind::DecisionTree => "dt",
            ModelKind::SvmLinear => "svml",
            ModelKind::SvmRbf => "svmr",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nb" => Ok(ModelKind::NaiveBayes),
            "dt" => Ok(ModelKind::DecisionTree),
            "svml" | "svm-l" => Ok(ModelKind::SvmLinear),
            "svmr" | "svm-r" => Ok(ModelKind::SvmRbf),
            other => Err(Error::InvalidConfig(format!("unknown model `{other}`"))),
        }
    }
}

/// Which learner to train and with what hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub nb_alpha: f64,
    pub dt: DtParams,
    pub svm_c: f64,
    pub svm_sigma: Option<f64>,
    pub svm_tol: f64,
    pub svm_max_iter: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            nb_alpha: nb::DEFAULT_ALPHA,
            dt: DtParams::default(),
            svm_c: svm::DEFAULT_C,
            svm_sigma: None,
            svm_tol: svm::DEFAULT_TOL,
            svm_max_iter: svm::DEFAULT_MAX_ITER,
        }
    }

    pub fn with_kind(&self, kind: ModelKind) -> Self {
        ModelSpec { kind, ..self.clone() }
    }

    pub fn svm_params(&self) -> SvmParams {
        SvmParams {
            kernel: match self.kind {
                ModelKind::SvmRbf => KernelSpec::Rbf { sigma: self.svm_sigma },
                _ => KernelSpec::Linear,
            },
            c: self.svm_c,
            tol: self.svm_tol,
            max_iter: self.svm_max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelParams {
    NaiveBayes(NbModel),
    DecisionTree(DtModel),
    Svm(SvmModel),
}

const FORMAT: &str = "ddacf-model";
const VERSION: u32 = 1;

/// An immutable trained classifier tied to one feature schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ModelKind,
    pub fingerprint: String,
    pub params: ModelParams,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    version: u32,
    model: TrainedModel,
}

impl TrainedModel {
    pub fn train(spec: &ModelSpec, data: &[FeatureVector]) -> Result<Self> {
        let first = data.first().ok_or(Error::SingleClass)?;
        let schema = &first.schema;
        if let Some(other) = data.iter().find(|f| f.schema.fingerprint() != schema.fingerprint()) {
            return Err(Error::SchemaMismatch {
                expected: schema.fingerprint().to_owned(),
                found: other.schema.fingerprint().to_owned(),
            });
        }
        let labels: Vec<Label> = data.iter().map(|f| f.label).collect();
        let params = match spec.kind {
            ModelKind::NaiveBayes => {
                let terms: Vec<_> = data.iter().map(|f| f.term_features.clone()).collect();
                let dense: Vec<_> = data.iter().map(FeatureVector::dense_features).collect();
                ModelParams::NaiveBayes(train_nb(&terms, &dense, schema.n_terms(), &labels, spec.nb_alpha)?)
            }
            ModelKind::DecisionTree => {
                let x: Vec<_> = data.iter().map(FeatureVector::to_dense).collect();
                if !labels.iter().any(|l| l.is_positive()) || labels.iter().all(|l| l.is_positive()) {
                    log::debug!("decision tree trained on a single class");
                }
                ModelParams::DecisionTree(train_dt(&x, &labels, spec.dt)?)
            }
            ModelKind::SvmLinear | ModelKind::SvmRbf => {
                let x: Vec<_> = data.iter().map(FeatureVector::to_dense).collect();
                ModelParams::Svm(train_svm(&x, &labels, spec.svm_params())?)
            }
        };
        Ok(TrainedModel {
            kind: spec.kind,
            fingerprint: schema.fingerprint().to_owned(),
            params,
        })
    }

    /// Predicted label and a confidence score that increases towards the
    /// positive class.
    pub fn predict(&self, fv: &FeatureVector) -> Result<(Label, f64)> {
        if fv.schema.fingerprint() != self.fingerprint {
            return Err(Error::SchemaMismatch {
                expected: self.fingerprint.clone(),
                found: fv.schema.fingerprint().to_owned(),
            });
        }
        Ok(match &self.params {
            ModelParams::NaiveBayes(m) => m.predict(&fv.term_features, &fv.dense_features()),
            ModelParams::DecisionTree(m) => m.predict(&fv.to_dense()),
            ModelParams::Svm(m) => m.predict(&fv.to_dense()),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Envelope {
            format: FORMAT.into(),
            version: VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let env: Envelope = serde_json::from_str(text)?;
        if env.format != FORMAT || env.version != VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported model file {} v{}",
                env.format, env.version
            )));
        }
        Ok(env.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::features::{assemble_features, FeatureSchema};

    fn toy(terms: bool) -> Vec<FeatureVector> {
        let schema = Arc::new(FeatureSchema::new(
            if terms { vec!["sad".into()] } else { vec![] },
            vec!["night".into()],
            false,
        ));
        let ids: Vec<String> = (0..6).map(|i| format!("u{i}")).collect();
        let labels: Vec<Label> = (0..6).map(|i| Label::from_positive(i >= 3)).collect();
        let term_rows = (0..6)
            .map(|i| if terms && i >= 3 { vec![(0, 2.0)] } else { vec![] })
            .collect();
        let dense = (0..6).map(|i| vec![i as f64]).collect();
        assemble_features(schema, &ids, &labels, term_rows, dense, None).unwrap()
    }

    #[test]
    fn every_model_fits_a_separable_toy() {
        let data = toy(true);
        for kind in ModelKind::ALL {
            let m = TrainedModel::train(&ModelSpec::new(kind), &data).unwrap();
            for fv in &data {
                assert_eq!(m.predict(fv).unwrap().0, fv.label, "{kind}");
            }
        }
    }

    #[test]
    fn predict_checks_schema() {
        let m = TrainedModel::train(&ModelSpec::new(ModelKind::NaiveBayes), &toy(true)).unwrap();
        assert!(matches!(m.predict(&toy(false)[0]), Err(Error::SchemaMismatch { .. })));
    }

    #[test]
    fn json_round_trip() {
        let data = toy(true);
        for kind in ModelKind::ALL {
            let m = TrainedModel::train(&ModelSpec::new(kind), &data).unwrap();
            let back = TrainedModel::from_json(&m.to_json().unwrap()).unwrap();
            for fv in &data {
                assert_eq!(m.predict(fv).unwrap(), back.predict(fv).unwrap());
            }
        }
        assert!(TrainedModel::from_json(r#"{"format":"x","version":1,"model":null}"#).is_err());
    }

    #[test]
    fn kind_names() {
        for kind in ModelKind::ALL {
            assert_eq!(kind.to_string().parse::<ModelKind>().unwrap(), kind);
        }
    }
}
