//! Depression detection from the activity and content of social-media users.
//!
//! The crate covers the whole pipeline: corpus ingestion ([`corpus`]), text
//! preprocessing ([`textprep`]), the document-term matrix ([`matrix`]),
//! feature engineering ([`features`]), four classifiers ([`learners`]),
//! cross-validated evaluation ([`eval`]), a synthetic corpus generator
//! ([`synth`]) and a grid experiment runner ([`experiment`]).

// `!(x > 0.0)` also rejects NaN, which is the point in parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod corpus;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod features;
pub mod learners;
pub mod matrix;
pub mod resources;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub struct $name;
        )*
    };
}

book_chapters! {
    BookIntroduction => "introduction.md",
    BookCorpus => "corpus.md",
    BookText => "text.md",
    BookMatrix => "matrix.md",
    BookFeatures => "features.md",
    BookLearners => "learners.md",
    BookEvaluation => "evaluation.md",
    BookSynthetic => "synthetic.md",
    BookExperiments => "experiments.md",
}
