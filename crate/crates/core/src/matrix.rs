//! Sparse users x terms matrices and the term-level transformations:
//! synonym collapsing, sparsity pruning and TF-IDF weighting.
//!
//! Every matrix is kept canonical: vocabulary sorted lexicographically
//! without duplicates, row entries sorted by column, and no stored zeros.
//! Two matrices with the same content therefore compare equal.
//!
//! Fold-dependent statistics (document frequencies, zero fractions) can be
//! computed over a subset of rows via [`Idf::fit`] and [`dense_terms`], then
//! applied unchanged to every row.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resources::parse_tsv_pairs;
use crate::textprep::{stem, TokenDoc};

/// Default threshold for [`TermMatrix::prune_sparse`]: drop terms absent
/// from more than 95% of rows.
pub const DEFAULT_ZERO_FRACTION: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueKind {
    Count,
    TfIdf,
}

pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct TermMatrix {
    vocabulary: Vec<String>,
    rows: Vec<SparseRow>,
    kind: ValueKind,
}

impl TermMatrix {
    /// Builds a matrix from per-row `term -> value` maps, dropping zeros.
    pub fn from_maps(rows: &[BTreeMap<String, f64>], kind: ValueKind) -> Self {
        let vocab: BTreeSet<&str> = rows
            .iter()
            .flat_map(|r| r.iter().filter(|(_, &v)| v != 0.0).map(|(t, _)| t.as_str()))
            .collect();
        let vocabulary: Vec<String> = vocab.iter().map(|s| s.to_string()).collect();
        let index: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(t, &v)| (index[t.as_str()], v))
                    .collect()
            })
            .collect();
        TermMatrix { vocabulary, rows, kind }
    }

    /// Count matrix over token lists; row `r` counts the tokens of list `r`.
    pub fn from_token_lists<D: AsRef<[S]>, S: AsRef<str>>(docs: &[D]) -> Self {
        let maps: Vec<BTreeMap<String, f64>> = docs
            .iter()
            .map(|tokens| {
                let mut counts = BTreeMap::new();
                for t in tokens.as_ref() {
                    *counts.entry(t.as_ref().to_owned()).or_insert(0.0) += 1.0;
                }
                counts
            })
            .collect();
        Self::from_maps(&maps, ValueKind::Count)
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.rows[r]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_terms(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.vocabulary.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// Value at `(row, term)`, zero when absent.
    pub fn get(&self, r: usize, term: &str) -> f64 {
        self.term_index(term)
            .and_then(|t| {
                self.rows[r]
                    .binary_search_by_key(&t, |&(i, _)| i)
                    .ok()
                    .map(|p| self.rows[r][p].1)
            })
            .unwrap_or(0.0)
    }

    /// Row as a `term -> value` map.
    pub fn row_map(&self, r: usize) -> BTreeMap<&str, f64> {
        self.rows[r]
            .iter()
            .map(|&(t, v)| (self.vocabulary[t].as_str(), v))
            .collect()
    }

    pub fn row_total(&self, r: usize) -> f64 {
        self.rows[r].iter().map(|&(_, v)| v).sum()
    }

    /// Number of rows in `rows` (all rows when `None`) with a nonzero entry,
    /// per term.
    pub fn document_frequency(&self, rows: Option<&[usize]>) -> Vec<usize> {
        let mut df = vec![0; self.n_terms()];
        self.for_rows(rows, |row| {
            for &(t, _) in row {
                df[t] += 1;
            }
        });
        df
    }

    /// Column sums over `rows` (all rows when `None`).
    pub fn column_totals(&self, rows: Option<&[usize]>) -> Vec<f64> {
        let mut totals = vec![0.0; self.n_terms()];
        self.for_rows(rows, |row| {
            for &(t, v) in row {
                totals[t] += v;
            }
        });
        totals
    }

    fn for_rows<'a>(&'a self, rows: Option<&[usize]>, mut f: impl FnMut(&'a SparseRow)) {
        match rows {
            Some(idx) => idx.iter().for_each(|&r| f(&self.rows[r])),
            None => self.rows.iter().for_each(f),
        }
    }

    /// Keeps only the terms for which `keep` is true; values are untouched.
    pub fn retain_terms(&self, mut keep: impl FnMut(&str) -> bool) -> TermMatrix {
        let mut remap = vec![None; self.n_terms()];
        let mut vocabulary = Vec::new();
        for (i, term) in self.vocabulary.iter().enumerate() {
            if keep(term) {
                remap[i] = Some(vocabulary.len());
                vocabulary.push(term.clone());
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().filter_map(|&(t, v)| remap[t].map(|n| (n, v))).collect())
            .collect();
        TermMatrix {
            vocabulary,
            rows,
            kind: self.kind,
        }
    }

    /// Drops every term whose share of zero rows exceeds `zero_fraction`.
    pub fn prune_sparse(&self, zero_fraction: f64) -> Result<TermMatrix> {
        let keep = dense_terms(self, None, zero_fraction)?;
        Ok(self.retain_terms(|t| keep.contains(t)))
    }

    /// TF-IDF with document frequencies taken from this matrix.
    pub fn apply_tfidf(&self) -> Result<TermMatrix> {
        Idf::fit(self, None)?.transform(self)
    }

    /// Merges the columns of each synonym group into one column named by
    /// the group, summing counts. Terms outside the thesaurus pass through.
    pub fn collapse_synonyms(&self, thesaurus: &Thesaurus) -> Result<TermMatrix> {
        if self.kind != ValueKind::Count {
            return Err(Error::InvalidParams(
                "synonyms are collapsed on count matrices, before TF-IDF".into(),
            ));
        }
        let maps: Vec<BTreeMap<String, f64>> = (0..self.n_rows())
            .map(|r| {
                let mut merged = BTreeMap::new();
                for &(t, v) in &self.rows[r] {
                    let name = thesaurus.canonical(&self.vocabulary[t]);
                    *merged.entry(name.to_owned()).or_insert(0.0) += v;
                }
                merged
            })
            .collect();
        Ok(Self::from_maps(&maps, ValueKind::Count))
    }
}

/// Document-term count matrix over users' preprocessed tokens.
pub fn build_dtm(docs: &[TokenDoc]) -> TermMatrix {
    let lists: Vec<&[String]> = docs.iter().map(|d| d.tokens.as_slice()).collect();
    TermMatrix::from_token_lists(&lists)
}

/// Terms whose fraction of zero rows (over `rows`, default all) is at most
/// `zero_fraction`. Terms with no nonzero entry among `rows` never qualify.
pub fn dense_terms(m: &TermMatrix, rows: Option<&[usize]>, zero_fraction: f64) -> Result<BTreeSet<String>> {
    if !(zero_fraction > 0.0 && zero_fraction < 1.0) {
        return Err(Error::InvalidParams(format!(
            "zero fraction must lie in (0, 1), got {zero_fraction}"
        )));
    }
    let n = rows.map_or(m.n_rows(), <[usize]>::len);
    let df = m.document_frequency(rows);
    Ok(m.vocabulary
        .iter()
        .zip(df)
        .filter(|&(_, d)| d > 0 && ((n - d) as f64 / n as f64) <= zero_fraction)
        .map(|(t, _)| t.clone())
        .collect())
}

/// Inverse document frequencies `log2(N / df)` frozen from a set of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Idf {
    weights: BTreeMap<String, f64>,
}

impl Idf {
    pub fn fit(m: &TermMatrix, rows: Option<&[usize]>) -> Result<Self> {
        if m.kind != ValueKind::Count {
            return Err(Error::InvalidParams("TF-IDF needs a count matrix".into()));
        }
        let n = rows.map_or(m.n_rows(), <[usize]>::len);
        if n == 0 {
            return Err(Error::InvalidParams("TF-IDF needs at least one row".into()));
        }
        let weights = m
            .vocabulary
            .iter()
            .zip(m.document_frequency(rows))
            .filter(|&(_, df)| df > 0)
            .map(|(t, df)| (t.clone(), (n as f64 / df as f64).log2()))
            .collect();
        Ok(Idf { weights })
    }

    /// Weight for `term`; zero when the term was absent from the fitted rows.
    pub fn weight(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    pub fn transform(&self, m: &TermMatrix) -> Result<TermMatrix> {
        if m.kind != ValueKind::Count {
            return Err(Error::InvalidParams("TF-IDF needs a count matrix".into()));
        }
        let maps: Vec<BTreeMap<String, f64>> = (0..m.n_rows())
            .map(|r| {
                m.rows[r]
                    .iter()
                    .map(|&(t, tf)| {
                        let term = &m.vocabulary[t];
                        (term.clone(), tf * self.weight(term))
                    })
                    .collect()
            })
            .collect();
        Ok(TermMatrix::from_maps(&maps, ValueKind::TfIdf))
    }
}

/// Flat `term -> group` synonym mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    mapping: BTreeMap<String, String>,
}

impl Thesaurus {
    /// Builds a mapping; a term listed under several groups goes to the
    /// lexicographically smallest one.
    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut mapping: BTreeMap<String, String> = BTreeMap::new();
        for (term, group) in pairs {
            let (term, group) = (term.into(), group.into());
            match mapping.get(&term) {
                Some(existing) if *existing <= group => {}
                _ => {
                    mapping.insert(term, group);
                }
            }
        }
        Thesaurus { mapping }
    }

    /// Parses `term<TAB>group_id` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_tsv_pairs("thesaurus", text)?;
        Ok(Self::from_pairs(
            pairs.into_iter().map(|(_, t, g)| (t.to_lowercase(), g.to_owned())),
        ))
    }

    /// Same groups, keyed by the stemmed form of each term.
    pub fn stemmed(&self) -> Self {
        Self::from_pairs(self.mapping.iter().map(|(t, g)| (stem(t), g.clone())))
    }

    pub fn group(&self, term: &str) -> Option<&str> {
        self.mapping.get(term).map(String::as_str)
    }

    /// The column name a term ends up under after collapsing.
    pub fn canonical<'a>(&'a self, term: &'a str) -> &'a str {
        self.group(term).unwrap_or(term)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.mapping.iter().map(|(t, g)| (t.as_str(), g.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(docs: &[&[&str]]) -> TermMatrix {
        TermMatrix::from_token_lists(&docs.iter().map(|d| d.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn dtm_counts() {
        let x = m(&[&["sad", "sad"], &["happy"]]);
        assert_eq!(x.vocabulary(), ["happy", "sad"]);
        assert_eq!(x.rows(), [vec![(1, 2.0)], vec![(0, 1.0)]]);
    }

    #[test]
    fn dtm_empty_and_identical_rows() {
        let x = m(&[&["a", "b"], &[], &["b", "a"]]);
        assert!(x.row(1).is_empty());
        assert_eq!(x.row(0), x.row(2));
    }

    #[test]
    fn tfidf_examples() {
        // N = 4, tf = 3, df = 1 -> 3 * log2(4) = 6
        let x = m(&[&["t", "t", "t", "all"], &["all"], &["all", "u"], &["all"]]);
        let w = x.apply_tfidf().unwrap();
        assert_eq!(w.kind(), ValueKind::TfIdf);
        assert!((w.get(0, "t") - 6.0).abs() < 1e-12);
        // present everywhere -> idf 0 -> entry and column gone
        assert!(w.term_index("all").is_none());
        assert_eq!(w.get(1, "t"), 0.0);
        assert!(w.row(1).is_empty());
    }

    #[test]
    fn tfidf_rejects_weighted_input() {
        let w = m(&[&["a"], &["b"]]).apply_tfidf().unwrap();
        assert!(w.apply_tfidf().is_err());
        assert!(w.collapse_synonyms(&Thesaurus::default()).is_err());
    }

    fn presence_matrix(n: usize, nonzero: usize) -> TermMatrix {
        let docs: Vec<Vec<&str>> = (0..n)
            .map(|i| {
                let mut d = vec!["everywhere"];
                if i < nonzero {
                    d.push("term");
                }
                d
            })
            .collect();
        TermMatrix::from_token_lists(&docs)
    }

    #[test]
    fn prune_boundaries() {
        let pruned = presence_matrix(100, 4).prune_sparse(0.95).unwrap();
        assert_eq!(pruned.vocabulary(), ["everywhere"]);
        let kept = presence_matrix(100, 5).prune_sparse(0.95).unwrap();
        assert_eq!(kept.vocabulary(), ["everywhere", "term"]);
        assert!(presence_matrix(10, 1).prune_sparse(1.0).is_err());
        assert!(presence_matrix(10, 1).prune_sparse(0.0).is_err());
    }

    #[test]
    fn prune_keeps_values() {
        let x = m(&[&["a", "a", "b"], &["a", "c"]]);
        let p = x.prune_sparse(0.4).unwrap();
        assert_eq!(p.vocabulary(), ["a"]);
        assert_eq!(p.get(0, "a"), 2.0);
        assert_eq!(p.get(1, "a"), 1.0);
    }

    #[test]
    fn collapse_merges_a_synonym_group() {
        let mut row = BTreeMap::new();
        row.insert("depressed".to_string(), 10.0);
        row.insert("sad".to_string(), 5.0);
        row.insert("upset".to_string(), 3.0);
        row.insert("coffee".to_string(), 2.0);
        let x = TermMatrix::from_maps(&[row], ValueKind::Count);
        let th = Thesaurus::from_pairs([("depressed", "sad"), ("sad", "sad"), ("upset", "sad")]);
        let c = x.collapse_synonyms(&th).unwrap();
        assert_eq!(c.vocabulary(), ["coffee", "sad"]);
        assert_eq!(c.get(0, "sad"), 18.0);
        assert_eq!(c.get(0, "coffee"), 2.0);
        assert_eq!(c.row_total(0), x.row_total(0));
    }

    #[test]
    fn idf_from_subset_of_rows() {
        let x = m(&[&["a"], &["a", "b"], &["b"], &["c"]]);
        let idf = Idf::fit(&x, Some(&[0, 1])).unwrap();
        assert_eq!(idf.weight("a"), 0.0);
        assert!((idf.weight("b") - 1.0).abs() < 1e-12);
        assert_eq!(idf.weight("c"), 0.0);
        let w = idf.transform(&x).unwrap();
        assert_eq!(w.vocabulary(), ["b"]);
    }

    #[test]
    fn thesaurus_conflicts_resolve_to_smallest_group() {
        let th = Thesaurus::parse("sad\tzeta\nsad\talpha\nglum\tzeta\n").unwrap();
        assert_eq!(th.group("sad"), Some("alpha"));
        assert_eq!(th.group("glum"), Some("zeta"));
        assert_eq!(th.canonical("other"), "other");
        let st = Thesaurus::from_pairs([("crying", "cry"), ("cries", "cry")]).stemmed();
        assert_eq!(st.group("cri"), Some("cry"));
    }
}
