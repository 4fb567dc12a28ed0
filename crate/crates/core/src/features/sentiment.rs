//! Lexicon-based sentence sentiment with a short negation window.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::resources::{parse_tsv_pairs, parse_word_list};
use crate::textprep::{stem, TokenDoc, TokenStream};

/// How many tokens before a lexicon hit are searched for a negator.
pub const NEGATION_WINDOW: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SentimentMode {
    Avg,
    Mixed,
    None,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    polarity: BTreeMap<String, f64>,
    negators: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new(polarity: BTreeMap<String, f64>, negators: BTreeSet<String>) -> Result<Self> {
        if let Some((t, p)) = polarity.iter().find(|(_, p)| !(p.abs() <= 1.0)) {
            return Err(Error::InvalidParams(format!(
                "polarity of `{t}` is {p}, outside [-1, 1]"
            )));
        }
        Ok(SentimentLexicon { polarity, negators })
    }

    /// Parses a `term<TAB>polarity` lexicon and a one-per-line negator list.
    pub fn parse(lexicon: &str, negators: &str) -> Result<Self> {
        let mut polarity = BTreeMap::new();
        for (line, term, value) in parse_tsv_pairs("lexicon", lexicon)? {
            let p: f64 = value.parse().map_err(|_| Error::Resource {
                name: "lexicon".into(),
                line,
                reason: format!("`{value}` is not a number"),
            })?;
            if !(p.abs() <= 1.0) {
                return Err(Error::Resource {
                    name: "lexicon".into(),
                    line,
                    reason: format!("polarity {p} outside [-1, 1]"),
                });
            }
            polarity.insert(term.to_lowercase(), p);
        }
        Self::new(polarity, parse_word_list(negators))
    }

    /// Re-keys entries by stem; terms sharing a stem get their mean polarity.
    pub fn stemmed(&self) -> Self {
        let mut grouped: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for (t, &p) in &self.polarity {
            let e = grouped.entry(stem(t)).or_insert((0.0, 0));
            e.0 += p;
            e.1 += 1;
        }
        SentimentLexicon {
            polarity: grouped.into_iter().map(|(t, (sum, n))| (t, sum / n as f64)).collect(),
            negators: self.negators.iter().map(|n| stem(n)).collect(),
        }
    }

    pub fn polarity(&self, term: &str) -> Option<f64> {
        self.polarity.get(term).copied()
    }

    pub fn is_negator(&self, term: &str) -> bool {
        self.negators.contains(term)
    }

    /// Terms with nonzero polarity.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.polarity.iter().filter(|(_, &p)| p != 0.0).map(|(t, _)| t.as_str())
    }
}

/// Positive and negative sentiment mass of one tweet.
///
/// Each sentence scores the sum of its lexicon hits, a hit flipping sign when
/// a negator sits within the [`NEGATION_WINDOW`] tokens before it. Positive
/// sentence scores add to `pos`, negative ones to `neg` (as magnitudes).
pub fn tweet_sentiment(tweet: &TokenStream<String>, lex: &SentimentLexicon) -> (f64, f64) {
    let (mut pos, mut neg) = (0.0, 0.0);
    for sentence in tweet.sentences() {
        let mut score = 0.0;
        for (i, token) in sentence.iter().enumerate() {
            let Some(p) = lex.polarity(token) else { continue };
            let negated = sentence[i.saturating_sub(NEGATION_WINDOW)..i]
                .iter()
                .any(|t| lex.is_negator(t));
            score += if negated { -p } else { p };
        }
        if score > 0.0 {
            pos += score;
        } else if score < 0.0 {
            neg -= score;
        }
    }
    (pos, neg)
}

/// Per-tweet scores for every tweet of a user.
pub fn doc_sentiments(doc: &TokenDoc, lex: &SentimentLexicon) -> Vec<(f64, f64)> {
    (0..doc.tweet_count())
        .map(|i| tweet_sentiment(&doc.tweet(i), lex))
        .collect()
}

/// Signed score of one tweet under `mode`. Mixed-polarity tweets count as
/// negative in `Mixed` mode.
pub fn tweet_score((pos, neg): (f64, f64), mode: SentimentMode) -> f64 {
    match mode {
        SentimentMode::Mixed if pos > 0.0 && neg > 0.0 => -neg,
        _ => pos - neg,
    }
}

/// Mean signed tweet score. `None` mode and users without tweets give 0.
pub fn user_sentiment(tweets: &[(f64, f64)], mode: SentimentMode) -> f64 {
    if tweets.is_empty() || mode == SentimentMode::None {
        return 0.0;
    }
    tweets.iter().map(|&t| tweet_score(t, mode)).sum::<f64>() / tweets.len() as f64
}

/// Lexicon terms used by at least one depressed user among `rows`.
pub fn build_dept_sent_vocab(
    docs: &[TokenDoc],
    labels: &[Label],
    rows: &[usize],
    lex: &SentimentLexicon,
) -> Result<BTreeSet<String>> {
    let mut vocab = BTreeSet::new();
    for &r in rows {
        if !labels[r].is_positive() {
            continue;
        }
        for t in &docs[r].tokens {
            if lex.polarity(t).is_some_and(|p| p != 0.0) {
                vocab.insert(t.clone());
            }
        }
    }
    if vocab.is_empty() {
        return Err(Error::EmptyVocab);
    }
    Ok(vocab)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(entries: &[(&str, f64)]) -> SentimentLexicon {
        SentimentLexicon::new(
            entries.iter().map(|&(t, p)| (t.to_string(), p)).collect(),
            ["not", "never"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    fn one_sentence(tokens: &[&str]) -> TokenStream<String> {
        TokenStream {
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
            sentence_spans: vec![(0, tokens.len())],
        }
    }

    #[test]
    fn no_hits() {
        assert_eq!(
            tweet_sentiment(&one_sentence(&["coffee"]), &lex(&[("happy", 0.7)])),
            (0.0, 0.0)
        );
    }

    #[test]
    fn hits_sum_within_sentence() {
        let l = lex(&[("great", 0.8), ("fun", 0.5)]);
        let (pos, neg) = tweet_sentiment(&one_sentence(&["great", "day", "fun"]), &l);
        assert!((pos - 1.3).abs() < 1e-12);
        assert_eq!(neg, 0.0);
    }

    #[test]
    fn negation_flips() {
        let l = lex(&[("happy", 0.7)]);
        assert_eq!(tweet_sentiment(&one_sentence(&["not", "happy"]), &l), (0.0, 0.7));
        assert_eq!(
            tweet_sentiment(&one_sentence(&["not", "very", "happy"]), &l),
            (0.0, 0.7)
        );
        // outside the window
        assert_eq!(
            tweet_sentiment(&one_sentence(&["not", "a", "b", "happy"]), &l),
            (0.7, 0.0)
        );
    }

    #[test]
    fn negation_does_not_cross_sentences() {
        let l = lex(&[("happy", 0.7)]);
        let t = TokenStream {
            tokens: vec!["not".into(), "happy".into()],
            sentence_spans: vec![(0, 1), (1, 2)],
        };
        assert_eq!(tweet_sentiment(&t, &l), (0.7, 0.0));
    }

    #[test]
    fn mixed_sentences_keep_both_sides() {
        let l = lex(&[("happy", 0.7), ("sad", -0.5)]);
        let t = TokenStream {
            tokens: vec!["happy".into(), "sad".into()],
            sentence_spans: vec![(0, 1), (1, 2)],
        };
        assert_eq!(tweet_sentiment(&t, &l), (0.7, 0.5));
    }

    #[test]
    fn user_sentiment_examples() {
        assert_eq!(user_sentiment(&[(1.0, 0.0), (0.0, 1.0)], SentimentMode::Avg), 0.0);
        assert_eq!(user_sentiment(&[(0.5, 0.5)], SentimentMode::Mixed), -0.5);
        assert_eq!(user_sentiment(&[(0.5, 0.5)], SentimentMode::Avg), 0.0);
        for mode in [SentimentMode::Avg, SentimentMode::Mixed] {
            assert_eq!(user_sentiment(&[(0.0, 0.0); 3], mode), 0.0);
        }
    }

    #[test]
    fn lexicon_validation() {
        assert!(SentimentLexicon::parse("bad\t-1.5\n", "").is_err());
        assert!(SentimentLexicon::parse("bad\tx\n", "").is_err());
        let l = SentimentLexicon::parse("crying\t-0.6\ncry\t-0.4\n", "not\n")
            .unwrap()
            .stemmed();
        assert!((l.polarity("cri").unwrap() + 0.5).abs() < 1e-12);
    }

    fn doc(tokens: &[&str]) -> TokenDoc {
        TokenDoc {
            user_id: String::new(),
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
            sentence_spans: vec![(0, tokens.len())],
            tweet_spans: vec![(0, tokens.len())],
        }
    }

    #[test]
    fn dept_sent_vocab() {
        let l = lex(&[("sad", -0.7), ("happy", 0.7), ("zero", 0.0)]);
        let docs = [doc(&["sad", "coffee", "zero"]), doc(&["happy"]), doc(&["happy", "sad"])];
        let labels = [Label::Depressed, Label::NotDepressed, Label::NotDepressed];
        let v = build_dept_sent_vocab(&docs, &labels, &[0, 1, 2], &l).unwrap();
        assert_eq!(v.into_iter().collect::<Vec<_>>(), ["sad"]);
        assert!(matches!(
            build_dept_sent_vocab(&docs, &labels, &[1, 2], &l),
            Err(Error::EmptyVocab)
        ));
    }
}
