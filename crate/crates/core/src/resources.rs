//! Word lists, lexicons and thesauri: bundled defaults and file loaders.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::features::SentimentLexicon;
use crate::matrix::Thesaurus;

pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");
pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
pub const NEGATORS: &str = include_str!("../data/negators.txt");
pub const THESAURUS: &str = include_str!("../data/thesaurus.tsv");
pub const DEPRESSION_WORDS: &str = include_str!("../data/synth/depression_words.txt");
pub const NEUTRAL_WORDS: &str = include_str!("../data/synth/neutral_words.txt");
pub const PRONOUNS: &str = include_str!("../data/synth/pronouns.txt");
pub const FILLERS: &str = include_str!("../data/synth/fillers.txt");

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// One word per line, `#` comments, blank lines ignored. Words are lowercased.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    content_lines(text).map(|(_, l)| l.to_lowercase()).collect()
}

/// Like [`parse_word_list`] but keeps file order and duplicates.
pub fn parse_word_vec(text: &str) -> Vec<String> {
    content_lines(text).map(|(_, l)| l.to_lowercase()).collect()
}

/// Two-column tab-separated lines, `#` comments allowed.
pub(crate) fn parse_tsv_pairs<'a>(name: &str, text: &'a str) -> Result<Vec<(usize, &'a str, &'a str)>> {
    content_lines(text)
        .map(|(line, l)| {
            let mut cols = l.split('\t').map(str::trim);
            match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => Ok((line, a, b)),
                _ => Err(Error::Resource {
                    name: name.to_owned(),
                    line,
                    reason: "expected `term<TAB>value`".into(),
                }),
            }
        })
        .collect()
}

pub fn bundled_stopwords() -> BTreeSet<String> {
    parse_word_list(STOPWORDS)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Optional override paths for the text resources. `None` means bundled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResourcePaths {
    pub stopwords: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub negators: Option<PathBuf>,
    pub thesaurus: Option<PathBuf>,
}

/// Everything the pipeline reads besides the corpus. Lexicon, negator and
/// thesaurus keys are stored stemmed so they match token streams.
#[derive(Debug, Clone, PartialEq)]
pub struct Resources {
    pub stopwords: BTreeSet<String>,
    pub lexicon: SentimentLexicon,
    pub thesaurus: Thesaurus,
}

impl Resources {
    pub fn bundled() -> Self {
        Self::load(&ResourcePaths::default()).expect("bundled resources parse")
    }

    pub fn load(paths: &ResourcePaths) -> Result<Self> {
        let stopwords = match &paths.stopwords {
            Some(p) => parse_word_list(&read(p)?),
            None => bundled_stopwords(),
        };
        let lexicon_text = match &paths.lexicon {
            Some(p) => read(p)?,
            None => LEXICON.to_owned(),
        };
        let negator_text = match &paths.negators {
            Some(p) => read(p)?,
            None => NEGATORS.to_owned(),
        };
        let thesaurus_text = match &paths.thesaurus {
            Some(p) => read(p)?,
            None => THESAURUS.to_owned(),
        };
        let lexicon = SentimentLexicon::parse(&lexicon_text, &negator_text)?.stemmed();
        let thesaurus = Thesaurus::parse(&thesaurus_text)?.stemmed();
        Ok(Resources {
            stopwords,
            lexicon,
            thesaurus,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_list_format() {
        let words = parse_word_list("# header\nThe\n\n  a  # trailing\nthe\n");
        assert_eq!(words.into_iter().collect::<Vec<_>>(), ["a", "the"]);
    }

    #[test]
    fn bundled_lists_are_sane() {
        let stop = bundled_stopwords();
        assert!((150..=190).contains(&stop.len()), "{}", stop.len());
        let negators = parse_word_list(NEGATORS);
        assert!(stop.is_disjoint(&negators));
        for w in parse_word_vec(NEUTRAL_WORDS) {
            assert!(!w.contains("depress"), "{w}");
        }
        let r = Resources::bundled();
        assert!(r.lexicon.polarity("sad").is_some());
        assert!(r.lexicon.is_negator("not"));
        assert_eq!(r.thesaurus.group("depress"), Some("syn_sad"));
    }

    #[test]
    fn tsv_errors_name_the_line() {
        match parse_tsv_pairs("x", "a\t1\nbroken\n") {
            Err(Error::Resource { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
