//! Tweet text to normalized, stemmed token streams.
//!
//! The pipeline is `tokenize -> normalize -> stem`. Sentence boundaries
//! found by the tokenizer travel with the tokens so sentiment scoring can
//! work per sentence after normalization.

pub mod porter;

use std::collections::BTreeSet;
use std::path::Path;

use crate::corpus::UserRecord;
use crate::error::{Error, Result};
use crate::resources;

pub use porter::stem;

/// First-person pronouns kept when the self-center flag is on.
pub const FIRST_PERSON_PRONOUNS: [&str; 10] = [
    "i",
    "me",
    "my",
    "mine",
    "myself",
    "we",
    "us",
    "our",
    "ours",
    "ourselves",
];

/// A token as produced by [`tokenize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawToken {
    Word(String),
    Url,
    Mention,
    Retweet,
}

impl RawToken {
    fn word(s: &str) -> Self {
        RawToken::Word(s.to_owned())
    }
}

/// Tokens plus half-open `(start, end)` sentence spans partitioning them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream<T> {
    pub tokens: Vec<T>,
    pub sentence_spans: Vec<(usize, usize)>,
}

impl<T> Default for TokenStream<T> {
    fn default() -> Self {
        TokenStream {
            tokens: Vec::new(),
            sentence_spans: Vec::new(),
        }
    }
}

impl<T> TokenStream<T> {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &[T]> {
        self.sentence_spans.iter().map(|&(s, e)| &self.tokens[s..e])
    }
}

fn is_sentence_end(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Characters that split words. Emoji and other symbols are not separators;
/// they stay inside tokens and are removed by [`normalize`].
fn is_separator(c: char) -> bool {
    c.is_whitespace()
        || c.is_ascii_punctuation() && c != '\'' && c != '@'
        || matches!(c, '\u{2010}'..='\u{2027}' | '\u{2030}'..='\u{205E}' | '\u{3001}' | '\u{3002}') && c != '\u{2019}'
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_url(chunk: &str) -> bool {
    let lower = chunk.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Splits text into words, tagged URL / mention / retweet-marker tokens,
/// and sentence spans. Sentences end at runs of `.`, `!` or `?` and at the
/// end of the text.
pub fn tokenize(text: &str) -> TokenStream<RawToken> {
    let mut out = TokenStream::default();
    let mut sentence_start = 0;
    let close_sentence = |out: &mut TokenStream<RawToken>, start: &mut usize| {
        if out.tokens.len() > *start {
            out.sentence_spans.push((*start, out.tokens.len()));
            *start = out.tokens.len();
        }
    };

    for chunk in text.split_whitespace() {
        if is_url(chunk) {
            out.tokens.push(RawToken::Url);
            continue;
        }
        if chunk == "RT" {
            out.tokens.push(RawToken::Retweet);
            continue;
        }
        if let Some(rest) = chunk.strip_prefix('@') {
            out.tokens.push(RawToken::Mention);
            // "@bob." still ends a sentence.
            if rest.ends_with(is_sentence_end) {
                close_sentence(&mut out, &mut sentence_start);
            }
            continue;
        }
        let mut word = String::new();
        for c in chunk.chars() {
            if is_separator(c) || c == '@' {
                if !word.is_empty() {
                    out.tokens.push(RawToken::Word(std::mem::take(&mut word)));
                }
                if is_sentence_end(c) {
                    close_sentence(&mut out, &mut sentence_start);
                }
            } else if !is_apostrophe(c) {
                word.push(c);
            }
        }
        if !word.is_empty() {
            out.tokens.push(RawToken::word(&word));
        }
    }
    close_sentence(&mut out, &mut sentence_start);
    out
}

/// Stopword removal settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordPolicy {
    base_list: BTreeSet<String>,
    self_center: bool,
    retained_pronouns: BTreeSet<String>,
    effective: BTreeSet<String>,
}

impl StopwordPolicy {
    pub fn new(base_list: BTreeSet<String>, self_center: bool) -> Self {
        Self::with_retained(
            base_list,
            self_center,
            FIRST_PERSON_PRONOUNS.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn with_retained(base_list: BTreeSet<String>, self_center: bool, retained_pronouns: BTreeSet<String>) -> Self {
        let effective = if self_center {
            base_list.difference(&retained_pronouns).cloned().collect()
        } else {
            base_list.union(&retained_pronouns).cloned().collect()
        };
        StopwordPolicy {
            base_list,
            self_center,
            retained_pronouns,
            effective,
        }
    }

    /// The bundled English stoplist.
    pub fn bundled(self_center: bool) -> Self {
        Self::new(resources::bundled_stopwords(), self_center)
    }

    pub fn from_file(path: impl AsRef<Path>, self_center: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(resources::parse_word_list(&text), self_center))
    }

    pub fn self_center(&self) -> bool {
        self.self_center
    }

    pub fn base_list(&self) -> &BTreeSet<String> {
        &self.base_list
    }

    pub fn retained_pronouns(&self) -> &BTreeSet<String> {
        &self.retained_pronouns
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.effective.contains(word)
    }
}

/// Lowercases, strips symbols, drops tagged tokens, letterless tokens and
/// stopwords. Sentence spans are remapped; sentences left empty vanish.
pub fn normalize(raw: &TokenStream<RawToken>, policy: &StopwordPolicy) -> TokenStream<String> {
    let mut out = TokenStream::default();
    for &(start, end) in &raw.sentence_spans {
        let sentence_start = out.tokens.len();
        for token in &raw.tokens[start..end] {
            let RawToken::Word(word) = token else { continue };
            let cleaned: String = word
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            if !cleaned.chars().any(char::is_alphabetic) || policy.is_stopword(&cleaned) {
                continue;
            }
            out.tokens.push(cleaned);
        }
        if out.tokens.len() > sentence_start {
            out.sentence_spans.push((sentence_start, out.tokens.len()));
        }
    }
    out
}

/// Convenience for a bare token list: treats it as a single sentence.
pub fn normalize_words<S: AsRef<str>>(words: &[S], policy: &StopwordPolicy) -> Vec<String> {
    let raw = TokenStream {
        tokens: words.iter().map(|w| RawToken::word(w.as_ref())).collect(),
        sentence_spans: if words.is_empty() {
            vec![]
        } else {
            vec![(0, words.len())]
        },
    };
    normalize(&raw, policy).tokens
}

/// Full per-tweet pipeline.
pub fn preprocess_text(text: &str, policy: &StopwordPolicy) -> TokenStream<String> {
    let mut normalized = normalize(&tokenize(text), policy);
    for token in &mut normalized.tokens {
        *token = stem(token);
    }
    normalized
}

/// All tweets of one user after preprocessing.
///
/// `tokens` is the concatenation of every tweet's tokens; `tweet_spans`
/// delimits tweets and `sentence_spans` delimits sentences within them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDoc {
    pub user_id: String,
    pub tokens: Vec<String>,
    pub sentence_spans: Vec<(usize, usize)>,
    pub tweet_spans: Vec<(usize, usize)>,
}

impl TokenDoc {
    pub fn from_user(user: &UserRecord, policy: &StopwordPolicy) -> Self {
        let mut doc = TokenDoc {
            user_id: user.user_id.clone(),
            tokens: Vec::new(),
            sentence_spans: Vec::new(),
            tweet_spans: Vec::with_capacity(user.tweets.len()),
        };
        for tweet in &user.tweets {
            let offset = doc.tokens.len();
            let stream = preprocess_text(&tweet.text, policy);
            doc.sentence_spans
                .extend(stream.sentence_spans.iter().map(|&(s, e)| (s + offset, e + offset)));
            doc.tokens.extend(stream.tokens);
            doc.tweet_spans.push((offset, doc.tokens.len()));
        }
        doc
    }

    /// The tokens and sentence spans of tweet `i`, spans relative to the tweet.
    pub fn tweet(&self, i: usize) -> TokenStream<String> {
        let (start, end) = self.tweet_spans[i];
        TokenStream {
            tokens: self.tokens[start..end].to_vec(),
            sentence_spans: self
                .sentence_spans
                .iter()
                .filter(|&&(s, e)| s >= start && e <= end && s < e)
                .map(|&(s, e)| (s - start, e - start))
                .collect(),
        }
    }

    pub fn tweet_count(&self) -> usize {
        self.tweet_spans.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(stream: &TokenStream<RawToken>) -> Vec<String> {
        stream
            .tokens
            .iter()
            .map(|t| match t {
                RawToken::Word(w) => w.clone(),
                RawToken::Url => "<url>".into(),
                RawToken::Mention => "<mention>".into(),
                RawToken::Retweet => "<rt>".into(),
            })
            .collect()
    }

    fn policy(words: &[&str], self_center: bool) -> StopwordPolicy {
        StopwordPolicy::new(words.iter().map(|s| s.to_string()).collect(), self_center)
    }

    #[test]
    fn tokenize_sentences() {
        let t = tokenize("I am sad. Really sad!");
        assert_eq!(words(&t), ["I", "am", "sad", "Really", "sad"]);
        assert_eq!(t.sentence_spans, [(0, 3), (3, 5)]);
    }

    #[test]
    fn tokenize_empty() {
        let t = tokenize("");
        assert!(t.tokens.is_empty());
        assert!(t.sentence_spans.is_empty());
        assert!(tokenize("  ...!!  ").tokens.is_empty());
    }

    #[test]
    fn tokenize_tags() {
        let t = tokenize("RT @bob http://t.co/x hi");
        assert_eq!(
            t.tokens,
            [
                RawToken::Retweet,
                RawToken::Mention,
                RawToken::Url,
                RawToken::word("hi")
            ]
        );
        assert_eq!(t.sentence_spans, [(0, 4)]);
    }

    #[test]
    fn tokenize_punctuation_and_apostrophes() {
        let t = tokenize("don't stop,please... ok?!yes");
        assert_eq!(words(&t), ["dont", "stop", "please", "ok", "yes"]);
        assert_eq!(t.sentence_spans, [(0, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn normalize_self_center() {
        let p = policy(&["am", "so", "i", "me"], true);
        assert_eq!(normalize_words(&["I", "am", "SO", "sad"], &p), ["i", "sad"]);
        let p = policy(&["am", "so", "i", "me"], false);
        assert_eq!(normalize_words(&["I", "am", "SO", "sad"], &p), ["sad"]);
    }

    #[test]
    fn normalize_with_bundled_list() {
        assert_eq!(
            normalize_words(&["I", "am", "SO", "sad"], &StopwordPolicy::bundled(true)),
            ["i", "sad"]
        );
        assert_eq!(
            normalize_words(&["I", "am", "SO", "sad"], &StopwordPolicy::bundled(false)),
            ["sad"]
        );
    }

    #[test]
    fn normalize_drops_tags_and_symbols() {
        let p = policy(&[], true);
        let raw = TokenStream {
            tokens: vec![RawToken::Url, RawToken::Mention],
            sentence_spans: vec![(0, 2)],
        };
        assert!(normalize(&raw, &p).is_empty());
        assert!(normalize(&raw, &p).sentence_spans.is_empty());
        assert_eq!(normalize_words(&["😢", "2019", "sad😢", "#x"], &p), ["sad", "x"]);
    }

    #[test]
    fn normalize_remaps_spans() {
        let p = policy(&["is", "the"], true);
        let n = normalize(&tokenize("The sky is. Is. Grey today"), &p);
        assert_eq!(n.tokens, ["sky", "grey", "today"]);
        assert_eq!(n.sentence_spans, [(0, 1), (1, 3)]);
    }

    #[test]
    fn retained_set_is_never_stopped_when_self_centered() {
        let p = StopwordPolicy::bundled(true);
        for w in p.retained_pronouns() {
            assert!(!p.is_stopword(w));
        }
        let p = StopwordPolicy::bundled(false);
        for w in FIRST_PERSON_PRONOUNS {
            assert!(p.is_stopword(w));
        }
    }

    #[test]
    fn user_doc_tracks_tweets() {
        use crate::corpus::{Label, Tweet};
        use chrono::{TimeZone, Utc};
        let t = |s: &str| Tweet {
            text: s.into(),
            created_at: Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap(),
            is_retweet: false,
            is_reply: false,
            mention_count: 0,
            link_count: 0,
        };
        let user = UserRecord {
            user_id: "u".into(),
            label: Label::Depressed,
            followers_count: 0,
            following_count: 0,
            tweets: vec![t("I am crying. So sad"), t("@x http://a.b"), t("not happy!")],
        };
        let doc = TokenDoc::from_user(&user, &StopwordPolicy::bundled(true));
        assert_eq!(doc.tokens, ["i", "cri", "sad", "not", "happi"]);
        assert_eq!(doc.tweet_spans, [(0, 3), (3, 3), (3, 5)]);
        assert_eq!(doc.sentence_spans, [(0, 2), (2, 3), (3, 5)]);
        assert_eq!(doc.tweet(2).sentence_spans, [(0, 2)]);
        assert!(doc.tweet(1).is_empty());
    }
}
