//! Labeled user records: loading, validation and the collection filters.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"user_id":"u1","label":"depressed","followers":10,"following":20,
//!  "tweets":[{"text":"...","created_at":"2019-01-01T10:00:00Z",
//!             "is_retweet":false,"is_reply":false,"mentions":0,"links":0}]}
//! ```
//!
//! Blank lines are ignored. Tweets are kept in file order, which by
//! convention is newest first.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of posts a user needs to stay in the corpus.
pub const DEFAULT_MIN_POSTS: usize = 5;
/// Number of most recent tweets kept per user.
pub const DEFAULT_TWEET_CAP: usize = 3000;

/// Binary class label. `Depressed` is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "depressed")]
    Depressed,
    #[serde(rename = "control")]
    NotDepressed,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Depressed
    }

    /// `+1.0` for depressed, `-1.0` for control.
    pub fn sign(self) -> f64 {
        if self.is_positive() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn from_positive(positive: bool) -> Self {
        if positive {
            Label::Depressed
        } else {
            Label::NotDepressed
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Depressed => "depressed",
            Label::NotDepressed => "control",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub text: String,
    pub created_at: DateTime<Utc>,
    pub is_retweet: bool,
    pub is_reply: bool,
    #[serde(rename = "mentions")]
    pub mention_count: u32,
    #[serde(rename = "links")]
    pub link_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: String,
    pub label: Label,
    #[serde(rename = "followers")]
    pub followers_count: u64,
    #[serde(rename = "following")]
    pub following_count: u64,
    pub tweets: Vec<Tweet>,
}

/// An immutable set of labeled users with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    users: Vec<UserRecord>,
    positive_count: usize,
    negative_count: usize,
    screened_out: Vec<String>,
}

impl Corpus {
    /// Builds a corpus from records, rejecting duplicate ids and empty input.
    pub fn new(users: Vec<UserRecord>) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = HashSet::with_capacity(users.len());
        for user in &users {
            if !seen.insert(user.user_id.as_str()) {
                return Err(Error::DuplicateUser(user.user_id.clone()));
            }
        }
        let positive_count = users.iter().filter(|u| u.label.is_positive()).count();
        let negative_count = users.len() - positive_count;
        Ok(Corpus {
            users,
            positive_count,
            negative_count,
            screened_out: Vec::new(),
        })
    }

    pub fn users(&self) -> &[UserRecord] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    pub fn negative_count(&self) -> usize {
        self.negative_count
    }

    pub fn labels(&self) -> Vec<Label> {
        self.users.iter().map(|u| u.label).collect()
    }

    /// Ids of control users excluded at load time by [`control_screen`].
    pub fn screened_out(&self) -> &[String] {
        &self.screened_out
    }

    pub fn into_users(self) -> Vec<UserRecord> {
        self.users
    }
}

/// Parses one corpus line. `line_no` is 1-based and only used in errors.
pub fn parse_record(line: &str, line_no: usize) -> Result<UserRecord> {
    let record: UserRecord = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
        line: line_no,
        reason: e.to_string(),
    })?;
    if record.user_id.trim().is_empty() {
        return Err(Error::MalformedRecord {
            line: line_no,
            reason: "empty user_id".into(),
        });
    }
    if let Some(pos) = record.tweets.iter().position(|t| t.text.trim().is_empty()) {
        return Err(Error::MalformedRecord {
            line: line_no,
            reason: format!("tweet {pos} has empty text"),
        });
    }
    Ok(record)
}

/// Reads a corpus from any line-oriented reader.
///
/// Control users that fail [`control_screen`] are dropped with a warning and
/// listed in [`Corpus::screened_out`].
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut users = Vec::new();
    let mut screened_out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_record(&line, idx + 1)?;
        if record.label == Label::NotDepressed && !control_screen(&record) {
            log::warn!("control user `{}` mentions \"depress\"; excluded", record.user_id);
            screened_out.push(record.user_id);
            continue;
        }
        users.push(record);
    }
    let mut corpus = Corpus::new(users)?;
    corpus.screened_out = screened_out;
    Ok(corpus)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(std::io::BufReader::new(file))
}

/// Serializes users back into the line-delimited corpus format.
pub fn write_corpus<W: std::io::Write>(mut out: W, users: &[UserRecord]) -> Result<()> {
    for user in users {
        serde_json::to_writer(&mut out, user)?;
        out.write_all(b"\n").map_err(|e| Error::io("<corpus>", e))?;
    }
    Ok(())
}

/// Drops users with fewer than `min_posts` tweets and keeps at most the
/// `tweet_cap` newest tweets of the others (relative order is preserved).
pub fn filter_users(corpus: &Corpus, min_posts: usize, tweet_cap: usize) -> Result<Corpus> {
    if min_posts < 1 || tweet_cap < min_posts {
        return Err(Error::InvalidParams(format!(
            "need 1 <= min_posts <= tweet_cap, got min_posts={min_posts} tweet_cap={tweet_cap}"
        )));
    }
    let users: Vec<UserRecord> = corpus
        .users
        .iter()
        .filter(|u| u.tweets.len() >= min_posts)
        .map(|u| {
            let mut user = u.clone();
            truncate_newest(&mut user.tweets, tweet_cap);
            user
        })
        .collect();
    let mut filtered = Corpus::new(users)?;
    filtered.screened_out = corpus.screened_out.clone();
    Ok(filtered)
}

fn truncate_newest(tweets: &mut Vec<Tweet>, cap: usize) {
    if tweets.len() <= cap {
        return;
    }
    let mut order: Vec<usize> = (0..tweets.len()).collect();
    // Newest first; equal timestamps keep file order.
    order.sort_by(|&a, &b| tweets[b].created_at.cmp(&tweets[a].created_at).then(a.cmp(&b)));
    let mut keep = vec![false; tweets.len()];
    for &i in &order[..cap] {
        keep[i] = true;
    }
    let mut idx = 0;
    tweets.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
}

/// True when no tweet of the user contains "depress" in any letter case.
pub fn control_screen(user: &UserRecord) -> bool {
    !user.tweets.iter().any(|t| t.text.to_lowercase().contains("depress"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn tweet(text: &str, day: u32) -> Tweet {
        Tweet {
            text: text.into(),
            created_at: Utc.with_ymd_and_hms(2019, 1, day, 12, 0, 0).unwrap(),
            is_retweet: false,
            is_reply: false,
            mention_count: 0,
            link_count: 0,
        }
    }

    fn user(id: &str, label: Label, n: usize) -> UserRecord {
        UserRecord {
            user_id: id.into(),
            label,
            followers_count: 1,
            following_count: 2,
            tweets: (0..n).map(|i| tweet("hello there", 1 + (i % 28) as u32)).collect(),
        }
    }

    fn line(u: &UserRecord) -> String {
        serde_json::to_string(u).unwrap()
    }

    #[test]
    fn loads_two_users() {
        let text = format!(
            "{}\n{}\n",
            line(&user("a", Label::Depressed, 5)),
            line(&user("b", Label::NotDepressed, 6))
        );
        let corpus = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.positive_count(), 1);
        assert_eq!(corpus.negative_count(), 1);
    }

    #[test]
    fn missing_label_names_the_line() {
        let good = line(&user("a", Label::Depressed, 5));
        let bad = good.replace("\"label\":\"depressed\",", "").replace("\"a\"", "\"b\"");
        let text = format!("{good}\n{bad}\n");
        match read_corpus(text.as_bytes()) {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_timestamp_is_malformed() {
        let text = r#"{"user_id":"a","label":"control","followers":1,"following":1,"tweets":[{"text":"hi","is_retweet":false,"is_reply":false,"mentions":0,"links":0}]}"#;
        assert!(matches!(
            read_corpus(text.as_bytes()),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn blank_tweet_text_is_malformed() {
        let mut u = user("a", Label::Depressed, 5);
        u.tweets[2].text = "   ".into();
        assert!(matches!(
            read_corpus(line(&u).as_bytes()),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_and_empty() {
        let u = line(&user("a", Label::Depressed, 5));
        let text = format!("{u}\n{u}\n");
        assert!(matches!(read_corpus(text.as_bytes()), Err(Error::DuplicateUser(id)) if id == "a"));
        assert!(matches!(read_corpus("\n\n".as_bytes()), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn class_balance_of_a_small_corpus() {
        let text: String = (0..111)
            .map(|i| {
                let label = if i < 67 { Label::Depressed } else { Label::NotDepressed };
                line(&user(&format!("u{i}"), label, 5)) + "\n"
            })
            .collect();
        let corpus = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(corpus.positive_count(), 67);
        assert_eq!(corpus.negative_count(), 44);
    }

    #[test]
    fn screen_is_applied_at_load() {
        let mut c = user("c", Label::NotDepressed, 5);
        c.tweets[0].text = "so Depressing".into();
        let text = format!("{}\n{}\n", line(&c), line(&user("d", Label::Depressed, 5)));
        let corpus = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.screened_out(), ["c".to_string()]);
    }

    #[test]
    fn filter_boundaries() {
        let corpus = Corpus::new(vec![
            user("four", Label::Depressed, 4),
            user("five", Label::Depressed, 5),
            user("many", Label::NotDepressed, 3500),
        ])
        .unwrap();
        let out = filter_users(&corpus, DEFAULT_MIN_POSTS, DEFAULT_TWEET_CAP).unwrap();
        let ids: Vec<_> = out.users().iter().map(|u| u.user_id.as_str()).collect();
        assert_eq!(ids, ["five", "many"]);
        assert_eq!(out.users()[0], corpus.users()[1]);
        assert_eq!(out.users()[1].tweets.len(), 3000);
    }

    #[test]
    fn truncation_keeps_newest_even_if_unordered() {
        let mut u = user("x", Label::Depressed, 6);
        for (i, t) in u.tweets.iter_mut().enumerate() {
            t.created_at = Utc
                .with_ymd_and_hms(2019, 1, 10 - i as u32 % 3 * 3, 0, 0, i as u32)
                .unwrap();
        }
        let newest = u.tweets.iter().map(|t| t.created_at).max().unwrap();
        let corpus = Corpus::new(vec![u]).unwrap();
        let out = filter_users(&corpus, 1, 2).unwrap();
        let kept = &out.users()[0].tweets;
        assert_eq!(kept.len(), 2);
        assert!(kept.iter().all(|t| t.created_at.format("%d").to_string() == "10"));
        assert_eq!(kept.iter().map(|t| t.created_at).max().unwrap(), newest);
    }

    #[test]
    fn filter_errors() {
        let corpus = Corpus::new(vec![user("a", Label::Depressed, 3)]).unwrap();
        assert!(matches!(filter_users(&corpus, 5, 3000), Err(Error::EmptyCorpus)));
        assert!(matches!(filter_users(&corpus, 0, 3000), Err(Error::InvalidParams(_))));
        assert!(matches!(filter_users(&corpus, 10, 5), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn control_screen_examples() {
        let mut u = user("c", Label::NotDepressed, 1);
        u.tweets[0].text = "feeling great today".into();
        assert!(control_screen(&u));
        u.tweets[0].text = "so depressing weather".into();
        assert!(!control_screen(&u));
        u.tweets[0].text = "DEPRESSION awareness day".into();
        assert!(!control_screen(&u));
    }
}
