//! Seeded synthetic corpora with plantable depression signals.
//!
//! Both classes write tweets from the same neutral and filler vocabulary.
//! Depressed users differ only through three knobs:
//!
//! * `s_text`: chance that a tweet carries a word from the depression pool;
//! * `pronoun_boost`: added to the base chance of a first-person pronoun;
//! * `s_act`: shifts posting towards the night band and raises the number
//!   of posts.
//!
//! With all three at 0 the classes are identically distributed.
//!
//! ```
//! use ddacf::synth::{generate, SynthParams};
//!
//! let params = SynthParams { n_users: 10, seed: 3, ..SynthParams::default() };
//! let users = generate(&params).unwrap();
//! assert_eq!(users.len(), 10);
//! assert_eq!(users.iter().filter(|u| u.label.is_positive()).count(), 5);
//! assert_eq!(users, generate(&params).unwrap());
//! ```

use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{write_corpus, Label, Tweet, UserRecord};
use crate::error::{Error, Result};
use crate::resources::{parse_word_vec, DEPRESSION_WORDS, FILLERS, NEUTRAL_WORDS, PRONOUNS};

pub const WINDOW_DAYS: i64 = 90;
pub const BASE_PRONOUN_RATE: f64 = 0.2;
pub const BASE_NIGHT_RATE: f64 = 0.15;
/// Night-hour share reached by depressed users at `s_act = 1`.
pub const MAX_NIGHT_RATE: f64 = 0.75;
const NIGHT_HOURS: u32 = 6;
const RETWEET_RATE: f64 = 0.1;
const REPLY_RATE: f64 = 0.15;
const LINK_RATE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_users: usize,
    pub depressed_fraction: f64,
    /// Inclusive range of tweets per user before the activity shift.
    pub tweets_per_user: (usize, usize),
    pub s_text: f64,
    pub pronoun_boost: f64,
    pub s_act: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_users: 200,
            depressed_fraction: 0.5,
            tweets_per_user: (20, 40),
            s_text: 0.0,
            pronoun_boost: 0.0,
            s_act: 0.0,
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("depressed_fraction", self.depressed_fraction),
            ("s_text", self.s_text),
            ("pronoun_boost", self.pronoun_boost),
            ("s_act", self.s_act),
        ];
        if let Some((name, p)) = probs.iter().find(|(_, p)| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParams(format!("{name} = {p} is outside [0, 1]")));
        }
        if self.n_users < 4 {
            return Err(Error::InvalidParams(format!("n_users = {} is below 4", self.n_users)));
        }
        let (lo, hi) = self.tweets_per_user;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidParams(format!("tweets_per_user range {lo}..={hi}")));
        }
        Ok(())
    }

    pub fn n_depressed(&self) -> usize {
        (self.n_users as f64 * self.depressed_fraction).floor() as usize
    }
}

struct Pools {
    depression: Vec<String>,
    neutral: Vec<String>,
    pronouns: Vec<String>,
    fillers: Vec<String>,
}

impl Pools {
    fn bundled() -> Self {
        Pools {
            depression: parse_word_vec(DEPRESSION_WORDS),
            neutral: parse_word_vec(NEUTRAL_WORDS),
            pronouns: parse_word_vec(PRONOUNS),
            fillers: parse_word_vec(FILLERS),
        }
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &'a [String]) -> &'a str {
    pool.choose(rng).expect("word pools are never empty")
}

fn tweet_text(rng: &mut ChaCha8Rng, pools: &Pools, depressed: bool, p: &SynthParams) -> String {
    let n_words = rng.gen_range(4..=10);
    let mut words: Vec<&str> = (0..n_words)
        .map(|_| {
            if rng.gen_bool(0.3) {
                pick(rng, &pools.fillers)
            } else {
                pick(rng, &pools.neutral)
            }
        })
        .collect();
    // Draw for every user so the random stream does not depend on the label.
    let signal = rng.gen_bool(p.s_text);
    if depressed && signal {
        let at = rng.gen_range(0..words.len());
        words[at] = pick(rng, &pools.depression);
    }
    let pronoun_rate = if depressed {
        (BASE_PRONOUN_RATE + p.pronoun_boost).min(1.0)
    } else {
        BASE_PRONOUN_RATE
    };
    if rng.gen_bool(pronoun_rate) {
        words.insert(0, pick(rng, &pools.pronouns));
    }
    // Occasionally break into two sentences.
    let mut text = String::new();
    let split = if words.len() > 4 && rng.gen_bool(0.3) {
        rng.gen_range(2..words.len() - 1)
    } else {
        usize::MAX
    };
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            text.push_str(if i == split { ". " } else { " " });
        }
        text.push_str(w);
    }
    text.push(if rng.gen_bool(0.2) { '!' } else { '.' });
    text
}

fn timestamp(rng: &mut ChaCha8Rng, night_rate: f64) -> DateTime<Utc> {
    let start = Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap();
    let day = rng.gen_range(0..WINDOW_DAYS);
    let hour = if rng.gen_bool(night_rate) {
        rng.gen_range(0..NIGHT_HOURS)
    } else {
        rng.gen_range(NIGHT_HOURS..24)
    };
    let secs = rng.gen_range(0..3600);
    start + Duration::days(day) + Duration::hours(hour as i64) + Duration::seconds(secs)
}

fn user(rng: &mut ChaCha8Rng, pools: &Pools, id: usize, depressed: bool, p: &SynthParams) -> UserRecord {
    let (lo, hi) = p.tweets_per_user;
    let mut n_tweets = rng.gen_range(lo..=hi);
    let mut night_rate = BASE_NIGHT_RATE;
    if depressed {
        n_tweets = (n_tweets as f64 * (1.0 + p.s_act)).round() as usize;
        night_rate += p.s_act * (MAX_NIGHT_RATE - BASE_NIGHT_RATE);
    }
    let mut tweets: Vec<Tweet> = (0..n_tweets)
        .map(|_| {
            let mut text = tweet_text(rng, pools, depressed, p);
            let is_retweet = rng.gen_bool(RETWEET_RATE);
            let is_reply = !is_retweet && rng.gen_bool(REPLY_RATE);
            let mut mentions = 0;
            if is_retweet {
                text = format!("RT @friend{}: {text}", rng.gen_range(0..50));
                mentions += 1;
            } else if is_reply {
                text = format!("@friend{} {text}", rng.gen_range(0..50));
                mentions += 1;
            }
            let links = rng.gen_bool(LINK_RATE) as u32;
            if links > 0 {
                text.push_str(&format!(" https://t.co/{:08x}", rng.gen::<u32>()));
            }
            Tweet {
                text,
                created_at: timestamp(rng, night_rate),
                is_retweet,
                is_reply,
                mention_count: mentions,
                link_count: links,
            }
        })
        .collect();
    tweets.sort_by_key(|t| t.created_at);
    UserRecord {
        user_id: format!("user{id:04}"),
        label: Label::from_positive(depressed),
        followers_count: rng.gen_range(50..=500),
        following_count: rng.gen_range(50..=500),
        tweets,
    }
}

/// Generates the users. The first `n_depressed()` ids are depressed; each
/// user draws from its own generator so one user's content does not depend
/// on any other's.
pub fn generate(params: &SynthParams) -> Result<Vec<UserRecord>> {
    params.validate()?;
    let pools = Pools::bundled();
    let n_dep = params.n_depressed();
    Ok((0..params.n_users)
        .map(|id| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(id as u64 + 1);
            user(&mut rng, &pools, id, id < n_dep, params)
        })
        .collect())
}

/// Generates a corpus and writes it to `path` in the corpus file format.
pub fn write_synth(params: &SynthParams, path: &Path) -> Result<usize> {
    let users = generate(params)?;
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_corpus(std::io::BufWriter::new(file), &users)?;
    Ok(users.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::control_screen;

    #[test]
    fn full_text_signal_marks_every_depressed_tweet() {
        let params = SynthParams {
            n_users: 20,
            s_text: 1.0,
            seed: 5,
            ..SynthParams::default()
        };
        let pool = parse_word_vec(DEPRESSION_WORDS);
        for u in generate(&params).unwrap().iter().filter(|u| u.label.is_positive()) {
            for t in &u.tweets {
                assert!(
                    t.text
                        .split(|c: char| !c.is_alphanumeric())
                        .any(|w| pool.iter().any(|p| p == w)),
                    "{}",
                    t.text
                );
            }
        }
    }

    #[test]
    fn controls_pass_the_screen() {
        let params = SynthParams {
            n_users: 40,
            s_text: 1.0,
            seed: 9,
            ..SynthParams::default()
        };
        for u in generate(&params).unwrap().iter().filter(|u| !u.label.is_positive()) {
            assert!(control_screen(u));
        }
    }

    #[test]
    fn class_counts_are_floored() {
        let params = SynthParams {
            n_users: 9,
            depressed_fraction: 0.3,
            ..SynthParams::default()
        };
        let users = generate(&params).unwrap();
        assert_eq!(users.iter().filter(|u| u.label.is_positive()).count(), 2);
    }

    #[test]
    fn invalid_params() {
        for p in [
            SynthParams {
                n_users: 3,
                ..SynthParams::default()
            },
            SynthParams {
                s_text: 1.5,
                ..SynthParams::default()
            },
            SynthParams {
                tweets_per_user: (5, 4),
                ..SynthParams::default()
            },
        ] {
            assert!(matches!(generate(&p), Err(Error::InvalidParams(_))));
        }
    }
}
