//! Account activity measures and their three encodings.

use chrono::Timelike;
use serde::{Deserialize, Serialize};

use crate::corpus::UserRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureMode {
    AsIs,
    Norm,
    Categorical,
}

/// UTC hour band `[start, end)` counted as night posting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NightWindow {
    pub start_hour: u32,
    pub end_hour: u32,
}

impl Default for NightWindow {
    fn default() -> Self {
        NightWindow {
            start_hour: 0,
            end_hour: 6,
        }
    }
}

impl NightWindow {
    pub fn contains(&self, hour: u32) -> bool {
        if self.start_hour <= self.end_hour {
            (self.start_hour..self.end_hour).contains(&hour)
        } else {
            hour >= self.start_hour || hour < self.end_hour
        }
    }
}

/// Per-user activity statistics. Raw totals are kept next to the derived
/// rates so every encoding can be produced from one value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountMeasures {
    pub posts_count: usize,
    pub posts_per_day: f64,
    pub retweet_fraction: f64,
    pub reply_fraction: f64,
    pub mentions_per_post: f64,
    pub links_per_post: f64,
    pub followers_count: u64,
    pub following_count: u64,
    pub night_post_fraction: f64,

    pub retweet_count: usize,
    pub reply_count: usize,
    pub mention_total: u64,
    pub link_total: u64,
    pub night_post_count: usize,
}

pub const SECONDS_PER_DAY: f64 = 86_400.0;

pub fn compute_account_measures(user: &UserRecord, night: NightWindow) -> AccountMeasures {
    let tweets = &user.tweets;
    let n = tweets.len();
    let per_post = |x: f64| if n == 0 { 0.0 } else { x / n as f64 };

    let span_days = match (
        tweets.iter().map(|t| t.created_at).min(),
        tweets.iter().map(|t| t.created_at).max(),
    ) {
        (Some(lo), Some(hi)) => ((hi - lo).num_seconds() as f64 / SECONDS_PER_DAY).max(1.0),
        _ => 1.0,
    };
    let retweet_count = tweets.iter().filter(|t| t.is_retweet).count();
    let reply_count = tweets.iter().filter(|t| t.is_reply).count();
    let mention_total: u64 = tweets.iter().map(|t| t.mention_count as u64).sum();
    let link_total: u64 = tweets.iter().map(|t| t.link_count as u64).sum();
    let night_post_count = tweets.iter().filter(|t| night.contains(t.created_at.hour())).count();

    AccountMeasures {
        posts_count: n,
        posts_per_day: n as f64 / span_days,
        retweet_fraction: per_post(retweet_count as f64),
        reply_fraction: per_post(reply_count as f64),
        mentions_per_post: per_post(mention_total as f64),
        links_per_post: per_post(link_total as f64),
        followers_count: user.followers_count,
        following_count: user.following_count,
        night_post_fraction: per_post(night_post_count as f64),
        retweet_count,
        reply_count,
        mention_total,
        link_total,
        night_post_count,
    }
}

const ASIS_NAMES: [&str; 9] = [
    "posts_count",
    "posts_per_day",
    "retweet_count",
    "reply_count",
    "mention_count",
    "link_count",
    "followers_count",
    "following_count",
    "night_post_count",
];

const NORM_NAMES: [&str; 9] = [
    "posts_count",
    "posts_per_day",
    "retweet_fraction",
    "reply_fraction",
    "mentions_per_post",
    "links_per_post",
    "followers_per_post",
    "following_per_post",
    "night_post_fraction",
];

const MEASURE_NAMES: [&str; 9] = [
    "posts_count",
    "posts_per_day",
    "retweet_fraction",
    "reply_fraction",
    "mentions_per_post",
    "links_per_post",
    "followers_count",
    "following_count",
    "night_post_fraction",
];

impl AccountMeasures {
    /// Raw activity counts.
    pub fn as_is(&self) -> [f64; 9] {
        [
            self.posts_count as f64,
            self.posts_per_day,
            self.retweet_count as f64,
            self.reply_count as f64,
            self.mention_total as f64,
            self.link_total as f64,
            self.followers_count as f64,
            self.following_count as f64,
            self.night_post_count as f64,
        ]
    }

    /// Counts divided by the number of posts.
    pub fn normalized(&self) -> [f64; 9] {
        let per_post = |x: f64| {
            if self.posts_count == 0 {
                0.0
            } else {
                x / self.posts_count as f64
            }
        };
        [
            self.posts_count as f64,
            self.posts_per_day,
            self.retweet_fraction,
            self.reply_fraction,
            self.mentions_per_post,
            self.links_per_post,
            per_post(self.followers_count as f64),
            per_post(self.following_count as f64),
            self.night_post_fraction,
        ]
    }

    /// The nine fields as declared on the type, in declaration order.
    pub fn fields(&self) -> [f64; 9] {
        [
            self.posts_count as f64,
            self.posts_per_day,
            self.retweet_fraction,
            self.reply_fraction,
            self.mentions_per_post,
            self.links_per_post,
            self.followers_count as f64,
            self.following_count as f64,
            self.night_post_fraction,
        ]
    }
}

/// Quantile of order `p` of sorted values, using `h = (n-1)p + 1` and linear
/// interpolation between the neighbouring order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p + 1.0;
    let lo = h.floor();
    let hi = h.ceil();
    let x_lo = sorted[lo as usize - 1];
    let x_hi = sorted[hi as usize - 1];
    x_lo + (h - lo) * (x_hi - x_lo)
}

/// Quartile cut points of one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quartiles {
    pub fn from_values(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Quartiles {
            q1: quantile(&sorted, 0.25),
            q2: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.q1 == self.q3
    }

    /// 0 low, 1 below average, 2 average, 3 high. Degenerate cut points map
    /// everything to 0.
    pub fn code(&self, value: f64) -> u8 {
        if self.is_degenerate() || value <= self.q1 {
            0
        } else if value <= self.q2 {
            1
        } else if value <= self.q3 {
            2
        } else {
            3
        }
    }
}

/// An encoding of account measures with its training-fold statistics frozen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureTransform {
    mode: MeasureMode,
    quartiles: Vec<Quartiles>,
}

impl MeasureTransform {
    /// Fits on `rows` of `measures`. Categorical needs at least 4 rows.
    pub fn fit(measures: &[AccountMeasures], rows: &[usize], mode: MeasureMode) -> Result<Self> {
        let quartiles = if mode == MeasureMode::Categorical {
            if rows.len() < 4 {
                return Err(Error::InvalidParams(format!(
                    "categorical measures need at least 4 training users, got {}",
                    rows.len()
                )));
            }
            (0..MEASURE_NAMES.len())
                .map(|f| {
                    let values: Vec<f64> = rows.iter().map(|&r| measures[r].fields()[f]).collect();
                    let q = Quartiles::from_values(&values);
                    if q.is_degenerate() {
                        log::warn!(
                            "degenerate quartiles for `{}` (Q1 = Q3 = {}); coded 0 for everyone",
                            MEASURE_NAMES[f],
                            q.q1
                        );
                    }
                    q
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(MeasureTransform { mode, quartiles })
    }

    pub fn mode(&self) -> MeasureMode {
        self.mode
    }

    pub fn quartiles(&self) -> &[Quartiles] {
        &self.quartiles
    }

    pub fn names(&self) -> Vec<String> {
        let names: &[&str] = match self.mode {
            MeasureMode::AsIs => &ASIS_NAMES,
            MeasureMode::Norm => &NORM_NAMES,
            MeasureMode::Categorical => &MEASURE_NAMES,
        };
        let suffix = if self.mode == MeasureMode::Categorical {
            "_quartile"
        } else {
            ""
        };
        names.iter().map(|n| format!("{n}{suffix}")).collect()
    }

    pub fn transform(&self, m: &AccountMeasures) -> Vec<f64> {
        match self.mode {
            MeasureMode::AsIs => m.as_is().to_vec(),
            MeasureMode::Norm => m.normalized().to_vec(),
            MeasureMode::Categorical => m
                .fields()
                .iter()
                .zip(&self.quartiles)
                .map(|(&v, q)| q.code(v) as f64)
                .collect(),
        }
    }
}

/// Fits on all rows and encodes every user.
pub fn transform_measures(measures: &[AccountMeasures], mode: MeasureMode) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<usize> = (0..measures.len()).collect();
    let t = MeasureTransform::fit(measures, &rows, mode)?;
    Ok(measures.iter().map(|m| t.transform(m)).collect())
}
