//! Stemmer output frozen from an independent implementation.

use ddacf::resources::{parse_word_vec, DEPRESSION_WORDS, LEXICON, NEGATORS, NEUTRAL_WORDS, THESAURUS};
use ddacf::textprep::stem;

const FIXTURES: &str = include_str!("fixtures/porter.tsv");

#[test]
fn matches_reference_stems() {
    let mut mismatches = Vec::new();
    let mut n = 0;
    for line in FIXTURES.lines().filter(|l| !l.starts_with('#')) {
        let (word, want) = line.split_once('\t').expect("word<TAB>stem");
        n += 1;
        let got = stem(word);
        if got != want {
            mismatches.push(format!("{word}: {got} != {want}"));
        }
    }
    assert!(n > 2500);
    assert!(
        mismatches.is_empty(),
        "{} mismatches:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}

/// Words whose stem is not itself a fixed point of the stemmer.
const NOT_IDEMPOTENT: [&str; 2] = ["coffee", "worse"];

#[test]
fn idempotent_on_bundled_vocabulary() {
    let first_column = |text: &str| -> Vec<String> {
        text.lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .map(|l| l.split('\t').next().unwrap().trim().to_lowercase())
            .collect()
    };
    let mut words = first_column(LEXICON);
    words.extend(first_column(THESAURUS));
    words.extend(parse_word_vec(NEGATORS));
    words.extend(parse_word_vec(DEPRESSION_WORDS));
    words.extend(parse_word_vec(NEUTRAL_WORDS));
    for w in &words {
        let once = stem(w);
        if NOT_IDEMPOTENT.contains(&w.as_str()) {
            assert_ne!(stem(&once), once, "{w} is now idempotent; drop it from the list");
        } else {
            assert_eq!(stem(&once), once, "{w}");
        }
    }
}
