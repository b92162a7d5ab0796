//! Letter-sum puzzles: give each letter a distinct value in 1..26 so that
//! every word sums to its target.
//!
//! Word-list format, one word per line, `#` starts a comment:
//!
//! ```text
//! glee = 66
//! jazz = 58
//! ```

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::VariableId;
use crate::error::{ModelError, ParseError};
use crate::linear::SourceRelation;
use crate::model::{DomainSpec, ProblemInstance};

pub const LETTERS: usize = 26;
pub const WORDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CryptoWord {
    pub word: String,
    pub target: i64,
}

pub fn parse_words(text: &str) -> Result<Vec<CryptoWord>, ParseError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (word, target) = body
            .split_once('=')
            .ok_or_else(|| ParseError::new(k + 1, "expected `word = number`"))?;
        let word = word.trim();
        if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(ParseError::new(k + 1, format!("bad word `{word}`")));
        }
        let target = target
            .trim()
            .parse()
            .map_err(|_| ParseError::new(k + 1, format!("bad target `{}`", target.trim())))?;
        out.push(CryptoWord {
            word: word.to_string(),
            target,
        });
    }
    Ok(out)
}

pub fn write_words(words: &[CryptoWord]) -> String {
    let mut s = String::new();
    for w in words {
        let _ = writeln!(s, "{} = {}", w.word, w.target);
    }
    s
}

/// Letters `a`..`z` in 1..26, one alldifferent over all of them, and one
/// equality per word with letter multiplicities as coefficients.
pub fn encode_crypto(words: &[CryptoWord]) -> Result<ProblemInstance, ModelError> {
    if words.is_empty() {
        return Err(ModelError::Invalid("empty word list".into()));
    }
    let mut p = ProblemInstance::new();
    let letters: Vec<VariableId> = (b'a'..=b'z')
        .map(|c| p.add_var((c as char).to_string(), DomainSpec::Interval(1, LETTERS as i64)))
        .collect();
    p.add_alldifferent(letters.clone());
    for w in words {
        if w.word.is_empty() || !w.word.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(ModelError::Invalid(format!("bad word `{}`", w.word)));
        }
        let mut coefs: Vec<i64> = Vec::new();
        let mut vars: Vec<VariableId> = Vec::new();
        for b in w.word.bytes() {
            let x = letters[(b - b'a') as usize];
            match vars.iter().position(|&v| v == x) {
                Some(i) => coefs[i] += 1,
                None => {
                    vars.push(x);
                    coefs.push(1);
                }
            }
        }
        p.add_linear(coefs, vars, SourceRelation::Eq, w.target);
    }
    p.meta.family = Some("crypto".into());
    p.meta.size = Some(words.len().to_string());
    Ok(p)
}

/// Twenty random words of length 4..9 whose targets come from a hidden
/// random letter assignment, so the instance is satisfiable.
pub fn gen_crypto(seed: u64) -> Vec<CryptoWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<i64> = (1..=LETTERS as i64).collect();
    values.shuffle(&mut rng);
    (0..WORDS)
        .map(|_| {
            let len = rng.gen_range(4..=9);
            let word: String = (0..len)
                .map(|_| (b'a' + rng.gen_range(0..LETTERS as u8)) as char)
                .collect();
            let target = word.bytes().map(|b| values[(b - b'a') as usize]).sum();
            CryptoWord { word, target }
        })
        .collect()
}

/// The puzzle these instances are modelled on.
pub fn classic_words() -> Vec<CryptoWord> {
    [
        ("ballet", 45),
        ("cello", 43),
        ("concert", 74),
        ("flute", 30),
        ("fugue", 50),
        ("glee", 66),
        ("jazz", 58),
        ("lyre", 47),
        ("oboe", 53),
        ("opera", 65),
        ("polka", 59),
        ("quartet", 50),
        ("saxophone", 134),
        ("scale", 51),
        ("solo", 37),
        ("song", 61),
        ("soprano", 82),
        ("theme", 72),
        ("violin", 100),
        ("waltz", 34),
    ]
    .into_iter()
    .map(|(w, t)| CryptoWord {
        word: w.to_string(),
        target: t,
    })
    .collect()
}
