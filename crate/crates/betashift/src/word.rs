use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single symbol of a shift alphabet {0, ..., k}.
pub type Digit = u8;

/// A finite digit string, ordered lexicographically.
///
/// Equality and `Ord` are the lexicographic order on digit vectors, which for
/// equal-length words is exactly the word order used throughout.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Digit>);

impl Word {
    pub fn new(digits: Vec<Digit>) -> Self {
        Word(digits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Compact rendering: a digit string like `010` when every digit is a
    /// single decimal digit, otherwise dot-separated.
    pub fn digit_string(&self) -> String {
        if self.0.iter().all(|&d| d < 10) {
            self.0.iter().map(|d| char::from(b'0' + d)).collect()
        } else {
            self.0
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl Deref for Word {
    type Target = [Digit];

    fn deref(&self) -> &[Digit] {
        &self.0
    }
}

impl From<Vec<Digit>> for Word {
    fn from(digits: Vec<Digit>) -> Self {
        Word(digits)
    }
}

impl From<&[Digit]> for Word {
    fn from(digits: &[Digit]) -> Self {
        Word(digits.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.digit_string())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digit_string())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(Word::empty());
        }
        if s.contains('.') {
            let digits = s
                .split('.')
                .map(|p| {
                    p.parse::<Digit>()
                        .map_err(|_| Error::InvalidInput(format!("bad digit `{p}` in word")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Word(digits));
        }
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Digit)
                    .ok_or_else(|| Error::InvalidInput(format!("bad digit `{c}` in word")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let w: Word = "0102".parse().unwrap();
        assert_eq!(w.0, vec![0, 1, 0, 2]);
        assert_eq!(w.to_string(), "0102");
        let e: Word = "".parse().unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn lexicographic_order() {
        let a: Word = "010".parse().unwrap();
        let b: Word = "100".parse().unwrap();
        assert!(a < b);
        assert!(Word::from_str("00").unwrap() < Word::from_str("01").unwrap());
    }
}
