//! Finite words over the filter alphabet `{0, .., M-1}`.
//!
//! Every enumeration in the crate is length-lexicographic: shorter words first,
//! ties broken letter by letter. That order is part of the output contract of
//! the CSV exporters, so [`Word`]'s `Ord` implements it directly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Letter index into the alphabet.
pub type Letter = u8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word from {0:?}")]
    Parse(String),
    #[error("letter {letter} outside alphabet of size {alphabet}")]
    LetterOutOfRange { letter: Letter, alphabet: usize },
}

/// Finite, possibly empty, sequence of letters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
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

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Word with `other` appended on the right.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// The last `len` letters.
    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.0.len() - len..].to_vec())
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<(), WordError> {
        match self.0.iter().find(|&&l| (l as usize) >= alphabet) {
            Some(&letter) => Err(WordError::LetterOutOfRange { letter, alphabet }),
            None => Ok(()),
        }
    }

    /// A nonempty word is irreducible when it is not a power `w^k`, `k >= 2`,
    /// of a shorter word.
    pub fn is_irreducible(&self) -> bool {
        let n = self.0.len();
        if n == 0 {
            return false;
        }
        for period in 1..n {
            if n % period != 0 {
                continue;
            }
            if (period..n).all(|k| self.0[k] == self.0[k - period]) {
                return false;
            }
        }
        true
    }
}

impl Ord for Word {
    /// Length-lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Empty word prints as `ε`; alphabets past 9 print dot-separated letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "ε" {
            return Ok(Word::empty());
        }
        let letters = if t.contains('.') {
            t.split('.')
                .map(|p| p.parse::<Letter>().map_err(|_| WordError::Parse(s.into())))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            t.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Letter)
                        .ok_or_else(|| WordError::Parse(s.into()))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Word(letters))
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

/// All words of length `0..=lmax` in length-lexicographic order, lazily.
pub fn words_up_to(alphabet: usize, lmax: usize) -> impl Iterator<Item = Word> {
    assert!(alphabet >= 1, "alphabet must be nonempty");
    assert!(alphabet <= Letter::MAX as usize + 1, "alphabet too large");
    (0..=lmax).flat_map(move |len| WordsOfLen::new(alphabet, len))
}

/// Odometer over words of one fixed length, lexicographic.
struct WordsOfLen {
    alphabet: Letter,
    current: Option<Vec<Letter>>,
}

impl WordsOfLen {
    fn new(alphabet: usize, len: usize) -> Self {
        WordsOfLen {
            alphabet: alphabet as Letter,
            current: Some(vec![0; len]),
        }
    }
}

impl Iterator for WordsOfLen {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.current.take()?;
        let out = Word(current.clone());
        let mut next = current;
        let mut pos = next.len();
        loop {
            if pos == 0 {
                // overflow: length exhausted
                return Some(out);
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.alphabet {
                for later in next.iter_mut().skip(pos + 1) {
                    *later = 0;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn length_lex_enumeration() {
        let all: Vec<Word> = words_up_to(2, 2).collect();
        let expect: Vec<Word> = ["ε", "0", "1", "00", "01", "10", "11"]
            .iter()
            .map(|s| w(s))
            .collect();
        assert_eq!(all, expect);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn word_counts() {
        assert_eq!(words_up_to(3, 3).count(), 1 + 3 + 9 + 27);
        assert_eq!(words_up_to(1, 4).count(), 5);
    }

    #[test]
    fn irreducibility() {
        assert!(w("0").is_irreducible());
        assert!(w("10").is_irreducible());
        assert!(w("110").is_irreducible());
        assert!(!w("1010").is_irreducible());
        assert!(!w("00").is_irreducible());
        assert!(!w("121212").is_irreducible());
        assert!(!Word::empty().is_irreducible());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(w("30").to_string(), "30");
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(w("ε"), Word::empty());
        let big = Word::new(vec![11, 2]);
        assert_eq!(big.to_string(), "11.2");
        assert_eq!(big.to_string().parse::<Word>().unwrap(), big);
    }

    #[test]
    fn suffix_checks() {
        assert!(w("231").ends_with(&w("1")));
        assert!(!w("13").ends_with(&w("1")));
        assert_eq!(w("1010").suffix(2), w("10"));
    }
}
