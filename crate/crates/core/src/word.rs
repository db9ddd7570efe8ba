//! Finite alphabets and words.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Symbols are rendered as single decimal digits, which caps the alphabet.
pub const MAX_ALPHABET: usize = 10;

/// The alphabet `{0, …, d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::InvalidAlphabet {
                size,
                max: MAX_ALPHABET,
            });
        }
        Ok(Alphabet(size as u8))
    }

    pub fn binary() -> Self {
        Alphabet(2)
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, symbol: u8) -> bool {
        symbol < self.0
    }

    pub fn symbols(self) -> impl Iterator<Item = u8> {
        0..self.0
    }

    pub fn check_word(self, word: &Word) -> Result<()> {
        match word.symbols().iter().find(|&&s| !self.contains(s)) {
            Some(&symbol) => Err(Error::SymbolOutOfAlphabet {
                symbol,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }

    /// All `size^len` words of the given length in lexicographic order.
    pub fn all_words(self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * self.size());
            for w in &out {
                for s in self.symbols() {
                    next.push(w.pushed(s));
                }
            }
            out = next;
        }
        out
    }
}

/// A finite word `τ_0 τ_1 ⋯ τ_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, symbol: u8) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(symbol);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.subword(0, len)
    }

    pub fn suffix(&self, len: usize) -> Word {
        self.subword(self.len() - len, len)
    }

    /// True when `other` occurs as a contiguous factor.
    pub fn contains(&self, other: &Word) -> bool {
        other.is_empty() || self.0.windows(other.len()).any(|w| w == other.symbols())
    }

    /// All length-`len` factors, with repetition, left to right.
    pub fn factors(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        self.0.windows(len.max(1)).filter(move |_| len > 0).map(|w| Word(w.to_vec()))
    }

    /// Length-`len` factors of the periodic point `…τττ…`.
    pub fn cyclic_factors(&self, len: usize) -> Vec<Word> {
        if self.is_empty() {
            return Vec::new();
        }
        let reps = len / self.len() + 2;
        let long = self.repeat(reps);
        (0..self.len()).map(|i| long.subword(i, len)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("not a digit word: {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

/// Shorthand for digit-string literals; panics on non-digits.
pub fn w(s: &str) -> Word {
    s.parse().expect("digit word literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concatenation_is_associative_with_identity() {
        let (a, b, c) = (w("01"), w("1"), w("001"));
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(a.concat(&Word::empty()), a);
        assert_eq!(a.concat(&b).len(), a.len() + b.len());
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(11).is_err());
        let a = Alphabet::new(2).unwrap();
        assert!(a.check_word(&w("0110")).is_ok());
        assert_eq!(
            a.check_word(&w("012")),
            Err(Error::SymbolOutOfAlphabet { symbol: 2, size: 2 })
        );
        assert_eq!(a.all_words(3).len(), 8);
    }

    #[test]
    fn cyclic_factors_wrap_around() {
        let f = w("0011").cyclic_factors(2);
        assert_eq!(f, vec![w("00"), w("01"), w("11"), w("10")]);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("0102").to_string(), "0102");
        assert!("01a".parse::<Word>().is_err());
        assert_eq!(Word::empty().to_string(), "ε");
    }
}
