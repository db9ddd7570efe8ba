//! Language oracles `ℓ ↦ L(X, ℓ)` and the shift-space distance.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{pow2, Rational};
use crate::word::{Alphabet, Word};

pub type WordSet = BTreeSet<Word>;

/// Length-indexed enumeration of the admissible words of a shift space.
///
/// Implementations must be factor-closed and extendable; see
/// [`check_language`].
pub trait Language: Send + Sync {
    fn alphabet(&self) -> Alphabet;

    /// All admissible words of length `len`.
    fn words(&self, len: usize) -> WordSet;

    fn count(&self, len: usize) -> usize {
        self.words(len).len()
    }

    fn is_admissible(&self, word: &Word) -> bool {
        self.words(word.len()).contains(word)
    }
}

impl<L: Language + ?Sized> Language for &L {
    fn alphabet(&self) -> Alphabet {
        (**self).alphabet()
    }
    fn words(&self, len: usize) -> WordSet {
        (**self).words(len)
    }
    fn count(&self, len: usize) -> usize {
        (**self).count(len)
    }
    fn is_admissible(&self, word: &Word) -> bool {
        (**self).is_admissible(word)
    }
}

impl<L: Language + ?Sized> Language for std::sync::Arc<L> {
    fn alphabet(&self) -> Alphabet {
        (**self).alphabet()
    }
    fn words(&self, len: usize) -> WordSet {
        (**self).words(len)
    }
    fn count(&self, len: usize) -> usize {
        (**self).count(len)
    }
    fn is_admissible(&self, word: &Word) -> bool {
        (**self).is_admissible(word)
    }
}

/// The full shift over an alphabet.
#[derive(Debug, Clone, Copy)]
pub struct FullShift(pub Alphabet);

impl Language for FullShift {
    fn alphabet(&self) -> Alphabet {
        self.0
    }
    fn words(&self, len: usize) -> WordSet {
        self.0.all_words(len).into_iter().collect()
    }
    fn count(&self, len: usize) -> usize {
        self.0.size().pow(len as u32)
    }
    fn is_admissible(&self, word: &Word) -> bool {
        self.0.check_word(word).is_ok()
    }
}

/// Words of length `len` accepted by a prefix automaton: `step` returns the
/// state after reading one more symbol, or `None` to reject. Suits
/// factor-closed languages, where every prefix of an admissible word is
/// admissible, so rejected prefixes can be pruned.
pub fn words_by_extension<S: Clone>(
    alphabet: Alphabet,
    len: usize,
    start: S,
    step: impl Fn(&S, u8) -> Option<S>,
) -> WordSet {
    fn go<S: Clone>(
        alphabet: Alphabet,
        len: usize,
        prefix: &mut Vec<u8>,
        state: &S,
        step: &dyn Fn(&S, u8) -> Option<S>,
        out: &mut WordSet,
    ) {
        if prefix.len() == len {
            out.insert(Word::new(prefix.clone()));
            return;
        }
        for a in alphabet.symbols() {
            if let Some(next) = step(state, a) {
                prefix.push(a);
                go(alphabet, len, prefix, &next, step, out);
                prefix.pop();
            }
        }
    }
    let mut out = WordSet::new();
    go(alphabet, len, &mut Vec::with_capacity(len), &start, &step, &mut out);
    out
}

/// Result of comparing two languages up to a depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// `2^-k`, with `k` the first length at which the languages differ.
    Dyadic(u32),
    /// Languages agree on every length `≤ depth`.
    Indistinguishable { depth: u32 },
}

impl Distance {
    /// The distance value; `None` when indistinguishable.
    pub fn value(&self) -> Option<Rational> {
        match *self {
            Distance::Dyadic(k) => Some(pow2(-(k as i64))),
            Distance::Indistinguishable { .. } => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Dyadic(k) => write!(f, "2^-{k}"),
            Distance::Indistinguishable { depth } => write!(f, "indistinguishable to depth {depth}"),
        }
    }
}

pub fn language_distance(a: &dyn Language, b: &dyn Language, depth: u32) -> Result<Distance> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().size(),
            right: b.alphabet().size(),
        });
    }
    for k in 0..=depth {
        if a.words(k as usize) != b.words(k as usize) {
            return Ok(Distance::Dyadic(k));
        }
    }
    Ok(Distance::Indistinguishable { depth })
}

/// A failure of one of the structural language axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageViolation {
    /// A factor of an admissible word is not admissible.
    NotFactorClosed { word: Word, factor: Word },
    /// An admissible word has no admissible one-symbol extension on this side.
    NotExtendable { word: Word, right: bool },
    /// The empty word is missing although longer words exist.
    MissingEmptyWord,
}

/// Brute-force check of factor closure and two-sided extendability for all
/// lengths `≤ max_len`.
pub fn check_language(lang: &dyn Language, max_len: usize) -> Vec<LanguageViolation> {
    let mut out = Vec::new();
    let levels: Vec<WordSet> = (0..=max_len + 1).map(|l| lang.words(l)).collect();
    if !levels[1].is_empty() && !levels[0].contains(&Word::empty()) {
        out.push(LanguageViolation::MissingEmptyWord);
    }
    for len in 1..=max_len {
        for word in &levels[len] {
            for factor in [word.prefix(len - 1), word.suffix(len - 1)] {
                if !levels[len - 1].contains(&factor) {
                    out.push(LanguageViolation::NotFactorClosed {
                        word: word.clone(),
                        factor,
                    });
                }
            }
            let ext = &levels[len + 1];
            if !ext.iter().any(|e| e.prefix(len) == *word) {
                out.push(LanguageViolation::NotExtendable {
                    word: word.clone(),
                    right: true,
                });
            }
            if !ext.iter().any(|e| e.suffix(len) == *word) {
                out.push(LanguageViolation::NotExtendable {
                    word: word.clone(),
                    right: false,
                });
            }
        }
    }
    out
}

/// Language given by an explicit list of forbidden factors, evaluated by
/// brute force over all words. Only meant as an independent reference.
#[derive(Debug, Clone)]
pub struct BruteForceForbidden {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
}

impl BruteForceForbidden {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Self {
        Self {
            alphabet,
            forbidden,
        }
    }

    fn avoids(&self, word: &Word) -> bool {
        !self.forbidden.iter().any(|f| word.contains(f))
    }
}

impl Language for BruteForceForbidden {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Words of length `len` that sit in the middle of an avoiding word of
    /// length `len + 2·slack`.
    fn words(&self, len: usize) -> WordSet {
        let maxf = self.forbidden.iter().map(Word::len).max().unwrap_or(1);
        // a dead end in the (maxf-1)-block graph dies within one pass over its states
        let slack = self.alphabet.size().pow(maxf.saturating_sub(1) as u32) + 1;
        let long = len + 2 * slack;
        let mut out = WordSet::new();
        for ext in self.alphabet.all_words(long) {
            if self.avoids(&ext) {
                out.insert(ext.subword(slack, len));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn full_shift_counts() {
        let f = FullShift(Alphabet::binary());
        assert_eq!(f.count(3), 8);
        assert_eq!(f.words(0).len(), 1);
        assert!(check_language(&f, 5).is_empty());
    }

    #[test]
    fn distance_alphabet_mismatch() {
        let a = FullShift(Alphabet::binary());
        let b = FullShift(Alphabet::new(3).unwrap());
        assert!(matches!(
            language_distance(&a, &b, 3),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn distance_to_self_is_indistinguishable() {
        let a = FullShift(Alphabet::binary());
        assert_eq!(
            language_distance(&a, &a, 6).unwrap(),
            Distance::Indistinguishable { depth: 6 }
        );
    }

    #[test]
    fn distances_to_no_111() {
        let no111 = BruteForceForbidden::new(Alphabet::binary(), vec![w("111")]);
        let golden = BruteForceForbidden::new(Alphabet::binary(), vec![w("11")]);
        // "11" already separates golden from no-111
        assert_eq!(language_distance(&golden, &no111, 4).unwrap(), Distance::Dyadic(2));
        assert_eq!(
            language_distance(&FullShift(Alphabet::binary()), &no111, 4).unwrap(),
            Distance::Dyadic(3)
        );
    }

    #[test]
    fn brute_force_golden_mean() {
        let g = BruteForceForbidden::new(Alphabet::binary(), vec![w("11")]);
        let l2: Vec<_> = g.words(2).into_iter().collect();
        assert_eq!(l2, vec![w("00"), w("01"), w("10")]);
        assert_eq!(g.count(4), 8);
    }
}
