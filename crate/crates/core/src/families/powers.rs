use std::sync::Arc;

use crate::coded::{CodedShift, GeneratorStream};
use crate::error::{Error, Result};
use crate::language::{Language, WordSet};
use crate::sofic::bouquet;
use crate::word::{Alphabet, Word};

/// Generators `u^k v^k`, `k = 1, 2, …`. No assertions: for `u = 000`,
/// `v = 1` and the indicator of 1 the pressure is not reached by any `X_m`.
pub fn powers_stream(u: Word, v: Word) -> GeneratorStream {
    GeneratorStream::from_fn(move |k| Ok(Some(u.repeat(k).concat(&v.repeat(k)))))
}

/// `L(X, ℓ)` for the `u^k v^k` shift. A length-`ℓ` window meets any
/// generator with `k > ℓ + 1` only in pieces that `u^{ℓ+1} v^{ℓ+1}` also
/// has at the same position, so the first `ℓ + 1` generators suffice.
#[derive(Debug, Clone)]
pub struct PowersLanguage {
    alphabet: Alphabet,
    u: Word,
    v: Word,
}

impl PowersLanguage {
    pub fn new(alphabet: Alphabet, u: Word, v: Word) -> Result<Self> {
        if u.is_empty() || v.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check_word(&u)?;
        alphabet.check_word(&v)?;
        Ok(Self { alphabet, u, v })
    }

    fn generators(&self, len: usize) -> Vec<Word> {
        (1..=len + 1)
            .map(|k| self.u.repeat(k).concat(&self.v.repeat(k)))
            .collect()
    }
}

impl Language for PowersLanguage {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn words(&self, len: usize) -> WordSet {
        bouquet(self.alphabet, &self.generators(len))
            .expect("nonempty generators")
            .words(len)
    }
    fn is_admissible(&self, word: &Word) -> bool {
        bouquet(self.alphabet, &self.generators(word.len()))
            .expect("nonempty generators")
            .is_admissible(word)
    }
}

pub fn powers_shift(alphabet: Alphabet, u: Word, v: Word) -> Result<CodedShift> {
    let lang = PowersLanguage::new(alphabet, u.clone(), v.clone())?;
    CodedShift::new(alphabet, powers_stream(u, v), Arc::new(lang))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coded::sofic_approximation;
    use crate::language::check_language;
    use crate::word::w;

    #[test]
    fn example_generators() {
        let c = powers_shift(Alphabet::binary(), w("000"), w("1")).unwrap();
        let g: Vec<String> = c.generators().first(3).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(g, ["0001", "00000011", "000000000111"]);
        assert!(!c.generators().asserted_fssp);
    }

    #[test]
    fn language_stable_under_more_generators() {
        let c = powers_shift(Alphabet::binary(), w("000"), w("1")).unwrap();
        for len in 1..=8 {
            let more = sofic_approximation(&c, len + 6).unwrap();
            assert_eq!(more.words(len), c.words(len), "len {len}");
        }
        let c = powers_shift(Alphabet::new(3).unwrap(), w("01"), w("2")).unwrap();
        for len in 1..=7 {
            let more = sofic_approximation(&c, len + 6).unwrap();
            assert_eq!(more.words(len), c.words(len), "len {len}");
        }
        assert!(check_language(c.language().as_ref(), 7).is_empty());
    }
}
