use std::collections::HashSet;
use std::sync::Arc;

use super::SSet;
use crate::coded::{CodedShift, GeneratorStream};
use crate::error::{Error, Result};
use crate::language::{words_by_extension, Language, WordSet};
use crate::word::{Alphabet, Word};

/// Generators `0^s 1` for `s ∈ S`, in increasing order of `s`.
pub fn s_gap_stream(s: SSet) -> GeneratorStream {
    GeneratorStream::from_fn(move |m| {
        Ok(s.get(m - 1).map(|gap| {
            let mut v = vec![0u8; gap as usize];
            v.push(1);
            Word::new(v)
        }))
    })
    .with_assertions(true, true)
}

/// Binary words whose interior 0-gaps between 1s lie in `S` and whose
/// boundary gaps fit inside some element of `S`.
#[derive(Debug, Clone)]
pub struct SGapLanguage {
    s: SSet,
}

impl SGapLanguage {
    pub fn new(s: SSet) -> Self {
        Self { s }
    }

    /// State: whether a 1 has been read, and the current run of 0s.
    fn step(&self, state: &(bool, u64), a: u8) -> Option<(bool, u64)> {
        let (seen, run) = *state;
        match a {
            0 => self.s.reaches(run + 1).then_some((seen, run + 1)),
            1 if !seen || self.s.contains(run) => Some((true, 0)),
            _ => None,
        }
    }
}

impl Language for SGapLanguage {
    fn alphabet(&self) -> Alphabet {
        Alphabet::binary()
    }
    fn words(&self, len: usize) -> WordSet {
        words_by_extension(Alphabet::binary(), len, (false, 0), |st, a| self.step(st, a))
    }
    fn is_admissible(&self, word: &Word) -> bool {
        let mut st = (false, 0);
        for &a in word.symbols() {
            match self.step(&st, a) {
                Some(next) => st = next,
                None => return false,
            }
        }
        true
    }
}

pub fn s_gap_shift(s: SSet) -> Result<CodedShift> {
    CodedShift::new(
        Alphabet::binary(),
        s_gap_stream(s.clone()),
        Arc::new(SGapLanguage::new(s)),
    )
}

fn check_ggap(sets: &[SSet], perms: &[Vec<u8>]) -> Result<()> {
    let d = sets.len();
    if d == 0 || d > 254 {
        return Err(Error::InvalidArgument("generalized gap needs 1 ≤ d ≤ 254".into()));
    }
    if perms.is_empty() {
        return Err(Error::InvalidArgument("generalized gap needs at least one permutation".into()));
    }
    for p in perms {
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if sorted != (0..d as u8).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(format!("{p:?} is not a permutation of 0..{d}")));
        }
    }
    Ok(())
}

/// Compositions of `total` into `parts` nonnegative parts, lexicographic.
fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>) {
    fn go(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == parts {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            go(rest - x, parts, cur, out);
            cur.pop();
        }
    }
    go(total, parts, &mut Vec::with_capacity(parts), out);
}

fn ggap_prefix(sets: &[SSet], perms: &[Vec<u8>], m: usize) -> Vec<Word> {
    let d = sets.len();
    let last_level = sets
        .iter()
        .map(|s| s.size().map(|n| n - 1))
        .sum::<Option<usize>>();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut level = 0;
    while out.len() < m && last_level.is_none_or(|l| level <= l) {
        let mut tuples = Vec::new();
        compositions(level, d, &mut tuples);
        for perm in perms {
            for t in &tuples {
                let Some(gaps) = (0..d).map(|a| sets[a].get(t[a])).collect::<Option<Vec<u64>>>() else {
                    continue;
                };
                let mut v = Vec::new();
                for &a in perm {
                    v.extend(std::iter::repeat_n(a, gaps[a as usize] as usize));
                }
                v.push(d as u8);
                let w = Word::new(v);
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
        level += 1;
    }
    out
}

/// Generators `σ(0)^{s_σ(0)} ⋯ σ(d−1)^{s_σ(d−1)} d` over `{0, …, d}`,
/// enumerated diagonally: by the sum of the indices of the `s_i` in their
/// sets, then permutation order, then lexicographically. Duplicates are
/// dropped.
pub fn generalized_gap_stream(sets: Vec<SSet>, perms: Vec<Vec<u8>>) -> Result<GeneratorStream> {
    check_ggap(&sets, &perms)?;
    Ok(GeneratorStream::from_prefix_fn(move |m| Ok(ggap_prefix(&sets, &perms, m))).with_assertions(true, true))
}

/// Language of a generalized gap shift, checked segment by segment between
/// separators.
#[derive(Debug, Clone)]
pub struct GeneralizedGapLanguage {
    sets: Vec<SSet>,
    perms: Vec<Vec<u8>>,
}

impl GeneralizedGapLanguage {
    pub fn new(sets: Vec<SSet>, perms: Vec<Vec<u8>>) -> Result<Self> {
        check_ggap(&sets, &perms)?;
        Ok(Self { sets, perms })
    }

    fn separator(&self) -> u8 {
        self.sets.len() as u8
    }

    /// Whether `seg` (no separators) is a factor of some generator body,
    /// with `open_start` / `open_end` saying whether the body may extend
    /// past either end.
    fn segment_ok(&self, seg: &[u8], open_start: bool, open_end: bool) -> bool {
        let mut runs: Vec<(u8, u64)> = Vec::new();
        for &a in seg {
            match runs.last_mut() {
                Some((b, n)) if *b == a => *n += 1,
                _ => runs.push((a, 1)),
            }
        }
        self.perms.iter().any(|perm| {
            let mut r = 0;
            for &a in perm {
                let s = &self.sets[a as usize];
                if r < runs.len() && runs[r].0 == a {
                    let len = runs[r].1;
                    let partial = (r == 0 && open_start) || (r + 1 == runs.len() && open_end);
                    if !(if partial { s.reaches(len) } else { s.contains(len) }) {
                        return false;
                    }
                    r += 1;
                } else if !((r == 0 && open_start) || (r == runs.len() && open_end) || s.contains(0)) {
                    return false;
                }
            }
            r == runs.len()
        })
    }

    /// State: whether a separator has been read, and the open segment.
    fn step(&self, state: &(bool, Vec<u8>), a: u8) -> Option<(bool, Vec<u8>)> {
        let (seen, seg) = state;
        if a == self.separator() {
            self.segment_ok(seg, !seen, false).then(|| (true, Vec::new()))
        } else {
            let mut next = seg.clone();
            next.push(a);
            self.segment_ok(&next, !seen, true).then_some((*seen, next))
        }
    }
}

impl Language for GeneralizedGapLanguage {
    fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.sets.len() + 1).expect("d ≤ 254")
    }
    fn words(&self, len: usize) -> WordSet {
        words_by_extension(self.alphabet(), len, (false, Vec::new()), |st, a| self.step(st, a))
    }
    fn is_admissible(&self, word: &Word) -> bool {
        let mut st = (false, Vec::new());
        for &a in word.symbols() {
            match self.step(&st, a) {
                Some(next) => st = next,
                None => return false,
            }
        }
        self.alphabet().check_word(word).is_ok()
    }
}

pub fn generalized_gap_shift(sets: Vec<SSet>, perms: Vec<Vec<u8>>) -> Result<CodedShift> {
    let lang = GeneralizedGapLanguage::new(sets.clone(), perms.clone())?;
    let alphabet = lang.alphabet();
    CodedShift::new(alphabet, generalized_gap_stream(sets, perms)?, Arc::new(lang))
}
