//! Concrete coded-shift families: S-gap, generalized gap, `(u^k v^k)`
//! powers, and Beta-shifts.

mod beta;
mod gap;
mod powers;

use std::fmt;

use crate::error::{Error, Result};

pub use beta::{
    beta_expansion, beta_generator_list, beta_generators, beta_graph, beta_shift, chain_check, parry_graph,
    BetaExpansion, BetaGenerator, BetaLanguage, BetaNumber, BetaShift, Periodicity,
};
pub use gap::{
    generalized_gap_shift, generalized_gap_stream, s_gap_shift, s_gap_stream, GeneralizedGapLanguage,
    SGapLanguage,
};
pub use powers::{powers_shift, powers_stream, PowersLanguage};

/// A nonempty set `S ⊂ ℕ₀`, enumerated in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SSet {
    Explicit(Vec<u64>),
    /// `{start, start + step, start + 2·step, …}` with `step ≥ 1`.
    Arithmetic { start: u64, step: u64 },
}

impl SSet {
    pub fn explicit(mut values: Vec<u64>) -> Result<Self> {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::InvalidArgument("S must be nonempty".into()));
        }
        Ok(SSet::Explicit(values))
    }

    pub fn arithmetic(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidArgument("arithmetic S needs a positive step".into()));
        }
        Ok(SSet::Arithmetic { start, step })
    }

    pub fn evens() -> Self {
        SSet::Arithmetic { start: 0, step: 2 }
    }

    /// The `i`-th element, 0-based.
    pub fn get(&self, i: usize) -> Option<u64> {
        match self {
            SSet::Explicit(v) => v.get(i).copied(),
            SSet::Arithmetic { start, step } => Some(start + step * i as u64),
        }
    }

    pub fn size(&self) -> Option<usize> {
        match self {
            SSet::Explicit(v) => Some(v.len()),
            SSet::Arithmetic { .. } => None,
        }
    }

    pub fn contains(&self, s: u64) -> bool {
        match self {
            SSet::Explicit(v) => v.binary_search(&s).is_ok(),
            SSet::Arithmetic { start, step } => s >= *start && (s - start).is_multiple_of(*step),
        }
    }

    /// Whether some element is at least `s`.
    pub fn reaches(&self, s: u64) -> bool {
        match self {
            SSet::Explicit(v) => v.last().is_some_and(|&m| m >= s),
            SSet::Arithmetic { .. } => true,
        }
    }

    /// Parses `evens`, `explicit 0 2 4`, or `arithmetic a d`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = text.split_whitespace();
        let bad = || Error::InvalidArgument(format!("unrecognized S-set `{text}`"));
        let num = |t: Option<&str>| t.and_then(|t| t.parse::<u64>().ok()).ok_or_else(bad);
        match it.next() {
            Some("evens") if it.next().is_none() => Ok(Self::evens()),
            Some("explicit") => {
                let values = it
                    .map(|t| t.parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Self::explicit(values)
            }
            Some("arithmetic") => {
                let (a, d) = (num(it.next())?, num(it.next())?);
                if it.next().is_some() {
                    return Err(bad());
                }
                Self::arithmetic(a, d)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SSet::Arithmetic { start: 0, step: 2 } => write!(f, "evens"),
            SSet::Arithmetic { start, step } => write!(f, "arithmetic {start} {step}"),
            SSet::Explicit(v) => {
                write!(f, "explicit")?;
                for s in v {
                    write!(f, " {s}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sset_basics() {
        let s = SSet::explicit(vec![4, 0, 2, 2]).unwrap();
        assert_eq!(s, SSet::Explicit(vec![0, 2, 4]));
        assert_eq!(s.get(1), Some(2));
        assert_eq!(s.get(3), None);
        assert!(s.reaches(4) && !s.reaches(5));
        assert!(SSet::evens().contains(6) && !SSet::evens().contains(3));
        assert!(SSet::explicit(vec![]).is_err());
        assert!(SSet::arithmetic(1, 0).is_err());
        for t in ["evens", "explicit 0 2 4", "arithmetic 1 3"] {
            assert_eq!(SSet::parse(t).unwrap().to_string(), t);
        }
        assert!(SSet::parse("odds").is_err());
    }
}
