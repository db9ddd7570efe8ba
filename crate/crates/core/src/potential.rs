//! Locally constant potentials, potential oracles, and cylinder suprema of
//! Birkhoff sums.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::language::Language;
use crate::rational::{fmt_ratio, parse_rational, pow2, Rational};
use crate::word::{Alphabet, Word};

/// A potential that reads a fixed window around the current position.
///
/// The window covers positions `-lead .. span - lead` relative to `x_0`.
pub trait WindowPotential: Send + Sync {
    fn span(&self) -> usize;
    fn lead(&self) -> usize;
    fn window_value(&self, window: &[u8]) -> &Rational;
}

/// `φ ∈ LC_k`: depends on `x_{-k} … x_k`, rational table with a default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocallyConstantPotential {
    radius: usize,
    table: BTreeMap<Word, Rational>,
    default: Rational,
}

impl LocallyConstantPotential {
    pub fn new(radius: usize, table: BTreeMap<Word, Rational>, default: Rational) -> Result<Self> {
        let width = 2 * radius + 1;
        if let Some(bad) = table.keys().find(|w| w.len() != width) {
            return Err(Error::InvalidArgument(format!(
                "potential window {bad} has length {}, expected {width}",
                bad.len()
            )));
        }
        Ok(Self {
            radius,
            table,
            default,
        })
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            radius: 0,
            table: BTreeMap::new(),
            default: c,
        }
    }

    /// `φ(x) = 1` if `x_0 = symbol`, else `0`.
    pub fn symbol_indicator(symbol: u8) -> Self {
        let mut table = BTreeMap::new();
        table.insert(Word::new(vec![symbol]), Rational::from_integer(1.into()));
        Self {
            radius: 0,
            table,
            default: Rational::zero(),
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn table(&self) -> &BTreeMap<Word, Rational> {
        &self.table
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    pub fn value(&self, window: &[u8]) -> &Rational {
        debug_assert_eq!(window.len(), 2 * self.radius + 1);
        // BTreeMap<Word, _> lookups need an owned key; avoid by scanning
        // when the table is tiny
        if self.table.len() <= 4 {
            return self
                .table
                .iter()
                .find(|(k, _)| k.symbols() == window)
                .map_or(&self.default, |(_, v)| v);
        }
        self.table.get(&Word::from(window)).unwrap_or(&self.default)
    }

    /// `φ + c`.
    pub fn translate(&self, c: &Rational) -> Self {
        Self {
            radius: self.radius,
            table: self.table.iter().map(|(k, v)| (k.clone(), v + c)).collect(),
            default: &self.default + c,
        }
    }

    /// Same potential expressed with a larger radius, tabulated on every
    /// window of the alphabet.
    pub fn with_radius(&self, radius: usize, alphabet: Alphabet) -> Self {
        assert!(radius >= self.radius);
        let pad = radius - self.radius;
        let mut table = BTreeMap::new();
        for window in alphabet.all_words(2 * radius + 1) {
            let v = self.value(&window.symbols()[pad..pad + 2 * self.radius + 1]);
            if *v != self.default {
                table.insert(window, v.clone());
            }
        }
        Self {
            radius,
            table,
            default: self.default.clone(),
        }
    }

    /// `max(|default|, max |table|)`, an upper bound for `‖φ‖_∞`.
    pub fn sup_norm_bound(&self) -> Rational {
        self.table
            .values()
            .chain(std::iter::once(&self.default))
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact `‖φ − ψ‖_∞` over the full shift on `alphabet`.
    pub fn sup_distance(&self, other: &Self, alphabet: Alphabet) -> Rational {
        let r = self.radius.max(other.radius);
        let (a, b) = (self.with_radius(r, alphabet), other.with_radius(r, alphabet));
        alphabet
            .all_words(2 * r + 1)
            .iter()
            .map(|win| (a.value(win.symbols()) - b.value(win.symbols())).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Parses the line-oriented potential file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "expected `radius k`"))?;
        let radius: usize = first
            .strip_prefix("radius")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| Error::parse(ln, "expected `radius k`"))?;
        let (ln, second) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, "expected `default p/q`"))?;
        let default = second
            .strip_prefix("default")
            .ok_or_else(|| Error::parse(ln, "expected `default p/q`"))
            .and_then(|d| parse_rational(d).map_err(|e| Error::parse(ln, e.to_string())))?;
        let mut table = BTreeMap::new();
        for (ln, line) in lines {
            let mut parts = line.split_whitespace();
            let (Some(word), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(ln, "expected `word p/q`"));
            };
            let word: Word = word.parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?;
            if word.len() != 2 * radius + 1 {
                return Err(Error::parse(
                    ln,
                    format!("window {word} must have length {}", 2 * radius + 1),
                ));
            }
            let value = parse_rational(value).map_err(|e| Error::parse(ln, e.to_string()))?;
            if table.insert(word.clone(), value).is_some() {
                return Err(Error::parse(ln, format!("duplicate window {word}")));
            }
        }
        Ok(Self {
            radius,
            table,
            default,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("radius {}\ndefault {}\n", self.radius, fmt_ratio(&self.default));
        for (k, v) in &self.table {
            let _ = writeln!(s, "{k} {}", fmt_ratio(v));
        }
        s
    }

    pub fn check_alphabet(&self, alphabet: Alphabet) -> Result<()> {
        self.table.keys().try_for_each(|k| alphabet.check_word(k))
    }
}

impl WindowPotential for LocallyConstantPotential {
    fn span(&self) -> usize {
        2 * self.radius + 1
    }
    fn lead(&self) -> usize {
        self.radius
    }
    fn window_value(&self, window: &[u8]) -> &Rational {
        self.value(window)
    }
}

/// A potential reading `x_0 … x_{span-1}`; pressure-equivalent to the
/// centered potential it was recoded from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardPotential {
    span: usize,
    table: BTreeMap<Word, Rational>,
    default: Rational,
}

impl ForwardPotential {
    pub fn table(&self) -> &BTreeMap<Word, Rational> {
        &self.table
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }
}

impl WindowPotential for ForwardPotential {
    fn span(&self) -> usize {
        self.span
    }
    fn lead(&self) -> usize {
        0
    }
    fn window_value(&self, window: &[u8]) -> &Rational {
        if self.table.len() <= 4 {
            return self
                .table
                .iter()
                .find(|(k, _)| k.symbols() == window)
                .map_or(&self.default, |(_, v)| v);
        }
        self.table.get(&Word::from(window)).unwrap_or(&self.default)
    }
}

/// Re-anchors a centered potential so its window starts at `x_0`
/// (`ψ = φ ∘ f^k`).
pub fn recode_centered(phi: &LocallyConstantPotential) -> ForwardPotential {
    ForwardPotential {
        span: 2 * phi.radius + 1,
        table: phi.table.clone(),
        default: phi.default.clone(),
    }
}

/// Precision-indexed stream of locally constant approximants with
/// `‖φ − approx(p)‖_∞ ≤ error_bound(p)`.
#[derive(Clone)]
pub struct PotentialOracle {
    approx: Arc<dyn Fn(u32) -> LocallyConstantPotential + Send + Sync>,
    exact: bool,
}

impl std::fmt::Debug for PotentialOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialOracle").field("exact", &self.exact).finish()
    }
}

impl PotentialOracle {
    /// Oracle for a potential that is itself locally constant; error 0.
    pub fn exact(phi: LocallyConstantPotential) -> Self {
        Self {
            approx: Arc::new(move |_| phi.clone()),
            exact: true,
        }
    }

    /// Oracle with the guarantee `‖φ − f(p)‖_∞ ≤ 2^-p`.
    pub fn from_fn(f: impl Fn(u32) -> LocallyConstantPotential + Send + Sync + 'static) -> Self {
        Self {
            approx: Arc::new(f),
            exact: false,
        }
    }

    pub fn approx(&self, precision: u32) -> LocallyConstantPotential {
        (self.approx)(precision)
    }

    pub fn error_bound(&self, precision: u32) -> Rational {
        if self.exact {
            Rational::zero()
        } else {
            pow2(-(precision as i64))
        }
    }

    /// Checks `‖φ_p − φ_{p+1}‖_∞ ≤ 2^-p + 2^-(p+1)` for `p < max_precision`.
    pub fn check_consistency(&self, alphabet: Alphabet, max_precision: u32) -> Result<()> {
        for p in 0..max_precision {
            let d = self.approx(p).sup_distance(&self.approx(p + 1), alphabet);
            let allowed = self.error_bound(p) + self.error_bound(p + 1);
            if d > allowed {
                return Err(Error::InvalidArgument(format!(
                    "approximants {p} and {} differ by {d} > {allowed}",
                    p + 1
                )));
            }
        }
        Ok(())
    }
}

/// Birkhoff sum `S_n φ` of a point whose coordinates `-lead .. n + span - lead - 1`
/// are given by `ext` (so `x_0 = ext[lead]`).
pub fn birkhoff_sum<P: WindowPotential + ?Sized>(phi: &P, ext: &[u8], n: usize) -> Rational {
    let span = phi.span();
    debug_assert!(ext.len() >= n + span - 1);
    let mut s = Rational::zero();
    for i in 0..n {
        s += phi.window_value(&ext[i..i + span]);
    }
    s
}

/// `sup_{x∈[τ]} S_{|τ|} φ(x)` for every `τ ∈ L(X, n)` at once.
///
/// Exact for locally constant `φ`: the maximum over admissible words of
/// length `n + span - 1` with `τ` at offset `lead`.
pub fn cylinder_sups<P: WindowPotential + ?Sized>(
    lang: &dyn Language,
    phi: &P,
    n: usize,
) -> BTreeMap<Word, Rational> {
    let span = phi.span();
    let lead = phi.lead();
    let mut out: BTreeMap<Word, Rational> = BTreeMap::new();
    for ext in lang.words(n + span - 1) {
        let s = birkhoff_sum(phi, ext.symbols(), n);
        let tau = ext.subword(lead, n);
        match out.get_mut(&tau) {
            Some(best) if *best >= s => {}
            Some(best) => *best = s,
            None => {
                out.insert(tau, s);
            }
        }
    }
    out
}

pub fn sup_birkhoff_on_cylinder<P: WindowPotential + ?Sized>(
    lang: &dyn Language,
    phi: &P,
    tau: &Word,
) -> Result<Rational> {
    if !lang.is_admissible(tau) {
        return Err(Error::NotAdmissible(tau.clone()));
    }
    let span = phi.span();
    let lead = phi.lead();
    lang.words(tau.len() + span - 1)
        .iter()
        .filter(|ext| ext.symbols()[lead..lead + tau.len()] == *tau.symbols())
        .map(|ext| birkhoff_sum(phi, ext.symbols(), tau.len()))
        .max()
        .ok_or_else(|| Error::NotAdmissible(tau.clone()))
}

/// `S_{|w|} φ` along the periodic point `…www…`.
pub fn cyclic_birkhoff_sum<P: WindowPotential + ?Sized>(phi: &P, w: &Word) -> Rational {
    let n = w.len();
    if n == 0 {
        return Rational::zero();
    }
    let span = phi.span();
    let lead = phi.lead();
    let reps = (span + lead) / n + 3;
    let long = w.repeat(reps);
    // start so that x_0 = long[n * k] for some k ≥ 1, leaving room on the left
    let base = n * (lead / n + 1);
    let s = &long.symbols()[base - lead..];
    birkhoff_sum(phi, s, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{BruteForceForbidden, FullShift};
    use crate::rational::int;
    use crate::word::w;

    fn window_111() -> LocallyConstantPotential {
        let mut t = BTreeMap::new();
        t.insert(w("111"), int(1));
        LocallyConstantPotential::new(1, t, int(0)).unwrap()
    }

    #[test]
    fn sup_indicator_full_shift() {
        let full = FullShift(Alphabet::binary());
        let phi = LocallyConstantPotential::symbol_indicator(1);
        assert_eq!(sup_birkhoff_on_cylinder(&full, &phi, &w("101")).unwrap(), int(2));
    }

    #[test]
    fn sup_golden_mean() {
        let g = BruteForceForbidden::new(Alphabet::binary(), vec![w("11")]);
        let phi = LocallyConstantPotential::symbol_indicator(1);
        assert_eq!(sup_birkhoff_on_cylinder(&g, &phi, &w("010")).unwrap(), int(1));
        assert!(matches!(
            sup_birkhoff_on_cylinder(&g, &phi, &w("011")),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn sup_radius_one_window() {
        // brute force: extensions a11b, S_2 = [a11 == 111] + [11b == 111]
        let full = FullShift(Alphabet::binary());
        let phi = window_111();
        let mut best = int(-1);
        for a in 0..2u8 {
            for b in 0..2u8 {
                let ext = [a, 1, 1, b];
                let s = int((ext[0..3] == [1, 1, 1]) as i64) + int((ext[1..4] == [1, 1, 1]) as i64);
                best = best.max(s);
            }
        }
        assert_eq!(best, int(2));
        assert_eq!(sup_birkhoff_on_cylinder(&full, &phi, &w("11")).unwrap(), best);
    }

    #[test]
    fn potential_file_round_trip() {
        let text = "radius 1\ndefault 0/1\n111 1/1\n010 -3/2\n";
        let phi = LocallyConstantPotential::parse(text).unwrap();
        assert_eq!(phi.radius(), 1);
        assert_eq!(LocallyConstantPotential::parse(&phi.to_text()).unwrap(), phi);
    }

    #[test]
    fn potential_file_errors() {
        assert!(matches!(
            LocallyConstantPotential::parse("radius 1\ndefault 0\n11 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            LocallyConstantPotential::parse("radius x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            LocallyConstantPotential::parse("radius 0\ndefault 1/0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn recode_keeps_table() {
        let phi = window_111();
        let fwd = recode_centered(&phi);
        assert_eq!(fwd.span(), 3);
        assert_eq!(fwd.lead(), 0);
        assert_eq!(fwd.window_value(&[1, 1, 1]), &int(1));
        let k0 = LocallyConstantPotential::symbol_indicator(1);
        let f0 = recode_centered(&k0);
        assert_eq!((f0.span(), f0.lead()), (k0.span(), k0.lead()));
    }

    #[test]
    fn cyclic_sum_of_periodic_word() {
        let phi = LocallyConstantPotential::symbol_indicator(1);
        assert_eq!(cyclic_birkhoff_sum(&phi, &w("0001")), int(1));
        // windows of (011)^∞ centered: 101, 011, 110 -> none is 111
        assert_eq!(cyclic_birkhoff_sum(&window_111(), &w("011")), int(0));
        assert_eq!(cyclic_birkhoff_sum(&window_111(), &w("1")), int(1));
        assert_eq!(cyclic_birkhoff_sum(&window_111(), &w("0111")), int(1));
    }

    #[test]
    fn sup_distance_and_translation() {
        let a = LocallyConstantPotential::symbol_indicator(1);
        let b = a.translate(&int(3));
        assert_eq!(a.sup_distance(&b, Alphabet::binary()), int(3));
        assert_eq!(a.sup_distance(&window_111(), Alphabet::binary()), int(1));
    }

    #[test]
    fn oracle_consistency() {
        let oracle = PotentialOracle::from_fn(|p| {
            // approximants of the constant 1/3
            LocallyConstantPotential::constant(crate::rational::floor_dyadic(
                &crate::rational::ratio(1, 3),
                p,
            ))
        });
        assert!(oracle.check_consistency(Alphabet::binary(), 12).is_ok());
        let exact = PotentialOracle::exact(LocallyConstantPotential::zero());
        assert_eq!(exact.error_bound(3), int(0));
    }
}
