use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coded::{CodedShift, GeneratorStream};
use crate::error::{Error, Result};
use crate::language::{words_by_extension, Language, WordSet};
use crate::rational::{ceil_dyadic, floor_dyadic, fmt_ratio, parse_rational, pow2, Rational};
use crate::sofic::{LabeledEdge, LabeledGraph};
use crate::word::{Alphabet, Word};

type Oracle = dyn Fn(u32) -> Rational + Send + Sync;

/// A real `β > 1`.
#[derive(Clone)]
pub enum BetaNumber {
    Rational(Rational),
    /// The unique root of `poly` (coefficients from the constant term up) in
    /// `(lo, hi]`.
    Algebraic { poly: Vec<BigInt>, lo: Rational, hi: Rational },
    /// `f(p)` is within `2^-p` of `β`.
    Oracle(Arc<Oracle>),
}

impl fmt::Debug for BetaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaNumber::Oracle(_) => f.write_str("BetaNumber::Oracle"),
            other => write!(f, "BetaNumber({other})"),
        }
    }
}

impl PartialEq for BetaNumber {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BetaNumber::Rational(a), BetaNumber::Rational(b)) => a == b,
            (
                BetaNumber::Algebraic { poly, lo, hi },
                BetaNumber::Algebraic {
                    poly: p2,
                    lo: l2,
                    hi: h2,
                },
            ) => poly == p2 && lo == l2 && hi == h2,
            (BetaNumber::Oracle(a), BetaNumber::Oracle(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for BetaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaNumber::Rational(q) => write!(f, "rational {}", fmt_ratio(q)),
            BetaNumber::Algebraic { poly, lo, hi } => {
                write!(f, "algebraic {} [{},{}]", format_poly(poly), fmt_ratio(lo), fmt_ratio(hi))
            }
            BetaNumber::Oracle(_) => f.write_str("oracle"),
        }
    }
}

impl BetaNumber {
    pub fn rational(q: Rational) -> Result<Self> {
        if q <= Rational::one() {
            return Err(Error::InvalidBeta(format!("{} is not above 1", fmt_ratio(&q))));
        }
        Ok(BetaNumber::Rational(q))
    }

    /// Checks with a Sturm sequence that `(lo, hi]` holds exactly one root,
    /// and that `lo ≥ 1`.
    pub fn algebraic(poly: Vec<BigInt>, lo: Rational, hi: Rational) -> Result<Self> {
        let mut poly = poly;
        while poly.last().is_some_and(Zero::is_zero) {
            poly.pop();
        }
        if poly.len() < 2 {
            return Err(Error::InvalidBeta("polynomial must have positive degree".into()));
        }
        if lo < Rational::one() || lo >= hi {
            return Err(Error::InvalidBeta("need 1 ≤ lo < hi".into()));
        }
        let p = to_rational_poly(&poly);
        if eval(&p, &lo).is_zero() || eval(&p, &hi).is_zero() {
            return Err(Error::InvalidBeta("interval endpoints must not be roots".into()));
        }
        let roots = sturm_count(&p, &lo, &hi);
        if roots != 1 {
            return Err(Error::InvalidBeta(format!(
                "interval contains {roots} roots of {}",
                format_poly(&poly)
            )));
        }
        Ok(BetaNumber::Algebraic { poly, lo, hi })
    }

    pub fn oracle(f: impl Fn(u32) -> Rational + Send + Sync + 'static) -> Result<Self> {
        let a = f(64);
        if a - pow2(-64) <= Rational::one() {
            return Err(Error::InvalidBeta("oracle value is not certifiably above 1".into()));
        }
        Ok(BetaNumber::Oracle(Arc::new(f)))
    }

    /// Parses `rational 3/2` or `algebraic x^2-x-1 [1.6,1.7]`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("rational") {
            return Self::rational(parse_rational(rest)?);
        }
        if let Some(rest) = text.strip_prefix("algebraic") {
            let (poly, interval) = rest
                .split_once('[')
                .ok_or_else(|| Error::InvalidBeta("expected an isolating interval [lo,hi]".into()))?;
            let interval = interval
                .trim()
                .strip_suffix(']')
                .ok_or_else(|| Error::InvalidBeta("unterminated interval".into()))?;
            let (lo, hi) = interval
                .split_once(',')
                .ok_or_else(|| Error::InvalidBeta("interval needs two endpoints".into()))?;
            return Self::algebraic(parse_poly(poly)?, parse_rational(lo)?, parse_rational(hi)?);
        }
        Err(Error::InvalidBeta(format!("unrecognized beta `{text}`")))
    }
}

/// Parses polynomials in `x` with integer coefficients, e.g. `x^3-2x+1` or
/// `2*x^2 - 1`.
pub(crate) fn parse_poly(text: &str) -> Result<Vec<BigInt>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidBeta(format!("malformed polynomial `{}`", text.trim()));
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for t in terms {
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (coef, exp) = match body.split_once('x') {
            Some((c, e)) => {
                let c = c.strip_suffix('*').unwrap_or(c);
                let c: BigInt = if c.is_empty() { BigInt::one() } else { c.parse().map_err(|_| bad())? };
                let e: usize = match e {
                    "" => 1,
                    _ => e.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                };
                (c, e)
            }
            None => (body.parse().map_err(|_| bad())?, 0),
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += if neg { -coef } else { coef };
    }
    Ok(coeffs)
}

pub(crate) fn format_poly(poly: &[BigInt]) -> String {
    let mut out = String::new();
    for (e, c) in poly.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.abs();
        let coef = if mag.is_one() && e > 0 { String::new() } else { mag.to_string() };
        let var = match e {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{e}"),
        };
        out.push_str(&format!("{sign}{coef}{var}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn to_rational_poly(p: &[BigInt]) -> Vec<Rational> {
    p.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn trim_poly(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().expect("nonempty") / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        r = trim_poly(r);
    }
    r
}

/// Number of distinct roots of `p` in `(lo, hi]`.
fn sturm_count(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let deriv: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect();
    let mut seq = vec![p.to_vec(), trim_poly(deriv)];
    while seq.last().is_some_and(|q| !q.is_empty()) {
        let n = seq.len();
        let r: Vec<Rational> = poly_rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    let changes = |x: &Rational| {
        let signs: Vec<bool> = seq
            .iter()
            .map(|q| eval(q, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(lo).saturating_sub(changes(hi))
}

/// How the greedy expansion of 1 continues past the computed prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    /// `b_{len}` is the last nonzero digit.
    Terminating { len: usize },
    /// `b_{k + period} = b_k` for `k > preperiod`.
    EventuallyPeriodic { preperiod: usize, period: usize },
    Unknown,
}

/// Arithmetic in `ℚ(β)`: elements are coefficient vectors on
/// `1, β, …, β^{d−1}`.
struct Field {
    poly: Vec<Rational>,
    /// `β^d = Σ red_i β^i`.
    red: Vec<Rational>,
    lo: Rational,
    hi: Rational,
    lo_positive: bool,
}

/// Bisection steps before a floor is declared undecidable.
const MAX_REFINE: usize = 8192;

impl Field {
    fn new(beta: &BetaNumber) -> Self {
        match beta {
            BetaNumber::Rational(q) => Field {
                poly: vec![-q.clone(), Rational::one()],
                red: vec![q.clone()],
                lo: q.clone(),
                hi: q.clone(),
                lo_positive: false,
            },
            BetaNumber::Algebraic { poly, lo, hi } => {
                let p = to_rational_poly(poly);
                let lead = p.last().expect("positive degree").clone();
                let red = p[..p.len() - 1].iter().map(|c| -c / &lead).collect();
                let lo_positive = eval(&p, lo).is_positive();
                Field {
                    poly: p,
                    red,
                    lo: lo.clone(),
                    hi: hi.clone(),
                    lo_positive,
                }
            }
            BetaNumber::Oracle(_) => unreachable!("oracles use interval digits"),
        }
    }

    fn degree(&self) -> usize {
        self.red.len()
    }

    fn mul_beta(&self, e: &[Rational]) -> Vec<Rational> {
        let d = self.degree();
        let top = e[d - 1].clone();
        let mut out = vec![Rational::zero(); d];
        out[1..d].clone_from_slice(&e[..d - 1]);
        for (o, r) in out.iter_mut().zip(&self.red) {
            *o += &top * r;
        }
        out
    }

    fn enclose(&self, e: &[Rational]) -> (Rational, Rational) {
        let (mut lo, mut hi) = (e[0].clone(), e[0].clone());
        let (mut plo, mut phi) = (Rational::one(), Rational::one());
        for c in &e[1..] {
            plo *= &self.lo;
            phi *= &self.hi;
            if c.is_negative() {
                lo += c * &phi;
                hi += c * &plo;
            } else {
                lo += c * &plo;
                hi += c * &phi;
            }
        }
        (lo, hi)
    }

    fn refine(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2));
        let v = eval(&self.poly, &mid);
        if v.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
        } else if v.is_positive() == self.lo_positive {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    fn floor(&mut self, e: &[Rational], digit: usize) -> Result<BigInt> {
        if e[1..].iter().all(Zero::is_zero) {
            return Ok(e[0].floor().to_integer());
        }
        for _ in 0..MAX_REFINE {
            let (lo, hi) = self.enclose(e);
            let (a, b) = (lo.floor().to_integer(), hi.floor().to_integer());
            if a == b {
                return Ok(a);
            }
            self.refine();
        }
        Err(Error::PrecisionExhausted { digit })
    }
}

struct Exact {
    field: Field,
    rem: Vec<Rational>,
    seen: HashMap<Vec<Rational>, usize>,
    periodicity: Option<Periodicity>,
}

/// Starting precision and cap, in bits, for oracle digits.
const ORACLE_START_BITS: u32 = 64;
const ORACLE_MAX_BITS: u32 = 1 << 14;

enum Engine {
    Exact(Box<Exact>),
    Oracle { f: Arc<Oracle>, bits: u32 },
}

struct State {
    engine: Engine,
    digits: Vec<u8>,
    /// Index (1-based) of the first digit that could not be decided.
    stuck: Option<usize>,
}

/// The digits `b_1 b_2 …` of the greedy expansion of 1 in base `β`,
/// produced on demand and memoized.
pub struct BetaExpansion {
    beta: BetaNumber,
    state: Mutex<State>,
}

impl fmt::Debug for BetaExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = self.state.lock().expect("beta lock");
        f.debug_struct("BetaExpansion")
            .field("beta", &self.beta)
            .field("produced", &st.digits.len())
            .finish()
    }
}

fn to_digit(b: BigInt) -> Result<u8> {
    b.to_u8()
        .ok_or_else(|| Error::InvalidBeta("digits must fit in 0..=255".into()))
}

impl BetaExpansion {
    pub fn new(beta: BetaNumber) -> Result<Self> {
        let engine = match &beta {
            BetaNumber::Oracle(f) => Engine::Oracle {
                f: f.clone(),
                bits: ORACLE_START_BITS,
            },
            other => {
                let field = Field::new(other);
                let mut rem = vec![Rational::zero(); field.degree()];
                rem[0] = Rational::one();
                let mut seen = HashMap::new();
                seen.insert(rem.clone(), 0);
                Engine::Exact(Box::new(Exact {
                    field,
                    rem,
                    seen,
                    periodicity: None,
                }))
            }
        };
        let exp = Self {
            beta,
            state: Mutex::new(State {
                engine,
                digits: Vec::new(),
                stuck: None,
            }),
        };
        exp.digits(1)?;
        Ok(exp)
    }

    pub fn beta(&self) -> &BetaNumber {
        &self.beta
    }

    fn produce(st: &mut State, n: usize) -> Result<()> {
        if let Some(digit) = st.stuck {
            if n >= digit {
                return Err(Error::PrecisionExhausted { digit });
            }
        }
        while st.digits.len() < n {
            match &mut st.engine {
                Engine::Exact(ex) => {
                    let next = match ex.periodicity {
                        Some(Periodicity::Terminating { .. }) => 0,
                        Some(Periodicity::EventuallyPeriodic { period, .. }) => st.digits[st.digits.len() - period],
                        _ => {
                            let j = st.digits.len() + 1;
                            let mut x = ex.field.mul_beta(&ex.rem);
                            let b = match ex.field.floor(&x, j) {
                                Ok(b) => b,
                                Err(e) => {
                                    st.stuck = Some(j);
                                    return Err(e);
                                }
                            };
                            x[0] -= Rational::from_integer(b.clone());
                            ex.rem = x;
                            if ex.rem.iter().all(Zero::is_zero) {
                                ex.periodicity = Some(Periodicity::Terminating { len: j });
                            } else if let Some(&i) = ex.seen.get(&ex.rem) {
                                ex.periodicity = Some(Periodicity::EventuallyPeriodic {
                                    preperiod: i,
                                    period: j - i,
                                });
                            } else {
                                ex.seen.insert(ex.rem.clone(), j);
                            }
                            to_digit(b)?
                        }
                    };
                    st.digits.push(next);
                }
                Engine::Oracle { f, bits } => loop {
                    let got = oracle_digits(f.as_ref(), *bits, n)?;
                    if got.len() >= n {
                        st.digits = got;
                        break;
                    }
                    if *bits >= ORACLE_MAX_BITS {
                        let digit = got.len() + 1;
                        st.digits = got;
                        st.stuck = Some(digit);
                        return Err(Error::PrecisionExhausted { digit });
                    }
                    *bits *= 2;
                },
            }
        }
        Ok(())
    }

    /// Exactly `len` digits, or the index of the first undecidable one.
    pub fn digits(&self, len: usize) -> Result<Vec<u8>> {
        let mut st = self.state.lock().expect("beta lock");
        Self::produce(&mut st, len)?;
        Ok(st.digits[..len].to_vec())
    }

    /// Up to `len` digits; fewer when a floor could not be decided.
    pub fn known_digits(&self, len: usize) -> Vec<u8> {
        let mut st = self.state.lock().expect("beta lock");
        let _ = Self::produce(&mut st, len);
        st.digits[..len.min(st.digits.len())].to_vec()
    }

    /// Scans up to `scan` digits for a repeated remainder. Oracle numbers
    /// always report [`Periodicity::Unknown`].
    pub fn periodicity(&self, scan: usize) -> Periodicity {
        let mut st = self.state.lock().expect("beta lock");
        let _ = Self::produce(&mut st, scan);
        match &st.engine {
            Engine::Exact(ex) => ex.periodicity.unwrap_or(Periodicity::Unknown),
            Engine::Oracle { .. } => Periodicity::Unknown,
        }
    }

    /// The quasi-greedy expansion `b*` as `(preperiod, period)` when it is
    /// eventually periodic: the greedy one if it does not terminate, and
    /// `(b_1 ⋯ b_{j−1} (b_j − 1))^∞` if it stops at `b_j`.
    pub fn quasi_greedy(&self, scan: usize) -> Option<(Vec<u8>, Vec<u8>)> {
        match self.periodicity(scan) {
            Periodicity::Terminating { len } => {
                let mut period = self.known_digits(len);
                *period.last_mut().expect("terminating after a nonzero digit") -= 1;
                Some((Vec::new(), period))
            }
            Periodicity::EventuallyPeriodic { preperiod, period } => {
                let d = self.known_digits(preperiod + period);
                Some((d[..preperiod].to_vec(), d[preperiod..].to_vec()))
            }
            Periodicity::Unknown => None,
        }
    }
}

/// Certified digits from one oracle query at `bits` bits of precision;
/// stops early when a floor is ambiguous.
fn oracle_digits(f: &Oracle, bits: u32, n: usize) -> Result<Vec<u8>> {
    let a = f(bits);
    let eps = pow2(-(bits as i64));
    let (blo, bhi) = (&a - &eps, &a + &eps);
    if blo <= Rational::one() {
        return Err(Error::InvalidBeta("oracle value is not certifiably above 1".into()));
    }
    let guard = bits + 32;
    let (mut rlo, mut rhi) = (Rational::one(), Rational::one());
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (xlo, xhi) = (&blo * &rlo, &bhi * &rhi);
        let (d, e) = (xlo.floor(), xhi.floor());
        if d != e {
            break;
        }
        rlo = floor_dyadic(&(xlo - &d), guard).max(Rational::zero());
        rhi = ceil_dyadic(&(xhi - &d), guard);
        out.push(to_digit(d.to_integer())?);
    }
    Ok(out)
}

pub fn beta_expansion(beta: &BetaNumber, len: usize) -> Result<Vec<u8>> {
    BetaExpansion::new(beta.clone())?.digits(len)
}

fn digit_alphabet(b1: u8) -> Result<Alphabet> {
    if b1 == 0 {
        return Err(Error::InvalidBeta("first digit must be positive".into()));
    }
    Alphabet::new(b1 as usize + 1)
}

/// Truncated `Γ_β` on `v_1 … v_L`: spine edges `v_k → v_{k+1}` labelled
/// `b_k` for `k < L`, and back-edges `v_k → v_1` labelled `i < b_k`.
/// Returned trimmed.
pub fn beta_graph(prefix: &[u8]) -> Result<LabeledGraph> {
    let Some(&b1) = prefix.first() else {
        return Err(Error::InvalidArgument("beta graph needs a nonempty prefix".into()));
    };
    let alphabet = digit_alphabet(b1)?;
    let l = prefix.len();
    let names = (1..=l).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for (k, &b) in prefix.iter().enumerate() {
        if k + 1 < l {
            edges.push(LabeledEdge {
                src: k,
                dst: k + 1,
                label: b,
            });
        }
        edges.extend((0..b).map(|i| LabeledEdge {
            src: k,
            dst: 0,
            label: i,
        }));
    }
    Ok(LabeledGraph::new(alphabet, names, edges)?.trimmed())
}

/// The Parry graph of an eventually periodic `b* = pre · period^∞`: the
/// spine wraps from the last vertex back to the start of the period.
pub fn parry_graph(pre: &[u8], period: &[u8]) -> Result<LabeledGraph> {
    if period.is_empty() {
        return Err(Error::InvalidArgument("empty period".into()));
    }
    let seq: Vec<u8> = pre.iter().chain(period).copied().collect();
    let alphabet = digit_alphabet(seq[0])?;
    let l = seq.len();
    let names = (1..=l).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for (k, &b) in seq.iter().enumerate() {
        edges.push(LabeledEdge {
            src: k,
            dst: if k + 1 < l { k + 1 } else { pre.len() },
            label: b,
        });
        edges.extend((0..b).map(|i| LabeledEdge {
            src: k,
            dst: 0,
            label: i,
        }));
    }
    Ok(LabeledGraph::new(alphabet, names, edges)?.trimmed())
}

/// `g_{j,i} = b_1 ⋯ b_j i` for `i < b_{j+1}`; `j = 0` marks the backward
/// generators `i < b_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaGenerator {
    pub word: Word,
    pub j: usize,
    pub i: u8,
}

impl BetaGenerator {
    /// `b_2 ⋯ b_j`.
    pub fn interior(&self) -> Word {
        if self.j <= 1 {
            Word::empty()
        } else {
            self.word.subword(1, self.j - 1)
        }
    }
}

/// All generators readable from a digit prefix: backward ones first, then
/// forward ones by increasing `j` and `i`.
pub fn beta_generator_list(prefix: &[u8]) -> Vec<BetaGenerator> {
    let mut out = Vec::new();
    for j in 0..prefix.len() {
        for i in 0..prefix[j] {
            let mut v = prefix[..j].to_vec();
            v.push(i);
            out.push(BetaGenerator { word: Word::new(v), j, i });
        }
    }
    out
}

const MAX_GENERATOR_DIGITS: usize = 1 << 16;

/// The generator stream of `X_β`, pulling digits as needed. Carries the
/// unique-representation assertion only.
pub fn beta_generators(exp: Arc<BetaExpansion>) -> GeneratorStream {
    GeneratorStream::from_prefix_fn(move |m| {
        let mut d = 16usize;
        loop {
            let digits = exp.known_digits(d);
            let gens = beta_generator_list(&digits);
            if gens.len() >= m {
                return Ok(gens.into_iter().take(m).map(|g| g.word).collect());
            }
            if digits.len() < d {
                exp.digits(d)?;
            }
            if let Periodicity::Terminating { len } = exp.periodicity(d) {
                if d > len {
                    return Ok(gens.into_iter().map(|g| g.word).collect());
                }
            }
            if d >= MAX_GENERATOR_DIGITS {
                return Err(Error::GeneratorsExhausted {
                    available: gens.len(),
                    requested: m,
                });
            }
            d *= 2;
        }
    })
    .with_assertions(false, true)
}

/// Chains `g^(1) → g^(2) → …` of forward generators with each word a
/// substring of the next one's interior, of 2 to `depth` links.
pub fn chain_check(gens: &[BetaGenerator], depth: usize) -> Vec<Vec<Word>> {
    let fwd: Vec<&BetaGenerator> = gens.iter().filter(|g| g.j >= 1).collect();
    let next: Vec<Vec<usize>> = fwd
        .iter()
        .map(|a| {
            (0..fwd.len())
                .filter(|&b| fwd[b].word != a.word && fwd[b].interior().contains(&a.word))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    fn extend(path: &mut Vec<usize>, next: &[Vec<usize>], depth: usize, fwd: &[&BetaGenerator], out: &mut Vec<Vec<Word>>) {
        if path.len() >= 2 {
            out.push(path.iter().map(|&k| fwd[k].word.clone()).collect());
        }
        if path.len() == depth {
            return;
        }
        let last = *path.last().expect("nonempty path");
        for &b in &next[last] {
            path.push(b);
            extend(path, next, depth, fwd, out);
            path.pop();
        }
    }
    for a in 0..fwd.len() {
        extend(&mut vec![a], &next, depth, &fwd, &mut out);
    }
    out
}

/// `L(X_β, ℓ)`: words each of whose suffixes is lexicographically at most
/// the prefix of `b` of the same length. Positions past the decided digits
/// impose no constraint, so the set can only be too large.
#[derive(Debug, Clone)]
pub struct BetaLanguage {
    exp: Arc<BetaExpansion>,
    alphabet: Alphabet,
}

impl BetaLanguage {
    pub fn new(exp: Arc<BetaExpansion>) -> Result<Self> {
        let b1 = exp.digits(1)?[0];
        Ok(Self {
            alphabet: digit_alphabet(b1)?,
            exp,
        })
    }

    /// State: lengths of the suffixes that still agree with a prefix of `b`.
    fn step(b: &[u8], tight: &[usize], a: u8) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(tight.len() + 1);
        for &t in tight.iter().chain(std::iter::once(&0)) {
            match b.get(t) {
                Some(&d) if a > d => return None,
                Some(&d) if a == d => out.push(t + 1),
                _ => {}
            }
        }
        Some(out)
    }
}

impl Language for BetaLanguage {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn words(&self, len: usize) -> WordSet {
        let b = self.exp.known_digits(len);
        words_by_extension(self.alphabet, len, Vec::new(), |st, a| Self::step(&b, st, a))
    }
    fn is_admissible(&self, word: &Word) -> bool {
        if self.alphabet.check_word(word).is_err() {
            return false;
        }
        let b = self.exp.known_digits(word.len());
        let mut st = Vec::new();
        for &a in word.symbols() {
            match Self::step(&b, &st, a) {
                Some(next) => st = next,
                None => return false,
            }
        }
        true
    }
}

/// Remainder scan used to spot eventually periodic expansions.
pub const PERIODICITY_SCAN: usize = 256;
/// Digits and depth for the chain check behind an FSSP assertion.
const CHAIN_DIGITS: usize = 64;
const CHAIN_DEPTH: usize = 2;

/// `X_β` either as a Sofic shift (eventually periodic `b*`) or as a coded
/// shift.
#[derive(Debug, Clone)]
pub enum BetaShift {
    Sofic(LabeledGraph),
    Coded(CodedShift),
}

/// The FSSP assertion is kept only if `assert_fssp` is requested and no
/// generator chain shows up among the generators of the first digits.
pub fn beta_shift(beta: BetaNumber, assert_fssp: bool) -> Result<BetaShift> {
    let exp = Arc::new(BetaExpansion::new(beta)?);
    if let Some((pre, period)) = exp.quasi_greedy(PERIODICITY_SCAN) {
        return Ok(BetaShift::Sofic(parry_graph(&pre, &period)?));
    }
    let lang = BetaLanguage::new(exp.clone())?;
    let mut stream = beta_generators(exp.clone());
    if assert_fssp {
        let gens = beta_generator_list(&exp.known_digits(CHAIN_DIGITS));
        stream.asserted_fssp = chain_check(&gens, CHAIN_DEPTH).is_empty();
    }
    Ok(BetaShift::Coded(CodedShift::new(lang.alphabet(), stream, Arc::new(lang))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::check_language;
    use crate::rational::ratio;
    use crate::word::w;

    fn golden() -> BetaNumber {
        BetaNumber::parse("algebraic x^2-x-1 [1.6,1.7]").unwrap()
    }

    fn digits_str(d: &[u8]) -> String {
        d.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn rational_expansions() {
        let b = BetaNumber::rational(ratio(3, 2)).unwrap();
        assert_eq!(digits_str(&beta_expansion(&b, 8).unwrap()), "10100000");
        assert_eq!(beta_expansion(&b, 9).unwrap()[8], 1);
        let b = BetaNumber::rational(ratio(5, 2)).unwrap();
        assert_eq!(beta_expansion(&b, 1).unwrap(), [2]);
        assert!(BetaNumber::rational(ratio(1, 1)).is_err());
    }

    #[test]
    fn remainder_identity() {
        // 1 − Σ_{j≤ℓ} b_j β^{−j} = r_ℓ β^{−ℓ} with r_ℓ ∈ [0, 1)
        for (p, q) in [(3, 2), (5, 2), (7, 3), (10, 7)] {
            let beta = ratio(p, q);
            let d = beta_expansion(&BetaNumber::rational(beta.clone()).unwrap(), 20).unwrap();
            let mut rest = Rational::one();
            let mut scale = Rational::one();
            for (l, &b) in d.iter().enumerate() {
                scale /= &beta;
                rest -= Rational::from_integer(BigInt::from(b)) * &scale;
                assert!(!rest.is_negative() && rest < scale, "β = {p}/{q}, ℓ = {}", l + 1);
            }
        }
    }

    #[test]
    fn algebraic_and_periodicity() {
        let exp = BetaExpansion::new(golden()).unwrap();
        assert_eq!(exp.digits(4).unwrap(), [1, 1, 0, 0]);
        assert_eq!(exp.periodicity(16), Periodicity::Terminating { len: 2 });
        assert_eq!(exp.quasi_greedy(16), Some((vec![], vec![1, 0])));
        // x^3 - x^2 - x - 1: tribonacci, b = 111
        let t = BetaNumber::parse("algebraic x^3-x^2-x-1 [1.8,1.9]").unwrap();
        assert_eq!(BetaExpansion::new(t).unwrap().quasi_greedy(16), Some((vec![], vec![1, 1, 0])));
        // x^2 - 3x + 1: β = φ², b = 2 1 1 1 …
        let s = BetaNumber::parse("algebraic x^2-3x+1 [2,3]").unwrap();
        let e = BetaExpansion::new(s).unwrap();
        assert_eq!(e.digits(5).unwrap(), [2, 1, 1, 1, 1]);
        assert_eq!(e.periodicity(16), Periodicity::EventuallyPeriodic { preperiod: 1, period: 1 });
        let r = BetaExpansion::new(BetaNumber::rational(ratio(3, 2)).unwrap()).unwrap();
        assert_eq!(r.periodicity(64), Periodicity::Unknown);
    }

    #[test]
    fn algebraic_validation() {
        assert!(BetaNumber::parse("algebraic x^2-x-1 [0,2]").is_err());
        assert!(BetaNumber::parse("algebraic x^2-2 [1,3]").is_ok());
        assert!(BetaNumber::parse("algebraic x^2-5x+6 [1.5,3.5]").is_err());
        assert!(BetaNumber::parse("algebraic x^2-5x+6 [2.5,3.5]").is_ok());
        assert!(BetaNumber::parse("cubic").is_err());
        assert_eq!(format_poly(&parse_poly("2*x^3 - x + 1").unwrap()), "2x^3-x+1");
        assert_eq!(format_poly(&parse_poly("x^2-x-1").unwrap()), "x^2-x-1");
        let b = golden();
        assert_eq!(BetaNumber::parse(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn oracle_digits_match_exact() {
        let sqrt2 = BetaNumber::oracle(|p| {
            // floor(√2 · 2^p) / 2^p by integer square root
            let n: BigInt = BigInt::from(2) << (2 * p as usize);
            Rational::new(n.sqrt(), BigInt::one() << p as usize)
        })
        .unwrap();
        let exact = BetaNumber::parse("algebraic x^2-2 [1,2]").unwrap();
        assert_eq!(beta_expansion(&sqrt2, 40).unwrap(), beta_expansion(&exact, 40).unwrap());
        // golden mean terminates: the second digit cannot be decided
        let golden_oracle = BetaNumber::oracle(|p| {
            let n: BigInt = BigInt::from(5) << (2 * p as usize);
            Rational::new(n.sqrt() + (BigInt::one() << p as usize), BigInt::one() << (p as usize + 1))
        })
        .unwrap();
        assert!(matches!(
            beta_expansion(&golden_oracle, 3),
            Err(Error::PrecisionExhausted { digit: 2 })
        ));
    }

    #[test]
    fn graphs() {
        let g = beta_graph(&[1, 1]).unwrap();
        let mut e: Vec<_> = g.edges().iter().map(|e| (g.name(e.src).to_string(), g.name(e.dst).to_string(), e.label)).collect();
        e.sort();
        let v = |s: &str| s.to_string();
        assert_eq!(e, [(v("v1"), v("v1"), 0), (v("v1"), v("v2"), 1), (v("v2"), v("v1"), 0)]);
        let g = beta_graph(&[1]).unwrap();
        assert_eq!(g.edges().len(), 1);
        let g = beta_graph(&[2, 2]).unwrap();
        assert_eq!(g.edges().len(), 5);
        assert!(beta_graph(&[]).is_err());
    }

    #[test]
    fn graph_language_respects_lexicographic_bound() {
        for beta in [ratio(3, 2), ratio(5, 2), ratio(7, 3)] {
            let b = beta_expansion(&BetaNumber::rational(beta).unwrap(), 16).unwrap();
            let g = beta_graph(&b).unwrap();
            for len in 1..=8 {
                for word in g.words(len) {
                    for s in 0..len {
                        let suffix = &word.symbols()[s..];
                        assert!(suffix <= &b[..suffix.len()], "{word} vs {}", digits_str(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn generators_and_chains() {
        let b = beta_expansion(&BetaNumber::rational(ratio(3, 2)).unwrap(), 9).unwrap();
        let gens = beta_generator_list(&b);
        let words: Vec<String> = gens.iter().map(|g| g.word.to_string()).collect();
        assert_eq!(words, ["0", "100", "101000000"]);
        assert_eq!(chain_check(&gens, 3), vec![vec![w("100"), w("101000000")]]);
        assert!(chain_check(&gens[..1], 3).is_empty());
        let g2: Vec<String> = beta_generator_list(&[2, 0]).iter().map(|g| g.word.to_string()).collect();
        assert_eq!(g2, ["0", "1"]);
        let g11 = beta_generator_list(&[1, 1]);
        let s: Vec<String> = g11.iter().map(|g| g.word.to_string()).collect();
        assert_eq!(s, ["0", "10"]);
        let odd = vec![
            BetaGenerator { word: w("0"), j: 0, i: 0 },
            BetaGenerator { word: w("11"), j: 1, i: 1 },
        ];
        assert!(chain_check(&odd, 3).is_empty());
    }

    #[test]
    fn shift_routing() {
        assert!(matches!(beta_shift(golden(), false).unwrap(), BetaShift::Sofic(_)));
        let BetaShift::Sofic(g) = beta_shift(golden(), false).unwrap() else { unreachable!() };
        assert!(!g.is_admissible(&w("11")) && g.is_admissible(&w("1010")));
        let BetaShift::Coded(c) = beta_shift(BetaNumber::rational(ratio(3, 2)).unwrap(), true).unwrap() else {
            panic!("3/2 is not a Parry number");
        };
        assert!(!c.generators().asserted_fssp && c.generators().asserted_unique_representation);
        let g: Vec<String> = c.generators().first(3).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(g, ["0", "100", "101000000"]);
        assert!(check_language(c.language().as_ref(), 8).is_empty());
        assert!(!c.is_admissible(&w("11")) && c.is_admissible(&w("1001")) && !c.is_admissible(&w("10101")));
    }
}
