//! Coded shifts: generator streams, Sofic approximations, the two-sided
//! pressure driver, and unique decipherability.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::enclosure::RationalInterval;
use crate::error::{Error, Result};
use crate::language::{Language, WordSet};
use crate::potential::{LocallyConstantPotential, PotentialOracle};
use crate::pressure::{
    outer_sft_upper, partition_upper, periodic_lower, sofic_pressure_with_budget, OrbitEvidence,
    PressureEnclosure, Status, TraceEntry, PERRON_BUDGET,
};
use crate::rational::pow2;
use crate::sofic::{bouquet, LabeledGraph};
use crate::word::{Alphabet, Word};

type Indexed = dyn Fn(usize) -> Result<Option<Word>> + Send + Sync;
type Prefix = dyn Fn(usize) -> Result<Vec<Word>> + Send + Sync;

#[derive(Clone)]
enum Source {
    Indexed(Arc<Indexed>),
    Prefix(Arc<Prefix>),
}

/// The generating set `g_1, g_2, …` of a coded shift, enumerated on demand
/// and memoized.
///
/// The two flags are assertions made by whoever built the stream; bounds
/// returned by [`coded_pressure`] never depend on them.
#[derive(Clone)]
pub struct GeneratorStream {
    source: Source,
    memo: Arc<Mutex<Vec<Word>>>,
    pub asserted_fssp: bool,
    pub asserted_unique_representation: bool,
}

impl fmt::Debug for GeneratorStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorStream")
            .field("memoized", &self.memo.lock().map(|m| m.len()).unwrap_or(0))
            .field("asserted_fssp", &self.asserted_fssp)
            .field("asserted_unique_representation", &self.asserted_unique_representation)
            .finish()
    }
}

impl GeneratorStream {
    /// `f(m)` is the `m`-th generator (1-based), or `None` past the end of a
    /// finite set.
    pub fn from_fn(f: impl Fn(usize) -> Result<Option<Word>> + Send + Sync + 'static) -> Self {
        Self {
            source: Source::Indexed(Arc::new(f)),
            memo: Arc::new(Mutex::new(Vec::new())),
            asserted_fssp: false,
            asserted_unique_representation: false,
        }
    }

    /// `f(m)` lists the first `m` generators, or all of them when the set is
    /// finite with fewer than `m` elements. Suits enumerations that are
    /// cheaper to produce in bulk.
    pub fn from_prefix_fn(f: impl Fn(usize) -> Result<Vec<Word>> + Send + Sync + 'static) -> Self {
        Self {
            source: Source::Prefix(Arc::new(f)),
            memo: Arc::new(Mutex::new(Vec::new())),
            asserted_fssp: false,
            asserted_unique_representation: false,
        }
    }

    pub fn finite(words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if words.iter().any(Word::is_empty) {
            return Err(Error::EmptyWord);
        }
        Ok(Self::from_fn(move |m| Ok(words.get(m - 1).cloned())))
    }

    pub fn with_assertions(mut self, fssp: bool, unique_representation: bool) -> Self {
        self.asserted_fssp = fssp;
        self.asserted_unique_representation = unique_representation;
        self
    }

    /// The `m`-th generator, 1-based.
    pub fn get(&self, m: usize) -> Result<Option<Word>> {
        if m == 0 {
            return Err(Error::InvalidArgument("generators are numbered from 1".into()));
        }
        if let Some(w) = self.memo.lock().expect("memo lock").get(m - 1) {
            return Ok(Some(w.clone()));
        }
        // fill outside the lock; concurrent fills compute identical words
        let have = self.memo.lock().expect("memo lock").len();
        let mut fresh = Vec::new();
        match &self.source {
            Source::Indexed(f) => {
                for i in have + 1..=m {
                    match f(i)? {
                        Some(w) => fresh.push(w),
                        None => break,
                    }
                }
            }
            Source::Prefix(f) => {
                let mut all = f(m.max(2 * have))?;
                all.truncate(m.max(2 * have));
                fresh = all.split_off(have.min(all.len()));
            }
        }
        if fresh.iter().any(Word::is_empty) {
            return Err(Error::EmptyWord);
        }
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() == have {
            memo.extend(fresh);
        }
        Ok(memo.get(m - 1).cloned())
    }

    /// Up to `m` generators; fewer when the set is finite and smaller.
    pub fn first(&self, m: usize) -> Result<Vec<Word>> {
        if m == 0 {
            return Ok(Vec::new());
        }
        self.get(m)?;
        let memo = self.memo.lock().expect("memo lock");
        Ok(memo.iter().take(m).cloned().collect())
    }
}

/// A coded shift given by its generators and a language oracle.
#[derive(Clone)]
pub struct CodedShift {
    alphabet: Alphabet,
    generators: GeneratorStream,
    language: Arc<dyn Language>,
}

impl fmt::Debug for CodedShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodedShift")
            .field("alphabet", &self.alphabet.size())
            .field("generators", &self.generators)
            .finish()
    }
}

/// How far [`CodedShift::new`] checks `X_m ⊆ X`.
const SPOT_CHECK_GENERATORS: usize = 3;
const SPOT_CHECK_LENGTH: usize = 5;

impl CodedShift {
    /// Checks `L(X_m, ℓ) ⊆ L(X, ℓ)` for small `m` and `ℓ`.
    pub fn new(alphabet: Alphabet, generators: GeneratorStream, language: Arc<dyn Language>) -> Result<Self> {
        if language.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch {
                left: alphabet.size(),
                right: language.alphabet().size(),
            });
        }
        let gens = generators.first(SPOT_CHECK_GENERATORS)?;
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for m in 1..=gens.len() {
            let g = bouquet(alphabet, &gens[..m])?;
            for len in 1..=SPOT_CHECK_LENGTH {
                let declared = language.words(len);
                if let Some(bad) = g.words(len).into_iter().find(|w| !declared.contains(w)) {
                    return Err(Error::InconsistentCodedShift(bad));
                }
            }
        }
        Ok(Self {
            alphabet,
            generators,
            language,
        })
    }

    /// Finite generating set; the shift is Sofic and its language is that of
    /// the bouquet.
    pub fn from_generators(alphabet: Alphabet, words: Vec<Word>) -> Result<Self> {
        let graph = bouquet(alphabet, &words)?;
        let stream = GeneratorStream::finite(words)?.with_assertions(true, false);
        Self::new(alphabet, stream, Arc::new(graph))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn generators(&self) -> &GeneratorStream {
        &self.generators
    }

    pub fn language(&self) -> &Arc<dyn Language> {
        &self.language
    }
}

impl Language for CodedShift {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn words(&self, len: usize) -> WordSet {
        self.language.words(len)
    }
    fn count(&self, len: usize) -> usize {
        self.language.count(len)
    }
    fn is_admissible(&self, word: &Word) -> bool {
        self.language.is_admissible(word)
    }
}

/// `X_m`: the bouquet of the first `m` generators.
pub fn sofic_approximation(c: &CodedShift, m: usize) -> Result<LabeledGraph> {
    if m < 1 {
        return Err(Error::InvalidBudget("m must be at least 1".into()));
    }
    let gens = c.generators.first(m)?;
    Ok(bouquet(c.alphabet, &gens)?.trimmed())
}

/// Limits for [`coded_pressure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DriverBudget {
    /// Largest `n` for upper bounds.
    pub max_upper: usize,
    /// Largest number of generators for lower bounds.
    pub max_gen: usize,
    /// Upper steps are skipped once `|L(X, n)|` exceeds this.
    pub max_words: usize,
}

impl DriverBudget {
    pub fn new(max_upper: usize, max_gen: usize) -> Self {
        Self {
            max_upper,
            max_gen,
            max_words: 1 << 20,
        }
    }
}

/// Upper bound at step `n`: the better of the partition-function bound and
/// the pressure of the outer SFT built from `L(X, n)`.
fn upper_step(
    c: &CodedShift,
    phi: &LocallyConstantPotential,
    n: usize,
    p: u32,
    max_words: usize,
) -> Result<Option<RationalInterval>> {
    let lang: &dyn Language = c.language.as_ref();
    let mut best: Option<RationalInterval> = None;
    if lang.count(n) <= max_words {
        let (x, _) = outer_sft_upper(lang, phi, n, p)?;
        best = Some(x);
    }
    if lang.count(n + 2 * phi.radius()) <= max_words {
        let x = partition_upper(lang, phi, n, p)?;
        best = Some(match best {
            Some(b) if b.hi() <= x.hi() => b,
            _ => x,
        });
    }
    Ok(best)
}

/// Lower bound at step `m`: pressure of `X_m`, and the periodic orbit of
/// `g_m` on its own.
fn lower_step(c: &CodedShift, phi: &LocallyConstantPotential, m: usize, p: u32) -> Result<Option<RationalInterval>> {
    let gens = c.generators.first(m)?;
    if gens.len() < m {
        return Ok(None);
    }
    let g = bouquet(c.alphabet, &gens)?;
    let (x, _) = sofic_pressure_with_budget(&g, phi, p, PERRON_BUDGET)?;
    let last = &gens[m - 1];
    let orbit = periodic_lower(last, phi, OrbitEvidence::Generators(&gens))?;
    Ok(Some(x.max(&RationalInterval::point(orbit))))
}

/// Certified pressure of a coded shift by interleaving nonincreasing upper
/// bounds `u_n` and nondecreasing lower bounds `l_m = P(X_m, φ_q)`.
///
/// Stops with [`Status::Converged`] once the enclosure is at most `2^-p`
/// wide, or with [`Status::BudgetExhausted`] and the best bounds found.
pub fn coded_pressure(
    c: &CodedShift,
    phi: &PotentialOracle,
    p: u32,
    budget: DriverBudget,
) -> Result<PressureEnclosure> {
    if budget.max_upper < 1 || budget.max_gen < 1 {
        return Err(Error::InvalidBudget(format!(
            "budgets must be at least 1, got n ≤ {} and m ≤ {}",
            budget.max_upper, budget.max_gen
        )));
    }
    phi.approx(0).check_alphabet(c.alphabet)?;
    let q = p + 2;
    let phi_q = phi.approx(q);
    let err = phi.error_bound(q);
    let target = pow2(-(p as i64));

    let mut upper: Vec<TraceEntry> = Vec::new();
    let mut lower: Vec<TraceEntry> = Vec::new();
    let (mut n, mut m) = (0usize, 0usize);
    let (mut upper_done, mut lower_done) = (false, false);
    loop {
        let do_upper = !upper_done && n < budget.max_upper;
        let do_lower = !lower_done && m < budget.max_gen;
        if !do_upper && !do_lower {
            return PressureEnclosure::from_traces(upper, lower, Status::BudgetExhausted);
        }
        let (u, l) = rayon::join(
            || do_upper.then(|| upper_step(c, &phi_q, n + 1, q, budget.max_words)),
            || do_lower.then(|| lower_step(c, &phi_q, m + 1, q)),
        );
        if let Some(u) = u {
            n += 1;
            match u? {
                Some(x) => {
                    let x = x.widen(&err);
                    let bound = match upper.last() {
                        Some(prev) => prev.bound.min(&x),
                        None => x,
                    };
                    upper.push(TraceEntry { index: n, bound });
                }
                None => upper_done = true,
            }
        }
        if let Some(l) = l {
            m += 1;
            match l? {
                Some(x) => {
                    let x = x.widen(&err);
                    let bound = match lower.last() {
                        Some(prev) => prev.bound.max(&x),
                        None => x,
                    };
                    lower.push(TraceEntry { index: m, bound });
                }
                None => lower_done = true,
            }
        }
        if let (Some(u), Some(l)) = (upper.last(), lower.last()) {
            if u.bound.hi() - l.bound.lo() <= target {
                return PressureEnclosure::from_traces(upper, lower, Status::Converged);
            }
        }
    }
}

/// A word with two different factorizations over a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub word: Word,
    pub left: Vec<Word>,
    pub right: Vec<Word>,
}

/// Result of [`sardinas_patterson`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decipherability {
    pub uniquely_decipherable: bool,
    /// A shortest ambiguous word, when one exists.
    pub witness: Option<Ambiguity>,
}

/// Sardinas–Patterson test, run as a shortest-path search over dangling
/// suffixes so that the reported ambiguous word is as short as possible.
pub fn sardinas_patterson(code: &[Word]) -> Result<Decipherability> {
    if code.iter().any(Word::is_empty) {
        return Err(Error::EmptyWord);
    }
    let mut words: Vec<Word> = code.to_vec();
    words.sort();
    words.dedup();

    // state: dangling suffix and whether the right factorization is ahead
    type State = (Word, bool);
    struct Node {
        parent: Option<State>,
        appended: Word,
    }
    let mut dist: HashMap<State, usize> = HashMap::new();
    let mut nodes: HashMap<State, Node> = HashMap::new();
    let mut starts: HashMap<State, (Word, Word)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for u in &words {
        for v in &words {
            if u != v && v.len() > u.len() && v.prefix(u.len()) == *u {
                let d = v.suffix(v.len() - u.len());
                let s = (d, true);
                if dist.get(&s).is_none_or(|&c| v.len() < c) {
                    dist.insert(s.clone(), v.len());
                    starts.insert(s.clone(), (u.clone(), v.clone()));
                    nodes.insert(
                        s.clone(),
                        Node {
                            parent: None,
                            appended: Word::empty(),
                        },
                    );
                    heap.push(Reverse((v.len(), s)));
                }
            }
        }
    }
    let mut done: HashMap<State, ()> = HashMap::new();
    while let Some(Reverse((cost, state))) = heap.pop() {
        if done.contains_key(&state) || dist.get(&state) != Some(&cost) {
            continue;
        }
        done.insert(state.clone(), ());
        let (d, right_ahead) = state.clone();
        for c in &words {
            let (next, extra) = if *c == d {
                // both sides meet: ambiguity
                let (left, right) = rebuild(&state, c, &nodes, &starts, right_ahead);
                let word = left.iter().fold(Word::empty(), |acc, w| acc.concat(w));
                return Ok(Decipherability {
                    uniquely_decipherable: false,
                    witness: Some(Ambiguity { word, left, right }),
                });
            } else if c.len() < d.len() && d.prefix(c.len()) == *c {
                ((d.suffix(d.len() - c.len()), right_ahead), 0)
            } else if c.len() > d.len() && c.prefix(d.len()) == d {
                ((c.suffix(c.len() - d.len()), !right_ahead), c.len() - d.len())
            } else {
                continue;
            };
            let nc = cost + extra;
            if dist.get(&next).is_none_or(|&x| nc < x) {
                dist.insert(next.clone(), nc);
                nodes.insert(
                    next.clone(),
                    Node {
                        parent: Some(state.clone()),
                        appended: c.clone(),
                    },
                );
                heap.push(Reverse((nc, next)));
            }
        }
    }
    return Ok(Decipherability {
        uniquely_decipherable: true,
        witness: None,
    });

    fn rebuild(
        state: &State,
        last: &Word,
        nodes: &HashMap<State, Node>,
        starts: &HashMap<State, (Word, Word)>,
        right_ahead: bool,
    ) -> (Vec<Word>, Vec<Word>) {
        // walk back, remembering which side each codeword was appended to
        let mut steps: Vec<(Word, bool)> = vec![(last.clone(), !right_ahead)];
        let mut cur = state.clone();
        loop {
            let node = &nodes[&cur];
            match &node.parent {
                Some(prev) => {
                    // the behind side of `prev` received the codeword
                    steps.push((node.appended.clone(), !prev.1));
                    cur = prev.clone();
                }
                None => break,
            }
        }
        let (u, v) = starts[&cur].clone();
        let mut left = vec![u];
        let mut right = vec![v];
        for (w, to_right) in steps.into_iter().rev() {
            if to_right {
                right.push(w);
            } else {
                left.push(w);
            }
        }
        (left, right)
    }
}
