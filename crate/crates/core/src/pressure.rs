//! Upper bounds from partition functions and certified pressure of vertex
//! shifts and Sofic shifts.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::enclosure::{
    exp_enclosure, log_enclosure, log_interval, perron_enclosure, RationalInterval, WeightedMatrix,
};
use crate::error::{Error, Result};
use crate::language::Language;
use crate::potential::{cyclic_birkhoff_sum, cylinder_sups, recode_centered, LocallyConstantPotential, WindowPotential};
use crate::rational::{fmt_ratio, floor_log2, int, Rational};
use crate::sft::VertexShift;
use crate::sofic::{edge_shift_lift, right_resolve, LabeledGraph};
use crate::word::Word;

/// Power-iteration steps allowed per Perron root before giving up on the
/// requested width.
pub const PERRON_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    BudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// One step of a bound sequence. `bound` encloses the running minimum of
/// the upper bounds (or running maximum of the lower bounds) so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub index: usize,
    pub bound: RationalInterval,
}

/// Two-sided pressure bounds with the sequences that produced them.
#[derive(Debug, Clone)]
pub struct PressureEnclosure {
    pub interval: RationalInterval,
    pub upper_trace: Vec<TraceEntry>,
    pub lower_trace: Vec<TraceEntry>,
    pub status: Status,
}

impl PressureEnclosure {
    /// `[max lower.lo, min upper.hi]` from the traces, with `status`
    /// decided by the caller.
    pub fn from_traces(upper: Vec<TraceEntry>, lower: Vec<TraceEntry>, status: Status) -> Result<Self> {
        let hi = upper
            .iter()
            .map(|e| e.bound.hi())
            .min()
            .ok_or_else(|| Error::InvalidBudget("no upper bound computed".into()))?
            .clone();
        let lo = lower
            .iter()
            .map(|e| e.bound.lo())
            .max()
            .ok_or_else(|| Error::InvalidBudget("no lower bound computed".into()))?
            .clone();
        let interval = RationalInterval::new(lo, hi)
            .map_err(|_| Error::InvalidArgument("lower bound exceeds upper bound".into()))?;
        Ok(Self {
            interval,
            upper_trace: upper,
            lower_trace: lower,
            status,
        })
    }

    /// `kind,index,lo,hi` rows; `n` rows are upper bounds, `m` rows lower.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("kind,index,lo,hi\n");
        for (kind, trace) in [("n", &self.upper_trace), ("m", &self.lower_trace)] {
            for e in trace {
                let _ = writeln!(s, "{kind},{},{},{}", e.index, fmt_ratio(e.bound.lo()), fmt_ratio(e.bound.hi()));
            }
        }
        s
    }

    /// Upper trace nonincreasing, lower trace nondecreasing, and every lower
    /// bound below every upper bound.
    pub fn traces_are_consistent(&self) -> bool {
        let up = self.upper_trace.windows(2).all(|p| p[1].bound.hi() <= p[0].bound.hi());
        let down = self.lower_trace.windows(2).all(|p| p[1].bound.lo() >= p[0].bound.lo());
        let sandwich = match (
            self.lower_trace.iter().map(|e| e.bound.lo()).max(),
            self.upper_trace.iter().map(|e| e.bound.hi()).min(),
        ) {
            (Some(l), Some(u)) => l <= u,
            _ => true,
        };
        up && down && sandwich
    }
}

/// Enclosure of `(1/n) log Z_n(φ)` of width `≤ 2^-p`; its upper end bounds
/// the pressure from above.
pub fn partition_upper(
    lang: &dyn Language,
    phi: &LocallyConstantPotential,
    n: usize,
    p: u32,
) -> Result<RationalInterval> {
    if n == 0 {
        return Err(Error::InvalidArgument("partition function needs n ≥ 1".into()));
    }
    let sups = cylinder_sups(lang, phi, n);
    if sups.is_empty() {
        return Err(Error::EmptyLanguage(n + 2 * phi.radius()));
    }
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
    for s in sups.into_values() {
        *counts.entry(s).or_default() += 1;
    }
    let log_z = log_of_exp_sum(&counts, p)?;
    Ok(log_z.scale(&Rational::new(1.into(), (n as i64).into())))
}

/// Enclosure of `log Σ c · e^s` over `(s, c)`, width `≤ 2^-p`.
fn log_of_exp_sum(counts: &BTreeMap<Rational, u64>, p: u32) -> Result<RationalInterval> {
    let mut z = RationalInterval::zero();
    for (s, &c) in counts {
        z = z.add(&exp_enclosure(s, p + 3).scale(&int(c as i64)));
    }
    log_interval(&z, p + 2)
}

/// `h_k = min_{j ≤ k} (1/j) log |L(X, j)|` for `k = 1..=m`, each enclosed
/// with width `≤ 2^-p`. The minimum is taken on exact counts.
pub fn entropy_upper_trace(lang: &dyn Language, m: usize, p: u32) -> Result<Vec<RationalInterval>> {
    if m == 0 {
        return Err(Error::InvalidBudget("m must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(m);
    let mut best: Option<(usize, BigUint)> = None;
    for j in 1..=m {
        let c = lang.count(j);
        if c == 0 {
            return Err(Error::EmptyLanguage(j));
        }
        let c = BigUint::from(c);
        // c^(1/j) < b^(1/i)  ⇔  c^i < b^j
        let better = match &best {
            None => true,
            Some((i, b)) => num_traits::pow(c.clone(), *i) < num_traits::pow(b.clone(), j),
        };
        if better {
            best = Some((j, c));
        }
        let (i, b) = best.as_ref().expect("set above");
        let l = log_enclosure(&Rational::from_integer(b.clone().into()), p)?;
        out.push(l.scale(&Rational::new(1.into(), (*i as i64).into())));
    }
    Ok(out)
}

/// Certified `P(X_V, φ)` with width `≤ 2^-p`, or wider with `converged =
/// false` if some Perron root exhausted its iteration budget.
pub fn sft_pressure_with_budget(
    v: &VertexShift,
    phi: &LocallyConstantPotential,
    p: u32,
    budget: usize,
) -> Result<(RationalInterval, bool)> {
    if v.is_empty() {
        return Err(Error::EmptyShift);
    }
    let psi = recode_centered(phi);
    let span = psi.span();
    let refined;
    let v = if v.block_len() < span {
        refined = v.higher_block(span);
        &refined
    } else {
        v
    };
    if v.is_empty() {
        return Err(Error::EmptyShift);
    }
    let weights: Vec<Rational> = (0..v.num_states())
        .map(|u| psi.window_value(&v.word(u).symbols()[..span]).clone())
        .collect();
    let comps = v.transitive_components();
    let results: Vec<Result<(RationalInterval, bool)>> = comps
        .par_iter()
        .map(|c| component_pressure(v, c.states(), c.is_simple_cycle(v), &weights, p, budget))
        .collect();
    let mut best: Option<RationalInterval> = None;
    let mut converged = true;
    for r in results {
        let (x, ok) = r?;
        converged &= ok;
        best = Some(match best {
            None => x,
            Some(b) => b.max(&x),
        });
    }
    Ok((best.ok_or(Error::EmptyShift)?, converged))
}

/// [`sft_pressure_with_budget`] with [`PERRON_BUDGET`].
pub fn sft_pressure(v: &VertexShift, phi: &LocallyConstantPotential, p: u32) -> Result<RationalInterval> {
    sft_pressure_with_budget(v, phi, p, PERRON_BUDGET).map(|(x, _)| x)
}

fn component_pressure(
    v: &VertexShift,
    states: &[usize],
    simple_cycle: bool,
    weights: &[Rational],
    p: u32,
    budget: usize,
) -> Result<(RationalInterval, bool)> {
    if simple_cycle {
        let total: Rational = states.iter().map(|&u| &weights[u]).sum();
        let mean = total / Rational::from_integer((states.len() as i64).into());
        return Ok((RationalInterval::point(mean), true));
    }
    // shift weights to be ≥ 0 so λ ≥ 1 and relative width equals absolute width
    let c = states.iter().map(|&u| &weights[u]).min().expect("nonempty").clone();
    let mut local = vec![usize::MAX; v.num_states()];
    for (i, &u) in states.iter().enumerate() {
        local[u] = i;
    }
    let exps = |q: u32| -> BTreeMap<Rational, RationalInterval> {
        states
            .iter()
            .map(|&u| &weights[u] - &c)
            .map(|x| {
                let e = exp_enclosure(&x, q);
                (x, e)
            })
            .collect()
    };
    let crude = exps(4);
    let row_sum = states
        .iter()
        .map(|&u| {
            let e = crude[&(&weights[u] - &c)].hi();
            e * Rational::from_integer((v.successors(u).len() as i64).into())
        })
        .max()
        .expect("nonempty");
    let q = p + 5 + (floor_log2(&row_sum).max(0) as u32);
    let table = exps(q);
    let mut entries = Vec::new();
    for &u in states {
        let e = &table[&(&weights[u] - &c)];
        for &x in v.successors(u) {
            if local[x] != usize::MAX {
                entries.push((local[u], local[x], e.clone()));
            }
        }
    }
    let m = WeightedMatrix::new(states.len(), entries)?;
    let lambda = perron_enclosure(&m, p + 2, budget)?;
    let log = log_interval(&lambda.interval, p + 2)?;
    Ok((log.shift(&c), lambda.converged))
}

/// Certified pressure of a Sofic shift: right-resolve, lift to the edge
/// shift, then [`sft_pressure`].
pub fn sofic_pressure(g: &LabeledGraph, phi: &LocallyConstantPotential, p: u32) -> Result<RationalInterval> {
    sofic_pressure_with_budget(g, phi, p, PERRON_BUDGET).map(|(x, _)| x)
}

pub fn sofic_pressure_with_budget(
    g: &LabeledGraph,
    phi: &LocallyConstantPotential,
    p: u32,
    budget: usize,
) -> Result<(RationalInterval, bool)> {
    let g = g.trimmed();
    if g.is_empty() {
        return Err(Error::EmptyShift);
    }
    let r = right_resolve(&g);
    let (v, psi) = edge_shift_lift(&r, phi)?;
    sft_pressure_with_budget(&v, &psi, p, budget)
}

/// Upper bound from the SFT whose allowed `n`-blocks are `L(X, n)`; it
/// contains `X`, so its pressure dominates.
pub fn outer_sft_upper(
    lang: &dyn Language,
    phi: &LocallyConstantPotential,
    n: usize,
    p: u32,
) -> Result<(RationalInterval, bool)> {
    let v = VertexShift::from_language(lang, n)?;
    sft_pressure_with_budget(&v, phi, p, PERRON_BUDGET)
}

/// Why a periodic orbit belongs to the shift.
#[derive(Clone, Copy)]
pub enum OrbitEvidence<'a> {
    /// `w^∞` labels a bi-infinite path in this presentation.
    Graph(&'a LabeledGraph),
    Shift(&'a VertexShift),
    /// `w` is a concatenation of these generators.
    Generators(&'a [Word]),
}

impl OrbitEvidence<'_> {
    pub fn certifies(&self, w: &Word) -> bool {
        match self {
            OrbitEvidence::Graph(g) => g.has_periodic_point(w),
            OrbitEvidence::Shift(v) => v.has_periodic_point(w),
            OrbitEvidence::Generators(gens) => factors_over(w, gens),
        }
    }
}

/// Whether `w` is a concatenation of words from `gens`.
pub fn factors_over(w: &Word, gens: &[Word]) -> bool {
    if w.is_empty() {
        return false;
    }
    let s = w.symbols();
    let mut reach = vec![false; s.len() + 1];
    reach[0] = true;
    for i in 0..s.len() {
        if !reach[i] {
            continue;
        }
        for g in gens {
            let l = g.len();
            if l > 0 && i + l <= s.len() && &s[i..i + l] == g.symbols() {
                reach[i + l] = true;
            }
        }
    }
    reach[s.len()]
}

/// `(1/|w|) S_{|w|} φ` along `w^∞`, a lower bound for the pressure of any
/// shift containing that orbit.
pub fn periodic_lower(w: &Word, phi: &LocallyConstantPotential, evidence: OrbitEvidence<'_>) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !evidence.certifies(w) {
        return Err(Error::NoMembershipEvidence(w.clone()));
    }
    Ok(cyclic_birkhoff_sum(phi, w) / Rational::from_integer((w.len() as i64).into()))
}

/// `Z_n(φ)` in exact form: multiplicities of each cylinder supremum
/// `sup S_n φ`.
pub fn partition_exponents(lang: &dyn Language, phi: &LocallyConstantPotential, n: usize) -> BTreeMap<Rational, u64> {
    let mut counts = BTreeMap::new();
    for s in cylinder_sups(lang, phi, n).into_values() {
        *counts.entry(s).or_insert(0u64) += 1;
    }
    counts
}
