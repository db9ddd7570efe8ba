//! The discontinuity witness: from the length-`n` view of a shift, a
//! zero-entropy shift `Z_n` with the same length-`n` language whose
//! pressure sits at periodic-orbit averages.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::Signed;

use crate::enclosure::RationalInterval;
use crate::error::{Error, Result};
use crate::graph;
use crate::language::{Language, WordSet};
use crate::potential::{cyclic_birkhoff_sum, recode_centered, LocallyConstantPotential, WindowPotential};
use crate::pressure::sofic_pressure;
use crate::rational::{fmt_ratio, to_decimal, Rational};
use crate::sft::VertexShift;
use crate::sofic::{LabeledEdge, LabeledGraph};
use crate::word::Word;

#[derive(Debug, Clone)]
pub struct WitnessConfig {
    pub n: usize,
    /// Allowed excess of each orbit average over its component's minimum
    /// cycle mean.
    pub epsilon: Rational,
    /// Indices into the transitive components of the block presentation;
    /// `None` marks all of them.
    pub marks: Option<Vec<usize>>,
    /// Bits for the entropy enclosure of `Z_n`.
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWitness {
    pub component: usize,
    /// Closed walk through every edge of the component.
    pub covering: Word,
    pub min_mean_cycle: Word,
    pub min_mean: Rational,
    pub repetitions: usize,
    /// `covering · cycle^repetitions`, rotated to its least rotation.
    pub periodic_word: Word,
    pub average: Rational,
}

/// The wandering point `(α)^∞ · body · (ω)^∞` carrying `word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub word: Word,
    pub alpha: usize,
    pub alpha_loop: Word,
    pub body: Word,
    pub omega: usize,
    pub omega_loop: Word,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub n: usize,
    pub epsilon: Rational,
    pub components: Vec<ComponentWitness>,
    pub connectors: Vec<Connector>,
    pub z_language_n: WordSet,
    pub language_agrees: bool,
    /// `Z_n` as a labelled graph: one cycle per orbit, and per connector a
    /// private copy of both loops joined by the body.
    pub presentation: LabeledGraph,
    pub entropy: RationalInterval,
    pub pressure_bound: RationalInterval,
    /// `P(X, φ) − P(Z_n, φ)`.
    pub gap: RationalInterval,
}

fn least_rotation(states: &[usize], word_of: impl Fn(usize) -> u8) -> usize {
    let w: Vec<u8> = states.iter().map(|&s| word_of(s)).collect();
    let n = w.len();
    (0..n)
        .min_by(|&a, &b| {
            let ra = w[a..].iter().chain(&w[..a]);
            let rb = w[b..].iter().chain(&w[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// Closed walk from `start` through every edge of a strongly connected
/// shift. Unused edges are taken first, avoiding a return to `start` while
/// others remain, lowest target first; when none is left locally the walk
/// moves to the nearest state that still has one.
fn covering_walk(c: &VertexShift, start: usize) -> Vec<usize> {
    let total = c.num_edges();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut walk = vec![start];
    let mut cur = start;
    let goto = |walk: &mut Vec<usize>, used: &mut HashSet<(usize, usize)>, path: Vec<usize>| {
        let mut prev = *walk.last().expect("nonempty walk");
        for s in path.into_iter().skip(1) {
            used.insert((prev, s));
            walk.push(s);
            prev = s;
        }
    };
    let succ: Vec<Vec<usize>> = (0..c.num_states()).map(|u| c.successors(u).to_vec()).collect();
    while used.len() < total {
        let fresh: Vec<usize> = c.successors(cur).iter().copied().filter(|&x| !used.contains(&(cur, x))).collect();
        if let Some(&x) = fresh.iter().find(|&&x| x != start).or(fresh.first()) {
            used.insert((cur, x));
            walk.push(x);
            cur = x;
            continue;
        }
        let has_fresh = |u: usize| c.successors(u).iter().any(|&x| !used.contains(&(u, x)));
        let path = graph::shortest_path(&succ, cur, has_fresh, |_| true).expect("strongly connected");
        goto(&mut walk, &mut used, path);
        cur = *walk.last().expect("nonempty walk");
    }
    if cur != start {
        let path = graph::shortest_path(&succ, cur, |u| u == start, |_| true).expect("strongly connected");
        goto(&mut walk, &mut used, path);
    }
    walk.pop();
    walk
}

struct Orbit {
    /// States of the block presentation around the cycle.
    states: Vec<usize>,
    word: Word,
}

/// Builds `Z_n` for the shift presented by `v` (typically
/// [`VertexShift::from_language`] at `n`), given an enclosure of
/// `P(X, φ)`.
pub fn build_witness(
    v: &VertexShift,
    phi: &LocallyConstantPotential,
    x_pressure: &RationalInterval,
    cfg: &WitnessConfig,
) -> Result<WitnessReport> {
    let n = cfg.n;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !cfg.epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if v.is_empty() {
        return Err(Error::EmptyShift);
    }
    phi.check_alphabet(v.alphabet())?;
    let psi = recode_centered(phi);
    let span = psi.span();
    let h = v.higher_block((n - 1).max(span).max(1));
    let weight = |u: usize| psi.window_value(&h.word(u).symbols()[..span]).clone();
    let comps = h.transitive_components();
    let marked: Vec<usize> = match &cfg.marks {
        None => (0..comps.len()).collect(),
        Some(m) => {
            let mut m = m.clone();
            m.sort_unstable();
            m.dedup();
            if let Some(&bad) = m.iter().find(|&&i| i >= comps.len()) {
                return Err(Error::InvalidArgument(format!(
                    "component {bad} marked but only {} exist",
                    comps.len()
                )));
            }
            m
        }
    };
    if marked.is_empty() {
        return Err(Error::InvalidArgument("no component marked".into()));
    }
    let norm = phi.sup_norm_bound();

    let mut components = Vec::new();
    let mut orbits = Vec::new();
    for &ci in &marked {
        let mut states = comps[ci].states().to_vec();
        states.sort_unstable();
        let c = h.restrict(&states);
        if c.num_states() != states.len() || !c.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let to_h = |i: usize| states[i];
        let tau = c.min_mean_cycle(|u, _| weight(to_h(u)))?;
        let start = tau.states[0];
        let walk = covering_walk(&c, start);
        // K with |W|·2‖φ‖ ≤ ε·(|W| + K|τ|)
        let (wl, tl) = (walk.len() as i64, tau.states.len() as i64);
        let need = Rational::from_integer((2 * wl).into()) * &norm / &cfg.epsilon - Rational::from_integer(wl.into());
        let reps = if need.is_positive() {
            (need / Rational::from_integer(tl.into())).ceil().to_integer().try_into().unwrap_or(usize::MAX)
        } else {
            0
        };
        let mut cycle: Vec<usize> = walk.clone();
        for _ in 0..reps {
            cycle.extend(&tau.states);
        }
        let cycle: Vec<usize> = cycle.into_iter().map(to_h).collect();
        let rot = least_rotation(&cycle, |s| h.word(s).symbols()[0]);
        let cycle: Vec<usize> = cycle[rot..].iter().chain(&cycle[..rot]).copied().collect();
        let word = h.cycle_word(&cycle);
        let average = cyclic_birkhoff_sum(phi, &word) / Rational::from_integer((word.len() as i64).into());
        components.push(ComponentWitness {
            component: ci,
            covering: c.cycle_word(&walk),
            min_mean_cycle: c.cycle_word(&tau.states),
            min_mean: tau.mean.clone(),
            repetitions: reps,
            periodic_word: word.clone(),
            average,
        });
        orbits.push(Orbit { states: cycle, word });
    }

    let target: WordSet = v.words(n);
    let mut covered: BTreeSet<Word> = BTreeSet::new();
    for o in &orbits {
        covered.extend(o.word.cyclic_factors(n));
    }
    let succ: Vec<Vec<usize>> = (0..h.num_states()).map(|u| h.successors(u).to_vec()).collect();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); h.num_states()];
    for (u, s) in succ.iter().enumerate() {
        for &x in s {
            pred[x].push(u);
        }
    }
    let mut on_orbit: Vec<Option<(usize, usize)>> = vec![None; h.num_states()];
    for (i, o) in orbits.iter().enumerate() {
        for (pos, &s) in o.states.iter().enumerate() {
            on_orbit[s].get_or_insert((i, pos));
        }
    }
    let mut connectors = Vec::new();
    for word in target.iter().filter(|w| !covered.contains(*w)).cloned().collect::<Vec<_>>() {
        if covered.contains(&word) {
            continue;
        }
        // an edge u → x whose (L+1)-word contains `word`, reachable from and
        // leading back to the chosen orbits
        let mut best: Option<Vec<usize>> = None;
        for (u, x) in h.edges() {
            let edge_word = h.word(u).pushed(*h.word(x).symbols().last().expect("nonempty block"));
            if !edge_word.contains(&word) {
                continue;
            }
            let back = if on_orbit[u].is_some() {
                Some(vec![u])
            } else {
                graph::shortest_path(&pred, u, |s| on_orbit[s].is_some(), |_| true)
            };
            let fwd = if on_orbit[x].is_some() {
                Some(vec![x])
            } else {
                graph::shortest_path(&succ, x, |s| on_orbit[s].is_some(), |_| true)
            };
            if let (Some(mut back), Some(fwd)) = (back, fwd) {
                back.reverse();
                back.extend(fwd);
                if best.as_ref().is_none_or(|b| back.len() < b.len()) {
                    best = Some(back);
                }
            }
        }
        let path = best.ok_or_else(|| Error::NoConnector(word.clone()))?;
        let (first, last) = (path[0], *path.last().expect("nonempty path"));
        let (ai, apos) = on_orbit[first].expect("starts on an orbit");
        let (oi, opos) = on_orbit[last].expect("ends on an orbit");
        let rotate = |o: &Orbit, pos: usize| -> Word {
            let s: Vec<usize> = o.states[pos..].iter().chain(&o.states[..pos]).copied().collect();
            h.cycle_word(&s)
        };
        let body = h.cycle_word(&path[..path.len() - 1]);
        let c = Connector {
            word,
            alpha: ai,
            alpha_loop: rotate(&orbits[ai], apos),
            body,
            omega: oi,
            omega_loop: rotate(&orbits[oi], opos),
        };
        let point = c.alpha_loop.repeat(2).concat(&c.body).concat(&c.omega_loop.repeat(2));
        covered.extend(point.factors(n));
        connectors.push(c);
    }

    let presentation = z_presentation(v, &orbits, &connectors)?;
    let z_language_n = presentation.words(n);
    let language_agrees = z_language_n == target;
    let entropy = sofic_pressure(&presentation, &LocallyConstantPotential::zero(), cfg.precision)?;
    let top = components
        .iter()
        .map(|c| c.average.clone())
        .max()
        .expect("at least one component");
    let pressure_bound = RationalInterval::point(top);
    let gap = x_pressure.sub(&pressure_bound);
    Ok(WitnessReport {
        n,
        epsilon: cfg.epsilon.clone(),
        components,
        connectors,
        z_language_n,
        language_agrees,
        presentation,
        entropy,
        pressure_bound,
        gap,
    })
}

fn z_presentation(v: &VertexShift, orbits: &[Orbit], connectors: &[Connector]) -> Result<LabeledGraph> {
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let add_loop = |names: &mut Vec<String>, edges: &mut Vec<LabeledEdge>, prefix: String, w: &Word| -> usize {
        let base = names.len();
        for j in 0..w.len() {
            names.push(format!("{prefix}_{j}"));
        }
        for (j, &a) in w.symbols().iter().enumerate() {
            edges.push(LabeledEdge {
                src: base + j,
                dst: base + (j + 1) % w.len(),
                label: a,
            });
        }
        base
    };
    for (i, o) in orbits.iter().enumerate() {
        add_loop(&mut names, &mut edges, format!("y{i}"), &o.word);
    }
    for (k, c) in connectors.iter().enumerate() {
        let a = add_loop(&mut names, &mut edges, format!("c{k}a"), &c.alpha_loop);
        let b = add_loop(&mut names, &mut edges, format!("c{k}b"), &c.omega_loop);
        // leave the α loop at its start, spell the body, land on the ω loop
        let mut prev = a;
        for (j, &s) in c.body.symbols().iter().enumerate() {
            let next = if j + 1 == c.body.len() {
                b
            } else {
                names.push(format!("c{k}_{j}"));
                names.len() - 1
            };
            edges.push(LabeledEdge {
                src: prev,
                dst: next,
                label: s,
            });
            prev = next;
        }
        if c.body.is_empty() {
            return Err(Error::InvalidArgument("empty connector body".into()));
        }
    }
    LabeledGraph::new(v.alphabet(), names, edges)
}

impl WitnessReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let iv = |x: &RationalInterval| {
            format!(
                "[{}, {}] ≈ [{}, {}]",
                fmt_ratio(x.lo()),
                fmt_ratio(x.hi()),
                to_decimal(x.lo(), 12, false),
                to_decimal(x.hi(), 12, true)
            )
        };
        let _ = writeln!(s, "witness n={} epsilon={}", self.n, fmt_ratio(&self.epsilon));
        for (i, c) in self.components.iter().enumerate() {
            let _ = writeln!(
                s,
                "orbit {i}: component={} covering={} min-mean-cycle={} min-mean={} repetitions={} period={} average={}",
                c.component,
                c.covering,
                c.min_mean_cycle,
                fmt_ratio(&c.min_mean),
                c.repetitions,
                c.periodic_word.len(),
                fmt_ratio(&c.average)
            );
            let _ = writeln!(s, "orbit {i} word: {}", c.periodic_word);
        }
        for c in &self.connectors {
            let _ = writeln!(
                s,
                "connector {}: alpha={} ({}) body={} omega={} ({})",
                c.word, c.alpha, c.alpha_loop, c.body, c.omega, c.omega_loop
            );
        }
        let words: Vec<String> = self.z_language_n.iter().map(Word::to_string).collect();
        let _ = writeln!(s, "z-language-{}: {}", self.n, words.join(" "));
        let _ = writeln!(s, "language-agrees: {}", self.language_agrees);
        let _ = writeln!(s, "entropy: {}", iv(&self.entropy));
        let _ = writeln!(s, "pressure: {}", iv(&self.pressure_bound));
        let _ = writeln!(s, "gap: {}", iv(&self.gap));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::pressure::sft_pressure;
    use crate::rational::{pow2, ratio};
    use crate::word::{w, Alphabet};

    fn run(v: &VertexShift, phi: &LocallyConstantPotential, n: usize, eps: Rational) -> WitnessReport {
        let x = sft_pressure(v, phi, 24).unwrap();
        let blocks = VertexShift::from_language(v, n).unwrap();
        let cfg = WitnessConfig {
            n,
            epsilon: eps,
            marks: None,
            precision: 24,
        };
        build_witness(&blocks, phi, &x, &cfg).unwrap()
    }

    #[test]
    fn golden_mean_at_three() {
        let v = VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("11")]).unwrap();
        let r = run(&v, &LocallyConstantPotential::zero(), 3, ratio(1, 16));
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].periodic_word, w("000101"));
        assert!(r.connectors.is_empty());
        assert!(r.language_agrees);
        assert_eq!(r.pressure_bound, RationalInterval::point(Rational::zero()));
        assert!(r.entropy.contains(&Rational::zero()) && r.entropy.width() <= pow2(-20));
        assert!(*r.gap.lo() >= ratio(45, 100));
    }

    #[test]
    fn full_shift_de_bruijn() {
        let v = VertexShift::sft_from_forbidden(Alphabet::binary(), &[]).unwrap();
        let r = run(&v, &LocallyConstantPotential::zero(), 2, ratio(1, 16));
        assert_eq!(r.components[0].periodic_word, w("0011"));
        assert!(r.language_agrees);
    }

    #[test]
    fn full_shift_first_coordinate() {
        let v = VertexShift::sft_from_forbidden(Alphabet::binary(), &[]).unwrap();
        let phi = LocallyConstantPotential::symbol_indicator(1);
        let eps = ratio(1, 16);
        let r = run(&v, &phi, 2, eps.clone());
        let c = &r.components[0];
        assert_eq!(c.min_mean_cycle, w("0"));
        assert!(c.min_mean.is_zero());
        assert!(*r.pressure_bound.hi() <= eps);
        assert!(r.language_agrees);
        assert!(*r.gap.lo() >= Rational::from_integer(1.into()));
    }

    #[test]
    fn wandering_words_get_connectors() {
        // two fixed points joined one way: 0^∞, 1^∞ and 0…01…1
        let v = VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("10")]).unwrap();
        let r = run(&v, &LocallyConstantPotential::zero(), 2, ratio(1, 4));
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.connectors.len(), 1);
        assert_eq!(r.connectors[0].word, w("01"));
        assert!(r.language_agrees);
        assert!(r.entropy.contains(&Rational::zero()));
        let text = r.to_text();
        assert!(text.contains("connector 01"));
    }

    #[test]
    fn marks_are_validated() {
        let v = VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("10")]).unwrap();
        let blocks = VertexShift::from_language(&v, 2).unwrap();
        let x = RationalInterval::zero();
        let mut cfg = WitnessConfig {
            n: 2,
            epsilon: ratio(1, 4),
            marks: Some(vec![5]),
            precision: 10,
        };
        assert!(build_witness(&blocks, &LocallyConstantPotential::zero(), &x, &cfg).is_err());
        // only the 1^∞ orbit: nothing reaches it from before the 0s
        cfg.marks = Some(vec![1]);
        assert!(matches!(
            build_witness(&blocks, &LocallyConstantPotential::zero(), &x, &cfg),
            Err(Error::NoConnector(_))
        ));
    }
}
