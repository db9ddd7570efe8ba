//! Labeled-graph presentations of Sofic shifts.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph;
use crate::language::{Language, WordSet};
use crate::potential::LocallyConstantPotential;
use crate::sft::VertexShift;
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledEdge {
    pub src: usize,
    pub dst: usize,
    pub label: u8,
}

/// Directed multigraph with edge labels; presents the shift of label
/// sequences of bi-infinite paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<LabeledEdge>,
    out: Vec<Vec<(u8, usize)>>,
}

impl LabeledGraph {
    /// Vertices are `0..names.len()`. Duplicate edges are merged.
    pub fn new(alphabet: Alphabet, names: Vec<String>, mut edges: Vec<LabeledEdge>) -> Result<Self> {
        let n = names.len();
        for e in &edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {} -> {} refers to a missing vertex",
                    e.src, e.dst
                )));
            }
            if !alphabet.contains(e.label) {
                return Err(Error::SymbolOutOfAlphabet {
                    symbol: e.label,
                    size: alphabet.size(),
                });
            }
        }
        edges.sort_by_key(|e| (e.src, e.label, e.dst));
        edges.dedup();
        let mut out = vec![Vec::new(); n];
        for e in &edges {
            out[e.src].push((e.label, e.dst));
        }
        Ok(Self {
            alphabet,
            names,
            edges,
            out,
        })
    }

    /// Builds from `(src, dst, label)` with vertex names numbered in order of
    /// first appearance.
    pub fn from_named_edges(alphabet: Alphabet, named: &[(String, String, u8)]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut id = |s: &String, names: &mut Vec<String>| {
            *index.entry(s.clone()).or_insert_with(|| {
                names.push(s.clone());
                names.len() - 1
            })
        };
        let mut edges = Vec::new();
        for (a, b, label) in named {
            let src = id(a, &mut names);
            let dst = id(b, &mut names);
            edges.push(LabeledEdge {
                src,
                dst,
                label: *label,
            });
        }
        Self::new(alphabet, names, edges)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    /// Outgoing `(label, target)` pairs, sorted.
    pub fn out_edges(&self, v: usize) -> &[(u8, usize)] {
        &self.out[v]
    }

    fn succ(&self) -> Vec<Vec<usize>> {
        self.out.iter().map(|o| o.iter().map(|&(_, d)| d).collect()).collect()
    }

    pub fn is_essential(&self) -> bool {
        graph::essential_vertices(&self.succ()).len() == self.num_vertices()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Outgoing labels are distinct at every vertex.
    pub fn is_right_resolving(&self) -> bool {
        self.out.iter().all(|o| o.windows(2).all(|p| p[0].0 != p[1].0))
    }

    /// Restriction to vertices lying on bi-infinite paths.
    pub fn trimmed(&self) -> Self {
        let keep = graph::essential_vertices(&self.succ());
        let mut new_index = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| new_index[e.src] != usize::MAX && new_index[e.dst] != usize::MAX)
            .map(|e| LabeledEdge {
                src: new_index[e.src],
                dst: new_index[e.dst],
                label: e.label,
            })
            .collect();
        Self::new(self.alphabet, names, edges).expect("subgraph of a valid graph")
    }

    fn step(&self, set: &[usize], symbol: u8, mark: &mut [bool]) -> Vec<usize> {
        let mut next = Vec::new();
        for &v in set {
            for &(l, d) in &self.out[v] {
                if l == symbol && !mark[d] {
                    mark[d] = true;
                    next.push(d);
                }
            }
        }
        for &d in &next {
            mark[d] = false;
        }
        next.sort_unstable();
        next
    }

    fn walk(&self, prefix: &mut Vec<u8>, set: &[usize], len: usize, mark: &mut [bool], out: &mut WordSet) {
        if prefix.len() == len {
            out.insert(Word::new(prefix.clone()));
            return;
        }
        for a in self.alphabet.symbols() {
            let next = self.step(set, a, mark);
            if !next.is_empty() {
                prefix.push(a);
                self.walk(prefix, &next, len, mark, out);
                prefix.pop();
            }
        }
    }

    /// Whether `w^∞` labels a bi-infinite path.
    pub fn has_periodic_point(&self, w: &Word) -> bool {
        if w.is_empty() {
            return false;
        }
        let p = w.len();
        let mut succ = vec![Vec::new(); self.num_vertices() * p];
        for e in &self.edges {
            for i in 0..p {
                if w.symbols()[i] == e.label {
                    succ[e.src * p + i].push(e.dst * p + (i + 1) % p);
                }
            }
        }
        !graph::essential_vertices(&succ).is_empty()
    }

    /// Text form used in shift files: one `edge: src dst label` per edge.
    pub fn to_stanza(&self) -> String {
        let mut s = String::from("sofic\n");
        for e in &self.edges {
            let _ = writeln!(s, "edge: {} {} {}", self.names[e.src], self.names[e.dst], e.label);
        }
        s
    }
}

impl Language for LabeledGraph {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Labels of paths of length `len`; assumes the graph is essential.
    fn words(&self, len: usize) -> WordSet {
        let mut out = WordSet::new();
        if self.is_empty() {
            return out;
        }
        let all: Vec<usize> = (0..self.num_vertices()).collect();
        let mut mark = vec![false; self.num_vertices()];
        self.walk(&mut Vec::with_capacity(len), &all, len, &mut mark, &mut out);
        out
    }

    fn is_admissible(&self, word: &Word) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut set: Vec<usize> = (0..self.num_vertices()).collect();
        let mut mark = vec![false; self.num_vertices()];
        for &a in word.symbols() {
            set = self.step(&set, a, &mut mark);
            if set.is_empty() {
                return false;
            }
        }
        true
    }
}

/// `L(X_g, len)`.
pub fn sofic_language(g: &LabeledGraph, len: usize) -> WordSet {
    g.words(len)
}

/// The edge shift of `g` read through its labels: states are edges of `g`
/// (word = label), `e → f` when `e` ends where `f` starts. The potential is
/// unchanged because it is evaluated on the emitted label sequence.
pub fn edge_shift_lift(
    g: &LabeledGraph,
    phi: &LocallyConstantPotential,
) -> Result<(VertexShift, LocallyConstantPotential)> {
    if !g.is_essential() {
        return Err(Error::NonEssential);
    }
    let words: Vec<Word> = g.edges.iter().map(|e| Word::new(vec![e.label])).collect();
    let mut starting: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (i, e) in g.edges.iter().enumerate() {
        starting[e.src].push(i);
    }
    let mut edges = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        for &j in &starting[e.dst] {
            edges.push((i, j));
        }
    }
    let v = VertexShift::from_parts(g.alphabet, 1, words, edges)?;
    Ok((v, phi.clone()))
}

/// Right-resolving presentation by subset construction from every
/// singleton, trimmed. Presents the same shift when `g` is essential.
pub fn right_resolve(g: &LabeledGraph) -> LabeledGraph {
    if g.is_right_resolving() {
        return g.clone();
    }
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.num_vertices() {
        index.insert(vec![v], subsets.len());
        subsets.push(vec![v]);
    }
    let mut edges = Vec::new();
    let mut mark = vec![false; g.num_vertices()];
    let mut i = 0;
    while i < subsets.len() {
        let labels: BTreeSet<u8> = subsets[i]
            .iter()
            .flat_map(|&v| g.out[v].iter().map(|&(l, _)| l))
            .collect();
        for a in labels {
            let next = g.step(&subsets[i], a, &mut mark);
            let j = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                subsets.len() - 1
            });
            edges.push(LabeledEdge {
                src: i,
                dst: j,
                label: a,
            });
        }
        i += 1;
    }
    let names = subsets
        .iter()
        .map(|s| {
            let parts: Vec<&str> = s.iter().map(|&v| g.names[v].as_str()).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    LabeledGraph::new(g.alphabet, names, edges)
        .expect("subset graph of a valid graph")
        .trimmed()
}

/// One central vertex and, for each word, a cycle through it spelling the
/// word. Presents the coded shift generated by `words`.
pub fn bouquet(alphabet: Alphabet, words: &[Word]) -> Result<LabeledGraph> {
    if words.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut names = vec!["c".to_string()];
    let mut edges = Vec::new();
    for (k, w) in words.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check_word(w)?;
        let mut prev = 0;
        for (i, &a) in w.symbols().iter().enumerate() {
            let next = if i + 1 == w.len() {
                0
            } else {
                names.push(format!("g{}_{}", k + 1, i + 1));
                names.len() - 1
            };
            edges.push(LabeledEdge {
                src: prev,
                dst: next,
                label: a,
            });
            prev = next;
        }
    }
    LabeledGraph::new(alphabet, names, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{check_language, language_distance, Distance, FullShift};
    use crate::word::w;

    fn golden_presentation() -> LabeledGraph {
        let e = |a: &str, b: &str, l: u8| (a.to_string(), b.to_string(), l);
        LabeledGraph::from_named_edges(Alphabet::binary(), &[e("a", "a", 0), e("a", "b", 1), e("b", "a", 0)])
            .unwrap()
    }

    #[test]
    fn bouquet_shapes() {
        let b = bouquet(Alphabet::binary(), &[w("1"), w("01")]).unwrap();
        assert_eq!(b.num_vertices(), 2);
        assert_eq!(b.edges().len(), 3);
        let l2: Vec<Word> = b.words(2).into_iter().collect();
        assert_eq!(l2, vec![w("01"), w("10"), w("11")]);
        let fixed = bouquet(Alphabet::binary(), &[w("0")]).unwrap();
        assert_eq!(fixed.edges().len(), 1);
        let ex = bouquet(Alphabet::binary(), &[w("0001"), w("000011")]).unwrap();
        assert_eq!(ex.edges().len(), 10);
        assert_eq!(bouquet(Alphabet::binary(), &[]).unwrap_err(), Error::EmptyGenerators);
        assert_eq!(bouquet(Alphabet::binary(), &[Word::empty()]).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn full_shift_bouquet_language() {
        let b = bouquet(Alphabet::binary(), &[w("0"), w("1")]).unwrap();
        assert_eq!(b.count(3), 8);
    }

    #[test]
    fn lift_of_golden_presentation() {
        let g = golden_presentation();
        let (v, _) = edge_shift_lift(&g, &LocallyConstantPotential::zero()).unwrap();
        assert_eq!(v.num_states(), 3);
        // 5-edge paths are 6-vertex sequences avoiding bb
        assert_eq!(v.count_paths(5), 21);
        assert_eq!(v.words(5), g.words(5));
    }

    #[test]
    fn lift_rejects_non_essential() {
        let e = |a: &str, b: &str, l: u8| (a.to_string(), b.to_string(), l);
        let g = LabeledGraph::from_named_edges(Alphabet::binary(), &[e("a", "a", 0), e("a", "b", 1)]).unwrap();
        assert!(!g.is_essential());
        assert_eq!(
            edge_shift_lift(&g, &LocallyConstantPotential::zero()).unwrap_err(),
            Error::NonEssential
        );
        assert_eq!(g.trimmed().num_vertices(), 1);
    }

    #[test]
    fn resolving_fixed_point_and_merge() {
        let g = golden_presentation();
        assert_eq!(right_resolve(&g), g);
        // a -0-> b, a -0-> c, b -1-> a, c -0-> a
        let e = |a: &str, b: &str, l: u8| (a.to_string(), b.to_string(), l);
        let h = LabeledGraph::from_named_edges(
            Alphabet::binary(),
            &[e("a", "b", 0), e("a", "c", 0), e("b", "a", 1), e("c", "a", 0)],
        )
        .unwrap();
        let r = right_resolve(&h);
        assert!(r.is_right_resolving());
        assert!((0..r.num_vertices()).any(|v| r.name(v) == "{b,c}"));
        for len in 0..=8 {
            assert_eq!(r.words(len), h.words(len));
        }
    }

    #[test]
    fn resolved_bouquet_is_golden_mean() {
        let b = bouquet(Alphabet::binary(), &[w("1"), w("01")]).unwrap();
        let r = right_resolve(&b);
        assert_eq!(r.num_vertices(), 2);
        // symbol exchange 0 <-> 1 maps it onto the no-11 shift
        let flipped = LabeledGraph::new(
            Alphabet::binary(),
            (0..r.num_vertices()).map(|v| r.name(v).to_string()).collect(),
            r.edges()
                .iter()
                .map(|e| LabeledEdge {
                    label: 1 - e.label,
                    ..*e
                })
                .collect(),
        )
        .unwrap();
        let golden = golden_presentation();
        assert_eq!(
            language_distance(&flipped, &golden, 8).unwrap(),
            Distance::Indistinguishable { depth: 8 }
        );
        assert!(check_language(&r, 8).is_empty());
    }

    #[test]
    fn bouquet_language_contains_concatenation_factors() {
        let gens = [w("0"), w("011"), w("10")];
        let b = bouquet(Alphabet::binary(), &gens).unwrap();
        // every factor of a concatenation of generators
        let mut concat = vec![Word::empty()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for c in &concat {
                for g in &gens {
                    next.push(c.concat(g));
                }
            }
            concat.extend(next);
            concat.sort();
            concat.dedup();
        }
        for c in &concat {
            for len in 1..=c.len().min(6) {
                for f in c.factors(len) {
                    assert!(b.is_admissible(&f), "{f} from {c}");
                }
            }
        }
    }

    #[test]
    fn periodic_points() {
        let b = bouquet(Alphabet::binary(), &[w("1"), w("01")]).unwrap();
        assert!(b.has_periodic_point(&w("01")));
        assert!(!b.has_periodic_point(&w("0")));
        assert!(b.has_periodic_point(&w("110")));
        let full = bouquet(Alphabet::binary(), &[w("0"), w("1")]).unwrap();
        assert_eq!(
            language_distance(&full, &FullShift(Alphabet::binary()), 6).unwrap(),
            Distance::Indistinguishable { depth: 6 }
        );
    }
}
