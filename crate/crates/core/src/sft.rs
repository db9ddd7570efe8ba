//! Vertex shifts: SFTs in higher-block form, and path spaces of labeled
//! graphs viewed through their labels.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph;
use crate::language::{Language, WordSet};
use crate::rational::Rational;
use crate::word::{Alphabet, Word};

/// Trimmed directed graph whose states carry words of a common length `r`.
///
/// A path `u_0 u_1 …` emits the first symbol of each state word. For an SFT
/// in `r`-block form the word of `u_i` is `x_i … x_{i+r-1}`, and every edge
/// `u → v` satisfies `suffix_{r-1}(u) = prefix_{r-1}(v)`. States are kept in
/// lexicographic order of their words; words may repeat when the shift is
/// the path space of a labeled graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexShift {
    alphabet: Alphabet,
    block: usize,
    words: Vec<Word>,
    succ: Vec<Vec<usize>>,
}

impl VertexShift {
    /// Validates, trims, and orders states. `edges` index into `words`.
    pub fn from_parts(
        alphabet: Alphabet,
        block: usize,
        words: Vec<Word>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if block == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        for w in &words {
            alphabet.check_word(w)?;
            if w.len() != block {
                return Err(Error::InvalidArgument(format!(
                    "state word {w} has length {}, expected {block}",
                    w.len()
                )));
            }
        }
        let n = words.len();
        let mut succ = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range")));
            }
            if words[u].suffix(block - 1) != words[v].prefix(block - 1) {
                return Err(Error::InvalidArgument(format!(
                    "edge {} -> {} breaks block consistency",
                    words[u], words[v]
                )));
            }
            succ[u].push(v);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let keep = graph::essential_vertices(&succ);
        Ok(Self::build(alphabet, block, &words, &succ, &keep))
    }

    /// Induced subgraph on `keep` (assumed closed under nothing in
    /// particular), renumbered in word order. Does not trim.
    fn build(alphabet: Alphabet, block: usize, words: &[Word], succ: &[Vec<usize>], keep: &[usize]) -> Self {
        let mut order: Vec<usize> = keep.to_vec();
        order.sort_by(|&a, &b| words[a].cmp(&words[b]).then(a.cmp(&b)));
        let mut new_index = vec![usize::MAX; words.len()];
        for (i, &old) in order.iter().enumerate() {
            new_index[old] = i;
        }
        let new_words = order.iter().map(|&o| words[o].clone()).collect();
        let new_succ = order
            .iter()
            .map(|&o| {
                let mut s: Vec<usize> = succ[o]
                    .iter()
                    .filter_map(|&v| (new_index[v] != usize::MAX).then_some(new_index[v]))
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        Self {
            alphabet,
            block,
            words: new_words,
            succ: new_succ,
        }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            block: 1,
            words: Vec::new(),
            succ: Vec::new(),
        }
    }

    /// The SFT `X_F` in `(k-1)`-block form, `k` the longest forbidden length.
    pub fn sft_from_forbidden(alphabet: Alphabet, forbidden: &[Word]) -> Result<Self> {
        for f in forbidden {
            alphabet.check_word(f)?;
        }
        if forbidden.iter().any(Word::is_empty) {
            return Ok(Self::empty(alphabet));
        }
        let k = forbidden.iter().map(Word::len).max().unwrap_or(1);
        let banned: HashSet<&Word> = forbidden.iter().collect();
        let lengths: Vec<usize> = {
            let mut l: Vec<usize> = forbidden.iter().map(Word::len).collect();
            l.sort_unstable();
            l.dedup();
            l
        };
        let ends_badly = |w: &Word| lengths.iter().any(|&l| l <= w.len() && banned.contains(&w.suffix(l)));

        if k <= 1 {
            let words: Vec<Word> = alphabet
                .symbols()
                .map(|s| Word::new(vec![s]))
                .filter(|w| !banned.contains(w))
                .collect();
            let n = words.len();
            let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
            return Self::from_parts(alphabet, 1, words, edges);
        }

        let r = k - 1;
        // admissible r-words, grown one symbol at a time so every prefix is checked
        let mut words = vec![Word::empty()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &words {
                for s in alphabet.symbols() {
                    let x = w.pushed(s);
                    if !ends_badly(&x) {
                        next.push(x);
                    }
                }
            }
            words = next;
        }
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = Vec::new();
        for (u, w) in words.iter().enumerate() {
            for s in alphabet.symbols() {
                let glued = w.pushed(s);
                if ends_badly(&glued) {
                    continue;
                }
                if let Some(&v) = index.get(&glued.suffix(r)) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_parts(alphabet, r, words, edges)
    }

    /// The SFT whose allowed `n`-blocks are `L(X, n)`, in `max(n-1, 1)`-block
    /// form. It contains `X`.
    pub fn from_language(lang: &dyn Language, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        let alphabet = lang.alphabet();
        if n == 1 {
            let words: Vec<Word> = lang.words(1).into_iter().collect();
            let m = words.len();
            let edges = (0..m).flat_map(|u| (0..m).map(move |v| (u, v))).collect();
            return Self::from_parts(alphabet, 1, words, edges);
        }
        let states: Vec<Word> = lang.words(n - 1).into_iter().collect();
        let index: HashMap<&Word, usize> = states.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = Vec::new();
        for x in lang.words(n) {
            if let (Some(&u), Some(&v)) = (index.get(&x.prefix(n - 1)), index.get(&x.suffix(n - 1))) {
                edges.push((u, v));
            }
        }
        Self::from_parts(alphabet, n - 1, states, edges)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn block_len(&self) -> usize {
        self.block
    }

    pub fn num_states(&self) -> usize {
        self.words.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, state: usize) -> &Word {
        &self.words[state]
    }

    pub fn state_words(&self) -> &[Word] {
        &self.words
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// First state carrying `word`, if any.
    pub fn find_state(&self, word: &Word) -> Option<usize> {
        let i = self.words.partition_point(|w| w < word);
        (i < self.words.len() && self.words[i] == *word).then_some(i)
    }

    /// One step of higher-block recoding: states become edges, with words
    /// one symbol longer.
    pub fn refine_once(&self) -> Self {
        let mut index = HashMap::new();
        let mut words = Vec::new();
        for (u, v) in self.edges() {
            index.insert((u, v), words.len());
            words.push(self.words[u].pushed(self.words[v].last().expect("nonempty word")));
        }
        let mut succ = vec![Vec::new(); words.len()];
        for (u, v) in self.edges() {
            let from = index[&(u, v)];
            for &x in &self.succ[v] {
                succ[from].push(index[&(v, x)]);
            }
        }
        let keep: Vec<usize> = (0..words.len()).collect();
        Self::build(self.alphabet, self.block + 1, &words, &succ, &keep)
    }

    /// Recodes until the block length is at least `block`.
    pub fn higher_block(&self, block: usize) -> Self {
        let mut out = self.clone();
        while out.block < block {
            out = out.refine_once();
        }
        out
    }

    /// The sub-shift on the given states, trimmed.
    pub fn restrict(&self, states: &[usize]) -> Self {
        let mut inside = vec![false; self.num_states()];
        for &s in states {
            inside[s] = true;
        }
        let succ: Vec<Vec<usize>> = self
            .succ
            .iter()
            .enumerate()
            .map(|(u, s)| {
                if inside[u] {
                    s.iter().copied().filter(|&v| inside[v]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let keep = graph::essential_vertices(&succ);
        Self::build(self.alphabet, self.block, &self.words, &succ, &keep)
    }

    pub fn transitive_components(&self) -> Vec<TransitiveComponent> {
        let mut comps: Vec<TransitiveComponent> = graph::strongly_connected_components(&self.succ)
            .into_iter()
            .filter(|c| graph::has_cycle(c, &self.succ))
            .map(|states| TransitiveComponent { states })
            .collect();
        comps.sort_by_key(|c| c.states[0]);
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        let comps = self.transitive_components();
        comps.len() == 1 && comps[0].states.len() == self.num_states()
    }

    /// Whether the periodic point `w^∞` is the label of a bi-infinite path.
    pub fn has_periodic_point(&self, w: &Word) -> bool {
        if w.is_empty() {
            return false;
        }
        let p = w.len();
        let n = self.num_states();
        // product with the cycle of positions in w
        let id = |s: usize, i: usize| s * p + i;
        let mut succ = vec![Vec::new(); n * p];
        for u in 0..n {
            for i in 0..p {
                if self.words[u].first() != Some(w.symbols()[i]) {
                    continue;
                }
                let j = (i + 1) % p;
                for &v in &self.succ[u] {
                    if self.words[v].first() == Some(w.symbols()[j]) {
                        succ[id(u, i)].push(id(v, j));
                    }
                }
            }
        }
        !graph::essential_vertices(&succ).is_empty()
    }

    /// Number of state paths with `len` states (`len ≥ 1`).
    pub fn count_paths(&self, len: usize) -> u128 {
        if len == 0 {
            return 1;
        }
        let mut c = vec![1u128; self.num_states()];
        for _ in 1..len {
            c = (0..self.num_states())
                .map(|u| self.succ[u].iter().map(|&v| c[v]).sum())
                .collect();
        }
        c.iter().sum()
    }

    /// States reachable from `set` in one step whose words start with `symbol`.
    fn step(&self, set: &[usize], symbol: u8, mark: &mut [bool]) -> Vec<usize> {
        let mut out = Vec::new();
        for &u in set {
            for &v in &self.succ[u] {
                if !mark[v] && self.words[v].first() == Some(symbol) {
                    mark[v] = true;
                    out.push(v);
                }
            }
        }
        for &v in &out {
            mark[v] = false;
        }
        out.sort_unstable();
        out
    }

    fn initial(&self, symbol: u8) -> Vec<usize> {
        (0..self.num_states())
            .filter(|&u| self.words[u].first() == Some(symbol))
            .collect()
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

    /// Minimum-mean cycle for edge weights `weight(u, v)`, by Karp's
    /// recurrence. Ties go to the shortest cycle, then to the
    /// lexicographically least rotation by state order.
    pub fn min_mean_cycle(&self, weight: impl Fn(usize, usize) -> Rational) -> Result<MeanCycle> {
        if self.is_empty() || !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let n = self.num_states();
        let w: Vec<Vec<Rational>> = (0..n)
            .map(|u| self.succ[u].iter().map(|&v| weight(u, v)).collect())
            .collect();

        // d[k][v]: least weight of a k-edge walk from state 0 to v
        let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
        d[0][0] = Some(Rational::zero());
        for k in 0..n {
            let (cur, rest) = d.split_at_mut(k + 1);
            let (cur, next) = (&cur[k], &mut rest[0]);
            for u in 0..n {
                let Some(du) = &cur[u] else { continue };
                for (i, &v) in self.succ[u].iter().enumerate() {
                    let c = du + &w[u][i];
                    if next[v].as_ref().is_none_or(|x| c < *x) {
                        next[v] = Some(c);
                    }
                }
            }
        }
        let mut mean: Option<Rational> = None;
        for v in 0..n {
            let Some(dn) = &d[n][v] else { continue };
            let worst = (0..n)
                .filter_map(|k| {
                    d[k][v]
                        .as_ref()
                        .map(|dk| (dn - dk) / Rational::from_integer(((n - k) as i64).into()))
                })
                .max();
            if let Some(worst) = worst {
                if mean.as_ref().is_none_or(|m| worst < *m) {
                    mean = Some(worst);
                }
            }
        }
        let mean = mean.expect("strongly connected graph has a cycle");

        // potentials for w - mean; every optimal cycle uses only tight edges
        let mut pot = vec![Rational::zero(); n];
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                for (i, &v) in self.succ[u].iter().enumerate() {
                    let c = &pot[u] + &w[u][i] - &mean;
                    if c < pot[v] {
                        pot[v] = c;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let tight: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                self.succ[u]
                    .iter()
                    .enumerate()
                    .filter(|&(i, &v)| &pot[u] + &w[u][i] - &mean == pot[v])
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();

        let cycle_len = |s: usize| graph::shortest_path(&tight, s, |v| v == s, |_| true).map(|p| p.len() - 1);
        let lens: Vec<Option<usize>> = (0..n).map(cycle_len).collect();
        let best_len = lens.iter().flatten().copied().min().expect("an optimal cycle exists");

        let mut pred = vec![Vec::new(); n];
        for (u, s) in tight.iter().enumerate() {
            for &v in s {
                pred[v].push(u);
            }
        }
        let mut best: Option<Vec<usize>> = None;
        for s in 0..n {
            if lens[s] != Some(best_len) {
                continue;
            }
            // distances to s inside the tight graph
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &pred[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            let mut cycle = vec![s];
            let mut cur = s;
            for i in 0..best_len {
                let left = best_len - 1 - i;
                let next = tight[cur]
                    .iter()
                    .copied()
                    .find(|&v| if left == 0 { v == s } else { v != s && dist[v] == left })
                    .expect("greedy step follows an existing cycle");
                if left > 0 {
                    cycle.push(next);
                }
                cur = next;
            }
            let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).expect("nonempty");
            cycle.rotate_left(start);
            if best.as_ref().is_none_or(|b| cycle < *b) {
                best = Some(cycle);
            }
        }
        Ok(MeanCycle {
            states: best.expect("an optimal cycle exists"),
            mean,
        })
    }

    /// Emitted word along a closed state cycle.
    pub fn cycle_word(&self, cycle: &[usize]) -> Word {
        Word::new(cycle.iter().map(|&s| self.words[s].symbols()[0]).collect())
    }
}

impl Language for VertexShift {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn words(&self, len: usize) -> WordSet {
        let mut out = WordSet::new();
        if self.is_empty() {
            return out;
        }
        if len == 0 {
            out.insert(Word::empty());
            return out;
        }
        let mut mark = vec![false; self.num_states()];
        let mut prefix = Vec::with_capacity(len);
        for a in self.alphabet.symbols() {
            let set = self.initial(a);
            if !set.is_empty() {
                prefix.push(a);
                self.walk(&mut prefix, &set, len, &mut mark, &mut out);
                prefix.pop();
            }
        }
        out
    }

    fn is_admissible(&self, word: &Word) -> bool {
        if self.is_empty() {
            return false;
        }
        let Some(first) = word.first() else {
            return true;
        };
        let mut mark = vec![false; self.num_states()];
        let mut set = self.initial(first);
        for &a in &word.symbols()[1..] {
            if set.is_empty() {
                return false;
            }
            set = self.step(&set, a, &mut mark);
        }
        !set.is_empty()
    }
}

/// `L(X_V, len)`.
pub fn enumerate_language(v: &VertexShift, len: usize) -> WordSet {
    v.words(len)
}

/// A maximal strongly connected set of states carrying at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveComponent {
    states: Vec<usize>,
}

impl TransitiveComponent {
    /// States in increasing order.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// True when the component is a single cycle (entropy zero).
    pub fn is_simple_cycle(&self, v: &VertexShift) -> bool {
        let inside: HashSet<usize> = self.states.iter().copied().collect();
        self.states
            .iter()
            .all(|&u| v.successors(u).iter().filter(|x| inside.contains(x)).count() == 1)
    }
}

/// Result of [`VertexShift::min_mean_cycle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanCycle {
    /// The cycle as a state sequence, first state not repeated at the end.
    pub states: Vec<usize>,
    pub mean: Rational,
}
