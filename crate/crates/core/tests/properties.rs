use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use symdyn_core::enclosure::{exp_enclosure, log_enclosure};
use symdyn_core::families::{
    beta_expansion, beta_shift, generalized_gap_shift, powers_shift, s_gap_shift, BetaShift,
};
use symdyn_core::language::check_language;
use symdyn_core::pressure::{entropy_upper_trace, partition_exponents};
use symdyn_core::rational::{pow2, ratio};
use symdyn_core::sofic::sofic_language;
use symdyn_core::word::w;
use symdyn_core::*;

fn golden() -> VertexShift {
    VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("11")]).unwrap()
}

fn shipped_sfts() -> Vec<(&'static str, VertexShift)> {
    vec![
        ("golden", golden()),
        ("full2", VertexShift::sft_from_forbidden(Alphabet::binary(), &[]).unwrap()),
        ("no111", VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("111")]).unwrap()),
        (
            "ternary",
            VertexShift::sft_from_forbidden(Alphabet::new(3).unwrap(), &[w("00"), w("12")]).unwrap(),
        ),
    ]
}

fn even_shift() -> LabeledGraph {
    let e = |a: &str, b: &str, s| (a.to_string(), b.to_string(), s);
    LabeledGraph::from_named_edges(Alphabet::binary(), &[e("a", "a", 0), e("a", "b", 1), e("b", "a", 1)]).unwrap()
}

fn beta32() -> CodedShift {
    match beta_shift(BetaNumber::rational(ratio(3, 2)).unwrap(), false).unwrap() {
        BetaShift::Coded(c) => c,
        BetaShift::Sofic(_) => panic!("3/2 has an aperiodic expansion"),
    }
}

fn shipped_coded() -> Vec<(&'static str, CodedShift)> {
    vec![
        ("sgap-evens", s_gap_shift(SSet::evens()).unwrap()),
        ("sgap-explicit", s_gap_shift(SSet::explicit(vec![1, 3, 4]).unwrap()).unwrap()),
        (
            "ggap",
            generalized_gap_shift(
                vec![SSet::explicit(vec![0, 1]).unwrap(), SSet::evens()],
                vec![vec![0, 1], vec![1, 0]],
            )
            .unwrap(),
        ),
        ("beta32", beta32()),
        ("powers", powers_shift(Alphabet::binary(), w("000"), w("1")).unwrap()),
    ]
}

fn shipped_languages() -> Vec<(&'static str, Arc<dyn Language>)> {
    let mut out: Vec<(&'static str, Arc<dyn Language>)> = Vec::new();
    for (name, v) in shipped_sfts() {
        out.push((name, Arc::new(v)));
    }
    out.push(("even", Arc::new(even_shift())));
    let golden_beta = BetaNumber::parse("algebraic x^2-x-1 [1.6,1.7]").unwrap();
    match beta_shift(golden_beta, false).unwrap() {
        BetaShift::Sofic(g) => out.push(("beta-golden", Arc::new(g))),
        BetaShift::Coded(_) => panic!("golden mean expansion terminates"),
    }
    for (name, c) in shipped_coded() {
        out.push((name, c.language().clone()));
    }
    out
}

fn potential(radius: usize, alphabet: Alphabet, values: &[i64]) -> LocallyConstantPotential {
    let table: BTreeMap<Word, Rational> = alphabet
        .all_words(2 * radius + 1)
        .into_iter()
        .zip(values.iter().map(|&v| ratio(v, 8)))
        .collect();
    LocallyConstantPotential::new(radius, table, Rational::zero()).unwrap()
}

fn potential_strategy(alphabet: Alphabet) -> impl Strategy<Value = LocallyConstantPotential> {
    (0usize..=1).prop_flat_map(move |r| {
        let n = alphabet.size().pow(2 * r as u32 + 1);
        prop::collection::vec(-16i64..=16, n).prop_map(move |v| potential(r, alphabet, &v))
    })
}

// --- Perron enclosure against exact matrix powers -------------------------

fn row_sum_range(a: &[Vec<i64>], k: u32) -> (BigInt, BigInt) {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut p = big.clone();
    for _ in 1..k {
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|l| &p[i][l] * &big[l][j]).sum()).collect())
            .collect();
    }
    let sums: Vec<BigInt> = p.iter().map(|r| r.iter().sum()).collect();
    (sums.iter().min().unwrap().clone(), sums.iter().max().unwrap().clone())
}

fn matrix3() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=3, 3), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // ρ^k lies between the least and largest row sums of A^k.
    #[test]
    fn perron_matches_exact_powers(a in matrix3()) {
        let m = WeightedMatrix::from_integers(&a).unwrap();
        prop_assume!(m.is_irreducible());
        let e = perron_enclosure(&m, 20, 200_000).unwrap();
        prop_assert!(e.converged);
        prop_assert!(e.interval.width() <= pow2(-20));
        let k = 32;
        let (lo_sum, hi_sum) = row_sum_range(&a, k);
        let lo_k: Rational = num_traits::pow(e.interval.lo().clone(), k as usize);
        let hi_k: Rational = num_traits::pow(e.interval.hi().clone(), k as usize);
        prop_assert!(lo_k <= Rational::from_integer(hi_sum));
        prop_assert!(hi_k >= Rational::from_integer(lo_sum));
    }

    #[test]
    fn perron_is_monotone(a in matrix3(), extra in matrix3()) {
        let b: Vec<Vec<i64>> = a.iter().zip(&extra).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect();
        let (ma, mb) = (WeightedMatrix::from_integers(&a).unwrap(), WeightedMatrix::from_integers(&b).unwrap());
        prop_assume!(ma.is_irreducible());
        let ea = perron_enclosure(&ma, 16, 200_000).unwrap();
        let eb = perron_enclosure(&mb, 16, 200_000).unwrap();
        prop_assert!(ea.interval.lo() <= eb.interval.hi());
    }
}

// --- pressure invariants on the shipped SFTs -------------------------------

fn sft_and_potentials() -> impl Strategy<Value = (usize, LocallyConstantPotential, LocallyConstantPotential, i64)> {
    let n = shipped_sfts().len();
    (0..n).prop_flat_map(|i| {
        let a = shipped_sfts()[i].1.alphabet();
        (Just(i), potential_strategy(a), potential_strategy(a), -32i64..=32)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn translation_and_lipschitz((i, phi, psi, c) in sft_and_potentials()) {
        let (name, v) = &shipped_sfts()[i];
        let p = 16;
        let c = ratio(c, 4);
        let base = sft_pressure(v, &phi, p).unwrap();
        let moved = sft_pressure(v, &phi.translate(&c), p).unwrap();
        prop_assert!(base.width() <= pow2(-(p as i64)), "{}", name);
        let shifted = base.shift(&c);
        prop_assert!(shifted.lo() <= moved.hi() && moved.lo() <= shifted.hi(), "{}: translation", name);

        let other = sft_pressure(v, &psi, p).unwrap();
        let d = phi.sup_distance(&psi, v.alphabet());
        prop_assert!(base.lo() <= &(other.hi() + &d), "{}: lipschitz", name);
        prop_assert!(other.lo() <= &(base.hi() + &d), "{}: lipschitz", name);
    }
}

// --- submultiplicativity of Z_n -------------------------------------------

fn partition_interval(lang: &dyn Language, phi: &LocallyConstantPotential, n: usize) -> RationalInterval {
    let mut z = RationalInterval::zero();
    for (x, count) in partition_exponents(lang, phi, n) {
        z = z.add(&exp_enclosure(&x, 40).scale(&Rational::from_integer(count.into())));
    }
    z
}

#[test]
fn word_counts_are_submultiplicative() {
    for (name, lang) in shipped_languages() {
        let counts: Vec<u128> = (0..=12).map(|l| lang.count(l) as u128).collect();
        for n in 1..12 {
            for m in 1..=12 - n {
                assert!(counts[n + m] <= counts[n] * counts[m], "{name}: n = {n}, m = {m}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn partition_functions_are_submultiplicative(values in prop::collection::vec(-16i64..=16, 2)) {
        let phi = potential(0, Alphabet::binary(), &values);
        for (name, lang) in shipped_languages() {
            if lang.alphabet() != Alphabet::binary() {
                continue;
            }
            let z: Vec<RationalInterval> = (0..=12).map(|n| partition_interval(lang.as_ref(), &phi, n)).collect();
            for n in 1..12 {
                for m in 1..=12 - n {
                    let bound = z[n].mul_nonneg(&z[m]);
                    prop_assert!(z[n + m].lo() <= bound.hi(), "{}: n = {}, m = {}", name, n, m);
                }
            }
        }
    }
}

// --- minimum-mean cycles against brute force -------------------------------

fn simple_cycles(v: &VertexShift) -> Vec<Vec<usize>> {
    fn go(v: &VertexShift, start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for &s in v.successors(last) {
            if s == start {
                out.push(path.clone());
            } else if s > start && !path.contains(&s) {
                path.push(s);
                go(v, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..v.num_states() {
        go(v, start, &mut vec![start], &mut out);
    }
    out
}

fn graph_strategy() -> impl Strategy<Value = (usize, Vec<bool>, Vec<i64>)> {
    (2usize..=5).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(prop::bool::weighted(0.45), n * n),
            prop::collection::vec(-8i64..=8, n * n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_mean_cycle_matches_enumeration((n, adj, wts) in graph_strategy()) {
        let alphabet = Alphabet::new(n).unwrap();
        let words: Vec<Word> = (0..n as u8).map(|s| Word::new(vec![s])).collect();
        let edges: Vec<(usize, usize)> = (0..n * n).filter(|&k| adj[k]).map(|k| (k / n, k % n)).collect();
        let v = VertexShift::from_parts(alphabet, 1, words, edges).unwrap();
        prop_assume!(!v.is_empty() && v.is_strongly_connected());
        let weight = |a: usize, b: usize| {
            let (x, y) = (v.word(a).symbols()[0] as usize, v.word(b).symbols()[0] as usize);
            ratio(wts[x * n + y], 1)
        };
        let mean = |c: &[usize]| -> Rational {
            let total: Rational = (0..c.len()).map(|i| weight(c[i], c[(i + 1) % c.len()])).sum();
            total / Rational::from_integer((c.len() as i64).into())
        };
        let best = simple_cycles(&v).iter().map(|c| mean(c)).min().unwrap();
        let got = v.min_mean_cycle(weight).unwrap();
        prop_assert_eq!(&got.mean, &best);
        prop_assert_eq!(mean(&got.states), best);
        for i in 0..got.states.len() {
            prop_assert!(v.has_edge(got.states[i], got.states[(i + 1) % got.states.len()]));
        }
    }
}

// --- Sardinas–Patterson against factorization counting ---------------------

/// Length of the shortest word with two factorizations, searched up to `max`.
fn shortest_ambiguity(code: &[Word], max: usize) -> Option<usize> {
    let mut levels: Vec<HashMap<Word, Vec<usize>>> = vec![HashMap::new(); max + 1];
    levels[0].insert(Word::empty(), Vec::new());
    for len in 1..=max {
        let mut here: HashMap<Word, Vec<usize>> = HashMap::new();
        for (ci, c) in code.iter().enumerate() {
            if c.len() > len {
                continue;
            }
            for (s, fac) in &levels[len - c.len()] {
                let t = s.concat(c);
                let mut f = fac.clone();
                f.push(ci);
                match here.get(&t) {
                    Some(g) if *g != f => return Some(len),
                    Some(_) => {}
                    None => {
                        here.insert(t, f);
                    }
                }
            }
        }
        levels[len] = here;
    }
    None
}

fn binary_codes(budget: usize) -> Vec<Vec<Word>> {
    let words: Vec<Word> = (1..=budget).flat_map(|l| Alphabet::binary().all_words(l)).collect();
    fn go(words: &[Word], from: usize, left: usize, cur: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in from..words.len() {
            if words[i].len() <= left {
                cur.push(words[i].clone());
                go(words, i + 1, left - words[i].len(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&words, 0, budget, &mut Vec::new(), &mut out);
    out
}

#[test]
fn sardinas_patterson_matches_brute_force() {
    let codes = binary_codes(8);
    assert!(codes.len() > 1000);
    for code in &codes {
        let sp = sardinas_patterson(code).unwrap();
        match &sp.witness {
            Some(a) => {
                assert!(!sp.uniquely_decipherable);
                assert_ne!(a.left, a.right);
                for side in [&a.left, &a.right] {
                    assert!(side.iter().all(|x| code.contains(x)));
                    let joined = side.iter().fold(Word::empty(), |acc, x| acc.concat(x));
                    assert_eq!(joined, a.word);
                }
                assert_eq!(shortest_ambiguity(code, a.word.len()), Some(a.word.len()), "{code:?}");
            }
            None => {
                assert!(sp.uniquely_decipherable);
                assert_eq!(shortest_ambiguity(code, 16), None, "{code:?}");
            }
        }
    }
}

// --- language oracles and Sofic approximations -----------------------------

#[test]
fn shipped_languages_are_factor_closed_and_extendable() {
    for (name, lang) in shipped_languages() {
        let bad = check_language(lang.as_ref(), 8);
        assert!(bad.is_empty(), "{name}: {:?}", &bad[..bad.len().min(3)]);
    }
}

#[test]
fn sofic_approximations_are_nested() {
    for (name, c) in shipped_coded() {
        let xs: Vec<LabeledGraph> = (1..=5).map(|m| sofic_approximation(&c, m).unwrap()).collect();
        for len in 1..=6 {
            let full = c.words(len);
            for m in 0..4 {
                let (a, b) = (sofic_language(&xs[m], len), sofic_language(&xs[m + 1], len));
                assert!(a.is_subset(&b), "{name}: X_{} vs X_{}, ℓ = {len}", m + 1, m + 2);
                assert!(b.is_subset(&full), "{name}: X_{} vs X, ℓ = {len}", m + 2);
            }
        }
    }
}

// --- coded driver ---------------------------------------------------------

fn log_golden_mean(p: u32) -> RationalInterval {
    // bisection on x² = x + 1 to 60 bits, then a certified logarithm
    let (mut lo, mut hi) = (ratio(1, 1), ratio(2, 1));
    for _ in 0..60 {
        let mid = (&lo + &hi) / ratio(2, 1);
        if &mid * &mid - &mid - Rational::one() < Rational::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    log_enclosure(&lo, p).unwrap().hull(&log_enclosure(&hi, p).unwrap())
}

fn overlaps(a: &RationalInterval, b: &RationalInterval) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

#[test]
fn driver_traces_are_monotone_and_sound() {
    let zero = PotentialOracle::exact(LocallyConstantPotential::zero());
    let cases: Vec<(&str, CodedShift, u32, DriverBudget, Option<RationalInterval>)> = vec![
        ("sgap-evens", s_gap_shift(SSet::evens()).unwrap(), 8, DriverBudget::new(16, 48), Some(log_golden_mean(30))),
        ("beta32", beta32(), 5, DriverBudget::new(14, 32), Some(log_enclosure(&ratio(3, 2), 30).unwrap())),
        ("powers", powers_shift(Alphabet::binary(), w("000"), w("1")).unwrap(), 6, DriverBudget::new(12, 6), None),
    ];
    for (name, c, p, budget, truth) in cases {
        let e = coded_pressure(&c, &zero, p, budget).unwrap();
        assert!(e.traces_are_consistent(), "{name}");
        if let Some(t) = truth {
            assert!(overlaps(&e.interval, &t), "{name}: {:?} misses {:?}", e.interval, t);
        }
        // upper bounds never exceed the counting bound for the same n
        let counting = entropy_upper_trace(c.language().as_ref(), budget.max_upper, p + 8).unwrap();
        for u in &e.upper_trace {
            let slack = pow2(-(p as i64) - 4);
            assert!(u.bound.lo() <= &(counting[u.index - 1].hi() + &slack), "{name}: n = {}", u.index);
        }
    }
}

#[test]
fn finite_s_gap_matches_its_bouquet() {
    let s = SSet::explicit(vec![1, 3]).unwrap();
    let c = s_gap_shift(s).unwrap();
    let phi = LocallyConstantPotential::symbol_indicator(1);
    let e = coded_pressure(&c, &PotentialOracle::exact(phi.clone()), 12, DriverBudget::new(20, 8)).unwrap();
    assert_eq!(e.status, Status::Converged);
    let exact = sofic_pressure(&bouquet(Alphabet::binary(), &[w("01"), w("0001")]).unwrap(), &phi, 16).unwrap();
    assert!(overlaps(&e.interval, &exact));
}

// --- beta expansions --------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // 0 ≤ 1 − Σ_{j≤ℓ} b_j β^{-j} < β^{-ℓ}, and every shift of the digit
    // string is lexicographically at most the string itself.
    #[test]
    fn beta_digits_are_greedy(num in 11i64..=60, den in 2i64..=10) {
        prop_assume!(num > den);
        let beta = ratio(num, den);
        let d = beta_expansion(&BetaNumber::rational(beta.clone()).unwrap(), 24).unwrap();
        let mut rest = Rational::one();
        let mut scale = Rational::one();
        for &b in &d {
            scale /= &beta;
            rest -= Rational::from_integer(BigInt::from(b)) * &scale;
            prop_assert!(rest >= Rational::zero() && rest < scale);
        }
        for k in 1..d.len() {
            prop_assert!(d[k..] <= d[..d.len() - k]);
        }
    }
}

// --- witnesses ---------------------------------------------------------------

#[test]
fn witnesses_keep_the_language_and_have_zero_entropy() {
    let eps = ratio(1, 16);
    for (name, v) in shipped_sfts() {
        let phi = LocallyConstantPotential::zero();
        let x = sft_pressure(&v, &phi, 20).unwrap();
        for n in 1..=3 {
            let blocks = VertexShift::from_language(&v, n).unwrap();
            let cfg = WitnessConfig {
                n,
                epsilon: eps.clone(),
                marks: None,
                precision: 20,
            };
            let r = build_witness(&blocks, &phi, &x, &cfg).unwrap();
            assert!(r.language_agrees, "{name}, n = {n}");
            assert!(r.entropy.contains(&Rational::zero()), "{name}, n = {n}");
            assert!(r.entropy.width() <= pow2(-20));
        }
    }
}
