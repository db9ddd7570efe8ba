//! Shift specification files.
//!
//! ```text
//! alphabet 2
//! sft
//! forbidden: 11
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use symdyn_core::families::{
    beta_shift, generalized_gap_shift, powers_shift, s_gap_shift, BetaNumber, BetaShift, SSet,
};
use symdyn_core::{Alphabet, CodedShift, Error, LabeledGraph, Result, VertexShift, Word};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    SGap(SSet),
    GGap { sets: Vec<SSet>, perms: Perms },
    Beta { beta: BetaNumber, assert_fssp: bool },
    Powers { u: Word, v: Word },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perms {
    Identity,
    All,
    List(Vec<Vec<u8>>),
}

impl Perms {
    fn expand(&self, d: usize) -> Vec<Vec<u8>> {
        match self {
            Perms::Identity => vec![(0..d as u8).collect()],
            Perms::All => {
                let mut out = Vec::new();
                let mut cur: Vec<u8> = (0..d as u8).collect();
                permutations(&mut cur, 0, &mut out);
                out.sort();
                out
            }
            Perms::List(l) => l.clone(),
        }
    }
}

fn permutations(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftKind {
    Sft { forbidden: Vec<Word> },
    Sofic { edges: Vec<(String, String, u8)> },
    Coded { generators: Vec<Word> },
    Family(Family),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSpec {
    pub alphabet: Alphabet,
    pub kind: ShiftKind,
}

/// A built shift, ready for the engines.
#[derive(Debug, Clone)]
pub enum Shift {
    Sft(VertexShift),
    Sofic(LabeledGraph),
    Coded(CodedShift),
}

impl Shift {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Shift::Sft(v) => v.alphabet(),
            Shift::Sofic(g) => g.alphabet(),
            Shift::Coded(c) => c.alphabet(),
        }
    }

    pub fn language(&self) -> Arc<dyn symdyn_core::Language> {
        match self {
            Shift::Sft(v) => Arc::new(v.clone()),
            Shift::Sofic(g) => Arc::new(g.trimmed()),
            Shift::Coded(c) => Arc::new(c.clone()),
        }
    }
}

fn words(line: usize, alphabet: Alphabet, text: &str) -> Result<Vec<Word>> {
    text.split_whitespace()
        .map(|t| {
            let w: Word = t.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
            alphabet.check_word(&w).map_err(|e| Error::parse(line, e.to_string()))?;
            Ok(w)
        })
        .collect()
}

fn parse_set(text: &str) -> Result<SSet> {
    if text == "evens" {
        return Ok(SSet::evens());
    }
    if let Some(inner) = text.strip_prefix("arith(").and_then(|t| t.strip_suffix(')')) {
        let (a, d) = inner
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected arith(a,d), got `{text}`")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number in `{text}`")))
        };
        return SSet::arithmetic(num(a)?, num(d)?);
    }
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidArgument(format!("expected (s1,s2,…), evens or arith(a,d), got `{text}`")))?;
    let values = inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number in `{text}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    SSet::explicit(values)
}

fn format_set(s: &SSet) -> String {
    match s {
        SSet::Arithmetic { start: 0, step: 2 } => "evens".into(),
        SSet::Arithmetic { start, step } => format!("arith({start},{step})"),
        SSet::Explicit(v) => format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn parse_family(text: &str) -> Result<Family> {
    let text = text.trim();
    let (name, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    match name {
        "sgap" => Ok(Family::SGap(SSet::parse(rest)?)),
        "ggap" => {
            let mut d = None;
            let mut sets: Vec<Option<SSet>> = Vec::new();
            let mut perms = Perms::Identity;
            for tok in rest.split_whitespace() {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{tok}`")))?;
                if k == "d" {
                    let n: usize = v.parse().map_err(|_| Error::InvalidArgument(format!("bad d `{v}`")))?;
                    d = Some(n);
                    sets.resize(n, None);
                } else if k == "perms" {
                    perms = match v {
                        "id" => Perms::Identity,
                        "all" => Perms::All,
                        _ => Perms::List(
                            v.split(',')
                                .map(|p| p.parse::<Word>().map(Word::into_symbols))
                                .collect::<Result<_>>()?,
                        ),
                    };
                } else if let Some(i) = k.strip_prefix('S').and_then(|i| i.parse::<usize>().ok()) {
                    let n = d.ok_or_else(|| Error::InvalidArgument("d= must come before the sets".into()))?;
                    if i >= n {
                        return Err(Error::InvalidArgument(format!("S{i} out of range for d={n}")));
                    }
                    sets[i] = Some(parse_set(v)?);
                } else {
                    return Err(Error::InvalidArgument(format!("unknown ggap key `{k}`")));
                }
            }
            let d = d.ok_or_else(|| Error::InvalidArgument("ggap needs d=".into()))?;
            let sets = sets
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| Error::InvalidArgument(format!("missing S{i}"))))
                .collect::<Result<Vec<_>>>()?;
            if d == 0 {
                return Err(Error::InvalidArgument("ggap needs d ≥ 1".into()));
            }
            Ok(Family::GGap { sets, perms })
        }
        "beta" => {
            let (body, assert_fssp) = match rest.strip_suffix("assert-fssp") {
                Some(b) => (b.trim(), true),
                None => (rest, false),
            };
            Ok(Family::Beta {
                beta: BetaNumber::parse(body)?,
                assert_fssp,
            })
        }
        "powers" => {
            let mut it = rest.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => Ok(Family::Powers {
                    u: u.parse()?,
                    v: v.parse()?,
                }),
                _ => Err(Error::InvalidArgument("expected `powers u v`".into())),
            }
        }
        _ => Err(Error::InvalidArgument(format!("unknown family `{name}`"))),
    }
}

fn format_family(f: &Family) -> String {
    match f {
        Family::SGap(s) => format!("sgap {s}"),
        Family::GGap { sets, perms } => {
            let mut s = format!("ggap d={}", sets.len());
            for (i, set) in sets.iter().enumerate() {
                let _ = write!(s, " S{i}={}", format_set(set));
            }
            let p = match perms {
                Perms::Identity => "id".to_string(),
                Perms::All => "all".to_string(),
                Perms::List(l) => l
                    .iter()
                    .map(|p| Word::new(p.clone()).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            };
            let _ = write!(s, " perms={p}");
            s
        }
        Family::Beta { beta, assert_fssp } => {
            format!("beta {beta}{}", if *assert_fssp { " assert-fssp" } else { "" })
        }
        Family::Powers { u, v } => format!("powers {u} {v}"),
    }
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key).and_then(|r| r.strip_prefix(':')).map(str::trim)
}

/// Parses a shift file. Blank lines and `#` comments are ignored.
pub fn parse_shift_spec(text: &str) -> Result<ShiftSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "expected `alphabet N`"))?;
    let size: usize = first
        .strip_prefix("alphabet")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(ln, "expected `alphabet N`"))?;
    let alphabet = Alphabet::new(size).map_err(|e| Error::parse(ln, e.to_string()))?;
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(ln + 1, "expected `sft`, `sofic` or `coded`"))?;
    let body: Vec<(usize, &str)> = lines.collect();
    let kind = match header {
        "sft" => {
            let mut forbidden = Vec::new();
            for &(ln, line) in &body {
                let rest = field(line, "forbidden").ok_or_else(|| Error::parse(ln, "expected `forbidden: w1 w2 …`"))?;
                forbidden.extend(words(ln, alphabet, rest)?);
            }
            ShiftKind::Sft { forbidden }
        }
        "sofic" => {
            let mut edges = Vec::new();
            for &(ln, line) in &body {
                let rest = field(line, "edge").ok_or_else(|| Error::parse(ln, "expected `edge: src dst label`"))?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [src, dst, label] = parts[..] else {
                    return Err(Error::parse(ln, "expected `edge: src dst label`"));
                };
                let label: u8 = label
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad label `{label}`")))?;
                if !alphabet.contains(label) {
                    return Err(Error::parse(ln, format!("symbol {label} out of alphabet of size {size}")));
                }
                edges.push((src.to_string(), dst.to_string(), label));
            }
            if edges.is_empty() {
                return Err(Error::parse(ln, "a sofic shift needs at least one edge"));
            }
            ShiftKind::Sofic { edges }
        }
        "coded" => {
            let [(ln, line)] = body[..] else {
                return Err(Error::parse(ln, "expected one `generators:` or `family:` line"));
            };
            if let Some(rest) = field(line, "generators") {
                let generators = words(ln, alphabet, rest)?;
                if generators.is_empty() {
                    return Err(Error::parse(ln, "no generators"));
                }
                ShiftKind::Coded { generators }
            } else if let Some(rest) = field(line, "family") {
                ShiftKind::Family(parse_family(rest).map_err(|e| Error::parse(ln, e.to_string()))?)
            } else {
                return Err(Error::parse(ln, "expected `generators:` or `family:`"));
            }
        }
        other => return Err(Error::parse(ln, format!("unknown stanza `{other}`"))),
    };
    Ok(ShiftSpec { alphabet, kind })
}

impl ShiftSpec {
    pub fn to_text(&self) -> String {
        let mut s = format!("alphabet {}\n", self.alphabet.size());
        match &self.kind {
            ShiftKind::Sft { forbidden } => {
                s.push_str("sft\nforbidden:");
                for w in forbidden {
                    let _ = write!(s, " {w}");
                }
                s.push('\n');
            }
            ShiftKind::Sofic { edges } => {
                s.push_str("sofic\n");
                for (a, b, l) in edges {
                    let _ = writeln!(s, "edge: {a} {b} {l}");
                }
            }
            ShiftKind::Coded { generators } => {
                s.push_str("coded\ngenerators:");
                for w in generators {
                    let _ = write!(s, " {w}");
                }
                s.push('\n');
            }
            ShiftKind::Family(f) => {
                let _ = writeln!(s, "coded\nfamily: {}", format_family(f));
            }
        }
        s
    }

    pub fn build(&self) -> Result<Shift> {
        let check = |found: Alphabet| {
            if found == self.alphabet {
                Ok(())
            } else {
                Err(Error::AlphabetMismatch {
                    left: self.alphabet.size(),
                    right: found.size(),
                })
            }
        };
        Ok(match &self.kind {
            ShiftKind::Sft { forbidden } => Shift::Sft(VertexShift::sft_from_forbidden(self.alphabet, forbidden)?),
            ShiftKind::Sofic { edges } => Shift::Sofic(LabeledGraph::from_named_edges(self.alphabet, edges)?),
            ShiftKind::Coded { generators } => {
                Shift::Coded(CodedShift::from_generators(self.alphabet, generators.clone())?)
            }
            ShiftKind::Family(f) => {
                let shift = match f {
                    Family::SGap(s) => Shift::Coded(s_gap_shift(s.clone())?),
                    Family::GGap { sets, perms } => {
                        Shift::Coded(generalized_gap_shift(sets.clone(), perms.expand(sets.len()))?)
                    }
                    Family::Beta { beta, assert_fssp } => match beta_shift(beta.clone(), *assert_fssp)? {
                        BetaShift::Sofic(g) => Shift::Sofic(g),
                        BetaShift::Coded(c) => Shift::Coded(c),
                    },
                    Family::Powers { u, v } => Shift::Coded(powers_shift(self.alphabet, u.clone(), v.clone())?),
                };
                check(shift.alphabet())?;
                shift
            }
        })
    }
}
