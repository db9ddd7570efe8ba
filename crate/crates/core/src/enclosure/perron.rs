//! Perron-root enclosures for nonnegative matrices with interval entries.
//!
//! For any positive vector `v`, `min_i (Mv)_i / v_i ≤ λ(M) ≤ max_i (Mv)_i / v_i`
//! (Collatz–Wielandt). The bounds are evaluated exactly; power iteration only
//! steers `v`, so the iteration itself may round freely. The lower bound is
//! taken on the entrywise-lower matrix and the upper bound on the upper one,
//! which is sound because `λ` is monotone in nonnegative entries.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::RationalInterval;
use crate::error::{Error, Result};
use crate::graph;
use crate::rational::{ceil_scaled, floor_log2, floor_scaled, pow2, Rational};

/// Square nonnegative matrix with [`RationalInterval`] entries, stored sparsely.
#[derive(Debug, Clone)]
pub struct WeightedMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, RationalInterval)>>,
    irreducible: bool,
}

impl WeightedMatrix {
    /// Builds from `(row, col, entry)` triples; absent entries are zero.
    pub fn new(dim: usize, entries: Vec<(usize, usize, RationalInterval)>) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, RationalInterval)>> = vec![Vec::new(); dim];
        for (i, j, x) in entries {
            if i >= dim || j >= dim {
                return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) outside {dim}×{dim}")));
            }
            if x.lo().is_negative() {
                return Err(Error::InvalidMatrix(format!("negative entry at ({i}, {j})")));
            }
            if x.hi().is_zero() {
                continue;
            }
            if rows[i].iter().any(|(c, _)| *c == j) {
                return Err(Error::InvalidMatrix(format!("duplicate entry ({i}, {j})")));
            }
            rows[i].push((j, x));
        }
        for r in &mut rows {
            r.sort_by_key(|(c, _)| *c);
        }
        let succ: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|(c, _)| *c).collect()).collect();
        let comps = graph::strongly_connected_components(&succ);
        let irreducible = dim > 0 && comps.len() == 1 && graph::has_cycle(&comps[0], &succ);
        Ok(Self {
            dim,
            rows,
            irreducible,
        })
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::InvalidMatrix("matrix is not square".into()));
            }
            for (j, x) in r.iter().enumerate() {
                entries.push((i, j, RationalInterval::point(x.clone())));
            }
        }
        Self::new(dim, entries)
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_dense(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Strong connectivity of the support `{(i, j) : hi_ij > 0}`.
    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, i: usize) -> &[(usize, RationalInterval)] {
        &self.rows[i]
    }
}

/// Result of [`perron_enclosure`].
#[derive(Debug, Clone)]
pub struct PerronEnclosure {
    pub interval: RationalInterval,
    /// False when the iteration budget ran out before the target width.
    pub converged: bool,
    pub iterations: usize,
}

/// `num / den` with `den > 0`, compared by cross-multiplication.
#[derive(Clone)]
struct Ratio {
    num: BigInt,
    den: BigInt,
}

impl Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), self.den.clone())
    }
}

/// Enclosure of the spectral radius of an irreducible nonnegative matrix,
/// of width `≤ 2^-p` unless `budget` power-iteration steps do not suffice.
pub fn perron_enclosure(m: &WeightedMatrix, p: u32, budget: usize) -> Result<PerronEnclosure> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !m.is_irreducible() {
        return Err(Error::Reducible);
    }
    let dim = m.dim();
    let dim_bits = usize::BITS - dim.leading_zeros();
    // smallest positive upper entry fixes how fine the entry grid must be
    let min_hi = m
        .rows
        .iter()
        .flatten()
        .map(|(_, x)| x.hi())
        .min()
        .expect("nonzero matrix");
    let tiny = (-floor_log2(min_hi)).max(0) as u32;
    let frac = p + 32 + dim_bits + tiny;
    let vbits = (p + 32 + dim_bits) as u64;

    // outward-rounded integer entries on the grid 2^-frac
    let rows: Vec<Vec<(usize, BigInt, BigInt)>> = m
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(j, x)| (*j, floor_scaled(x.lo(), frac), ceil_scaled(x.hi(), frac)))
                .collect()
        })
        .collect();

    // shift by a power of two near λ so that periodic matrices still converge
    let max_row_hi = m
        .rows
        .iter()
        .map(|r| r.iter().fold(Rational::zero(), |acc, (_, x)| acc + x.hi()))
        .max()
        .expect("nonempty");
    let shift = ceil_scaled(&pow2(floor_log2(&max_row_hi)), frac);

    let target = pow2(-(p as i64));
    let mut v: Vec<BigInt> = vec![BigInt::one() << vbits as usize; dim];
    let mut best_lo: Option<Ratio> = None;
    let mut best_hi: Option<Ratio> = None;
    let scale = BigInt::one() << frac as usize;
    let mut iterations = 0;
    loop {
        let mut lo_v = Vec::with_capacity(dim);
        let mut hi_v = Vec::with_capacity(dim);
        for r in &rows {
            let mut a = BigInt::zero();
            let mut b = BigInt::zero();
            for (j, lo, hi) in r {
                a += lo * &v[*j];
                b += hi * &v[*j];
            }
            lo_v.push(a);
            hi_v.push(b);
        }
        let mut cw_lo: Option<Ratio> = None;
        let mut cw_hi: Option<Ratio> = None;
        for i in 0..dim {
            let den = &v[i] * &scale;
            let l = Ratio {
                num: lo_v[i].clone(),
                den: den.clone(),
            };
            let h = Ratio {
                num: hi_v[i].clone(),
                den,
            };
            if cw_lo.as_ref().is_none_or(|c| l.cmp(c) == Ordering::Less) {
                cw_lo = Some(l);
            }
            if cw_hi.as_ref().is_none_or(|c| h.cmp(c) == Ordering::Greater) {
                cw_hi = Some(h);
            }
        }
        let (cw_lo, cw_hi) = (cw_lo.expect("dim > 0"), cw_hi.expect("dim > 0"));
        if best_lo.as_ref().is_none_or(|b| cw_lo.cmp(b) == Ordering::Greater) {
            best_lo = Some(cw_lo);
        }
        if best_hi.as_ref().is_none_or(|b| cw_hi.cmp(b) == Ordering::Less) {
            best_hi = Some(cw_hi);
        }
        let lo = best_lo.as_ref().expect("set").to_rational();
        let hi = best_hi.as_ref().expect("set").to_rational();
        let converged = &hi - &lo <= target;
        if converged || iterations >= budget {
            return Ok(PerronEnclosure {
                interval: RationalInterval::from_sorted(lo, hi),
                converged,
                iterations,
            });
        }
        // v ← normalize((M_hi + shift·I) v)
        let w: Vec<BigInt> = hi_v
            .into_iter()
            .zip(&v)
            .map(|(mv, vi)| mv + &shift * vi)
            .collect();
        let top = w.iter().map(BigInt::bits).max().unwrap_or(0);
        let drop = top.saturating_sub(vbits) as usize;
        v = w
            .into_iter()
            .map(|x| {
                let y = x >> drop;
                if y.is_zero() {
                    BigInt::one()
                } else {
                    y
                }
            })
            .collect();
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse_rational};

    fn golden() -> Rational {
        // (1+√5)/2 to 40 digits
        parse_rational("1.6180339887498948482045868343656381177203").unwrap()
    }

    #[test]
    fn one_by_one() {
        let m = WeightedMatrix::from_integers(&[vec![2]]).unwrap();
        let e = perron_enclosure(&m, 30, 100).unwrap();
        assert_eq!(e.interval, RationalInterval::point(int(2)));
        assert!(e.converged);
    }

    #[test]
    fn golden_mean_adjacency() {
        // bisection oracle on x² − x − 1 over [1, 2], 60 steps
        let (mut a, mut b) = (int(1), int(2));
        for _ in 0..60 {
            let mid = (&a + &b) / int(2);
            if &mid * &mid - &mid - int(1) > int(0) {
                b = mid;
            } else {
                a = mid;
            }
        }
        let m = WeightedMatrix::from_integers(&[vec![1, 1], vec![1, 0]]).unwrap();
        let e = perron_enclosure(&m, 20, 10_000).unwrap();
        assert!(e.converged);
        assert!(e.interval.width() <= pow2(-20));
        assert!(e.interval.lo() <= &b && &a <= e.interval.hi());
        assert!(e.interval.contains(&golden()) || (e.interval.hi() - golden()).abs() < pow2(-100));
    }

    #[test]
    fn periodic_permutation() {
        let m = WeightedMatrix::from_integers(&[vec![0, 1], vec![1, 0]]).unwrap();
        let e = perron_enclosure(&m, 10, 100).unwrap();
        assert!(e.interval.contains(&int(1)));
        assert!(e.converged);
    }

    #[test]
    fn errors() {
        let z = WeightedMatrix::from_integers(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(perron_enclosure(&z, 10, 10).unwrap_err(), Error::ZeroMatrix);
        let r = WeightedMatrix::from_integers(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(perron_enclosure(&r, 10, 10).unwrap_err(), Error::Reducible);
        assert!(WeightedMatrix::from_integers(&[vec![-1]]).is_err());
    }

    #[test]
    fn budget_exhaustion_keeps_a_valid_interval() {
        let m = WeightedMatrix::from_integers(&[vec![1, 1], vec![1, 0]]).unwrap();
        let e = perron_enclosure(&m, 60, 1).unwrap();
        assert!(!e.converged);
        assert!(e.interval.lo() <= &golden() && &golden() <= e.interval.hi());
    }
}
