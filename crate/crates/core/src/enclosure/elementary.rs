//! Certified `exp` and `ln` on exact rationals.
//!
//! Both work on integers scaled by `2^W` and round every intermediate step
//! outward, so the returned interval always contains the true value. `W` is
//! raised until the requested width is met.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::RationalInterval;
use crate::error::{Error, Result};
use crate::rational::{ceil_scaled, floor_log2, floor_scaled, pow2, Rational};

fn unscale(n: BigInt, w: u32) -> Rational {
    Rational::new(n, BigInt::one() << w as usize)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -num_integer::Integer::div_floor(&-a, b)
}

/// Scaled bounds on `e^x` for `0 ≤ x_lo ≤ x_hi ≤ 1/2` given as `2^w` multiples.
fn exp_series(x_lo: &BigInt, x_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w as usize;
    let mut lo_sum = one.clone();
    let mut hi_sum = one.clone();
    let mut lo_term = one.clone();
    let mut hi_term = one;
    let mut j = 1u32;
    loop {
        let denom = BigInt::from(j) << w as usize;
        lo_term = div_floor(&(&lo_term * x_lo), &denom);
        hi_term = div_ceil(&(&hi_term * x_hi), &denom);
        lo_sum += &lo_term;
        hi_sum += &hi_term;
        if hi_term <= BigInt::one() {
            break;
        }
        j += 1;
    }
    // tail ≤ term_j · x / (j+1) · 1/(1 - x/(j+2)) ≤ term_j, plus one ulp per rounded term
    hi_sum += &hi_term + BigInt::from(j + 2);
    (lo_sum, hi_sum)
}

/// Enclosure of `e^q` with `hi - lo ≤ 2^-p · lo`.
pub fn exp_enclosure(q: &Rational, p: u32) -> RationalInterval {
    if q.is_zero() {
        return RationalInterval::point(Rational::one());
    }
    if q.is_negative() {
        return exp_enclosure(&-q, p + 2).recip_positive();
    }
    // halve until x ≤ 1/2, then square back up
    let halvings = (floor_log2(q) + 2).max(0) as u32;
    let x = q * pow2(-(halvings as i64));
    let mut extra = 12u32;
    loop {
        let w = p + halvings + extra;
        let (mut lo, mut hi) = exp_series(&floor_scaled(&x, w), &ceil_scaled(&x, w), w);
        let one = BigInt::one() << w as usize;
        for _ in 0..halvings {
            lo = div_floor(&(&lo * &lo), &one);
            hi = div_ceil(&(&hi * &hi), &one);
        }
        let (lo, hi) = (unscale(lo, w), unscale(hi, w));
        if &hi - &lo <= &lo * pow2(-(p as i64)) {
            return RationalInterval::from_sorted(lo, hi);
        }
        extra += 16;
    }
}

/// `[e^{lo}, e^{hi}]` outward, relative width about `2^-p` plus the input width.
pub fn exp_interval(x: &RationalInterval, p: u32) -> RationalInterval {
    let lo = exp_enclosure(x.lo(), p);
    if x.lo() == x.hi() {
        return lo;
    }
    let hi = exp_enclosure(x.hi(), p);
    RationalInterval::from_sorted(lo.lo().clone(), hi.hi().clone())
}

/// Scaled bounds on `atanh(t) = Σ t^{2j+1}/(2j+1)` for `0 ≤ t ≤ 1/3`.
fn atanh_series(t_lo: &BigInt, t_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    let scale2 = BigInt::one() << (2 * w) as usize;
    let t2_lo = t_lo * t_lo;
    let t2_hi = t_hi * t_hi;
    let mut lo_pow = t_lo.clone();
    let mut hi_pow = t_hi.clone();
    let mut lo_sum = BigInt::zero();
    let mut hi_sum = BigInt::zero();
    let mut j = 0u32;
    loop {
        let d = BigInt::from(2 * j + 1);
        lo_sum += div_floor(&lo_pow, &d);
        hi_sum += div_ceil(&hi_pow, &d);
        lo_pow = div_floor(&(&lo_pow * &t2_lo), &scale2);
        hi_pow = div_ceil(&(&hi_pow * &t2_hi), &scale2);
        j += 1;
        if hi_pow <= BigInt::one() {
            break;
        }
    }
    // remaining tail ≤ (9/8) · t^{2j+1} / (2j+1) ≤ 2 · hi_pow, plus rounding slack
    hi_sum += (hi_pow << 1usize) + BigInt::from(2 * j + 2);
    (lo_sum, hi_sum)
}

/// Enclosure of `ln q` of width `≤ 2^-p`.
pub fn log_enclosure(q: &Rational, p: u32) -> Result<RationalInterval> {
    if !q.is_positive() {
        return Err(Error::NonPositiveLog);
    }
    if q.is_one() {
        return Ok(RationalInterval::zero());
    }
    if *q < Rational::one() {
        return Ok(log_enclosure(&q.recip(), p)?.neg());
    }
    let e = floor_log2(q);
    let r = q * pow2(-e);
    // ln r = 2 atanh((r-1)/(r+1)), t ∈ [0, 1/3)
    let t = (&r - Rational::one()) / (&r + Rational::one());
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    let e_bits = 64 - (e as u64).leading_zeros();
    let mut extra = 10u32;
    loop {
        let w = p + e_bits + extra;
        let (l2_lo, l2_hi) = atanh_series(&floor_scaled(&third, w), &ceil_scaled(&third, w), w);
        let (r_lo, r_hi) = atanh_series(&floor_scaled(&t, w), &ceil_scaled(&t, w), w);
        let eb = BigInt::from(e);
        let lo = unscale((&eb * l2_lo + r_lo) << 1usize, w);
        let hi = unscale((&eb * l2_hi + r_hi) << 1usize, w);
        if &hi - &lo <= pow2(-(p as i64)) {
            return Ok(RationalInterval::from_sorted(lo, hi));
        }
        extra += 16;
    }
}

/// `[ln lo, ln hi]` outward for an interval of positive numbers.
pub fn log_interval(x: &RationalInterval, p: u32) -> Result<RationalInterval> {
    let lo = log_enclosure(x.lo(), p)?;
    if x.lo() == x.hi() {
        return Ok(lo);
    }
    let hi = log_enclosure(x.hi(), p)?;
    Ok(RationalInterval::from_sorted(lo.lo().clone(), hi.hi().clone()))
}
