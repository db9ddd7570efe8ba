use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Every operation returns an interval containing the exact result of the
/// operation applied to any members of the operands.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: {} > {}",
                fmt_ratio(&lo),
                fmt_ratio(&hi)
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Self {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub(crate) fn from_sorted(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_sorted(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_sorted(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        Self::from_sorted(-&self.hi, -&self.lo)
    }

    pub fn shift(&self, c: &Rational) -> Self {
        Self::from_sorted(&self.lo + c, &self.hi + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            Self::from_sorted(&self.hi * c, &self.lo * c)
        } else {
            Self::from_sorted(&self.lo * c, &self.hi * c)
        }
    }

    /// Product of two intervals with nonnegative endpoints.
    pub fn mul_nonneg(&self, other: &Self) -> Self {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Self::from_sorted(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// `1/x` for an interval of strictly positive numbers.
    pub fn recip_positive(&self) -> Self {
        debug_assert!(self.lo.is_positive());
        Self::from_sorted(self.hi.recip(), self.lo.recip())
    }

    /// `{max(a, b) : a ∈ self, b ∈ other}`.
    pub fn max(&self, other: &Self) -> Self {
        Self::from_sorted(
            (&self.lo).max(&other.lo).clone(),
            (&self.hi).max(&other.hi).clone(),
        )
    }

    /// `{min(a, b) : a ∈ self, b ∈ other}`.
    pub fn min(&self, other: &Self) -> Self {
        Self::from_sorted(
            (&self.lo).min(&other.lo).clone(),
            (&self.hi).min(&other.hi).clone(),
        )
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self::from_sorted(
            (&self.lo).min(&other.lo).clone(),
            (&self.hi).max(&other.hi).clone(),
        )
    }

    /// `[lo - e, hi + e]` for `e ≥ 0`.
    pub fn widen(&self, e: &Rational) -> Self {
        debug_assert!(!e.is_negative());
        Self::from_sorted(&self.lo - e, &self.hi + e)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_ratio(&self.lo), fmt_ratio(&self.hi))
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12}, {:.12}]",
            crate::rational::approx_f64(&self.lo),
            crate::rational::approx_f64(&self.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn iv(a: i64, b: i64) -> RationalInterval {
        RationalInterval::new(int(a.min(b)), int(a.max(b))).unwrap()
    }

    #[test]
    fn rejects_reversed() {
        assert!(RationalInterval::new(int(2), int(1)).is_err());
    }

    #[test]
    fn recip_and_scale() {
        let x = RationalInterval::new(int(2), int(4)).unwrap();
        assert_eq!(x.recip_positive(), RationalInterval::new(ratio(1, 4), ratio(1, 2)).unwrap());
        assert_eq!(x.scale(&int(-1)), x.neg());
    }

    proptest! {
        #[test]
        fn operations_contain_pointwise_results(
            a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50,
            s in 0u8..=100, t in 0u8..=100,
        ) {
            let (x, y) = (iv(a, b), iv(c, d));
            // members chosen as convex combinations of the endpoints
            let px = x.lo() + (x.width() * ratio(s as i64, 100));
            let py = y.lo() + (y.width() * ratio(t as i64, 100));
            prop_assert!(x.add(&y).contains(&(&px + &py)));
            prop_assert!(x.sub(&y).contains(&(&px - &py)));
            prop_assert!(x.max(&y).contains(&(&px).max(&py).clone()));
            prop_assert!(x.min(&y).contains(&(&px).min(&py).clone()));
            prop_assert!(x.scale(&int(c)).contains(&(&px * int(c))));
            prop_assert!(x.neg().contains(&-&px));
        }
    }
}
