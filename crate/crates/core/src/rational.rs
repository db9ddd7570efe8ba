//! Exact rational helpers: parsing, dyadic rounding, rendering.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Parses `p/q`, `p`, or a plain decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("malformed rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Largest `k` with `2^k <= q`, for `q > 0`.
pub fn floor_log2(q: &Rational) -> i64 {
    debug_assert!(q.is_positive());
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    // q in [2^(k-1), 2^(k+1)); settle the exact value
    if *q < pow2(k) {
        k -= 1;
    }
    k
}

/// `floor(q * 2^bits) / 2^bits`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let scaled = q * pow2(bits as i64);
    Rational::new(scaled.floor().to_integer(), BigInt::one() << bits as usize)
}

/// `ceil(q * 2^bits) / 2^bits`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    let scaled = q * pow2(bits as i64);
    Rational::new(scaled.ceil().to_integer(), BigInt::one() << bits as usize)
}

/// Numerator of `q` rounded down to the grid `2^-bits`.
pub fn floor_scaled(q: &Rational, bits: u32) -> BigInt {
    (q * pow2(bits as i64)).floor().to_integer()
}

/// Numerator of `q` rounded up to the grid `2^-bits`.
pub fn ceil_scaled(q: &Rational, bits: u32) -> BigInt {
    (q * pow2(bits as i64)).ceil().to_integer()
}

/// Always renders as `p/q`, including integers (`3/1`).
pub fn fmt_ratio(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal rendering with `digits` fractional digits, rounded toward -∞
/// (`round_up = false`) or +∞ (`round_up = true`).
pub fn to_decimal(q: &Rational, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let neg = n.sign() == Sign::Minus;
    let (ip, fp) = n.abs().div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", fp.to_string(), width = digits));
    }
    s
}

/// Lossy conversion for diagnostics only; never used to certify anything.
pub fn approx_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("1.5").unwrap(), ratio(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_log2_exact() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&int(7)), 2);
        assert_eq!(floor_log2(&ratio(1, 2)), -1);
        assert_eq!(floor_log2(&ratio(3, 8)), -2);
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = ratio(1, 3);
        let lo = floor_dyadic(&q, 10);
        let hi = ceil_dyadic(&q, 10);
        assert!(lo <= q && q <= hi);
        assert_eq!(&hi - &lo, pow2(-10));
        assert_eq!(floor_dyadic(&ratio(-1, 3), 2), ratio(-2, 4));
    }

    #[test]
    fn decimal_rendering_is_directed() {
        assert_eq!(to_decimal(&ratio(2, 3), 3, false), "0.666");
        assert_eq!(to_decimal(&ratio(2, 3), 3, true), "0.667");
        assert_eq!(to_decimal(&ratio(-2, 3), 3, false), "-0.667");
        assert_eq!(to_decimal(&ratio(-2, 3), 3, true), "-0.666");
        assert_eq!(fmt_ratio(&int(3)), "3/1");
    }
}
