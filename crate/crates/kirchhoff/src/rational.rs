//! Exact rational arithmetic. Everything in this crate that is a ratio of
//! counts (resistances, spanning tree ratios, partial quotients) lives in
//! `Rational`, which is always stored reduced with a positive denominator.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand constructor, mostly for tests and fixtures.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p". The result is reduced; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::ParseRational(s.to_string()))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::ParseRational(s.to_string()))?;
        if den.is_zero() {
            return Err(Error::ParseRational(s.to_string()));
        }
        Ok(Rational::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| Error::ParseRational(s.to_string()))?;
        Ok(Rational::from_integer(num))
    }
}

/// Floor as an integer (exact, works for negative values).
pub fn floor_int(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Fractional part `q - floor(q)`, always in [0, 1).
pub fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// Number of bits of `n`; an exact upper bound for log2(n) when n >= 1.
pub fn log2_upper(n: &BigUint) -> u64 {
    n.bits()
}

/// `bits(n) - 1`, an exact lower bound for log2(n) when n >= 1.
pub fn log2_lower(n: &BigUint) -> u64 {
    n.bits().saturating_sub(1)
}

/// True if q is in (0, 1) after reduction, i.e. a proper fraction.
pub fn is_proper_fraction(q: &Rational) -> bool {
    q.is_positive() && q < &Rational::one()
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("3/7").unwrap(), rat(3, 7));
        assert_eq!(parse_rational("6/14").unwrap(), rat(3, 7));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(rat(3, 7).to_string(), "3/7");
        assert_eq!(rat_int(5).to_string(), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(floor_int(&rat(7, 3)), big(2));
        assert_eq!(floor_int(&rat(-1, 2)), big(-1));
        assert_eq!(frac_part(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac_part(&rat(-1, 2)), rat(1, 2));
    }

    #[test]
    fn log2_bounds() {
        for n in 1u64..200 {
            let b = BigUint::from(n);
            let lo = log2_lower(&b) as f64;
            let hi = log2_upper(&b) as f64;
            let l = (n as f64).log2();
            assert!(lo <= l && l < hi + 1e-12, "n={n} lo={lo} l={l} hi={hi}");
        }
        assert_eq!(log2_lower(&BigUint::from(5u32)), 2);
        assert_eq!(log2_upper(&BigUint::from(5u32)), 3);
        assert_eq!(log2_lower(&BigUint::from(4u32)), 2);
    }
}
