//! Finite continued fractions over exact rationals.
//!
//! A value is written `[a0; a1, ..., al]` with `a0 >= 0` and `ai >= 1` for
//! `i >= 1`. Every positive rational has exactly two such representations,
//! `[a0; ..., al]` and `[a0; ..., al - 1, 1]`, and both have the same
//! partial-quotient sum `S = a0 + a1 + ... + al`. `S` drives every size
//! bound in the construction pipeline, so it is cached at construction.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    a0: BigUint,
    rest: Vec<BigUint>,
    s: BigUint,
}

impl ContinuedFraction {
    /// Builds a continued fraction from raw quotients. Entries after `a0`
    /// must be positive.
    pub fn new(a0: BigUint, rest: Vec<BigUint>) -> Result<Self> {
        if rest.iter().any(|a| a.is_zero()) {
            return Err(Error::OutOfRange(
                "partial quotients after a0 must be >= 1".into(),
            ));
        }
        let s = &a0 + rest.iter().sum::<BigUint>();
        Ok(ContinuedFraction { a0, rest, s })
    }

    /// Canonical representation of `q >= 0` by the Euclidean algorithm.
    /// The final quotient is >= 2 whenever there is more than one.
    pub fn from_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NegativeInput(q.to_string()));
        }
        let mut num = q.numer().to_biguint().expect("non-negative");
        let mut den = q.denom().to_biguint().expect("positive denominator");
        let a0 = &num / &den;
        let mut r = num % &den;
        num = den;
        let mut rest = Vec::new();
        while !r.is_zero() {
            den = r;
            rest.push(&num / &den);
            r = num % &den;
            num = den;
        }
        Self::new(a0, rest)
    }

    /// Exact nested-fraction evaluation.
    pub fn value(&self) -> Rational {
        let mut acc: Option<Rational> = None;
        for a in self.rest.iter().rev() {
            let a = Rational::from_integer(a.clone().into());
            acc = Some(match acc {
                None => a,
                Some(v) => a + v.recip(),
            });
        }
        let a0 = Rational::from_integer(self.a0.clone().into());
        match acc {
            None => a0,
            Some(v) => a0 + v.recip(),
        }
    }

    /// Sum of all partial quotients, including `a0`.
    pub fn s(&self) -> &BigUint {
        &self.s
    }

    /// `S` clamped into u64, for budget arithmetic.
    pub fn s_u64(&self) -> u64 {
        self.s.to_u64().unwrap_or(u64::MAX)
    }

    pub fn a0(&self) -> &BigUint {
        &self.a0
    }

    /// Quotients after `a0`.
    pub fn rest(&self) -> &[BigUint] {
        &self.rest
    }

    /// Number of quotients after `a0`.
    pub fn len(&self) -> usize {
        self.rest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rest.is_empty()
    }

    /// All quotients as a single sequence starting with `a0`.
    pub fn quotients(&self) -> Vec<BigUint> {
        let mut v = Vec::with_capacity(self.rest.len() + 1);
        v.push(self.a0.clone());
        v.extend(self.rest.iter().cloned());
        v
    }

    /// Largest quotient after `a0` (None when there are none).
    pub fn max_rest_quotient(&self) -> Option<&BigUint> {
        self.rest.iter().max()
    }

    /// Switches between the two representations of the same value so that
    /// the number of quotients after `a0` has the requested parity. Value
    /// and `S` are unchanged. Only 0 (whose representation is unique)
    /// cannot be toggled.
    pub fn with_parity(&self, even_len: bool) -> Result<Self> {
        if (self.rest.len() % 2 == 0) == even_len {
            return Ok(self.clone());
        }
        let one = BigUint::one();
        let mut a0 = self.a0.clone();
        let mut rest = self.rest.clone();
        match rest.last() {
            Some(last) if *last == one => {
                // [..., a, 1] -> [..., a + 1]
                rest.pop();
                match rest.last_mut() {
                    Some(prev) => *prev += &one,
                    None => a0 += &one,
                }
            }
            Some(last) => {
                // [..., a] -> [..., a - 1, 1]
                let a = last - &one;
                *rest.last_mut().unwrap() = a;
                rest.push(one);
            }
            None => {
                // [a0] -> [a0 - 1; 1]
                if a0.is_zero() {
                    return Err(Error::ZeroHasOneRepresentation);
                }
                a0 -= &one;
                rest.push(one);
            }
        }
        Self::new(a0, rest)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, a) in self.rest.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { ";" } else { "," }, a)?;
        }
        write!(f, "]")
    }
}

/// Continued fraction of `1 - q` for `q` in (0, 1), computed directly on the
/// quotients of `q`: `[1, a1 - 1, a2, ...]` when `a1 > 1` and
/// `[a2 + 1, a3, ...]` when `a1 = 1`. `S` is preserved exactly.
pub fn complement(q: &Rational) -> Result<ContinuedFraction> {
    if !crate::rational::is_proper_fraction(q) {
        return Err(Error::OutOfRange(format!("{q} is not in (0,1)")));
    }
    let cf = ContinuedFraction::from_rational(q)?;
    debug_assert!(cf.a0.is_zero());
    let one = BigUint::one();
    let rest = if cf.rest[0] > one {
        let mut r = Vec::with_capacity(cf.rest.len() + 1);
        r.push(one.clone());
        r.push(&cf.rest[0] - &one);
        r.extend(cf.rest[1..].iter().cloned());
        r
    } else {
        // a1 = 1 forces l >= 2, since [0; 1] = 1 is outside (0, 1).
        let mut r = Vec::with_capacity(cf.rest.len() - 1);
        r.push(&cf.rest[1] + &one);
        r.extend(cf.rest[2..].iter().cloned());
        r
    };
    ContinuedFraction::new(BigUint::zero(), rest)
}

/// Continued fraction of `1 + q` for `q` in (-1, 1), with
/// `S(1 + q) <= 1 + S(|q|)`.
pub fn one_plus(q: &Rational) -> Result<ContinuedFraction> {
    if q.abs() >= Rational::one() {
        return Err(Error::OutOfRange(format!("{q} is not in (-1,1)")));
    }
    if q.is_zero() {
        return ContinuedFraction::new(BigUint::one(), Vec::new());
    }
    if q.is_positive() {
        let cf = ContinuedFraction::from_rational(q)?;
        debug_assert!(cf.a0.is_zero());
        ContinuedFraction::new(BigUint::one(), cf.rest)
    } else {
        complement(&-q)
    }
}
