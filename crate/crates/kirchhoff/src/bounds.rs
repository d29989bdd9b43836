//! Lower-bound and growth checks for marked planar graphs. These are
//! theorems about all simple planar proper marked graphs, so a failed check
//! signals a bug in the construction or the counting, never bad luck.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MarkedGraph;
use crate::rational::{log2_lower, Rational};
use crate::tau;

/// One named check with both sides of the comparison, for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Audit {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Audit {
    pub fn new(name: &str, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Audit {
            name: name.to_string(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

/// `0.6 * max{t/c, t/(t-c), log2-lower-bound(t)}` for a reduced target
/// `c/t` in (0,1). The log term is under-approximated by `bits(t) - 1`,
/// which keeps the check sound in exact arithmetic. Every simple planar
/// proper marked graph with resistance `c/t` has at least this many
/// vertices.
pub fn lower_bound_value(target: &Rational) -> Result<Rational> {
    if !crate::rational::is_proper_fraction(target) {
        return Err(Error::OutOfRange(format!("{target} is not in (0,1)")));
    }
    let c = target.numer().clone();
    let t = target.denom().clone();
    let d = &t - &c;
    let log_term = Rational::from_integer(BigInt::from(log2_lower(
        &t.to_biguint().expect("positive"),
    )));
    let m = max_bound(&Rational::new(t.clone(), c), &Rational::new(t, d), &log_term);
    Ok(Rational::new(BigInt::from(3), BigInt::from(5)) * m)
}

pub(crate) fn max_bound(a: &Rational, b: &Rational, c: &Rational) -> Rational {
    let mut m = a.clone();
    if b > &m {
        m = b.clone();
    }
    if c > &m {
        m = c.clone();
    }
    m
}

/// Commute-time bound: resistance >= (1/deg(x) + 1/deg(y)) / 2 for the
/// marked edge (x, y) of any connected graph.
pub fn check_commute_bound(g: &MarkedGraph) -> Result<bool> {
    let r = tau::resistance(g)?;
    Ok(commute_bound_holds(g, &r))
}

pub(crate) fn commute_bound_holds(g: &MarkedGraph, resistance: &Rational) -> bool {
    resistance >= &commute_bound_rhs(g)
}

pub(crate) fn commute_bound_rhs(g: &MarkedGraph) -> Rational {
    let (x, y) = g.marked_edge();
    let dx = Rational::new(BigInt::one(), BigInt::from(g.degree(x)));
    let dy = Rational::new(BigInt::one(), BigInt::from(g.degree(y)));
    (dx + dy) / Rational::from_integer(BigInt::from(2))
}

/// Euler bounds for simple planar graphs on at least 3 vertices,
/// `|E| <= 3|V| - 6` and `|F| <= 2|V| - 4`, plus `tau(G) < 2^|E|`.
pub fn check_planar_simple_bounds(g: &MarkedGraph) -> Result<bool> {
    if !g.is_simple() {
        return Err(Error::InvalidGraph("graph is not simple".into()));
    }
    if g.n < 3 {
        return Err(Error::OutOfRange("need at least 3 vertices".into()));
    }
    let t = tau::tau(g);
    Ok(planar_simple_bounds_hold(g, &t))
}

pub(crate) fn planar_simple_bounds_hold(g: &MarkedGraph, tau_g: &BigInt) -> bool {
    let v = g.n;
    let e = g.edge_count();
    e <= 3 * v - 6 && g.face_count() <= 2 * v - 4 && tau_g < &(BigInt::one() << e)
}

/// `tau(G) < 5.23^|V|`, checked with the exact rational (523/100)^|V|.
pub fn check_tau_growth(g: &MarkedGraph) -> Result<bool> {
    Ok(tau_growth_holds(g.n, &tau::tau(g)))
}

pub(crate) fn tau_growth_holds(v: usize, tau_g: &BigInt) -> bool {
    if tau_g.is_negative() {
        return false;
    }
    // tau * 100^v < 523^v
    let lhs = tau_g * BigInt::from(100).pow(v as u32);
    lhs < BigInt::from(523).pow(v as u32)
}

/// `tau(G) < 2^(3|V|)`; follows from the edge bound for simple planar graphs.
pub(crate) fn tau_vertex_bound_holds(v: usize, tau_g: &BigInt) -> bool {
    !tau_g.is_negative() && tau_g < &(BigInt::one() << (3 * v))
}
