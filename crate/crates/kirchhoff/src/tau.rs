//! Exact spanning-tree counting, independent of the term algebra.
//!
//! `tau` evaluates a cofactor of the graph Laplacian (matrix tree theorem).
//! Small minors go through fraction-free Bareiss elimination over integers;
//! larger ones through sparse rational elimination with minimum-degree
//! pivoting, which stays near-linear on the treewidth-2 graphs this crate
//! constructs. `brute_force` is the oracle of the oracle: direct enumeration
//! of edge subsets, usable up to 20 edges.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{MarkedGraph, UnionFind};
use crate::rational::Rational;

/// Dense Bareiss is used up to this minor size; beyond it the sparse path
/// is both faster and lighter on memory for the low-treewidth graphs this
/// crate builds.
const BAREISS_LIMIT: usize = 32;

/// Maximum edge count accepted by `brute_force`.
pub const BRUTE_FORCE_EDGE_CAP: usize = 20;

/// Number of spanning trees of the graph underlying `g`. Zero iff disconnected.
pub fn tau(g: &MarkedGraph) -> BigInt {
    tau_edges(g.n, &g.edges)
}

/// tau(G - e): the marked edge deleted.
pub fn tau_deleted(g: &MarkedGraph) -> BigInt {
    let edges: Vec<_> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != g.marked)
        .map(|(_, &e)| e)
        .collect();
    tau_edges(g.n, &edges)
}

/// tau(G / e): the marked edge contracted, loops created by the contraction
/// removed.
pub fn tau_contracted(g: &MarkedGraph) -> BigInt {
    let (x, y) = g.marked_edge();
    let (keep, drop) = if x < y { (x, y) } else { (y, x) };
    let map = |v: usize| {
        if v == drop {
            keep
        } else if v > drop {
            v - 1
        } else {
            v
        }
    };
    let edges: Vec<_> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != g.marked)
        .map(|(_, &(u, v))| (map(u), map(v)))
        .filter(|&(u, v)| u != v)
        .collect();
    if g.n == 1 {
        return BigInt::one();
    }
    tau_edges(g.n - 1, &edges)
}

/// All three counts at once.
pub struct TauTriple {
    pub whole: BigInt,
    pub deleted: BigInt,
    pub contracted: BigInt,
}

pub fn tau_triple(g: &MarkedGraph) -> TauTriple {
    TauTriple {
        whole: tau(g),
        deleted: tau_deleted(g),
        contracted: tau_contracted(g),
    }
}

/// Spanning tree ratio tau(G-e)/tau(G/e). Only defined for proper marked
/// graphs; improper input is signalled.
pub fn tree_ratio(g: &MarkedGraph) -> Result<Rational> {
    let del = tau_deleted(g);
    let con = tau_contracted(g);
    if del.is_zero() || con.is_zero() {
        return Err(Error::ImproperGraph(
            "spanning tree ratio needs a connected graph whose marked edge is not a bridge".into(),
        ));
    }
    Ok(Rational::new(del, con))
}

/// Effective resistance tau(G/e)/tau(G). Requires a connected graph; equals
/// 1 exactly when the marked edge is a bridge.
pub fn resistance(g: &MarkedGraph) -> Result<Rational> {
    let whole = tau(g);
    if whole.is_zero() {
        return Err(Error::ImproperGraph("graph is disconnected".into()));
    }
    Ok(Rational::new(tau_contracted(g), whole))
}

/// tau(G - e) + tau(G / e) = tau(G). Holds for every marked graph; a false
/// return means a counting bug, not bad input.
pub fn deletion_contraction_holds(g: &MarkedGraph) -> bool {
    tau_deleted(g) + tau_contracted(g) == tau(g)
}

/// Counts spanning trees by enumerating (n-1)-subsets of edges and testing
/// acyclic connectivity. Capped at 20 edges.
pub fn brute_force(g: &MarkedGraph) -> Result<BigInt> {
    let m = g.edges.len();
    if m > BRUTE_FORCE_EDGE_CAP {
        return Err(Error::BruteForceTooLarge {
            edges: m,
            cap: BRUTE_FORCE_EDGE_CAP,
        });
    }
    if g.n == 1 {
        return Ok(BigInt::one());
    }
    let want = g.n - 1;
    if want > m {
        return Ok(BigInt::zero());
    }
    let mut count = 0u64;
    let mut subset: Vec<usize> = (0..want).collect();
    loop {
        let mut uf = UnionFind::new(g.n);
        if subset.iter().all(|&i| {
            let (u, v) = g.edges[i];
            uf.union(u, v)
        }) {
            count += 1;
        }
        // Next combination in lexicographic order.
        let mut i = want;
        loop {
            if i == 0 {
                return Ok(BigInt::from(count));
            }
            i -= 1;
            if subset[i] != i + m - want {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..want {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Matrix tree theorem on an explicit edge list: determinant of the
/// Laplacian with the last row and column removed.
pub(crate) fn tau_edges(n: usize, edges: &[(usize, usize)]) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let dim = n - 1;
    if dim <= BAREISS_LIMIT {
        let mut m = vec![vec![BigInt::zero(); dim]; dim];
        for &(u, v) in edges {
            if u < dim {
                m[u][u] += 1;
            }
            if v < dim {
                m[v][v] += 1;
            }
            if u < dim && v < dim {
                m[u][v] -= 1;
                m[v][u] -= 1;
            }
        }
        bareiss_determinant(m)
    } else {
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); dim];
        for &(u, v) in edges {
            if u < dim {
                *rows[u].entry(u).or_insert_with(Rational::zero) += Rational::one();
            }
            if v < dim {
                *rows[v].entry(v).or_insert_with(Rational::zero) += Rational::one();
            }
            if u < dim && v < dim {
                *rows[u].entry(v).or_insert_with(Rational::zero) -= Rational::one();
                *rows[v].entry(u).or_insert_with(Rational::zero) -= Rational::one();
            }
        }
        sparse_psd_determinant(rows)
    }
}

/// Fraction-free (Bareiss) elimination over integers: every division is
/// exact, so nothing leaves the integers and nothing rounds.
pub(crate) fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if sign {
        -det
    } else {
        det
    }
}

/// Exact symmetric elimination with minimum-degree pivoting. The input must
/// be a symmetric positive semidefinite matrix (Laplacian minors are), so a
/// zero pivot means a zero determinant.
fn sparse_psd_determinant(mut rows: Vec<BTreeMap<usize, Rational>>) -> BigInt {
    let n = rows.len();
    let mut alive: Vec<bool> = vec![true; n];
    let mut det = Rational::one();
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| (rows[i].len(), i))
            .expect("an alive row remains");
        let pivot = match rows[v].get(&v) {
            Some(p) if !p.is_zero() => p.clone(),
            _ => return BigInt::zero(),
        };
        det *= &pivot;
        alive[v] = false;
        let neighbors: Vec<(usize, Rational)> = rows[v]
            .iter()
            .filter(|&(&j, _)| j != v && alive[j])
            .map(|(&j, w)| (j, w.clone()))
            .collect();
        for (i, wi) in &neighbors {
            let scale = wi / &pivot;
            for (j, wj) in &neighbors {
                if j < i {
                    continue;
                }
                let delta = &scale * wj;
                let e = rows[*i].entry(*j).or_insert_with(Rational::zero);
                *e -= &delta;
                if e.is_zero() {
                    rows[*i].remove(j);
                } else if i != j {
                    let m = rows[*j].entry(*i).or_insert_with(Rational::zero);
                    *m -= delta;
                    if m.is_zero() {
                        rows[*j].remove(i);
                    }
                }
            }
            rows[*i].remove(&v);
        }
        rows[v].clear();
    }
    debug_assert!(det.is_integer());
    let det = det.to_integer();
    debug_assert!(!det.is_negative());
    det
}
