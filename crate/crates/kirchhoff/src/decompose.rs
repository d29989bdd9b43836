//! Short decompositions of a rational in [0,1) as sums of rationals in
//! (-1,1) with small total partial-quotient sum.
//!
//! A one-term decomposition always works, at cost S(target). The search
//! tries to beat it two ways:
//!
//!   * iterative-deepening enumeration of parts whose partial quotients are
//!     bounded (by default 4, in at least one of the two representations)
//!     and whose denominators fit the budget, closing each sum with an
//!     exactly-checked final part;
//!   * splitting the denominator: for small multiples m of den(target) and
//!     coprime factorizations m*den = b1*b2, solve a1/b1 + a2/b2 = target by
//!     CRT and keep the cheapest valid split.
//!
//! Results are deterministic for fixed budgets, never worse than the
//! trivial decomposition, and always re-validated in exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Largest denominator allowed in any part.
    pub max_den: u64,
    /// Partial-quotient ceiling for enumerated parts.
    pub max_quotient: u64,
    /// Largest number of parts.
    pub max_terms: usize,
    /// Ceiling on the total cost explored by the enumeration pass.
    pub cost_cap: u64,
    /// Ceiling on enumeration work; exhaustion falls back gracefully.
    pub node_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_den: 10_000,
            max_quotient: 4,
            max_terms: 3,
            cost_cap: 12,
            node_cap: 200_000,
        }
    }
}

/// A verified sum-of-parts representation of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub target: Rational,
    /// Parts in (-1,1), none zero, summing exactly to `target`.
    pub parts: Vec<Rational>,
}

impl Decomposition {
    /// Total cost, recomputed from the parts every time.
    pub fn cost(&self) -> u64 {
        self.parts.iter().map(|p| s_of(&p.abs())).sum()
    }

    /// Exact re-validation: the parts sum to the target and each lies in
    /// (-1,1), excluding zero.
    pub fn is_valid(&self) -> bool {
        let sum: Rational = self.parts.iter().sum();
        sum == self.target
            && self
                .parts
                .iter()
                .all(|p| !p.is_zero() && p.abs() < Rational::one())
    }

    fn sort_key(&self) -> Vec<(BigInt, BigInt)> {
        let mut key: Vec<_> = self
            .parts
            .iter()
            .map(|p| (p.denom().clone(), p.numer().clone()))
            .collect();
        key.sort();
        key
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Decomposition", 3)?;
        st.serialize_field("target", &self.target.to_string())?;
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        st.serialize_field("parts", &parts)?;
        st.serialize_field("cost", &self.cost())?;
        st.end()
    }
}

/// Partial-quotient sum of a non-negative rational.
pub fn s_of(q: &Rational) -> u64 {
    ContinuedFraction::from_rational(q)
        .expect("non-negative")
        .s_u64()
}

/// Partial-quotient sum, abandoned as soon as it exceeds `cap`. The search
/// rejects most closing parts this way after a few divisions.
fn s_of_capped(q: &Rational, cap: u64) -> Option<u64> {
    let mut num = q.numer().to_biguint().expect("non-negative");
    let mut den = q.denom().to_biguint().expect("positive");
    let mut sum = 0u64;
    loop {
        let (quot, rem) = num.div_rem(&den);
        sum = sum.saturating_add(quot.to_u64().unwrap_or(u64::MAX));
        if sum > cap {
            return None;
        }
        if rem.is_zero() {
            return Some(sum);
        }
        num = den;
        den = rem;
    }
}

/// The always-valid one-term decomposition (empty for target 0).
pub fn decompose_trivial(target: &Rational) -> Result<Decomposition> {
    check_target(target)?;
    let parts = if target.is_zero() {
        Vec::new()
    } else {
        vec![target.clone()]
    };
    Ok(Decomposition {
        target: target.clone(),
        parts,
    })
}

fn check_target(target: &Rational) -> Result<()> {
    if target.is_negative() || target >= &Rational::one() {
        return Err(Error::OutOfRange(format!("{target} is not in [0,1)")));
    }
    Ok(())
}

/// Searches for the cheapest decomposition within the budget. Never fails
/// and never returns anything costlier than the trivial decomposition.
pub fn decompose_search(target: &Rational, budget: &SearchBudget) -> Result<Decomposition> {
    let trivial = decompose_trivial(target)?;
    if target.is_zero() || budget.max_terms < 2 {
        return Ok(trivial);
    }
    let trivial_cost = trivial.cost();
    let mut best = trivial;
    let mut best_cost = trivial_cost;

    if let Some(hit) = enumeration_pass(target, budget, best_cost) {
        let c = hit.cost();
        debug_assert!(hit.is_valid());
        if c < best_cost || (c == best_cost && better_tie(&hit, &best)) {
            best_cost = c;
            best = hit;
        }
    }
    if let Some(hit) = denominator_split_pass(target, budget) {
        let c = hit.cost();
        debug_assert!(hit.is_valid());
        if c < best_cost || (c == best_cost && better_tie(&hit, &best)) {
            best_cost = c;
            best = hit;
        }
    }
    let _ = best_cost;
    Ok(best)
}

fn better_tie(a: &Decomposition, b: &Decomposition) -> bool {
    (a.parts.len(), a.sort_key()) < (b.parts.len(), b.sort_key())
}

fn sorted_parts(mut parts: Vec<Rational>) -> Vec<Rational> {
    parts.sort_by(|a, b| b.cmp(a));
    parts
}

// ---------------------------------------------------------------------------
// Enumeration pass

#[derive(Clone, Debug)]
struct PoolEntry {
    value: Rational,
    s: u64,
    den: u64,
}

/// All rationals in (0,1) whose denominator and partial-quotient sum fit,
/// and whose quotients stay at or below the ceiling in at least one of the
/// two representations. Generated over canonical continued-fraction words
/// via the continuant recurrence, so every value appears exactly once.
fn build_pool(budget: &SearchBudget, s_cap: u64, nodes: &mut u64) -> Option<Vec<PoolEntry>> {
    let mut pool = Vec::new();
    let mut word_stack: Vec<(u64, u64, u64, u64, u64)> = vec![(1, 0, 0, 1, 0)];
    // Each stack entry is (h_prev2, k_prev2, h_prev, k_prev, s_so_far).
    while let Some((hpp, kpp, hp, kp, s)) = word_stack.pop() {
        for a in 1..=budget.max_quotient + 1 {
            let s2 = s + a;
            if s2 > s_cap {
                break;
            }
            let k = match a.checked_mul(kp).and_then(|x| x.checked_add(kpp)) {
                Some(k) if k <= budget.max_den => k,
                _ => break,
            };
            let h = a * hp + hpp;
            *nodes += 1;
            if *nodes > budget.node_cap {
                return None;
            }
            if a >= 2 {
                pool.push(PoolEntry {
                    value: Rational::new(BigInt::from(h), BigInt::from(k)),
                    s: s2,
                    den: k,
                });
            }
            if a <= budget.max_quotient {
                word_stack.push((hp, kp, h, k, s2));
            }
        }
    }
    pool.sort_by(|a, b| (a.s, a.den).cmp(&(b.s, b.den)).then(a.value.cmp(&b.value)));
    Some(pool)
}

/// One bounded sweep at the top budget, collecting every decomposition it
/// can close and keeping the cheapest; ties prefer fewer parts, then
/// lexicographically smaller denominators.
fn enumeration_pass(
    target: &Rational,
    budget: &SearchBudget,
    trivial_cost: u64,
) -> Option<Decomposition> {
    // Any part in (-1,1) \ {0} costs at least 2, so a k-term sum costs at
    // least 2k and nothing below cost 4 can beat a 1-term decomposition.
    if trivial_cost <= 4 {
        return None;
    }
    // The pass cannot return anything above cost_cap, so for targets whose
    // trivial cost is far beyond it the denominator splits carry the load.
    if trivial_cost > budget.cost_cap + 13 {
        return None;
    }
    let mut nodes = 0u64;
    let top = trivial_cost.saturating_sub(1).min(budget.cost_cap);
    if top < 4 {
        return None;
    }
    let pool = build_pool(budget, top.saturating_sub(2), &mut nodes)?;
    let mut hits: Vec<(u64, Vec<Rational>)> = Vec::new();
    for k in 2..=budget.max_terms {
        if (k as u64) * 2 > top {
            break;
        }
        let mut chosen = Vec::with_capacity(k);
        if !search_level(
            target, budget, &pool, top, 0, k, &mut chosen, &mut hits, &mut nodes,
        ) {
            return None;
        }
    }
    hits.into_iter()
        .map(|(cost, parts)| {
            let d = Decomposition {
                target: target.clone(),
                parts: sorted_parts(parts),
            };
            (cost, d)
        })
        .min_by(|(ca, a), (cb, b)| {
            (ca, a.parts.len(), a.sort_key()).cmp(&(cb, b.parts.len(), b.sort_key()))
        })
        .map(|(_, d)| d)
}

/// Chooses pool parts for every slot but the last, which is forced and
/// checked exactly. Returns false on node-budget exhaustion.
#[allow(clippy::too_many_arguments)]
fn search_level(
    remaining: &Rational,
    budget: &SearchBudget,
    pool: &[PoolEntry],
    cost_left: u64,
    cost_spent: u64,
    slots: usize,
    chosen: &mut Vec<Rational>,
    hits: &mut Vec<(u64, Vec<Rational>)>,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if *nodes > budget.node_cap {
        return false;
    }
    if slots == 1 {
        let z = remaining.clone();
        if z.is_zero() || z.abs() >= Rational::one() {
            return true;
        }
        if z.denom().to_u64().map_or(true, |d| d > budget.max_den) {
            return true;
        }
        let Some(s) = s_of_capped(&z.abs(), cost_left) else {
            return true;
        };
        let mut parts = chosen.clone();
        parts.push(z);
        hits.push((cost_spent + s, parts));
        return true;
    }
    // |remaining| < slots is necessary for the leftover slots to close.
    if remaining.abs() >= Rational::from_integer(BigInt::from(slots as u64)) {
        return true;
    }
    for entry in pool {
        if entry.s + 2 * (slots as u64 - 1) > cost_left {
            break; // pool is sorted by cost
        }
        for sign in [1i64, -1] {
            let part = if sign > 0 {
                entry.value.clone()
            } else {
                -entry.value.clone()
            };
            let rest = remaining - &part;
            chosen.push(part);
            let ok = search_level(
                &rest,
                budget,
                pool,
                cost_left - entry.s,
                cost_spent + entry.s,
                slots - 1,
                chosen,
                hits,
                nodes,
            );
            chosen.pop();
            if !ok {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Denominator-split pass

const SPLIT_MULTIPLIERS: [u64; 14] = [1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 24, 36, 48];

/// For N = m * den(target) and coprime factorizations N = b1 * b2, the
/// equation a1/b1 + a2/b2 = target has exactly one solution with a1 in
/// [0, b1) by CRT; that representative and its shift by -b1 are the only
/// candidates with |a1| < b1.
fn denominator_split_pass(target: &Rational, budget: &SearchBudget) -> Option<Decomposition> {
    let den = target.denom().to_u64()?;
    let mut best: Option<(u64, Decomposition)> = None;
    for m in SPLIT_MULTIPLIERS {
        let n = m.checked_mul(den)?;
        for b1 in divisors_up_to(n, budget.max_den) {
            let b2 = n / b1;
            if b1 < 2 || b2 < 2 || b2 > budget.max_den || b1 > b2 {
                continue;
            }
            if gcd_u64(b1, b2) != 1 {
                continue;
            }
            // a1 * b2 = m * num (mod b1)
            let p = (target.numer() * BigInt::from(m)) % BigInt::from(b1);
            let p = p.to_u64().expect("reduced mod b1");
            let inv = mod_inverse(b2 % b1, b1)?;
            let a1_low = (u128::from(p) * u128::from(inv) % u128::from(b1)) as i128;
            for a1 in [a1_low, a1_low - b1 as i128] {
                if a1 == 0 {
                    continue;
                }
                let q1 = Rational::new(BigInt::from(a1), BigInt::from(b1));
                let q2 = target - &q1;
                if q2.is_zero() || q2.abs() >= Rational::one() {
                    continue;
                }
                debug_assert!(q2.denom().to_u64().is_some_and(|d| d <= budget.max_den));
                let cost = s_of(&q1.abs()) + s_of(&q2.abs());
                let cand = Decomposition {
                    target: target.clone(),
                    parts: sorted_parts(vec![q1, q2]),
                };
                if best.as_ref().map_or(true, |(bc, bd)| {
                    cost < *bc || (cost == *bc && cand.sort_key() < bd.sort_key())
                }) {
                    best = Some((cost, cand));
                }
            }
        }
    }
    best.map(|(_, d)| d)
}

fn divisors_up_to(n: u64, cap: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            if d <= cap {
                small.push(d);
            }
            let q = n / d;
            if q != d && q <= cap {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let a = BigInt::from(a);
    let m = BigInt::from(modulus);
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let inv = e.x.mod_floor(&m);
    inv.to_u64()
}

// ---------------------------------------------------------------------------
// Reporting

#[derive(Clone, Debug, Serialize)]
pub struct CostRow {
    pub target: String,
    pub cost: u64,
    pub log_sum: f64,
    /// cost / ln(num + den); None for target 0.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CostReport {
    pub rows: Vec<CostRow>,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
}

/// Decomposes every sample and reports cost against log(num + den).
pub fn cost_report(samples: &[Rational], budget: &SearchBudget) -> Result<CostReport> {
    let mut rows = Vec::with_capacity(samples.len());
    let mut ratios = Vec::new();
    for q in samples {
        let dec = decompose_search(q, budget)?;
        let cost = dec.cost();
        if q.is_zero() {
            rows.push(CostRow {
                target: q.to_string(),
                cost,
                log_sum: 0.0,
                ratio: None,
            });
            continue;
        }
        let sum = (q.numer() + q.denom())
            .to_f64()
            .unwrap_or(f64::INFINITY);
        let log_sum = sum.ln();
        let ratio = cost as f64 / log_sum;
        ratios.push(ratio);
        rows.push(CostRow {
            target: q.to_string(),
            cost,
            log_sum,
            ratio: Some(ratio),
        });
    }
    let max_ratio = ratios.iter().copied().fold(None, |acc: Option<f64>, r| {
        Some(acc.map_or(r, |a| a.max(r)))
    });
    let mean_ratio = if ratios.is_empty() {
        None
    } else {
        Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
    };
    Ok(CostReport {
        rows,
        max_ratio,
        mean_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn trivial_cases() {
        let d = decompose_trivial(&rat_int(0)).unwrap();
        assert!(d.parts.is_empty());
        assert_eq!(d.cost(), 0);
        assert!(d.is_valid());

        let d = decompose_trivial(&rat(1, 2)).unwrap();
        assert_eq!(d.parts, vec![rat(1, 2)]);
        assert_eq!(d.cost(), 2);

        // 4/7 = [0; 1, 1, 3].
        let d = decompose_trivial(&rat(4, 7)).unwrap();
        assert_eq!(d.cost(), 5);

        assert!(decompose_trivial(&rat_int(1)).is_err());
        assert!(decompose_trivial(&rat(-1, 2)).is_err());
    }

    #[test]
    fn search_keeps_cheap_targets_trivial() {
        let b = SearchBudget::default();
        let d = decompose_search(&rat(1, 2), &b).unwrap();
        assert_eq!(d.parts, vec![rat(1, 2)]);
        assert_eq!(d.cost(), 2);

        let d = decompose_search(&rat_int(0), &b).unwrap();
        assert!(d.parts.is_empty());
    }

    /// Independent oracle: exhaust all two-part splits with denominators up
    /// to 64 and return the cheapest cost for the target.
    fn exhaustive_two_term_min(target: &Rational, max_den: i64) -> u64 {
        let mut best = u64::MAX;
        for b1 in 2..=max_den {
            for a1 in -(b1 - 1)..b1 {
                if a1 == 0 {
                    continue;
                }
                let q1 = rat(a1, b1);
                let q2 = target - &q1;
                if q2.is_zero() || q2.abs() >= Rational::one() {
                    continue;
                }
                if q2.denom() > &BigInt::from(max_den) {
                    continue;
                }
                best = best.min(s_of(&q1.abs()) + s_of(&q2.abs()));
            }
        }
        best
    }

    #[test]
    fn fibonacci_denominator_fixture() {
        // 7/8 (Fibonacci denominator F_6 = 8) has S = 8 but splits as
        // 1/2 + 3/8 at cost 2 + 5 = 7. The exhaustive oracle confirms no
        // two-term split does better.
        let target = rat(7, 8);
        assert_eq!(s_of(&target), 8);
        assert_eq!(exhaustive_two_term_min(&target, 64), 7);

        let d = decompose_search(&target, &SearchBudget::default()).unwrap();
        assert_eq!(d.cost(), 7);
        assert_eq!(d.parts, vec![rat(1, 2), rat(3, 8)]);
        assert!(d.is_valid());
    }

    #[test]
    fn denominator_split_cracks_hard_unit_fractions() {
        // S(1/999) = 999, but 999 = 27 * 37 splits it as 11/37 - 8/27 at
        // cost S(11/37) + S(8/27) = 9 + 8 = 17.
        let target = rat(1, 999);
        assert_eq!(s_of(&target), 999);
        let d = decompose_search(&target, &SearchBudget::default()).unwrap();
        assert!(d.is_valid());
        assert!(d.cost() <= 17, "cost {} too high", d.cost());
        assert!(d.parts.len() == 2);
    }

    #[test]
    fn search_is_deterministic() {
        let b = SearchBudget::default();
        for (p, q) in [(7i64, 8i64), (1, 999), (13, 89), (4, 7), (355, 10000)] {
            let t = rat(p, q);
            let a = decompose_search(&t, &b).unwrap();
            let c = decompose_search(&t, &b).unwrap();
            assert_eq!(a, c);
            assert!(a.is_valid());
            assert!(a.cost() <= decompose_trivial(&t).unwrap().cost());
        }
    }

    #[test]
    fn report_skips_zero() {
        let b = SearchBudget::default();
        let report = cost_report(&[rat_int(0), rat(1, 2)], &b).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].ratio.is_none());
        assert_eq!(report.rows[1].cost, 2);
        assert!(report.max_ratio.is_some());
    }

    #[test]
    fn json_shape() {
        let d = decompose_search(&rat(7, 8), &SearchBudget::default()).unwrap();
        let js = serde_json::to_value(&d).unwrap();
        assert_eq!(js["target"], "7/8");
        assert_eq!(js["cost"], 7);
        assert_eq!(js["parts"][0], "1/2");
    }
}
