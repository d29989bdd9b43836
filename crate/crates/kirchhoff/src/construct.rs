//! The realization pipeline: given a reduced target resistance c/t in (0,1),
//! build a simple planar proper marked graph whose effective resistance is
//! exactly c/t, and certify it against the matrix-tree oracle.
//!
//! Every route reduces to the same two moves. `cf_graph` compiles the
//! continued fraction of a positive ratio into alternating duplications and
//! subdivisions of a single marked edge, hitting the ratio with
//! S(ratio) + 1 edges. `graph_sum` glues several such graphs along their
//! marked edges so the ratios add. On top of that sit three routes borrowed
//! from the size analysis: `realize_large` shifts a short decomposition of
//! the fractional part into positive summands, `realize_mid` steers the
//! target into a window whose reciprocal is large and takes a plane dual,
//! and `realize_small` handles ratios below 1 by dualizing the reciprocal.
//! `realize` runs every applicable route and certifies the smallest result.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Audit};
use crate::cf::ContinuedFraction;
use crate::decompose::{decompose_search, s_of, SearchBudget};
use crate::error::{Error, Result};
use crate::graph::MarkedGraph;
use crate::rational::{floor_int, frac_part, log2_upper, Rational};
use crate::tau::{self, TauTriple};
use crate::term::SpTerm;

/// Construction ceiling; guards against targets whose continued fraction
/// would demand an unbuildable graph.
const EDGE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplifyMode {
    /// Simplify exactly when the materialization is not simple. Produces
    /// smaller graphs; the default for realization.
    IfNeeded,
    /// Always simplify. Matches the exact edge-count formulas
    /// |E| = 4(S(q1) + ... + S(qk)) + 1.
    Always,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Direct,
    Large,
    Mid,
    Small,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strategy::Direct => "direct",
            Strategy::Large => "large",
            Strategy::Mid => "mid",
            Strategy::Small => "small",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "large" => Ok(Strategy::Large),
            "mid" => Ok(Strategy::Mid),
            "small" => Ok(Strategy::Small),
            other => Err(Error::OutOfRange(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructorConfig {
    /// Stand-in for the unknown universal constant governing decomposition
    /// cost; only sizes depend on it, never correctness.
    pub c0_hat: Rational,
    pub search: SearchBudget,
    pub simplify: SimplifyMode,
    pub strategies: Vec<Strategy>,
}

impl Default for ConstructorConfig {
    fn default() -> Self {
        ConstructorConfig {
            c0_hat: Rational::one(),
            search: SearchBudget::default(),
            simplify: SimplifyMode::IfNeeded,
            strategies: vec![
                Strategy::Direct,
                Strategy::Large,
                Strategy::Mid,
                Strategy::Small,
            ],
        }
    }
}

impl ConstructorConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.c0_hat.is_positive() {
            return Err(Error::OutOfRange("c0_hat must be positive".into()));
        }
        Ok(())
    }

    /// 4 * c0_hat + 5.
    pub fn c1(&self) -> Rational {
        Rational::from_integer(BigInt::from(4)) * &self.c0_hat
            + Rational::from_integer(BigInt::from(5))
    }

    /// 16 * c1^2 + 72 * c1 + 77.
    pub fn c2(&self) -> Rational {
        let c1 = self.c1();
        Rational::from_integer(BigInt::from(16)) * &c1 * &c1
            + Rational::from_integer(BigInt::from(72)) * &c1
            + Rational::from_integer(BigInt::from(77))
    }
}

/// Compiles a positive ratio into a marked graph with tree ratio exactly
/// `ratio`, via its continued fraction [a0; a1, ..., al] normalized to even
/// length: duplications contribute the even-index quotients, subdivisions
/// the odd-index ones, innermost first, and the edge count lands on
/// S(ratio) + 1. The parity normalization makes the innermost operation a
/// duplication, which matters because subdividing the bare seed would be
/// absorbed by its zero ratio.
pub fn cf_graph(ratio: &Rational) -> Result<SpTerm> {
    if !ratio.is_positive() {
        return Err(Error::OutOfRange(format!("{ratio} is not positive")));
    }
    let cf = ContinuedFraction::from_rational(ratio)?.with_parity(true)?;
    if cf.s_u64() >= EDGE_CAP {
        return Err(Error::ConstructionTooLarge {
            cap: EDGE_CAP as usize,
        });
    }
    let mut term = SpTerm::single_edge();
    for (i, a) in cf.quotients().iter().enumerate().rev() {
        let k = a.to_usize().ok_or(Error::ConstructionTooLarge {
            cap: EDGE_CAP as usize,
        })?;
        term = if i % 2 == 0 {
            term.duplicate(k)
        } else {
            term.subdivide(k)
        };
    }
    Ok(term)
}

fn finish(term: SpTerm, mode: SimplifyMode) -> Result<SpTerm> {
    match mode {
        SimplifyMode::Always => term.simplify(),
        SimplifyMode::IfNeeded => {
            if term.materialize().is_simple() {
                Ok(term)
            } else {
                term.simplify()
            }
        }
    }
}

/// Marked sum of the compiled graphs of the given positive parts; the tree
/// ratio is the sum of the parts. With `SimplifyMode::Always` the edge
/// count is exactly 4 * (S(q1) + ... + S(qk)) + 1.
pub fn graph_sum(parts: &[Rational], mode: SimplifyMode) -> Result<SpTerm> {
    if parts.is_empty() {
        return Err(Error::OutOfRange("graph sum of no parts".into()));
    }
    if let Some(bad) = parts.iter().find(|p| !p.is_positive()) {
        return Err(Error::OutOfRange(format!(
            "graph sum part {bad} is not positive"
        )));
    }
    let mut terms = parts.iter().map(cf_graph).collect::<Result<Vec<_>>>()?;
    let mut acc = terms.remove(0);
    for t in terms {
        acc = acc.marked_sum(&t)?;
    }
    finish(acc, mode)
}

/// Realizes a ratio >= 1 by decomposing its fractional part into short
/// summands in (-1,1) and shifting them positive: the first part absorbs
/// floor(ratio) - k + 1, every other part is shifted by 1. Needs at most
/// floor(ratio) parts; adjacent parts are merged greedily if the
/// decomposition returned more.
pub fn realize_large(ratio: &Rational, config: &ConstructorConfig) -> Result<SpTerm> {
    finish(shifted_sum_term(ratio, config)?, config.simplify)
}

/// The large-route marked sum before any simplification.
fn shifted_sum_term(ratio: &Rational, config: &ConstructorConfig) -> Result<SpTerm> {
    if ratio < &Rational::one() {
        return Err(Error::OutOfRange(format!(
            "{ratio} < 1, large route needs ratio >= 1"
        )));
    }
    let floor = floor_int(ratio);
    let dec = decompose_search(&frac_part(ratio), &config.search)?;
    let mut parts = dec.parts;
    merge_into_at_most(&mut parts, &floor)?;
    if parts.is_empty() {
        parts.push(Rational::zero());
    }
    let k = BigInt::from(parts.len());
    let one = Rational::one();
    let mut shifted = Vec::with_capacity(parts.len());
    shifted.push(Rational::from_integer(&floor - &k + 1) + &parts[0]);
    for p in &parts[1..] {
        shifted.push(&one + p);
    }
    debug_assert_eq!(shifted.iter().sum::<Rational>(), *ratio);
    debug_assert!(shifted.iter().all(|q| q.is_positive()));
    let mut terms = shifted.iter().map(cf_graph).collect::<Result<Vec<_>>>()?;
    let mut acc = terms.remove(0);
    for t in terms {
        acc = acc.marked_sum(&t)?;
    }
    Ok(acc)
}

/// Greedy adjacent merging: parts in (-1,1), reduced to at most `max` of
/// them. Merging only ever crosses a pair whose sum stays inside (-1,1);
/// the cheapest merged S goes first. Zero parts drop out.
fn merge_into_at_most(parts: &mut Vec<Rational>, max: &BigInt) -> Result<()> {
    let one = Rational::one();
    parts.retain(|p| !p.is_zero());
    while BigInt::from(parts.len()) > *max {
        let mut best: Option<(usize, u64)> = None;
        for i in 0..parts.len() - 1 {
            let merged = (&parts[i] + &parts[i + 1]).abs();
            if merged < one {
                let s = if merged.is_zero() { 0 } else { s_of(&merged) };
                if best.map_or(true, |(_, bs)| s < bs) {
                    best = Some((i, s));
                }
            }
        }
        let Some((i, _)) = best else {
            return Err(Error::TooManyParts {
                parts: parts.len(),
                max: max.to_usize().unwrap_or(usize::MAX),
            });
        };
        let right = parts.remove(i + 1);
        parts[i] += right;
        parts.retain(|p| !p.is_zero());
    }
    Ok(())
}

/// Realizes a ratio >= 1 through the window construction with the window
/// size given by the configured constants.
pub fn realize_mid(ratio: &Rational, config: &ConstructorConfig) -> Result<SpTerm> {
    let k_int = mid_window_size(ratio, config)?;
    realize_mid_with_window(ratio, &k_int, config)
}

fn realize_mid_with_window(
    ratio: &Rational,
    k_int: &BigInt,
    config: &ConstructorConfig,
) -> Result<SpTerm> {
    finish(mid_sum_term(ratio, k_int, config)?, config.simplify)
}

/// The window construction for an explicit window count K >= 2, before any
/// simplification: pick the unique L in {0..K-1} putting (ratio - L/K)
/// mod 1 into [1/K, 2/K), realize the reciprocal of that remainder (which
/// is >= K/2), dualize, and add back the difference, which is an integer
/// multiple of 1/K. Any K gives an exact construction; K only steers size.
fn mid_sum_term(
    ratio: &Rational,
    k_int: &BigInt,
    config: &ConstructorConfig,
) -> Result<SpTerm> {
    if ratio < &Rational::one() {
        return Err(Error::OutOfRange(format!(
            "{ratio} < 1, mid route needs ratio >= 1"
        )));
    }
    let k_rat = Rational::from_integer(k_int.clone());
    let f = frac_part(ratio);
    // (floor(K f) - 1) mod K is the unique L with (f - L/K) mod 1 in [1/K, 2/K).
    let l = num_integer::Integer::mod_floor(&(floor_int(&(&k_rat * &f)) - 1), k_int);
    let window = frac_part(&(ratio - Rational::new(l, k_int.clone())));
    debug_assert!(
        window >= k_rat.recip() && window < Rational::new(BigInt::from(2), k_int.clone())
    );
    let inner_target = window.recip();
    // The inner size is dominated by floor(inner_target) ~ K, so a deep
    // enumeration for its fractional part cannot pay for itself here.
    let mut inner_config = config.clone();
    inner_config.search.cost_cap = inner_config.search.cost_cap.min(8);
    let inner =
        shifted_sum_term(&inner_target, &inner_config).or_else(|_| cf_graph(&inner_target))?;
    let dualized = inner.dual()?;
    let rest = ratio - &window;
    debug_assert!((&k_rat * &rest).is_integer());
    debug_assert!(rest.is_positive());
    dualized.marked_sum(&cf_graph(&rest)?)
}

/// Window counts the portfolio probes: the configured formula value plus a
/// few fixed small windows. The formula value is what the size analysis
/// prescribes; the small ones often win outright at desk scale, and every
/// candidate is verified exactly, so probing costs nothing but time.
fn window_sweep(ratio: &Rational, config: &ConstructorConfig) -> Vec<BigInt> {
    let mut ks = Vec::new();
    if let Ok(k) = mid_window_size(ratio, config) {
        ks.push(k);
    }
    for k in [64u32, 32, 16, 8] {
        let k = BigInt::from(k);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    ks
}

/// K = 4 * ceil(C1 * log2-upper-bound(c + d)) for ratio d/c.
fn mid_window_size(ratio: &Rational, config: &ConstructorConfig) -> Result<BigInt> {
    let sum = (ratio.numer() + ratio.denom())
        .to_biguint()
        .expect("positive ratio");
    let log_ub = Rational::from_integer(BigInt::from(log2_upper(&sum)));
    let k = (config.c1() * log_ub).ceil().to_integer() * 4;
    if k < BigInt::from(2) {
        return Err(Error::OutOfRange(
            "window size collapsed; c0_hat too small".into(),
        ));
    }
    Ok(k)
}

/// Realizes a ratio in (0,1) as the plane dual of its reciprocal's
/// realization, simplified.
pub fn realize_small(ratio: &Rational, config: &ConstructorConfig) -> Result<SpTerm> {
    if !crate::rational::is_proper_fraction(ratio) {
        return Err(Error::OutOfRange(format!("{ratio} is not in (0,1)")));
    }
    let inner = realize_mid(&ratio.recip(), config)?;
    small_from_inner(inner, config)
}

/// Portfolio variant of the small route: dual of the unsimplified window
/// construction for the reciprocal, simplified once at the end. Same exact
/// ratio as `realize_small`, without the intermediate simplification pass.
fn realize_small_with_window(
    ratio: &Rational,
    k_int: &BigInt,
    config: &ConstructorConfig,
) -> Result<SpTerm> {
    if !crate::rational::is_proper_fraction(ratio) {
        return Err(Error::OutOfRange(format!("{ratio} is not in (0,1)")));
    }
    let inner = mid_sum_term(&ratio.recip(), k_int, config)?;
    small_from_inner(inner, config)
}

fn small_from_inner(inner: SpTerm, config: &ConstructorConfig) -> Result<SpTerm> {
    let dualized = inner.dual()?;
    match config.simplify {
        SimplifyMode::Always => dualized.simplify(),
        SimplifyMode::IfNeeded => finish(dualized, SimplifyMode::IfNeeded),
    }
}

// ---------------------------------------------------------------------------
// Certificates

pub(crate) mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(
        v: &T,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> std::result::Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A realized construction together with everything needed to re-verify it
/// from the graph alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "serde_str")]
    pub target: Rational,
    pub graph: MarkedGraph,
    #[serde(with = "serde_str")]
    pub term: SpTerm,
    #[serde(with = "serde_str")]
    pub tau_g: BigInt,
    #[serde(with = "serde_str")]
    pub tau_del: BigInt,
    #[serde(with = "serde_str")]
    pub tau_con: BigInt,
    #[serde(with = "serde_str")]
    pub zeta: Rational,
    #[serde(with = "serde_str")]
    pub resistance: Rational,
    pub v_count: usize,
    pub e_count: usize,
    /// max{t/c, t/(t-c), log2-upper-bound(t)} for the target c/t.
    #[serde(with = "serde_str")]
    pub bound_value: Rational,
    /// v_count / bound_value: the constant this construction achieves.
    #[serde(with = "serde_str")]
    pub size_ratio: Rational,
    pub strategy: Strategy,
    pub audits: Vec<Audit>,
}

impl Certificate {
    pub fn all_audits_pass(&self) -> bool {
        self.audits.iter().all(|a| a.pass)
    }
}

/// max{t/c, t/(t-c), log2-upper-bound(t)} as an exact rational.
pub fn bound_value_for(target: &Rational) -> Result<Rational> {
    if !crate::rational::is_proper_fraction(target) {
        return Err(Error::OutOfRange(format!("{target} is not in (0,1)")));
    }
    let c = target.numer();
    let t = target.denom();
    let log_term = Rational::from_integer(BigInt::from(log2_upper(
        &t.to_biguint().expect("positive"),
    )));
    Ok(bounds::max_bound(
        &Rational::new(t.clone(), c.clone()),
        &Rational::new(t.clone(), t - c),
        &log_term,
    ))
}

fn rejected(target: &Rational) -> Error {
    Error::OutOfRange(format!(
        "target must be a reduced fraction c/t with 1 <= c < t, got {target}"
    ))
}

fn split_target(target: &Rational) -> Result<(BigInt, BigInt)> {
    if !crate::rational::is_proper_fraction(target) {
        return Err(rejected(target));
    }
    Ok((target.numer().clone(), target.denom().clone()))
}

/// Realizes the target resistance and returns a fully audited certificate.
/// Tries every applicable strategy, verifies candidates smallest first
/// against the matrix-tree oracle, and keeps the first exact match.
pub fn realize(target: &Rational, config: &ConstructorConfig) -> Result<Certificate> {
    config.validate()?;
    let (c, t) = split_target(target)?;
    // Resistance c/t corresponds to tree ratio (t - c)/c.
    let ratio = Rational::new(&t - &c, c);
    let one = Rational::one();

    let mut candidates: Vec<(Strategy, SpTerm, MarkedGraph)> = Vec::new();
    // Smallest simple candidate built so far; lets hopeless window probes
    // be skipped before paying for their construction.
    let mut best_simple_v: Option<usize> = None;
    let mut push = |cands: &mut Vec<(Strategy, SpTerm, MarkedGraph)>,
                    best: &mut Option<usize>,
                    strategy: Strategy,
                    term: Result<SpTerm>| {
        if let Ok(term) = term {
            let graph = term.materialize();
            if graph.is_simple() {
                *best = Some(best.map_or(graph.n, |b| b.min(graph.n)));
            }
            cands.push((strategy, term, graph));
        }
    };
    // A window-K construction has at least (K/2 - 1) inner edges and its
    // simple materialization at least (E + 6)/3 vertices, so it cannot beat
    // a simple candidate that is already well below K/6 vertices.
    let probe_hopeless = |k: &BigInt, best: &Option<usize>| match best {
        Some(v) => BigInt::from(6 * *v + 16) <= *k,
        None => false,
    };
    for strategy in &config.strategies {
        match strategy {
            Strategy::Direct => push(
                &mut candidates,
                &mut best_simple_v,
                Strategy::Direct,
                cf_graph(&ratio).and_then(|g| finish(g, config.simplify)),
            ),
            Strategy::Large if ratio >= one => push(
                &mut candidates,
                &mut best_simple_v,
                Strategy::Large,
                realize_large(&ratio, config),
            ),
            Strategy::Mid if ratio >= one => {
                for k in window_sweep(&ratio, config) {
                    if probe_hopeless(&k, &best_simple_v) {
                        continue;
                    }
                    push(
                        &mut candidates,
                        &mut best_simple_v,
                        Strategy::Mid,
                        realize_mid_with_window(&ratio, &k, config),
                    );
                }
            }
            Strategy::Small if ratio < one => {
                for k in window_sweep(&ratio.recip(), config) {
                    if probe_hopeless(&k, &best_simple_v) {
                        continue;
                    }
                    push(
                        &mut candidates,
                        &mut best_simple_v,
                        Strategy::Small,
                        realize_small_with_window(&ratio, &k, config),
                    );
                }
            }
            _ => {}
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoStrategySucceeded(target.to_string()));
    }
    // Smallest first; verification order never changes the winner because
    // anything skipped is at least as large as the verified pick.
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| (candidates[i].2.n, candidates[i].2.edge_count(), i));
    for i in order {
        let (strategy, term, graph) = &candidates[i];
        if !graph.is_simple() || !graph.is_proper() {
            continue;
        }
        let triple = tau::tau_triple(graph);
        let resistance = Rational::new(triple.contracted.clone(), triple.whole.clone());
        if &resistance == target {
            return certify(target, *strategy, term.clone(), graph.clone(), triple);
        }
    }
    Err(Error::NoStrategySucceeded(target.to_string()))
}

fn certify(
    target: &Rational,
    strategy: Strategy,
    term: SpTerm,
    graph: MarkedGraph,
    triple: TauTriple,
) -> Result<Certificate> {
    let zeta = Rational::new(triple.deleted.clone(), triple.contracted.clone());
    let resistance = Rational::new(triple.contracted.clone(), triple.whole.clone());
    let bound_value = bound_value_for(target)?;
    let size_ratio = Rational::from_integer(BigInt::from(graph.n)) / &bound_value;
    let audits = audit_graph(target, &graph, Some(&term), &triple);
    Ok(Certificate {
        target: target.clone(),
        v_count: graph.n,
        e_count: graph.edge_count(),
        graph,
        term,
        tau_g: triple.whole,
        tau_del: triple.deleted,
        tau_con: triple.contracted,
        zeta,
        resistance,
        bound_value,
        size_ratio,
        strategy,
        audits,
    })
}

/// The full audit list for a graph claimed to realize `target`, computed
/// from the given tau values. Every named check is a theorem for simple
/// planar proper marked graphs, so failures mean bugs.
pub fn audit_graph(
    target: &Rational,
    graph: &MarkedGraph,
    term: Option<&SpTerm>,
    triple: &TauTriple,
) -> Vec<Audit> {
    let mut audits = Vec::with_capacity(16);
    let resistance = if triple.whole.is_zero() {
        Rational::zero()
    } else {
        Rational::new(triple.contracted.clone(), triple.whole.clone())
    };
    let v = graph.n;
    let e = graph.edge_count();

    audits.push(Audit::new(
        "resistance-equals-target",
        &resistance == target,
        &resistance,
        target,
    ));
    audits.push(Audit::new(
        "deletion-contraction",
        &triple.deleted + &triple.contracted == triple.whole,
        format!("{} + {}", triple.deleted, triple.contracted),
        &triple.whole,
    ));
    audits.push(Audit::new("simple", graph.is_simple(), "simple", "required"));
    audits.push(Audit::new("proper", graph.is_proper(), "proper", "required"));
    if let Some(term) = term {
        audits.push(Audit::new(
            "term-materializes-to-graph",
            &term.materialize() == graph,
            "materialize(term)",
            "graph",
        ));
        let zeta = term.zeta();
        audits.push(Audit::new(
            "resistance-zeta-identity",
            (Rational::one() + &zeta).recip() == resistance,
            format!("1/(1+{zeta})"),
            &resistance,
        ));
    }
    let commute_rhs = bounds::commute_bound_rhs(graph);
    audits.push(Audit::new(
        "commute-bound",
        resistance >= commute_rhs,
        &resistance,
        &commute_rhs,
    ));
    match bounds::lower_bound_value(target) {
        Ok(lower) => audits.push(Audit::new(
            "vertex-lower-bound",
            Rational::from_integer(BigInt::from(v)) >= lower,
            v,
            &lower,
        )),
        Err(_) => audits.push(Audit::new("vertex-lower-bound", false, v, "undefined")),
    }
    let (v3, e3) = (v as i64, e as i64);
    audits.push(Audit::new(
        "euler-edge-bound",
        e3 <= 3 * v3 - 6,
        e3,
        3 * v3 - 6,
    ));
    audits.push(Audit::new(
        "euler-face-bound",
        (e3 - v3 + 2) <= 2 * v3 - 4,
        e3 - v3 + 2,
        2 * v3 - 4,
    ));
    audits.push(Audit::new(
        "tau-below-2-pow-edges",
        triple.whole < (BigInt::one() << e),
        &triple.whole,
        format!("2^{e}"),
    ));
    audits.push(Audit::new(
        "tau-below-2-pow-3v",
        bounds::tau_vertex_bound_holds(v, &triple.whole),
        &triple.whole,
        format!("2^{}", 3 * v),
    ));
    audits.push(Audit::new(
        "tau-growth-5.23",
        bounds::tau_growth_holds(v, &triple.whole),
        &triple.whole,
        format!("(523/100)^{v}"),
    ));
    let t_over_c = target.recip();
    audits.push(Audit::new(
        "vertices-exceed-t-over-c",
        Rational::from_integer(BigInt::from(v)) > t_over_c,
        v,
        &t_over_c,
    ));
    let (c, t) = (target.numer().clone(), target.denom().clone());
    let half_t_over_d = Rational::new(t.clone(), (t - c) * BigInt::from(2));
    audits.push(Audit::new(
        "vertices-exceed-half-t-over-d",
        Rational::from_integer(BigInt::from(v)) > half_t_over_d,
        v,
        &half_t_over_d,
    ));
    audits
}

/// Recomputes every count from the certificate's graph alone and re-runs
/// the audit list, plus consistency checks against the stored values.
pub fn verify_certificate(cert: &Certificate) -> Vec<Audit> {
    let mut audits = Vec::new();
    if let Err(e) = cert.graph.validate() {
        audits.push(Audit::new("graph-valid", false, e, "valid graph"));
        return audits;
    }
    audits.push(Audit::new("graph-valid", true, "valid", "valid"));
    let triple = tau::tau_triple(&cert.graph);
    audits.push(Audit::new(
        "stored-tau-matches",
        triple.whole == cert.tau_g
            && triple.deleted == cert.tau_del
            && triple.contracted == cert.tau_con,
        format!("{}/{}/{}", triple.whole, triple.deleted, triple.contracted),
        format!("{}/{}/{}", cert.tau_g, cert.tau_del, cert.tau_con),
    ));
    audits.push(Audit::new(
        "stored-counts-match",
        cert.v_count == cert.graph.n && cert.e_count == cert.graph.edge_count(),
        format!("{}/{}", cert.graph.n, cert.graph.edge_count()),
        format!("{}/{}", cert.v_count, cert.e_count),
    ));
    let zeta_ok = !triple.contracted.is_zero()
        && Rational::new(triple.deleted.clone(), triple.contracted.clone()) == cert.zeta;
    audits.push(Audit::new(
        "stored-zeta-matches",
        zeta_ok,
        "tau(G-e)/tau(G/e)",
        &cert.zeta,
    ));
    audits.extend(audit_graph(
        &cert.target,
        &cert.graph,
        Some(&cert.term),
        &triple,
    ));
    audits
}

/// Audits an arbitrary marked graph against a target resistance, for
/// graphs that did not come with a certificate.
pub fn audit_external_graph(graph: &MarkedGraph, target: &Rational) -> Result<Vec<Audit>> {
    graph.validate()?;
    split_target(target)?;
    let triple = tau::tau_triple(graph);
    Ok(audit_graph(target, graph, None, &triple))
}

// ---------------------------------------------------------------------------
// Census

#[derive(Clone, Copy, Debug)]
pub enum CensusMode {
    /// Every reduced c/t with 1 <= c < t.
    All,
    /// c = 1, c = t - 1, plus up to (n - 2) deterministic coprime samples.
    SampledPerT(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub t: u64,
    pub c: u64,
    pub strategy: Strategy,
    pub v: usize,
    pub e: usize,
    #[serde(with = "serde_str")]
    pub bound_value: Rational,
    #[serde(with = "serde_str")]
    pub size_ratio: Rational,
    pub all_pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
    /// Targets that failed to realize or failed an audit. Must stay empty.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub max_size_ratio: Option<Rational>,
    #[serde(skip)]
    pub mean_size_ratio: Option<Rational>,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// The census targets for one t under the given mode, ascending in c.
pub fn census_targets_for(t: u64, mode: CensusMode) -> Vec<u64> {
    match mode {
        CensusMode::All => (1..t).filter(|&c| gcd_u64(c, t) == 1).collect(),
        CensusMode::SampledPerT(n) => {
            let mut picks = vec![1];
            if t > 2 {
                picks.push(t - 1);
            }
            if n > picks.len() && t > 4 {
                let mut rng = ChaCha8Rng::seed_from_u64(t);
                let mut middle: Vec<u64> = (2..t - 1).filter(|&c| gcd_u64(c, t) == 1).collect();
                middle.shuffle(&mut rng);
                picks.extend(middle.into_iter().take(n - picks.len()));
            }
            picks.sort_unstable();
            picks.dedup();
            picks
        }
    }
}

/// Realizes every selected target with 2 <= t <= max_t, verifies all
/// audits, and reports sizes against each target's bound value. Rows come
/// back ordered by (t, c) regardless of scheduling.
pub fn census(max_t: u64, config: &ConstructorConfig, mode: CensusMode) -> CensusReport {
    let targets: Vec<(u64, u64)> = (2..=max_t)
        .flat_map(|t| census_targets_for(t, mode).into_iter().map(move |c| (t, c)))
        .collect();
    let results: Vec<std::result::Result<CensusRow, String>> = targets
        .par_iter()
        .map(|&(t, c)| {
            let target = Rational::new(BigInt::from(c), BigInt::from(t));
            match realize(&target, config) {
                Ok(cert) => {
                    if cert.all_audits_pass() {
                        Ok(CensusRow {
                            t,
                            c,
                            strategy: cert.strategy,
                            v: cert.v_count,
                            e: cert.e_count,
                            bound_value: cert.bound_value,
                            size_ratio: cert.size_ratio,
                            all_pass: true,
                        })
                    } else {
                        let bad: Vec<_> = cert
                            .audits
                            .iter()
                            .filter(|a| !a.pass)
                            .map(|a| a.name.clone())
                            .collect();
                        Err(format!("{c}/{t}: failed audits {bad:?}"))
                    }
                }
                Err(e) => Err(format!("{c}/{t}: {e}")),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by_key(|r| (r.t, r.c));
    let max_size_ratio = rows.iter().map(|r| r.size_ratio.clone()).max();
    let mean_size_ratio = if rows.is_empty() {
        None
    } else {
        let sum: Rational = rows.iter().map(|r| r.size_ratio.clone()).sum();
        Some(sum / Rational::from_integer(BigInt::from(rows.len() as u64)))
    };
    CensusReport {
        rows,
        failures,
        max_size_ratio,
        mean_size_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn cfg() -> ConstructorConfig {
        ConstructorConfig::default()
    }

    fn always() -> ConstructorConfig {
        ConstructorConfig {
            simplify: SimplifyMode::Always,
            ..ConstructorConfig::default()
        }
    }

    #[test]
    fn cf_graph_examples() {
        // 3/7 = [0; 2, 3]: duplicate 3, subdivide 2, duplicate 0.
        let g = cf_graph(&rat(3, 7)).unwrap();
        assert_eq!(g.zeta(), rat(3, 7));
        assert_eq!(g.edge_count(), 6);
        let m = g.materialize();
        assert_eq!(tau::tree_ratio(&m).unwrap(), rat(3, 7));

        // 1 = [1]: one duplication, two parallel edges.
        let g = cf_graph(&rat_int(1)).unwrap();
        assert_eq!(g.zeta(), rat_int(1));
        assert_eq!(g.edge_count(), 2);

        // 7/3 = [2; 3]: tau(G-e) = 7 and tau(G/e) = 3 exactly.
        let g = cf_graph(&rat(7, 3)).unwrap();
        assert_eq!(g.edge_count(), 6);
        let m = g.materialize();
        assert_eq!(tau::tau_deleted(&m), BigInt::from(7));
        assert_eq!(tau::tau_contracted(&m), BigInt::from(3));

        assert!(cf_graph(&rat_int(0)).is_err());
        assert!(cf_graph(&rat(-1, 2)).is_err());
    }

    #[test]
    fn graph_sum_edge_formula() {
        let g = graph_sum(&[rat(1, 2), rat(1, 2)], SimplifyMode::Always).unwrap();
        assert_eq!(g.zeta(), rat_int(1));
        assert_eq!(g.edge_count(), 4 * (2 + 2) + 1);
        assert!(g.materialize().is_simple());

        let g = graph_sum(&[rat_int(1)], SimplifyMode::Always).unwrap();
        assert_eq!(g.zeta(), rat_int(1));
        assert_eq!(g.edge_count(), 5);
        let m = g.materialize();
        assert_eq!(tau::tau_deleted(&m), BigInt::from(4));
        assert_eq!(tau::tau_contracted(&m), BigInt::from(4));
        assert_eq!(tau::tau(&m), BigInt::from(8));

        let g = graph_sum(&[rat(3, 7)], SimplifyMode::Always).unwrap();
        assert_eq!(g.zeta(), rat(3, 7));
        assert_eq!(g.edge_count(), 21);

        assert!(graph_sum(&[], SimplifyMode::Always).is_err());
        assert!(graph_sum(&[rat_int(0)], SimplifyMode::Always).is_err());
        assert!(graph_sum(&[rat(-1, 2)], SimplifyMode::Always).is_err());
    }

    #[test]
    fn realize_large_examples() {
        // Integer ratio: trivial decomposition of 0.
        let g = realize_large(&rat_int(5), &cfg()).unwrap();
        assert_eq!(g.zeta(), rat_int(5));

        // 7/2: floor 3, fractional part 1/2, single shifted part 7/2.
        let g = realize_large(&rat(7, 2), &cfg()).unwrap();
        assert_eq!(g.zeta(), rat(7, 2));
        let m = g.materialize();
        assert_eq!(tau::tree_ratio(&m).unwrap(), rat(7, 2));
        assert!(m.is_simple());

        assert!(realize_large(&rat(1, 2), &cfg()).is_err());
    }

    #[test]
    fn merge_caps_part_count() {
        let mut parts = vec![rat(1, 2), rat(-1, 3), rat(1, 12)];
        merge_into_at_most(&mut parts, &BigInt::from(2)).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts.iter().sum::<Rational>(), rat(1, 4));

        // A pair summing to zero merges and drops out entirely.
        let mut parts = vec![rat(1, 2), rat(-1, 2)];
        merge_into_at_most(&mut parts, &BigInt::from(1)).unwrap();
        assert!(parts.is_empty());
    }

    #[test]
    fn realize_mid_examples() {
        let g = realize_mid(&rat(3, 2), &cfg()).unwrap();
        assert_eq!(g.zeta(), rat(3, 2));
        let m = g.materialize();
        assert!(m.is_simple());
        assert!(m.is_proper());
        assert_eq!(tau::tree_ratio(&m).unwrap(), rat(3, 2));

        assert!(realize_mid(&rat(1, 2), &cfg()).is_err());
    }

    #[test]
    fn mid_window_is_unique() {
        // Exactly one L in {0..K-1} puts the shifted fraction in the window.
        for (d, c) in [(3i64, 2i64), (7, 2), (5, 1), (1000, 999), (13, 8)] {
            let ratio = rat(d, c);
            let k = mid_window_size(&ratio, &cfg()).unwrap();
            let k_rat = Rational::from_integer(k.clone());
            let lo = k_rat.recip();
            let hi = Rational::new(BigInt::from(2), k.clone());
            let mut count = 0;
            let mut l = BigInt::zero();
            while l < k {
                let w = frac_part(&(&ratio - Rational::new(l.clone(), k.clone())));
                if w >= lo && w < hi {
                    count += 1;
                }
                l += 1;
            }
            assert_eq!(count, 1, "ratio {ratio}");
        }
    }

    #[test]
    fn realize_small_examples() {
        let g = realize_small(&rat(1, 2), &cfg()).unwrap();
        assert_eq!(g.zeta(), rat(1, 2));
        let m = g.materialize();
        assert!(m.is_simple() && m.is_proper());
        assert_eq!(tau::tree_ratio(&m).unwrap(), rat(1, 2));

        let g = realize_small(&rat(3, 7), &cfg()).unwrap();
        assert_eq!(g.zeta(), rat(3, 7));

        assert!(realize_small(&rat(3, 2), &cfg()).is_err());
    }

    #[test]
    fn small_route_edge_formula() {
        // With unconditional simplification the final dual-then-simplify
        // step maps |E| to 4(|E| - 1) + 1 over the inner realization.
        let config = always();
        let inner = realize_mid(&rat(7, 3), &config).unwrap();
        let small = realize_small(&rat(3, 7), &config).unwrap();
        assert_eq!(small.edge_count(), 4 * (inner.edge_count() - 1) + 1);
    }

    #[test]
    fn realize_portfolio() {
        let cert = realize(&rat(2, 3), &cfg()).unwrap();
        assert_eq!(cert.resistance, rat(2, 3));
        assert_eq!(cert.zeta, rat(1, 2));
        assert!(cert.all_audits_pass());
        assert!(cert.graph.is_simple());

        let cert = realize(&rat(1, 2), &cfg()).unwrap();
        assert_eq!(cert.resistance, rat(1, 2));
        assert!(cert.all_audits_pass());

        assert!(realize(&rat_int(1), &cfg()).is_err());
        assert!(realize(&rat(3, 3), &cfg()).is_err());
        assert!(realize(&rat(5, 3), &cfg()).is_err());
    }

    #[test]
    fn certificate_verified_from_graph_alone() {
        let cert = realize(&rat(4, 11), &cfg()).unwrap();
        let audits = verify_certificate(&cert);
        assert!(audits.iter().all(|a| a.pass), "{audits:?}");

        // Tampering with a stored count must be caught.
        let mut bad = cert.clone();
        bad.tau_g += 1;
        let audits = verify_certificate(&bad);
        assert!(audits
            .iter()
            .any(|a| a.name == "stored-tau-matches" && !a.pass));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = realize(&rat(2, 5), &cfg()).unwrap();
        let js = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&js).unwrap();
        assert_eq!(back.graph, cert.graph);
        assert_eq!(back.tau_g, cert.tau_g);
        assert_eq!(back.target, cert.target);
        assert!(verify_certificate(&back).iter().all(|a| a.pass));
    }

    #[test]
    fn census_small() {
        let report = census(3, &cfg(), CensusMode::All);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        let targets: Vec<_> = report.rows.iter().map(|r| (r.t, r.c)).collect();
        assert_eq!(targets, vec![(2, 1), (3, 1), (3, 2)]);
        assert!(report.rows.iter().all(|r| r.all_pass));
        assert!(report.max_size_ratio.is_some());
    }

    #[test]
    fn config_constants() {
        let config = cfg();
        assert_eq!(config.c1(), rat_int(9));
        assert_eq!(config.c2(), rat_int(16 * 81 + 72 * 9 + 77));
        let bad = ConstructorConfig {
            c0_hat: rat_int(0),
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn bound_value_examples() {
        // t = 5: log2-upper(5) = 3 dominates max{5/2, 5/3, 3}.
        assert_eq!(bound_value_for(&rat(2, 5)).unwrap(), rat_int(3));
        // t = 5, c = 1: t/c = 5 dominates.
        assert_eq!(bound_value_for(&rat(1, 5)).unwrap(), rat_int(5));
        // t = 2: max{2, 2, log2-upper(2) = 2} = 2.
        assert_eq!(bound_value_for(&rat(1, 2)).unwrap(), rat_int(2));
    }
}
