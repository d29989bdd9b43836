//! Series-parallel terms for marked graphs.
//!
//! A term describes the two-terminal network `H = G - e` strung between the
//! endpoints of the marked edge `e`; the marked edge itself is implicit. The
//! whole marked graph is recovered by [`SpTerm::materialize`], which adds the
//! marked edge back. The spanning tree ratio of the marked graph equals the
//! effective conductance of `H` between its terminals, so it can be read off
//! the term structurally: leaves conduct 1, parallel parts add conductance,
//! series parts add resistance.
//!
//! `Open` is the seed: a marked single edge, whose deletion leaves the two
//! terminals disconnected. The algebra keeps terms in a flattened normal
//! form (no series child of a series node, no parallel child of a parallel
//! node, `Open` absorbed inside parallel nodes). `Open` can end up nested
//! under a series node only by subdividing an improper term; the pipeline
//! never produces that, since it always duplicates first.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::MarkedGraph;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpTerm {
    /// No connection between the terminals: the seed single-edge marked graph.
    Open,
    /// A single unit edge between the terminals.
    Leaf,
    /// Children chained end to end (at least two, none of them Series).
    Series(Vec<SpTerm>),
    /// Children sharing both terminals (at least two, none Parallel or Open).
    Parallel(Vec<SpTerm>),
}

use SpTerm::{Leaf, Open, Parallel, Series};

impl SpTerm {
    /// The seed: two vertices joined by the marked edge alone.
    pub fn single_edge() -> Self {
        Open
    }

    /// Series composition, flattening nested series nodes.
    pub fn series(children: Vec<SpTerm>) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Series(gc) => flat.extend(gc),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("series of zero children"),
            1 => flat.pop().unwrap(),
            _ => Series(flat),
        }
    }

    /// Parallel composition, flattening nested parallel nodes and absorbing
    /// `Open` children (they contribute no edges and no conductance).
    pub fn parallel(children: Vec<SpTerm>) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Parallel(gc) => flat.extend(gc),
                Open => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Open,
            1 => flat.pop().unwrap(),
            _ => Parallel(flat),
        }
    }

    /// Replaces the marked edge by `k + 1` parallel edges (one of them the
    /// new marked edge). Adds `k` to the spanning tree ratio.
    pub fn duplicate(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut children = Vec::with_capacity(k + 1);
        children.push(self.clone());
        children.extend(std::iter::repeat(Leaf).take(k));
        Self::parallel(children)
    }

    /// Replaces the marked edge by a path of `k + 1` edges (one of them the
    /// new marked edge). Adds `k` to the reciprocal of the ratio.
    pub fn subdivide(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut children = Vec::with_capacity(k + 1);
        children.extend(std::iter::repeat(Leaf).take(k));
        children.push(self.clone());
        Self::series(children)
    }

    /// Glues two marked graphs along their marked edges. Ratios add.
    pub fn marked_sum(&self, other: &SpTerm) -> Result<Self> {
        if !self.is_proper() || !other.is_proper() {
            return Err(Error::ImproperTerm);
        }
        Ok(Self::parallel(vec![self.clone(), other.clone()]))
    }

    /// Plane dual: series and parallel swap, leaves stay. Inverts the ratio
    /// and preserves the total spanning tree count of the materialization.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_proper() {
            return Err(Error::ImproperTerm);
        }
        Ok(self.dual_unchecked())
    }

    fn dual_unchecked(&self) -> Self {
        match self {
            Open => Open,
            Leaf => Leaf,
            Series(cs) => Self::parallel(cs.iter().map(|c| c.dual_unchecked()).collect()),
            Parallel(cs) => Self::series(cs.iter().map(|c| c.dual_unchecked()).collect()),
        }
    }

    /// Duplicates every non-marked edge; doubles the ratio.
    pub fn double(&self) -> Result<Self> {
        if !self.is_proper() {
            return Err(Error::ImproperTerm);
        }
        Ok(self.map_leaves(&Self::parallel(vec![Leaf, Leaf])))
    }

    /// Subdivides every non-marked edge; halves the ratio.
    pub fn halve(&self) -> Result<Self> {
        if !self.is_proper() {
            return Err(Error::ImproperTerm);
        }
        Ok(self.map_leaves(&Self::series(vec![Leaf, Leaf])))
    }

    /// Doubling followed by halving: keeps the ratio, multiplies the edge
    /// count by four (minus the marked edge), and the result is simple.
    pub fn simplify(&self) -> Result<Self> {
        self.double()?.halve()
    }

    fn map_leaves(&self, replacement: &SpTerm) -> Self {
        match self {
            Open => Open,
            Leaf => replacement.clone(),
            Series(cs) => {
                Self::series(cs.iter().map(|c| c.map_leaves(replacement)).collect())
            }
            Parallel(cs) => {
                Self::parallel(cs.iter().map(|c| c.map_leaves(replacement)).collect())
            }
        }
    }

    /// Spanning tree ratio tau(G-e)/tau(G/e) of the marked graph, computed
    /// structurally. Zero exactly when the marked edge is a bridge.
    pub fn zeta(&self) -> Rational {
        match self {
            Open => Rational::zero(),
            Leaf => Rational::one(),
            Parallel(cs) => cs.iter().map(|c| c.zeta()).sum(),
            Series(cs) => {
                let mut inv = Rational::zero();
                for c in cs {
                    let z = c.zeta();
                    if z.is_zero() {
                        return Rational::zero();
                    }
                    inv += z.recip();
                }
                inv.recip()
            }
        }
    }

    /// Number of leaves, i.e. edges of the materialization minus the marked one.
    pub fn leaves(&self) -> usize {
        match self {
            Open => 0,
            Leaf => 1,
            Series(cs) | Parallel(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    /// Edge count of the materialization.
    pub fn edge_count(&self) -> usize {
        self.leaves() + 1
    }

    pub fn contains_open(&self) -> bool {
        match self {
            Open => true,
            Leaf => false,
            Series(cs) | Parallel(cs) => cs.iter().any(|c| c.contains_open()),
        }
    }

    /// Proper means the marked edge is not a bridge. For terms produced by
    /// this algebra that is exactly "no Open anywhere"; the constructions
    /// that need properness (dual, simplification, marked sum) reject any
    /// term containing Open.
    pub fn is_proper(&self) -> bool {
        !self.contains_open()
    }

    /// Builds the concrete marked multigraph. Terminals are vertices 0 and 1,
    /// internal vertices are numbered in term preorder, and the marked edge
    /// is appended last.
    pub fn materialize(&self) -> MarkedGraph {
        let mut edges = Vec::with_capacity(self.edge_count());
        let mut next = 2usize;
        self.walk(0, 1, &mut next, &mut edges);
        edges.push((0, 1));
        MarkedGraph {
            n: next,
            marked: edges.len() - 1,
            edges,
        }
    }

    fn walk(&self, a: usize, b: usize, next: &mut usize, edges: &mut Vec<(usize, usize)>) {
        match self {
            Open => {}
            Leaf => edges.push((a, b)),
            Series(cs) => {
                let mut points = Vec::with_capacity(cs.len() + 1);
                points.push(a);
                for _ in 0..cs.len() - 1 {
                    points.push(*next);
                    *next += 1;
                }
                points.push(b);
                for (i, c) in cs.iter().enumerate() {
                    c.walk(points[i], points[i + 1], next, edges);
                }
            }
            Parallel(cs) => {
                for c in cs {
                    c.walk(a, b, next, edges);
                }
            }
        }
    }
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Open => write!(f, "O"),
            Leaf => write!(f, "L"),
            Series(cs) | Parallel(cs) => {
                write!(f, "{}(", if matches!(self, Series(_)) { "S" } else { "P" })?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for SpTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.trim().as_bytes();
        let (term, used) = parse_term(bytes, 0).ok_or_else(|| Error::ParseTerm(s.to_string()))?;
        if used != bytes.len() {
            return Err(Error::ParseTerm(s.to_string()));
        }
        Ok(term)
    }
}

fn parse_term(b: &[u8], at: usize) -> Option<(SpTerm, usize)> {
    match b.get(at)? {
        b'O' => Some((Open, at + 1)),
        b'L' => Some((Leaf, at + 1)),
        c @ (b'S' | b'P') => {
            let series = *c == b'S';
            if b.get(at + 1) != Some(&b'(') {
                return None;
            }
            let mut children = Vec::new();
            let mut pos = at + 2;
            loop {
                let (child, next) = parse_term(b, pos)?;
                children.push(child);
                match b.get(next)? {
                    b',' => pos = next + 1,
                    b')' => {
                        if children.len() < 2 {
                            return None;
                        }
                        let term = if series {
                            SpTerm::series(children)
                        } else {
                            SpTerm::parallel(children)
                        };
                        return Some((term, next + 1));
                    }
                    _ => return None,
                }
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn seed() {
        let g = SpTerm::single_edge();
        let m = g.materialize();
        assert_eq!((m.n, m.edges.len(), m.marked), (2, 1, 0));
        assert_eq!(m.edges, vec![(0, 1)]);
        assert!(g.zeta().is_zero());
        assert!(!g.is_proper());
    }

    #[test]
    fn duplicate_basics() {
        let g = SpTerm::single_edge().duplicate(2);
        assert_eq!(g, Parallel(vec![Leaf, Leaf]));
        assert_eq!(g.zeta(), rat_int(2));
        assert_eq!(g.materialize().edges.len(), 3);

        let g = SpTerm::single_edge().duplicate(0);
        assert_eq!(g, Open);

        // zeta 1/2 + one parallel edge -> 3/2.
        let half = SpTerm::series(vec![Leaf, Leaf]);
        assert_eq!(half.duplicate(1).zeta(), rat(3, 2));
    }

    #[test]
    fn subdivide_basics() {
        // Two parallel edges subdivided once: the triangle, zeta = 1/2.
        let tri = SpTerm::single_edge().duplicate(1).subdivide(1);
        assert_eq!(tri.zeta(), rat(1, 2));
        let m = tri.materialize();
        assert_eq!((m.n, m.edges.len()), (3, 3));

        // Subdividing the seed keeps the marked edge a bridge.
        let path = SpTerm::single_edge().subdivide(1);
        assert!(path.zeta().is_zero());
        let m = path.materialize();
        assert_eq!((m.n, m.edges.len()), (3, 2));
        assert!(m.is_simple());
        assert!(!m.is_proper());

        // 1/(2 + 1/3) = 3/7.
        let g = SpTerm::single_edge().duplicate(3).subdivide(2);
        assert_eq!(g.zeta(), rat(3, 7));

        assert_eq!(tri.subdivide(0), tri);
    }

    #[test]
    fn marked_sum_counts() {
        let tri = SpTerm::series(vec![Leaf, Leaf]);
        let sum = tri.marked_sum(&tri).unwrap();
        assert_eq!(sum.zeta(), rat_int(1));
        let m = sum.materialize();
        assert_eq!((m.n, m.edges.len()), (4, 5));
        assert!(SpTerm::single_edge().marked_sum(&tri).is_err());
    }

    #[test]
    fn dual_swaps() {
        let tri = SpTerm::series(vec![Leaf, Leaf]);
        let d = tri.dual().unwrap();
        assert_eq!(d, Parallel(vec![Leaf, Leaf]));
        assert_eq!(d.zeta(), rat_int(2));
        assert_eq!(d.dual().unwrap(), tri);
        assert!(SpTerm::single_edge().dual().is_err());
    }

    #[test]
    fn simplify_two_parallel() {
        let two = SpTerm::single_edge().duplicate(1);
        assert!(!two.materialize().is_simple());
        let s = two.simplify().unwrap();
        assert_eq!(s.zeta(), rat_int(1));
        let m = s.materialize();
        assert_eq!(m.edges.len(), 4 * (2 - 1) + 1);
        assert_eq!(m.n, 4);
        assert!(m.is_simple());
        assert!(m.is_proper());
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(SpTerm::parallel(vec![Leaf, Leaf, Leaf]).zeta(), rat_int(3));
        assert_eq!(SpTerm::series(vec![Leaf, Leaf]).zeta(), rat(1, 2));
        let g = SpTerm::series(vec![SpTerm::parallel(vec![Leaf, Leaf, Leaf]), Leaf, Leaf]);
        assert_eq!(g.zeta(), rat(3, 7));
    }

    #[test]
    fn flattening_normal_form() {
        let s = SpTerm::series(vec![SpTerm::series(vec![Leaf, Leaf]), Leaf]);
        assert_eq!(s, Series(vec![Leaf, Leaf, Leaf]));
        let p = SpTerm::parallel(vec![SpTerm::parallel(vec![Leaf, Leaf]), Open, Leaf]);
        assert_eq!(p, Parallel(vec![Leaf, Leaf, Leaf]));
        assert_eq!(SpTerm::parallel(vec![Open, Leaf]), Leaf);
        assert_eq!(SpTerm::parallel(vec![Open, Open]), Open);
    }

    #[test]
    fn materialize_preorder_is_stable() {
        let g = SpTerm::series(vec![SpTerm::parallel(vec![Leaf, Leaf]), Leaf]);
        let m = g.materialize();
        assert_eq!(m.n, 3);
        assert_eq!(m.edges, vec![(0, 2), (0, 2), (2, 1), (0, 1)]);
        assert_eq!(m.marked, 3);
    }

    #[test]
    fn text_form() {
        let g = SpTerm::series(vec![SpTerm::parallel(vec![Leaf, Leaf, Leaf]), Leaf, Leaf]);
        assert_eq!(g.to_string(), "S(P(L,L,L),L,L)");
        assert_eq!("S(P(L,L,L),L,L)".parse::<SpTerm>().unwrap(), g);
        assert!("S(L)".parse::<SpTerm>().is_err());
        assert!("S(L,L)x".parse::<SpTerm>().is_err());
        assert!("Q".parse::<SpTerm>().is_err());
    }

    fn arb_term() -> impl Strategy<Value = SpTerm> {
        let leaf = Just(Leaf);
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                (prop::collection::vec(inner.clone(), 2..4))
                    .prop_map(SpTerm::series),
                (prop::collection::vec(inner, 2..4)).prop_map(SpTerm::parallel),
            ]
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(t in arb_term()) {
            prop_assert_eq!(t.to_string().parse::<SpTerm>().unwrap(), t);
        }

        #[test]
        fn zeta_ignores_child_order(t in arb_term(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            fn shuffle(t: &SpTerm, rng: &mut rand_chacha::ChaCha8Rng) -> SpTerm {
                match t {
                    Open => Open,
                    Leaf => Leaf,
                    Series(cs) => {
                        let mut cs: Vec<_> = cs.iter().map(|c| shuffle(c, rng)).collect();
                        cs.shuffle(rng);
                        Series(cs)
                    }
                    Parallel(cs) => {
                        let mut cs: Vec<_> = cs.iter().map(|c| shuffle(c, rng)).collect();
                        cs.shuffle(rng);
                        Parallel(cs)
                    }
                }
            }
            let shuffled = shuffle(&t, &mut rng);
            prop_assert_eq!(shuffled.zeta(), t.zeta());
            prop_assert_eq!(shuffled.leaves(), t.leaves());
        }

        #[test]
        fn dual_is_involutive(t in arb_term()) {
            prop_assert_eq!(t.dual().unwrap().dual().unwrap(), t);
        }
    }
}
