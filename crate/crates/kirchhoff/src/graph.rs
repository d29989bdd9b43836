//! Concrete marked multigraphs: a vertex count, an edge list, and the index
//! of the marked edge. This is the verification-side representation; all
//! spanning-tree counting in [`crate::tau`] works on it.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedGraph {
    /// Number of vertices, labelled 0..n.
    pub n: usize,
    /// Unordered vertex pairs; duplicates allowed, self-loops not.
    pub edges: Vec<(usize, usize)>,
    /// Index of the marked edge in `edges`.
    pub marked: usize,
}

impl MarkedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, marked: usize) -> Result<Self> {
        let g = MarkedGraph { n, edges, marked };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::InvalidGraph("no edges".into()));
        }
        if self.marked >= self.edges.len() {
            return Err(Error::InvalidGraph(format!(
                "marked index {} out of range ({} edges)",
                self.marked,
                self.edges.len()
            )));
        }
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) references a vertex >= {}",
                    self.n
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn marked_edge(&self) -> (usize, usize) {
        self.edges[self.marked]
    }

    /// Degree counting multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// No repeated vertex pair, in either orientation.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|&(u, v)| {
            let key = if u <= v { (u, v) } else { (v, u) };
            seen.insert(key)
        })
    }

    pub fn is_connected(&self) -> bool {
        connected(self.n, self.edges.iter().copied())
    }

    /// Connected and the marked edge is not a bridge.
    pub fn is_proper(&self) -> bool {
        self.is_connected()
            && connected(
                self.n,
                self.edges
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != self.marked)
                    .map(|(_, &e)| e),
            )
    }

    /// Face count of a planar embedding, from Euler's formula. Only
    /// meaningful for connected planar graphs.
    pub fn face_count(&self) -> usize {
        self.edges.len() + 2 - self.n
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: MarkedGraph =
            serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    /// Graphviz export; the marked edge is drawn bold.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if i == self.marked {
                let _ = writeln!(out, "  {u} -- {v} [style=bold, color=red];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    if n == 0 {
        return true;
    }
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    let root = uf.find(0);
    (1..n).all(|v| {
        let r = uf.find(v);
        r == root
    })
}

/// Small union-find with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if x and y were already in the same set.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MarkedGraph {
        MarkedGraph::new(3, vec![(0, 2), (2, 1), (0, 1)], 2).unwrap()
    }

    #[test]
    fn simple_and_proper() {
        let two_parallel = MarkedGraph::new(2, vec![(0, 1), (0, 1)], 0).unwrap();
        assert!(!two_parallel.is_simple());
        assert!(two_parallel.is_proper());

        let path = MarkedGraph::new(3, vec![(0, 2), (0, 1)], 1).unwrap();
        assert!(path.is_simple());
        assert!(!path.is_proper());

        assert!(triangle().is_simple());
        assert!(triangle().is_proper());
    }

    #[test]
    fn validation() {
        assert!(MarkedGraph::new(2, vec![], 0).is_err());
        assert!(MarkedGraph::new(2, vec![(0, 1)], 1).is_err());
        assert!(MarkedGraph::new(2, vec![(0, 2)], 0).is_err());
        assert!(MarkedGraph::new(2, vec![(1, 1)], 0).is_err());
    }

    #[test]
    fn euler_faces() {
        assert_eq!(triangle().face_count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = triangle();
        let s = g.to_json();
        assert_eq!(MarkedGraph::from_json(&s).unwrap(), g);
        assert!(s.contains("\"edges\":[[0,2],[2,1],[0,1]]"));
        assert!(MarkedGraph::from_json("{\"n\":2,\"edges\":[[0,0]],\"marked\":0}").is_err());
    }

    #[test]
    fn dot_marks_edge() {
        let dot = triangle().to_dot();
        assert!(dot.contains("0 -- 1 [style=bold"));
        assert!(dot.contains("0 -- 2;"));
    }

    #[test]
    fn degrees() {
        let g = MarkedGraph::new(2, vec![(0, 1), (0, 1), (0, 1)], 0).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 3);
    }
}
