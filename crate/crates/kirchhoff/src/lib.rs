//! Exact realization of effective resistances by small simple planar graphs.
//!
//! Effective resistance of a marked edge `e` in a connected graph `G` is the
//! ratio `tau(G/e) / tau(G)` of spanning tree counts. This crate solves the
//! inverse problem constructively: given any reduced fraction `c/t` in (0,1),
//! it builds a simple planar marked graph whose resistance is exactly `c/t`,
//! as a series-parallel composition driven by the continued fraction of the
//! complementary tree ratio. Every construction is checked against an
//! independent matrix-tree oracle; nothing in the crate rounds.
//!
//! The high-level entry points are [`construct::realize`] (one target, with a
//! verified [`construct::Certificate`]), [`construct::census`] (sweeps of all
//! reduced targets), and [`decompose::decompose_search`] (short sums of
//! low-complexity rationals). The `kirchhoff` binary wraps them as
//! subcommands.

pub mod bounds;
pub mod cf;
pub mod construct;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod rational;
pub mod tau;
pub mod term;

pub use error::{Error, Result};
pub use rational::Rational;
