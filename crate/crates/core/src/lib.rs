//! Exact computations around the toric Fano threefold over the hexagon:
//! lattice polytopes, Minkowski decompositions, Laurent polynomials and
//! their periods, and determinantal equations.

pub mod fixtures;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod minkowski;
pub mod periods;
pub mod ring;
pub mod toric_eqs;
