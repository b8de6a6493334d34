//! Exact computations with the dihedral Lie coalgebra of roots of unity, the rank-m
//! modular complex, Voronoi cells of type A_m, and multiple polylogarithm numerics.

pub mod dihedral;
pub mod linalg;
pub mod modular;
pub mod numeric;
pub mod voronoi;
pub mod words;
