//! Exact arithmetic substrate: rationals, sparse graded polynomials,
//! truncated series and integer lattices.

pub mod intmat;
pub mod poly;
pub mod scalar;
pub mod series;

pub use intmat::{cokernel, hnf, right_kernel, snf, Cokernel, IntMatrix, Lattice};
pub use poly::{GenKind, Generator, Monomial, Poly, Ring};
pub use scalar::Scalar;
pub use series::Series;
