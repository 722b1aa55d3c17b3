//! Exact computer algebra for cobordism of varieties with torus and
//! reductive-group bundles.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact`]: rationals, sparse graded polynomials, truncated series,
//!   Hermite/Smith normal forms.
//! - [`fgl`]: additive, multiplicative and truncated universal formal group
//!   laws, and the integral Lazard lattice inside `Q[m_1, m_2, ...]`.
//! - [`weyl`]: root data and Weyl group enumeration.
//! - [`twisted`]: the twisted group algebra `R[[T^]]`, its Weyl action and
//!   truncated invariants.
//! - [`flag`]: divided differences, Schubert coefficients of the
//!   characteristic map, torsion indices.
//! - [`bt`]: the free `L`-module on the classes `p_m`, the characteristic
//!   pairing, coinvariants and the duality check.

pub mod bt;
pub mod error;
pub mod exact;
pub mod fgl;
pub mod flag;
pub mod twisted;
pub mod weyl;

pub use bt::{BTClass, BtContext, CoinvariantsReport, DualityReport, MultiIndex, Verdict};
pub use error::{Error, Result};
pub use exact::{IntMatrix, Poly, Scalar, Series};
pub use fgl::{CoefficientLattice, FormalGroupLaw, LElement, LawKind, LazardBasis};
pub use flag::{torsion_index, TorsionReport};
pub use twisted::{InvariantBlock, Stability, TwistedContext, TwistedElement};
pub use weyl::{RootDatum, WeylGroup};
