//! Symbolic-numeric toolkit for generalized holomorphic analytic torsion.
//!
//! The crate covers the computable side of the classification of torsion
//! theories by additive genera:
//!
//! * [`series`]: truncated power series, Todd and exponential generating
//!   functions, Bernoulli numbers.
//! * [`genera`]: additive genera, the duality involution and the R-genus.
//! * [`cohomology`]: cohomology rings of products of projective spaces and of
//!   `P(L + O)` bundles, Chern-root bundles, the sign operator and push-forwards.
//! * [`sheaves`]: split sheaves on projective space, regularity and canonical
//!   resolution ranks.
//! * [`torsion`]: characteristic-number differences against the homogeneous
//!   theory and the identities they satisfy.
//! * [`degeneration`]: quadrature for the constants of the deformation
//!   argument and the symbolic extraction of the `log|w|` singularity.
//! * [`suite`]: the verification suites driven by the command line.

pub mod cohomology;
pub mod degeneration;
pub mod error;
pub mod genera;
pub mod scalar;
pub mod series;
pub mod sheaves;
pub mod suite;
pub mod torsion;

pub use cohomology::{CohClass, LineClass, OddClass, RingSpec, VirtualBundle};
pub use error::{Error, Result};
pub use genera::Genus;
pub use scalar::{Coeff, Rational, Scalar};
pub use series::{Combine, Series, StandardSeries};
pub use sheaves::SplitSheaf;
