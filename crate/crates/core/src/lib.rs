//! Exact computer algebra for wall-crossing factorizations of acyclic quivers.
//!
//! The crate computes the Harder-Narasimhan recursion for a quiver with a
//! stability, the quantized generating series it produces, the conjugation
//! series and their integrality, the induced automorphisms of the Poisson
//! algebra `Q[[x_i]]`, and checks all of it against brute-force point counts
//! over small prime fields.
//!
//! Series and automorphisms are generic over the coefficient [`Field`]; the
//! aliases below fix the instantiations the verifiers use.

pub mod arith;
pub mod error;
pub mod ff_oracle;
pub mod hn;
pub mod poisson;
pub mod quiver;
pub mod report;
pub mod scalar;
pub mod scenarios;
pub mod series;
pub mod wallcross;

pub use arith::{qbinom, BigRational, QLaurent, QRational};
pub use error::{Error, Result};
pub use quiver::{load_quiver, DimVector, Functional, Quiver, QuiverDescription, Slope, Stability};
pub use scalar::Field;
pub use series::Series;

/// Elements of the quantized ring `Q(q)_q[[N^I]]`.
pub type SkewSeries = Series<QRational>;
/// Commutative series over the rationals: elements of `Q[[x_i]]`.
pub type CommSeries = Series<BigRational>;
/// Quantized series specialized at a numeric `q`, e.g. the size of a finite field.
pub type EvalSeries = Series<BigRational>;
/// Automorphisms of `Q[[x_i]]` of the form `x_i -> x_i * u_i`.
pub type PoissonAuto = poisson::UnitAuto<BigRational>;
