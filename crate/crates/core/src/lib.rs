//! Random-cluster partition functions and sampling via polymer expansions.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod graph_diag;
pub mod integrator;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod polymers;
pub mod rng;
pub mod scalar;
pub mod treeball;

pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{Config, Phase, PhaseSpec, RcParams};
pub use poly::{Poly, RationalFn};
pub use scalar::Real;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
pub type ExactPoly = Poly<Rational>;
pub type ExactRationalFn = RationalFn<Rational>;
pub type Params = RcParams<f64>;
