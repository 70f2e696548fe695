//! Nearest-neighbor representations of Boolean functions.
//!
//! Build prototype sets for Boolean functions, verify them exactly over the
//! whole hypercube, search for minimum-size Boolean-prototype
//! representations, compile representations into sign-polynomials over
//! `{1,2}^n`, and relate k-NN classification to linear decision trees.
//!
//! All geometry is exact rational arithmetic; distances are compared as
//! squared Euclidean distances.

pub mod arith;
pub mod cli;
pub mod constructions;
pub mod covering;
pub mod error;
pub mod experiment;
pub mod function;
pub mod ldt;
pub mod minimize;
pub mod ptf;
pub mod representation;

pub use arith::{format_rational, hamming, parse_rational, sqdist, Rational, RationalPoint};
pub use covering::{cover_hypercube, BallCovering};
pub use error::{Error, Result};
pub use function::{parse_function, BooleanFunction, FunctionSpec, SymmetricSpec, ThresholdSpec};
pub use representation::{
    classify_knn, classify_nn, verify_knn, verify_nn, Label, NNRepresentation, Outcome,
    VerificationReport,
};
