//! Exact computer algebra for third-order modular ordinary differential
//! equations on SL(2,Z).
//!
//! The crate builds MODEs `D_q^3 y + Q D_q y + (1/2 D_q Q + R) y = 0` from
//! quasimodular seeds of depth two or from triples of modular forms, analyses
//! their local structure (indicial equations, Frobenius bases, apparent
//! singularities), computes the Bol representation data and the quasimodular
//! recovery of the distinguished solution, emits the apparentness polynomial
//! systems for prescribed exponent data, and evaluates the associated SU(3)
//! Toda solutions numerically.
//!
//! All symbolic computation is exact: coefficients live in Q, in the Laurent
//! ring Q[c, 1/c] for the formal constant c = 1/(pi*i), or in sparse
//! multivariate polynomial rings and their fraction fields. The only floating
//! point code is the Toda evaluator in [`toda`].

pub mod algebra;
pub mod bol;
pub mod existence;
pub mod frobenius;
pub mod mode;
pub mod modforms;
pub mod quasi;
pub mod taylor;
pub mod toda;

mod error;

pub use error::{Error, Result};

pub use algebra::coeff::{rat, ratq, Coeff, Rat};
pub use algebra::cpoly::CPoly;
pub use algebra::frac::Frac;
pub use algebra::mpoly::{MPoly, VarSet};
pub use algebra::series::QSeries;

/// Series with exact rational coefficients, the workhorse carrier.
pub type RatSeries = QSeries<Rat>;
/// Series over the Laurent ring Q[c, 1/c], c = 1/(pi*i).
pub type CSeries = QSeries<CPoly>;
/// Series over a multivariate rational function field.
pub type FracSeries = QSeries<Frac>;
