//! Exact arithmetic foundation: big rationals, the Laurent ring in the formal
//! constant c = 1/(pi*i), sparse multivariate polynomials with fraction
//! fields, truncated q-series with fractional exponents, order-2 jets for
//! exact differentiation of Frobenius data, and rational linear algebra.

pub mod coeff;
pub mod cpoly;
pub mod frac;
pub mod jet;
pub mod linalg;
pub mod mpoly;
pub mod series;
pub mod zpoly;
