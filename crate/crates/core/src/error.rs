use crate::algebra::coeff::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coefficient rings are incompatible: {0}")]
    IncompatibleCoefficients(String),
    #[error("leading coefficient is not invertible")]
    NonInvertibleLeading,
    #[error("leading coefficient must be 1 (extract the scale first), found {0}")]
    NonUnitLeading(String),
    #[error("series has no known coefficients over the requested range")]
    EmptySeries,
    #[error("insufficient series order: need terms through exponent {needed}")]
    InsufficientOrder { needed: Rat },
    #[error("inputs are linearly dependent")]
    DependentInputs,
    #[error("quasimodular form has depth {0}, need depth >= 1")]
    DegenerateDepth(u8),
    #[error("extremal kernel has dimension {0}, expected 1")]
    ExtremalKernel(usize),
    #[error("q-expansion is not a modular form of the stated weight: first mismatch at q^{0}")]
    NotModular(Rat),
    #[error("expansion inconsistent with a holomorphic form: {0}")]
    NotHolomorphicForm(String),
    #[error("pole of order {order} at {place} exceeds the Fuchsian bound for {generator}")]
    NotFuchsian {
        place: String,
        order: i64,
        generator: String,
    },
    #[error("exponent data violates {0}")]
    BadExponents(String),
    #[error("kappa_rho^(1) must be an integer, found {0}")]
    NonIntegralRho(Rat),
    #[error("local exponents are an unsupported configuration: {0}")]
    UnsupportedExponents(String),
    #[error("recursion depth {0} exceeds the configured cap {1}")]
    RecursionCap(usize, usize),
    #[error("eigenvalue data inconsistent with the canonical matrices: {0}")]
    EigenvalueMismatch(String),
    #[error("modularity certification failed: {0}")]
    CertificationFailed(String),
    #[error("ambiguous recovery: correction system has {0} free parameters")]
    AmbiguousRecovery(usize),
    #[error("grid point {0} is within the exclusion margin of the singular set")]
    SingularGridPoint(String),
    #[error("series tail bound {bound:e} exceeds the tolerance {tol:e}; increase the order")]
    TailBound { bound: f64, tol: f64 },
    #[error("{0}")]
    Invalid(String),
}
