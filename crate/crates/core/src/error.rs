use thiserror::Error;

/// Failures raised while constructing or validating algebraic data.
///
/// Every axiom violation names the identity that failed and the residual
/// that was measured.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("multiplication is not associative (residual {residual:.3e})")]
    NotAssociative { residual: f64 },
    #[error("involution fails {identity} (residual {residual:.3e})")]
    NotInvolutive { identity: &'static str, residual: f64 },
    #[error("unit fails {identity} (residual {residual:.3e})")]
    NoUnit { identity: &'static str, residual: f64 },
    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("pairing matrix is numerically singular (smallest singular value {min_singular:.3e})")]
    SingularPairing { min_singular: f64 },
    #[error("functional is not faithful (smallest Gram eigenvalue {min_eigenvalue:.3e})")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("Hopf axiom `{axiom}` violated (residual {residual:.3e})")]
    HopfAxiom { axiom: &'static str, residual: f64 },
    #[error("invariant state is not unique (solution space of dimension {kernel_dim})")]
    NonUniqueInvariantState { kernel_dim: usize },
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("rho is not positive invertible (smallest eigenvalue {min_eigenvalue:.3e})")]
    RhoNotPositive { min_eigenvalue: f64 },
    #[error("coaction axiom `{axiom}` violated (residual {residual:.3e})")]
    CoactionAxiom { axiom: &'static str, residual: f64 },
    #[error("functional is not invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },
    #[error("mm* is not the scalar {expected} (residual {residual:.3e})")]
    QScalarFailed { expected: f64, residual: f64 },
    #[error("actions do not commute (residual {residual:.3e})")]
    NotCommuting { residual: f64 },
    #[error("exchange map inverse mismatch (residual {residual:.3e})")]
    InverseMismatch { residual: f64 },
    #[error("cotensor kernel is not a *-subalgebra (residual {residual:.3e})")]
    KernelNotSubalgebra { residual: f64 },
    #[error("middle quantum groups differ (residual {residual:.3e})")]
    MiddleGroupMismatch { residual: f64 },
    #[error("jointly invariant state is not unique (solution space of dimension {kernel_dim})")]
    NonUniqueJointInvariantState { kernel_dim: usize },
    #[error("2-cocycle invalid: {identity} (residual {residual:.3e})")]
    CocycleInvalid { identity: &'static str, residual: f64 },
    #[error("subspace is not a unital *-subalgebra (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
