//! Coactions of finite quantum groups on finite-dimensional C*-algebras:
//! validation, fixed points, freeness, spectral subspaces and the canonical
//! invariant state.

mod core;
mod freeness;
mod state;

pub use self::core::{
    convert_side, group_action_coaction, normalized_trace, regular_coaction, restrict_coaction, trivial_coaction,
    CoAction, CoactionCertificates, Side,
};
pub use freeness::{
    freeness_summary, is_free_galois, spectral_functor_defect, spectral_subspace, FreenessSummary,
    GaloisReport, SpectralFunctorReport, SpectralSubspaceReport,
};
pub use state::{
    canonical_state, invariance_residual, invariant_functionals, kms_residual, kms_residual_with,
    CanonicalState,
};
