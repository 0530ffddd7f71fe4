//! Bi-actions of two finite quantum groups and the Morita–Galois criteria:
//! dual-basis identities, the exchange map, relative commutants, the
//! one-sided variant, joint invariant states and cotensor products.

mod biaction;
mod cotensor;
mod exchange;
mod joint;
mod onesided;
mod report;

pub use biaction::{commutation_residual, validate_biaction, BiActionAlgebra, FixedData, FixedSide};
pub use cotensor::{
    associator_candidate, certify_isomorphism, cotensor, lift_left_nested, lift_right_nested, unit_law_candidate,
    Cotensor, IsoReport,
};
pub use exchange::{exchange_map, ExchangeMap, ExchangeReport};
pub use joint::{joint_canonical_state, JointState};
pub use onesided::{onesided_report, OneSidedReport};
pub use report::{mkey_report, relative_commutant_dim, MoritaReport};
