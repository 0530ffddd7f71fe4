//! Finite quantum groups: Hopf data, Haar state, duality, irreducible
//! corepresentations and standard solutions of the conjugate equations.

mod group;
mod hopf;
mod reps;

pub use group::FiniteGroup;
pub use hopf::{
    dual_quantum_group, function_algebra, group_algebra, hopf_data_distance, trace_defect,
    FiniteQuantumGroup, HopfCertificates,
};
pub use reps::{
    conjugate_representation, standard_solution, StandardSolution, UnitaryRepresentation,
};
