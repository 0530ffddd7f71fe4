use serde::Serialize;

use crate::coaction::{invariance_residual, invariant_functionals};
use crate::csalg::{check_functional, Functional};
use crate::error::{Error, Result};
use crate::linalg::{kernel, vec_norm, CMat, C64};
use crate::morita::biaction::BiActionAlgebra;

#[derive(Debug, Clone, Serialize)]
pub struct JointState {
    pub functional: Functional,
    pub invariance_residual: f64,
    /// `‖φ|_{A^{G₁}} − φ₁‖` and `‖φ|_{A^{G₂}} − φ₂‖`.
    pub restriction_residual1: f64,
    pub restriction_residual2: f64,
    /// `max |φ(x_i x_j) − φ(x_j x_i)|`.
    pub trace_residual: f64,
}

/// The unique state invariant under both coactions.
pub fn joint_canonical_state(b: &BiActionAlgebra) -> Result<JointState> {
    let cfg = b.config();
    let a = b.algebra();
    let n = a.dim();
    let tol = cfg.tol.max(1e-12);
    // φ lies in both invariant subspaces: intersect their column spans
    let v1 = invariant_functionals(b.left(), tol);
    let v2 = invariant_functionals(b.right(), tol);
    let mut stacked = CMat::zeros(n, v1.ncols() + v2.ncols());
    stacked.view_mut((0, 0), (n, v1.ncols())).copy_from(&v1);
    stacked.view_mut((0, v1.ncols()), (n, v2.ncols())).copy_from(&(-&v2));
    let k = kernel(&stacked, tol);
    if k.ncols() != 1 {
        return Err(Error::NonUniqueJointInvariantState { kernel_dim: k.ncols() });
    }
    let mut phi = &v1 * k.rows(0, v1.ncols());
    let phi_col = phi.column(0).into_owned();
    let norm: C64 = phi_col.iter().zip(a.unit().iter()).map(|(f, u)| f * u).sum();
    phi /= norm;
    let phi = phi.column(0).into_owned();
    let functional = check_functional(a, &phi, cfg.tol)?;
    if !functional.faithful {
        return Err(Error::NotFaithful { min_eigenvalue: functional.min_eigenvalue });
    }
    let invariance = invariance_residual(b.left(), &phi).max(invariance_residual(b.right(), &phi));
    let fd = b.fixed()?;
    let restrict = |q: &CMat| q.transpose() * &phi;
    let restriction_residual1 = vec_norm(&(restrict(&fd.first.embedding) - &fd.first.state.functional.coeffs));
    let restriction_residual2 = vec_norm(&(restrict(&fd.second.embedding) - &fd.second.state.functional.coeffs));
    let mut trace_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = a.basis_product(i, j) - a.basis_product(j, i);
            trace_residual = trace_residual.max(d.iter().zip(phi.iter()).map(|(x, f)| x * f).sum::<C64>().norm());
        }
    }
    Ok(JointState { functional, invariance_residual: invariance, restriction_residual1, restriction_residual2, trace_residual })
}
