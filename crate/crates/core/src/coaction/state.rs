use serde::Serialize;

use crate::coaction::core::{convert_side, CoAction, Side};
use crate::csalg::{check_functional, q_scalar, CStarAlgebra, Functional};
use crate::error::{Error, Result};
use crate::linalg::{kernel, row_mat, kron, vec_norm, CMat, CVec, C64};
use crate::Config;

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalState {
    pub functional: Functional,
    pub dim_q: f64,
    pub invariance_residual: f64,
    pub q_scalar: Option<f64>,
    pub q_residual: f64,
}

/// Defect of invariance `(ι⊗φ)α(a) = φ(a)1` (H leg kept) for every basis element.
pub fn invariance_residual(c: &CoAction, phi: &CVec) -> f64 {
    let na = c.algebra().dim();
    let nh = c.hopf().dim();
    let u = c.hopf().algebra().unit();
    let pairing = kron(&CMat::identity(nh, nh), &row_mat(phi));
    let lhs = &pairing * c.hfirst();
    let mut res: f64 = 0.0;
    for k in 0..na {
        res = res.max(vec_norm(&(lhs.column(k) - u * phi[k])));
    }
    res
}

/// Basis (columns) of all invariant functionals.
pub fn invariant_functionals(c: &CoAction, tol: f64) -> CMat {
    let na = c.algebra().dim();
    let nh = c.hopf().dim();
    let u = c.hopf().algebra().unit();
    // φ ↦ (ι⊗φ)α(x_k) − φ_k 1, rows (k, h)
    let m = c.hfirst();
    let mut sys = CMat::zeros(na * nh, na);
    for k in 0..na {
        for h in 0..nh {
            for a in 0..na {
                sys[(k * nh + h, a)] += m[(h * na + a, k)];
            }
            sys[(k * nh + h, k)] -= u[h];
        }
    }
    kernel(&sys, tol.max(1e-12))
}

/// `φ(a) = Tr(λ(a) π_α(ρ)) / Tr π_α(ρ)` for a right coaction.
fn right_formula(a: &CStarAlgebra, pi_rho: &CMat) -> (CVec, f64) {
    let n = a.dim();
    let dim_q = pi_rho.trace();
    // Tr(λ(x_i) Π) = Σ_{j,k} c_{ikj} Π[k, j]
    let mut phi = CVec::zeros(n);
    for i in 0..n {
        let mut t = C64::new(0.0, 0.0);
        for k in 0..n {
            for &(j, v) in a.row(i, k) {
                t += v * pi_rho[(k, j)];
            }
        }
        phi[i] = t / dim_q;
    }
    (phi, dim_q.re)
}

/// The canonical invariant state; left coactions pass through `A^op`.
pub fn canonical_state(c: &CoAction, cfg: &Config) -> Result<CanonicalState> {
    let rho = c.hopf().rho().clone();
    let (phi, dim_q) = match c.side() {
        Side::Right => right_formula(c.algebra(), &c.dual_action(&rho)),
        Side::Left => {
            let r = convert_side(c, cfg)?;
            right_formula(r.algebra(), &r.dual_action(&rho))
        }
    };
    let tol = cfg.tol;
    let invariance = invariance_residual(c, &phi);
    if invariance > tol * 1e1 {
        return Err(Error::NotInvariant { residual: invariance });
    }
    let functional = check_functional(c.algebra(), &phi, tol)?;
    if !functional.faithful {
        return Err(Error::NotFaithful { min_eigenvalue: functional.min_eigenvalue });
    }
    let (q, q_residual) = q_scalar(c.algebra(), &phi, tol)?;
    match q {
        Some(l) if (l - dim_q).abs() <= tol * dim_q.max(1.0) * 1e1 => {}
        _ => return Err(Error::QScalarFailed { expected: dim_q, residual: q_residual }),
    }
    Ok(CanonicalState { functional, dim_q, invariance_residual: invariance, q_scalar: q, q_residual })
}

/// `max |φ(ab) − φ(b θ(a))|` over basis pairs, for an automorphism matrix `θ`.
pub fn kms_residual_with(a: &CStarAlgebra, phi: &CVec, theta: &CMat) -> f64 {
    let n = a.dim();
    let ev = |v: &CVec| -> C64 { v.iter().zip(phi.iter()).map(|(x, y)| x * y).sum() };
    let mut res: f64 = 0.0;
    for i in 0..n {
        let ti = theta.column(i).into_owned();
        for j in 0..n {
            let lhs = ev(&a.basis_product(i, j));
            let rhs = ev(&a.mul(&a.basis(j), &ti));
            res = res.max((lhs - rhs).norm());
        }
    }
    res
}

/// KMS defect with `θ = π_α(ρ)`.
pub fn kms_residual(c: &CoAction, phi: &CVec) -> f64 {
    kms_residual_with(c.algebra(), phi, &c.dual_action(c.hopf().rho()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coaction::core::{regular_coaction, trivial_coaction};
    use crate::csalg::matrix_algebra;
    use crate::fqgroup::{function_algebra, FiniteGroup};
    use crate::linalg::{r, ZERO};

    #[test]
    fn trivial_action_gives_normalized_trace() {
        let cfg = Config::default();
        let q = function_algebra(&FiniteGroup::cyclic(2), &cfg).unwrap();
        for n in 1..=3 {
            let a = matrix_algebra(n, &cfg).unwrap();
            let c = trivial_coaction(&a, &q, Side::Left, &cfg).unwrap();
            let s = canonical_state(&c, &cfg).unwrap();
            for k in 0..n * n {
                let expect = if k / n == k % n { 1.0 / n as f64 } else { 0.0 };
                assert!((s.functional.coeffs[k] - r(expect)).norm() < 1e-12);
            }
            assert!((s.q_scalar.unwrap() - (n * n) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn translation_gives_haar() {
        let cfg = Config::default();
        let q = function_algebra(&FiniteGroup::symmetric3(), &cfg).unwrap();
        for side in [Side::Left, Side::Right] {
            let c = regular_coaction(&q, side, &cfg).unwrap();
            let s = canonical_state(&c, &cfg).unwrap();
            assert!(vec_norm(&(&s.functional.coeffs - &q.haar().coeffs)) < 1e-12);
            assert!((s.dim_q - 6.0).abs() < 1e-12);
            assert!(kms_residual(&c, &s.functional.coeffs) < 1e-12);
        }
    }

    #[test]
    fn mat2_twisted_trace_satisfies_kms() {
        // φ(a) = Tr(ac)Tr(c⁻¹)/dim_q with c = diag(2,1); θ(a) = c a c⁻¹
        let cfg = Config::default();
        let a = matrix_algebra(2, &cfg).unwrap();
        let cdiag = [2.0, 1.0];
        let dim_q = 1.5 * 3.0; // Tr c · Tr c⁻¹
        let phi = CVec::from_fn(4, |k, _| {
            let (i, j) = (k / 2, k % 2);
            if i == j { r(cdiag[i] * 1.5 / dim_q) } else { ZERO }
        });
        let theta = CMat::from_fn(4, 4, |row, col| {
            if row == col { r(cdiag[col / 2] / cdiag[col % 2]) } else { ZERO }
        });
        assert!(kms_residual_with(&a, &phi, &theta) < 1e-12);
        assert!(kms_residual_with(&a, &phi, &CMat::identity(4, 4)) > 1e-3);
        let (q, _) = q_scalar(&a, &phi, 1e-9).unwrap();
        assert!((q.unwrap() - dim_q).abs() < 1e-9);
    }
}
