//! Frobenius and Q-system diagnostics for `(A, φ)` in finite-dimensional Hilbert spaces.
//!
//! The scalar product is `(a, b) = φ(b* a) = b† G a` with `G_ij = φ(x_i* x_j)`.
//! The adjoint of multiplication is stored as one `n × n` matrix per basis
//! element: `m*(x_k) = Σ_{p,q} T_k[p,q] x_p ⊗ x_q`.

use serde::Serialize;

use crate::csalg::algebra::CStarAlgebra;
use crate::csalg::functional::{check_functional, dual_basis};
use crate::error::{Error, Result};
use crate::linalg::{fro_norm, CMat, CVec, C64};

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusReport {
    /// Max over basis pairs of the three-term Frobenius identity defect.
    pub frobenius_residual: f64,
    /// `λ` with `mm* = λ·ι`, when it exists.
    pub q_scalar: Option<f64>,
    /// `‖mm* − λ ι‖` for the best-fit `λ = Tr(mm*)/dim`.
    pub q_residual: f64,
    /// `m*(1)` as an `n × n` coefficient matrix of `Σ c_pq x_p ⊗ x_q`.
    #[serde(serialize_with = "crate::io::ser_cmat")]
    pub coproduct_unit: CMat,
    /// Distance between the adjoint and dual-basis formulas for `m*`.
    pub dual_basis_crosscheck: f64,
}

/// The adjoint `m*: A → A ⊗ A` for the φ-scalar product.
pub fn comultiplication(a: &CStarAlgebra, phi: &CVec) -> Result<Vec<CMat>> {
    let n = a.dim();
    let g = a.gram(phi);
    let g = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let ginv = g.clone().try_inverse().ok_or(Error::NotFaithful { min_eigenvalue: 0.0 })?;
    let ginv_t = ginv.transpose();
    let mut w = vec![CMat::zeros(n, n); n];
    for i in 0..n {
        for j in 0..n {
            for &(s, c) in a.row(i, j) {
                let cc = c.conj();
                for (k, wk) in w.iter_mut().enumerate() {
                    wk[(i, j)] += cc * g[(s, k)];
                }
            }
        }
    }
    Ok(w.into_iter().map(|wk| &ginv * wk * &ginv_t).collect())
}

/// `m` applied to a tensor `Σ t[p,q] x_p ⊗ x_q`.
pub fn multiply_tensor(a: &CStarAlgebra, t: &CMat) -> CVec {
    let n = a.dim();
    let mut out = CVec::zeros(n);
    for p in 0..n {
        for q in 0..n {
            let v = t[(p, q)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for &(k, c) in a.row(p, q) {
                out[k] += v * c;
            }
        }
    }
    out
}

/// `mm*` as a matrix together with the best scalar fit.
pub fn q_scalar(a: &CStarAlgebra, phi: &CVec, tol: f64) -> Result<(Option<f64>, f64)> {
    let n = a.dim();
    let t = comultiplication(a, phi)?;
    let mut mm = CMat::zeros(n, n);
    for (k, tk) in t.iter().enumerate() {
        mm.set_column(k, &multiply_tensor(a, tk));
    }
    let lambda = mm.trace() / C64::new(n as f64, 0.0);
    let residual = fro_norm(&(&mm - CMat::identity(n, n) * lambda));
    let ok = residual <= tol * lambda.norm().max(1.0) && lambda.im.abs() <= tol * lambda.norm().max(1.0);
    Ok((ok.then_some(lambda.re), residual))
}

pub fn frobenius_report(a: &CStarAlgebra, phi: &CVec, tol: f64) -> Result<FrobeniusReport> {
    let f = check_functional(a, phi, tol)?;
    if !f.faithful {
        return Err(Error::NotFaithful { min_eigenvalue: f.min_eigenvalue });
    }
    let n = a.dim();
    let t = comultiplication(a, phi)?;
    let lmul: Vec<CMat> = (0..n).map(|i| a.left_mul_matrix(&a.basis(i))).collect();
    // R_j[k,q] = c_qjk so that (T R_j^T)[p,k] = Σ_q T[p,q] c_qjk
    let rmul_t: Vec<CMat> = (0..n).map(|j| a.right_mul_matrix(&a.basis(j)).transpose()).collect();
    let mut frob: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let left = &lmul[i] * &t[j];
            let right = &t[i] * &rmul_t[j];
            let mut mid = CMat::zeros(n, n);
            for &(k, c) in a.row(i, j) {
                mid += &t[k] * c;
            }
            frob = frob.max(fro_norm(&(&left - &mid))).max(fro_norm(&(&mid - &right)));
        }
    }
    let (q, q_residual) = q_scalar(a, phi, tol)?;
    let unit = a.unit();
    let mut coproduct_unit = CMat::zeros(n, n);
    for (k, tk) in t.iter().enumerate() {
        if unit[k] != C64::new(0.0, 0.0) {
            coproduct_unit += tk * unit[k];
        }
    }
    // m*(x_k) = Σ_q x_k x^q ⊗ x_q
    let pair = dual_basis(a, phi, tol)?;
    let mut cross: f64 = 0.0;
    for (k, tk) in t.iter().enumerate() {
        let mut d = CMat::zeros(n, n);
        for q in 0..n {
            d.set_column(q, &a.mul(&a.basis(k), &pair.dual[q]));
        }
        cross = cross.max(fro_norm(&(tk - d)));
    }
    Ok(FrobeniusReport {
        frobenius_residual: frob,
        q_scalar: q,
        q_residual,
        coproduct_unit,
        dual_basis_crosscheck: cross,
    })
}

/// Defect of `m_X = (v* m ⊗ ι)(ι ⊗ m_X*)` for a left module given by matrices
/// `rep[i] = π(x_i)` on `ℂ^d` with the standard scalar product and `v* = φ`.
pub fn module_unitarity_residual(a: &CStarAlgebra, phi: &CVec, rep: &[CMat]) -> Result<f64> {
    let n = a.dim();
    let d = rep.first().map(|m| m.nrows()).unwrap_or(0);
    let g = a.gram(phi);
    let ginv = g.try_inverse().ok_or(Error::NotFaithful { min_eigenvalue: 0.0 })?;
    // m_X : A⊗X → X, column (i,t)
    let mut mx = CMat::zeros(d, n * d);
    for (i, p) in rep.iter().enumerate() {
        mx.view_mut((0, i * d), (d, d)).copy_from(p);
    }
    let adj = crate::linalg::kron(&ginv, &CMat::identity(d, d)) * mx.adjoint();
    let m = CMat::from_fn(n, n, |i, j| a.row(i, j).iter().map(|&(k, v)| v * phi[k]).sum::<C64>());
    let mut rhs = CMat::zeros(d, n * d);
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] == C64::new(0.0, 0.0) {
                continue;
            }
            let block = adj.view((j * d, 0), (d, d)) * m[(i, j)];
            let mut target = rhs.view_mut((0, i * d), (d, d));
            target += block;
        }
    }
    Ok(fro_norm(&(mx - rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csalg::algebra::{commutative_algebra, matrix_algebra};
    use crate::linalg::{c, r};
    use crate::Config;

    fn normalized_trace(n: usize) -> CVec {
        CVec::from_fn(n * n, |k, _| if k / n == k % n { r(1.0 / n as f64) } else { r(0.0) })
    }

    #[test]
    fn matrix_algebra_trace_gives_n_squared() {
        for n in 1..=3 {
            let a = matrix_algebra(n, &Config::default()).unwrap();
            let rep = frobenius_report(&a, &normalized_trace(n), 1e-9).unwrap();
            assert!(rep.frobenius_residual < 1e-10);
            assert!((rep.q_scalar.unwrap() - (n * n) as f64).abs() < 1e-9);
            assert!(rep.dual_basis_crosscheck < 1e-10);
        }
    }

    #[test]
    fn two_points_uniform_gives_two() {
        let a = commutative_algebra(2, &Config::default()).unwrap();
        let rep = frobenius_report(&a, &CVec::from_element(2, r(0.5)), 1e-9).unwrap();
        assert!((rep.q_scalar.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_tracial_state_on_simple_algebra() {
        // mm* is a bimodule map, hence central: on Mat_2 it is Tr(ρ^{-1}) for φ = Tr(ρ ·)
        let a = matrix_algebra(2, &Config::default()).unwrap();
        let phi = CVec::from_vec(vec![r(0.7), c(0.1, 0.05), c(0.1, -0.05), r(0.3)]);
        let rep = frobenius_report(&a, &phi, 1e-9).unwrap();
        assert!(rep.frobenius_residual < 1e-10);
        let rho = CMat::from_row_slice(2, 2, &[phi[0], phi[2], phi[1], phi[3]]);
        let expect = (rho.trace() / rho.determinant()).re;
        assert!((rep.q_scalar.unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn unbalanced_weights_are_frobenius_but_not_q_system() {
        let a = commutative_algebra(2, &Config::default()).unwrap();
        let rep = frobenius_report(&a, &CVec::from_vec(vec![r(0.3), r(0.7)]), 1e-9).unwrap();
        assert!(rep.frobenius_residual < 1e-12);
        assert!(rep.q_scalar.is_none());
    }

    #[test]
    fn unitarity_tracks_star_preservation() {
        let a = matrix_algebra(2, &Config::default()).unwrap();
        let phi = CVec::from_vec(vec![r(0.6), r(0.0), r(0.0), r(0.4)]);
        let eij = |k: usize| {
            let mut m = CMat::zeros(2, 2);
            m[(k / 2, k % 2)] = r(1.0);
            m
        };
        let rep: Vec<CMat> = (0..4).map(eij).collect();
        assert!(module_unitarity_residual(&a, &phi, &rep).unwrap() < 1e-12);
        let s = CMat::from_row_slice(2, 2, &[r(1.0), r(0.5), r(0.0), r(2.0)]);
        let s_inv = s.clone().try_inverse().unwrap();
        let bent: Vec<CMat> = rep.iter().map(|m| &s * m * &s_inv).collect();
        assert!(module_unitarity_residual(&a, &phi, &bent).unwrap() > 1e-3);
    }
}
