use std::cmp::Reverse;

use serde::Serialize;

use crate::csalg::CStarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{fro_norm, herm_apply, herm_eigen, kron_vec, vec_norm, CMat, CVec, C64};

/// A finite-dimensional unitary corepresentation `U ∈ Mat_n ⊗ H`.
#[derive(Debug, Clone)]
pub struct UnitaryRepresentation {
    pub dim: usize,
    /// Matrix coefficients `u_ij ∈ H`, row-major.
    pub coefficients: Vec<CVec>,
    /// `π_U(ρ)`.
    pub rho_matrix: CMat,
}

impl UnitaryRepresentation {
    pub fn coefficient(&self, i: usize, j: usize) -> &CVec {
        &self.coefficients[i * self.dim + j]
    }

    /// `Σ_i u_ii`.
    pub fn character(&self) -> CVec {
        let len = self.coefficients.first().map(|v| v.len()).unwrap_or(0);
        (0..self.dim).fold(CVec::zeros(len), |acc, i| acc + self.coefficient(i, i))
    }

    pub fn quantum_dimension(&self) -> f64 {
        self.rho_matrix.trace().re
    }

    /// Defects of `U U* = 1 = U* U` in `Mat_n ⊗ H`.
    pub fn unitarity_residual(&self, h: &CStarAlgebra) -> f64 {
        let n = self.dim;
        let stars: Vec<CVec> = self.coefficients.iter().map(|x| h.star_of(x)).collect();
        let mut res: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut uu = CVec::zeros(h.dim());
                let mut u_u = CVec::zeros(h.dim());
                for k in 0..n {
                    uu += h.mul(self.coefficient(i, k), &stars[j * n + k]);
                    u_u += h.mul(&stars[k * n + i], self.coefficient(k, j));
                }
                if i == j {
                    uu -= h.unit();
                    u_u -= h.unit();
                }
                res = res.max(vec_norm(&uu)).max(vec_norm(&u_u));
            }
        }
        res
    }

    /// Defect of `Δ(u_ij) = Σ_k u_ik ⊗ u_kj`.
    pub fn corepresentation_residual(&self, comul: &CMat) -> f64 {
        let n = self.dim;
        let mut res: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut rhs = comul * self.coefficient(i, j);
                for k in 0..n {
                    rhs -= kron_vec(self.coefficient(i, k), self.coefficient(k, j));
                }
                res = res.max(vec_norm(&rhs));
            }
        }
        res
    }
}

/// One irrep per Wedderburn block of the dual algebra `H*`.
pub(crate) fn compute_irreps(
    h: &CStarAlgebra,
    blocks: &[CMat],
    dual: &CStarAlgebra,
    rho: &CVec,
) -> Result<(Vec<UnitaryRepresentation>, f64)> {
    let n = h.dim();
    let w = dual.wedderburn().ok_or_else(|| Error::NotSemisimple("dual algebra not decomposed".into()))?;
    let comul = {
        let mut m = CMat::zeros(n * n, n);
        for (k, dk) in blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    m[(i * n + j, k)] = dk[(i, j)];
                }
            }
        }
        m
    };
    let offsets = w.offsets();
    let mut reps = Vec::new();
    let mut residual: f64 = 0.0;
    for (s, &m) in w.block_sizes.iter().enumerate() {
        let coefficients: Vec<CVec> = (0..m * m)
            .map(|ij| w.iso.row(offsets[s] + ij).transpose().into_owned())
            .collect();
        let rep = UnitaryRepresentation { dim: m, coefficients, rho_matrix: w.block_image(rho, s) };
        residual = residual
            .max(rep.unitarity_residual(h))
            .max(rep.corepresentation_residual(&comul));
        reps.push(rep);
    }
    let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
    if total != n {
        return Err(Error::HopfAxiom { axiom: "Σ dim² = dim H", residual: (total as f64 - n as f64).abs() });
    }
    reps.sort_by_cached_key(|r| (r.dim, Reverse(character_key(&r.character()))));
    Ok((reps, residual))
}

fn character_key(v: &CVec) -> Vec<(i64, i64)> {
    v.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
}

/// `Ū = (j(ρ)^{1/2} ⊗ 1) U^c (j(ρ)^{-1/2} ⊗ 1)` with `U^c_ij = u_ij*`.
pub fn conjugate_representation(h: &CStarAlgebra, u: &UnitaryRepresentation) -> UnitaryRepresentation {
    let n = u.dim;
    let j_rho = u.rho_matrix.transpose();
    let p = herm_apply(&j_rho, f64::sqrt);
    let p_inv = herm_apply(&j_rho, |x| 1.0 / x.sqrt());
    let uc: Vec<CVec> = u.coefficients.iter().map(|x| h.star_of(x)).collect();
    let mut coefficients = vec![CVec::zeros(h.dim()); n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let w = p[(i, k)] * p_inv[(l, j)];
                    if w != C64::new(0.0, 0.0) {
                        coefficients[i * n + j] += &uc[k * n + l] * w;
                    }
                }
            }
        }
    }
    let rho_matrix = j_rho.try_inverse().unwrap_or_else(|| CMat::identity(n, n));
    UnitaryRepresentation { dim: n, coefficients, rho_matrix }
}

/// Solution of the conjugate equations built from `π_U(ρ)`.
///
/// `r[(i,k)]` is the coefficient of `ξ̄_i ⊗ ξ_k` in `R(1)`; `rbar[(k,i)]` that
/// of `ξ_k ⊗ ξ̄_i` in `R̄(1)`.
#[derive(Debug, Clone, Serialize)]
pub struct StandardSolution {
    #[serde(serialize_with = "crate::io::ser_cvec")]
    pub r: CVec,
    #[serde(serialize_with = "crate::io::ser_cvec")]
    pub rbar: CVec,
    pub dim_q: f64,
    pub norm_sq_r: f64,
    pub norm_sq_rbar: f64,
    /// Max defect of `(R̄*⊗ι)(ι⊗R) = ι` and `(R*⊗ι)(ι⊗R̄) = ι`.
    pub conjugate_residual: f64,
    #[serde(skip)]
    rho_inv_half: CMat,
}

impl StandardSolution {
    /// Pure linear-algebra mode: any positive invertible `ρ` on `ℂ^n`.
    pub fn from_rho(rho: &CMat, tol: f64) -> Result<Self> {
        let n = rho.nrows();
        let (vals, _) = herm_eigen(rho);
        let low = vals.first().copied().unwrap_or(0.0);
        if fro_norm(&(rho - rho.adjoint())) > tol || low <= tol {
            return Err(Error::RhoNotPositive { min_eigenvalue: low });
        }
        let half = herm_apply(rho, f64::sqrt);
        let inv_half = herm_apply(rho, |x| 1.0 / x.sqrt());
        let r = CVec::from_fn(n * n, |ik, _| inv_half[(ik % n, ik / n)]);
        let rbar = CVec::from_fn(n * n, |ki, _| half[(ki / n, ki % n)]);
        // (R̄*⊗ι)(ι⊗R): ξ_a ↦ Σ_{i,k} conj(R̄[a,i]) R[i,k] ξ_k
        let m1 = CMat::from_fn(n, n, |k, a| (0..n).map(|i| rbar[a * n + i].conj() * r[i * n + k]).sum());
        // (R*⊗ι)(ι⊗R̄): ξ̄_a ↦ Σ_{k,i} conj(R[a,k]) R̄[k,i] ξ̄_i
        let m2 = CMat::from_fn(n, n, |i, a| (0..n).map(|k| r[a * n + k].conj() * rbar[k * n + i]).sum());
        let id = CMat::identity(n, n);
        let conjugate_residual = fro_norm(&(m1 - &id)).max(fro_norm(&(m2 - id)));
        Ok(Self {
            norm_sq_r: r.norm_squared(),
            norm_sq_rbar: rbar.norm_squared(),
            r,
            rbar,
            dim_q: rho.trace().re,
            conjugate_residual,
            rho_inv_half: inv_half,
        })
    }

    /// Defect of `(ι⊗ξ*)R(1) = conj(ρ^{-1/2} ξ)`.
    pub fn convention_residual(&self, xi: &CVec) -> f64 {
        let n = xi.len();
        let lhs = CVec::from_fn(n, |i, _| (0..n).map(|k| xi[k].conj() * self.r[i * n + k]).sum());
        let rhs = (&self.rho_inv_half * xi).map(|z| z.conj());
        vec_norm(&(lhs - rhs))
    }
}

pub fn standard_solution(u: &UnitaryRepresentation, tol: f64) -> Result<StandardSolution> {
    StandardSolution::from_rho(&u.rho_matrix, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, r};

    #[test]
    fn synthetic_rho_norm() {
        let rho = CMat::from_diagonal(&CVec::from_vec(vec![r(2.0), r(0.5)]));
        let s = StandardSolution::from_rho(&rho, 1e-9).unwrap();
        assert!((s.norm_sq_r - 2.5).abs() < 1e-12);
        assert!((s.norm_sq_rbar - 2.5).abs() < 1e-12);
        assert!((s.dim_q - 2.5).abs() < 1e-12);
        assert!(s.conjugate_residual < 1e-12);
    }

    #[test]
    fn convention_on_non_diagonal_rho() {
        let rho = CMat::from_row_slice(2, 2, &[r(2.0), c(0.3, 0.4), c(0.3, -0.4), r(1.0)]);
        let s = StandardSolution::from_rho(&rho, 1e-9).unwrap();
        assert!(s.conjugate_residual < 1e-12);
        let xi = CVec::from_vec(vec![c(0.2, -1.0), c(0.7, 0.1)]);
        assert!(s.convention_residual(&xi) < 1e-12);
    }

    #[test]
    fn indefinite_rho_rejected() {
        let rho = CMat::from_diagonal(&CVec::from_vec(vec![r(1.0), r(-1.0)]));
        assert!(matches!(StandardSolution::from_rho(&rho, 1e-9), Err(Error::RhoNotPositive { .. })));
    }
}
