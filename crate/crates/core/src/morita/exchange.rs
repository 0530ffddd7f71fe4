use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fro_norm, kron_vec, vec_norm, CMat, CVec, C64};
use crate::morita::biaction::{BiActionAlgebra, FixedSide};
use crate::morita::report::unit_component;
use crate::morita::report::sandwich;
use crate::Config;

#[derive(Debug, Clone, Serialize)]
pub struct ExchangeReport {
    pub lambda: f64,
    /// `‖S S⁻¹ − ι‖`.
    pub forward_inverse_residual: f64,
    /// `‖S⁻¹ S − ι‖`.
    pub inverse_forward_residual: f64,
    /// Defect of `S` as a map of `A^{G₁}⊗A^{G₂}`-`A` modules.
    pub module_residual: f64,
    /// `max ‖⟨Sz, Sw⟩_A − λ⟨z, w⟩_A‖` on module generators `z, w ∈ A^{G₁}⊗1`.
    pub isometry_residual: f64,
    /// `‖S(1⊗1) − Σ_j y^j ⊗ y_j‖`.
    pub unit_residual: f64,
}

impl ExchangeReport {
    pub fn passes(&self, cfg: &Config) -> bool {
        let l = self.lambda;
        cfg.accepts(self.forward_inverse_residual, 1.0)
            && cfg.accepts(self.inverse_forward_residual, 1.0)
            && cfg.accepts(self.module_residual, l)
            && cfg.accepts(self.isometry_residual, l)
            && cfg.accepts(self.unit_residual, l)
    }
}

/// `S: A^{G₁}⊗A → A^{G₂}⊗A` and its inverse, in (fixed-algebra basis) ⊗ (basis of `A`) coordinates.
#[derive(Debug, Clone)]
pub struct ExchangeMap {
    pub forward: CMat,
    pub inverse: CMat,
    pub report: ExchangeReport,
}

/// `a ⊗ b ↦ Σ_k dual_k ⊗ a x_k b` with scale `c`, for `a` running over `from` and `x_k` over `to`.
fn exchange_matrix(b: &BiActionAlgebra, from: &FixedSide, to: &FixedSide, c: f64) -> CMat {
    let a = b.algebra();
    let na = a.dim();
    let (d_from, d_to) = (from.dim(), to.dim());
    let lifted_to: Vec<CVec> = (0..d_to).map(|k| to.embedding.column(k).into_owned()).collect();
    let mut m = CMat::zeros(d_to * na, d_from * na);
    for i in 0..d_from {
        let ai = from.embedding.column(i).into_owned();
        let products: Vec<CVec> = lifted_to.iter().map(|x| a.mul(&ai, x)).collect();
        for col in 0..na {
            let mut v = CVec::zeros(d_to * na);
            for (k, p) in products.iter().enumerate() {
                let right = a.mul(p, &a.basis(col));
                v += kron_vec(&to.pair.dual[k], &right);
            }
            m.set_column(i * na + col, &(v * C64::new(c, 0.0)));
        }
    }
    m
}

pub fn exchange_map(b: &BiActionAlgebra) -> Result<ExchangeMap> {
    let cfg = *b.config();
    let fd = b.fixed()?;
    let (f1, f2) = (&fd.first, &fd.second);
    let a = b.algebra();
    let na = a.dim();
    let lambda = unit_component(a, &sandwich(a, &f1.lifted_pairs(), a.unit())).re;
    let forward = exchange_matrix(b, f1, f2, 1.0);
    let inverse = exchange_matrix(b, f2, f1, 1.0 / lambda);
    let (n1, n2) = (f1.dim() * na, f2.dim() * na);
    let forward_inverse_residual = fro_norm(&(&forward * &inverse - CMat::identity(n2, n2)));
    let inverse_forward_residual = fro_norm(&(&inverse * &forward - CMat::identity(n1, n1)));
    if !cfg.accepts(forward_inverse_residual.max(inverse_forward_residual), 1.0) {
        return Err(Error::InverseMismatch { residual: forward_inverse_residual.max(inverse_forward_residual) });
    }

    let (alg1, alg2) = (f1.algebra(), f2.algebra());
    let legs = |v: CVec| -> Vec<CVec> { (0..f2.dim()).map(|k| v.rows(k * na, na).into_owned()).collect() };
    let join = |parts: &[CVec]| -> CVec {
        let mut v = CVec::zeros(n2);
        for (k, p) in parts.iter().enumerate() {
            v.rows_mut(k * na, na).copy_from(p);
        }
        v
    };
    // generators e_i ⊗ 1 of the domain as a right A-module
    let images: Vec<Vec<CVec>> = (0..f1.dim())
        .map(|i| legs(&forward * kron_vec(&alg1.basis(i), a.unit())))
        .collect();
    let mut module_residual: f64 = 0.0;
    for (i, img) in images.iter().enumerate() {
        // right A-linearity: S(e_i ⊗ x) = S(e_i ⊗ 1) x
        for col in 0..na {
            let x = a.basis(col);
            let moved: Vec<CVec> = img.iter().map(|z| a.mul(z, &x)).collect();
            let direct = forward.column(i * na + col).into_owned();
            module_residual = module_residual.max(vec_norm(&(direct - join(&moved))));
        }
        // A^{G₁} acts on the first leg of the domain and the second leg of the target
        for k in 0..f1.dim() {
            let ak = f1.embedding.column(k).into_owned();
            let lhs = &forward * kron_vec(&alg1.mul(&alg1.basis(k), &alg1.basis(i)), a.unit());
            let moved: Vec<CVec> = img.iter().map(|z| a.mul(&ak, z)).collect();
            module_residual = module_residual.max(vec_norm(&(lhs - join(&moved))));
        }
        // A^{G₂} acts on the second leg of the domain and the first leg of the target
        for j in 0..f2.dim() {
            let bj = f2.embedding.column(j).into_owned();
            let lhs = &forward * kron_vec(&alg1.basis(i), &bj);
            let lj = alg2.left_mul_matrix(&alg2.basis(j));
            let mut moved = vec![CVec::zeros(na); f2.dim()];
            for (k, z) in img.iter().enumerate() {
                for (l, m) in moved.iter_mut().enumerate() {
                    let c = lj[(l, k)];
                    if c != C64::new(0.0, 0.0) {
                        *m += z * c;
                    }
                }
            }
            module_residual = module_residual.max(vec_norm(&(lhs - join(&moved))));
        }
    }

    // ⟨Σ e_k⊗z_k, Σ e_l⊗w_l⟩_A = Σ_{k,l} ψ(e_k* e_l) z_k* w_l
    let g1 = alg1.gram(&f1.state.functional.coeffs);
    let g2 = alg2.gram(&f2.state.functional.coeffs);
    let mut isometry_residual: f64 = 0.0;
    for (i, zi) in images.iter().enumerate() {
        let zs: Vec<CVec> = zi.iter().map(|z| a.star_of(z)).collect();
        for (j, wj) in images.iter().enumerate() {
            let mut s = CVec::zeros(na);
            for k in 0..f2.dim() {
                for l in 0..f2.dim() {
                    if g2[(k, l)] != C64::new(0.0, 0.0) {
                        s += a.mul(&zs[k], &wj[l]) * g2[(k, l)];
                    }
                }
            }
            isometry_residual = isometry_residual.max(vec_norm(&(s - a.unit() * (g1[(i, j)] * lambda))));
        }
    }

    let one_one = kron_vec(alg1.unit(), a.unit());
    let mut m_star = CVec::zeros(n2);
    for k in 0..f2.dim() {
        m_star += kron_vec(&f2.pair.dual[k], &f2.embedding.column(k).into_owned());
    }
    let unit_residual = vec_norm(&(&forward * one_one - m_star));

    Ok(ExchangeMap {
        forward,
        inverse,
        report: ExchangeReport {
            lambda,
            forward_inverse_residual,
            inverse_forward_residual,
            module_residual,
            isometry_residual,
            unit_residual,
        },
    })
}
