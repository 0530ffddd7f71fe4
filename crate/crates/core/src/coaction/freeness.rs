//! Three characterizations of freeness: rank of the Galois map, the localized
//! Galois maps on spectral subspaces, and monoidality of the spectral functor.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::coaction::core::{normalized_trace, CoAction, Side};
use crate::csalg::{tensor_mul, CStarAlgebra};
use crate::linalg::{columns, fro_norm, herm_eigen, kernel, kron, rank, CMat, CVec, C64, ZERO};
use crate::Config;

/// Above this many columns the Galois matrix is compressed by a Gaussian sketch.
const SKETCH_THRESHOLD: usize = 2048;
const SKETCH_OVERSAMPLE: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct GaloisReport {
    pub free: bool,
    pub rank: usize,
    pub expected_rank: usize,
    pub sketched: bool,
    pub seed: u64,
}

/// Sparse columns of `a ⊗ b ↦ α(a)(1⊗b)` in H-first coordinates.
fn galois_columns(c: &CoAction) -> Vec<Vec<(usize, C64)>> {
    let a = c.algebra();
    let (na, nh) = (a.dim(), c.hopf().dim());
    let m = c.hfirst();
    let mut cols = Vec::with_capacity(na * na);
    for i in 0..na {
        for j in 0..na {
            let mut col = vec![ZERO; nh * na];
            for h in 0..nh {
                for k in 0..na {
                    let v = m[(h * na + k, i)];
                    if v == ZERO {
                        continue;
                    }
                    for &(l, w) in a.row(k, j) {
                        col[h * na + l] += v * w;
                    }
                }
            }
            cols.push(col.into_iter().enumerate().filter(|(_, z)| *z != ZERO).collect());
        }
    }
    cols
}

pub fn is_free_galois(c: &CoAction, cfg: &Config) -> GaloisReport {
    let (na, nh) = (c.algebra().dim(), c.hopf().dim());
    let rows = na * nh;
    let cols = galois_columns(c);
    let sketched = cols.len() > SKETCH_THRESHOLD;
    let mat = if sketched {
        let k = (rows + SKETCH_OVERSAMPLE).min(cols.len());
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut y = CMat::zeros(rows, k);
        for col in &cols {
            let omega: Vec<C64> = (0..k)
                .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            for &(r, v) in col {
                for (t, w) in omega.iter().enumerate() {
                    y[(r, t)] += v * w;
                }
            }
        }
        y
    } else {
        let mut g = CMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                g[(r, j)] = v;
            }
        }
        g
    };
    let rk = rank(&mat, cfg.tol.max(1e-12));
    GaloisReport { free: rk == rows, rank: rk, expected_rank: rows, sketched, seed: cfg.seed }
}

/// Projection of `H` onto the span of the matrix coefficients of irrep `s`
/// along the other isotypic components.
fn peter_weyl_projector(c: &CoAction, s: usize) -> CMat {
    let q = c.hopf();
    let mut all = Vec::new();
    let mut mask = Vec::new();
    for (t, u) in q.irreps().iter().enumerate() {
        for v in &u.coefficients {
            all.push(v.clone());
            mask.push(t == s);
        }
    }
    let basis = columns(q.dim(), &all);
    let inv = basis.clone().try_inverse().expect("matrix coefficients form a basis");
    let d = CMat::from_diagonal(&CVec::from_iterator(mask.len(), mask.iter().map(|&b| if b { C64::new(1.0, 0.0) } else { ZERO })));
    basis * d * inv
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSubspaceReport {
    pub irrep: usize,
    pub irrep_dim: usize,
    pub subspace_dim: usize,
    /// Rank of the balanced tensor product `A_U ⊗_B A` (scalar Gram rank).
    pub quotient_rank: usize,
    pub image_rank: usize,
    pub target_dim: usize,
    pub cokernel_dim: usize,
    /// `‖Γ*Γ − ι‖` on the quotient, with inner products from `E`, `h` and the trace.
    pub isometry_defect: f64,
    pub unitary: bool,
}

/// Spectral subspace `A_U = {a : α(a) ∈ ℂ[G]_U ⊗ A}` and its localized Galois map.
pub fn spectral_subspace(c: &CoAction, s: usize, cfg: &Config) -> SpectralSubspaceReport {
    let a = c.algebra();
    let hq = c.hopf();
    let (na, nh) = (a.dim(), hq.dim());
    let tol = cfg.tol.max(1e-12);
    let p = peter_weyl_projector(c, s);
    let comp = kron(&(CMat::identity(nh, nh) - &p), &CMat::identity(na, na));
    let sub = kernel(&(comp * c.hfirst()), tol);
    let du = hq.irreps()[s].dim;
    let target_dim = du * du * na;
    let basis: Vec<CVec> = (0..sub.ncols()).map(|k| sub.column(k).into_owned()).collect();

    let psi = normalized_trace(a);
    let g_psi = a.gram(&psi);
    let g_h = hq.algebra().gram(&hq.haar().coeffs);
    let e = c.expectation();
    let dsz = basis.len() * na;
    // domain Gram: ψ(x_b* E(a_k* a_k') x_b')
    let mut k_dom = CMat::zeros(dsz, dsz);
    for (k, ak) in basis.iter().enumerate() {
        let ak_star = a.star_of(ak);
        for (l, al) in basis.iter().enumerate() {
            let y = e * a.mul(&ak_star, al);
            let block = &g_psi * a.left_mul_matrix(&y);
            k_dom.view_mut((k * na, l * na), (na, na)).copy_from(&block);
        }
    }
    // Γ(a_k ⊗ x_b) = α(a_k)(1 ⊗ x_b)
    let mut gamma = CMat::zeros(nh * na, dsz);
    for (k, ak) in basis.iter().enumerate() {
        let img = c.apply_hfirst(ak);
        for b in 0..na {
            let one_b = crate::linalg::kron_vec(hq.algebra().unit(), &a.basis(b));
            gamma.set_column(k * na + b, &tensor_mul(hq.algebra(), a, &img, &one_b));
        }
    }
    let k_img = gamma.adjoint() * kron(&g_h, &g_psi) * &gamma;
    let (isometry_defect, quotient_rank) = normalized_defect(&k_dom, &k_img, tol);
    let image_rank = if dsz == 0 { 0 } else { rank(&gamma, tol) };
    let cokernel_dim = target_dim.saturating_sub(image_rank);
    SpectralSubspaceReport {
        irrep: s,
        irrep_dim: du,
        subspace_dim: basis.len(),
        quotient_rank,
        image_rank,
        target_dim,
        cokernel_dim,
        isometry_defect,
        unitary: cokernel_dim == 0 && isometry_defect <= cfg.tol.max(1e-8),
    }
}

/// `‖Y* K_img Y − ι‖` where `Y` whitens `K_dom` on its support.
fn normalized_defect(k_dom: &CMat, k_img: &CMat, tol: f64) -> (f64, usize) {
    if k_dom.nrows() == 0 {
        return (0.0, 0);
    }
    let (vals, vecs) = herm_eigen(k_dom);
    let top = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > tol * top.max(1e-300)).collect();
    let y = columns(
        k_dom.nrows(),
        &keep.iter().map(|&i| vecs.column(i) / C64::new(vals[i].sqrt(), 0.0)).collect::<Vec<_>>(),
    );
    let m = y.adjoint() * k_img * &y;
    (fro_norm(&(m - CMat::identity(keep.len(), keep.len()))), keep.len())
}

/// Coefficient matrix `w_kj` attached to an irrep for the invariance condition
/// `Σ_k α(a_k)(w_kj ⊗ 1) = 1 ⊗ a_j`; right coactions use the transpose.
fn comodule_coefficients(c: &CoAction, s: usize) -> (usize, Vec<CVec>) {
    let u = &c.hopf().irreps()[s];
    let d = u.dim;
    let w = match c.side() {
        Side::Left => u.coefficients.clone(),
        Side::Right => (0..d * d).map(|kj| u.coefficient(kj % d, kj / d).clone()).collect(),
    };
    (d, w)
}

/// `W_{(k,l),(j,m)} = v_lm u_kj`, the coefficients of the tensor product comodule.
fn tensor_coefficients(h: &CStarAlgebra, du: usize, u: &[CVec], dv: usize, v: &[CVec]) -> Vec<CVec> {
    let d = du * dv;
    let mut w = vec![CVec::zeros(h.dim()); d * d];
    for k in 0..du {
        for l in 0..dv {
            for j in 0..du {
                for m in 0..dv {
                    w[(k * dv + l) * d + (j * dv + m)] = h.mul(&v[l * dv + m], &u[k * du + j]);
                }
            }
        }
    }
    w
}

/// Orthonormal basis of the invariant vectors `(a_1..a_d) ∈ A^d`.
fn invariants(c: &CoAction, d: usize, w: &[CVec], tol: f64) -> CMat {
    let a = c.algebra();
    let h = c.hopf().algebra();
    let (na, nh) = (a.dim(), h.dim());
    let m = c.hfirst();
    let ones = kron(&crate::linalg::col_mat(h.unit()), &CMat::identity(na, na));
    let mut sys = CMat::zeros(d * nh * na, d * na);
    for k in 0..d {
        for j in 0..d {
            let right = kron(&h.right_mul_matrix(&w[k * d + j]), &CMat::identity(na, na));
            let mut block = right * m;
            if j == k {
                block -= &ones;
            }
            sys.view_mut((j * nh * na, k * na), (nh * na, na)).copy_from(&block);
        }
    }
    kernel(&sys, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralFunctorReport {
    pub u: usize,
    pub v: usize,
    pub dim_fu: usize,
    pub dim_fv: usize,
    pub dim_fuv: usize,
    /// `F₂` must land in `F(U⊗V)`.
    pub image_residual: f64,
    pub isometry_defect: f64,
    pub cokernel_dim: usize,
}

/// Monoidality defect of `F₂: F(U) ⊗_B F(V) → F(U⊗V)`, `x ⊗ y ↦ x₁₃ y₂₃`.
pub fn spectral_functor_defect(c: &CoAction, s: usize, t: usize, cfg: &Config) -> SpectralFunctorReport {
    let a = c.algebra();
    let h = c.hopf().algebra();
    let na = a.dim();
    let tol = cfg.tol.max(1e-12);
    let (du, wu) = comodule_coefficients(c, s);
    let (dv, wv) = comodule_coefficients(c, t);
    let fu = invariants(c, du, &wu, tol);
    let fv = invariants(c, dv, &wv, tol);
    let wuv = tensor_coefficients(h, du, &wu, dv, &wv);
    let fuv = invariants(c, du * dv, &wuv, tol);
    let psi = normalized_trace(a);
    let ev = |x: &CVec| -> C64 { x.iter().zip(psi.iter()).map(|(p, q)| p * q).sum() };
    let split = |m: &CMat, col: usize, d: usize| -> Vec<CVec> {
        (0..d).map(|k| m.view((k * na, col), (na, 1)).column(0).into_owned()).collect()
    };
    let xs: Vec<Vec<CVec>> = (0..fu.ncols()).map(|i| split(&fu, i, du)).collect();
    let ys: Vec<Vec<CVec>> = (0..fv.ncols()).map(|i| split(&fv, i, dv)).collect();
    let mut images = Vec::new();
    let mut pairs = Vec::new();
    for x in &xs {
        for y in &ys {
            let mut z = CVec::zeros(du * dv * na);
            for k in 0..du {
                for l in 0..dv {
                    z.rows_mut((k * dv + l) * na, na).copy_from(&a.mul(&x[k], &y[l]));
                }
            }
            images.push(z);
            pairs.push((x, y));
        }
    }
    let n = images.len();
    let img = columns(du * dv * na, &images);
    let image_residual = if n == 0 { 0.0 } else { fro_norm(&(&img - &fuv * (fuv.adjoint() * &img))) };
    // balanced Gram ψ(Σ_l y_l* ⟨x,x'⟩ y'_l) with ⟨x,x'⟩ = Σ_k x_k* x'_k, and image Gram
    let mut k_dom = CMat::zeros(n, n);
    let mut k_img = CMat::zeros(n, n);
    for (p, (x, y)) in pairs.iter().enumerate() {
        for (q, (x2, y2)) in pairs.iter().enumerate() {
            let inner = (0..du).fold(CVec::zeros(na), |acc, k| acc + a.mul(&a.star_of(&x[k]), &x2[k]));
            let mut dom = C64::new(0.0, 0.0);
            for l in 0..dv {
                dom += ev(&a.mul(&a.mul(&a.star_of(&y[l]), &inner), &y2[l]));
            }
            k_dom[(p, q)] = dom;
            let (zi, zj) = (&images[p], &images[q]);
            let mut im = C64::new(0.0, 0.0);
            for r in 0..du * dv {
                let u = zi.rows(r * na, na).into_owned();
                let v = zj.rows(r * na, na).into_owned();
                im += ev(&a.mul(&a.star_of(&u), &v));
            }
            k_img[(p, q)] = im;
        }
    }
    let (isometry_defect, _) = normalized_defect(&k_dom, &k_img, tol);
    let image_rank = if n == 0 { 0 } else { rank(&img, tol) };
    SpectralFunctorReport {
        u: s,
        v: t,
        dim_fu: fu.ncols(),
        dim_fv: fv.ncols(),
        dim_fuv: fuv.ncols(),
        image_residual,
        isometry_defect,
        cokernel_dim: fuv.ncols().saturating_sub(image_rank),
    }
}

/// Freeness according to each of the three characterizations.
#[derive(Debug, Clone, Serialize)]
pub struct FreenessSummary {
    pub galois: GaloisReport,
    pub localized_all_unitary: bool,
    pub functor_all_monoidal: bool,
    pub spectral: Vec<SpectralSubspaceReport>,
    pub functor: Vec<SpectralFunctorReport>,
    pub agree: bool,
}

pub fn freeness_summary(c: &CoAction, cfg: &Config) -> FreenessSummary {
    let galois = is_free_galois(c, cfg);
    let k = c.hopf().irreps().len();
    let spectral: Vec<_> = (0..k).map(|s| spectral_subspace(c, s, cfg)).collect();
    let mut functor = Vec::new();
    for s in 0..k {
        for t in 0..k {
            functor.push(spectral_functor_defect(c, s, t, cfg));
        }
    }
    let localized_all_unitary = spectral.iter().all(|r| r.unitary);
    let functor_all_monoidal = functor
        .iter()
        .all(|r| r.cokernel_dim == 0 && r.isometry_defect <= cfg.tol.max(1e-8) && r.image_residual <= 1e-8);
    let agree = galois.free == localized_all_unitary && galois.free == functor_all_monoidal;
    FreenessSummary { galois, localized_all_unitary, functor_all_monoidal, spectral, functor, agree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coaction::core::{regular_coaction, trivial_coaction};
    use crate::csalg::{matrix_algebra, scalars};
    use crate::fqgroup::{function_algebra, group_algebra, FiniteGroup};

    #[test]
    fn regular_coaction_is_free_everywhere() {
        let cfg = Config::default();
        for q in [
            function_algebra(&FiniteGroup::symmetric3(), &cfg).unwrap(),
            group_algebra(&FiniteGroup::symmetric3(), &cfg).unwrap(),
        ] {
            for side in [Side::Left, Side::Right] {
                let c = regular_coaction(&q, side, &cfg).unwrap();
                let s = freeness_summary(&c, &cfg);
                assert!(s.galois.free, "{side:?}");
                assert!(s.localized_all_unitary, "{:?}", s.spectral);
                assert!(s.functor_all_monoidal, "{:?}", s.functor);
                assert!(s.agree);
                for r in &s.spectral {
                    assert_eq!(r.subspace_dim, r.irrep_dim * r.irrep_dim);
                }
            }
        }
    }

    #[test]
    fn trivial_coaction_on_scalars_is_not_free() {
        let cfg = Config::default();
        let q = function_algebra(&FiniteGroup::cyclic(2), &cfg).unwrap();
        let c = trivial_coaction(&scalars(&cfg), &q, Side::Left, &cfg).unwrap();
        let s = freeness_summary(&c, &cfg);
        assert!(!s.galois.free);
        assert_eq!(s.galois.rank, 1);
        assert!(!s.localized_all_unitary && !s.functor_all_monoidal && s.agree, "{s:#?}");
        let sign = &s.spectral[1];
        assert_eq!((sign.subspace_dim, sign.cokernel_dim), (0, 1));
        assert!(s.spectral[0].unitary);
        let f = s.functor.iter().find(|r| r.u == 1 && r.v == 1).unwrap();
        assert_eq!((f.dim_fu, f.dim_fuv, f.cokernel_dim), (0, 1, 1));
    }

    #[test]
    fn trivial_coaction_on_matrices_is_not_free() {
        let cfg = Config::default();
        let q = function_algebra(&FiniteGroup::cyclic(3), &cfg).unwrap();
        let a = matrix_algebra(2, &cfg).unwrap();
        for side in [Side::Left, Side::Right] {
            let s = freeness_summary(&trivial_coaction(&a, &q, side, &cfg).unwrap(), &cfg);
            assert!(!s.galois.free && s.agree, "{s:#?}");
            assert_eq!(s.galois.rank, 4);
        }
    }

    #[test]
    fn sketch_agrees_with_dense_rank() {
        let cfg = Config::default();
        let q = function_algebra(&FiniteGroup::symmetric3(), &cfg).unwrap();
        let c = regular_coaction(&q, Side::Left, &cfg).unwrap();
        let dense = is_free_galois(&c, &cfg);
        assert!(!dense.sketched);
        // 49² columns triggers the sketch
        let a = matrix_algebra(7, &cfg).unwrap();
        let t = trivial_coaction(&a, &q, Side::Left, &cfg).unwrap();
        let rep = is_free_galois(&t, &cfg);
        assert!(rep.sketched);
        assert_eq!(rep.rank, 49);
        assert!(!rep.free);
    }
}
