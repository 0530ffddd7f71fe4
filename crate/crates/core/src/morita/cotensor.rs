use serde::Serialize;

use crate::coaction::{CoAction, Side};
use crate::csalg::{subalgebra, tensor_product, CStarAlgebra};
use crate::error::{Error, Result};
use crate::fqgroup::hopf_data_distance;
use crate::linalg::{fro_norm, herm_apply, kernel, kron, rank, vec_norm, CMat, CVec, C64};
use crate::morita::biaction::{validate_biaction, BiActionAlgebra};
use crate::Config;

/// Cotensor product together with its embedding into `A ⊗ B`.
#[derive(Debug, Clone)]
pub struct Cotensor {
    pub biaction: BiActionAlgebra,
    /// Orthonormal basis of `A □ B` as columns in `A ⊗ B` coordinates.
    pub embedding: CMat,
}

/// `A □_{G₂} B = {z : (α₂⊗ι)z = (ι⊗β₁)z}` with the outer coactions restricted.
pub fn cotensor(b1: &BiActionAlgebra, b2: &BiActionAlgebra, cfg: &Config) -> Result<Cotensor> {
    let mid = hopf_data_distance(b1.right().hopf(), b2.left().hopf());
    if !cfg.accepts(mid, 1.0) {
        return Err(Error::MiddleGroupMismatch { residual: mid });
    }
    let (a, b) = (b1.algebra(), b2.algebra());
    let (na, nb) = (a.dim(), b.dim());
    let alpha2 = b1.right().native_map();
    let beta1 = b2.left().native_map();
    // both sides in A ⊗ H ⊗ B coordinates
    let lhs = kron(&alpha2, &CMat::identity(nb, nb));
    let rhs = kron(&CMat::identity(na, na), &beta1);
    let span = kernel(&(lhs - rhs), cfg.tol.max(1e-12));
    let ab = tensor_product(a, b, cfg)?;
    let (c_alg, q) = subalgebra(&ab, &span, cfg).map_err(|e| match e {
        Error::NotSubalgebra { residual } => Error::KernelNotSubalgebra { residual },
        other => other,
    })?;
    let left = restrict_outer(&c_alg, &q, b1.left(), nb, Side::Left, cfg)?;
    let right = restrict_outer(&c_alg, &q, b2.right(), na, Side::Right, cfg)?;
    Ok(Cotensor { biaction: validate_biaction(left, right, cfg)?, embedding: q })
}

/// Extend a coaction on one tensor leg by the identity on the other and restrict to `span(q)`.
fn restrict_outer(c_alg: &CStarAlgebra, q: &CMat, c: &CoAction, other: usize, side: Side, cfg: &Config) -> Result<CoAction> {
    let nh = c.hopf().dim();
    let n = c.algebra().dim();
    // H-first map on the full tensor product, legs ordered H, A, B
    let full = match side {
        Side::Left => kron(c.hfirst(), &CMat::identity(other, other)),
        Side::Right => {
            let mut m = CMat::zeros(nh * other * n, other * n);
            let id = CMat::identity(other, other);
            for h in 0..nh {
                let block = kron(&id, &c.hfirst().rows(h * n, n).into_owned());
                m.view_mut((h * other * n, 0), (other * n, other * n)).copy_from(&block);
            }
            m
        }
    };
    let lift = kron(&CMat::identity(nh, nh), q);
    let image = full * q;
    let map = lift.adjoint() * &image;
    let residual = fro_norm(&(&lift * &map - image));
    if !cfg.accepts(residual, 1.0) {
        return Err(Error::KernelNotSubalgebra { residual });
    }
    let native = match side {
        Side::Left => map,
        Side::Right => {
            let nc = c_alg.dim();
            let mut m = CMat::zeros(nc * nh, nc);
            for h in 0..nh {
                for a in 0..nc {
                    m.row_mut(a * nh + h).copy_from(&map.row(h * nc + a));
                }
            }
            m
        }
    };
    CoAction::new(c_alg.clone(), c.hopf().clone(), side, native, cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    /// Dimension of the space of linear maps intertwining both coactions (small problems only).
    pub intertwiner_dim: Option<usize>,
    /// Distance from the candidate to the intertwiner space.
    pub projection_residual: f64,
    /// `‖Φ_corrected − Φ_projected‖` after the polar step.
    pub polar_correction: f64,
    pub multiplicative_residual: f64,
    pub star_residual: f64,
    pub unit_residual: f64,
    pub equivariance_residual: f64,
    pub bijective: bool,
    pub residual: f64,
    pub verdict: bool,
}

/// Block pairs `(F_h, G_h)` of two coactions of the same side and group; a linear
/// map `Φ: A → C` intertwines them iff `Φ F_h = G_h Φ` for every `h`.
fn intertwiner_blocks(from: &CoAction, to: &CoAction) -> Vec<(CMat, CMat)> {
    let (na, nc) = (from.algebra().dim(), to.algebra().dim());
    (0..from.hopf().dim())
        .map(|h| (from.hfirst().rows(h * na, na).into_owned(), to.hfirst().rows(h * nc, nc).into_owned()))
        .collect()
}

fn constraint_apply(blocks: &[(CMat, CMat)], phi: &CMat) -> Vec<CMat> {
    blocks.iter().map(|(f, g)| phi * f - g * phi).collect()
}

fn constraint_adjoint(blocks: &[(CMat, CMat)], r: &[CMat], shape: (usize, usize)) -> CMat {
    let mut out = CMat::zeros(shape.0, shape.1);
    for ((f, g), rh) in blocks.iter().zip(r) {
        out += rh * f.adjoint() - g.adjoint() * rh;
    }
    out
}

fn sq_norm(ms: &[CMat]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum()
}

/// Orthogonal projection of `phi` onto `{Φ : Φ F_h = G_h Φ}`, by CGLS on the
/// minimal-norm correction. Matrix-free, so the cost stays quadratic in the dimensions.
fn project_intertwiners(blocks: &[(CMat, CMat)], phi: &CMat) -> CMat {
    let shape = phi.shape();
    let scale = 1.0 + phi.norm();
    let mut x = CMat::zeros(shape.0, shape.1);
    let mut r = constraint_apply(blocks, phi);
    let mut s = constraint_adjoint(blocks, &r, shape);
    let mut p = s.clone();
    let mut gamma = s.norm_squared();
    let max_iter = 4 * (shape.0 * shape.1).max(16);
    for _ in 0..max_iter {
        if gamma.sqrt() <= 1e-15 * scale {
            break;
        }
        let q = constraint_apply(blocks, &p);
        let qq = sq_norm(&q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        x += &p * C64::new(alpha, 0.0);
        for (rh, qh) in r.iter_mut().zip(&q) {
            *rh -= qh * C64::new(alpha, 0.0);
        }
        s = constraint_adjoint(blocks, &r, shape);
        let next = s.norm_squared();
        p = &s + &p * C64::new(next / gamma, 0.0);
        gamma = next;
    }
    phi - x
}

/// Dimension of the intertwiner space, computed densely only for small problems.
const DENSE_INTERTWINER_LIMIT: usize = 400;

fn intertwiner_dim(blocks: &[(CMat, CMat)], shape: (usize, usize), tol: f64) -> Option<usize> {
    let n = shape.0 * shape.1;
    if n > DENSE_INTERTWINER_LIMIT {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = CMat::zeros(shape.0, shape.1);
        e[(k % shape.0, k / shape.0)] = C64::new(1.0, 0.0);
        let parts = constraint_apply(blocks, &e);
        cols.push(CVec::from_iterator(parts.iter().map(|m| m.len()).sum(), parts.iter().flat_map(|m| m.iter().copied())));
    }
    Some(kernel(&crate::linalg::columns(cols[0].len(), &cols), tol).ncols())
}

/// `φ₁ ∘ E₁`: the canonical state of `A^{G₁}` composed with the conditional expectation.
/// Equivariant isomorphisms preserve it, and it agrees with the joint invariant state when that is unique.
fn metric_state(b: &BiActionAlgebra) -> Result<CVec> {
    let first = &b.fixed()?.first;
    let to_fixed = first.embedding.adjoint() * b.left().expectation();
    Ok(to_fixed.transpose() * &first.state.functional.coeffs)
}

/// Certify that `candidate: A → C` is (close to) an isomorphism of bi-action algebras.
///
/// The candidate is projected onto the intertwiner space by least squares and
/// then corrected to a unitary for the GNS inner products of `φ₁ ∘ E₁`.
pub fn certify_isomorphism(from: &BiActionAlgebra, to: &BiActionAlgebra, candidate: &CMat, cfg: &Config) -> Result<IsoReport> {
    let (a, c) = (from.algebra(), to.algebra());
    let (na, nc) = (a.dim(), c.dim());
    if candidate.shape() != (nc, na) {
        return Err(Error::Dimension("candidate must map A to C".into()));
    }
    if hopf_data_distance(from.left().hopf(), to.left().hopf()) > cfg.tol * 10.0
        || hopf_data_distance(from.right().hopf(), to.right().hopf()) > cfg.tol * 10.0
    {
        return Err(Error::Dimension("the two objects carry different quantum groups".into()));
    }
    let mut blocks = intertwiner_blocks(from.left(), to.left());
    blocks.extend(intertwiner_blocks(from.right(), to.right()));
    let projected = project_intertwiners(&blocks, candidate);
    let projection_residual = fro_norm(&(&projected - candidate));

    let ga = a.gram(&metric_state(from)?);
    let gc = c.gram(&metric_state(to)?);
    let ga_half = herm_apply(&ga, f64::sqrt);
    let ga_inv_half = herm_apply(&ga, |x| 1.0 / x.sqrt());
    let gc_half = herm_apply(&gc, f64::sqrt);
    let gc_inv_half = herm_apply(&gc, |x| 1.0 / x.sqrt());
    let t = &gc_half * &projected * &ga_inv_half;
    let svd = t.clone().svd(true, true);
    let unitary = svd.u.expect("u requested") * svd.v_t.expect("v_t requested");
    let phi = &gc_inv_half * unitary * &ga_half;
    let polar_correction = fro_norm(&(&phi - &projected));

    let mut multiplicative_residual: f64 = 0.0;
    let mut star_residual: f64 = 0.0;
    let images: Vec<CVec> = (0..na).map(|i| phi.column(i).into_owned()).collect();
    for i in 0..na {
        for j in 0..na {
            let lhs = &phi * a.basis_product(i, j);
            multiplicative_residual = multiplicative_residual.max(vec_norm(&(lhs - c.mul(&images[i], &images[j]))));
        }
        star_residual = star_residual.max(vec_norm(&(&phi * a.star_of(&a.basis(i)) - c.star_of(&images[i]))));
    }
    let unit_residual = vec_norm(&(&phi * a.unit() - c.unit()));
    let equivariance_residual = sq_norm(&constraint_apply(&blocks, &phi)).sqrt();
    let bijective = na == nc && rank(&phi, cfg.tol.max(1e-12)) == na;
    let residual = [projection_residual, polar_correction, multiplicative_residual, star_residual, unit_residual, equivariance_residual]
        .into_iter()
        .fold(0.0, f64::max);
    Ok(IsoReport {
        intertwiner_dim: intertwiner_dim(&blocks, (nc, na), cfg.tol.max(1e-12)),
        projection_residual,
        polar_correction,
        multiplicative_residual,
        star_residual,
        unit_residual,
        equivariance_residual,
        bijective,
        residual,
        verdict: bijective && residual < 1e-7,
    })
}

/// `a ↦ α₂(a)`, the canonical candidate for `A ≅ A □_G C(G)`.
pub fn unit_law_candidate(b: &BiActionAlgebra, cot: &Cotensor) -> CMat {
    cot.embedding.adjoint() * b.right().native_map()
}

/// `z ↦ z` between the two bracketings of a triple cotensor product, both embedded in `A⊗B⊗D`.
pub fn associator_candidate(left_nested: &CMat, right_nested: &CMat) -> CMat {
    right_nested.adjoint() * left_nested
}

/// Lift the embedding of `(A □ B) □ D` into `A ⊗ B ⊗ D` coordinates.
pub fn lift_left_nested(inner: &Cotensor, outer: &Cotensor, nd: usize) -> CMat {
    kron(&inner.embedding, &CMat::identity(nd, nd)) * &outer.embedding
}

/// Lift the embedding of `A □ (B □ D)` into `A ⊗ B ⊗ D` coordinates.
pub fn lift_right_nested(inner: &Cotensor, outer: &Cotensor, na: usize) -> CMat {
    kron(&CMat::identity(na, na), &inner.embedding) * &outer.embedding
}
