use std::sync::OnceLock;

use crate::coaction::{canonical_state, restrict_coaction, CanonicalState, CoAction, Side};
use crate::csalg::{dual_basis, CStarAlgebra, DualBasisPair};
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, CMat, CVec};
use crate::Config;

/// One fixed-point algebra together with the action of the other quantum group on it.
#[derive(Debug, Clone)]
pub struct FixedSide {
    /// Restriction of the other coaction to the fixed-point algebra.
    pub coaction: CoAction,
    /// Orthonormal basis of the fixed-point algebra, as columns in coordinates of `A`.
    pub embedding: CMat,
    pub state: CanonicalState,
    pub pair: DualBasisPair,
}

impl FixedSide {
    pub fn algebra(&self) -> &CStarAlgebra {
        self.coaction.algebra()
    }

    pub fn dim(&self) -> usize {
        self.embedding.ncols()
    }

    pub fn dim_q(&self) -> f64 {
        self.state.dim_q
    }

    /// Dual-basis pairs `(x_i, x^i)` lifted into `A`.
    pub fn lifted_pairs(&self) -> Vec<(CVec, CVec)> {
        self.pair
            .basis
            .iter()
            .zip(&self.pair.dual)
            .map(|(x, d)| (&self.embedding * x, &self.embedding * d))
            .collect()
    }

    /// `φ` of the `k`-th basis element.
    pub fn state_of_basis(&self, k: usize) -> crate::linalg::C64 {
        self.state.functional.coeffs[k]
    }

    fn build(fixed_by: &CoAction, other: &CoAction, cfg: &Config) -> Result<Self> {
        let (coaction, embedding) = restrict_coaction(other, fixed_by.fixed_basis(), cfg)?;
        let state = canonical_state(&coaction, cfg)?;
        let pair = dual_basis(coaction.algebra(), &state.functional.coeffs, cfg.tol)?;
        Ok(Self { coaction, embedding, state, pair })
    }
}

#[derive(Debug, Clone)]
pub struct FixedData {
    /// `A^{G₁}` with its `G₂`-action.
    pub first: FixedSide,
    /// `A^{G₂}` with its `G₁`-action.
    pub second: FixedSide,
}

/// A C*-algebra with a left coaction of `G₁` and a right coaction of `G₂`.
#[derive(Debug)]
pub struct BiActionAlgebra {
    left: CoAction,
    right: CoAction,
    commutation_residual: f64,
    cfg: Config,
    fixed: OnceLock<Result<FixedData>>,
}

impl Clone for BiActionAlgebra {
    fn clone(&self) -> Self {
        let fixed = OnceLock::new();
        if let Some(v) = self.fixed.get() {
            let _ = fixed.set(v.clone());
        }
        Self { left: self.left.clone(), right: self.right.clone(), commutation_residual: self.commutation_residual, cfg: self.cfg, fixed }
    }
}

/// `‖(ι⊗α₂)α₁ − (α₁⊗ι)α₂‖`, computed blockwise: the two composites agree
/// iff every `H₁`-block of `α₁` commutes with every `H₂`-block of `α₂`.
pub fn commutation_residual(left: &CoAction, right: &CoAction) -> f64 {
    let na = left.algebra().dim();
    let lb: Vec<CMat> = (0..left.hopf().dim()).map(|h| left.hfirst().rows(h * na, na).into_owned()).collect();
    let rb: Vec<CMat> = (0..right.hopf().dim()).map(|h| right.hfirst().rows(h * na, na).into_owned()).collect();
    let mut sq = 0.0;
    for l in &lb {
        for r in &rb {
            sq += (l * r - r * l).norm_squared();
        }
    }
    sq.sqrt()
}

fn same_algebra(a: &CStarAlgebra, b: &CStarAlgebra) -> f64 {
    if a.dim() != b.dim() {
        return f64::INFINITY;
    }
    let n = a.dim();
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            res = res.max(vec_norm(&(a.basis_product(i, j) - b.basis_product(i, j))));
        }
        res = res.max(vec_norm(&(a.star_of(&a.basis(i)) - b.star_of(&b.basis(i)))));
    }
    res
}

/// Check that a left and a right coaction on the same algebra commute.
pub fn validate_biaction(left: CoAction, right: CoAction, cfg: &Config) -> Result<BiActionAlgebra> {
    if left.side() != Side::Left || right.side() != Side::Right {
        return Err(Error::Dimension("a bi-action needs a left coaction and a right coaction".into()));
    }
    let d = same_algebra(left.algebra(), right.algebra());
    if !cfg.accepts(d, 1.0) {
        return Err(Error::Dimension("the two coactions act on different algebras".into()));
    }
    let residual = commutation_residual(&left, &right);
    if !cfg.accepts(residual, 1.0) {
        return Err(Error::NotCommuting { residual });
    }
    Ok(BiActionAlgebra { left, right, commutation_residual: residual, cfg: *cfg, fixed: OnceLock::new() })
}

impl BiActionAlgebra {
    pub fn algebra(&self) -> &CStarAlgebra {
        self.left.algebra()
    }

    pub fn left(&self) -> &CoAction {
        &self.left
    }

    pub fn right(&self) -> &CoAction {
        &self.right
    }

    pub fn commutation_residual(&self) -> f64 {
        self.commutation_residual
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    /// Fixed-point algebras, their canonical states and dual bases (computed once).
    pub fn fixed(&self) -> Result<&FixedData> {
        self.fixed
            .get_or_init(|| {
                Ok(FixedData {
                    first: FixedSide::build(&self.left, &self.right, &self.cfg)?,
                    second: FixedSide::build(&self.right, &self.left, &self.cfg)?,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}
