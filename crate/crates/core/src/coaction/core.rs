use serde::{Deserialize, Serialize};

use crate::csalg::{check_functional, tensor_mul, tensor_star, CStarAlgebra};
use crate::error::{Error, Result};
use crate::fqgroup::FiniteQuantumGroup;
use crate::linalg::{col_mat, fro_norm, row_mat, kernel, kron, kron_vec, rank, vec_norm, CMat, CVec, ONE, ZERO};
use crate::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CoactionCertificates {
    pub homomorphism: f64,
    pub star: f64,
    pub unital: f64,
    pub coaction_law: f64,
    pub counit_law: f64,
    pub injective_rank: usize,
    pub expectation_idempotent: f64,
    pub expectation_unital: f64,
    pub expectation_star: f64,
    pub expectation_range: f64,
    pub expectation_positive: bool,
}

/// A left coaction `α: A → H ⊗ A` or right coaction `α: A → A ⊗ H`.
///
/// Internally both sides are kept in the H-first layout: column `k` of
/// `hfirst` holds `α(x_k)` with the `H` leg written first, so a right
/// coaction is stored through the flip `A ⊗ H → H ⊗ A`.
#[derive(Debug, Clone)]
pub struct CoAction {
    algebra: CStarAlgebra,
    hopf: FiniteQuantumGroup,
    side: Side,
    hfirst: CMat,
    fixed: CMat,
    expectation: CMat,
    certificates: CoactionCertificates,
}

/// Permutation matrix taking `A ⊗ H` coordinates to `H ⊗ A` coordinates.
pub(crate) fn flip_matrix(na: usize, nh: usize) -> CMat {
    let mut p = CMat::zeros(na * nh, na * nh);
    for a in 0..na {
        for h in 0..nh {
            p[(h * na + a, a * nh + h)] = crate::linalg::ONE;
        }
    }
    p
}

impl CoAction {
    /// Validate a coaction given in its native layout (`H⊗A` rows for left, `A⊗H` for right).
    pub fn new(algebra: CStarAlgebra, hopf: FiniteQuantumGroup, side: Side, map: CMat, cfg: &Config) -> Result<Self> {
        let (na, nh) = (algebra.dim(), hopf.dim());
        if map.shape() != (na * nh, na) {
            return Err(Error::Dimension(format!(
                "coaction matrix is {}x{}, expected {}x{}",
                map.nrows(),
                map.ncols(),
                na * nh,
                na
            )));
        }
        let hfirst = match side {
            Side::Left => map,
            Side::Right => flip_matrix(na, nh) * map,
        };
        Self::from_hfirst(algebra, hopf, side, hfirst, cfg)
    }

    pub(crate) fn from_hfirst(
        algebra: CStarAlgebra,
        hopf: FiniteQuantumGroup,
        side: Side,
        hfirst: CMat,
        cfg: &Config,
    ) -> Result<Self> {
        let tol = cfg.tol;
        let na = algebra.dim();
        let h = hopf.algebra();
        let mut cert = CoactionCertificates::default();
        let images: Vec<CVec> = (0..na).map(|k| hfirst.column(k).into_owned()).collect();
        let scale = 1.0 + fro_norm(&hfirst);

        cert.unital = vec_norm(&(&hfirst * algebra.unit() - kron_vec(h.unit(), algebra.unit())));
        if cert.unital > tol * scale {
            return Err(Error::CoactionAxiom { axiom: "α(1) = 1⊗1", residual: cert.unital });
        }
        let mut hom: f64 = 0.0;
        for i in 0..na {
            for j in 0..na {
                let mut lhs = CVec::zeros(images[0].len());
                for &(k, v) in algebra.row(i, j) {
                    lhs.axpy(v, &images[k], ONE);
                }
                hom = hom.max(vec_norm(&(lhs - tensor_mul(h, &algebra, &images[i], &images[j]))));
            }
        }
        cert.homomorphism = hom;
        if hom > tol * scale * scale {
            return Err(Error::CoactionAxiom { axiom: "α(ab) = α(a)α(b)", residual: hom });
        }
        let mut star: f64 = 0.0;
        for (k, img) in images.iter().enumerate() {
            let lhs = &hfirst * algebra.star_of(&algebra.basis(k));
            star = star.max(vec_norm(&(lhs - tensor_star(h, &algebra, img))));
        }
        cert.star = star;
        if star > tol * scale {
            return Err(Error::CoactionAxiom { axiom: "α(a*) = α(a)*", residual: star });
        }
        cert.coaction_law = coaction_law_residual(&hopf, &hfirst, na, side);
        if cert.coaction_law > tol * scale * scale {
            let axiom = match side {
                Side::Left => "(Δ⊗ι)α = (ι⊗α)α",
                Side::Right => "(α⊗ι)α = (ι⊗Δ)α",
            };
            return Err(Error::CoactionAxiom { axiom, residual: cert.coaction_law });
        }
        let counit_map = kron(&row_mat(hopf.counit()), &CMat::identity(na, na));
        cert.counit_law = fro_norm(&(&counit_map * &hfirst - CMat::identity(na, na)));
        if cert.counit_law > tol * scale {
            return Err(Error::CoactionAxiom { axiom: "(ε⊗ι)α = ι", residual: cert.counit_law });
        }
        cert.injective_rank = rank(&hfirst, tol.max(1e-12));
        if cert.injective_rank != na {
            return Err(Error::CoactionAxiom { axiom: "α injective", residual: (na - cert.injective_rank) as f64 });
        }

        let ones = kron(&col_mat(h.unit()), &CMat::identity(na, na));
        let fixed = kernel(&(&hfirst - &ones), tol.max(1e-12));
        let haar_map = kron(&row_mat(&hopf.haar().coeffs), &CMat::identity(na, na));
        let expectation = &haar_map * &hfirst;
        cert.expectation_idempotent = fro_norm(&(&expectation * &expectation - &expectation));
        cert.expectation_unital = vec_norm(&(&expectation * algebra.unit() - algebra.unit()));
        cert.expectation_range = fro_norm(&((&hfirst - &ones) * &expectation));
        let mut es: f64 = 0.0;
        for k in 0..na {
            let x = algebra.basis(k);
            es = es.max(vec_norm(&(&expectation * algebra.star_of(&x) - algebra.star_of(&(&expectation * &x)))));
        }
        cert.expectation_star = es;
        let trace = normalized_trace(&algebra);
        let composed = expectation.transpose() * &trace;
        cert.expectation_positive = check_functional(&algebra, &composed, tol)?.positive;
        Ok(Self { algebra, hopf, side, hfirst, fixed, expectation, certificates: cert })
    }

    pub fn algebra(&self) -> &CStarAlgebra {
        &self.algebra
    }

    pub fn hopf(&self) -> &FiniteQuantumGroup {
        &self.hopf
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `α` in the H-first layout (`H ⊗ A` rows).
    pub fn hfirst(&self) -> &CMat {
        &self.hfirst
    }

    /// `α` in its native layout.
    pub fn native_map(&self) -> CMat {
        match self.side {
            Side::Left => self.hfirst.clone(),
            Side::Right => flip_matrix(self.algebra.dim(), self.hopf.dim()).transpose() * &self.hfirst,
        }
    }

    pub fn apply_hfirst(&self, a: &CVec) -> CVec {
        &self.hfirst * a
    }

    /// Orthonormal basis (columns) of the fixed-point algebra `A^G`.
    pub fn fixed_basis(&self) -> &CMat {
        &self.fixed
    }

    pub fn fixed_dim(&self) -> usize {
        self.fixed.ncols()
    }

    /// Conditional expectation `E = (h⊗ι)α` onto `A^G`.
    pub fn expectation(&self) -> &CMat {
        &self.expectation
    }

    pub fn certificates(&self) -> &CoactionCertificates {
        &self.certificates
    }

    /// `π_α(ω)a = (ω⊗ι)α(a)` (H leg paired with `ω`).
    pub fn dual_action(&self, omega: &CVec) -> CMat {
        kron(&row_mat(omega), &CMat::identity(self.algebra.dim(), self.algebra.dim())) * &self.hfirst
    }
}

/// `Tr λ(·) / dim A`: a faithful tracial state on any C*-algebra.
pub fn normalized_trace(a: &CStarAlgebra) -> CVec {
    let n = a.dim();
    CVec::from_fn(n, |i, _| a.regular_trace(&a.basis(i)) / crate::linalg::r(n as f64))
}

fn coaction_law_residual(hopf: &FiniteQuantumGroup, m: &CMat, na: usize, side: Side) -> f64 {
    let nh = hopf.dim();
    let d: Vec<CMat> = (0..nh).map(|k| hopf.coproduct_of_basis(k)).collect();
    let mut res: f64 = 0.0;
    for k in 0..na {
        let mut diff = vec![ZERO; nh * nh * na];
        let idx = |h1: usize, h2: usize, a: usize| (h1 * nh + h2) * na + a;
        for h in 0..nh {
            for a in 0..na {
                let v = m[(h * na + a, k)];
                if v == ZERO {
                    continue;
                }
                // Δ applied to the H leg
                for h1 in 0..nh {
                    for h2 in 0..nh {
                        let dv = d[h][(h1, h2)];
                        if dv != ZERO {
                            diff[idx(h1, h2, a)] += v * dv;
                        }
                    }
                }
                // α applied to the A leg
                for h2 in 0..nh {
                    for b in 0..na {
                        let w = m[(h2 * na + b, a)];
                        if w == ZERO {
                            continue;
                        }
                        match side {
                            Side::Left => diff[idx(h, h2, b)] -= v * w,
                            Side::Right => diff[idx(h2, h, b)] -= v * w,
                        }
                    }
                }
            }
        }
        res = res.max(diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    res
}

/// `a ↦ 1 ⊗ a`.
pub fn trivial_coaction(a: &CStarAlgebra, hopf: &FiniteQuantumGroup, side: Side, cfg: &Config) -> Result<CoAction> {
    let n = a.dim();
    let map = kron(&col_mat(hopf.algebra().unit()), &CMat::identity(n, n));
    CoAction::from_hfirst(a.clone(), hopf.clone(), side, map, cfg)
}

/// `Δ` viewed as a coaction of `H` on its own algebra.
pub fn regular_coaction(hopf: &FiniteQuantumGroup, side: Side, cfg: &Config) -> Result<CoAction> {
    CoAction::new(hopf.algebra().clone(), hopf.clone(), side, hopf.comul().clone(), cfg)
}

/// Coaction of `C(G)` induced by a left action `g ↦ T_g` by *-automorphisms.
///
/// Left: `α(a) = Σ_g δ_g ⊗ T_{g⁻¹}(a)`. Right: `α(a) = Σ_g T_g(a) ⊗ δ_g`.
/// The group basis of `hopf` must be the one produced by `function_algebra`.
pub fn group_action_coaction(
    a: &CStarAlgebra,
    hopf: &FiniteQuantumGroup,
    group: &crate::fqgroup::FiniteGroup,
    maps: &[CMat],
    side: Side,
    cfg: &Config,
) -> Result<CoAction> {
    let (na, nh) = (a.dim(), group.order());
    if maps.len() != nh || hopf.dim() != nh {
        return Err(Error::Dimension("one automorphism per group element is required".into()));
    }
    let mut m = CMat::zeros(nh * na, na);
    for g in 0..nh {
        let t = match side {
            Side::Left => &maps[group.inv(g)],
            Side::Right => &maps[g],
        };
        m.view_mut((g * na, 0), (na, na)).copy_from(t);
    }
    CoAction::from_hfirst(a.clone(), hopf.clone(), side, m, cfg)
}

/// Replace `A` by `A^op` and the side by the other one: `a ↦ (R⊗ι)α(a)` with legs flipped.
pub fn convert_side(c: &CoAction, cfg: &Config) -> Result<CoAction> {
    let na = c.algebra().dim();
    let r = c.hopf().unitary_antipode();
    let map = kron(r, &CMat::identity(na, na)) * c.hfirst();
    let op = crate::csalg::opposite_algebra(c.algebra(), cfg)?;
    CoAction::from_hfirst(op, c.hopf().clone(), c.side().flip(), map, cfg)
}

/// Restriction of `c` to the invariant *-subalgebra spanned by the columns of `span`.
///
/// Returns the restricted coaction and the embedding whose columns are the
/// chosen orthonormal basis of the subalgebra.
pub fn restrict_coaction(c: &CoAction, span: &CMat, cfg: &Config) -> Result<(CoAction, CMat)> {
    let (sub, q) = crate::csalg::subalgebra(c.algebra(), span, cfg)?;
    let nh = c.hopf().dim();
    let lift = kron(&CMat::identity(nh, nh), &q);
    let image = c.hfirst() * &q;
    let map = lift.adjoint() * &image;
    let residual = fro_norm(&(&lift * &map - image));
    if residual > cfg.tol.max(1e-12) * 1e3 {
        return Err(Error::CoactionAxiom { axiom: "subalgebra is invariant", residual });
    }
    Ok((CoAction::from_hfirst(sub, c.hopf().clone(), c.side(), map, cfg)?, q))
}
