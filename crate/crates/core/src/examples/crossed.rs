use crate::coaction::{group_action_coaction, CoAction, Side};
use crate::csalg::{dense_to_row, tensor_product, CStarAlgebra};
use crate::error::{Error, Result};
use crate::examples::cocycle::TwoCocycle;
use crate::fqgroup::{dual_quantum_group, function_algebra, FiniteGroup, FiniteQuantumGroup};
use crate::linalg::{fro_norm, kron, kron_vec, CMat, CVec, ZERO};
use crate::morita::{validate_biaction, BiActionAlgebra};
use crate::Config;

/// Smash product `H ⋊ Ĥ` with the left `H`-coaction and the right dual `Ĥ`-coaction.
///
/// Basis `x_a ⊗ ξ_b` indexed `a·n + b`, product
/// `(f⊗ω)(g⊗ν) = f(ω₍₁₎ ⊳ g) ⊗ ω₍₂₎ν` with `ω ⊳ g = (ι⊗ω)Δ(g)`.
pub fn crossed_product(h: &FiniteQuantumGroup, cfg: &Config) -> Result<BiActionAlgebra> {
    let hd = dual_quantum_group(h)?;
    let n = h.dim();
    let (ha, da) = (h.algebra(), hd.algebra());
    let deltas: Vec<CMat> = (0..n).map(|k| h.coproduct_of_basis(k)).collect();
    // act[i][c] = ξ_i ⊳ x_c
    let act: Vec<Vec<CVec>> = (0..n)
        .map(|i| (0..n).map(|c| CVec::from_fn(n, |m, _| deltas[c][(m, i)])).collect())
        .collect();
    let dual_comul: Vec<Vec<(usize, usize, crate::linalg::C64)>> = (0..n)
        .map(|b| {
            let d = hd.coproduct_of_basis(b);
            let mut v = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if d[(i, j)] != ZERO {
                        v.push((i, j, d[(i, j)]));
                    }
                }
            }
            v
        })
        .collect();
    let dim = n * n;
    let product = |a: usize, b: usize, c: usize, d: usize| -> CVec {
        let mut out = CVec::zeros(dim);
        for &(i, j, w) in &dual_comul[b] {
            let left = ha.mul(&ha.basis(a), &act[i][c]);
            for (l, &lv) in left.iter().enumerate() {
                if lv == ZERO {
                    continue;
                }
                for &(r, rv) in da.row(j, d) {
                    out[l * n + r] += w * lv * rv;
                }
            }
        }
        out
    };
    let mut table = Vec::with_capacity(dim * dim);
    for x in 0..dim {
        for y in 0..dim {
            table.push(dense_to_row(&product(x / n, x % n, y / n, y % n), 1e-14));
        }
    }
    let unit = kron_vec(ha.unit(), da.unit());
    let raw = CStarAlgebra::from_table(table, CMat::identity(dim, dim), unit.clone(), Vec::new())?;
    // (x_a ⊗ ξ_b)* = (1 ⊗ ξ_b*)(x_a* ⊗ 1)
    let mut star = CMat::zeros(dim, dim);
    for a in 0..n {
        for b in 0..n {
            let left = kron_vec(ha.unit(), &da.star_of(&da.basis(b)));
            let right = kron_vec(&ha.star_of(&ha.basis(a)), da.unit());
            star.set_column(a * n + b, &raw.mul(&left, &right));
        }
    }
    let labels = (0..dim).map(|x| format!("{}#{}", ha.labels()[x / n], da.labels()[x % n])).collect();
    let algebra = CStarAlgebra::from_table(raw_table(&raw), star, unit, labels)?.validated(cfg)?;

    // α₁(x_a ⊗ ξ_b) = Δ(x_a) ⊗ ξ_b, rows (m, i, b)
    let mut left = CMat::zeros(n * dim, dim);
    // δ(x_a ⊗ ξ_b) = x_a ⊗ Δ̂(ξ_b), rows (a, i, j)
    let mut right = CMat::zeros(dim * n, dim);
    for a in 0..n {
        for b in 0..n {
            let col = a * n + b;
            for m in 0..n {
                for i in 0..n {
                    left[(m * dim + i * n + b, col)] = deltas[a][(m, i)];
                }
            }
            for &(i, j, w) in &dual_comul[b] {
                right[((a * n + i) * n + j, col)] = w;
            }
        }
    }
    let l = CoAction::new(algebra.clone(), h.clone(), Side::Left, left, cfg)?;
    let r = CoAction::new(algebra, hd, Side::Right, right, cfg)?;
    validate_biaction(l, r, cfg)
}

/// Rebuild the sparse product table of `a`.
fn raw_table(a: &CStarAlgebra) -> Vec<crate::csalg::ProductRow> {
    let n = a.dim();
    (0..n * n).map(|ij| a.row(ij / n, ij % n).clone()).collect()
}

/// Matrix of `x ↦ u x u*`.
pub fn inner_automorphism(a: &CStarAlgebra, u: &CVec) -> CMat {
    let us = a.star_of(u);
    let n = a.dim();
    let mut m = CMat::zeros(n, n);
    for k in 0..n {
        m.set_column(k, &a.mul(&a.mul(u, &a.basis(k)), &us));
    }
    m
}

/// Permutation matrix of `δ_y ↦ δ_{f(y)}`.
fn permutation(n: usize, f: impl Fn(usize) -> usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for y in 0..n {
        m[(f(y), y)] = crate::linalg::ONE;
    }
    m
}

/// Left translations on `C(G)`: `δ_y ↦ δ_{gy}`.
pub fn left_translations(g: &FiniteGroup) -> Vec<CMat> {
    (0..g.order()).map(|x| permutation(g.order(), |y| g.mul(x, y))).collect()
}

/// Right translations on `C(G)` as a left action: `δ_y ↦ δ_{yg⁻¹}`.
pub fn right_translations(g: &FiniteGroup) -> Vec<CMat> {
    (0..g.order()).map(|x| permutation(g.order(), |y| g.mul(y, g.inv(x)))).collect()
}

/// `C(G) ⊗ ℂ_σ[G]` with left translations on the first factor and
/// right translations tensored with `Ad u_g` as the second action.
pub fn projective_cocycle_algebra(sigma: &TwoCocycle, cfg: &Config) -> Result<BiActionAlgebra> {
    let group = sigma.group();
    let n = group.order();
    let hopf = function_algebra(group, cfg)?;
    let twisted = sigma.twisted_group_algebra(cfg)?;
    let ads: Vec<CMat> = (0..n).map(|g| inner_automorphism(&twisted, &twisted.basis(g))).collect();
    // Ad π must be an honest action even though π is only projective
    let mut action_residual: f64 = 0.0;
    for g in 0..n {
        for h in 0..n {
            action_residual = action_residual.max(fro_norm(&(&ads[g] * &ads[h] - &ads[group.mul(g, h)])));
        }
    }
    if !cfg.accepts(action_residual, 1.0) {
        return Err(Error::CocycleInvalid { identity: "Ad π(g) Ad π(h) = Ad π(gh)", residual: action_residual });
    }
    let a = tensor_product(hopf.algebra(), &twisted, cfg)?;
    let id = CMat::identity(n, n);
    let left_maps: Vec<CMat> = left_translations(group).iter().map(|t| kron(t, &id)).collect();
    let right_maps: Vec<CMat> = right_translations(group).iter().zip(&ads).map(|(t, ad)| kron(t, ad)).collect();
    let l = group_action_coaction(&a, &hopf, group, &left_maps, Side::Left, cfg)?;
    let r = group_action_coaction(&a, &hopf, group, &right_maps, Side::Right, cfg)?;
    validate_biaction(l, r, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::cocycle::heisenberg_cocycle;

    #[test]
    fn crossed_product_is_a_full_matrix_algebra() {
        let cfg = Config::default();
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
            let h = function_algebra(&g, &cfg).unwrap();
            let b = crossed_product(&h, &cfg).unwrap();
            assert_eq!(b.algebra().wedderburn().unwrap().block_sizes, vec![g.order()]);
            assert!(b.commutation_residual() < 1e-12);
        }
    }

    #[test]
    fn left_and_right_translations_commute() {
        let g = FiniteGroup::symmetric3();
        let (l, r) = (left_translations(&g), right_translations(&g));
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(&l[x] * &r[y], &r[y] * &l[x]);
                assert_eq!(&l[x] * &l[y], l[g.mul(x, y)]);
                assert_eq!(&r[x] * &r[y], r[g.mul(x, y)]);
            }
        }
    }

    #[test]
    fn inner_automorphisms_are_multiplicative() {
        let cfg = Config::default();
        let a = heisenberg_cocycle(3, 1e-12).unwrap().twisted_group_algebra(&cfg).unwrap();
        let ad = inner_automorphism(&a, &a.basis(4));
        for i in 0..9 {
            for j in 0..9 {
                let lhs = &ad * a.basis_product(i, j);
                let rhs = a.mul(&(&ad * a.basis(i)), &(&ad * a.basis(j)));
                assert!(crate::linalg::vec_norm(&(lhs - rhs)) < 1e-12);
            }
        }
    }

    #[test]
    fn cocycle_twisted_algebra_has_the_expected_fixed_dimensions() {
        let cfg = Config::default();
        let b = projective_cocycle_algebra(&heisenberg_cocycle(2, 1e-12).unwrap(), &cfg).unwrap();
        assert_eq!(b.algebra().dim(), 16);
        assert_eq!(b.left().fixed_dim(), 4);
        assert_eq!(b.right().fixed_dim(), 4);
    }
}
