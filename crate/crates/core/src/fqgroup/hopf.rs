use serde::Serialize;

use crate::csalg::{check_functional, CStarAlgebra, Functional};
use crate::error::{Error, Result};
use crate::fqgroup::group::FiniteGroup;
use crate::fqgroup::reps::{compute_irreps, UnitaryRepresentation};
use crate::linalg::{fro_norm, herm_eigen, kernel, vec_norm, CMat, CVec, C64, ONE, ZERO};
use crate::Config;

/// Residuals measured while validating Hopf data.
#[derive(Debug, Clone, Default, Serialize)]
pub struct HopfCertificates {
    pub comul_homomorphism: f64,
    pub comul_star: f64,
    pub coassociativity: f64,
    pub counit: f64,
    pub antipode: f64,
    pub antipode_squared: f64,
    pub haar_invariance: f64,
    pub haar_trace: f64,
    pub rho: f64,
    pub irreps: f64,
}

/// A finite quantum group: Hopf *-algebra data on a finite-dimensional C*-algebra.
///
/// `comul` has one column per basis element holding `Δ(x_k)` in `H ⊗ H`
/// coordinates; `antipode` has `S(x_k)` in column `k`. `rho` is the
/// Woronowicz character as a functional on `H`.
#[derive(Debug, Clone)]
pub struct FiniteQuantumGroup {
    algebra: CStarAlgebra,
    comul: CMat,
    counit: CVec,
    antipode: CMat,
    haar: Functional,
    rho: CVec,
    irreps: Vec<UnitaryRepresentation>,
    certificates: HopfCertificates,
    cfg: Config,
}

impl FiniteQuantumGroup {
    /// Validate Hopf data. A missing Haar state is solved for; a missing `ρ` defaults to the counit.
    pub fn new(
        algebra: CStarAlgebra,
        comul: CMat,
        counit: CVec,
        antipode: CMat,
        haar: Option<CVec>,
        rho: Option<CVec>,
        cfg: &Config,
    ) -> Result<Self> {
        let n = algebra.dim();
        if comul.nrows() != n * n || comul.ncols() != n || counit.len() != n || antipode.shape() != (n, n)
        {
            return Err(Error::Dimension(format!("Hopf data does not match algebra dimension {n}")));
        }
        let tol = cfg.tol;
        let mut cert = HopfCertificates::default();
        let blocks: Vec<CMat> = (0..n).map(|k| column_as_matrix(&comul, k, n)).collect();
        check_comul_hom(&algebra, &comul, &mut cert);
        if cert.comul_homomorphism > tol {
            return Err(Error::HopfAxiom { axiom: "Δ is a unital homomorphism", residual: cert.comul_homomorphism });
        }
        if cert.comul_star > tol {
            return Err(Error::HopfAxiom { axiom: "Δ(x*) = Δ(x)*", residual: cert.comul_star });
        }
        cert.coassociativity = coassociativity_residual(&blocks);
        if cert.coassociativity > tol {
            return Err(Error::HopfAxiom { axiom: "(Δ⊗ι)Δ = (ι⊗Δ)Δ", residual: cert.coassociativity });
        }
        cert.counit = counit_residual(&blocks, &counit);
        if cert.counit > tol {
            return Err(Error::HopfAxiom { axiom: "(ε⊗ι)Δ = ι = (ι⊗ε)Δ", residual: cert.counit });
        }
        cert.antipode = antipode_residual(&algebra, &blocks, &counit, &antipode);
        if cert.antipode > tol {
            return Err(Error::HopfAxiom { axiom: "m(S⊗ι)Δ = ε(·)1 = m(ι⊗S)Δ", residual: cert.antipode });
        }
        cert.antipode_squared = fro_norm(&(&antipode * &antipode - CMat::identity(n, n)));
        if cert.antipode_squared > tol {
            return Err(Error::HopfAxiom { axiom: "S² = ι", residual: cert.antipode_squared });
        }
        let haar = match haar {
            Some(h) => h,
            None => solve_haar(&algebra, &blocks, tol)?,
        };
        cert.haar_invariance = haar_residual(&algebra, &blocks, &haar);
        if cert.haar_invariance > tol {
            return Err(Error::HopfAxiom { axiom: "(h⊗ι)Δ = h(·)1 = (ι⊗h)Δ", residual: cert.haar_invariance });
        }
        let haar = check_functional(&algebra, &haar, tol)?;
        if !haar.faithful {
            return Err(Error::NotFaithful { min_eigenvalue: haar.min_eigenvalue });
        }
        cert.haar_trace = trace_defect(&algebra, &haar.coeffs);
        let rho = rho.unwrap_or_else(|| counit.clone());
        if rho.len() != n {
            return Err(Error::Dimension("ρ must have one value per basis element".into()));
        }
        let dual = dual_algebra(&algebra, &blocks, &counit, &antipode, cfg)?;
        let (irreps, irrep_res) = compute_irreps(&algebra, &blocks, &dual, &rho)?;
        cert.irreps = irrep_res;
        if irrep_res > tol * 1e2 {
            return Err(Error::HopfAxiom { axiom: "irreducible corepresentations are unitary", residual: irrep_res });
        }
        cert.rho = check_rho(&algebra, &blocks, &antipode, &rho, &irreps, tol)?;
        Ok(Self { algebra, comul, counit, antipode, haar, rho, irreps, certificates: cert, cfg: *cfg })
    }

    pub fn algebra(&self) -> &CStarAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn comul(&self) -> &CMat {
        &self.comul
    }

    pub fn counit(&self) -> &CVec {
        &self.counit
    }

    pub fn antipode(&self) -> &CMat {
        &self.antipode
    }

    /// `R = S`: the scaling group is trivial once `ρ = ε`.
    pub fn unitary_antipode(&self) -> &CMat {
        &self.antipode
    }

    pub fn haar(&self) -> &Functional {
        &self.haar
    }

    pub fn rho(&self) -> &CVec {
        &self.rho
    }

    pub fn irreps(&self) -> &[UnitaryRepresentation] {
        &self.irreps
    }

    pub fn certificates(&self) -> &HopfCertificates {
        &self.certificates
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    /// `Δ(x_k)` as an `n × n` coefficient matrix.
    pub fn coproduct_of_basis(&self, k: usize) -> CMat {
        column_as_matrix(&self.comul, k, self.dim())
    }

    pub fn coproduct(&self, a: &CVec) -> CVec {
        &self.comul * a
    }

    pub fn counit_of(&self, a: &CVec) -> C64 {
        self.counit.iter().zip(a.iter()).map(|(e, x)| e * x).sum()
    }
}

pub(crate) fn column_as_matrix(m: &CMat, k: usize, n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| m[(i * n + j, k)])
}

fn check_comul_hom(h: &CStarAlgebra, comul: &CMat, cert: &mut HopfCertificates) {
    let n = h.dim();
    let hh = h.tensor_raw(h);
    let cols: Vec<CVec> = (0..n).map(|k| comul.column(k).into_owned()).collect();
    let mut res: f64 = vec_norm(&(comul * h.unit() - hh.unit()));
    for i in 0..n {
        for j in 0..n {
            let lhs = comul * h.basis_product(i, j);
            res = res.max(vec_norm(&(lhs - hh.mul(&cols[i], &cols[j]))));
        }
    }
    cert.comul_homomorphism = res;
    let mut star_res: f64 = 0.0;
    for (i, col) in cols.iter().enumerate() {
        star_res = star_res.max(vec_norm(&(comul * h.star_of(&h.basis(i)) - hh.star_of(col))));
    }
    cert.comul_star = star_res;
}

fn coassociativity_residual(d: &[CMat]) -> f64 {
    let n = d.len();
    let mut res: f64 = 0.0;
    for dk in d {
        let mut diff = vec![ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let v = dk[(i, j)];
                if v == ZERO {
                    continue;
                }
                // (Δ⊗ι): Δ(x_i)⊗x_j ; (ι⊗Δ): x_i⊗Δ(x_j)
                for a in 0..n {
                    for b in 0..n {
                        diff[(a * n + b) * n + j] += v * d[i][(a, b)];
                        diff[(i * n + a) * n + b] -= v * d[j][(a, b)];
                    }
                }
            }
        }
        res = res.max(diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    res
}

fn counit_residual(d: &[CMat], eps: &CVec) -> f64 {
    let n = d.len();
    let mut res: f64 = 0.0;
    for (k, dk) in d.iter().enumerate() {
        let left = dk.transpose() * eps;
        let right = dk * eps;
        let e = crate::linalg::unit_vec(n, k);
        res = res.max(vec_norm(&(left - &e))).max(vec_norm(&(right - e)));
    }
    res
}

fn antipode_residual(h: &CStarAlgebra, d: &[CMat], eps: &CVec, s: &CMat) -> f64 {
    let n = h.dim();
    let sx: Vec<CVec> = (0..n).map(|i| s.column(i).into_owned()).collect();
    let mut res: f64 = 0.0;
    for (k, dk) in d.iter().enumerate() {
        let mut left = CVec::zeros(n);
        let mut right = CVec::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = dk[(i, j)];
                if v == ZERO {
                    continue;
                }
                left += h.mul(&sx[i], &h.basis(j)) * v;
                right += h.mul(&h.basis(i), &sx[j]) * v;
            }
        }
        let target = h.unit() * eps[k];
        res = res.max(vec_norm(&(left - &target))).max(vec_norm(&(right - target)));
    }
    res
}

/// Unique normalized solution of left and right invariance.
pub(crate) fn solve_haar(h: &CStarAlgebra, d: &[CMat], tol: f64) -> Result<CVec> {
    let n = h.dim();
    let u = h.unit();
    // rows (side, k, j); unknowns h_i
    let mut sys = CMat::zeros(2 * n * n, n);
    for (k, dk) in d.iter().enumerate() {
        for j in 0..n {
            let (r1, r2) = (k * n + j, n * n + k * n + j);
            for i in 0..n {
                sys[(r1, i)] += dk[(i, j)];
                sys[(r2, i)] += dk[(j, i)];
            }
            sys[(r1, k)] -= u[j];
            sys[(r2, k)] -= u[j];
        }
    }
    let ker = kernel(&sys, tol.max(1e-12));
    if ker.ncols() != 1 {
        return Err(Error::NonUniqueInvariantState { kernel_dim: ker.ncols() });
    }
    let v = ker.column(0).into_owned();
    let norm: C64 = v.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
    Ok(v / norm)
}

fn haar_residual(h: &CStarAlgebra, d: &[CMat], haar: &CVec) -> f64 {
    let u = h.unit();
    let mut res: f64 = 0.0;
    for (k, dk) in d.iter().enumerate() {
        let left = dk.transpose() * haar - u * haar[k];
        let right = dk * haar - u * haar[k];
        res = res.max(vec_norm(&left)).max(vec_norm(&right));
    }
    res
}

/// `max |φ(x_i x_j) − φ(x_j x_i)|`.
pub fn trace_defect(h: &CStarAlgebra, phi: &CVec) -> f64 {
    let n = h.dim();
    let ev = |v: &CVec| -> C64 { v.iter().zip(phi.iter()).map(|(a, b)| a * b).sum() };
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            res = res.max((ev(&h.basis_product(i, j)) - ev(&h.basis_product(j, i))).norm());
        }
    }
    res
}

/// `H*` with the convolution product, validated as a C*-algebra.
pub(crate) fn dual_algebra(
    h: &CStarAlgebra,
    d: &[CMat],
    eps: &CVec,
    s: &CMat,
    cfg: &Config,
) -> Result<CStarAlgebra> {
    let n = h.dim();
    let mut table = vec![Vec::new(); n * n];
    for (k, dk) in d.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let v = dk[(i, j)];
                if v != ZERO {
                    table[i * n + j].push((k, v));
                }
            }
        }
    }
    let star = (h.star_matrix() * s.map(|z| z.conj())).adjoint();
    let labels = h.labels().iter().map(|l| format!("f[{l}]")).collect();
    CStarAlgebra::from_table(table, star, eps.clone(), labels)?.validated(cfg)
}

fn check_rho(
    h: &CStarAlgebra,
    d: &[CMat],
    antipode: &CMat,
    rho: &CVec,
    irreps: &[UnitaryRepresentation],
    tol: f64,
) -> Result<f64> {
    let n = h.dim();
    let ev = |v: &CVec| -> C64 { v.iter().zip(rho.iter()).map(|(a, b)| a * b).sum() };
    let mut mult: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            mult = mult.max((ev(&h.basis_product(i, j)) - rho[i] * rho[j]).norm());
        }
    }
    if mult > tol {
        return Err(Error::HopfAxiom { axiom: "ρ is a character of H", residual: mult });
    }
    let mut res = mult;
    for u in irreps {
        let (vals, _) = herm_eigen(&u.rho_matrix);
        let herm = fro_norm(&(&u.rho_matrix - u.rho_matrix.adjoint()));
        let low = vals.first().copied().unwrap_or(0.0);
        if herm > tol || low <= tol {
            return Err(Error::RhoNotPositive { min_eigenvalue: low });
        }
        let bal = (vals.iter().sum::<f64>() - vals.iter().map(|v| 1.0 / v).sum::<f64>()).abs();
        if bal > tol * u.dim as f64 {
            return Err(Error::HopfAxiom { axiom: "Tr π(ρ) = Tr π(ρ⁻¹)", residual: bal });
        }
        res = res.max(bal);
    }
    // S² = ι must agree with the ρ-twist x ↦ (ρ⊗ι⊗ρ⁻¹)Δ²(x), where ρ⁻¹ = ρ∘S
    let rho_inv = antipode.transpose() * rho;
    let mut twist: f64 = 0.0;
    for (k, dk) in d.iter().enumerate() {
        // Δ²(x_k) = Σ_ij dk[i,j] Δ(x_i)⊗x_j ; apply ρ on leg 1 and ρ⁻¹ on leg 3
        let mut out = CVec::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = dk[(i, j)];
                if v == ZERO {
                    continue;
                }
                let rinv_j = rho_inv[j];
                for a in 0..n {
                    for b in 0..n {
                        out[b] += v * d[i][(a, b)] * rho[a] * rinv_j;
                    }
                }
            }
        }
        twist = twist.max(vec_norm(&(out - crate::linalg::unit_vec(n, k))));
    }
    if twist > tol {
        return Err(Error::HopfAxiom { axiom: "S² equals the ρ-twist", residual: twist });
    }
    Ok(res.max(twist))
}

/// `C(G)`: functions on a finite group with `Δ(δ_g) = Σ_h δ_h ⊗ δ_{h⁻¹g}`.
pub fn function_algebra(g: &FiniteGroup, cfg: &Config) -> Result<FiniteQuantumGroup> {
    let n = g.order();
    let mult: Vec<_> = (0..n).map(|i| (i, i, i, ONE)).collect();
    let labels = g.labels().iter().map(|l| format!("δ{l}")).collect();
    let h = CStarAlgebra::from_structure_constants(
        n,
        &mult,
        CMat::identity(n, n),
        CVec::from_element(n, ONE),
        labels,
        cfg,
    )?;
    let mut comul = CMat::zeros(n * n, n);
    let mut antipode = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            comul[(y * n + g.mul(g.inv(y), x), x)] = ONE;
        }
        antipode[(g.inv(x), x)] = ONE;
    }
    let counit = crate::linalg::unit_vec(n, g.identity());
    FiniteQuantumGroup::new(h, comul, counit, antipode, None, None, cfg)
}

/// `ℂ[G]`: the group algebra with `Δ(u_g) = u_g ⊗ u_g`.
pub fn group_algebra(g: &FiniteGroup, cfg: &Config) -> Result<FiniteQuantumGroup> {
    let n = g.order();
    let mut mult = Vec::with_capacity(n * n);
    let mut star = CMat::zeros(n, n);
    let mut comul = CMat::zeros(n * n, n);
    let mut antipode = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            mult.push((x, y, g.mul(x, y), ONE));
        }
        star[(g.inv(x), x)] = ONE;
        antipode[(g.inv(x), x)] = ONE;
        comul[(x * n + x, x)] = ONE;
    }
    let labels = g.labels().iter().map(|l| format!("u{l}")).collect();
    let h = CStarAlgebra::from_structure_constants(
        n,
        &mult,
        star,
        crate::linalg::unit_vec(n, g.identity()),
        labels,
        cfg,
    )?;
    FiniteQuantumGroup::new(h, comul, CVec::from_element(n, ONE), antipode, None, None, cfg)
}

/// Hopf dual `H*` on the dual basis `f_k(x_j) = δ_kj`.
pub fn dual_quantum_group(q: &FiniteQuantumGroup) -> Result<FiniteQuantumGroup> {
    let n = q.dim();
    let h = q.algebra();
    let blocks: Vec<CMat> = (0..n).map(|k| q.coproduct_of_basis(k)).collect();
    let algebra = dual_algebra(h, &blocks, q.counit(), q.antipode(), q.config())?;
    let mut comul = CMat::zeros(n * n, n);
    for (i, j, k, v) in h.structure_constants() {
        comul[(i * n + j, k)] += v;
    }
    FiniteQuantumGroup::new(
        algebra,
        comul,
        h.unit().clone(),
        q.antipode().transpose(),
        None,
        None,
        q.config(),
    )
}

/// Largest coordinate difference between two quantum groups on the same basis.
pub fn hopf_data_distance(a: &FiniteQuantumGroup, b: &FiniteQuantumGroup) -> f64 {
    if a.dim() != b.dim() {
        return f64::INFINITY;
    }
    let n = a.dim();
    let mut res = fro_norm(&(a.comul() - b.comul()))
        .max(vec_norm(&(a.counit() - b.counit())))
        .max(fro_norm(&(a.antipode() - b.antipode())))
        .max(fro_norm(&(a.algebra().star_matrix() - b.algebra().star_matrix())))
        .max(vec_norm(&(a.algebra().unit() - b.algebra().unit())));
    for i in 0..n {
        for j in 0..n {
            res = res.max(vec_norm(&(a.algebra().basis_product(i, j) - b.algebra().basis_product(i, j))));
        }
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqgroup::reps::{conjugate_representation, standard_solution};
    use crate::linalg::r;

    fn cfg() -> Config {
        Config::default()
    }

    fn close(v: &CVec, w: &[f64]) -> bool {
        v.iter().zip(w).all(|(a, b)| (a - r(*b)).norm() < 1e-10)
    }

    #[test]
    fn functions_on_z2() {
        let q = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
        assert!(close(&q.haar().coeffs, &[0.5, 0.5]));
        let chars: Vec<CVec> = q.irreps().iter().map(|u| u.character()).collect();
        assert!(close(&chars[0], &[1.0, 1.0]));
        assert!(close(&chars[1], &[1.0, -1.0]));
    }

    #[test]
    fn group_algebra_haar_is_delta_at_identity() {
        let q = group_algebra(&FiniteGroup::symmetric3(), &cfg()).unwrap();
        assert!(close(&q.haar().coeffs, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert_eq!(q.algebra().blocks(), vec![1, 1, 2]);
        assert_eq!(q.irreps().len(), 6);
    }

    #[test]
    fn swapped_antipode_breaks_antipode_law() {
        let q = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
        let swap = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)]);
        let err = FiniteQuantumGroup::new(
            q.algebra().clone(),
            q.comul().clone(),
            q.counit().clone(),
            swap,
            None,
            None,
            &cfg(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::HopfAxiom { axiom, .. } if axiom.starts_with("m(S")), "{err:?}");
    }

    #[test]
    fn s3_functions_haar_and_irreps() {
        let q = function_algebra(&FiniteGroup::symmetric3(), &cfg()).unwrap();
        assert!(close(&q.haar().coeffs, &[1.0 / 6.0; 6]));
        assert!(q.certificates().haar_trace < 1e-12);
        let dims: Vec<usize> = q.irreps().iter().map(|u| u.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        let two = &q.irreps()[2];
        let bar = conjugate_representation(q.algebra(), two);
        assert!(bar.unitarity_residual(q.algebra()) < 1e-9);
        assert!(bar.corepresentation_residual(q.comul()) < 1e-9);
        // real character: the conjugate is equivalent
        assert!(vec_norm(&(bar.character() - two.character())) < 1e-9);
        let sol = standard_solution(two, 1e-9).unwrap();
        assert!((sol.dim_q - 2.0).abs() < 1e-9);
        assert!(sol.conjugate_residual < 1e-9);
    }

    #[test]
    fn z3_group_algebra_has_grouplike_irreps() {
        let q = group_algebra(&FiniteGroup::cyclic(3), &cfg()).unwrap();
        assert_eq!(q.irreps().len(), 3);
        for u in q.irreps() {
            assert_eq!(u.dim, 1);
            let x = u.coefficient(0, 0);
            // group-like: a single basis vector u_g
            assert_eq!(x.iter().filter(|z| z.norm() > 1e-9).count(), 1);
            assert!((q.coproduct(x) - crate::linalg::kron_vec(x, x)).norm() < 1e-9);
        }
    }

    #[test]
    fn dual_of_functions_is_group_algebra() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric3()] {
            let q = function_algebra(&g, &cfg()).unwrap();
            let d = dual_quantum_group(&q).unwrap();
            let expect = group_algebra(&g, &cfg()).unwrap();
            assert!(hopf_data_distance(&d, &expect) < 1e-12);
            let dd = dual_quantum_group(&d).unwrap();
            assert!(hopf_data_distance(&dd, &q) < 1e-12);
        }
    }

    #[test]
    fn dual_of_z2_functions_is_isomorphic_to_functions() {
        // u_e ↦ δ_e + δ_g, u_g ↦ δ_e − δ_g is a Hopf iso ℂ[Z2] → C(Z2)
        let c = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
        let d = dual_quantum_group(&c).unwrap();
        let t = CMat::from_row_slice(2, 2, &[r(1.0), r(1.0), r(1.0), r(-1.0)]);
        for i in 0..2 {
            for j in 0..2 {
                let lhs = &t * d.algebra().basis_product(i, j);
                let rhs = c.algebra().mul(&t.column(i).into_owned(), &t.column(j).into_owned());
                assert!(vec_norm(&(lhs - rhs)) < 1e-12);
            }
            let lhs = crate::linalg::kron(&t, &t) * d.comul().column(i);
            let rhs = c.comul() * t.column(i);
            assert!(vec_norm(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn nontrivial_rho_is_rejected() {
        let q = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
        let err = FiniteQuantumGroup::new(
            q.algebra().clone(),
            q.comul().clone(),
            q.counit().clone(),
            q.antipode().clone(),
            None,
            Some(CVec::from_vec(vec![r(0.0), r(1.0)])),
            &cfg(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::RhoNotPositive { .. }), "{err:?}");
    }
}
