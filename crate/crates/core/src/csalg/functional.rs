use serde::Serialize;

use crate::csalg::algebra::CStarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{herm_eigen, singular_values, CMat, CVec, C64};

/// A linear functional given by its values on the basis.
#[derive(Debug, Clone, Serialize)]
pub struct Functional {
    #[serde(serialize_with = "crate::io::ser_cvec")]
    pub coeffs: CVec,
    pub hermitian: bool,
    pub positive: bool,
    pub faithful: bool,
    /// Extremal eigenvalues of the Hermitian part of the Gram matrix `φ(x_i* x_j)`.
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `max_i |φ(x_i*) - conj φ(x_i)|`.
    pub hermitian_residual: f64,
}

impl Functional {
    pub fn eval(&self, a: &CVec) -> C64 {
        self.coeffs.iter().zip(a.iter()).map(|(f, x)| f * x).sum()
    }
}

/// Evaluate the positivity and faithfulness flags of `coeffs`.
pub fn check_functional(a: &CStarAlgebra, coeffs: &CVec, tol: f64) -> Result<Functional> {
    let n = a.dim();
    if coeffs.len() != n {
        return Err(Error::Dimension(format!("functional has {} values, algebra dim {n}", coeffs.len())));
    }
    let eval = |x: &CVec| -> C64 { coeffs.iter().zip(x.iter()).map(|(f, y)| f * y).sum() };
    let hermitian_residual = (0..n)
        .map(|i| (eval(&a.star_of(&a.basis(i))) - coeffs[i].conj()).norm())
        .fold(0.0, f64::max);
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let hermitian = hermitian_residual <= tol * scale.max(1.0);
    let (vals, _) = herm_eigen(&a.gram(coeffs));
    let min_eigenvalue = vals.first().copied().unwrap_or(0.0);
    let max_eigenvalue = vals.last().copied().unwrap_or(0.0);
    let spread = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let positive = hermitian && min_eigenvalue >= -tol * spread;
    let faithful = positive && min_eigenvalue > tol * spread;
    Ok(Functional {
        coeffs: coeffs.clone(),
        hermitian,
        positive,
        faithful,
        min_eigenvalue,
        max_eigenvalue,
        hermitian_residual,
    })
}

/// Basis `x_i` with its dual `x^i` for a faithful functional: `φ(x_i x^j) = δ_ij`.
#[derive(Debug, Clone)]
pub struct DualBasisPair {
    pub basis: Vec<CVec>,
    pub dual: Vec<CVec>,
    pub pairing_residual: f64,
}

/// Dual basis of the stored basis with respect to `phi`.
pub fn dual_basis(a: &CStarAlgebra, phi: &CVec, tol: f64) -> Result<DualBasisPair> {
    let n = a.dim();
    let m = CMat::from_fn(n, n, |i, j| {
        a.row(i, j).iter().map(|&(k, v)| v * phi[k]).sum::<C64>()
    });
    let sv = singular_values(&m);
    let top = sv.iter().copied().fold(0.0, f64::max);
    let low = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if n > 0 && low <= tol * top.max(1.0) {
        return Err(Error::SingularPairing { min_singular: low });
    }
    let inv = m.clone().try_inverse().ok_or(Error::SingularPairing { min_singular: low })?;
    let basis: Vec<CVec> = (0..n).map(|i| a.basis(i)).collect();
    let dual: Vec<CVec> = (0..n).map(|j| inv.column(j).into_owned()).collect();
    let mut pairing_residual: f64 = 0.0;
    for i in 0..n {
        for (j, d) in dual.iter().enumerate() {
            let v: C64 = a.mul(&basis[i], d).iter().zip(phi.iter()).map(|(x, f)| x * f).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            pairing_residual = pairing_residual.max((v - C64::new(target, 0.0)).norm());
        }
    }
    Ok(DualBasisPair { basis, dual, pairing_residual })
}

/// `Σ_i x^i y x_i` for a dual-basis pair (in either order of legs).
pub fn dual_basis_sandwich(a: &CStarAlgebra, pair: &DualBasisPair, y: &CVec) -> CVec {
    let mut out = CVec::zeros(a.dim());
    for (x, d) in pair.basis.iter().zip(pair.dual.iter()) {
        out += a.mul(&a.mul(d, y), x);
    }
    out
}
