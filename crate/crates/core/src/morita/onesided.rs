use serde::Serialize;

use crate::coaction::{canonical_state, is_free_galois, restrict_coaction, CoAction, GaloisReport, Side};
use crate::csalg::{check_functional, dual_basis, subalgebra};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::morita::report::{mkey_residual, relative_commutant_dim, sandwich, unit_component};

#[derive(Debug, Clone, Serialize)]
pub struct OneSidedReport {
    pub free: GaloisReport,
    pub b_dim: usize,
    pub fixed_dim: usize,
    /// `dim_q B` for the canonical invariant state on `B`.
    pub lambda: f64,
    /// Rayleigh estimate from `Σ x^i x_i = λ1`.
    pub lambda_estimate: f64,
    /// The state on `A^G` read off from `Σ_i x^i y x_i = λψ(y)1`.
    #[serde(serialize_with = "crate::io::ser_cvec")]
    pub fixed_state: CVec,
    pub fixed_state_faithful: bool,
    pub mkey_residual1: f64,
    pub mkey_residual2: Option<f64>,
    /// `dim (A^G)' ∩ B`.
    pub commutant_dim_fixed_b: usize,
    /// `dim B' ∩ A^G`.
    pub commutant_dim_b_fixed: usize,
    pub failed_check: Option<String>,
    pub verdict: bool,
}

/// Criterion for `A` to be a Morita–Galois object for the invariant subalgebra `B = span(b_span)`.
pub fn onesided_report(c: &CoAction, b_span: &CMat, cfg: &crate::Config) -> Result<OneSidedReport> {
    if c.side() != Side::Right {
        return Err(Error::Dimension("the one-sided criterion takes a right coaction".into()));
    }
    let a = c.algebra();
    let tol = cfg.tol.max(1e-12);
    let (cb, qb) = restrict_coaction(c, b_span, cfg)?;
    let phi_b = canonical_state(&cb, cfg)?;
    let lambda = phi_b.dim_q;
    let pair_b = dual_basis(cb.algebra(), &phi_b.functional.coeffs, cfg.tol)?;
    let pairs_b: Vec<(CVec, CVec)> = pair_b.basis.iter().zip(&pair_b.dual).map(|(x, d)| (&qb * x, &qb * d)).collect();
    let lambda_estimate = unit_component(a, &sandwich(a, &pairs_b, a.unit())).re;

    let (fixed_alg, qf) = subalgebra(a, c.fixed_basis(), cfg)?;
    let psi = CVec::from_fn(qf.ncols(), |k, _| {
        unit_component(a, &sandwich(a, &pairs_b, &qf.column(k).into_owned())) / C64::new(lambda_estimate, 0.0)
    });
    let psi_vals: Vec<C64> = psi.iter().copied().collect();
    let mkey_residual1 = mkey_residual(a, &pairs_b, &qf, &psi_vals, lambda_estimate);
    let psi_f = check_functional(&fixed_alg, &psi, cfg.tol)?;
    let psi_unit: C64 = psi.iter().zip(fixed_alg.unit().iter()).map(|(p, u)| p * u).sum();
    let fixed_state_faithful = psi_f.faithful && (psi_unit - C64::new(1.0, 0.0)).norm() <= 10.0 * cfg.tol;
    let mkey_residual2 = if psi_f.faithful {
        let pair_f = dual_basis(&fixed_alg, &psi, cfg.tol)?;
        let pairs_f: Vec<(CVec, CVec)> = pair_f.basis.iter().zip(&pair_f.dual).map(|(x, d)| (&qf * x, &qf * d)).collect();
        let vals: Vec<C64> = phi_b.functional.coeffs.iter().copied().collect();
        Some(mkey_residual(a, &pairs_f, &qb, &vals, lambda_estimate))
    } else {
        None
    };
    let commutant_dim_fixed_b = relative_commutant_dim(a, &qf, &qb, tol);
    let commutant_dim_b_fixed = relative_commutant_dim(a, &qb, &qf, tol);
    let free = is_free_galois(c, cfg);

    let checks = [
        ("freeness", free.free),
        ("lambda consistency", (lambda - lambda_estimate).abs() <= 10.0 * cfg.tol * lambda.max(1.0)),
        ("relative commutants", commutant_dim_fixed_b == 1 && commutant_dim_b_fixed == 1),
        ("fixed-point state", fixed_state_faithful),
        (
            "mkey identities",
            cfg.accepts(mkey_residual1, lambda) && mkey_residual2.is_some_and(|r| cfg.accepts(r, lambda)),
        ),
    ];
    let failed_check = checks.iter().find(|(_, ok)| !ok).map(|(n, _)| n.to_string());
    Ok(OneSidedReport {
        free,
        b_dim: qb.ncols(),
        fixed_dim: qf.ncols(),
        lambda,
        lambda_estimate,
        fixed_state: psi,
        fixed_state_faithful,
        mkey_residual1,
        mkey_residual2,
        commutant_dim_fixed_b,
        commutant_dim_b_fixed,
        verdict: failed_check.is_none(),
        failed_check,
    })
}
