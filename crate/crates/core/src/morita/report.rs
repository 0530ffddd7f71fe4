use serde::Serialize;

use crate::coaction::{is_free_galois, GaloisReport};
use crate::csalg::CStarAlgebra;
use crate::linalg::{kernel, vec_norm, CMat, CVec, C64};
use crate::morita::biaction::{BiActionAlgebra, FixedSide};
use crate::morita::exchange::{exchange_map, ExchangeReport};
use crate::Config;

#[derive(Debug, Clone, Serialize)]
pub struct MoritaReport {
    pub commutation_residual: f64,
    pub commuting_ok: bool,
    pub free1: GaloisReport,
    pub free2: GaloisReport,
    pub fixed_dim1: usize,
    pub fixed_dim2: usize,
    /// `dim_q A^{G₁}` for the `G₂`-action.
    pub lambda1: Option<f64>,
    /// `dim_q A^{G₂}` for the `G₁`-action.
    pub lambda2: Option<f64>,
    /// Rayleigh estimate from `Σ x^i x_i = λ1`.
    pub lambda: Option<f64>,
    /// `max_y ‖Σ_i x^i y x_i − λφ₂(y)1‖` over a basis of `A^{G₂}`.
    pub mkey_residual1: Option<f64>,
    /// `max_x ‖Σ_j y^j x y_j − λφ₁(x)1‖` over a basis of `A^{G₁}`.
    pub mkey_residual2: Option<f64>,
    /// `dim (A^{G₁})' ∩ A^{G₂}`.
    pub commutant_dim12: usize,
    /// `dim (A^{G₂})' ∩ A^{G₁}`.
    pub commutant_dim21: usize,
    pub exchange: Option<ExchangeReport>,
    /// First check that failed, in evaluation order.
    pub failed_check: Option<String>,
    pub verdict: bool,
    pub seed: u64,
}

/// `Σ_i x^i y x_i` in `A` for lifted dual-basis pairs.
pub(crate) fn sandwich(a: &CStarAlgebra, pairs: &[(CVec, CVec)], y: &CVec) -> CVec {
    let mut out = CVec::zeros(a.dim());
    for (x, d) in pairs {
        out += a.mul(&a.mul(d, y), x);
    }
    out
}

/// `⟨1, v⟩ / ⟨1, 1⟩` in coefficient space.
pub(crate) fn unit_component(a: &CStarAlgebra, v: &CVec) -> C64 {
    let u = a.unit();
    u.dotc(v) / u.dotc(u)
}

/// `max_k ‖Σ_i x^i y_k x_i − λ ψ(y_k) 1‖` over the basis `y_k` (columns of `ys`).
pub(crate) fn mkey_residual(a: &CStarAlgebra, pairs: &[(CVec, CVec)], ys: &CMat, psi: &[C64], lambda: f64) -> f64 {
    let mut res: f64 = 0.0;
    for k in 0..ys.ncols() {
        let y = ys.column(k).into_owned();
        let s = sandwich(a, pairs, &y);
        res = res.max(vec_norm(&(s - a.unit() * (psi[k] * lambda))));
    }
    res
}

/// Dimension of `{y ∈ span(ys) : [x, y] = 0 for x ∈ span(xs)}`.
pub fn relative_commutant_dim(a: &CStarAlgebra, xs: &CMat, ys: &CMat, tol: f64) -> usize {
    let n = a.dim();
    let mut sys = CMat::zeros(xs.ncols() * n, ys.ncols());
    for i in 0..xs.ncols() {
        let x = xs.column(i).into_owned();
        for j in 0..ys.ncols() {
            let c = a.commutator(&x, &ys.column(j).into_owned());
            sys.view_mut((i * n, j), (n, 1)).copy_from(&c);
        }
    }
    kernel(&sys, tol).ncols()
}

fn note(failed: &mut Option<String>, name: &str, ok: bool) {
    if !ok && failed.is_none() {
        *failed = Some(name.to_string());
    }
}

fn state_values(side: &FixedSide) -> Vec<C64> {
    (0..side.dim()).map(|k| side.state_of_basis(k)).collect()
}

pub fn mkey_report(b: &BiActionAlgebra) -> MoritaReport {
    let cfg: Config = *b.config();
    let a = b.algebra();
    let tol = cfg.tol.max(1e-12);
    let mut failed: Option<String> = None;
    let commuting_ok = cfg.accepts(b.commutation_residual(), 1.0);
    note(&mut failed, "commutation", commuting_ok);
    let (free1, free2) = if cfg.jobs > 1 {
        std::thread::scope(|s| {
            let h = s.spawn(|| is_free_galois(b.right(), &cfg));
            (is_free_galois(b.left(), &cfg), h.join().expect("freeness worker panicked"))
        })
    } else {
        (is_free_galois(b.left(), &cfg), is_free_galois(b.right(), &cfg))
    };
    note(&mut failed, "freeness of the left action", free1.free);
    note(&mut failed, "freeness of the right action", free2.free);
    let (fixed1, fixed2) = (b.left().fixed_basis(), b.right().fixed_basis());
    let commutant_dim12 = relative_commutant_dim(a, fixed1, fixed2, tol);
    let commutant_dim21 = relative_commutant_dim(a, fixed2, fixed1, tol);
    let mut report = MoritaReport {
        commutation_residual: b.commutation_residual(),
        commuting_ok,
        free1,
        free2,
        fixed_dim1: fixed1.ncols(),
        fixed_dim2: fixed2.ncols(),
        lambda1: None,
        lambda2: None,
        lambda: None,
        mkey_residual1: None,
        mkey_residual2: None,
        commutant_dim12,
        commutant_dim21,
        exchange: None,
        failed_check: None,
        verdict: false,
        seed: cfg.seed,
    };
    match b.fixed() {
        Err(e) => note(&mut failed, &format!("canonical states: {e}"), false),
        Ok(fd) => {
            let (l1, l2) = (fd.first.dim_q(), fd.second.dim_q());
            report.lambda1 = Some(l1);
            report.lambda2 = Some(l2);
            let p1 = fd.first.lifted_pairs();
            let p2 = fd.second.lifted_pairs();
            let lambda = unit_component(a, &sandwich(a, &p1, a.unit())).re;
            report.lambda = Some(lambda);
            note(&mut failed, "lambda consistency", (l1 - l2).abs() <= cfg.tol * 10.0 * l1.max(1.0) && (lambda - l1).abs() <= cfg.tol * 10.0 * l1.max(1.0));
            note(&mut failed, "relative commutants", commutant_dim12 == 1 && commutant_dim21 == 1);
            let r1 = mkey_residual(a, &p1, &fd.second.embedding, &state_values(&fd.second), lambda);
            let r2 = mkey_residual(a, &p2, &fd.first.embedding, &state_values(&fd.first), lambda);
            report.mkey_residual1 = Some(r1);
            report.mkey_residual2 = Some(r2);
            note(&mut failed, "mkey identities", cfg.accepts(r1, lambda) && cfg.accepts(r2, lambda));
            if failed.is_none() {
                match exchange_map(b) {
                    Ok(x) => {
                        note(&mut failed, "exchange map", x.report.passes(&cfg));
                        report.exchange = Some(x.report);
                    }
                    Err(e) => note(&mut failed, &format!("exchange map: {e}"), false),
                }
            }
        }
    }
    report.verdict = failed.is_none();
    report.failed_check = failed;
    report
}
