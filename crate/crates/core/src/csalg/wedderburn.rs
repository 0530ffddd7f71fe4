//! Numerical Artin–Wedderburn decomposition.
//!
//! The center is the commutant of a few random elements, checked against
//! every basis element. A random Hermitian
//! central element separates the blocks; a random Hermitian element cut down
//! by each central projection yields minimal projections, from which matrix
//! units follow. All spectral work happens in coordinates orthonormal for the
//! trace form `τ(a*b)` with `τ = Tr λ`, where left multiplication by a
//! Hermitian element is a Hermitian matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csalg::algebra::CStarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{
    cluster_sorted, columns, herm_apply, herm_eigen, kernel, r, vec_norm, CMat, CVec, C64,
};
use crate::Config;

const CLUSTER_GAP: f64 = 1e-6;
const ATTEMPTS: u64 = 8;

/// Explicit *-isomorphism `A ≅ ⊕_k Mat_{n_k}`.
#[derive(Debug, Clone)]
pub struct Wedderburn {
    pub block_sizes: Vec<usize>,
    pub central_projections: Vec<CVec>,
    /// Per block, the `n_k²` matrix units `e_ij` in row-major order.
    pub matrix_units: Vec<Vec<CVec>>,
    /// Coordinates of `a` → concatenated row-major block matrices.
    pub iso: CMat,
    /// Largest violation of `e_ij e_kl = δ_jk e_il`, `e_ij* = e_ji`, `Σ e_ii = 1`.
    pub residual: f64,
    pub seed: u64,
    pub attempts: u64,
}

impl Wedderburn {
    /// Image of `a` in block `k` as an `n_k × n_k` matrix.
    pub fn block_image(&self, a: &CVec, k: usize) -> CMat {
        let n = self.block_sizes[k];
        let off: usize = self.block_sizes[..k].iter().map(|m| m * m).sum();
        let v = &self.iso * a;
        CMat::from_fn(n, n, |i, j| v[off + i * n + j])
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .scan(0, |acc, n| {
                let o = *acc;
                *acc += n * n;
                Some(o)
            })
            .collect()
    }
}

/// Trace-form geometry used by every spectral step.
struct TraceGeometry {
    half: CMat,
    half_inv: CMat,
}

fn trace_geometry(a: &CStarAlgebra, tol: f64) -> Result<TraceGeometry> {
    let n = a.dim();
    let t = CVec::from_fn(n, |i, _| a.regular_trace(&a.basis(i)));
    let g = a.gram(&t);
    let (vals, _) = herm_eigen(&g);
    let top = vals.iter().copied().fold(0.0_f64, |m, v| m.max(v.abs()));
    let low = vals.first().copied().unwrap_or(0.0);
    if low <= tol.max(1e-12) * top.max(1.0) {
        return Err(Error::NotSemisimple(format!(
            "trace form τ(a*b) is not positive definite (smallest eigenvalue {low:.3e})"
        )));
    }
    Ok(TraceGeometry { half: herm_apply(&g, f64::sqrt), half_inv: herm_apply(&g, |x| 1.0 / x.sqrt()) })
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn hermitian_part(a: &CStarAlgebra, x: &CVec) -> CVec {
    (x + a.star_of(x)) * r(0.5)
}

/// Spectral projections of `λ(h)` for Hermitian `h`, returned as elements of `A`.
fn spectral_projections(a: &CStarAlgebra, geo: &TraceGeometry, h: &CVec) -> Vec<(f64, CVec)> {
    let l = &geo.half * a.left_mul_matrix(h) * &geo.half_inv;
    let (vals, vecs) = herm_eigen(&l);
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let normed: Vec<f64> = vals.iter().map(|v| v / scale).collect();
    let unit_o = &geo.half * a.unit();
    cluster_sorted(&normed, CLUSTER_GAP)
        .into_iter()
        .map(|cl| {
            let q = columns(l.nrows(), &cl.iter().map(|&k| vecs.column(k).into_owned()).collect::<Vec<_>>());
            let p = &geo.half_inv * (&q * (q.adjoint() * &unit_o));
            (vals[cl[0]], p)
        })
        .collect()
}

fn commutes_with_basis(a: &CStarAlgebra, z: &CMat) -> bool {
    let n = a.dim();
    (0..z.ncols()).all(|k| {
        let zk = z.column(k).into_owned();
        let scale = 1.0 + vec_norm(&zk);
        (0..n).all(|j| vec_norm(&a.commutator(&zk, &a.basis(j))) <= 1e-8 * scale)
    })
}

/// The center. Two generic elements already generate a semisimple algebra, so the
/// commutant of a few random elements is tried first and verified against the basis.
fn center_basis(a: &CStarAlgebra, seed: u64) -> CMat {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc3a7);
    for count in 2..=4 {
        let mut sys = CMat::zeros(count * n, n);
        for t in 0..count {
            let x = random_element(&mut rng, n);
            for i in 0..n {
                sys.view_mut((t * n, i), (n, 1)).copy_from(&a.commutator(&a.basis(i), &x));
            }
        }
        let z = kernel(&sys, 1e-10);
        if commutes_with_basis(a, &z) {
            return z;
        }
    }
    // kernel of x ↦ [x, x_j] for all j
    let mut comm = CMat::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            let d = a.basis_product(i, j) - a.basis_product(j, i);
            for k in 0..n {
                comm[(j * n + k, i)] = d[k];
            }
        }
    }
    kernel(&comm, 1e-10)
}

pub fn wedderburn_decompose(a: &CStarAlgebra, cfg: &Config) -> Result<Wedderburn> {
    let geo = trace_geometry(a, cfg.tol)?;
    let center = center_basis(a, cfg.seed);
    let zdim = center.ncols();

    let mut last_err = String::new();
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(attempt));
        match try_decompose(a, &geo, &center, zdim, &mut rng, cfg.tol) {
            Ok((sizes, cps, units)) => {
                return Ok(finish(a, sizes, cps, units, cfg.seed, attempt + 1));
            }
            Err(e) => last_err = e,
        }
    }
    Err(Error::NotSemisimple(format!("decomposition failed after {ATTEMPTS} attempts: {last_err}")))
}

type Parts = (Vec<usize>, Vec<CVec>, Vec<Vec<CVec>>);

fn try_decompose(
    a: &CStarAlgebra,
    geo: &TraceGeometry,
    center: &CMat,
    zdim: usize,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> std::result::Result<Parts, String> {
    let n = a.dim();
    let z = center * random_element(rng, zdim);
    let z = hermitian_part(a, &z);
    let cps: Vec<CVec> = spectral_projections(a, geo, &z).into_iter().map(|(_, p)| p).collect();
    if cps.len() != zdim {
        return Err(format!("{} eigenvalue clusters for a center of dimension {zdim}", cps.len()));
    }
    let mut sizes_found = Vec::with_capacity(zdim);
    for p in &cps {
        let tp = a.regular_trace(p).re;
        let nk = tp.sqrt().round() as usize;
        if nk == 0 || (tp - (nk * nk) as f64).abs() > 1e-6 * tp.max(1.0) {
            return Err(format!("central projection has trace {tp}, not a square"));
        }
        sizes_found.push(nk);
    }
    // one spectral decomposition of Σ p_k h p_k yields the minimal projections of every block
    let h = hermitian_part(a, &random_element(rng, n));
    let mut cut = CVec::zeros(n);
    for p in &cps {
        cut += a.mul(&a.mul(p, &h), p);
    }
    let mut minimal: Vec<Vec<CVec>> = vec![Vec::new(); zdim];
    for (_, q) in spectral_projections(a, geo, &cut) {
        let owner = (0..zdim)
            .find(|&k| a.regular_trace(&a.mul(&q, &cps[k])).re > 0.5)
            .ok_or("spectral projection outside every block")?;
        minimal[owner].push(q);
    }
    let mut blocks = Vec::with_capacity(zdim);
    for ((p, nk), qs) in cps.into_iter().zip(sizes_found).zip(minimal) {
        if qs.len() != nk || qs.iter().any(|q| (a.regular_trace(q).re - nk as f64).abs() > 1e-6 * nk as f64) {
            return Err("degenerate spectrum inside a block".into());
        }
        let units = if nk == 1 { vec![p.clone()] } else { matrix_units(a, &qs, rng, tol)? };
        blocks.push((nk, p, units));
    }
    blocks.sort_by_key(|b| b.0);
    let sizes = blocks.iter().map(|b| b.0).collect();
    let cps = blocks.iter().map(|b| b.1.clone()).collect();
    let units = blocks.into_iter().map(|b| b.2).collect();
    Ok((sizes, cps, units))
}

/// Matrix units from pairwise orthogonal minimal projections `q_1..q_n`.
fn matrix_units(
    a: &CStarAlgebra,
    q: &[CVec],
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> std::result::Result<Vec<CVec>, String> {
    let nk = q.len();
    let n = a.dim();
    let mut first_row = vec![q[0].clone()];
    for qj in &q[1..] {
        // q_1 r q_j for a random r is a nonzero corner element almost surely
        let v = a.mul(&q[0], &a.mul(&random_element(rng, n), qj));
        if vec_norm(&v) <= tol {
            return Err("empty corner q_1 A q_j".into());
        }
        let vv = a.mul(&v, &a.star_of(&v));
        let scale = a.regular_trace(&vv).re / a.regular_trace(&q[0]).re;
        if scale <= 0.0 {
            return Err("non-positive corner norm".into());
        }
        first_row.push(v * r(1.0 / scale.sqrt()));
    }
    let first_col: Vec<CVec> = first_row.iter().map(|e| a.star_of(e)).collect();
    let mut units = Vec::with_capacity(nk * nk);
    for i in 0..nk {
        for j in 0..nk {
            units.push(if i == 0 {
                first_row[j].clone()
            } else if j == 0 {
                first_col[i].clone()
            } else {
                a.mul(&first_col[i], &first_row[j])
            });
        }
    }
    Ok(units)
}

fn finish(
    a: &CStarAlgebra,
    sizes: Vec<usize>,
    cps: Vec<CVec>,
    units: Vec<Vec<CVec>>,
    seed: u64,
    attempts: u64,
) -> Wedderburn {
    let n = a.dim();
    let all: Vec<CVec> = units.iter().flatten().cloned().collect();
    let e = columns(n, &all);
    let iso = e.clone().try_inverse().unwrap_or_else(|| crate::linalg::pseudo_inverse(&e));
    // e_1j e_k1 = δ_jk e_11, e_i1 e_1j = e_ij and e_ij* = e_ji imply every matrix-unit relation
    let mut residual: f64 = 0.0;
    let mut sum = CVec::zeros(n);
    for (b, &nk) in sizes.iter().enumerate() {
        let u = &units[b];
        for i in 0..nk {
            sum += &u[i * nk + i];
            for j in 0..nk {
                residual = residual.max(vec_norm(&(a.star_of(&u[i * nk + j]) - &u[j * nk + i])));
                residual = residual.max(vec_norm(&(a.mul(&u[i * nk], &u[j]) - &u[i * nk + j])));
                let prod = a.mul(&u[i], &u[j * nk]);
                let expect = if i == j { u[0].clone() } else { CVec::zeros(n) };
                residual = residual.max(vec_norm(&(prod - expect)));
            }
        }
        residual = residual.max(vec_norm(&(a.mul(&u[0], &u[0]) - &u[0])));
    }
    residual = residual.max(vec_norm(&(sum - a.unit())));
    // cross-block products vanish
    for b in 0..sizes.len() {
        for c in 0..sizes.len() {
            if b != c {
                residual = residual.max(vec_norm(&a.mul(&cps[b], &cps[c])));
            }
        }
    }
    Wedderburn {
        block_sizes: sizes,
        central_projections: cps,
        matrix_units: units,
        iso,
        residual,
        seed,
        attempts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csalg::algebra::{matrix_algebra, multimatrix};
    use crate::linalg::fro_norm;

    #[test]
    fn block_image_is_multiplicative() {
        let cfg = Config::default();
        let a = multimatrix(&[1, 2], &cfg).unwrap();
        let w = a.wedderburn().unwrap();
        assert!(w.residual < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_element(&mut rng, a.dim());
        let y = random_element(&mut rng, a.dim());
        for k in 0..2 {
            let lhs = w.block_image(&a.mul(&x, &y), k);
            let rhs = w.block_image(&x, k) * w.block_image(&y, k);
            assert!(fro_norm(&(lhs - rhs)) < 1e-9);
        }
    }

    #[test]
    fn random_basis_hides_nothing() {
        let cfg = Config::default();
        let a = matrix_algebra(3, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = CMat::from_fn(9, 9, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let b = a.change_basis(&t, &cfg).unwrap();
        assert_eq!(b.blocks(), vec![3]);
        assert!(b.wedderburn().unwrap().residual < 1e-8);
    }

    #[test]
    fn non_semisimple_algebra_rejected() {
        // dual numbers ℂ[ε]/ε² with a *-structure fixing ε
        let one = crate::linalg::ONE;
        let mult = vec![(0, 0, 0, one), (0, 1, 1, one), (1, 0, 1, one)];
        let err = CStarAlgebra::from_structure_constants(
            2,
            &mult,
            CMat::identity(2, 2),
            crate::linalg::unit_vec(2, 0),
            vec![],
            &Config::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotSemisimple(_)), "{err:?}");
    }
}
