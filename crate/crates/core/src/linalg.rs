//! Dense complex linear algebra helpers shared by every module.
//!
//! Everything is expressed over `DMatrix<Complex<f64>>`. Rank and kernel
//! decisions are made on singular values relative to the largest one.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn fro_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(v: impl IntoIterator<Item = C64>) -> f64 {
    v.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values of `m` (any shape).
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let work = if m.nrows() < m.ncols() { m.adjoint() } else { m.clone() };
    let work = compress_rows(&work).unwrap_or(work);
    work.svd(false, false).singular_values.iter().copied().collect()
}

/// Singular values at or below this are zero regardless of the matrix scale,
/// so that a matrix made of rounding noise has empty rank.
pub const ABS_FLOOR: f64 = 1e-12;

fn threshold(rel_tol: f64, top: f64) -> f64 {
    (rel_tol * top).max(ABS_FLOOR)
}

/// Numerical rank with threshold `max(rel_tol * sigma_max, ABS_FLOOR)`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > threshold(rel_tol, top)).count()
}

/// Square factor `R` of a thin QR decomposition: same singular values and
/// null space as `m`, at a fraction of the SVD cost for tall matrices.
fn compress_rows(m: &CMat) -> Option<CMat> {
    if m.nrows() > 2 * m.ncols() {
        Some(m.clone().qr().r())
    } else {
        None
    }
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn kernel(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    if let Some(r) = compress_rows(m) {
        return kernel(&r, rel_tol);
    }
    let square = if m.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let sv = &svd.singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    let thr = threshold(rel_tol, top);
    let cols: Vec<CVec> = (0..sv.len())
        .filter(|&k| sv[k] <= thr)
        .map(|k| v_t.row(k).adjoint().into_owned())
        .collect();
    columns(n, &cols)
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &CMat, rel_tol: f64) -> CMat {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return CMat::zeros(rows, 0);
    }
    let square = if m.ncols() < rows {
        let mut p = CMat::zeros(rows, rows);
        p.view_mut((0, 0), (rows, m.ncols())).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = square.svd(true, false);
    let u = svd.u.expect("u requested");
    let sv = &svd.singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    let cols: Vec<CVec> = (0..sv.len())
        .filter(|&k| sv[k] > threshold(rel_tol, top))
        .map(|k| u.column(k).into_owned())
        .collect();
    columns(rows, &cols)
}

/// Stack vectors as the columns of a matrix with `rows` rows.
pub fn columns(rows: usize, cols: &[CVec]) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (k, v) in cols.iter().enumerate() {
        m.set_column(k, v);
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn herm_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()) * r(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs: Vec<CVec> = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();
    (vals, columns(m.nrows(), &vecs))
}

/// f(H) for a Hermitian matrix H and real function f on its spectrum.
pub fn herm_apply(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| r(f(x)))));
    &vecs * d * vecs.adjoint()
}

/// Least-squares coordinates `y` with `basis * y ≈ v`; returns `(y, residual)`.
pub fn solve_in_basis(basis: &CMat, v: &CVec) -> (CVec, f64) {
    if basis.ncols() == 0 {
        return (CVec::zeros(0), vec_norm(v));
    }
    let pinv = pseudo_inverse(basis);
    let y = &pinv * v;
    let res = vec_norm(&(basis * &y - v));
    (y, res)
}

pub fn pseudo_inverse(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.pseudo_inverse(1e-13 * top.max(f64::MIN_POSITIVE))
        .expect("pseudo-inverse with both factors")
}

/// Kronecker product in lexicographic order (`a` index major).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Split sorted values into clusters separated by gaps larger than `gap`.
pub fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(cl) if v - values[*cl.last().unwrap()] <= gap => cl.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

/// `v` as a `1 × n` matrix.
pub fn row_mat(v: &CVec) -> CMat {
    CMat::from_row_slice(1, v.len(), v.as_slice())
}

/// `v` as an `n × 1` matrix.
pub fn col_mat(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}

pub fn unit_vec(n: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[k] = ONE;
    v
}

/// Projector onto the span of the orthonormal columns of `q`.
pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_deficient_wide_matrix() {
        let m = CMat::from_row_slice(2, 3, &[r(1.0), r(1.0), r(0.0), r(2.0), r(2.0), r(0.0)]);
        let k = kernel(&m, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!(fro_norm(&(&m * &k)) < 1e-12);
    }

    #[test]
    fn rank_and_column_space_agree() {
        let m = CMat::from_fn(5, 3, |i, j| r((i * j) as f64 + 1.0));
        assert_eq!(rank(&m, 1e-10), 2);
        assert_eq!(column_space(&m, 1e-10).ncols(), 2);
    }

    #[test]
    fn herm_sqrt_squares_back() {
        let m = CMat::from_row_slice(2, 2, &[r(2.0), c(0.0, 1.0), c(0.0, -1.0), r(3.0)]);
        let s = herm_apply(&m, f64::sqrt);
        assert!(fro_norm(&(&s * &s - &m)) < 1e-12);
    }

    #[test]
    fn clustering_respects_gap() {
        let cl = cluster_sorted(&[0.0, 1e-9, 1.0, 1.0 + 1e-8, 3.0], 1e-6);
        assert_eq!(cl, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }
}
