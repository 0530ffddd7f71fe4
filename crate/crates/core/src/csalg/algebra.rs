use std::sync::Arc;

use crate::csalg::wedderburn::{wedderburn_decompose, Wedderburn};
use crate::error::{Error, Result};
use crate::linalg::{
    column_space, fro_norm, kron, kron_vec, max_abs, vec_norm, CMat, CVec, C64, ONE, ZERO,
};
use crate::Config;

/// Sparse row of structure constants: `x_i x_j = Σ (k, c) c·x_k`.
pub type ProductRow = Vec<(usize, C64)>;

/// A finite-dimensional complex *-algebra given on a basis.
///
/// Elements are coefficient vectors. The involution is antilinear:
/// `a* = star · conj(a)`, so column `i` of `star` holds the coefficients of
/// `x_i*`. Validated algebras carry their Wedderburn decomposition.
#[derive(Debug, Clone)]
pub struct CStarAlgebra {
    labels: Vec<String>,
    table: Vec<ProductRow>,
    star: CMat,
    unit: CVec,
    /// `Tr λ(x_i)`, the regular-representation trace on basis elements.
    reg_trace: CVec,
    wedderburn: Option<Arc<Wedderburn>>,
}

impl CStarAlgebra {
    /// Build from coordinate triples `(i, j, k, c)` meaning `x_i x_j ∋ c·x_k`,
    /// validate every *-algebra axiom and compute the Wedderburn form.
    pub fn from_structure_constants(
        dim: usize,
        mult: &[(usize, usize, usize, C64)],
        star: CMat,
        unit: CVec,
        labels: Vec<String>,
        cfg: &Config,
    ) -> Result<Self> {
        let mut table = vec![Vec::new(); dim * dim];
        for &(i, j, k, v) in mult {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Dimension(format!(
                    "structure constant index ({i},{j},{k}) out of range for dim {dim}"
                )));
            }
            push_entry(&mut table[i * dim + j], k, v);
        }
        Self::from_table(table, star, unit, labels)?.validated(cfg)
    }

    /// Assemble without validation. Used for intermediate tensor algebras.
    pub(crate) fn from_table(
        table: Vec<ProductRow>,
        star: CMat,
        unit: CVec,
        labels: Vec<String>,
    ) -> Result<Self> {
        let dim = unit.len();
        if table.len() != dim * dim || star.nrows() != dim || star.ncols() != dim {
            return Err(Error::Dimension(format!(
                "inconsistent sizes: table {}, star {}x{}, unit {}",
                table.len(),
                star.nrows(),
                star.ncols(),
                dim
            )));
        }
        let labels = if labels.len() == dim {
            labels
        } else {
            (0..dim).map(|i| format!("x{i}")).collect()
        };
        let mut reg_trace = CVec::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                for &(k, v) in &table[i * dim + j] {
                    if k == j {
                        reg_trace[i] += v;
                    }
                }
            }
        }
        Ok(Self { labels, table, star, unit, reg_trace, wedderburn: None })
    }

    /// Run all axiom checks and attach the Wedderburn decomposition.
    pub fn validated(mut self, cfg: &Config) -> Result<Self> {
        self.check_axioms(cfg.tol)?;
        let w = wedderburn_decompose(&self, cfg)?;
        self.wedderburn = Some(Arc::new(w));
        Ok(self)
    }

    pub fn check_axioms(&self, tol: f64) -> Result<()> {
        let n = self.dim();
        let scale = 1.0 + self.table_scale();
        // associativity on basis triples, accumulated sparsely in a reused buffer
        let mut assoc: f64 = 0.0;
        let mut buf = vec![ZERO; n];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let rij = &self.table[i * n + j];
                for k in 0..n {
                    for &(m, v) in rij {
                        for &(l, u) in &self.table[m * n + k] {
                            buf[l] += v * u;
                            touched.push(l);
                        }
                    }
                    for &(m, w) in &self.table[j * n + k] {
                        for &(l, u) in &self.table[i * n + m] {
                            buf[l] -= w * u;
                            touched.push(l);
                        }
                    }
                    let mut sq = 0.0;
                    for &l in &touched {
                        sq += buf[l].norm_sqr();
                        buf[l] = ZERO;
                    }
                    touched.clear();
                    assoc = assoc.max(sq.sqrt());
                }
            }
        }
        if assoc > tol * scale * scale {
            return Err(Error::NotAssociative { residual: assoc });
        }
        let mut unit_res: f64 = 0.0;
        for i in 0..n {
            let x = self.basis(i);
            unit_res = unit_res.max(vec_norm(&(self.mul(&self.unit, &x) - &x)));
            unit_res = unit_res.max(vec_norm(&(self.mul(&x, &self.unit) - &x)));
        }
        if unit_res > tol * scale {
            return Err(Error::NoUnit { identity: "1x = x = x1", residual: unit_res });
        }
        let invol = fro_norm(&(&self.star * self.star.map(|z| z.conj()) - CMat::identity(n, n)));
        if invol > tol * scale {
            return Err(Error::NotInvolutive { identity: "x** = x", residual: invol });
        }
        let stars: Vec<CVec> = (0..n).map(|i| self.star.column(i).into_owned()).collect();
        let mut anti: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut diff = self.mul(&stars[j], &stars[i]);
                for &(k, v) in &self.table[i * n + j] {
                    diff -= &stars[k] * v.conj();
                }
                anti = anti.max(vec_norm(&diff));
            }
        }
        if anti > tol * scale {
            return Err(Error::NotInvolutive { identity: "(xy)* = y*x*", residual: anti });
        }
        let unital = vec_norm(&(self.star_of(&self.unit) - &self.unit));
        if unital > tol * scale {
            return Err(Error::NotInvolutive { identity: "1* = 1", residual: unital });
        }
        Ok(())
    }

    fn table_scale(&self) -> f64 {
        self.table
            .iter()
            .flat_map(|row| row.iter().map(|(_, v)| v.norm()))
            .fold(0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    pub fn star_matrix(&self) -> &CMat {
        &self.star
    }

    pub fn row(&self, i: usize, j: usize) -> &ProductRow {
        &self.table[i * self.dim() + j]
    }

    /// Every nonzero structure constant as `(i, j, k, c)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, C64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for &(k, v) in self.row(i, j) {
                    out.push((i, j, k, v));
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> CVec {
        crate::linalg::unit_vec(self.dim(), i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> CVec {
        let mut out = CVec::zeros(self.dim());
        for &(k, v) in self.row(i, j) {
            out[k] += v;
        }
        out
    }

    /// Product of two elements; zero coefficients are skipped.
    pub fn mul(&self, a: &CVec, b: &CVec) -> CVec {
        let n = self.dim();
        let mut out = CVec::zeros(n);
        let bnz: Vec<(usize, C64)> =
            b.iter().enumerate().filter(|(_, v)| **v != ZERO).map(|(j, v)| (j, *v)).collect();
        for (i, ai) in a.iter().enumerate() {
            if *ai == ZERO {
                continue;
            }
            for &(j, bj) in &bnz {
                let w = ai * bj;
                for &(k, v) in &self.table[i * n + j] {
                    out[k] += w * v;
                }
            }
        }
        out
    }

    pub fn star_of(&self, a: &CVec) -> CVec {
        &self.star * a.map(|z| z.conj())
    }

    pub fn commutator(&self, a: &CVec, b: &CVec) -> CVec {
        self.mul(a, b) - self.mul(b, a)
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mul_matrix(&self, a: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &self.mul(a, &self.basis(j)));
        }
        m
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mul_matrix(&self, a: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &self.mul(&self.basis(j), a));
        }
        m
    }

    /// `Tr λ(a)`: trace of left multiplication.
    pub fn regular_trace(&self, a: &CVec) -> C64 {
        a.iter().zip(self.reg_trace.iter()).map(|(x, t)| x * t).sum()
    }

    /// Gram matrix `G_ij = f(x_i* x_j)` of a functional given by its values.
    pub fn gram(&self, f: &CVec) -> CMat {
        let n = self.dim();
        let stars: Vec<CVec> = (0..n).map(|i| self.star_of(&self.basis(i))).collect();
        CMat::from_fn(n, n, |i, j| {
            let p = self.mul(&stars[i], &self.basis(j));
            p.iter().zip(f.iter()).map(|(x, y)| x * y).sum()
        })
    }

    pub fn wedderburn(&self) -> Option<&Wedderburn> {
        self.wedderburn.as_deref()
    }

    /// Block sizes of the validated algebra (empty for unvalidated ones).
    pub fn blocks(&self) -> Vec<usize> {
        self.wedderburn.as_ref().map(|w| w.block_sizes.clone()).unwrap_or_default()
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| vec_norm(&(self.basis_product(i, j) - self.basis_product(j, i))) <= tol)
        })
    }

    /// Kronecker tensor product, unvalidated.
    pub(crate) fn tensor_raw(&self, other: &CStarAlgebra) -> CStarAlgebra {
        let (n, m) = (self.dim(), other.dim());
        let d = n * m;
        let mut table = vec![Vec::new(); d * d];
        for i in 0..n {
            for j in 0..n {
                let ra = self.row(i, j);
                if ra.is_empty() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let rb = other.row(k, l);
                        let slot = &mut table[(i * m + k) * d + (j * m + l)];
                        for &(p, va) in ra {
                            for &(q, vb) in rb {
                                push_entry(slot, p * m + q, va * vb);
                            }
                        }
                    }
                }
            }
        }
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        CStarAlgebra::from_table(table, kron(&self.star, &other.star), kron_vec(&self.unit, &other.unit), labels)
            .expect("tensor sizes are consistent")
    }

    /// Same space with product `a·b := ba`, unvalidated.
    pub(crate) fn opposite_raw(&self) -> CStarAlgebra {
        let n = self.dim();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.row(j, i).clone();
            }
        }
        CStarAlgebra::from_table(table, self.star.clone(), self.unit.clone(), self.labels.clone())
            .expect("same sizes")
    }

    /// Re-express on the basis `x'_i = Σ_k t_{ki} x_k` (columns of `t`).
    pub fn change_basis(&self, t: &CMat, cfg: &Config) -> Result<CStarAlgebra> {
        let n = self.dim();
        let t_inv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Dimension("basis change is not invertible".into()))?;
        let cols: Vec<CVec> = (0..n).map(|i| t.column(i).into_owned()).collect();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let p = &t_inv * self.mul(&cols[i], &cols[j]);
                table[i * n + j] = dense_to_row(&p, 1e-15);
            }
        }
        let mut star = CMat::zeros(n, n);
        for i in 0..n {
            star.set_column(i, &(&t_inv * self.star_of(&cols[i])));
        }
        let unit = &t_inv * &self.unit;
        CStarAlgebra::from_table(table, star, unit, Vec::new())?.validated(cfg)
    }
}

pub(crate) fn push_entry(row: &mut ProductRow, k: usize, v: C64) {
    if v == ZERO {
        return;
    }
    if let Some(e) = row.iter_mut().find(|(kk, _)| *kk == k) {
        e.1 += v;
    } else {
        row.push((k, v));
    }
}

pub(crate) fn dense_to_row(v: &CVec, cutoff: f64) -> ProductRow {
    let scale = max_abs(v.iter().copied()).max(1.0);
    v.iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > cutoff * scale)
        .map(|(k, z)| (k, *z))
        .collect()
}

/// Product in `A ⊗ B` of Kronecker-ordered coefficient vectors, without
/// materializing the tensor algebra.
pub fn tensor_mul(a: &CStarAlgebra, b: &CStarAlgebra, x: &CVec, y: &CVec) -> CVec {
    let m = b.dim();
    let nz = |v: &CVec| -> Vec<(usize, usize, C64)> {
        v.iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(k, z)| (k / m, k % m, *z))
            .collect()
    };
    let (xs, ys) = (nz(x), nz(y));
    let mut out = CVec::zeros(a.dim() * m);
    for &(i, k, u) in &xs {
        for &(j, l, v) in &ys {
            let w = u * v;
            let rb = b.row(k, l);
            for &(p, va) in a.row(i, j) {
                for &(q, vb) in rb {
                    out[p * m + q] += w * va * vb;
                }
            }
        }
    }
    out
}

/// Involution of `A ⊗ B` on Kronecker coordinates.
pub fn tensor_star(a: &CStarAlgebra, b: &CStarAlgebra, x: &CVec) -> CVec {
    let m = b.dim();
    let mut out = CVec::zeros(a.dim() * m);
    for (k, z) in x.iter().enumerate() {
        if *z == ZERO {
            continue;
        }
        let zc = z.conj();
        let (i, j) = (k / m, k % m);
        let sa = a.star.column(i);
        let sb = b.star.column(j);
        for (p, u) in sa.iter().enumerate() {
            if *u == ZERO {
                continue;
            }
            for (q, v) in sb.iter().enumerate() {
                if *v != ZERO {
                    out[p * m + q] += zc * u * v;
                }
            }
        }
    }
    out
}

/// `A ⊗ B` with Kronecker structure constants, validated.
pub fn tensor_product(a: &CStarAlgebra, b: &CStarAlgebra, cfg: &Config) -> Result<CStarAlgebra> {
    a.tensor_raw(b).validated(cfg)
}

/// `A^op`: flipped product, same involution, validated.
pub fn opposite_algebra(a: &CStarAlgebra, cfg: &Config) -> Result<CStarAlgebra> {
    a.opposite_raw().validated(cfg)
}

/// `⊕_k Mat_{n_k}` on its matrix-unit basis, ordered block by block, row-major.
pub fn multimatrix(sizes: &[usize], cfg: &Config) -> Result<CStarAlgebra> {
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n * n;
            Some(o)
        })
        .collect();
    let dim: usize = sizes.iter().map(|n| n * n).sum();
    let mut mult = Vec::new();
    let mut star = CMat::zeros(dim, dim);
    let mut unit = CVec::zeros(dim);
    let mut labels = Vec::new();
    for (b, &n) in sizes.iter().enumerate() {
        let o = offsets[b];
        for i in 0..n {
            for j in 0..n {
                labels.push(if sizes.len() == 1 {
                    format!("e{}{}", i + 1, j + 1)
                } else {
                    format!("e{}_{}{}", b, i + 1, j + 1)
                });
                star[(o + j * n + i, o + i * n + j)] = ONE;
                for l in 0..n {
                    mult.push((o + i * n + j, o + j * n + l, o + i * n + l, ONE));
                }
            }
            unit[o + i * n + i] = ONE;
        }
    }
    CStarAlgebra::from_structure_constants(dim, &mult, star, unit, labels, cfg)
}

pub fn matrix_algebra(n: usize, cfg: &Config) -> Result<CStarAlgebra> {
    multimatrix(&[n], cfg)
}

/// `ℂ^n` with pointwise product on minimal idempotents.
pub fn commutative_algebra(n: usize, cfg: &Config) -> Result<CStarAlgebra> {
    multimatrix(&vec![1; n], cfg)
}

/// A *-subalgebra spanned by the columns of `span` (in coordinates of `a`).
///
/// Returns the subalgebra on an orthonormal basis of the span together with
/// the embedding matrix whose columns are that basis.
pub fn subalgebra(
    a: &CStarAlgebra,
    span: &CMat,
    cfg: &Config,
) -> Result<(CStarAlgebra, CMat)> {
    let q = column_space(span, 1e-10);
    let d = q.ncols();
    let qa = q.adjoint();
    let cols: Vec<CVec> = (0..d).map(|i| q.column(i).into_owned()).collect();
    let mut residual: f64 = 0.0;
    let mut table = vec![Vec::new(); d * d];
    for i in 0..d {
        for j in 0..d {
            let p = a.mul(&cols[i], &cols[j]);
            let coords = &qa * &p;
            residual = residual.max(vec_norm(&(&q * &coords - &p)));
            table[i * d + j] = dense_to_row(&coords, 1e-14);
        }
    }
    let mut star = CMat::zeros(d, d);
    for i in 0..d {
        let s = a.star_of(&cols[i]);
        let coords = &qa * &s;
        residual = residual.max(vec_norm(&(&q * &coords - &s)));
        star.set_column(i, &coords);
    }
    let unit = &qa * a.unit();
    residual = residual.max(vec_norm(&(&q * &unit - a.unit())));
    if residual > cfg.tol.max(1e-12) * 1e3 {
        return Err(Error::NotSubalgebra { residual });
    }
    let sub = CStarAlgebra::from_table(table, star, unit, Vec::new())?.validated(cfg)?;
    Ok((sub, q))
}

/// Scalars `ℂ`.
pub fn scalars(cfg: &Config) -> CStarAlgebra {
    multimatrix(&[1], cfg).expect("ℂ is valid")
}
