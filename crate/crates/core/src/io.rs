//! JSON (de)serialization of algebras, quantum groups, coactions, bi-action
//! bundles and reports.
//!
//! Complex numbers are `[re, im]`, indices are 0-based and sparse maps are
//! coordinate lists `[row, col, re, im]`. Wherever a file expects an algebra,
//! a quantum group or a coaction, either an inline object or a path relative
//! to the referring file is accepted.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coaction::{CoAction, Side};
use crate::csalg::CStarAlgebra;
use crate::fqgroup::{function_algebra, group_algebra, FiniteGroup, FiniteQuantumGroup};
use crate::linalg::{CMat, CVec, C64, ZERO};
use crate::morita::{validate_biaction, BiActionAlgebra};
use crate::Config;

pub(crate) fn ser_cvec<S: Serializer>(v: &CVec, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v.iter() {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub(crate) fn ser_cmat<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(dense_matrix(m))
}

pub type Complex = [f64; 2];

fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

fn c64(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

fn dense_matrix(m: &CMat) -> Vec<Vec<Complex>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex(m[(i, j)])).collect()).collect()
}

fn vector(v: &CVec) -> Vec<Complex> {
    v.iter().copied().map(complex).collect()
}

fn sparse(m: &CMat) -> Vec<(usize, usize, f64, f64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if z != ZERO {
                out.push((i, j, z.re, z.im));
            }
        }
    }
    out
}

/// Failures while reading input files.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: cannot read file: {message}")]
    Read { path: String, message: String },
    #[error("{path}:{line}:{column}: parse error: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: schema error: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: invalid data: {source}")]
    Invalid { path: String, source: crate::Error },
}

impl InputError {
    /// Axiom violations are verdicts; everything else is malformed input.
    pub fn is_validation_failure(&self) -> bool {
        matches!(self, InputError::Invalid { .. })
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

fn show(path: &Path) -> String {
    path.display().to_string()
}

fn schema(path: &Path, message: impl Into<String>) -> InputError {
    InputError::Schema { path: show(path), message: message.into() }
}

fn invalid(path: &Path) -> impl Fn(crate::Error) -> InputError + '_ {
    move |source| InputError::Invalid { path: show(path), source }
}

/// Read a file as a JSON value.
pub fn read_value(path: &Path) -> InputResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| InputError::Read { path: show(path), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| InputError::Parse {
        path: show(path),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn typed<T: DeserializeOwned>(path: &Path, v: Value) -> InputResult<T> {
    serde_json::from_value(v).map_err(|e| schema(path, e.to_string()))
}

/// An inline object, or a path resolved relative to the referring file.
fn resolve(path: &Path, v: Value) -> InputResult<(PathBuf, Value)> {
    match v {
        Value::String(rel) => {
            let base = path.parent().unwrap_or(Path::new("."));
            let p = base.join(rel);
            let value = read_value(&p)?;
            Ok((p, value))
        }
        Value::Object(_) => Ok((path.to_path_buf(), v)),
        _ => Err(schema(path, "expected an inline object or a path string")),
    }
}

/// `{"dim", "labels", "mult": [[i,j,k,re,im],...], "star": [[[re,im],...],...], "unit": [[re,im],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub mult: Vec<(usize, usize, usize, f64, f64)>,
    pub star: Vec<Vec<Complex>>,
    pub unit: Vec<Complex>,
}

impl AlgebraJson {
    pub fn from_algebra(a: &CStarAlgebra) -> Self {
        Self {
            dim: a.dim(),
            labels: a.labels().to_vec(),
            mult: a.structure_constants().into_iter().map(|(i, j, k, c)| (i, j, k, c.re, c.im)).collect(),
            star: dense_matrix(a.star_matrix()),
            unit: vector(a.unit()),
        }
    }

    pub fn build(&self, path: &Path, cfg: &Config) -> InputResult<CStarAlgebra> {
        let n = self.dim;
        let star = matrix_from(path, &self.star, n, n, "star")?;
        if self.unit.len() != n {
            return Err(schema(path, format!("unit has {} entries, expected {n}", self.unit.len())));
        }
        let unit = CVec::from_iterator(n, self.unit.iter().copied().map(c64));
        let mult: Vec<_> = self.mult.iter().map(|&(i, j, k, re, im)| (i, j, k, C64::new(re, im))).collect();
        let labels = if self.labels.is_empty() { (0..n).map(|i| format!("x{i}")).collect() } else { self.labels.clone() };
        if labels.len() != n {
            return Err(schema(path, format!("{} labels for dimension {n}", labels.len())));
        }
        CStarAlgebra::from_structure_constants(n, &mult, star, unit, labels, cfg).map_err(invalid(path))
    }
}

fn matrix_from(path: &Path, rows: &[Vec<Complex>], nr: usize, nc: usize, what: &str) -> InputResult<CMat> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(schema(path, format!("{what} must be a {nr}×{nc} matrix")));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| c64(rows[i][j])))
}

fn sparse_from(path: &Path, entries: &[(usize, usize, f64, f64)], nr: usize, nc: usize, what: &str) -> InputResult<CMat> {
    let mut m = CMat::zeros(nr, nc);
    for &(i, j, re, im) in entries {
        if i >= nr || j >= nc {
            return Err(schema(path, format!("{what} entry ({i},{j}) outside {nr}×{nc}")));
        }
        m[(i, j)] += C64::new(re, im);
    }
    Ok(m)
}

fn vector_from(path: &Path, v: &[Complex], n: usize, what: &str) -> InputResult<CVec> {
    if v.len() != n {
        return Err(schema(path, format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(CVec::from_iterator(n, v.iter().copied().map(c64)))
}

/// Algebra fields plus `{"comul": [[row,col,re,im],...], "counit", "antipode", "haar"?, "rho"?}`.
/// Column `k` of `comul` holds `Δ(x_k)` in `H⊗H` coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HopfJson {
    #[serde(flatten)]
    pub algebra: AlgebraJson,
    pub comul: Vec<(usize, usize, f64, f64)>,
    pub counit: Vec<Complex>,
    pub antipode: Vec<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar: Option<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Complex>>,
}

/// `{"order", "table", "kind"?: "function"|"group-algebra", "labels"?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub labels: Vec<String>,
}

fn default_kind() -> String {
    "function".into()
}

impl HopfJson {
    pub fn from_quantum_group(h: &FiniteQuantumGroup) -> Self {
        Self {
            algebra: AlgebraJson::from_algebra(h.algebra()),
            comul: sparse(h.comul()),
            counit: vector(h.counit()),
            antipode: dense_matrix(h.antipode()),
            haar: Some(vector(&h.haar().coeffs)),
            rho: Some(vector(h.rho())),
        }
    }

    pub fn build(&self, path: &Path, cfg: &Config) -> InputResult<FiniteQuantumGroup> {
        let a = self.algebra.build(path, cfg)?;
        let n = a.dim();
        let comul = sparse_from(path, &self.comul, n * n, n, "comul")?;
        let counit = vector_from(path, &self.counit, n, "counit")?;
        let antipode = matrix_from(path, &self.antipode, n, n, "antipode")?;
        let haar = self.haar.as_ref().map(|v| vector_from(path, v, n, "haar")).transpose()?;
        let rho = self.rho.as_ref().map(|v| vector_from(path, v, n, "rho")).transpose()?;
        FiniteQuantumGroup::new(a, comul, counit, antipode, haar, rho, cfg).map_err(invalid(path))
    }
}

impl GroupJson {
    pub fn build(&self, path: &Path, cfg: &Config) -> InputResult<FiniteQuantumGroup> {
        if self.table.len() != self.order {
            return Err(schema(path, format!("table has {} rows for order {}", self.table.len(), self.order)));
        }
        let mut g = FiniteGroup::from_table(self.table.clone()).map_err(invalid(path))?;
        if !self.labels.is_empty() {
            g = g.with_labels(self.labels.clone());
        }
        match self.kind.as_str() {
            "function" => function_algebra(&g, cfg),
            "group-algebra" => group_algebra(&g, cfg),
            other => return Err(schema(path, format!("unknown group kind `{other}`"))),
        }
        .map_err(invalid(path))
    }
}

/// Load an algebra from an inline value or path.
pub fn algebra_from_value(path: &Path, v: Value, cfg: &Config) -> InputResult<CStarAlgebra> {
    let (p, v) = resolve(path, v)?;
    typed::<AlgebraJson>(&p, v)?.build(&p, cfg)
}

/// Load a quantum group from full Hopf data or from a group table.
pub fn hopf_from_value(path: &Path, v: Value, cfg: &Config) -> InputResult<FiniteQuantumGroup> {
    let (p, v) = resolve(path, v)?;
    if v.get("table").is_some() {
        typed::<GroupJson>(&p, v)?.build(&p, cfg)
    } else {
        typed::<HopfJson>(&p, v)?.build(&p, cfg)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SideJson {
    Left,
    Right,
}

impl From<SideJson> for Side {
    fn from(s: SideJson) -> Self {
        match s {
            SideJson::Left => Side::Left,
            SideJson::Right => Side::Right,
        }
    }
}

impl From<Side> for SideJson {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => SideJson::Left,
            Side::Right => SideJson::Right,
        }
    }
}

/// `{"algebra": path|object, "hopf": path|object, "side", "map": [[row,col,re,im],...]}`.
///
/// `map` is `α` in its native layout: rows `h·dim A + a` (left, `H⊗A`) or
/// `a·dim H + h` (right, `A⊗H`), one column per basis element of `A`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoactionJson {
    pub algebra: Value,
    pub hopf: Value,
    pub side: SideJson,
    pub map: Vec<(usize, usize, f64, f64)>,
}

fn coaction_map(path: &Path, a: &CStarAlgebra, h: &FiniteQuantumGroup, map: &[(usize, usize, f64, f64)]) -> InputResult<CMat> {
    sparse_from(path, map, a.dim() * h.dim(), a.dim(), "map")
}

impl CoactionJson {
    pub fn from_coaction(c: &CoAction) -> Self {
        Self {
            algebra: serde_json::to_value(AlgebraJson::from_algebra(c.algebra())).expect("serializable"),
            hopf: serde_json::to_value(HopfJson::from_quantum_group(c.hopf())).expect("serializable"),
            side: c.side().into(),
            map: sparse(&c.native_map()),
        }
    }
}

/// Load a coaction file.
pub fn load_coaction(path: &Path, cfg: &Config) -> InputResult<CoAction> {
    let v = read_value(path)?;
    let c: CoactionJson = typed(path, v)?;
    let a = algebra_from_value(path, c.algebra, cfg)?;
    let h = hopf_from_value(path, c.hopf, cfg)?;
    let map = coaction_map(path, &a, &h, &c.map)?;
    CoAction::new(a, h, c.side.into(), map, cfg).map_err(invalid(path))
}

/// One coaction inside a bundle; algebra and quantum group come from the bundle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleCoaction {
    pub map: Vec<(usize, usize, f64, f64)>,
}

/// `{"algebra", "hopf1", "hopf2", "left": {"map"}, "right": {"map"}}` for a
/// left `hopf1`-coaction and a right `hopf2`-coaction on `algebra`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleJson {
    pub algebra: Value,
    pub hopf1: Value,
    pub hopf2: Value,
    pub left: BundleCoaction,
    pub right: BundleCoaction,
}

impl BundleJson {
    pub fn from_biaction(b: &BiActionAlgebra) -> Self {
        Self {
            algebra: serde_json::to_value(AlgebraJson::from_algebra(b.algebra())).expect("serializable"),
            hopf1: serde_json::to_value(HopfJson::from_quantum_group(b.left().hopf())).expect("serializable"),
            hopf2: serde_json::to_value(HopfJson::from_quantum_group(b.right().hopf())).expect("serializable"),
            left: BundleCoaction { map: sparse(&b.left().native_map()) },
            right: BundleCoaction { map: sparse(&b.right().native_map()) },
        }
    }
}

/// Load a bi-action bundle and check that the two coactions commute.
pub fn load_bundle(path: &Path, cfg: &Config) -> InputResult<BiActionAlgebra> {
    let v = read_value(path)?;
    let b: BundleJson = typed(path, v)?;
    let a = algebra_from_value(path, b.algebra, cfg)?;
    let h1 = hopf_from_value(path, b.hopf1, cfg)?;
    let h2 = hopf_from_value(path, b.hopf2, cfg)?;
    let m1 = coaction_map(path, &a, &h1, &b.left.map)?;
    let m2 = coaction_map(path, &a, &h2, &b.right.map)?;
    let left = CoAction::new(a.clone(), h1, Side::Left, m1, cfg).map_err(invalid(path))?;
    let right = CoAction::new(a, h2, Side::Right, m2, cfg).map_err(invalid(path))?;
    validate_biaction(left, right, cfg).map_err(invalid(path))
}

pub fn load_algebra(path: &Path, cfg: &Config) -> InputResult<CStarAlgebra> {
    let v = read_value(path)?;
    algebra_from_value(path, v, cfg)
}

pub fn load_hopf(path: &Path, cfg: &Config) -> InputResult<FiniteQuantumGroup> {
    let v = read_value(path)?;
    hopf_from_value(path, v, cfg)
}

/// A complex vector file: `[[re, im], ...]`.
pub fn load_vector(path: &Path) -> InputResult<CVec> {
    let v: Vec<Complex> = typed(path, read_value(path)?)?;
    Ok(CVec::from_iterator(v.len(), v.into_iter().map(c64)))
}

/// A dense complex matrix file: `[[[re, im], ...], ...]`, row-major.
pub fn load_matrix(path: &Path) -> InputResult<CMat> {
    let rows: Vec<Vec<Complex>> = typed(path, read_value(path)?)?;
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    matrix_from(path, &rows, nr, nc, "matrix")
}

/// Uniform report record emitted by every check.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub residual: f64,
    pub verdict: bool,
    pub certificates: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, residual: f64, verdict: bool, certificates: impl Serialize) -> Self {
        Self {
            check: check.into(),
            residual,
            verdict,
            certificates: serde_json::to_value(certificates).expect("reports serialize"),
        }
    }

    /// `key = value` lines, nested keys joined by dots.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "check = {}\nverdict = {}\nresidual = {:.3e}\n",
            self.check,
            if self.verdict { "pass" } else { "fail" },
            self.residual
        );
        flatten("certificates", &self.certificates, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array() && x.as_array().is_some_and(|a| a.iter().any(Value::is_array))) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push_str(&format!("{prefix} = {v}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coaction::regular_coaction;
    use crate::examples::crossed_product;
    use crate::linalg::{fro_norm, vec_norm};

    fn tmp(name: &str, v: &impl Serialize) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("qgalois-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
        p
    }

    #[test]
    fn algebra_round_trip() {
        let cfg = Config::default();
        let a = crate::csalg::multimatrix(&[1, 2], &cfg).unwrap();
        let p = tmp("alg.json", &AlgebraJson::from_algebra(&a));
        let b = load_algebra(&p, &cfg).unwrap();
        assert_eq!(a.structure_constants(), b.structure_constants());
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn hopf_round_trip_and_group_table() {
        let cfg = Config::default();
        let g = FiniteGroup::symmetric3();
        let h = function_algebra(&g, &cfg).unwrap();
        let p = tmp("hopf.json", &HopfJson::from_quantum_group(&h));
        let back = load_hopf(&p, &cfg).unwrap();
        assert!(fro_norm(&(back.comul() - h.comul())) == 0.0);
        let gj = GroupJson { order: 6, table: g.table().to_vec(), kind: "group-algebra".into(), labels: vec![] };
        let q = load_hopf(&tmp("group.json", &gj), &cfg).unwrap();
        assert_eq!(q.dim(), 6);
        assert!(!q.algebra().wedderburn().unwrap().block_sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn coaction_with_relative_paths() {
        let cfg = Config::default();
        let h = function_algebra(&FiniteGroup::cyclic(3), &cfg).unwrap();
        let c = regular_coaction(&h, Side::Right, &cfg).unwrap();
        tmp("z3.json", &HopfJson::from_quantum_group(&h));
        tmp("z3alg.json", &AlgebraJson::from_algebra(h.algebra()));
        let cj = CoactionJson { algebra: "z3alg.json".into(), hopf: "z3.json".into(), side: SideJson::Right, map: sparse(&c.native_map()) };
        let back = load_coaction(&tmp("coaction.json", &cj), &cfg).unwrap();
        assert_eq!(back.side(), Side::Right);
        assert!(fro_norm(&(back.hfirst() - c.hfirst())) == 0.0);
    }

    #[test]
    fn bundle_round_trip_keeps_the_verdict() {
        let cfg = Config::default();
        let h = function_algebra(&FiniteGroup::cyclic(2), &cfg).unwrap();
        let b = crossed_product(&h, &cfg).unwrap();
        let back = load_bundle(&tmp("bundle.json", &BundleJson::from_biaction(&b)), &cfg).unwrap();
        let r = crate::morita::mkey_report(&back);
        assert!(r.verdict);
        assert!(vec_norm(&(back.algebra().unit() - b.algebra().unit())) == 0.0);
    }

    #[test]
    fn errors_carry_location() {
        let dir = std::env::temp_dir().join(format!("qgalois-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("broken.json");
        fs::write(&p, "{\n  \"dim\": 2,\n  \"mult\": [oops]\n}").unwrap();
        match load_algebra(&p, &Config::default()) {
            Err(InputError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        fs::write(&p, "{\"dim\": 2}").unwrap();
        assert!(matches!(load_algebra(&p, &Config::default()), Err(InputError::Schema { .. })));
        // well-formed JSON whose declared unit is not a unit
        let bad = AlgebraJson {
            dim: 2,
            labels: vec![],
            mult: vec![(0, 0, 0, 1.0, 0.0), (0, 1, 1, 1.0, 0.0), (1, 0, 1, 1.0, 0.0), (1, 1, 1, 1.0, 0.0)],
            star: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]],
            unit: vec![[0.0, 0.0], [1.0, 0.0]],
        };
        let err = load_algebra(&tmp("bad.json", &bad), &Config::default()).unwrap_err();
        assert!(err.is_validation_failure(), "{err}");
    }
}
