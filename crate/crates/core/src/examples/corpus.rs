use crate::coaction::{group_action_coaction, regular_coaction, trivial_coaction, CoAction, Side};
use crate::csalg::{commutative_algebra, matrix_algebra, scalars};
use crate::error::Result;
use crate::examples::crossed::{crossed_product, inner_automorphism, left_translations};
use crate::fqgroup::{function_algebra, group_algebra, FiniteGroup};
use crate::linalg::{CMat, CVec, C64};
use crate::Config;

/// A named coaction with its expected freeness.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub coaction: CoAction,
    pub free: bool,
}

/// Diagonal unitary in `Mat_n` with entries `exp(2πi·k·j/n)`.
fn clock(n: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(n * n);
    for j in 0..n {
        v[j * n + j] = crate::examples::cocycle::root_of_unity(k * j, n);
    }
    v
}

/// Coactions over groups of order at most 6, free and non-free.
pub fn freeness_corpus(cfg: &Config) -> Result<Vec<CorpusEntry>> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let s3 = FiniteGroup::symmetric3();
    let cz2 = function_algebra(&z2, cfg)?;
    let cz3 = function_algebra(&z3, cfg)?;
    let cs3 = function_algebra(&s3, cfg)?;
    let mut out = Vec::new();
    let mut push = |name: &str, coaction: CoAction, free: bool| {
        out.push(CorpusEntry { name: name.to_string(), coaction, free });
    };

    push("translation C(Z2) left", regular_coaction(&cz2, Side::Left, cfg)?, true);
    push("translation C(S3) right", regular_coaction(&cs3, Side::Right, cfg)?, true);
    push("translation C[S3] left", regular_coaction(&group_algebra(&s3, cfg)?, Side::Left, cfg)?, true);
    push("trivial Z2 on C", trivial_coaction(&scalars(cfg), &cz2, Side::Left, cfg)?, false);
    push("trivial Z3 on Mat2", trivial_coaction(&matrix_algebra(2, cfg)?, &cz3, Side::Right, cfg)?, false);
    push("trivial S3 on C^2", trivial_coaction(&commutative_algebra(2, cfg)?, &cs3, Side::Left, cfg)?, false);

    let c2 = commutative_algebra(2, cfg)?;
    push("Z2 swapping two points", group_action_coaction(&c2, &cz2, &z2, &left_translations(&z2), Side::Left, cfg)?, true);

    let mat2 = matrix_algebra(2, cfg)?;
    let ad_z2: Vec<CMat> = (0..2).map(|g| inner_automorphism(&mat2, &clock(2, g))).collect();
    push("Z2 on Mat2 by Ad diag(1,-1)", group_action_coaction(&mat2, &cz2, &z2, &ad_z2, Side::Right, cfg)?, true);

    let mat3 = matrix_algebra(3, cfg)?;
    let ad_z3: Vec<CMat> = (0..3).map(|g| inner_automorphism(&mat3, &clock(3, g))).collect();
    push("Z3 on Mat3 by Ad clock", group_action_coaction(&mat3, &cz3, &z3, &ad_z3, Side::Left, cfg)?, true);

    // S3 acts on two points through the sign character; the rotations fix both
    let sign = |g: usize| s3.mul(g, g) == s3.identity() && g != s3.identity();
    let swap = CMat::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let sign_maps: Vec<CMat> = (0..6).map(|g| if sign(g) { swap.clone() } else { CMat::identity(2, 2) }).collect();
    push("S3 on two points through the sign", group_action_coaction(&c2, &cs3, &s3, &sign_maps, Side::Right, cfg)?, false);

    // the trivial action written as a group action: only the trivial isotypic part
    let ad_trivial: Vec<CMat> = (0..3).map(|_| CMat::identity(4, 4)).collect();
    push("Z3 on Mat2 by identities", group_action_coaction(&mat2, &cz3, &z3, &ad_trivial, Side::Left, cfg)?, false);

    let cp = crossed_product(&cz2, cfg)?;
    push("crossed product Z2, left G", cp.left().clone(), true);
    push("crossed product Z2, right dual", cp.right().clone(), true);
    Ok(out)
}
