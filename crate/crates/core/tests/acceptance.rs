//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgalois::coaction::{freeness_summary, kms_residual_with, normalized_trace, regular_coaction, Side};
use qgalois::csalg::{frobenius_report, matrix_algebra, q_scalar};
use qgalois::examples::{
    crossed_product, freeness_corpus, heisenberg_cocycle, projective_cocycle_algebra, TwoCocycle,
};
use qgalois::fqgroup::{dual_quantum_group, function_algebra, FiniteGroup, FiniteQuantumGroup};
use qgalois::linalg::{vec_norm, CMat, CVec, C64};
use qgalois::morita::{
    certify_isomorphism, cotensor, exchange_map, joint_canonical_state, mkey_report, onesided_report,
    unit_law_candidate, validate_biaction, BiActionAlgebra, MoritaReport,
};
use qgalois::Config;

const FROBENIUS_TOL: f64 = 1e-8;
const KMS_TOL: f64 = 1e-8;
const OBJECT_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-7;
const INVERSE_TOL: f64 = 1e-8;
const ISO_TOL: f64 = 1e-7;
const LAMBDA_TOL: f64 = 1e-8;
const RANDOM_STATES: usize = 20;

struct Verified {
    name: String,
    object: BiActionAlgebra,
    report: MoritaReport,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion1(cfg: &Config) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for n in 1..=4 {
        let a = matrix_algebra(n, cfg).unwrap();
        let r = frobenius_report(&a, &normalized_trace(&a), cfg.tol).unwrap();
        let lambda_err = r.q_scalar.map_or(f64::INFINITY, |q| (q - (n * n) as f64).abs());
        worst = worst.max(r.frobenius_residual).max(r.q_residual).max(lambda_err);
        ok &= r.frobenius_residual < FROBENIUS_TOL && r.q_residual < FROBENIUS_TOL && lambda_err < FROBENIUS_TOL;
    }
    outcome(ok, format!("Mat_n, n=1..4: λ = n², worst residual {worst:.1e}"))
}

fn criterion2(cfg: &Config) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut worst_q, mut worst_kms): (f64, f64) = (0.0, 0.0);
    for k in 0..RANDOM_STATES {
        let n = 1 + k % 4;
        let b = CMat::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let c = &b * b.adjoint() + CMat::identity(n, n) * C64::new(0.1, 0.0);
        let cinv = c.clone().try_inverse().unwrap();
        let a = matrix_algebra(n, cfg).unwrap();
        let phi = CVec::from_fn(n * n, |k, _| c[(k % n, k / n)] * cinv.trace());
        let q = q_scalar(&a, &phi, cfg.tol).unwrap().0.unwrap_or(f64::INFINITY);
        let theta = CMat::from_fn(n * n, n * n, |row, col| c[(row / n, col / n)] * cinv[(col % n, row % n)]);
        worst_q = worst_q.max((q - 1.0).abs());
        worst_kms = worst_kms.max(kms_residual_with(&a, &phi, &theta));
    }
    outcome(
        worst_q < FROBENIUS_TOL && worst_kms < KMS_TOL,
        format!("{RANDOM_STATES} states Tr(·c)Tr(c⁻¹): ‖mm*−ι‖ {worst_q:.1e}, KMS {worst_kms:.1e}"),
    )
}

fn criterion3(cfg: &Config) -> Outcome {
    let corpus = freeness_corpus(cfg).unwrap();
    let mut disagreements = Vec::new();
    for e in &corpus {
        let s = freeness_summary(&e.coaction, cfg);
        let verdicts = [s.galois.free, s.localized_all_unitary, s.functor_all_monoidal];
        if verdicts.iter().any(|&v| v != e.free) {
            disagreements.push(format!("{} {verdicts:?}", e.name));
        }
    }
    let free = corpus.iter().filter(|e| e.free).count();
    outcome(
        corpus.len() >= 10 && disagreements.is_empty(),
        format!("{} coactions ({free} free): three tests agree{}", corpus.len(), if disagreements.is_empty() { String::new() } else { format!(", disagreements {disagreements:?}") }),
    )
}

fn criterion4(cfg: &Config, verified: &mut Vec<Verified>) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, g) in [("Z/2", FiniteGroup::cyclic(2)), ("Z/3", FiniteGroup::cyclic(3)), ("S3", FiniteGroup::symmetric3())] {
        let h = function_algebra(&g, cfg).unwrap();
        let b = crossed_product(&h, cfg).unwrap();
        let r = mkey_report(&b);
        let n = g.order() as f64;
        let js = joint_canonical_state(&b).unwrap();
        let simple = b.algebra().wedderburn().is_some_and(|w| w.block_sizes.len() == 1);
        let trace_err = vec_norm(&(&js.functional.coeffs - normalized_trace(b.algebra())));
        let residual = [
            r.commutation_residual,
            r.mkey_residual1.unwrap_or(f64::INFINITY),
            r.mkey_residual2.unwrap_or(f64::INFINITY),
            js.trace_residual,
            trace_err,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let this = r.verdict
            && r.lambda.is_some_and(|l| (l - n).abs() < OBJECT_TOL)
            && r.free1.free
            && r.free2.free
            && (r.commutant_dim12, r.commutant_dim21) == (1, 1)
            && simple
            && residual < OBJECT_TOL;
        notes.push(format!("{label} λ={:.6} res {residual:.1e}", r.lambda.unwrap_or(f64::NAN)));
        ok &= this;
        if r.verdict {
            verified.push(Verified { name: format!("C({label})⋊{label}^"), object: b, report: r });
        }
    }
    outcome(ok, notes.join("; "))
}

fn criterion5(cfg: &Config, verified: &mut Vec<Verified>) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        let sigma = heisenberg_cocycle(n, 1e-12).unwrap();
        let b = projective_cocycle_algebra(&sigma, cfg).unwrap();
        let r = mkey_report(&b);
        let m = (n * n) as f64;
        let this = r.verdict
            && (r.fixed_dim1, r.fixed_dim2) == (n * n, n * n)
            && r.lambda.is_some_and(|l| (l - m).abs() < OBJECT_TOL);
        notes.push(format!("Heisenberg n={n}: fixed dims ({}, {}), λ={:.6}", r.fixed_dim1, r.fixed_dim2, r.lambda.unwrap_or(f64::NAN)));
        ok &= this;
        if r.verdict {
            verified.push(Verified { name: format!("Heisenberg n={n}"), object: b, report: r });
        }

        let z = FiniteGroup::cyclic(n);
        let trivial = projective_cocycle_algebra(&TwoCocycle::trivial(FiniteGroup::product(&z, &z)), cfg).unwrap();
        let tr = mkey_report(&trivial);
        let fails_right = !tr.verdict && tr.failed_check.as_deref() == Some("relative commutants");
        notes.push(format!("trivial n={n} fails at {:?}", tr.failed_check.as_deref().unwrap_or("nothing")));
        ok &= fails_right;
    }
    outcome(ok, notes.join("; "))
}

fn unit_object(h: &FiniteQuantumGroup, cfg: &Config) -> BiActionAlgebra {
    let l = regular_coaction(h, Side::Left, cfg).unwrap();
    let r = regular_coaction(h, Side::Right, cfg).unwrap();
    validate_biaction(l, r, cfg).unwrap()
}

fn criterion7(cfg: &Config, verified: &mut Vec<Verified>) -> Outcome {
    let h = function_algebra(&FiniteGroup::cyclic(2), cfg).unwrap();
    let b1 = crossed_product(&h, cfg).unwrap();
    let b2 = crossed_product(&dual_quantum_group(&h).unwrap(), cfg).unwrap();
    let c = cotensor(&b1, &b2, cfg).unwrap();
    let r = mkey_report(&c.biaction);
    let dim = c.biaction.algebra().dim();
    let mut ok = dim == 8 && r.verdict;
    let mut notes = vec![format!("Z/2 □ dual: dim {dim}, verdict {}", r.verdict)];
    // unit law on every verified object small enough for the tensor product
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for v in verified.iter().filter(|v| v.object.algebra().dim() * v.object.right().hopf().dim() <= 256) {
        let unit = unit_object(v.object.right().hopf(), cfg);
        let cot = cotensor(&v.object, &unit, cfg).unwrap();
        let iso = certify_isomorphism(&v.object, &cot.biaction, &unit_law_candidate(&v.object, &cot), cfg).unwrap();
        worst = worst.max(iso.residual);
        ok &= iso.verdict && iso.residual < ISO_TOL;
        checked += 1;
    }
    notes.push(format!("unit law on {checked} objects, worst iso residual {worst:.1e}"));
    if r.verdict {
        verified.push(Verified { name: "Z/2 □ dual".into(), object: c.biaction, report: r });
    }
    outcome(ok, notes.join("; "))
}

fn criterion6(verified: &[Verified]) -> Outcome {
    let (mut iso, mut inv): (f64, f64) = (0.0, 0.0);
    for v in verified {
        let x = exchange_map(&v.object).map(|x| x.report);
        match x {
            Ok(r) => {
                iso = iso.max(r.isometry_residual);
                inv = inv.max(r.forward_inverse_residual).max(r.inverse_forward_residual);
            }
            Err(_) => return outcome(false, format!("exchange map failed on {}", v.name)),
        }
    }
    outcome(
        iso < ISOMETRY_TOL && inv < INVERSE_TOL,
        format!("{} objects: ⟨Sz,Sw⟩ − λ⟨z,w⟩ {iso:.1e}, S∘S⁻¹ − ι {inv:.1e}", verified.len()),
    )
}

fn criterion8(verified: &[Verified]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for v in verified {
        let r = &v.report;
        let (l1, l2) = (r.lambda1.unwrap_or(f64::NAN), r.lambda2.unwrap_or(f64::NAN));
        let gap = (l1 - l2).abs().max((r.lambda.unwrap_or(f64::NAN) - r.fixed_dim1 as f64).abs());
        worst = worst.max(gap);
        ok &= gap < LAMBDA_TOL;
    }
    outcome(ok, format!("{} objects: max(|λ₁−λ₂|, |λ − dim A^G₁|) = {worst:.1e}", verified.len()))
}

fn criterion9(cfg: &Config, verified: &[Verified]) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, g) in [("Z/3", FiniteGroup::cyclic(3)), ("S3", FiniteGroup::symmetric3())] {
        let h = function_algebra(&g, cfg).unwrap();
        let c = regular_coaction(&h, Side::Right, cfg).unwrap();
        let unit = CMat::from_column_slice(h.dim(), 1, h.algebra().unit().as_slice());
        let r = onesided_report(&c, &unit, cfg).unwrap();
        ok &= r.verdict && (r.lambda - 1.0).abs() < LAMBDA_TOL;
        notes.push(format!("C({label}), B=ℂ1: λ={:.6}", r.lambda));
    }
    let mut agree = 0;
    for v in verified {
        let one = onesided_report(v.object.right(), v.object.left().fixed_basis(), cfg).unwrap();
        let same = one.verdict == v.report.verdict
            && v.report.lambda.is_some_and(|l| (l - one.lambda).abs() < LAMBDA_TOL);
        ok &= same;
        agree += usize::from(same);
    }
    notes.push(format!("B=A^G₁ agrees on {agree}/{} objects", verified.len()));
    outcome(ok, notes.join("; "))
}

fn main() {
    let cfg = Config::default();
    let start = Instant::now();
    let mut verified = Vec::new();
    let mut results = Vec::new();
    let mut run = |k: usize, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!(
            "criterion {k} [{}] {title}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push(o.pass);
    };
    run(1, "Frobenius/Q-system", &mut || criterion1(&cfg));
    run(2, "twisted traces and KMS", &mut || criterion2(&cfg));
    run(3, "freeness oracles", &mut || criterion3(&cfg));
    run(4, "crossed products", &mut || criterion4(&cfg, &mut verified));
    run(5, "projective cocycle algebras", &mut || criterion5(&cfg, &mut verified));
    // the cotensor object joins the verified list before the exchange and λ checks
    let c7 = {
        let t = Instant::now();
        (criterion7(&cfg, &mut verified), t.elapsed())
    };
    run(6, "exchange map", &mut || criterion6(&verified));
    run(7, "cotensor group law", &mut || outcome(c7.0.pass, format!("{} ({:.1}s to build)", c7.0.detail, c7.1.as_secs_f64())));
    run(8, "λ consistency", &mut || criterion8(&verified));
    run(9, "one-sided criterion", &mut || criterion9(&cfg, &verified));
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
