use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qgalois::coaction::{canonical_state, freeness_summary, kms_residual, spectral_functor_defect, spectral_subspace, CoAction};
use qgalois::csalg::frobenius_report;
use qgalois::examples::{crossed_product, heisenberg_cocycle, projective_cocycle_algebra, TwoCocycle};
use qgalois::fqgroup::{function_algebra, group_algebra, FiniteGroup, FiniteQuantumGroup};
use qgalois::io::{self, AlgebraJson, BundleJson, InputError, Report};
use qgalois::linalg::{vec_norm, CVec, C64};
use qgalois::morita::{cotensor, exchange_map, mkey_report, onesided_report};
use qgalois::Config;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qgalois", version, about = "Certificates for finite quantum group actions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Absolute residual tolerance, in (0, 1e-2].
    #[arg(long, env = "QGALOIS_TOL", default_value_t = 1e-9, value_parser = parse_tol, global = true)]
    tol: f64,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for independent sub-checks.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    jobs: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t <= 1e-2 {
        Ok(t)
    } else {
        Err(format!("tolerance {t} outside (0, 1e-2]"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Load a file and check every axiom of its type.
    #[command(group(ArgGroup::new("input").required(true)))]
    Validate {
        #[arg(long, group = "input")]
        algebra: Option<PathBuf>,
        #[arg(long, group = "input")]
        hopf: Option<PathBuf>,
        #[arg(long, group = "input")]
        coaction: Option<PathBuf>,
        #[arg(long, group = "input", alias = "biaction")]
        bundle: Option<PathBuf>,
    },
    /// Haar state of a quantum group.
    Haar {
        #[arg(long)]
        hopf: PathBuf,
    },
    /// Galois-map freeness together with the spectral criteria.
    Freeness {
        #[arg(long)]
        coaction: PathBuf,
    },
    /// Localized Galois map on one spectral subspace, or the monoidality defect for a pair.
    Spectral {
        #[arg(long)]
        coaction: PathBuf,
        /// Index of the irreducible representation.
        #[arg(long)]
        irrep: usize,
        /// Second irreducible for the tensor-product defect.
        #[arg(long)]
        with: Option<usize>,
    },
    /// Canonical invariant state of a coaction.
    CanonicalState {
        #[arg(long)]
        coaction: PathBuf,
    },
    /// Frobenius and Q-system data of a faithful functional.
    Frobenius {
        #[arg(long)]
        algebra: PathBuf,
        /// Coefficient vector `[[re, im], ...]`; defaults to the normalized trace.
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// KMS residual of a functional for the modular group of a coaction.
    Kms {
        #[arg(long)]
        coaction: PathBuf,
        /// Defaults to the canonical invariant state.
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// Full Morita-Galois report of a bi-action.
    Morita {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Exchange map between the balanced tensor product and the algebra.
    Exchange {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// One-sided criterion for a coaction and a subalgebra commuting with it.
    Onesided {
        #[arg(long)]
        coaction: PathBuf,
        /// Matrix whose columns span the subalgebra, `dim A` rows.
        #[arg(long)]
        subalgebra: PathBuf,
    },
    /// Cotensor product of two bi-actions over their shared middle group.
    Cotensor {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        /// Also write the resulting bundle here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Emit built-in example data as JSON.
    Examples {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Subcommand)]
enum Example {
    /// Bundle for `H ⋊ Ĥ` with its two commuting coactions.
    CrossedProduct {
        /// Built-in group: z<n>, s3, or a product such as z2xz2.
        #[arg(long, group = "source", default_value = "z2")]
        group: String,
        /// Use the dual of the function algebra, i.e. the group algebra.
        #[arg(long)]
        dual: bool,
        /// Arbitrary quantum group file instead of a built-in group.
        #[arg(long, group = "source")]
        hopf: Option<PathBuf>,
    },
    /// Bundle for a twisted group algebra with the two translation coactions.
    Projective {
        /// `heisenberg` on Z_n × Z_n, or `trivial` on --group.
        #[arg(long, default_value = "heisenberg")]
        cocycle: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "z2xz2")]
        group: String,
    },
    /// Twisted group algebra of the Heisenberg cocycle on Z_n × Z_n.
    Cocycle {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

/// Input errors exit 2; everything past loading is a verdict.
enum Failure {
    Input(InputError),
    Usage(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

enum Outcome {
    Report(Report),
    Data(serde_json::Value),
}

fn group_by_name(name: &str) -> Result<FiniteGroup, Failure> {
    let factor = |f: &str| -> Result<FiniteGroup, Failure> {
        match f {
            "s3" => Ok(FiniteGroup::symmetric3()),
            _ => f
                .strip_prefix('z')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(FiniteGroup::cyclic)
                .ok_or_else(|| Failure::Usage(format!("unknown group `{f}`"))),
        }
    };
    let mut parts = name.to_ascii_lowercase().split('x').map(factor).collect::<Result<Vec<_>, _>>()?.into_iter();
    let first = parts.next().ok_or_else(|| Failure::Usage("empty group name".into()))?;
    Ok(parts.fold(first, |acc, g| FiniteGroup::product(&acc, &g)))
}

fn built<T>(r: qgalois::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn hopf_residual(h: &FiniteQuantumGroup) -> f64 {
    let c = h.certificates();
    max_of([
        c.comul_homomorphism,
        c.comul_star,
        c.coassociativity,
        c.counit,
        c.antipode,
        c.antipode_squared,
        c.haar_invariance,
        c.haar_trace,
        c.rho,
        c.irreps,
    ])
}

fn coaction_residual(c: &CoAction) -> f64 {
    let k = c.certificates();
    max_of([
        k.homomorphism,
        k.star,
        k.unital,
        k.coaction_law,
        k.counit_law,
        k.expectation_idempotent,
        k.expectation_unital,
        k.expectation_star,
        k.expectation_range,
    ])
}

fn error_report(check: &str, e: impl std::fmt::Display) -> Report {
    Report::new(check, f64::NAN, false, json!({ "error": e.to_string() }))
}

fn validate(cfg: &Config, algebra: Option<PathBuf>, hopf: Option<PathBuf>, coaction: Option<PathBuf>, bundle: Option<PathBuf>) -> Result<Outcome, Failure> {
    // axiom violations are failed verdicts here, not input errors
    let verdict = |check: &str, r: Result<Report, InputError>| match r {
        Ok(rep) => Ok(Outcome::Report(rep)),
        Err(e) if e.is_validation_failure() => Ok(Outcome::Report(error_report(check, e))),
        Err(e) => Err(Failure::Input(e)),
    };
    if let Some(p) = algebra {
        verdict(
            "validate algebra",
            io::load_algebra(&p, cfg).map(|a| {
                let w = a.wedderburn();
                let residual = w.map_or(0.0, |w| w.residual);
                Report::new("validate algebra", residual, true, json!({ "dim": a.dim(), "block_sizes": w.map(|w| w.block_sizes.clone()) }))
            }),
        )
    } else if let Some(p) = hopf {
        verdict(
            "validate hopf",
            io::load_hopf(&p, cfg).map(|h| Report::new("validate hopf", hopf_residual(&h), true, json!({ "dim": h.dim(), "certificates": h.certificates() }))),
        )
    } else if let Some(p) = coaction {
        verdict(
            "validate coaction",
            io::load_coaction(&p, cfg).map(|c| {
                Report::new("validate coaction", coaction_residual(&c), true, json!({ "fixed_dim": c.fixed_basis().ncols(), "certificates": c.certificates() }))
            }),
        )
    } else {
        let p = bundle.expect("clap enforces one input");
        verdict(
            "validate biaction",
            io::load_bundle(&p, cfg).map(|b| {
                let residual = max_of([b.commutation_residual(), coaction_residual(b.left()), coaction_residual(b.right())]);
                Report::new(
                    "validate biaction",
                    residual,
                    true,
                    json!({
                        "commutation_residual": b.commutation_residual(),
                        "left": b.left().certificates(),
                        "right": b.right().certificates(),
                    }),
                )
            }),
        )
    }
}

fn run(cmd: Cmd, cfg: &Config) -> Result<Outcome, Failure> {
    let report = match cmd {
        Cmd::Validate { algebra, hopf, coaction, bundle } => return validate(cfg, algebra, hopf, coaction, bundle),
        Cmd::Haar { hopf } => {
            let h = io::load_hopf(&hopf, cfg)?;
            let c = h.certificates();
            let residual = max_of([c.haar_invariance, c.haar_trace]);
            Report::new("haar", residual, cfg.accepts(residual, 1.0), json!({ "haar": h.haar(), "invariance": c.haar_invariance, "trace": c.haar_trace }))
        }
        Cmd::Freeness { coaction } => {
            let c = io::load_coaction(&coaction, cfg)?;
            let s = freeness_summary(&c, cfg);
            let free = s.galois.free;
            Report::new("freeness", (s.galois.expected_rank - s.galois.rank) as f64, free, json!({ "free": free, "summary": s }))
        }
        Cmd::Spectral { coaction, irrep, with } => {
            let c = io::load_coaction(&coaction, cfg)?;
            let n = c.hopf().irreps().len();
            if let Some(bad) = [Some(irrep), with].into_iter().flatten().find(|&s| s >= n) {
                return Err(Failure::Usage(format!("irrep {bad} out of range, the quantum group has {n}")));
            }
            match with {
                None => {
                    let r = spectral_subspace(&c, irrep, cfg);
                    Report::new("spectral", r.isometry_defect, r.unitary, r)
                }
                Some(t) => {
                    let r = spectral_functor_defect(&c, irrep, t, cfg);
                    let residual = r.image_residual.max(r.isometry_defect);
                    let ok = r.cokernel_dim == 0 && cfg.accepts(residual, 1.0);
                    Report::new("spectral functor", residual, ok, r)
                }
            }
        }
        Cmd::CanonicalState { coaction } => {
            let c = io::load_coaction(&coaction, cfg)?;
            match canonical_state(&c, cfg) {
                Ok(s) => {
                    let ok = s.functional.positive && s.functional.faithful && cfg.accepts(s.invariance_residual, 1.0);
                    Report::new("canonical state", s.invariance_residual, ok, s)
                }
                Err(e) => error_report("canonical state", e),
            }
        }
        Cmd::Frobenius { algebra, functional } => {
            let a = io::load_algebra(&algebra, cfg)?;
            let phi = match functional {
                Some(p) => io::load_vector(&p)?,
                None => qgalois::coaction::normalized_trace(&a),
            };
            if phi.len() != a.dim() {
                return Err(Failure::Usage(format!("functional has {} entries, algebra has dimension {}", phi.len(), a.dim())));
            }
            match frobenius_report(&a, &phi, cfg.tol) {
                Ok(r) => {
                    let ok = cfg.accepts(r.frobenius_residual, 1.0) && r.q_scalar.is_some();
                    Report::new("frobenius", r.frobenius_residual.max(r.q_residual), ok, r)
                }
                Err(e) => error_report("frobenius", e),
            }
        }
        Cmd::Kms { coaction, functional } => {
            let c = io::load_coaction(&coaction, cfg)?;
            let phi: CVec = match functional {
                Some(p) => io::load_vector(&p)?,
                None => match canonical_state(&c, cfg) {
                    Ok(s) => s.functional.coeffs,
                    Err(e) => return Ok(Outcome::Report(error_report("kms", e))),
                },
            };
            if phi.len() != c.algebra().dim() {
                return Err(Failure::Usage(format!("functional has {} entries, algebra has dimension {}", phi.len(), c.algebra().dim())));
            }
            let r = kms_residual(&c, &phi);
            let scale = vec_norm(&phi);
            Report::new("kms", r, cfg.accepts(r, scale), json!({ "kms_residual": r, "functional": phi.iter().map(|z: &C64| [z.re, z.im]).collect::<Vec<_>>() }))
        }
        Cmd::Morita { bundle } => {
            let b = io::load_bundle(&bundle, cfg)?;
            let r = mkey_report(&b);
            let residual = max_of([Some(r.commutation_residual), r.mkey_residual1, r.mkey_residual2].into_iter().flatten());
            Report::new("morita", residual, r.verdict, r)
        }
        Cmd::Exchange { bundle } => {
            let b = io::load_bundle(&bundle, cfg)?;
            match exchange_map(&b) {
                Ok(x) => {
                    let r = x.report;
                    let residual = max_of([r.forward_inverse_residual, r.inverse_forward_residual, r.module_residual, r.isometry_residual, r.unit_residual]);
                    Report::new("exchange", residual, r.passes(cfg), r)
                }
                Err(e) => error_report("exchange", e),
            }
        }
        Cmd::Onesided { coaction, subalgebra } => {
            let c = io::load_coaction(&coaction, cfg)?;
            let span = io::load_matrix(&subalgebra)?;
            if span.nrows() != c.algebra().dim() {
                return Err(Failure::Usage(format!("subalgebra basis has {} rows, algebra has dimension {}", span.nrows(), c.algebra().dim())));
            }
            match onesided_report(&c, &span, cfg) {
                Ok(r) => {
                    let residual = max_of([Some(r.mkey_residual1), r.mkey_residual2].into_iter().flatten());
                    Report::new("onesided", residual, r.verdict, r)
                }
                Err(e) => error_report("onesided", e),
            }
        }
        Cmd::Cotensor { first, second, emit } => {
            let b1 = io::load_bundle(&first, cfg)?;
            let b2 = io::load_bundle(&second, cfg)?;
            match cotensor(&b1, &b2, cfg) {
                Ok(c) => {
                    let b = &c.biaction;
                    if let Some(p) = emit {
                        write(&p, &to_json(&BundleJson::from_biaction(b)))?;
                    }
                    let residual = b.commutation_residual();
                    Report::new(
                        "cotensor",
                        residual,
                        cfg.accepts(residual, 1.0),
                        json!({
                            "dim": b.algebra().dim(),
                            "left_hopf_dim": b.left().hopf().dim(),
                            "right_hopf_dim": b.right().hopf().dim(),
                            "commutation_residual": residual,
                        }),
                    )
                }
                Err(e) => error_report("cotensor", e),
            }
        }
        Cmd::Examples { which } => return examples(which, cfg).map(Outcome::Data),
    };
    Ok(Outcome::Report(report))
}

fn examples(which: Example, cfg: &Config) -> Result<serde_json::Value, Failure> {
    let v = match which {
        Example::CrossedProduct { group, dual, hopf } => {
            let h = match hopf {
                Some(p) => io::load_hopf(&p, cfg)?,
                None => {
                    let g = group_by_name(&group)?;
                    built(if dual { group_algebra(&g, cfg) } else { function_algebra(&g, cfg) })?
                }
            };
            serde_json::to_value(BundleJson::from_biaction(&built(crossed_product(&h, cfg))?))
        }
        Example::Projective { cocycle, n, group } => {
            let sigma = match cocycle.as_str() {
                "heisenberg" => built(heisenberg_cocycle(n, cfg.tol))?,
                "trivial" => TwoCocycle::trivial(group_by_name(&group)?),
                other => return Err(Failure::Usage(format!("unknown cocycle `{other}`"))),
            };
            serde_json::to_value(BundleJson::from_biaction(&built(projective_cocycle_algebra(&sigma, cfg))?))
        }
        Example::Cocycle { n } => {
            let a = built(built(heisenberg_cocycle(n, cfg.tol))?.twisted_group_algebra(cfg))?;
            serde_json::to_value(AlgebraJson::from_algebra(&a))
        }
    };
    Ok(v.expect("example data serializes"))
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: cannot write: {e}", path.display())))
}

fn emit(global: &Global, text: &str) -> bool {
    match &global.output {
        Some(p) => match fs::write(p, text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("error: {}: cannot write: {e}", p.display());
                false
            }
        },
        None => {
            print!("{text}");
            true
        }
    }
}

fn render(global: &Global, r: &Report) -> String {
    match global.format {
        Format::Json => to_json(r),
        Format::Text => r.to_text(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config { tol: cli.global.tol, seed: cli.global.seed, jobs: cli.global.jobs as usize };
    let name = check_name(&cli.cmd);
    match run(cli.cmd, &cfg) {
        Ok(Outcome::Data(v)) => {
            if emit(&cli.global, &format!("{v}\n")) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Ok(Outcome::Report(r)) => {
            let pass = r.verdict;
            if !emit(&cli.global, &render(&cli.global, &r)) {
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let msg = match f {
                Failure::Input(e) => e.to_string(),
                Failure::Usage(m) => m,
            };
            eprintln!("error: {msg}");
            emit(&cli.global, &render(&cli.global, &error_report(name, &msg)));
            ExitCode::from(2)
        }
    }
}

fn check_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Validate { .. } => "validate",
        Cmd::Haar { .. } => "haar",
        Cmd::Freeness { .. } => "freeness",
        Cmd::Spectral { .. } => "spectral",
        Cmd::CanonicalState { .. } => "canonical state",
        Cmd::Frobenius { .. } => "frobenius",
        Cmd::Kms { .. } => "kms",
        Cmd::Morita { .. } => "morita",
        Cmd::Exchange { .. } => "exchange",
        Cmd::Onesided { .. } => "onesided",
        Cmd::Cotensor { .. } => "cotensor",
        Cmd::Examples { .. } => "examples",
    }
}
