//! Command-line interface: build, verify, integrals, s2, decide-ai, dual, tensor, double, census.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure, 2 on usage or IO errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{build_from_presentation, build_named, catalog_families, Family, Presentation};
use crate::companion::{
    check_splitting_algebra, check_splitting_coalgebra, decide_ai_with, eigendecompose_s2, random_splitting,
    sqrt_from_splitting, verify_companion, with_companion_field, AIVerdict, DecideOptions,
};
use crate::constructions::{drinfeld_double, dual_hopf, tensor_product};
use crate::error::{HopfError, Result};
use crate::format;
use crate::hopf::{is_hopf_morphism, map_order, HopfAlgebra};
use crate::integrals::{compute_integrals, radford_bound_check, verify_identities};

#[derive(Parser, Debug)]
#[command(name = "hopfkit", version, about = "Exact finite-dimensional Hopf algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the report as JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks (HOPFKIT_SEED takes precedence)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Skip axiom verification when loading algebra files
    #[arg(long, global = true)]
    pub trust: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a catalog algebra (or one from a presentation file) and write it as JSON
    Build {
        /// Catalog name such as `Sweedler`, `Taft(3)`, `A3_C4(1)` or `dual(A1)`
        name: Option<String>,
        /// JSON or TOML presentation file
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hopf axioms, integral identities and the order bound
    Verify { algebra: String },
    /// Integrals, modular element and modular function
    Integrals { algebra: String },
    /// Order and eigenspaces of S^2; optionally sample random splittings
    S2 {
        algebra: String,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Decide whether the algebra is almost involutive
    DecideAi {
        algebra: String,
        #[arg(long, default_value_t = 10_000)]
        branch_budget: usize,
    },
    Dual {
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Tensor {
        left: String,
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drinfel'd double
    Double {
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verdict table over the catalog (and duals) up to a dimension
    Census {
        #[arg(long, default_value_t = 15)]
        max_dim: usize,
        #[arg(long, default_value_t = 10_000)]
        branch_budget: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictLine {
    pub algebra: String,
    pub dim: usize,
    pub verdict: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub checks: Vec<CheckLine>,
    pub verdicts: Vec<VerdictLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    pub seed: u64,
    pub timing_ms: u128,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out += &format!("[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
            if let Some(d) = &c.detail {
                out += &format!(": {d}");
            }
            out.push('\n');
        }
        if !self.verdicts.is_empty() {
            let w = self.verdicts.iter().map(|v| v.algebra.len()).max().unwrap_or(0);
            for v in &self.verdicts {
                out += &format!("{:w$}  dim {:3}  {:12}  {}\n", v.algebra, v.dim, v.verdict, v.detail);
            }
        }
        if let Some(r) = &self.result {
            out += &serde_json::to_string_pretty(r).unwrap_or_default();
            out.push('\n');
        }
        out
    }
}

/// Parses a catalog name, allowing `dual(...)` wrappers.
pub fn build_by_name(name: &str) -> Result<HopfAlgebra> {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
        return Ok(dual_hopf(&build_by_name(inner)?));
    }
    build_named(name.parse::<Family>()?)
}

/// A path to an algebra file if it exists, else a catalog name.
pub fn resolve(source: &str, trust: bool) -> Result<HopfAlgebra> {
    let p = Path::new(source);
    if p.is_file() {
        format::load(p, trust)
    } else {
        build_by_name(source)
    }
}

fn write_or_print(h: &HopfAlgebra, out: &Option<PathBuf>, report: &mut Report) -> Result<()> {
    match out {
        Some(path) => {
            format::save(h, path)?;
            report.check(format!("wrote {}", path.display()), true, Some(format!("dim {}", h.dim())));
        }
        None => report.result = Some(serde_json::to_value(format::AlgebraFile::from_algebra(h))?),
    }
    Ok(())
}

fn verdict_detail(v: &AIVerdict) -> String {
    match v {
        AIVerdict::Witness { method, r_sigma, .. } => format!("{method:?}, r_sigma = {r_sigma}"),
        AIVerdict::NotAI { certificate, .. } => {
            let mut outcomes: Vec<&str> = certificate.iter().map(|b| b.outcome.as_str()).collect();
            outcomes.dedup();
            outcomes.join("; ")
        }
        AIVerdict::Inconclusive { reason, .. } => reason.clone(),
    }
}

fn expected_not_ai() -> Vec<String> {
    ["A2_C4", "dual(A2_C4)", "A1", "dual(A1)"].iter().map(|s| s.to_string()).collect()
}

fn run_census(max_dim: usize, budget: usize, report: &mut Report) -> Result<()> {
    let mut names = Vec::new();
    for fam in catalog_families() {
        let h = build_named(fam)?;
        if h.dim() > max_dim {
            continue;
        }
        names.push(fam.to_string());
        if !matches!(fam, Family::GroupAlgebraCyclic(_)) {
            names.push(format!("dual({fam})"));
        }
    }
    names.sort();
    let rows: Vec<Result<VerdictLine>> = names
        .par_iter()
        .map(|name| {
            let h = build_by_name(name)?;
            let v = decide_ai_with(&h, DecideOptions { branch_budget: budget })?;
            Ok(VerdictLine {
                algebra: name.clone(),
                dim: h.dim(),
                verdict: v.tag().to_string(),
                detail: verdict_detail(&v),
            })
        })
        .collect();
    let rows: Vec<VerdictLine> = rows.into_iter().collect::<Result<_>>()?;
    let expected = expected_not_ai();
    let mut diff = Vec::new();
    for r in &rows {
        let want_not = expected.contains(&r.algebra);
        let ok = match r.verdict.as_str() {
            "Witness" => !want_not,
            "NotAI" => want_not && (r.dim == 8 || r.dim == 12),
            _ => false,
        };
        if !ok {
            diff.push(format!("{}: {}", r.algebra, r.verdict));
        }
    }
    let counts = |t: &str| rows.iter().filter(|r| r.verdict == t).count();
    report.check(
        format!(
            "census up to dimension {max_dim}: {} Witness, {} NotAI, {} Inconclusive",
            counts("Witness"),
            counts("NotAI"),
            counts("Inconclusive")
        ),
        diff.is_empty(),
        (!diff.is_empty()).then(|| format!("unexpected verdicts: {}", diff.join(", "))),
    );
    report.verdicts = rows;
    Ok(())
}

fn execute(cli: &Cli, seed: u64, report: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Build {
            name,
            presentation,
            out,
        } => {
            let h = match (name, presentation) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(path)?;
                    let p = if path.extension().is_some_and(|e| e == "toml") {
                        Presentation::from_toml(&text)?
                    } else {
                        Presentation::from_json(&text)?
                    };
                    build_from_presentation(&p)?
                }
                (Some(n), None) => build_by_name(n)?,
                (None, None) => {
                    return Err(HopfError::InvalidParameter("give a catalog name or --presentation".into()))
                }
            };
            report.check(format!("built {} (dim {})", h.meta.family, h.dim()), true, None);
            write_or_print(&h, out, report)?;
        }
        Command::Verify { algebra } => {
            let h = resolve(algebra, cli.trust)?;
            for c in h.verify_axioms().checks.iter().chain(&h.verify_metadata().checks) {
                report.check(&c.axiom, c.passed, c.first_counterexample.clone());
            }
            let data = compute_integrals(&h)?;
            for c in verify_identities(&h, &data).checks {
                report.check(c.axiom, c.passed, c.first_counterexample);
            }
            let b = radford_bound_check(&h, &data)?;
            report.check(
                "ord(S^2) | 2 ord(a) ord(alpha) and ord(alpha(a)) | gcd(ord(a), ord(alpha))",
                b.passed(),
                Some(format!(
                    "ord(a) = {}, ord(alpha) = {}, ord(S^2) = {}, ord(alpha(a)) = {}",
                    b.ord_a, b.ord_alpha, b.ord_s2, b.ord_alpha_of_a
                )),
            );
        }
        Command::Integrals { algebra } => {
            let h = resolve(algebra, cli.trust)?;
            let d = compute_integrals(&h)?;
            let f = |v: &[crate::CycloNum]| h.format_element(v);
            let dualf = |v: &[crate::CycloNum]| {
                let labels: Vec<String> = h.labels().iter().map(|l| format!("{l}*")).collect();
                crate::hopf::format_combination(&labels, v)
            };
            report.check("left integral l", true, Some(f(&d.ell)));
            report.check("right integral r = S^-1(l)", true, Some(f(&d.r)));
            report.check("right integral lambda", true, Some(dualf(&d.lambda.0)));
            report.check("left integral rho = lambda o S", true, Some(dualf(&d.rho.0)));
            report.check("modular element a", true, Some(f(&d.a)));
            report.check("modular function alpha", true, Some(dualf(&d.alpha.0)));
            report.check("alpha(a)", true, Some(d.alpha_of_a.to_string()));
            report.check("lambda(l) = 1", d.normalized, None);
            report.result = Some(serde_json::to_value(&d)?);
        }
        Command::S2 { algebra, samples } => {
            let h = with_companion_field(&resolve(algebra, cli.trust)?)?;
            let m = map_order(&h.s2(), 2 * (h.dim() * h.dim()) as u32)?;
            report.check("order of S^2", true, Some(m.to_string()));
            let e = eigendecompose_s2(&h)?;
            let dims: Vec<String> = e.spaces.iter().map(|(i, b)| format!("q^{i}: {}", b.len())).collect();
            report.check("eigenspace dimensions", true, Some(dims.join(", ")));
            if *samples > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut agree = 0;
                let mut first_bad = None;
                let mut companions = 0;
                for k in 0..*samples {
                    let s = random_splitting(&e, &mut rng);
                    let conds = check_splitting_algebra(&h, &e, &s)?.passed && check_splitting_coalgebra(&h, &e, &s)?.passed;
                    let sigma = sqrt_from_splitting(&e, &s)?;
                    let hopf = is_hopf_morphism(&sigma, &h, &h)?.passed;
                    companions += hopf as usize;
                    if conds == hopf {
                        agree += 1;
                    } else if first_bad.is_none() {
                        first_bad = Some(format!("sample {k}: conditions {conds}, Hopf map {hopf}"));
                    }
                }
                report.check(
                    format!("sign conditions agree with the Hopf property on {agree}/{samples} splittings ({companions} companions)"),
                    agree == *samples,
                    first_bad,
                );
            }
        }
        Command::DecideAi {
            algebra,
            branch_budget,
        } => {
            let h = resolve(algebra, cli.trust)?;
            let v = decide_ai_with(&h, DecideOptions {
                branch_budget: *branch_budget,
            })?;
            report.verdicts.push(VerdictLine {
                algebra: h.meta.family.clone(),
                dim: h.dim(),
                verdict: v.tag().into(),
                detail: verdict_detail(&v),
            });
            if let AIVerdict::Witness { sigma, .. } = &v {
                let hc = with_companion_field(&h)?;
                for c in verify_companion(&hc, sigma)?.checks.checks {
                    report.check(c.axiom, c.passed, c.first_counterexample);
                }
            }
            report.check("almost involutive", v.tag() == "Witness", None);
            report.result = Some(serde_json::to_value(&v)?);
        }
        Command::Dual { algebra, out } => {
            let d = dual_hopf(&resolve(algebra, cli.trust)?);
            report.check("dual axioms", d.verify_axioms().all_passed(), None);
            write_or_print(&d, out, report)?;
        }
        Command::Tensor { left, right, out } => {
            let t = tensor_product(&resolve(left, cli.trust)?, &resolve(right, cli.trust)?);
            report.check("tensor product axioms", t.verify_axioms().all_passed(), None);
            write_or_print(&t, out, report)?;
        }
        Command::Double { algebra, out } => {
            let d = drinfeld_double(&resolve(algebra, cli.trust)?)?;
            report.check("double axioms", d.verify_axioms().all_passed(), None);
            write_or_print(&d, out, report)?;
        }
        Command::Census {
            max_dim,
            branch_budget,
        } => run_census(*max_dim, *branch_budget, report)?,
    }
    Ok(())
}

/// Effective seed: `HOPFKIT_SEED` overrides the flag.
pub fn resolve_seed(flag: u64) -> std::result::Result<u64, String> {
    match std::env::var("HOPFKIT_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| format!("HOPFKIT_SEED is not an integer: {s:?}")),
        Err(_) => Ok(flag),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let seed = match resolve_seed(cli.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let start = Instant::now();
    let mut report = Report {
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        seed,
        ..Report::default()
    };
    let outcome = execute(&cli, seed, &mut report);
    report.timing_ms = start.elapsed().as_millis();
    let code = match outcome {
        Ok(()) if report.passed() => 0,
        Ok(()) => 1,
        Err(e) => {
            let usage = matches!(
                e,
                HopfError::Io(_)
                    | HopfError::Json(_)
                    | HopfError::Format(_)
                    | HopfError::UnknownAlgebra(_)
                    | HopfError::InvalidParameter(_)
                    | HopfError::PresentationError(_)
            );
            eprintln!("error: {e}");
            if usage {
                return 2;
            }
            report.check("computation", false, Some(e.to_string()));
            1
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.render());
    }
    code
}
