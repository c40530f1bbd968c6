//! Command-line front end: `gen`, `eig`, `psd` and `bench`.
//!
//! Exit codes: 0 on success or a conclusive verdict, 1 on usage or I/O
//! errors, 2 when the result is inconclusive. Lines that carry wall-clock
//! measurements start with `time:`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::bench::{emit_csv, emit_markdown, emit_trials_csv, run_experiment, suite, summarize};
use crate::bfgs::{minimize, normalized_random_start, SolverConfig, Termination};
use crate::error::{Error, Result};
use crate::generators::{child_seed, rng_from_seed, ExampleTensor};
use crate::metric::BOperator;
use crate::psd::{psd_check, Decision, PsdConfig, PsdMetric, PsdVerdict};
use crate::tensor::{Eigenpair, SymmetricTensor};
use crate::tns;
use crate::variational::{Flavor, Objective, PointClass, ZeroBand};

#[derive(Debug, Parser)]
#[command(name = "tenseig", version, about = "Eigenvalues and positive semidefiniteness of even-order symmetric tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a test tensor in `.tns` format.
    Gen(GenArgs),
    /// Find eigenpairs by minimizing f1/f2 from random starts.
    Eig(EigArgs),
    /// Decide positive semidefiniteness by multi-start minimization.
    Psd(PsdArgs),
    /// Run a built-in experiment suite and write CSV and Markdown tables.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Example family, 1 to 7.
    #[arg(long)]
    pub example: u8,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TensorInput {
    #[arg(long)]
    pub tensor: PathBuf,
    /// Average the input over index permutations instead of rejecting an
    /// asymmetric tensor.
    #[arg(long)]
    pub symmetrize: bool,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    #[command(flatten)]
    pub input: TensorInput,
    /// `unit`, `zid`, `matrix:PATH` (order-2 SPD `.tns` file) or `dense:PATH`.
    #[arg(long, default_value = "zid")]
    pub b: String,
    /// `f1` for the smallest eigenvalues, `f2` for the largest.
    #[arg(long, default_value = "f1")]
    pub objective: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub shift: f64,
    #[arg(long, default_value_t = 10)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gradient infinity-norm tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub solver_tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Write a JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PsdArgs {
    #[command(flatten)]
    pub input: TensorInput,
    /// `unit` or `zid`.
    #[arg(long, default_value = "unit")]
    pub b: String,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the verdict as JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// table1 .. table7.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `<suite>.csv`, `<suite>.md` and `<suite>_trials.csv`.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Comma-separated dimensions for the size-swept suites.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut out = std::io::stdout();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Gen(a) => gen(a, out),
        Command::Eig(a) => with_jobs(a.jobs, || eig(&a, out)),
        Command::Psd(a) => with_jobs(a.jobs, || psd(&a, out)),
        Command::Bench(a) => with_jobs(a.jobs, || bench(&a, out)),
    }
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match jobs {
        None => f(),
        Some(0) => Err(Error::InvalidConfig("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn gen(a: GenArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let t = ExampleTensor::new(a.example, a.n, a.seed)?.build()?;
    match a.out {
        Some(path) => tns::write_file(path, &t)?,
        None => out.write_all(tns::to_string(&t).as_bytes())?,
    }
    Ok(0)
}

fn load_tensor(input: &TensorInput) -> Result<SymmetricTensor> {
    let t = tns::read_file(&input.tensor)?;
    if t.is_symmetric() {
        Ok(t)
    } else if input.symmetrize {
        Ok(t.symmetrized())
    } else {
        Err(Error::NotSymmetric)
    }
}

fn parse_b(spec: &str, order: usize, dim: usize) -> Result<BOperator> {
    let expect_shape = |t: &SymmetricTensor, want_order: usize, path: &str| -> Result<()> {
        if t.order() != want_order || t.dim() != dim {
            return Err(Error::InvalidConfig(format!(
                "{path}: expected order {want_order} dim {dim}, found order {} dim {}",
                t.order(),
                t.dim()
            )));
        }
        Ok(())
    };
    match spec.split_once(':') {
        None if spec == "unit" => BOperator::unit(order, dim),
        None if spec == "zid" => BOperator::identity_power(order, dim),
        Some(("matrix", path)) => {
            let d = tns::read_file(Path::new(path))?;
            expect_shape(&d, 2, path)?;
            BOperator::matrix_power(order, dim, d.values().to_vec())
        }
        Some(("dense", path)) => {
            let d = tns::read_file(Path::new(path))?;
            expect_shape(&d, order, path)?;
            BOperator::explicit(d)
        }
        _ => Err(Error::InvalidConfig(format!(
            "unknown --b '{spec}' (expected unit, zid, matrix:PATH or dense:PATH)"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
struct StartOutcome {
    start: usize,
    seed: u64,
    outcome: &'static str,
    termination: Termination,
    iterations: usize,
    b_form: f64,
    objective_value: f64,
    eigenpair: Option<Eigenpair>,
    wall_time: f64,
}

#[derive(Debug, Serialize)]
struct EigReport<'a> {
    tensor: &'a Path,
    order: usize,
    dim: usize,
    b: &'a str,
    objective: &'a str,
    shift: f64,
    seed: u64,
    solver: &'a SolverConfig,
    best: Option<&'a Eigenpair>,
    distinct_eigenvalues: &'a [f64],
    starts: &'a [StartOutcome],
}

fn fmt_vec(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.10e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Sorted eigenvalues with near-duplicates merged.
fn distinct(mut lambdas: Vec<f64>) -> Vec<f64> {
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup_by(|a, b| (*a - *b).abs() <= 1e-6 * (1.0 + b.abs()));
    lambdas
}

fn eig(args: &EigArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let clock = Instant::now();
    let a = load_tensor(&args.input)?;
    let b = parse_b(&args.b, a.order(), a.dim())?;
    let flavor = match args.objective.as_str() {
        "f1" => Flavor::F1,
        "f2" => Flavor::F2,
        other => return Err(Error::InvalidConfig(format!("unknown --objective '{other}' (expected f1 or f2)"))),
    };
    if args.starts == 0 {
        return Err(Error::InvalidConfig("--starts must be at least 1".into()));
    }
    let solver = SolverConfig {
        grad_tol: args.solver_tol,
        max_iter: args.max_iter,
        seed: Some(args.seed),
        ..SolverConfig::default()
    };
    solver.validate()?;
    let obj = Objective::new(flavor, args.shift, &a, &b)?;
    let band = ZeroBand::default();

    let starts: Vec<StartOutcome> = (0..args.starts)
        .into_par_iter()
        .map(|i| -> Result<StartOutcome> {
            let seed = child_seed(args.seed, i as u64);
            let x0 = normalized_random_start(a.dim(), &mut rng_from_seed(seed));
            let t0 = Instant::now();
            let report = minimize(&obj, &x0, &solver)?;
            let cp = obj.classify(&report.x, band)?;
            let outcome = match cp.classification {
                PointClass::ZeroPoint => "zero point",
                PointClass::EigenpairPoint => "eigenpair",
                PointClass::Inconclusive => "inconclusive",
            };
            Ok(StartOutcome {
                start: i,
                seed,
                outcome,
                termination: report.termination,
                iterations: report.iterations,
                b_form: cp.b_form,
                objective_value: cp.objective_value,
                eigenpair: cp.recovered,
                wall_time: t0.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<&Eigenpair> = starts.iter().filter_map(|s| s.eigenpair.as_ref()).collect();
    let best = match flavor {
        Flavor::F1 => pairs.iter().copied().min_by(|p, q| p.lambda.total_cmp(&q.lambda)),
        Flavor::F2 => pairs.iter().copied().max_by(|p, q| p.lambda.total_cmp(&q.lambda)),
    };
    let found = distinct(pairs.iter().map(|p| p.lambda).collect());

    writeln!(out, "tensor: order {} dim {}, B = {}, objective {}, shift {}", a.order(), a.dim(), b.tag().short_name(), args.objective, args.shift)?;
    for s in &starts {
        match &s.eigenpair {
            Some(p) => writeln!(
                out,
                "start {:>3}: {} lambda = {:.12e} residual = {:.3e} ({} iterations, {:?})",
                s.start, s.outcome, p.lambda, p.residual, s.iterations, s.termination
            )?,
            None => writeln!(
                out,
                "start {:>3}: {} B x^m = {:.3e} ({} iterations, {:?})",
                s.start, s.outcome, s.b_form, s.iterations, s.termination
            )?,
        }
    }
    match best {
        Some(p) => {
            writeln!(out, "best lambda: {:.12e}", p.lambda)?;
            writeln!(out, "eigenvector: {}", fmt_vec(&p.x))?;
            writeln!(out, "residual: {:.3e}", p.residual)?;
            let list: Vec<String> = found.iter().map(|v| format!("{v:.10e}")).collect();
            writeln!(out, "distinct eigenvalues: {}", list.join(", "))?;
        }
        None => writeln!(out, "no eigenpair found")?,
    }
    writeln!(out, "time: {:.3} s", clock.elapsed().as_secs_f64())?;

    if let Some(path) = &args.report {
        let report = EigReport {
            tensor: &args.input.tensor,
            order: a.order(),
            dim: a.dim(),
            b: &args.b,
            objective: &args.objective,
            shift: args.shift,
            seed: args.seed,
            solver: &solver,
            best,
            distinct_eigenvalues: &found,
            starts: &starts,
        };
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    let all_zero = starts.iter().all(|s| s.outcome == "zero point");
    Ok(if best.is_some() || all_zero { 0 } else { 2 })
}

#[derive(Debug, Serialize)]
struct PsdReport<'a> {
    tensor: &'a Path,
    order: usize,
    dim: usize,
    config: &'a PsdConfig,
    verdict_text: &'a str,
    verdict: &'a PsdVerdict,
}

fn psd(args: &PsdArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let clock = Instant::now();
    let a = load_tensor(&args.input)?;
    let metric = match args.b.as_str() {
        "unit" => PsdMetric::Unit,
        "zid" => PsdMetric::Identity,
        other => return Err(Error::InvalidConfig(format!("unknown --b '{other}' (expected unit or zid)"))),
    };
    let cfg = PsdConfig {
        t: args.t,
        metric,
        trials: args.trials,
        seed: args.seed,
        ..PsdConfig::default()
    };
    let v = psd_check(&a, &cfg)?;
    let c = &v.counts;
    writeln!(out, "verdict: {}", v.decision.describe())?;
    writeln!(
        out,
        "trials run: {} (zero point {}, zero eigenvalue {}, positive eigenvalue {}, negative eigenvalue {}, inconclusive {})",
        v.trials_run, c.positive_definite, c.zero_eigenvalue, c.positive_eigenvalue, c.negative_eigenvalue, c.inconclusive
    )?;
    writeln!(out, "B x^m range: {:.3e} .. {:.3e}", v.b_form_min, v.b_form_max)?;
    if let Some(w) = &v.witness {
        writeln!(out, "witness lambda: {:.12e}", w.lambda)?;
        writeln!(out, "witness vector: {}", fmt_vec(&w.x))?;
        writeln!(out, "witness residual: {:.3e}", w.residual)?;
    }
    writeln!(out, "time: {:.3} s", clock.elapsed().as_secs_f64())?;
    if let Some(path) = &args.json {
        let report = PsdReport {
            tensor: &args.input.tensor,
            order: a.order(),
            dim: a.dim(),
            config: &cfg,
            verdict_text: v.decision.describe(),
            verdict: &v,
        };
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if v.decision == Decision::Inconclusive { 2 } else { 0 })
}

fn bench(args: &BenchArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let clock = Instant::now();
    let spec = suite(&args.suite, args.trials, args.seed, args.sizes.as_deref())?;
    let records = run_experiment(&spec)?;
    let rows = summarize(&records);
    std::fs::create_dir_all(&args.out)?;
    let stem = args.out.join(&spec.name);
    std::fs::write(stem.with_extension("csv"), emit_csv(&rows))?;
    std::fs::write(args.out.join(format!("{}_trials.csv", spec.name)), emit_trials_csv(&records))?;
    if let Some(md) = emit_markdown(&rows) {
        std::fs::write(stem.with_extension("md"), md)?;
    }
    writeln!(out, "suite {} ({} trials, seed {})", spec.name, spec.trials, spec.master_seed)?;
    for r in &rows {
        let acc = r.accuracy.map(|s| format!("{:.2e}", s.mean)).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{:<24} {:<12} success {:>5.1}%  mean accuracy {:>9}  mean iterations {:.1}",
            r.method, r.tensor_id, r.success_rate, acc, r.iters_mean
        )?;
    }
    for r in &rows {
        writeln!(out, "time: {:<24} {:<12} mean {:.3e} s", r.method, r.tensor_id, r.time.mean)?;
    }
    writeln!(out, "time: total {:.3} s", clock.elapsed().as_secs_f64())?;
    Ok(0)
}
