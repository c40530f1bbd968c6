//! Seeded multi-trial experiments comparing the variational solvers, SSHOPM
//! and the PSD check on the generator families.
//!
//! Every method sees the same unit start for a given trial index, drawn from
//! `child_seed(master_seed, trial)`. Records are sorted by method, tensor and
//! trial so output never depends on thread scheduling.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bfgs::{minimize, normalized_random_start, SolverConfig, Termination};
use crate::error::{Error, Result};
use crate::generators::{child_seed, rng_from_seed, ExampleTensor};
use crate::psd::{psd_trial_from, PsdConfig, PsdMetric, TrialVote};
use crate::sshopm::{sshopm_run, SshopmConfig};
use crate::tensor::SymmetricTensor;
use crate::variational::{Flavor, Objective, PointClass, ZeroBand};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Method {
    Variational { flavor: Flavor, metric: PsdMetric, shift: f64 },
    Sshopm { alpha: f64, max_iters: usize },
    /// One solve of the PSD check per trial, without retry shifts.
    PsdCheck { metric: PsdMetric, t: f64 },
}

fn metric_name(m: PsdMetric) -> &'static str {
    match m {
        PsdMetric::Unit => "unit",
        PsdMetric::Identity => "zid",
    }
}

fn parse_metric(s: &str) -> Result<PsdMetric> {
    match s {
        "unit" => Ok(PsdMetric::Unit),
        "zid" => Ok(PsdMetric::Identity),
        _ => Err(Error::InvalidConfig(format!("unknown metric '{s}' (expected unit or zid)"))),
    }
}

impl Method {
    pub fn label(&self) -> String {
        match *self {
            Method::Variational { flavor, metric, shift } => {
                let f = match flavor {
                    Flavor::F1 => "f1",
                    Flavor::F2 => "f2",
                };
                if shift == 0.0 {
                    format!("{f}[{}]", metric_name(metric))
                } else {
                    format!("{f}[{};t={shift}]", metric_name(metric))
                }
            }
            Method::Sshopm { alpha, .. } => format!("sshopm[alpha={alpha}]"),
            Method::PsdCheck { metric, t } => format!("alg1[{};t={t}]", metric_name(metric)),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accepts `f1:zid`, `f2:unit:-1`, `sshopm:-2`, `sshopm:-2:10000`, `psd:unit:-1`.
impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| -> Result<f64> {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidConfig(format!("bad number '{p}' in method '{s}'")))
        };
        match parts.as_slice() {
            [f @ ("f1" | "f2"), m, rest @ ..] if rest.len() <= 1 => Ok(Method::Variational {
                flavor: if *f == "f1" { Flavor::F1 } else { Flavor::F2 },
                metric: parse_metric(m)?,
                shift: rest.first().map(|p| num(p)).transpose()?.unwrap_or(0.0),
            }),
            ["sshopm", a, rest @ ..] if rest.len() <= 1 => Ok(Method::Sshopm {
                alpha: num(a)?,
                max_iters: match rest.first() {
                    Some(p) => p
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad iteration cap in '{s}'")))?,
                    None => SshopmConfig::default().max_iters,
                },
            }),
            ["psd", m, t] => Ok(Method::PsdCheck {
                metric: parse_metric(m)?,
                t: num(t)?,
            }),
            _ => Err(Error::InvalidConfig(format!("unknown method '{s}'"))),
        }
    }
}

/// When a trial counts as a success.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SuccessRule {
    /// An eigenpair with accuracy at most `max_residual`.
    AccurateEigenpair { max_residual: f64 },
    /// A computed eigenvalue below `-tol`.
    NegativeEigenvalue { tol: f64 },
    /// A computed eigenvalue with `|lambda| <= tol`.
    ZeroEigenvalue { tol: f64 },
    /// The solver ended at the zero critical point.
    ZeroPoint,
}

impl Default for SuccessRule {
    fn default() -> Self {
        SuccessRule::AccurateEigenpair { max_residual: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Outcome {
    FoundEigenpair { lambda: f64 },
    ZeroPoint,
    Diverged,
    /// Iteration cap hit; the last iterate's eigenvalue estimate if any.
    MaxIter { lambda: Option<f64> },
    /// Ended between the zero and eigenpair bands.
    Inconclusive,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::FoundEigenpair { .. } => "found",
            Outcome::ZeroPoint => "zero",
            Outcome::Diverged => "diverged",
            Outcome::MaxIter { .. } => "maxiter",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Outcome::FoundEigenpair { lambda } => Some(lambda),
            Outcome::MaxIter { lambda } => lambda,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub tensors: Vec<ExampleTensor>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub solver: SolverConfig,
    pub band: ZeroBand,
    pub success: SuccessRule,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("experiment has no methods".into()));
        }
        for t in &self.tensors {
            ExampleTensor::new(t.example, t.n, t.seed)?;
        }
        for m in &self.methods {
            if let Method::Sshopm { alpha, max_iters } = *m {
                SshopmConfig { alpha, max_iters, ..SshopmConfig::for_psd(alpha) }.validate()?;
            }
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub method: String,
    pub tensor_id: String,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    /// FNV-1a of the start vector's bits; equal across methods per trial.
    pub x0_hash: u64,
    pub outcome: Outcome,
    /// Residual `||A x^{m-1} - lambda B x^{m-1}||_2` at the normalized iterate.
    pub accuracy: Option<f64>,
    pub b_form: Option<f64>,
    pub iterations: usize,
    pub success: bool,
    pub wall_time: f64,
}

fn fnv1a(x: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in x.iter().flat_map(|v| v.to_bits().to_le_bytes()) {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

struct Run {
    outcome: Outcome,
    accuracy: Option<f64>,
    b_form: Option<f64>,
    iterations: usize,
}

fn run_variational(
    a: &SymmetricTensor,
    flavor: Flavor,
    metric: PsdMetric,
    shift: f64,
    x0: &[f64],
    spec: &ExperimentSpec,
) -> Result<Run> {
    let b = metric.build(a.order(), a.dim())?;
    let obj = Objective::new(flavor, shift, a, &b)?;
    let report = minimize(&obj, x0, &spec.solver)?;
    if !report.objective_value.is_finite() || !report.x.iter().all(|v| v.is_finite()) {
        return Ok(Run { outcome: Outcome::Diverged, accuracy: None, b_form: None, iterations: report.iterations });
    }
    let cp = obj.classify(&report.x, spec.band)?;
    let (outcome, accuracy) = match (cp.classification, cp.recovered) {
        (PointClass::ZeroPoint, _) => (Outcome::ZeroPoint, None),
        (PointClass::EigenpairPoint, Some(pair)) => {
            let lambda = pair.lambda;
            if report.termination == Termination::MaxIter {
                (Outcome::MaxIter { lambda: Some(lambda) }, Some(pair.residual))
            } else {
                (Outcome::FoundEigenpair { lambda }, Some(pair.residual))
            }
        }
        _ => (Outcome::Inconclusive, None),
    };
    Ok(Run { outcome, accuracy, b_form: Some(cp.b_form), iterations: report.iterations })
}

fn run_sshopm(a: &SymmetricTensor, alpha: f64, max_iters: usize, x0: &[f64]) -> Result<Run> {
    let cfg = SshopmConfig { alpha, max_iters, ..SshopmConfig::default() };
    match sshopm_run(a, x0, &cfg) {
        Ok(r) if r.eigenpair.lambda.is_finite() && r.eigenpair.residual.is_finite() => {
            let lambda = r.eigenpair.lambda;
            let outcome = if r.converged {
                Outcome::FoundEigenpair { lambda }
            } else {
                Outcome::MaxIter { lambda: Some(lambda) }
            };
            Ok(Run { outcome, accuracy: Some(r.eigenpair.residual), b_form: Some(1.0), iterations: r.iterations })
        }
        Ok(r) => Ok(Run { outcome: Outcome::Diverged, accuracy: None, b_form: None, iterations: r.iterations }),
        Err(Error::ShiftAnnihilated) => {
            Ok(Run { outcome: Outcome::Diverged, accuracy: None, b_form: None, iterations: 0 })
        }
        Err(e) => Err(e),
    }
}

fn run_psd(
    a: &SymmetricTensor,
    metric: PsdMetric,
    t: f64,
    x0: &[f64],
    trial: usize,
    spec: &ExperimentSpec,
) -> Result<Run> {
    let cfg = PsdConfig {
        t,
        eta1: spec.band.eta1,
        eta2: spec.band.eta2,
        metric,
        trials: 1,
        retry_shifts: Vec::new(),
        solver: spec.solver.clone(),
        seed: spec.master_seed,
        ..PsdConfig::default()
    };
    let tr = psd_trial_from(a, &cfg, trial, x0)?;
    let accuracy = tr.eigenpair.as_ref().map(|p| p.residual);
    let outcome = match (tr.vote, tr.lambda_value_route) {
        (TrialVote::PositiveDefinite, _) => Outcome::ZeroPoint,
        (TrialVote::Inconclusive, _) | (_, None) => Outcome::Inconclusive,
        (_, Some(lambda)) => Outcome::FoundEigenpair { lambda },
    };
    Ok(Run { outcome, accuracy, b_form: Some(tr.b_form), iterations: tr.iterations })
}

fn is_success(rule: SuccessRule, outcome: &Outcome, accuracy: Option<f64>) -> bool {
    match rule {
        SuccessRule::AccurateEigenpair { max_residual } => {
            matches!(outcome, Outcome::FoundEigenpair { .. }) && accuracy.is_some_and(|r| r <= max_residual)
        }
        SuccessRule::NegativeEigenvalue { tol } => outcome.lambda().is_some_and(|l| l < -tol),
        SuccessRule::ZeroEigenvalue { tol } => outcome.lambda().is_some_and(|l| l.abs() <= tol),
        SuccessRule::ZeroPoint => matches!(outcome, Outcome::ZeroPoint),
    }
}

/// Runs every method on every tensor for `spec.trials` paired starts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    if spec.trials == 0 {
        return Ok(Vec::new());
    }
    let tensors: Vec<SymmetricTensor> = spec.tensors.iter().map(|t| t.build()).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..tensors.len())
        .flat_map(|ti| (0..spec.trials).map(move |i| (ti, i)))
        .collect();

    let nested = jobs
        .par_iter()
        .map(|&(ti, trial)| -> Result<Vec<(usize, usize, TrialRecord)>> {
            let a = &tensors[ti];
            let ex = &spec.tensors[ti];
            let seed = child_seed(spec.master_seed, trial as u64);
            let x0 = normalized_random_start(a.dim(), &mut rng_from_seed(seed));
            let x0_hash = fnv1a(&x0);
            let mut out = Vec::with_capacity(spec.methods.len());
            for (mi, method) in spec.methods.iter().enumerate() {
                let clock = Instant::now();
                let run = match *method {
                    Method::Variational { flavor, metric, shift } => {
                        run_variational(a, flavor, metric, shift, &x0, spec)?
                    }
                    Method::Sshopm { alpha, max_iters } => run_sshopm(a, alpha, max_iters, &x0)?,
                    Method::PsdCheck { metric, t } => run_psd(a, metric, t, &x0, trial, spec)?,
                };
                let wall_time = clock.elapsed().as_secs_f64();
                out.push((
                    mi,
                    ti,
                    TrialRecord {
                        method: method.label(),
                        tensor_id: ex.id(),
                        n: ex.n,
                        trial,
                        seed,
                        x0_hash,
                        success: is_success(spec.success, &run.outcome, run.accuracy),
                        outcome: run.outcome,
                        accuracy: run.accuracy,
                        b_form: run.b_form,
                        iterations: run.iterations,
                        wall_time,
                    },
                ));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut flat: Vec<(usize, usize, TrialRecord)> = nested.into_iter().flatten().collect();
    flat.sort_by_key(|(mi, ti, r)| (*mi, *ti, r.trial));
    Ok(flat.into_iter().map(|(_, _, r)| r).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    fn of(values: impl IntoIterator<Item = f64>) -> Option<Stats> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        Some(Stats {
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub tensor_id: String,
    pub n: usize,
    pub trials: usize,
    /// Percentage in `[0, 100]`.
    pub success_rate: f64,
    pub accuracy: Option<Stats>,
    pub time: Stats,
    pub iters_mean: f64,
    pub b_form: Option<Stats>,
}

/// One row per (method, tensor) in first-appearance order.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.method.clone(), r.tensor_id.clone());
        let g = groups.entry(key.clone()).or_default();
        if g.is_empty() {
            order.push(key);
        }
        g.push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let k = g.len() as f64;
            SummaryRow {
                method: key.0.clone(),
                tensor_id: key.1.clone(),
                n: g[0].n,
                trials: g.len(),
                success_rate: 100.0 * g.iter().filter(|r| r.success).count() as f64 / k,
                accuracy: Stats::of(g.iter().filter_map(|r| r.accuracy)),
                time: Stats::of(g.iter().map(|r| r.wall_time)).expect("groups are non-empty"),
                iters_mean: g.iter().map(|r| r.iterations as f64).sum::<f64>() / k,
                b_form: Stats::of(g.iter().filter_map(|r| r.b_form)),
            }
        })
        .collect()
}

pub const CSV_HEADER: &str =
    "method,tensor_id,n,trials,success_rate,acc_min,acc_max,acc_mean,time_min,time_max,time_mean,iters_mean";

fn sci(v: f64) -> String {
    format!("{v:.2e}")
}

fn opt_sci(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

/// Summary CSV. Accuracy cells are empty when no trial produced one.
pub fn emit_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.tensor_id,
            r.n,
            r.trials,
            sci(r.success_rate),
            opt_sci(r.accuracy.map(|s| s.min)),
            opt_sci(r.accuracy.map(|s| s.max)),
            opt_sci(r.accuracy.map(|s| s.mean)),
            sci(r.time.min),
            sci(r.time.max),
            sci(r.time.mean),
            sci(r.iters_mean),
        );
    }
    out
}

/// Reads [`emit_csv`] output back. `b_form` is not part of the CSV.
pub fn parse_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let bad = |line: usize, msg: &str| Error::InvalidConfig(format!("summary csv line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(bad(1, "unexpected header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 12 {
            return Err(bad(i + 1, "expected 12 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 1, "bad number"));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let acc = match (opt(f[5])?, opt(f[6])?, opt(f[7])?) {
            (Some(min), Some(max), Some(mean)) => Some(Stats { min, max, mean }),
            (None, None, None) => None,
            _ => return Err(bad(i + 1, "partial accuracy columns")),
        };
        rows.push(SummaryRow {
            method: f[0].to_string(),
            tensor_id: f[1].to_string(),
            n: f[2].parse().map_err(|_| bad(i + 1, "bad n"))?,
            trials: f[3].parse().map_err(|_| bad(i + 1, "bad trials"))?,
            success_rate: num(f[4])?,
            accuracy: acc,
            time: Stats { min: num(f[8])?, max: num(f[9])?, mean: num(f[10])? },
            iters_mean: num(f[11])?,
            b_form: None,
        });
    }
    Ok(rows)
}

/// Aligned Markdown table; `None` when there are no rows.
pub fn emit_markdown(rows: &[SummaryRow]) -> Option<String> {
    if rows.is_empty() {
        return None;
    }
    let triple = |s: Option<Stats>| match s {
        Some(s) => format!("{} / {} / {}", sci(s.min), sci(s.max), sci(s.mean)),
        None => "-".to_string(),
    };
    let header = [
        "Method",
        "Tensor",
        "n",
        "Success rate (%)",
        "Min/Max/Mean accuracy",
        "Min/Max/Mean time (s)",
        "Mean iterations",
        "Min/Max B x^m",
    ];
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.method.clone(),
                r.tensor_id.clone(),
                r.n.to_string(),
                format!("{:.0}", r.success_rate),
                triple(r.accuracy),
                triple(Some(r.time)),
                format!("{:.1}", r.iters_mean),
                match r.b_form {
                    Some(s) => format!("{} / {}", sci(s.min), sci(s.max)),
                    None => "-".to_string(),
                },
            ]
        })
        .collect();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let padded: Vec<String> = cells.zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(&mut header.iter().copied());
    let rule: Vec<String> = width.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for row in &body {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    Some(out)
}

/// Per-trial eigenvalues, one line per record, time last.
pub fn emit_trials_csv(records: &[TrialRecord]) -> String {
    let mut out =
        String::from("method,tensor_id,n,trial,seed,x0_hash,outcome,lambda,accuracy,b_form,iterations,success,wall_time\n");
    for r in records {
        let full = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:016x},{},{},{},{},{},{},{}",
            r.method,
            r.tensor_id,
            r.n,
            r.trial,
            r.seed,
            r.x0_hash,
            r.outcome.name(),
            full(r.outcome.lambda()),
            full(r.accuracy),
            full(r.b_form),
            r.iterations,
            r.success,
            sci(r.wall_time),
        );
    }
    out
}

pub const SUITES: [&str; 7] = ["table1", "table2", "table3", "table4", "table5", "table6", "table7"];

/// Built-in experiment for one of [`SUITES`]. `sizes` overrides the default
/// dimensions of the size-swept suites (`table1`, `table2`).
pub fn suite(name: &str, trials: usize, seed: u64, sizes: Option<&[usize]>) -> Result<ExperimentSpec> {
    let f1_zid = Method::Variational { flavor: Flavor::F1, metric: PsdMetric::Identity, shift: 0.0 };
    let alg1 = |metric, t| Method::PsdCheck { metric, t };
    let psd_four = vec![
        alg1(PsdMetric::Unit, 0.0),
        alg1(PsdMetric::Unit, -1.0),
        alg1(PsdMetric::Identity, 0.0),
        alg1(PsdMetric::Identity, -1.0),
    ];
    let long_sshopm = |alpha| Method::Sshopm { alpha, max_iters: SshopmConfig::for_psd(alpha).max_iters };
    let zero_tol = PsdConfig::default().lambda_zero_tol;
    let default_sizes = [10, 20, 30, 40, 50, 60];
    let sweep = |example: u8| -> Result<Vec<ExampleTensor>> {
        sizes.unwrap_or(&default_sizes).iter().map(|&n| ExampleTensor::new(example, n, seed)).collect()
    };
    let one = |example: u8, n: usize| -> Result<Vec<ExampleTensor>> { Ok(vec![ExampleTensor::new(example, n, seed)?]) };
    let default_sshopm = Method::Sshopm { alpha: -2.0, max_iters: SshopmConfig::default().max_iters };

    let (tensors, methods, success) = match name {
        "table1" => (sweep(1)?, vec![default_sshopm, f1_zid], SuccessRule::default()),
        "table2" => (sweep(2)?, vec![default_sshopm, f1_zid], SuccessRule::default()),
        "table3" => {
            let mut m = vec![f1_zid];
            m.extend(
                [0.0, -1.0, -2.0, -5.0, -10.0, -100.0, -1000.0]
                    .map(|alpha| Method::Sshopm { alpha, max_iters: SshopmConfig::default().max_iters }),
            );
            (one(3, 25)?, m, SuccessRule::default())
        }
        "table4" => {
            let mut m = psd_four;
            m.extend([-2.0, -10.0, -50.0, -100.0, -500.0].map(long_sshopm));
            (one(4, 30)?, m, SuccessRule::NegativeEigenvalue { tol: zero_tol })
        }
        "table5" => {
            let mut m = psd_four;
            m.push(long_sshopm(-2.0));
            (one(5, 3)?, m, SuccessRule::NegativeEigenvalue { tol: zero_tol })
        }
        "table6" => (
            one(6, 30)?,
            vec![alg1(PsdMetric::Unit, -1.0), alg1(PsdMetric::Identity, -1.0)],
            SuccessRule::ZeroEigenvalue { tol: zero_tol },
        ),
        "table7" => (
            one(7, 30)?,
            vec![alg1(PsdMetric::Unit, -1.0), alg1(PsdMetric::Identity, -1.0)],
            SuccessRule::ZeroPoint,
        ),
        _ => {
            return Err(Error::InvalidConfig(format!(
                "unknown suite '{name}' (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    Ok(ExperimentSpec {
        name: name.to_string(),
        tensors,
        trials,
        methods,
        master_seed: seed,
        solver: SolverConfig::default(),
        band: ZeroBand::default(),
        success,
    })
}
