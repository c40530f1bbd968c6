//! Positive (semi)definiteness of even-order symmetric tensors by minimizing
//! the shifted objective `s1(x, t)` from random starts.
//!
//! One trial: draw a unit start, minimize `s1(·, t)` with BFGS and read the
//! result through `B x̃^m`:
//!
//! * `B x̃^m < eta1`: the solver fell into the zero critical point, a vote for
//!   positive definiteness;
//! * `B x̃^m > eta2`: `lambda = -sqrt(-2m s̃) - t` is an eigenvalue of `A`.
//!   A negative value is a checkable certificate that `A` is not PSD;
//! * otherwise the trial is inconclusive and is retried with the next shift.
//!
//! Only a `NotPsd` verdict is certified. `PositiveDefinite` and
//! `PositiveSemidefinite` summarize the local solves and are not proofs.

use rayon::prelude::*;
use serde::Serialize;

use crate::bfgs::{minimize, normalized_random_start, SolverConfig, Termination};
use crate::error::{Error, Result};
use crate::generators::{child_seed, rng_from_seed};
use crate::metric::{BOperator, MetricTag};
use crate::tensor::{Eigenpair, SymmetricTensor};
use crate::variational::{Flavor, Objective};

/// Residual a negative-eigenvalue witness must meet.
pub const WITNESS_RESIDUAL: f64 = 1e-6;

/// Largest positive objective value treated as roundoff and clamped to zero.
const VALUE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PsdMetric {
    /// `B = δ` (H-eigenvalues).
    Unit,
    /// `B = I^{m/2}` (Z-eigenvalues).
    Identity,
}

impl PsdMetric {
    pub fn build(self, order: usize, dim: usize) -> Result<BOperator> {
        match self {
            PsdMetric::Unit => BOperator::unit(order, dim),
            PsdMetric::Identity => BOperator::identity_power(order, dim),
        }
    }

    pub fn tag(self) -> MetricTag {
        match self {
            PsdMetric::Unit => MetricTag::UnitTensor,
            PsdMetric::Identity => MetricTag::IdentityPower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdConfig {
    pub t: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub metric: PsdMetric,
    pub trials: usize,
    /// Shifts tried in order after an inconclusive solve.
    pub retry_shifts: Vec<f64>,
    pub lambda_zero_tol: f64,
    pub solver: SolverConfig,
    pub seed: u64,
}

impl Default for PsdConfig {
    fn default() -> Self {
        Self {
            t: -1.0,
            eta1: 1e-10,
            eta2: 1e-4,
            metric: PsdMetric::Unit,
            trials: 100,
            retry_shifts: vec![-1.0, -2.0, -5.0],
            lambda_zero_tol: 1e-8,
            solver: SolverConfig::default(),
            seed: 0,
        }
    }
}

impl PsdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta1 > 0.0 && self.eta1 < self.eta2) {
            return Err(Error::InvalidConfig("need 0 < eta1 < eta2".into()));
        }
        if !(self.lambda_zero_tol >= 0.0) || !self.t.is_finite() {
            return Err(Error::InvalidConfig("bad shift or zero tolerance".into()));
        }
        if self.retry_shifts.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig("retry shifts must be finite".into()));
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    PositiveDefinite,
    PositiveSemidefinite,
    NotPsd,
    Inconclusive,
}

impl Decision {
    pub fn describe(self) -> &'static str {
        match self {
            Decision::PositiveDefinite => "positive definite (non-certified)",
            Decision::PositiveSemidefinite => "positive semidefinite (non-certified)",
            Decision::NotPsd => "NOT positive semidefinite",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

/// What a single trial concluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TrialVote {
    /// Solver reached the zero critical point.
    PositiveDefinite,
    /// Found eigenvalue `|lambda| <= lambda_zero_tol`.
    ZeroEigenvalue,
    /// Found a positive eigenvalue; by the decision rule `A` is PSD.
    PositiveEigenvalue,
    /// Found a verified negative eigenvalue.
    NegativeEigenvalue,
    /// All shifts exhausted without a conclusive point.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdTrial {
    pub index: usize,
    pub vote: TrialVote,
    /// Shift of the solve that produced the vote.
    pub shift: f64,
    pub b_form: f64,
    pub objective_value: f64,
    /// `-sqrt(-2m s̃) - t`, when defined.
    pub lambda_value_route: Option<f64>,
    /// `-B x̃^m - t`.
    pub lambda_algebraic: Option<f64>,
    pub eigenpair: Option<Eigenpair>,
    pub solves: usize,
    pub iterations: usize,
    pub termination: Termination,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VoteCounts {
    pub positive_definite: usize,
    pub zero_eigenvalue: usize,
    pub positive_eigenvalue: usize,
    pub negative_eigenvalue: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdVerdict {
    pub decision: Decision,
    pub witness: Option<Eigenpair>,
    pub trials_run: usize,
    pub counts: VoteCounts,
    pub b_form_min: f64,
    pub b_form_max: f64,
    pub trials: Vec<PsdTrial>,
}

/// Runs trial `index`: its start vector comes from `child_seed(cfg.seed, index)`.
pub fn psd_trial(a: &SymmetricTensor, cfg: &PsdConfig, index: usize) -> Result<PsdTrial> {
    let mut rng = rng_from_seed(child_seed(cfg.seed, index as u64));
    let x0 = normalized_random_start(a.dim(), &mut rng);
    psd_trial_from(a, cfg, index, &x0)
}

/// Runs one trial from a caller-supplied start.
pub fn psd_trial_from(a: &SymmetricTensor, cfg: &PsdConfig, index: usize, x0: &[f64]) -> Result<PsdTrial> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let b = cfg.metric.build(a.order(), a.dim())?;
    let m = a.order() as f64;
    let mut iterations = 0;
    let mut wall_time = 0.0;
    let shifts = std::iter::once(cfg.t).chain(cfg.retry_shifts.iter().copied());
    let mut last = None;

    for (solves, shift) in shifts.enumerate() {
        let obj = Objective::new(Flavor::F1, shift, a, &b)?;
        let report = minimize(&obj, x0, &cfg.solver)?;
        iterations += report.iterations;
        wall_time += report.wall_time;
        let bf = b.form(&report.x)?;
        let s = report.objective_value;
        let mut trial = PsdTrial {
            index,
            vote: TrialVote::Inconclusive,
            shift,
            b_form: bf,
            objective_value: s,
            lambda_value_route: None,
            lambda_algebraic: None,
            eigenpair: None,
            solves: solves + 1,
            iterations,
            termination: report.termination,
            wall_time,
        };

        if bf < cfg.eta1 {
            trial.vote = TrialVote::PositiveDefinite;
            return Ok(trial);
        }
        if bf > cfg.eta2 && s <= VALUE_CLAMP {
            let s = s.min(0.0);
            let lambda = -(-2.0 * m * s).sqrt() - shift;
            let pair = obj.recover_lambda_with(&report.x, cfg.eta1)?;
            trial.lambda_value_route = Some(lambda);
            trial.lambda_algebraic = Some(pair.lambda);
            let vote = if lambda < -cfg.lambda_zero_tol {
                // a witness must check out against A itself
                (pair.residual <= WITNESS_RESIDUAL && pair.lambda < -cfg.lambda_zero_tol)
                    .then_some(TrialVote::NegativeEigenvalue)
            } else if lambda <= cfg.lambda_zero_tol {
                Some(TrialVote::ZeroEigenvalue)
            } else {
                Some(TrialVote::PositiveEigenvalue)
            };
            trial.eigenpair = Some(pair);
            if let Some(vote) = vote {
                trial.vote = vote;
                return Ok(trial);
            }
        }
        last = Some(trial);
    }
    Ok(last.expect("at least one shift is always tried"))
}

/// Multi-start decision. Trials run in parallel batches; the first
/// negative-eigenvalue witness in trial-index order ends the run.
pub fn psd_check(a: &SymmetricTensor, cfg: &PsdConfig) -> Result<PsdVerdict> {
    cfg.validate()?;
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let batch = rayon::current_num_threads().max(1);
    let mut trials: Vec<PsdTrial> = Vec::with_capacity(cfg.trials);
    let mut next = 0;
    while next < cfg.trials {
        let end = (next + batch).min(cfg.trials);
        let mut chunk = (next..end)
            .into_par_iter()
            .map(|i| psd_trial(a, cfg, i))
            .collect::<Result<Vec<_>>>()?;
        if let Some(pos) = chunk.iter().position(|t| t.vote == TrialVote::NegativeEigenvalue) {
            chunk.truncate(pos + 1);
            trials.extend(chunk);
            break;
        }
        trials.extend(chunk);
        next = end;
    }
    Ok(aggregate(trials))
}

/// Folds trial outcomes into a verdict.
pub fn aggregate(trials: Vec<PsdTrial>) -> PsdVerdict {
    let mut counts = VoteCounts::default();
    for t in &trials {
        match t.vote {
            TrialVote::PositiveDefinite => counts.positive_definite += 1,
            TrialVote::ZeroEigenvalue => counts.zero_eigenvalue += 1,
            TrialVote::PositiveEigenvalue => counts.positive_eigenvalue += 1,
            TrialVote::NegativeEigenvalue => counts.negative_eigenvalue += 1,
            TrialVote::Inconclusive => counts.inconclusive += 1,
        }
    }
    let first_with = |vote: TrialVote| {
        trials
            .iter()
            .find(|t| t.vote == vote)
            .and_then(|t| t.eigenpair.clone())
    };
    let (decision, witness) = if counts.negative_eigenvalue > 0 {
        (Decision::NotPsd, first_with(TrialVote::NegativeEigenvalue))
    } else if counts.zero_eigenvalue > 0 {
        (Decision::PositiveSemidefinite, first_with(TrialVote::ZeroEigenvalue))
    } else if counts.positive_eigenvalue > 0 {
        (Decision::PositiveSemidefinite, first_with(TrialVote::PositiveEigenvalue))
    } else if counts.positive_definite > 0 && counts.inconclusive == 0 {
        (Decision::PositiveDefinite, None)
    } else {
        (Decision::Inconclusive, None)
    };
    let b_form_min = trials.iter().map(|t| t.b_form).fold(f64::INFINITY, f64::min);
    let b_form_max = trials.iter().map(|t| t.b_form).fold(f64::NEG_INFINITY, f64::max);
    PsdVerdict {
        decision,
        witness,
        trials_run: trials.len(),
        counts,
        b_form_min,
        b_form_max,
        trials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{example5, example6, example7};
    use crate::tensor::residual;

    fn cfg(metric: PsdMetric, trials: usize) -> PsdConfig {
        PsdConfig {
            metric,
            trials,
            seed: 12,
            ..Default::default()
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = SymmetricTensor::from_values(2, 2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(psd_check(&a, &cfg(PsdMetric::Unit, 1)), Err(Error::NotSymmetric)));
    }

    #[test]
    fn bad_config_rejected() {
        let a = example5();
        let mut c = cfg(PsdMetric::Unit, 1);
        c.eta1 = 1e-3;
        assert!(psd_check(&a, &c).is_err());
    }

    #[test]
    fn positive_definite_diagonal() {
        let a = example7(6).unwrap();
        for metric in [PsdMetric::Unit, PsdMetric::Identity] {
            let v = psd_check(&a, &cfg(metric, 10)).unwrap();
            assert_eq!(v.decision, Decision::PositiveDefinite);
            assert_eq!(v.counts.positive_definite, 10);
            assert!(v.b_form_max < 1e-10);
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn semidefinite_diagonal_finds_zero_eigenvalue() {
        let a = example6(6, 4).unwrap();
        for metric in [PsdMetric::Unit, PsdMetric::Identity] {
            let v = psd_check(&a, &cfg(metric, 10)).unwrap();
            assert_eq!(v.decision, Decision::PositiveSemidefinite);
            assert!(v.witness.unwrap().lambda.abs() <= 1e-6);
            for t in &v.trials {
                assert!(t.lambda_value_route.unwrap().abs() <= 1e-8);
            }
            for t in &v.trials {
                assert!((t.b_form - 1.0).abs() <= 1e-4);
                let (p, q) = (t.lambda_value_route.unwrap(), t.lambda_algebraic.unwrap());
                assert!((p - q).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn not_psd_witness_is_checkable() {
        let a = example5();
        for metric in [PsdMetric::Unit, PsdMetric::Identity] {
            let v = psd_check(&a, &cfg(metric, 20)).unwrap();
            assert_eq!(v.decision, Decision::NotPsd);
            let w = v.witness.unwrap();
            assert!(w.lambda < -1e-8);
            let b = metric.build(4, 3).unwrap();
            let r = residual(&a, &b, w.lambda, &w.x).unwrap();
            assert!(r <= WITNESS_RESIDUAL);
            assert_eq!(v.trials_run, v.trials.len());
            assert_eq!(v.trials.last().unwrap().vote, TrialVote::NegativeEigenvalue);
        }
    }

    #[test]
    fn zero_tensor_is_semidefinite() {
        let a = SymmetricTensor::zeros(4, 3).unwrap();
        let v = psd_check(&a, &cfg(PsdMetric::Identity, 5)).unwrap();
        assert_eq!(v.decision, Decision::PositiveSemidefinite);
        assert!(v.witness.unwrap().lambda.abs() <= 1e-8);
    }

    #[test]
    fn single_witness_decides() {
        let mk = |vote, b_form| PsdTrial {
            index: 0,
            vote,
            shift: -1.0,
            b_form,
            objective_value: 0.0,
            lambda_value_route: None,
            lambda_algebraic: None,
            eigenpair: None,
            solves: 1,
            iterations: 0,
            termination: Termination::GradTol,
            wall_time: 0.0,
        };
        let v = aggregate(vec![
            mk(TrialVote::PositiveDefinite, 0.0),
            mk(TrialVote::ZeroEigenvalue, 1.0),
            mk(TrialVote::NegativeEigenvalue, 2.0),
        ]);
        assert_eq!(v.decision, Decision::NotPsd);
        let v = aggregate(vec![mk(TrialVote::PositiveDefinite, 0.0), mk(TrialVote::Inconclusive, 1e-6)]);
        assert_eq!(v.decision, Decision::Inconclusive);
        let v = aggregate(vec![]);
        assert_eq!(v.decision, Decision::Inconclusive);
    }
}
