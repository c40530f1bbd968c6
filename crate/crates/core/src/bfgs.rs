//! Full-memory BFGS with a bracketing strong-Wolfe line search.
//!
//! The inverse-Hessian approximation starts at the identity and is rescaled
//! by `s'y / y'y` right before the first update. Updates with
//! `s'y <= 1e-12 ||s|| ||y||` are skipped so the approximation stays positive
//! definite. The line search follows the bracket/zoom scheme of Nocedal and
//! Wright (algorithms 3.5 and 3.6) with safeguarded cubic interpolation.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, norm2, norm_inf};
use crate::variational::Objective;

/// A differentiable objective the solver can minimize.
pub trait SmoothObjective {
    fn dim(&self) -> usize;
    /// Returns the value and writes the gradient into `grad`.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

impl SmoothObjective for Objective<'_> {
    fn dim(&self) -> usize {
        Objective::dim(self)
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self.eval_into(x, grad)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Infinity-norm gradient tolerance.
    pub grad_tol: f64,
    /// Joint step / function-change tolerance.
    pub step_tol: f64,
    pub max_iter: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    /// Function evaluations allowed per line search.
    pub max_line_search_steps: usize,
    pub seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            step_tol: 1e-12,
            max_iter: 1000,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            max_line_search_steps: 40,
            seed: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.wolfe_c1 > 0.0 && self.wolfe_c1 < self.wolfe_c2 && self.wolfe_c2 < 1.0) {
            return bad("Wolfe constants must satisfy 0 < c1 < c2 < 1");
        }
        if !(self.grad_tol > 0.0 && self.step_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_iter == 0 || self.max_line_search_steps == 0 {
            return bad("iteration limits must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    GradTol,
    StepTol,
    MaxIter,
    LineSearchFail,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_grad_norm: f64,
    pub objective_value: f64,
    pub termination: Termination,
    pub x: Vec<f64>,
    /// Seconds.
    pub wall_time: f64,
}

/// Draws `y ~ N(0, I_n)` and returns `y / ||y||_2`.
pub fn normalized_random_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let y: Vec<f64> = (0..n).map(|_| crate::generators::standard_normal(rng)).collect();
        let nrm = norm2(&y);
        if nrm > 0.0 {
            return y.into_iter().map(|v| v / nrm).collect();
        }
    }
}

struct Probe {
    alpha: f64,
    f: f64,
    /// Directional derivative along the search direction.
    df: f64,
    x: Vec<f64>,
    g: Vec<f64>,
}

struct LineSearch<'p, F: SmoothObjective + ?Sized> {
    obj: &'p F,
    x: &'p [f64],
    p: &'p [f64],
    f0: f64,
    df0: f64,
    c1: f64,
    c2: f64,
    budget: usize,
}

impl<F: SmoothObjective + ?Sized> LineSearch<'_, F> {
    fn probe(&mut self, alpha: f64) -> Probe {
        self.budget = self.budget.saturating_sub(1);
        let x: Vec<f64> = self.x.iter().zip(self.p).map(|(xi, pi)| xi + alpha * pi).collect();
        let mut g = vec![0.0; x.len()];
        let f = self.obj.eval(&x, &mut g);
        let df = dot(&g, self.p);
        Probe { alpha, f, df, x, g }
    }

    fn finite(pr: &Probe) -> bool {
        pr.f.is_finite() && pr.df.is_finite() && all_finite(&pr.g)
    }

    /// Armijo, or its approximate (slope-based) form, which still holds when
    /// the decrease is below what `f` can resolve: the value may not rise
    /// beyond rounding and the slope must still be at most `(2 c1 - 1) df0`.
    fn armijo(&self, pr: &Probe) -> bool {
        pr.f <= self.f0 + self.c1 * pr.alpha * self.df0
            || (pr.f <= self.f0 + self.noise() && pr.df <= (2.0 * self.c1 - 1.0) * self.df0)
    }

    /// Rounding level of an objective evaluation near `f0`.
    fn noise(&self) -> f64 {
        4.0 * f64::EPSILON * self.f0.abs()
    }

    /// No acceptable point can be told apart from `f0` at this step length.
    fn unresolvable(&self, pr: &Probe) -> bool {
        !self.armijo(pr) && -pr.alpha * self.df0 <= 4.0 * f64::EPSILON * self.f0.abs()
    }

    fn curvature(&self, pr: &Probe) -> bool {
        pr.df.abs() <= -self.c2 * self.df0
    }

    fn search(&mut self, alpha0: f64) -> Option<Probe> {
        let mut prev = Probe {
            alpha: 0.0,
            f: self.f0,
            df: self.df0,
            x: self.x.to_vec(),
            g: Vec::new(),
        };
        let mut alpha = alpha0;
        let mut first = true;
        while self.budget > 0 {
            let cur = self.probe(alpha);
            if !Self::finite(&cur) {
                return self.zoom(prev, cur, true);
            }
            if !self.armijo(&cur) || (!first && (cur.f > prev.f || (cur.f == prev.f && cur.df >= 0.0))) {
                return self.zoom(prev, cur, false);
            }
            if self.curvature(&cur) {
                return Some(cur);
            }
            if cur.df >= 0.0 {
                return self.zoom(cur, prev, false);
            }
            first = false;
            alpha = cur.alpha * 2.0;
            prev = cur;
        }
        None
    }

    /// `lo` satisfies Armijo and has the lower value; the minimizer lies
    /// between `lo` and `hi`.
    fn zoom(&mut self, mut lo: Probe, mut hi: Probe, mut hi_bad: bool) -> Option<Probe> {
        while self.budget > 0 {
            let (a, b) = (lo.alpha.min(hi.alpha), lo.alpha.max(hi.alpha));
            let width = b - a;
            if width <= f64::EPSILON * b.max(1e-300) {
                return None;
            }
            let trial = if hi_bad {
                0.5 * (lo.alpha + hi.alpha)
            } else {
                let c = if hi.f > lo.f {
                    quadratic_min(&lo, &hi)
                } else {
                    cubic_min(&lo, &hi)
                };
                c.unwrap_or(0.5 * (lo.alpha + hi.alpha)).clamp(a + 0.1 * width, b - 0.1 * width)
            };
            let cur = self.probe(trial);
            if Self::finite(&cur) && self.unresolvable(&cur) {
                return None;
            }
            if !Self::finite(&cur) {
                hi = cur;
                hi_bad = true;
                continue;
            }
            if !self.armijo(&cur) || cur.f > lo.f || (cur.f == lo.f && cur.df >= 0.0) {
                hi = cur;
                hi_bad = false;
            } else {
                if self.curvature(&cur) {
                    return Some(cur);
                }
                if cur.df * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                    hi_bad = false;
                }
                lo = cur;
            }
        }
        None
    }
}

/// Minimizer of the quadratic matching value and slope at `p` and the value
/// at `q`. Robust when `q.f` is far above the cubic model.
fn quadratic_min(p: &Probe, q: &Probe) -> Option<f64> {
    let w = q.alpha - p.alpha;
    let curv = q.f - p.f - p.df * w;
    if !(curv > 0.0) {
        return None;
    }
    let r = p.alpha - p.df * w * w / (2.0 * curv);
    r.is_finite().then_some(r)
}

/// Minimizer of the cubic interpolating value and slope at two points.
fn cubic_min(p: &Probe, q: &Probe) -> Option<f64> {
    let (a0, f0, d0) = (p.alpha, p.f, p.df);
    let (a1, f1, d1) = (q.alpha, q.f, q.df);
    let d1_ = d0 + d1 - 3.0 * (f0 - f1) / (a0 - a1);
    let disc = d1_ * d1_ - d0 * d1;
    if disc < 0.0 {
        return None;
    }
    let d2 = (a1 - a0).signum() * disc.sqrt();
    let denom = d1 - d0 + 2.0 * d2;
    if denom == 0.0 {
        return None;
    }
    let r = a1 - (a1 - a0) * (d1 + d2 - d1_) / denom;
    r.is_finite().then_some(r)
}

/// Dense symmetric inverse-Hessian approximation, row-major.
struct InverseHessian {
    n: usize,
    h: Vec<f64>,
    updated: bool,
}

impl InverseHessian {
    fn identity(n: usize) -> Self {
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            h[i * n + i] = 1.0;
        }
        Self { n, h, updated: false }
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.h.chunks_exact(self.n).map(|row| dot(row, v)).collect()
    }

    /// BFGS update; returns false when the curvature condition fails and the
    /// update is skipped.
    fn update(&mut self, s: &[f64], y: &[f64]) -> bool {
        let sy = dot(s, y);
        if sy <= 1e-12 * norm2(s) * norm2(y) {
            return false;
        }
        if !self.updated {
            let gamma = sy / dot(y, y);
            self.h.iter_mut().for_each(|v| *v *= gamma);
            self.updated = true;
        }
        let rho = 1.0 / sy;
        let hy = self.apply(y);
        let yhy = dot(y, &hy);
        let coef = rho * rho * yhy + rho;
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.h[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
            }
        }
        true
    }
}

/// Minimizes `obj` from `x0`.
///
/// Errors only if the configuration is invalid, `x0` has the wrong length, or
/// the objective is not finite at `x0`. All other outcomes are reported
/// through [`SolveReport::termination`]; the returned point is always the
/// last accepted iterate.
pub fn minimize<F: SmoothObjective + ?Sized>(obj: &F, x0: &[f64], cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    crate::error::check_len(obj.dim(), x0.len())?;
    let start = Instant::now();
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut f = obj.eval(&x, &mut g);
    if !f.is_finite() || !all_finite(&g) {
        return Err(Error::NonFiniteStart);
    }
    let mut hinv = InverseHessian::identity(n);
    let mut iterations = 0;

    let termination = loop {
        if norm_inf(&g) <= cfg.grad_tol {
            break Termination::GradTol;
        }
        if iterations >= cfg.max_iter {
            break Termination::MaxIter;
        }

        let mut p: Vec<f64> = hinv.apply(&g).into_iter().map(|v| -v).collect();
        let mut df0 = dot(&g, &p);
        if !(df0 < 0.0) {
            hinv = InverseHessian::identity(n);
            p = g.iter().map(|v| -v).collect();
            df0 = -dot(&g, &g);
        }
        let alpha0 = if hinv.updated { 1.0 } else { (1.0 / norm_inf(&g)).min(1.0) };

        let mut ls = LineSearch {
            obj,
            x: &x,
            p: &p,
            f0: f,
            df0,
            c1: cfg.wolfe_c1,
            c2: cfg.wolfe_c2,
            budget: cfg.max_line_search_steps,
        };
        let Some(step) = ls.search(alpha0) else {
            break Termination::LineSearchFail;
        };
        debug_assert!(ls.armijo(&step), "sufficient decrease violated");
        debug_assert!(step.df.abs() <= -cfg.wolfe_c2 * df0, "curvature violated");

        iterations += 1;
        let s: Vec<f64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let df = f - step.f;
        let small_step = norm_inf(&s) <= cfg.step_tol * (1.0 + norm_inf(&x))
            && df.abs() <= cfg.step_tol * (1.0 + f.abs());

        hinv.update(&s, &y);

        x = step.x;
        g = step.g;
        f = step.f;

        if small_step {
            break if norm_inf(&g) <= cfg.grad_tol {
                Termination::GradTol
            } else {
                Termination::StepTol
            };
        }
    };

    Ok(SolveReport {
        iterations,
        final_grad_norm: norm_inf(&g),
        objective_value: f,
        termination,
        x,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Rosenbrock;

    impl SmoothObjective for Rosenbrock {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, x: &[f64], g: &mut [f64]) -> f64 {
            let (a, b) = (1.0, 100.0);
            g[0] = -2.0 * (a - x[0]) - 4.0 * b * (x[1] - x[0] * x[0]) * x[0];
            g[1] = 2.0 * b * (x[1] - x[0] * x[0]);
            (a - x[0]).powi(2) + b * (x[1] - x[0] * x[0]).powi(2)
        }
    }

    struct Blowup;

    impl SmoothObjective for Blowup {
        fn dim(&self) -> usize {
            1
        }
        fn eval(&self, x: &[f64], g: &mut [f64]) -> f64 {
            g[0] = f64::NAN;
            x[0]
        }
    }

    /// Records every evaluated value so monotonicity can be checked.
    struct Recording<'a> {
        inner: &'a dyn SmoothObjective,
        trace: std::cell::RefCell<Vec<f64>>,
    }

    impl SmoothObjective for Recording<'_> {
        fn dim(&self) -> usize {
            self.inner.dim()
        }
        fn eval(&self, x: &[f64], g: &mut [f64]) -> f64 {
            let f = self.inner.eval(x, g);
            self.trace.borrow_mut().push(f);
            f
        }
    }

    #[test]
    fn rosenbrock_converges() {
        let r = minimize(&Rosenbrock, &[-1.2, 1.0], &SolverConfig::default()).unwrap();
        assert_eq!(r.termination, Termination::GradTol);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] - 1.0).abs() < 1e-8);
        assert!(r.final_grad_norm <= 1e-10);
    }

    #[test]
    fn objective_values_never_increase() {
        let rec = Recording {
            inner: &Rosenbrock,
            trace: Default::default(),
        };
        let r = minimize(&rec, &[-1.2, 1.0], &SolverConfig::default()).unwrap();
        assert!(r.objective_value <= rec.trace.borrow()[0]);
        assert!(r.objective_value <= 24.2);
    }

    #[test]
    fn non_finite_start_is_an_error() {
        assert!(matches!(
            minimize(&Blowup, &[0.0], &SolverConfig::default()),
            Err(Error::NonFiniteStart)
        ));
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = SolverConfig {
            wolfe_c1: 0.95,
            ..Default::default()
        };
        assert!(minimize(&Rosenbrock, &[0.0, 0.0], &cfg).is_err());
        let cfg = SolverConfig {
            max_iter: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(minimize(&Rosenbrock, &[0.0], &SolverConfig::default()).is_err());
    }

    #[test]
    fn max_iter_is_reported() {
        let cfg = SolverConfig {
            max_iter: 3,
            ..Default::default()
        };
        let r = minimize(&Rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        assert_eq!(r.termination, Termination::MaxIter);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn random_start_is_unit_and_deterministic() {
        for seed in 0..20u64 {
            let x = normalized_random_start(7, &mut ChaCha8Rng::seed_from_u64(seed));
            assert!((norm2(&x) - 1.0).abs() <= 1e-15);
            let y = normalized_random_start(7, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(x, y);
        }
        let a = normalized_random_start(5, &mut ChaCha8Rng::seed_from_u64(1));
        let b = normalized_random_start(5, &mut ChaCha8Rng::seed_from_u64(2));
        assert_ne!(a, b);
    }

    #[test]
    fn cubic_interpolation_finds_quadratic_minimum() {
        // phi(a) = (a - 0.3)^2
        let mk = |a: f64| Probe {
            alpha: a,
            f: (a - 0.3).powi(2),
            df: 2.0 * (a - 0.3),
            x: vec![],
            g: vec![],
        };
        let m = cubic_min(&mk(0.0), &mk(1.0)).unwrap();
        assert!((m - 0.3).abs() < 1e-12);
    }
}
