//! Shifted symmetric higher-order power method for Z-eigenpairs.
//!
//! Iterates on the unit sphere:
//!
//! ```text
//! lambda_k = A x_k^m
//! y        = A x_k^{m-1} + alpha x_k      (negated when alpha < 0)
//! x_{k+1}  = y / ||y||_2
//! ```
//!
//! and stops once `|lambda_{k+1} - lambda_k| <= tol` or after `max_iters`
//! updates. A negative shift orients the iteration toward local minima of
//! `A x^m` on the sphere, a positive one toward local maxima.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm2};
use crate::metric::BOperator;
use crate::tensor::{Eigenpair, SymmetricTensor};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SshopmConfig {
    pub alpha: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SshopmConfig {
    fn default() -> Self {
        Self {
            alpha: -2.0,
            tol: 1e-12,
            max_iters: 5000,
        }
    }
}

impl SshopmConfig {
    /// Settings used for positive semidefiniteness comparisons.
    pub fn for_psd(alpha: f64) -> Self {
        Self {
            alpha,
            tol: 1e-12,
            max_iters: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iters == 0 || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig(
                "sshopm needs tol > 0, max_iters >= 1 and a finite shift".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SshopmResult {
    /// Last iterate, on the unit sphere, with its Z-residual.
    pub eigenpair: Eigenpair,
    pub iterations: usize,
    /// True if the eigenvalue-change tolerance ended the run.
    pub converged: bool,
}

/// Runs the method from a unit-norm start.
pub fn sshopm_run(a: &SymmetricTensor, x0: &[f64], cfg: &SshopmConfig) -> Result<SshopmResult> {
    sshopm_trace(a, x0, cfg, |_, _| {})
}

/// As [`sshopm_run`], calling `observe(lambda_k, x_k)` on every iterate.
pub fn sshopm_trace(
    a: &SymmetricTensor,
    x0: &[f64],
    cfg: &SshopmConfig,
    mut observe: impl FnMut(f64, &[f64]),
) -> Result<SshopmResult> {
    cfg.validate()?;
    check_len(a.dim(), x0.len())?;
    if (norm2(x0) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidConfig("sshopm start must have unit 2-norm".into()));
    }
    let metric = BOperator::identity_power(a.order(), a.dim())?;
    let mut x = x0.to_vec();
    let mut ax = a.contract_unchecked(&x);
    let mut lambda = dot(&x, &ax);
    observe(lambda, &x);
    let flip = if cfg.alpha < 0.0 { -1.0 } else { 1.0 };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        let y: Vec<f64> = ax.iter().zip(&x).map(|(p, q)| flip * (p + cfg.alpha * q)).collect();
        let nrm = norm2(&y);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::ShiftAnnihilated);
        }
        x = y.into_iter().map(|v| v / nrm).collect();
        ax = a.contract_unchecked(&x);
        let next = dot(&x, &ax);
        iterations += 1;
        observe(next, &x);
        let delta = (next - lambda).abs();
        lambda = next;
        if delta <= cfg.tol {
            converged = true;
            break;
        }
    }

    let eigenpair = Eigenpair::on_unit_sphere(a, &metric, lambda, &x)?;
    Ok(SshopmResult {
        eigenpair,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfgs::normalized_random_start;
    use crate::generators::{example1, example5, example7, rng_from_seed};
    use crate::tensor::residual;

    #[test]
    fn diagonal_fixed_point() {
        let a = example7(30).unwrap();
        let mut x0 = vec![0.0; 30];
        x0[29] = 1.0;
        let r = sshopm_run(&a, &x0, &SshopmConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.eigenpair.lambda, 300.0);
        assert_eq!(r.eigenpair.residual, 0.0);
    }

    #[test]
    fn example1_random_starts() {
        let a = example1(10).unwrap();
        for seed in 0..5 {
            let x0 = normalized_random_start(10, &mut rng_from_seed(seed));
            let r = sshopm_run(&a, &x0, &SshopmConfig::default()).unwrap();
            assert!(r.converged);
            assert!(r.eigenpair.residual <= 1e-5, "residual {}", r.eigenpair.residual);
        }
    }

    #[test]
    fn unit_sphere_maintained() {
        let a = example1(5).unwrap();
        let x0 = normalized_random_start(5, &mut rng_from_seed(4));
        sshopm_trace(&a, &x0, &SshopmConfig::default(), |_, x| {
            assert!((norm2(x) - 1.0).abs() <= 1e-14);
        })
        .unwrap();
    }

    #[test]
    fn example5_stalls_near_zero() {
        let a = example5();
        let x0 = normalized_random_start(3, &mut rng_from_seed(17));
        let r = sshopm_run(&a, &x0, &SshopmConfig::for_psd(-2.0)).unwrap();
        assert!(r.iterations > 100);
        assert!(r.eigenpair.lambda.abs() < 1e-2);
    }

    #[test]
    fn monotone_with_large_negative_shift() {
        let mut rng = rng_from_seed(99);
        for n in 2..=3 {
            let raw: Vec<f64> = (0..n * n * n * n)
                .map(|_| crate::generators::standard_normal(&mut rng))
                .collect();
            let a = crate::tensor::symmetrize(4, n, &raw).unwrap();
            let amax = a.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let alpha = -3.0 * amax * (n as f64).powi(3);
            let x0 = normalized_random_start(n, &mut rng);
            let mut last = f64::INFINITY;
            sshopm_trace(&a, &x0, &SshopmConfig { alpha, tol: 1e-14, max_iters: 2000 }, |lam, _| {
                assert!(lam <= last + 1e-12, "{lam} > {last}");
                last = lam;
            })
            .unwrap();
        }
    }

    #[test]
    fn fixed_point_implies_eigenpair() {
        let a = example1(4).unwrap();
        let b = BOperator::identity_power(4, 4).unwrap();
        let x0 = normalized_random_start(4, &mut rng_from_seed(2));
        let mut prev: Option<Vec<f64>> = None;
        sshopm_trace(&a, &x0, &SshopmConfig { tol: 1e-15, ..Default::default() }, |lam, x| {
            if let Some(p) = &prev {
                let step = p.iter().zip(x).fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()));
                if step <= 1e-13 {
                    assert!(residual(&a, &b, lam, x).unwrap() <= 1e-8);
                }
            }
            prev = Some(x.to_vec());
        })
        .unwrap();
    }

    #[test]
    fn annihilating_shift_is_an_error() {
        // A x^3 = x on the sphere for the identity-power tensor, so alpha = -1 zeroes y
        let a = BOperator::identity_power(4, 2).unwrap().to_dense().unwrap();
        let r = sshopm_run(&a, &[1.0, 0.0], &SshopmConfig { alpha: -1.0, ..Default::default() });
        assert!(matches!(r, Err(Error::ShiftAnnihilated)));
    }

    #[test]
    fn rejects_non_unit_start() {
        let a = example1(3).unwrap();
        assert!(sshopm_run(&a, &[1.0, 1.0, 0.0], &SshopmConfig::default()).is_err());
    }
}
