//! Unconstrained variational objectives for extreme generalized eigenvalues.
//!
//! With `b(x) = B x^m` and `a(x) = A x^m`,
//!
//! ```text
//! s1(x, t) = b(x)^2 / (2m) + (a(x) + t b(x)) / m
//! s2(x, t) = b(x)^2 / (2m) - (a(x) + t b(x)) / m
//! ```
//!
//! and `t = 0` gives the unshifted `f1`, `f2`. Nonzero critical points of `s1`
//! are eigenvectors of `A + tB` for the eigenvalue `-b(x)`; those of `s2` are
//! eigenvectors for `+b(x)`. The global minimum of `s1` is
//! `-(lambda_min + t)^2 / (2m)` whenever `lambda_min + t < 0`.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::dot;
use crate::metric::BOperator;
use crate::tensor::{Eigenpair, SymmetricTensor};

/// Sign of the `A` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    /// `+ (A + tB) x^m / m`: finds negative eigenvalues, minimum first.
    F1,
    /// `- (A + tB) x^m / m`: finds positive eigenvalues, maximum first.
    F2,
}

impl Flavor {
    fn sign(self) -> f64 {
        match self {
            Flavor::F1 => 1.0,
            Flavor::F2 => -1.0,
        }
    }
}

/// Thresholds on `B x^m` separating the zero critical point from
/// eigenvector critical points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroBand {
    pub eta1: f64,
    pub eta2: f64,
}

impl Default for ZeroBand {
    fn default() -> Self {
        Self { eta1: 1e-10, eta2: 1e-4 }
    }
}

/// Relative tolerance for the dual eigenvalue recovery cross-check.
const RECOVERY_TOL: f64 = 1e-6;

/// A shifted objective `s1`/`s2` over a tensor `A` and metric `B`.
#[derive(Debug, Clone, Copy)]
pub struct Objective<'a> {
    flavor: Flavor,
    shift: f64,
    a: &'a SymmetricTensor,
    b: &'a BOperator,
}

/// Classification of a point returned by a local solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    /// `B x^m < eta1`.
    ZeroPoint,
    /// `B x^m > eta2`.
    EigenpairPoint,
    /// `eta1 <= B x^m <= eta2`; never coerced either way.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub grad_norm: f64,
    pub b_form: f64,
    pub classification: PointClass,
    pub recovered: Option<Eigenpair>,
}

impl<'a> Objective<'a> {
    pub fn new(flavor: Flavor, shift: f64, a: &'a SymmetricTensor, b: &'a BOperator) -> Result<Self> {
        if a.order() != b.order() || a.dim() != b.dim() {
            return Err(Error::ShapeMismatch {
                a_order: a.order(),
                a_dim: a.dim(),
                b_order: b.order(),
                b_dim: b.dim(),
            });
        }
        if !shift.is_finite() {
            return Err(Error::InvalidConfig(format!("shift must be finite, got {shift}")));
        }
        Ok(Self { flavor, shift, a, b })
    }

    pub fn f1(a: &'a SymmetricTensor, b: &'a BOperator) -> Result<Self> {
        Self::new(Flavor::F1, 0.0, a, b)
    }

    pub fn f2(a: &'a SymmetricTensor, b: &'a BOperator) -> Result<Self> {
        Self::new(Flavor::F2, 0.0, a, b)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn tensor(&self) -> &'a SymmetricTensor {
        self.a
    }

    pub fn metric(&self) -> &'a BOperator {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    fn order_f(&self) -> f64 {
        self.a.order() as f64
    }

    pub fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_len(self.dim(), x.len())?;
        let mut g = vec![0.0; x.len()];
        let v = self.eval_into(x, &mut g);
        Ok((v, g))
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.value_and_gradient(x)?.0)
    }

    /// Writes the gradient into `grad` and returns the value. One pass over
    /// `A` (the form is recovered as `x . A x^{m-1}`) and one over `B`.
    pub(crate) fn eval_into(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.order_f();
        let sign = self.flavor.sign();
        let t = self.shift;
        let (bf, bc) = self.b.form_and_contract(x);
        let ac = self.a.contract_unchecked(x);
        let af = dot(x, &ac);
        for ((g, &p), &q) in grad.iter_mut().zip(&ac).zip(&bc) {
            *g = bf * q + sign * (p + t * q);
        }
        bf * bf / (2.0 * m) + sign * (af + t * bf) / m
    }

    /// `B x^m` at `x`.
    pub fn b_form(&self, x: &[f64]) -> Result<f64> {
        self.b.form(x)
    }

    /// Recovers the eigenvalue of the unshifted `A` from a critical vector,
    /// using `-B x^m - t` (F1) or `B x^m - t` (F2). The objective-value
    /// route `∓sqrt(-2m s) - t` is computed as a cross-check and flags the
    /// result on disagreement.
    pub fn recover_lambda(&self, x: &[f64]) -> Result<Eigenpair> {
        self.recover_lambda_with(x, ZeroBand::default().eta1)
    }

    pub fn recover_lambda_with(&self, x: &[f64], eta1: f64) -> Result<Eigenpair> {
        check_len(self.dim(), x.len())?;
        let bf = self.b.form_unchecked(x);
        if !(bf >= eta1) {
            return Err(Error::ZeroCriticalPoint);
        }
        let lambda = self.lambda_from_b_form(bf);
        let mut pair = Eigenpair::on_unit_sphere(self.a, self.b, lambda, x)?;
        let s = self.value(x)?;
        if let Some(alt) = self.lambda_from_value(s) {
            if (alt - lambda).abs() > RECOVERY_TOL * (1.0 + lambda.abs()) {
                pair.recovery_mismatch = true;
            }
        }
        Ok(pair)
    }

    /// Algebraic route: eigenvalue of `A` from `B x^m` at a critical point.
    pub fn lambda_from_b_form(&self, bf: f64) -> f64 {
        match self.flavor {
            Flavor::F1 => -bf - self.shift,
            Flavor::F2 => bf - self.shift,
        }
    }

    /// Objective-value route: `lambda + t = ∓sqrt(-2m s)`. `None` when
    /// `s > 0`; values in `(0, 1e-12]` are clamped to zero.
    pub fn lambda_from_value(&self, s: f64) -> Option<f64> {
        let s = if s > 0.0 && s <= 1e-12 { 0.0 } else { s };
        if s > 0.0 || !s.is_finite() {
            return None;
        }
        let root = (-2.0 * self.order_f() * s).sqrt();
        Some(match self.flavor {
            Flavor::F1 => -root - self.shift,
            Flavor::F2 => root - self.shift,
        })
    }

    /// Classifies a solver output point.
    pub fn classify(&self, x: &[f64], band: ZeroBand) -> Result<CriticalPoint> {
        let (value, grad) = self.value_and_gradient(x)?;
        let bf = self.b.form_unchecked(x);
        let classification = if bf < band.eta1 {
            PointClass::ZeroPoint
        } else if bf > band.eta2 {
            PointClass::EigenpairPoint
        } else {
            PointClass::Inconclusive
        };
        let recovered = match classification {
            PointClass::EigenpairPoint => Some(self.recover_lambda_with(x, band.eta1)?),
            _ => None,
        };
        Ok(CriticalPoint {
            x: x.to_vec(),
            objective_value: value,
            grad_norm: crate::linalg::norm_inf(&grad),
            b_form: bf,
            classification,
            recovered,
        })
    }
}
