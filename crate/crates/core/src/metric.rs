//! The positive definite "metric" tensor `B` of the generalized eigenproblem
//! `A x^{m-1} = lambda B x^{m-1}`.
//!
//! The closed-form kinds are evaluated without materializing entries:
//!
//! | kind            | `B x^m`              | `B x^{m-1}`                         |
//! |-----------------|----------------------|-------------------------------------|
//! | unit tensor     | `sum x_i^m`          | `(x_i^{m-1})_i`                     |
//! | identity power  | `(x'x)^{m/2}`        | `(x'x)^{(m-2)/2} x`                 |
//! | matrix power    | `(x'Dx)^{m/2}`       | `(x'Dx)^{(m-2)/2} D x`              |
//!
//! `B x^{m-1}` is normalized so that `grad(B x^m) = m * B x^{m-1}`; with the
//! unit tensor the eigenvalues are H-eigenvalues, with the identity power they
//! are Z-eigenvalues and with a matrix power they are D-eigenvalues.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::dot;
use crate::tensor::{symmetrize, SymmetricTensor};

/// Which metric an eigenpair was computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MetricTag {
    UnitTensor,
    IdentityPower,
    MatrixPower,
    ExplicitDense,
}

impl MetricTag {
    pub fn short_name(self) -> &'static str {
        match self {
            MetricTag::UnitTensor => "unit",
            MetricTag::IdentityPower => "zid",
            MetricTag::MatrixPower => "matrix",
            MetricTag::ExplicitDense => "dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    UnitTensor,
    IdentityPower,
    /// Row-major SPD matrix `D`.
    MatrixPower(Vec<f64>),
    ExplicitDense(SymmetricTensor),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BOperator {
    kind: Kind,
    order: usize,
    dim: usize,
    /// Positive definiteness of an explicit dense `B` is taken on trust.
    pd_asserted: bool,
}

fn check_shape(order: usize, dim: usize) -> Result<()> {
    if order < 2 || order % 2 != 0 {
        return Err(Error::InvalidOrder(order));
    }
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

impl BOperator {
    /// `B = δ`, the unit tensor (H-eigenvalues).
    pub fn unit(order: usize, dim: usize) -> Result<Self> {
        check_shape(order, dim)?;
        Ok(Self {
            kind: Kind::UnitTensor,
            order,
            dim,
            pd_asserted: false,
        })
    }

    /// `B = I_n^{m/2}` (Z-eigenvalues).
    pub fn identity_power(order: usize, dim: usize) -> Result<Self> {
        check_shape(order, dim)?;
        Ok(Self {
            kind: Kind::IdentityPower,
            order,
            dim,
            pd_asserted: false,
        })
    }

    /// `B = D^{m/2}` for a symmetric positive definite `D` given row-major
    /// (D-eigenvalues). Fails if `D` is not symmetric or its Cholesky
    /// factorization breaks down.
    pub fn matrix_power(order: usize, dim: usize, d: Vec<f64>) -> Result<Self> {
        check_shape(order, dim)?;
        check_len(dim * dim, d.len())?;
        for i in 0..dim {
            for j in 0..i {
                if d[i * dim + j] != d[j * dim + i] {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let mat = DMatrix::from_row_slice(dim, dim, &d);
        if mat.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            kind: Kind::MatrixPower(d),
            order,
            dim,
            pd_asserted: false,
        })
    }

    /// Wraps an explicit symmetric tensor. Positive definiteness is
    /// caller-asserted and not checked.
    pub fn explicit(tensor: SymmetricTensor) -> Result<Self> {
        if !tensor.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self {
            order: tensor.order(),
            dim: tensor.dim(),
            kind: Kind::ExplicitDense(tensor),
            pd_asserted: true,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> MetricTag {
        match self.kind {
            Kind::UnitTensor => MetricTag::UnitTensor,
            Kind::IdentityPower => MetricTag::IdentityPower,
            Kind::MatrixPower(_) => MetricTag::MatrixPower,
            Kind::ExplicitDense(_) => MetricTag::ExplicitDense,
        }
    }

    /// True when positive definiteness was asserted by the caller rather
    /// than established at construction.
    pub fn pd_asserted(&self) -> bool {
        self.pd_asserted
    }

    /// `B x^m`.
    pub fn form(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dim, x.len())?;
        Ok(self.form_unchecked(x))
    }

    /// `B x^{m-1}`.
    pub fn contract(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, x.len())?;
        Ok(self.contract_unchecked(x))
    }

    pub(crate) fn form_unchecked(&self, x: &[f64]) -> f64 {
        self.form_and_contract(x).0
    }

    pub(crate) fn contract_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.form_and_contract(x).1
    }

    /// `(B x^m, B x^{m-1})` in one pass.
    pub(crate) fn form_and_contract(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let m = self.order as i32;
        match &self.kind {
            Kind::UnitTensor => {
                let c: Vec<f64> = x.iter().map(|v| v.powi(m - 1)).collect();
                (dot(&c, x), c)
            }
            Kind::IdentityPower => {
                let s = dot(x, x);
                let scale = s.powi((m - 2) / 2);
                (s.powi(m / 2), x.iter().map(|v| scale * v).collect())
            }
            Kind::MatrixPower(d) => {
                let dx: Vec<f64> = d.chunks_exact(self.dim).map(|row| dot(row, x)).collect();
                let q = dot(x, &dx);
                let scale = q.powi((m - 2) / 2);
                (q.powi(m / 2), dx.into_iter().map(|v| scale * v).collect())
            }
            Kind::ExplicitDense(t) => {
                let c = t.contract_unchecked(x);
                (dot(x, &c), c)
            }
        }
    }

    /// The constant `mu` with `B x^m >= mu ||x||_m^m` for the two closed
    /// forms used in positive definiteness checks.
    pub fn min_h_eigenvalue_lower_bound(&self) -> Result<f64> {
        match self.kind {
            // equality for the unit tensor; ||x||_2 >= ||x||_m otherwise
            Kind::UnitTensor | Kind::IdentityPower => Ok(1.0),
            Kind::MatrixPower(_) => Err(Error::NoClosedFormBound("matrix power")),
            Kind::ExplicitDense(_) => Err(Error::NoClosedFormBound("explicit dense")),
        }
    }

    /// Materializes `B` as a dense symmetric tensor.
    pub fn to_dense(&self) -> Result<SymmetricTensor> {
        let n = self.dim;
        let m = self.order;
        match &self.kind {
            Kind::ExplicitDense(t) => Ok(t.clone()),
            Kind::UnitTensor => SymmetricTensor::diagonal(m, &vec![1.0; n]),
            Kind::IdentityPower => {
                let eye: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect();
                pairwise_product(m, n, &eye)
            }
            Kind::MatrixPower(d) => pairwise_product(m, n, d),
        }
    }
}

/// Symmetrized tensor product of `m/2` copies of an `n x n` matrix.
fn pairwise_product(m: usize, n: usize, mat: &[f64]) -> Result<SymmetricTensor> {
    let len = n.pow(m as u32);
    let mut raw = vec![0.0; len];
    for (off, slot) in raw.iter_mut().enumerate() {
        let mut rem = off;
        let mut idx = vec![0usize; m];
        for k in (0..m).rev() {
            idx[k] = rem % n;
            rem /= n;
        }
        *slot = idx.chunks_exact(2).map(|p| mat[p[0] * n + p[1]]).product();
    }
    symmetrize(m, n, &raw)
}
