//! Dense even-order real tensors and their two basic contractions.
//!
//! Entries are stored in full (all `n^m` of them) in row-major multi-index
//! order: index `(i1, ..., im)` lives at offset `sum_k i_k * n^(m-k)`.
//! `A x^{m-1}` is computed by contracting the trailing index against `x`
//! `m - 1` times, and `A x^m` finishes with one more inner product. The loop
//! order is fixed, so both are deterministic.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm2, normalized};
use crate::metric::{BOperator, MetricTag};

/// Dense real tensor of even order `m` and dimension `n`.
///
/// Immutable after construction. `is_symmetric()` records whether every
/// permutation of every multi-index holds a bitwise-identical entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    values: Vec<f64>,
    symmetric: bool,
}

fn checked_len(order: usize, dim: usize) -> Result<usize> {
    if order < 2 || order % 2 != 0 {
        return Err(Error::InvalidOrder(order));
    }
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    u32::try_from(order)
        .ok()
        .and_then(|m| dim.checked_pow(m))
        .ok_or_else(|| Error::InvalidConfig(format!("{dim}^{order} entries overflow")))
}

impl SymmetricTensor {
    /// Wraps a raw value buffer. The symmetry flag is set only if the
    /// entries are exactly permutation-invariant.
    pub fn from_values(order: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        let len = checked_len(order, dim)?;
        if values.len() != len {
            return Err(Error::BadValueCount {
                expected: len,
                actual: values.len(),
            });
        }
        let symmetric = exactly_symmetric(order, dim, &values);
        Ok(Self {
            order,
            dim,
            values,
            symmetric,
        })
    }

    /// The all-zero tensor (trivially symmetric).
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let len = checked_len(order, dim)?;
        Ok(Self {
            order,
            dim,
            values: vec![0.0; len],
            symmetric: true,
        })
    }

    /// Diagonal tensor with `A(i,...,i) = diag[i]`.
    pub fn diagonal(order: usize, diag: &[f64]) -> Result<Self> {
        let mut t = Self::zeros(order, diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            let off = t.diagonal_offset(i);
            t.values[off] = d;
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Offset of a multi-index (zero-based).
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.order);
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.offset(index)]
    }

    pub(crate) fn diagonal_offset(&self, i: usize) -> usize {
        (0..self.order).fold(0, |acc, _| acc * self.dim + i)
    }

    /// Overwrites the single slot `(i, i, ..., i)`. Diagonal slots have no
    /// other permutations, so symmetry is preserved.
    pub(crate) fn set_diagonal(&mut self, i: usize, value: f64) {
        let off = self.diagonal_offset(i);
        self.values[off] = value;
    }

    /// `A x^m`.
    pub fn evaluate_form(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dim, x.len())?;
        Ok(self.form_unchecked(x))
    }

    /// `A x^{m-1}`.
    pub fn contract(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, x.len())?;
        Ok(self.contract_unchecked(x))
    }

    pub(crate) fn form_unchecked(&self, x: &[f64]) -> f64 {
        dot(x, &self.contract_unchecked(x))
    }

    pub(crate) fn contract_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut cur: Vec<f64> = self.values.chunks_exact(n).map(|row| dot(row, x)).collect();
        for _ in 2..self.order {
            cur = cur.chunks_exact(n).map(|row| dot(row, x)).collect();
        }
        cur
    }

    /// Symmetrized copy of this tensor.
    pub fn symmetrized(&self) -> Self {
        let values = symmetrize_values(self.order, self.dim, &self.values);
        Self {
            order: self.order,
            dim: self.dim,
            values,
            symmetric: true,
        }
    }

    /// `self + c * other`, entrywise. Symmetric iff both inputs are.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Result<Self> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                a_order: self.order,
                a_dim: self.dim,
                b_order: other.order,
                b_dim: other.dim,
            });
        }
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + c * b)
            .collect();
        let symmetric = (self.symmetric && other.symmetric) || exactly_symmetric(self.order, self.dim, &values);
        Ok(Self {
            order: self.order,
            dim: self.dim,
            values,
            symmetric,
        })
    }
}

/// Averages a raw `n^m` buffer over all `m!` permutations of each
/// multi-index and returns the resulting symmetric tensor.
pub fn symmetrize(order: usize, dim: usize, values: &[f64]) -> Result<SymmetricTensor> {
    let len = checked_len(order, dim)?;
    if values.len() != len {
        return Err(Error::BadValueCount {
            expected: len,
            actual: values.len(),
        });
    }
    Ok(SymmetricTensor {
        order,
        dim,
        values: symmetrize_values(order, dim, values),
        symmetric: true,
    })
}

/// Calls `visit` once per nondecreasing multi-index.
fn for_each_sorted_index(order: usize, dim: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; order];
    loop {
        visit(&idx);
        // advance to the next nondecreasing tuple
        let mut k = order;
        while k > 0 && idx[k - 1] == dim - 1 {
            k -= 1;
        }
        if k == 0 {
            return;
        }
        idx[k - 1] += 1;
        let v = idx[k - 1];
        for slot in idx.iter_mut().skip(k) {
            *slot = v;
        }
    }
}

fn offset_of(dim: usize, index: impl Iterator<Item = usize>) -> usize {
    index.fold(0, |acc, i| acc * dim + i)
}

fn symmetrize_values(order: usize, dim: usize, values: &[f64]) -> Vec<f64> {
    let perms: Vec<Vec<usize>> = (0..order).permutations(order).collect();
    let count = perms.len() as f64;
    let mut out = vec![0.0; values.len()];
    let mut offsets = Vec::with_capacity(perms.len());
    for_each_sorted_index(order, dim, |idx| {
        offsets.clear();
        offsets.extend(perms.iter().map(|p| offset_of(dim, p.iter().map(|&k| idx[k]))));
        let first = values[offsets[0]];
        let mean = if offsets.iter().all(|&o| values[o].to_bits() == first.to_bits()) {
            first
        } else {
            offsets.iter().map(|&o| values[o]).sum::<f64>() / count
        };
        for &o in &offsets {
            out[o] = mean;
        }
    });
    out
}

fn exactly_symmetric(order: usize, dim: usize, values: &[f64]) -> bool {
    let perms: Vec<Vec<usize>> = (0..order).permutations(order).collect();
    let mut ok = true;
    for_each_sorted_index(order, dim, |idx| {
        if !ok {
            return;
        }
        let first = values[offset_of(dim, idx.iter().copied())];
        ok = perms.iter().all(|p| {
            values[offset_of(dim, p.iter().map(|&k| idx[k]))].to_bits() == first.to_bits()
        });
    });
    ok
}

/// How the eigenvector stored in an [`Eigenpair`] is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `||x||_2 = 1`.
    UnitSphere,
    /// `B x^m = |lambda|`, as delivered by the variational objectives.
    BLevelSet,
}

/// A candidate eigenpair `(lambda, x)` of `A x^{m-1} = lambda B x^{m-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// `||A x̂^{m-1} - lambda B x̂^{m-1}||_2` at `x̂ = x / ||x||_2`.
    pub residual: f64,
    pub metric: MetricTag,
    pub normalization: Normalization,
    /// Set when two independent eigenvalue recoveries disagree.
    pub recovery_mismatch: bool,
}

impl Eigenpair {
    /// Builds an eigenpair from any nonzero `x`, storing the unit-sphere
    /// representative and its residual.
    pub fn on_unit_sphere(a: &SymmetricTensor, b: &BOperator, lambda: f64, x: &[f64]) -> Result<Self> {
        check_len(a.dim(), x.len())?;
        let xhat = normalized(x).ok_or(Error::ZeroVector)?;
        let residual = residual_normalized(a, b, lambda, &xhat);
        Ok(Self {
            lambda,
            x: xhat,
            residual,
            metric: b.tag(),
            normalization: Normalization::UnitSphere,
            recovery_mismatch: false,
        })
    }

    /// Rescales `x` so that `B x^m = |lambda|`. The residual is computed on
    /// the unit-sphere representative and is unchanged.
    pub fn to_level_set(&self, b: &BOperator) -> Self {
        let mut out = self.clone();
        let bf = b.form_unchecked(&self.x);
        if bf > 0.0 && self.lambda != 0.0 {
            let c = (self.lambda.abs() / bf).powf(1.0 / b.order() as f64);
            out.x.iter_mut().for_each(|v| *v *= c);
        }
        out.normalization = Normalization::BLevelSet;
        out
    }
}

/// Eigen-equation residual of `(lambda, x)`, evaluated at `x / ||x||_2`.
pub fn residual(a: &SymmetricTensor, b: &BOperator, lambda: f64, x: &[f64]) -> Result<f64> {
    check_len(a.dim(), x.len())?;
    check_len(b.dim(), x.len())?;
    let xhat = normalized(x).ok_or(Error::ZeroVector)?;
    Ok(residual_normalized(a, b, lambda, &xhat))
}

fn residual_normalized(a: &SymmetricTensor, b: &BOperator, lambda: f64, xhat: &[f64]) -> f64 {
    let ax = a.contract_unchecked(xhat);
    let bx = b.contract_unchecked(xhat);
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - lambda * q).collect();
    norm2(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Full m-way loop nest, written independently of the trailing-index
    /// contraction used by the implementation.
    fn brute_form(t: &SymmetricTensor, x: &[f64]) -> f64 {
        let n = t.dim();
        let m = t.order();
        let mut total = 0.0;
        for off in 0..t.values().len() {
            let mut rem = off;
            let mut prod = t.values()[off];
            for _ in 0..m {
                prod *= x[rem % n];
                rem /= n;
            }
            total += prod;
        }
        total
    }

    fn example1_like(n: usize) -> SymmetricTensor {
        let mut v = vec![0.1; n.pow(4)];
        let mut t = SymmetricTensor::from_values(4, n, std::mem::take(&mut v)).unwrap();
        for i in 0..n {
            t.set_diagonal(i, -0.9);
        }
        t
    }

    #[test]
    fn form_on_example1_n2() {
        let a = example1_like(2);
        // 2 diagonal entries at -0.9, 14 off-diagonal at 0.1
        let oracle = brute_form(&a, &[1.0, 1.0]);
        assert!((oracle - (-0.4)).abs() < 1e-15);
        assert!((a.evaluate_form(&[1.0, 1.0]).unwrap() - (-0.4)).abs() < 1e-14);
    }

    #[test]
    fn diagonal_form_and_contract() {
        let d: Vec<f64> = (1..=5).map(|k| 10.0 * k as f64).collect();
        let a = SymmetricTensor::diagonal(4, &d).unwrap();
        let e1 = [1.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(a.evaluate_form(&e1).unwrap(), 10.0);
        assert_eq!(a.contract(&e1).unwrap(), vec![10.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.evaluate_form(&[0.0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn contract_on_example5() {
        let a = SymmetricTensor::diagonal(4, &[1.0, 0.0, -0.001]).unwrap();
        assert_eq!(a.contract(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0, -0.001]);
    }

    #[test]
    fn dimension_mismatch_names_lengths() {
        let a = SymmetricTensor::zeros(4, 3).unwrap();
        let err = a.evaluate_form(&[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, actual: 2 }));
        assert!(err.to_string().contains('3') && err.to_string().contains('2'));
        assert!(a.contract(&[1.0; 4]).is_err());
    }

    #[test]
    fn odd_order_rejected() {
        assert!(matches!(SymmetricTensor::zeros(3, 2), Err(Error::InvalidOrder(3))));
        assert!(matches!(symmetrize(3, 2, &[0.0; 8]), Err(Error::InvalidOrder(3))));
        assert!(SymmetricTensor::zeros(4, 0).is_err());
        assert!(SymmetricTensor::from_values(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn matrix_symmetrization() {
        let s = symmetrize(2, 2, &[0.0, 1.0, 3.0, 0.0]).unwrap();
        assert_eq!(s.values(), &[0.0, 2.0, 2.0, 0.0]);
        assert!(s.is_symmetric());
    }

    #[test]
    fn symmetrize_is_identity_on_symmetric_input() {
        let a = example1_like(3);
        assert!(a.is_symmetric());
        let s = a.symmetrized();
        assert_eq!(s.values(), a.values());
        let s2 = s.symmetrized();
        assert_eq!(s2.values(), s.values());
    }

    #[test]
    fn from_values_detects_asymmetry() {
        let t = SymmetricTensor::from_values(2, 2, vec![0.0, 1.0, 3.0, 0.0]).unwrap();
        assert!(!t.is_symmetric());
    }

    #[test]
    fn residual_of_exact_diagonal_pair() {
        let d: Vec<f64> = (1..=4).map(|k| 10.0 * k as f64).collect();
        let a = SymmetricTensor::diagonal(4, &d).unwrap();
        let b = BOperator::identity_power(4, 4).unwrap();
        let r = residual(&a, &b, 10.0, &[3.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r, 0.0);
        assert!(matches!(residual(&a, &b, 10.0, &[0.0; 4]), Err(Error::ZeroVector)));
    }

    #[test]
    fn perturbed_pair_residual_lower_bound() {
        let d = [10.0, 20.0, 30.0];
        let a = SymmetricTensor::diagonal(4, &d).unwrap();
        let b = BOperator::identity_power(4, 3).unwrap();
        let x = [0.0, 1.0, 0.0];
        let exact = residual(&a, &b, 20.0, &x).unwrap();
        for delta in [1e-3, 0.5, -2.0] {
            let r = residual(&a, &b, 20.0 + delta, &x).unwrap();
            let bx = b.contract(&x).unwrap();
            assert!(r >= delta.abs() * norm2(&bx) - exact - 1e-15);
        }
    }

    #[test]
    fn level_set_rescale_keeps_residual() {
        let a = SymmetricTensor::diagonal(4, &[-2.0, 1.0]).unwrap();
        let b = BOperator::identity_power(4, 2).unwrap();
        let p = Eigenpair::on_unit_sphere(&a, &b, -2.0, &[5.0, 0.0]).unwrap();
        let q = p.to_level_set(&b);
        assert_eq!(q.normalization, Normalization::BLevelSet);
        assert!((b.form(&q.x).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(residual(&a, &b, q.lambda, &q.x).unwrap(), p.residual);
    }
}
