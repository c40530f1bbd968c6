//! Test tensor families and seeded randomness.
//!
//! Reproducibility contract: every random draw comes from a ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng`, 256-bit key, seeded through
//! `SeedableRng::seed_from_u64`). Uniform variates are `rand`'s standard
//! `f64` in `[0, 1)` (53 random mantissa bits). Standard normals use the
//! basic Box–Muller transform, consuming two uniforms per normal and keeping
//! only the cosine branch. Tensors are filled in row-major offset order.
//! Per-trial streams are derived with [`child_seed`], a SplitMix64 mix of
//! the master seed and the trial index.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{symmetrize, SymmetricTensor};

pub type TensorRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TensorRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal variate by Box–Muller.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the logarithm is finite
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic child seed for stream `index` under `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

const ORDER: usize = 4;

fn randn_values(n: usize, rng: &mut TensorRng) -> Vec<f64> {
    (0..n.pow(ORDER as u32)).map(|_| standard_normal(rng)).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// Diagonal entries -0.9, everything else 0.1.
pub fn example1(n: usize) -> Result<SymmetricTensor> {
    check_n(n)?;
    let mut t = SymmetricTensor::from_values(ORDER, n, vec![0.1; n.pow(ORDER as u32)])?;
    for i in 0..n {
        t.set_diagonal(i, -0.9);
    }
    Ok(t)
}

/// Symmetrized standard-normal tensor.
pub fn example2(n: usize, seed: u64) -> Result<SymmetricTensor> {
    check_n(n)?;
    let mut rng = rng_from_seed(seed);
    symmetrize(ORDER, n, &randn_values(n, &mut rng))
}

/// Symmetrized entrywise reciprocal of a standard-normal tensor.
pub fn example3(n: usize, seed: u64) -> Result<SymmetricTensor> {
    check_n(n)?;
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..n.pow(ORDER as u32))
        .map(|_| loop {
            let y = standard_normal(&mut rng);
            if y != 0.0 {
                break 1.0 / y;
            }
        })
        .collect();
    symmetrize(ORDER, n, &raw)
}

/// Symmetrized standard-normal tensor with the diagonal then overwritten by
/// 1000 (first `n - 1` slots) and -1 (last slot). Not PSD for `n >= 2`.
pub fn example4(n: usize, seed: u64) -> Result<SymmetricTensor> {
    let mut t = example2(n, seed)?;
    for i in 0..n - 1 {
        t.set_diagonal(i, 1000.0);
    }
    t.set_diagonal(n - 1, -1.0);
    Ok(t)
}

/// `diag(1, 0, -0.001)`, `n = 3`.
pub fn example5() -> SymmetricTensor {
    SymmetricTensor::diagonal(ORDER, &[1.0, 0.0, -0.001]).expect("fixed shape")
}

/// Diagonal with uniform(0,1) entries and a trailing zero; PSD.
pub fn example6(n: usize, seed: u64) -> Result<SymmetricTensor> {
    check_n(n)?;
    let mut rng = rng_from_seed(seed);
    let mut d: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    d.push(0.0);
    SymmetricTensor::diagonal(ORDER, &d)
}

/// Diagonal with entries `10k`, `k = 1..n`; positive definite.
pub fn example7(n: usize) -> Result<SymmetricTensor> {
    check_n(n)?;
    let d: Vec<f64> = (1..=n).map(|k| 10.0 * k as f64).collect();
    SymmetricTensor::diagonal(ORDER, &d)
}

/// A named tensor family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExampleTensor {
    pub example: u8,
    pub n: usize,
    pub seed: u64,
}

impl ExampleTensor {
    pub fn new(example: u8, n: usize, seed: u64) -> Result<Self> {
        match example {
            1..=4 | 6 | 7 => {
                check_n(n)?;
                if example == 4 && n < 2 {
                    return Err(Error::InvalidConfig("example 4 needs n >= 2".into()));
                }
                if example == 6 && n < 1 {
                    return Err(Error::InvalidDimension(n));
                }
            }
            5 => {
                if n != 3 {
                    return Err(Error::InvalidConfig(format!("example 5 has fixed n = 3 (got n = {n})")));
                }
            }
            _ => return Err(Error::InvalidConfig(format!("unknown example {example}; expected 1..7"))),
        }
        Ok(Self { example, n, seed })
    }

    pub fn is_random(&self) -> bool {
        matches!(self.example, 2 | 3 | 4 | 6)
    }

    pub fn id(&self) -> String {
        if self.is_random() {
            format!("ex{}-n{}-s{}", self.example, self.n, self.seed)
        } else {
            format!("ex{}-n{}", self.example, self.n)
        }
    }

    pub fn build(&self) -> Result<SymmetricTensor> {
        match self.example {
            1 => example1(self.n),
            2 => example2(self.n, self.seed),
            3 => example3(self.n, self.seed),
            4 => example4(self.n, self.seed),
            5 => Ok(example5()),
            6 => example6(self.n, self.seed),
            7 => example7(self.n),
            _ => unreachable!("validated in new"),
        }
    }
}

/// All Z-eigenvalues of a 4th-order diagonal tensor `diag(d)`, sorted and
/// deduplicated within 1e-12.
///
/// A support set `S` of same-signed nonzero entries gives
/// `lambda_S = 1 / sum_{i in S} 1/d_i` (with `x_i^2 = lambda / d_i`);
/// each zero entry contributes `lambda = 0`.
pub fn diagonal_z_oracle(d: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 || n > 20 {
        return Err(Error::InvalidConfig(format!("oracle supports 1 <= n <= 20, got {n}")));
    }
    let mut out = Vec::new();
    if d.iter().any(|&v| v == 0.0) {
        out.push(0.0);
    }
    for mask in 1u32..(1 << n) {
        let members: Vec<f64> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| d[i]).collect();
        let positive = members.iter().all(|&v| v > 0.0);
        let negative = members.iter().all(|&v| v < 0.0);
        if !(positive || negative) {
            continue;
        }
        let inv: f64 = members.iter().map(|v| 1.0 / v).sum();
        out.push(1.0 / inv);
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    Ok(out)
}
