//! Dense matrix form of the 1-D CDF 9/7 transform.
//!
//! A signal is a row vector `x` and its transform is `x · A`, where
//!
//! ```text
//! A = P1 · U1 · P2 · U2 · D · S
//! ```
//!
//! Each lifting factor is the identity plus two off-diagonal weights per
//! updated column, `D` is the diagonal band normalization and `S` the
//! de-interleaving permutation. Boundary samples use whole-sample symmetric
//! reflection, so the first even column and the last odd column carry their
//! single available neighbour twice.

use ndarray::Array2;

use super::lifting::{check_length, LiftingParams};
use crate::error::Result;

/// The six factors of the analysis matrix, in application order.
#[derive(Debug, Clone)]
pub struct LiftingFactors {
    pub predict1: Array2<f64>,
    pub update1: Array2<f64>,
    pub predict2: Array2<f64>,
    pub update2: Array2<f64>,
    pub scale: Array2<f64>,
    pub deinterleave: Array2<f64>,
}

impl LiftingFactors {
    pub fn as_array(&self) -> [&Array2<f64>; 6] {
        [
            &self.predict1,
            &self.update1,
            &self.predict2,
            &self.update2,
            &self.scale,
            &self.deinterleave,
        ]
    }

    /// Ordered product of the factors.
    pub fn product(&self) -> Array2<f64> {
        let [first, rest @ ..] = self.as_array();
        rest.iter().fold(first.clone(), |acc, f| acc.dot(*f))
    }
}

/// Analysis matrix `A`, its exact inverse and the factors it was built from,
/// for one signal length.
#[derive(Debug, Clone)]
pub struct TransformPair {
    n: usize,
    params: LiftingParams,
    analysis: Array2<f64>,
    synthesis: Array2<f64>,
    factors: LiftingFactors,
}

impl TransformPair {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &LiftingParams {
        &self.params
    }

    /// `A`: right-multiplying a row signal by it yields `[low | high]`.
    pub fn analysis(&self) -> &Array2<f64> {
        &self.analysis
    }

    /// `A⁻¹`.
    pub fn synthesis(&self) -> &Array2<f64> {
        &self.synthesis
    }

    pub fn factors(&self) -> &LiftingFactors {
        &self.factors
    }
}

fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    if i < 0 {
        (-i) as usize
    } else if i >= n {
        (2 * n - 2 - i) as usize
    } else {
        i as usize
    }
}

/// Identity plus `weight` on the two neighbours of every column of the given parity.
fn lifting_matrix(n: usize, weight: f64, odd: bool) -> Array2<f64> {
    let mut m = Array2::eye(n);
    for j in (usize::from(odd)..n).step_by(2) {
        m[[reflect(j as isize - 1, n), j]] += weight;
        m[[reflect(j as isize + 1, n), j]] += weight;
    }
    m
}

fn scale_matrix(n: usize, k: f64, inverse: bool) -> Array2<f64> {
    let (low, high) = if inverse { (k, 1.0 / k) } else { (1.0 / k, k) };
    Array2::from_diag(&ndarray::Array1::from_shape_fn(
        n,
        |i| if i % 2 == 0 { low } else { high },
    ))
}

fn deinterleave_matrix(n: usize) -> Array2<f64> {
    let half = n / 2;
    let mut s = Array2::zeros((n, n));
    for k in 0..half {
        s[[2 * k, k]] = 1.0;
        s[[2 * k + 1, half + k]] = 1.0;
    }
    s
}

/// Builds `A` from its lifting factors and `A⁻¹` from the inverted factors in
/// reverse order. Each lifting factor inverts exactly by negating its weight,
/// so no numerical inversion is involved.
pub fn build_transform_pair(n: usize, params: &LiftingParams) -> Result<TransformPair> {
    check_length(n)?;
    params.validate()?;

    let [p1, u1, p2, u2] = params.steps().map(|(w, odd)| lifting_matrix(n, w, odd));
    let factors = LiftingFactors {
        predict1: p1,
        update1: u1,
        predict2: p2,
        update2: u2,
        scale: scale_matrix(n, params.k_scale, false),
        deinterleave: deinterleave_matrix(n),
    };
    let analysis = factors.product();

    let inverse_steps = params
        .steps()
        .into_iter()
        .rev()
        .map(|(w, odd)| lifting_matrix(n, -w, odd));
    let mut synthesis = factors.deinterleave.t().dot(&scale_matrix(n, params.k_scale, true));
    for m in inverse_steps {
        synthesis = synthesis.dot(&m);
    }

    Ok(TransformPair {
        n,
        params: *params,
        analysis,
        synthesis,
        factors,
    })
}
