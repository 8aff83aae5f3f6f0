//! Lifting-loop CDF 9/7 transform.
//!
//! This is the straightforward in-place formulation: four lifting passes over
//! the interleaved signal, a scaling pass and a de-interleave. It is kept
//! deliberately independent of the matrix construction in [`super::matrix`]
//! so that each can be used to check the other.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Lifting coefficients of the irreversible 9/7 transform (ITU-T T.800 Table F.4).
pub const CDF97_ALPHA: f64 = -1.586_134_342_059_924;
pub const CDF97_BETA: f64 = -0.052_980_118_572_961;
pub const CDF97_GAMMA: f64 = 0.882_911_075_530_934;
pub const CDF97_DELTA: f64 = 0.443_506_852_043_971;
pub const CDF97_K: f64 = 1.230_174_104_914_001;

/// The four lifting weights and the band normalization gain.
///
/// `alpha` and `gamma` are the predict weights (even neighbours added into odd
/// samples), `beta` and `delta` the update weights (odd neighbours added into
/// even samples). After lifting, high-band samples are multiplied by
/// `k_scale` and low-band samples by `1 / k_scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftingParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub k_scale: f64,
}

impl Default for LiftingParams {
    fn default() -> Self {
        Self::cdf97()
    }
}

impl LiftingParams {
    pub const fn cdf97() -> Self {
        LiftingParams {
            alpha: CDF97_ALPHA,
            beta: CDF97_BETA,
            gamma: CDF97_GAMMA,
            delta: CDF97_DELTA,
            k_scale: CDF97_K,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.beta, self.gamma, self.delta, self.k_scale];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("lifting parameters must be finite".into()));
        }
        if all.contains(&0.0) {
            return Err(Error::Validation("lifting parameters must be nonzero".into()));
        }
        Ok(())
    }

    /// The lifting steps in application order: `(weight, updates_odd_samples)`.
    pub(crate) fn steps(&self) -> [(f64, bool); 4] {
        [
            (self.alpha, true),
            (self.beta, false),
            (self.gamma, true),
            (self.delta, false),
        ]
    }
}

pub(crate) fn check_length(n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::Size(format!("signal length must be even, got {n}")));
    }
    if n < 4 {
        return Err(Error::Size(format!("signal length must be at least 4, got {n}")));
    }
    Ok(())
}

/// Whole-sample symmetric reflection of an index one step outside `[0, n)`.
#[inline]
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

fn lift(x: &mut [f64], weight: f64, odd: bool) {
    let n = x.len();
    let start = usize::from(odd);
    for i in (start..n).step_by(2) {
        let left = x[reflect(i as isize - 1, n)];
        let right = x[reflect(i as isize + 1, n)];
        x[i] += weight * (left + right);
    }
}

fn unlift(x: &mut [f64], weight: f64, odd: bool) {
    lift(x, -weight, odd);
}

/// Forward 1-D transform of an even-length signal. The output holds the
/// `n/2` low-band coefficients followed by the `n/2` high-band coefficients.
pub fn dwt1d_lifting_reference(signal: &[f64], params: &LiftingParams) -> Result<Vec<f64>> {
    check_length(signal.len())?;
    params.validate()?;
    let n = signal.len();
    let mut x = signal.to_vec();

    for (weight, odd) in params.steps() {
        lift(&mut x, weight, odd);
    }
    for (i, v) in x.iter_mut().enumerate() {
        if i % 2 == 0 {
            *v /= params.k_scale;
        } else {
            *v *= params.k_scale;
        }
    }

    let half = n / 2;
    let mut out = vec![0.0; n];
    for k in 0..half {
        out[k] = x[2 * k];
        out[half + k] = x[2 * k + 1];
    }
    Ok(out)
}

/// Inverse of [`dwt1d_lifting_reference`].
pub fn idwt1d_lifting_reference(coeffs: &[f64], params: &LiftingParams) -> Result<Vec<f64>> {
    check_length(coeffs.len())?;
    params.validate()?;
    let n = coeffs.len();
    let half = n / 2;
    let mut x = vec![0.0; n];
    for k in 0..half {
        x[2 * k] = coeffs[k] * params.k_scale;
        x[2 * k + 1] = coeffs[half + k] / params.k_scale;
    }
    for (weight, odd) in params.steps().into_iter().rev() {
        unlift(&mut x, weight, odd);
    }
    Ok(x)
}

/// Separable 2-D transform by lifting every row, then every column.
///
/// Produces the same subband layout as the matrix path: low/low in the top-left
/// quadrant, horizontal detail top-right, vertical detail bottom-left.
pub fn dwt2d_lifting_reference(x: ArrayView2<'_, f64>, params: &LiftingParams) -> Result<Array2<f64>> {
    let (rows, cols) = x.dim();
    if rows != cols {
        return Err(Error::Size(format!("plane must be square, got {rows}x{cols}")));
    }
    let mut out = x.to_owned();
    for mut row in out.rows_mut() {
        let t = dwt1d_lifting_reference(&row.to_vec(), params)?;
        row.assign(&Array1::from(t));
    }
    for mut col in out.columns_mut() {
        let t = dwt1d_lifting_reference(&col.to_vec(), params)?;
        col.assign(&Array1::from(t));
    }
    Ok(out)
}

/// Inverse of [`dwt2d_lifting_reference`].
pub fn idwt2d_lifting_reference(w: ArrayView2<'_, f64>, params: &LiftingParams) -> Result<Array2<f64>> {
    let (rows, cols) = w.dim();
    if rows != cols {
        return Err(Error::Size(format!("plane must be square, got {rows}x{cols}")));
    }
    let mut out = w.to_owned();
    for mut col in out.columns_mut() {
        let t = idwt1d_lifting_reference(&col.to_vec(), params)?;
        col.assign(&Array1::from(t));
    }
    for mut row in out.rows_mut() {
        let t = idwt1d_lifting_reference(&row.to_vec(), params)?;
        row.assign(&Array1::from(t));
    }
    Ok(out)
}
