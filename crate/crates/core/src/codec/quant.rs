//! Dead-zone scalar quantization and the compression-ratio to step-size map.

use ndarray::Array2;

use crate::error::{shape_err, Error, Result};
use crate::wavelet::CoeffPlane;

/// Reconstruction offset inside a nonzero bin, as a fraction of the step.
pub const DEFAULT_RECONSTRUCTION_BIAS: f64 = 0.5;

/// Quantizer setting derived from a compression parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    /// `r = 0`: coefficients pass through unquantized.
    Bypass,
    Uniform(f64),
}

impl StepSize {
    pub fn step(self) -> Option<f64> {
        match self {
            StepSize::Bypass => None,
            StepSize::Uniform(d) => Some(d),
        }
    }
}

/// `r = 0` bypasses quantization; `r > 0` gives `Δ = 2^(r/5)`, so the
/// ratios 5, 10 and 15 map to steps 2, 4 and 8.
pub fn step_size_for_ratio(ratio: f64) -> Result<StepSize> {
    if !ratio.is_finite() || ratio < 0.0 {
        return Err(Error::Range(format!("compression ratio must be >= 0, got {ratio}")));
    }
    if ratio == 0.0 {
        return Ok(StepSize::Bypass);
    }
    Ok(StepSize::Uniform((ratio / 5.0).exp2()))
}

/// Quantizer indices for one coefficient plane.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPlane {
    indices: Array2<i32>,
    step: f64,
    level: usize,
    ratio: Option<f64>,
}

impl QuantizedPlane {
    pub fn new(indices: Array2<i32>, step: f64, level: usize) -> Result<Self> {
        check_step(step)?;
        Ok(QuantizedPlane {
            indices,
            step,
            level,
            ratio: None,
        })
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = Some(ratio);
        self
    }

    pub fn indices(&self) -> &Array2<i32> {
        &self.indices
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn ratio(&self) -> Option<f64> {
        self.ratio
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Range(format!("quantizer step must be positive, got {step}")));
    }
    Ok(())
}

/// Quantizer index of a single coefficient: `sign(y)·⌊|y|/Δ⌋`, and exactly 0
/// for `|y| < Δ`.
#[inline]
pub fn quantize_value(y: f64, step: f64) -> f64 {
    let mag = y.abs();
    if mag < step {
        return 0.0;
    }
    // the quotient can round down to just below 1 near the bin edge
    (mag / step).floor().max(1.0).copysign(y)
}

/// `(|q| + bias)·Δ·sign(q)`, written as `(q + bias·sign(q))·Δ` so that
/// loops over it vectorize; both forms give identical results.
#[inline]
pub fn dequantize_value(q: i32, step: f64, bias: f64) -> f64 {
    (f64::from(q) + bias * f64::from(q.signum())) * step
}

pub fn deadzone_quantize(w: &CoeffPlane, step: f64) -> Result<QuantizedPlane> {
    check_step(step)?;
    let mut overflow = false;
    let indices = w.data().mapv(|y| {
        let q = quantize_value(y, step);
        if q.abs() > i32::MAX as f64 {
            overflow = true;
            0
        } else {
            q as i32
        }
    });
    if overflow {
        return Err(Error::Range(format!(
            "step {step} too small: quantizer index exceeds 32 bits"
        )));
    }
    QuantizedPlane::new(indices, step, w.level())
}

pub fn dequantize(q: &QuantizedPlane) -> CoeffPlane {
    dequantize_with_bias(q, DEFAULT_RECONSTRUCTION_BIAS)
}

pub fn dequantize_with_bias(q: &QuantizedPlane, bias: f64) -> CoeffPlane {
    let data = q.indices.mapv(|i| dequantize_value(i, q.step, bias));
    CoeffPlane::from_parts_unchecked(data, q.level)
}

/// [`dequantize`] into an existing plane of the same side, so a decoder
/// loop can reuse its buffers.
pub fn dequantize_into(q: &QuantizedPlane, out: &mut CoeffPlane) -> Result<()> {
    if out.data().dim() != q.indices.dim() {
        return Err(shape_err("dequantizer output", q.indices.dim(), out.data().dim()));
    }
    let (step, indices) = (q.step, &q.indices);
    out.overwrite(q.level, |data| match (data.as_slice_mut(), indices.as_slice()) {
        (Some(d), Some(i)) => {
            for (d, &i) in d.iter_mut().zip(i) {
                *d = dequantize_value(i, step, DEFAULT_RECONSTRUCTION_BIAS);
            }
        }
        _ => data.zip_mut_with(indices, |d, &i| {
            *d = dequantize_value(i, step, DEFAULT_RECONSTRUCTION_BIAS)
        }),
    });
    Ok(())
}
