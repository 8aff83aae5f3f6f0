use ndarray::Array2;

use super::color::{forward_precoding, inverse_precoding, YcbcrPlanes};
use super::image::RgbImage;
use super::quant::{deadzone_quantize, dequantize, step_size_for_ratio, QuantizedPlane, StepSize};
use crate::error::{shape_err, Result};
use crate::wavelet::{dwt2d, idwt2d, CoeffPlane, TransformPair};

/// Encoder-side coefficients for the Y, Cb and Cr channels.
#[derive(Debug, Clone, PartialEq)]
pub enum EncodedPlanes {
    Unquantized([CoeffPlane; 3]),
    Quantized([QuantizedPlane; 3]),
}

impl EncodedPlanes {
    /// What a decoder holds right after the dequantizer.
    pub fn dequantize(&self) -> [CoeffPlane; 3] {
        match self {
            EncodedPlanes::Unquantized(p) => p.clone(),
            EncodedPlanes::Quantized(q) => [dequantize(&q[0]), dequantize(&q[1]), dequantize(&q[2])],
        }
    }
}

/// Level offset, color transform and level-1 DWT of each channel.
pub fn analyze(img: &RgbImage, pair: &TransformPair) -> Result<[CoeffPlane; 3]> {
    let n = img.square_side()?;
    if n != pair.n() {
        return Err(shape_err("image side vs transform", pair.n(), n));
    }
    let planes = forward_precoding(img);
    let [y, cb, cr] = planes.channels().map(|c| dwt2d(c.view(), pair));
    Ok([y?, cb?, cr?])
}

/// The encoder path up to quantizer indices.
pub fn encode(img: &RgbImage, pair: &TransformPair, ratio: f64) -> Result<EncodedPlanes> {
    let step = step_size_for_ratio(ratio)?;
    let planes = analyze(img, pair)?;
    match step {
        StepSize::Bypass => Ok(EncodedPlanes::Unquantized(planes)),
        StepSize::Uniform(d) => {
            let [y, cb, cr] = planes.each_ref().map(|p| deadzone_quantize(p, d));
            Ok(EncodedPlanes::Quantized([
                y?.with_ratio(ratio),
                cb?.with_ratio(ratio),
                cr?.with_ratio(ratio),
            ]))
        }
    }
}

/// Encode at `ratio` and dequantize: the coefficients a compressed-domain
/// classifier consumes.
pub fn forward_pipeline(img: &RgbImage, pair: &TransformPair, ratio: f64) -> Result<[CoeffPlane; 3]> {
    Ok(encode(img, pair, ratio)?.dequantize())
}

/// Decoder work after the dequantizer: inverse DWT per channel, inverse color
/// transform and level offset.
pub fn decode_tail(planes: &[CoeffPlane; 3], pair: &TransformPair) -> Result<RgbImage> {
    let n = planes[0].side();
    for p in &planes[1..] {
        if p.side() != n {
            return Err(shape_err("channel plane", n, p.side()));
        }
    }
    let [y, cb, cr] = planes.each_ref().map(|p| idwt2d(p, pair));
    inverse_precoding(&YcbcrPlanes::new(y?, cb?, cr?)?)
}

pub fn mse(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(shape_err("image", (a.width(), a.height()), (b.width(), b.height())));
    }
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.samples().len() as f64)
}

/// Peak signal-to-noise ratio in dB for 8-bit samples; infinite for identical images.
pub fn psnr(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}

/// Largest absolute difference between two planes.
pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
