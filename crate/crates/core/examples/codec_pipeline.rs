//! Forward pipeline at several compression settings, stopping at the
//! dequantizer, then the tail of the decoder to measure distortion.
//!
//! `cargo run --example codec_pipeline -- image.ppm` uses a PPM file instead
//! of the built-in synthetic image.

use wavecoef::codec::{decode_tail, forward_pipeline, load_ppm, psnr, step_size_for_ratio};
use wavecoef::synth::natural_image;
use wavecoef::wavelet::{build_transform_pair, LiftingParams};

fn main() -> wavecoef::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_ppm(path)?,
        None => natural_image(64, 11),
    };
    let side = img.square_side()?;
    let pair = build_transform_pair(side, &LiftingParams::default())?;
    for r in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let planes = forward_pipeline(&img, &pair, r)?;
        let zeros = planes
            .iter()
            .map(|p| p.data().iter().filter(|v| **v == 0.0).count())
            .sum::<usize>();
        let decoded = decode_tail(&planes, &pair)?;
        let step = step_size_for_ratio(r)?
            .step()
            .map_or("bypass".to_string(), |d| format!("{d:.3}"));
        println!(
            "r={r:>4}  step={step:>7}  zero coefficients={:5.1}%  psnr={:.2} dB",
            100.0 * zeros as f64 / (3 * side * side) as f64,
            psnr(&img, &decoded)?
        );
    }
    Ok(())
}
