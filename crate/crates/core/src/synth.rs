//! Deterministic synthetic test content.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::RgbImage;

/// Uniform random plane in `[-128, 128)`.
pub fn random_plane(n: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((n, n), |_| rng.random_range(-128.0..128.0))
}

/// A square image with photograph-like statistics: a few smooth oriented
/// waves, a soft-edged disc, shared luminance structure across channels and
/// a little sensor noise.
pub fn natural_image(side: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<[f64; 4]> = (0..4)
        .map(|_| {
            let angle = rng.random_range(0.0..std::f64::consts::PI);
            let freq = rng.random_range(0.5..3.0) * std::f64::consts::TAU / side as f64;
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let amp = rng.random_range(10.0..35.0);
            [angle, freq, phase, amp]
        })
        .collect();
    let tint: [f64; 3] = std::array::from_fn(|_| rng.random_range(-40.0..40.0));
    let base = rng.random_range(90.0..170.0);
    let (cx, cy) = (
        rng.random_range(0.25..0.75) * side as f64,
        rng.random_range(0.25..0.75) * side as f64,
    );
    let radius = rng.random_range(0.15..0.35) * side as f64;
    let disc_gain = rng.random_range(-60.0..60.0);

    RgbImage::from_fn(side, side, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let mut lum = base;
        for [angle, freq, phase, amp] in &waves {
            lum += amp * ((xf * angle.cos() + yf * angle.sin()) * freq + phase).sin();
        }
        let dist = ((xf - cx).powi(2) + (yf - cy).powi(2)).sqrt();
        lum += disc_gain / (1.0 + ((dist - radius) / 1.5).exp());
        std::array::from_fn(|c| {
            let noise = rng.random_range(-3.0..3.0);
            let v = lum + tint[c] * (0.5 + 0.5 * (yf / side as f64)) + noise;
            v.round().clamp(0.0, 255.0) as u8
        })
    })
    .expect("side must be even")
}
