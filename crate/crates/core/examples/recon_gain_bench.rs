//! Fraction of decoder time saved by handing dequantized coefficients to the
//! model instead of finishing the inverse transform.
//!
//! Build with `--release` for meaningful numbers.

use wavecoef::bench::{bench_recon_gain, MIN_ITERATIONS};

fn main() -> wavecoef::Result<()> {
    let report = bench_recon_gain(&[32, 64, 224], MIN_ITERATIONS)?;
    println!("{}", report.describe());
    Ok(())
}
