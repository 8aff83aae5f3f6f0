//! Builds the analysis/synthesis matrices for one size and checks them
//! against the lifting implementation.
//!
//! `cargo run --example transform_pair -- 16`

use wavecoef::codec::max_abs_diff;
use wavecoef::synth::random_plane;
use wavecoef::wavelet::{build_transform_pair, dwt2d, dwt2d_lifting_reference, idwt2d, LiftingParams};

fn main() -> wavecoef::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let params = LiftingParams::default();
    let pair = build_transform_pair(n, &params)?;

    println!("analysis matrix A ({n}x{n}), row i is the response to an impulse at i:");
    for row in pair.analysis().rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:7.4}")).collect();
        println!("  {}", cells.join(" "));
    }
    let identity = ndarray::Array2::eye(n);
    println!(
        "max |A·A⁻¹ - I| = {:.2e}",
        max_abs_diff(&pair.analysis().dot(pair.synthesis()), &identity)
    );

    let x = random_plane(n, 1);
    let w = dwt2d(x.view(), &pair)?;
    let lifted = dwt2d_lifting_reference(x.view(), &params)?;
    println!("matrix vs lifting:  {:.2e}", max_abs_diff(w.data(), &lifted));
    println!("reconstruction:     {:.2e}", max_abs_diff(&idwt2d(&w, &pair)?, &x));
    Ok(())
}
