//! Three-level pyramid of a synthetic image and partial reconstruction to
//! each intermediate level.

use wavecoef::codec::{forward_precoding, max_abs_diff};
use wavecoef::synth::natural_image;
use wavecoef::wavelet::{dwt_multilevel, idwt_multilevel, idwt_partial, LiftingParams, Subband};

fn main() -> wavecoef::Result<()> {
    let img = natural_image(64, 3);
    let y = forward_precoding(&img).y;
    let pyr = dwt_multilevel(y.view(), 3, &LiftingParams::default())?;

    println!("LL{} is {}x{}", pyr.levels(), pyr.ll().nrows(), pyr.ll().ncols());
    for level in 1..=pyr.levels() {
        let energy: f64 = [Subband::HL, Subband::LH, Subband::HH]
            .iter()
            .map(|b| {
                pyr.detail(level, *b)
                    .map(|d| d.iter().map(|v| v * v).sum::<f64>())
                    .unwrap_or(0.0)
            })
            .sum();
        println!("level {level} detail energy {energy:.1}");
    }
    for target in (1..=pyr.levels()).rev() {
        let plane = idwt_partial(&pyr, target)?;
        println!(
            "partial reconstruction to level {target}: {}x{} grid",
            plane.side(),
            plane.side()
        );
    }
    println!(
        "full reconstruction error {:.2e}",
        max_abs_diff(&idwt_multilevel(&pyr)?, &y)
    );
    Ok(())
}
