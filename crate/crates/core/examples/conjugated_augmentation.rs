//! Flips and shifts applied directly to coefficients, compared with the same
//! augmentation applied to pixels and with the naive subband flip.

use wavecoef::augment::{apply_augmentation, apply_naive, AugKind, AugOperator, Fill};
use wavecoef::codec::{forward_pipeline, max_abs_diff};
use wavecoef::synth::natural_image;
use wavecoef::wavelet::{build_transform_pair, idwt2d, LiftingParams};

fn main() -> wavecoef::Result<()> {
    let n = 32;
    let pair = build_transform_pair(n, &LiftingParams::default())?;
    let [y, _, _] = forward_pipeline(&natural_image(n, 5), &pair, 0.0)?;
    let spatial = idwt2d(&y, &pair)?;

    let kinds = [
        AugKind::HFlip,
        AugKind::VFlip,
        AugKind::HShift {
            by: 3,
            fill: Fill::Zero,
        },
        AugKind::VShift {
            by: -2,
            fill: Fill::Circular,
        },
        AugKind::Rot90 { quarter_turns: 1 },
        AugKind::Compose(vec![
            AugKind::HFlip,
            AugKind::VShift {
                by: 1,
                fill: Fill::Zero,
            },
        ]),
    ];
    for kind in kinds {
        let op = AugOperator::new(kind.clone(), &pair)?;
        let expect = op.apply_spatial(&spatial)?;
        let conj = idwt2d(&apply_augmentation(&y, &op)?, &pair)?;
        let naive = idwt2d(&apply_naive(&y, &op)?, &pair)?;
        println!(
            "{kind:?}: conjugated error {:.1e}, naive error {:.1}",
            max_abs_diff(&conj, &expect),
            max_abs_diff(&naive, &expect)
        );
    }
    Ok(())
}
