//! Draws operators from a random flip-and-shift policy, as a data loader
//! would per mini-batch; repeated kinds reuse cached conjugated matrices.

use std::sync::Arc;

use wavecoef::augment::{AugPolicy, Fill, PolicySampler};
use wavecoef::wavelet::{build_transform_pair, LiftingParams};

fn main() -> wavecoef::Result<()> {
    let pair = Arc::new(build_transform_pair(32, &LiftingParams::default())?);
    let policy = AugPolicy {
        seed: 2024,
        p_hflip: 0.5,
        max_shift: 2,
        fill: Fill::Zero,
    };
    let mut sampler = PolicySampler::new(policy, pair)?;
    for i in 0..10 {
        let op = sampler.next_operator()?;
        println!("sample {i}: {:?}", op.kind());
    }
    for _ in 0..1_000 {
        sampler.next_operator()?;
    }
    println!(
        "{} distinct operators cached after 1010 draws",
        sampler.cached_operators()
    );
    Ok(())
}
