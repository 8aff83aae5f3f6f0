//! Packs a small batch into 12-channel tensors, writes the WCT file and its
//! label sidecar, and reads both back.

use wavecoef::codec::{decode_tail, forward_pipeline};
use wavecoef::pack::{
    channel_name, label_path, pack_subbands, read_labels, read_wct, unpack_subbands, write_labels, write_wct,
};
use wavecoef::synth::natural_image;
use wavecoef::wavelet::{build_transform_pair, LiftingParams};

fn main() -> wavecoef::Result<()> {
    let side = 32;
    let pair = build_transform_pair(side, &LiftingParams::default())?;
    let images: Vec<_> = (0..4).map(|i| natural_image(side, 40 + i)).collect();
    let mut tensors = Vec::new();
    for img in &images {
        let [y, cb, cr] = forward_pipeline(img, &pair, 0.0)?;
        tensors.push(pack_subbands(&y, &cb, &cr)?);
    }

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("batch.wct");
    write_wct(&path, &tensors)?;
    write_labels(label_path(&path), &[0, 1, 2, 3])?;
    println!(
        "{} bytes for {} tensors",
        std::fs::metadata(&path)?.len(),
        tensors.len()
    );

    let back = read_wct(&path)?;
    let labels = read_labels(label_path(&path))?;
    let first = &back[0];
    for c in 0..first.channels() {
        let ch = first.data().index_axis(ndarray::Axis(0), c);
        let rms = (ch.iter().map(|v| f64::from(*v).powi(2)).sum::<f64>() / ch.len() as f64).sqrt();
        println!("channel {c:2} {:<6} rms {rms:8.3}", channel_name(c).unwrap_or_default());
    }
    for ((t, img), label) in back.iter().zip(&images).zip(&labels) {
        let decoded = decode_tail(&unpack_subbands(t)?, &pair)?;
        println!("label {label}: decoded image identical = {}", &decoded == img);
    }
    Ok(())
}
