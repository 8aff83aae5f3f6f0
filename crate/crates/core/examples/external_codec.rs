//! Round trip through an external JPEG2000 codec described by a TOML config,
//! for example
//!
//! ```toml
//! [codec]
//! encode_cmd = "opj_compress -i {in} -o {out} -r {ratio}"
//! decode_cmd = "opj_decompress -i {in} -o {out}"
//! ```
//!
//! `cargo run --example external_codec -- codec.toml 10`

use wavecoef::codec::{external_codec_roundtrip, psnr};
use wavecoef::config::ToolConfig;
use wavecoef::synth::natural_image;
use wavecoef::Error;

fn main() -> wavecoef::Result<()> {
    let config_path = std::env::args().nth(1).map(std::path::PathBuf::from);
    let ratio: f64 = std::env::args().nth(2).and_then(|r| r.parse().ok()).unwrap_or(10.0);
    let config = ToolConfig::discover(config_path.as_deref())?;
    let Some(codec) = config.codec else {
        println!("no [codec] section configured; pass a TOML file as the first argument");
        return Ok(());
    };
    let img = natural_image(64, 9);
    match external_codec_roundtrip(&img, ratio, &codec) {
        Ok(decoded) => println!("ratio {ratio}: psnr {:.2} dB", psnr(&img, &decoded)?),
        Err(Error::Unavailable(msg)) => println!("codec unavailable: {msg}"),
        Err(e) => return Err(e),
    }
    Ok(())
}
