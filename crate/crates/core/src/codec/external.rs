//! Cross-check against an external JPEG2000 encoder/decoder (for example
//! OpenJPEG's `opj_compress` / `opj_decompress`). Never used by the core path.

use std::path::Path;
use std::process::Command;

use serde::Deserialize;

use super::image::{load_ppm, save_ppm, RgbImage};
use crate::error::{Error, Result};

/// Shell command templates. `{in}`, `{out}` and `{ratio}` are substituted
/// before the command runs under `sh -c`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ExternalCodec {
    pub encode_cmd: String,
    pub decode_cmd: String,
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

fn render(template: &str, input: &Path, output: &Path, ratio: f64) -> String {
    template
        .replace("{in}", &shell_quote(input))
        .replace("{out}", &shell_quote(output))
        .replace("{ratio}", &ratio.to_string())
}

fn run(cmd: &str, stage: &str) -> Result<()> {
    let out = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .output()
        .map_err(|e| Error::Unavailable(format!("cannot spawn shell for {stage}: {e}")))?;
    match out.status.code() {
        Some(0) => Ok(()),
        Some(127) => Err(Error::Unavailable(format!("{stage} command not found: {cmd}"))),
        code => Err(Error::Unavailable(format!(
            "{stage} command failed ({}): {}",
            code.map_or_else(|| "signal".to_string(), |c| format!("exit {c}")),
            String::from_utf8_lossy(&out.stderr).trim()
        ))),
    }
}

impl ExternalCodec {
    /// Encode `img` at `ratio`, decode it again and read the result back.
    /// All intermediate files live in a private temporary directory that is
    /// removed on return.
    pub fn roundtrip(&self, img: &RgbImage, ratio: f64) -> Result<RgbImage> {
        if !ratio.is_finite() || ratio < 0.0 {
            return Err(Error::Range(format!("compression ratio must be >= 0, got {ratio}")));
        }
        let dir = tempfile::tempdir()?;
        let source = dir.path().join("source.ppm");
        let coded = dir.path().join("coded.j2k");
        let decoded = dir.path().join("decoded.ppm");
        save_ppm(img, &source)?;

        run(&render(&self.encode_cmd, &source, &coded, ratio), "encode")?;
        run(&render(&self.decode_cmd, &coded, &decoded, ratio), "decode")?;
        if !decoded.exists() {
            return Err(Error::Unavailable("decoder produced no output".into()));
        }
        load_ppm(&decoded)
    }
}

pub fn external_codec_roundtrip(img: &RgbImage, ratio: f64, codec: &ExternalCodec) -> Result<RgbImage> {
    codec.roundtrip(img, ratio)
}
