//! Optional TOML configuration for the command-line tool.
//!
//! ```toml
//! [codec]
//! encode_cmd = "opj_compress -i {in} -o {out} -r {ratio}"
//! decode_cmd = "opj_decompress -i {in} -o {out}"
//!
//! [augment]
//! seed = 7
//! p_hflip = 0.5
//! max_shift = 4
//! fill = "zero"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::augment::AugPolicy;
use crate::codec::ExternalCodec;
use crate::error::{Error, Result};

/// Environment variable naming the config file when `--config` is not given.
pub const CONFIG_ENV: &str = "WAVECOEF_CODEC_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolConfig {
    pub codec: Option<ExternalCodec>,
    pub augment: Option<AugPolicy>,
}

impl ToolConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(format!("config: {}", e.message())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// `explicit`, else the path in [`CONFIG_ENV`], else an empty config.
    pub fn discover(explicit: Option<&Path>) -> Result<Self> {
        let path = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::Fill;

    #[test]
    fn parses_both_sections() {
        let cfg = ToolConfig::parse(
            r#"
            [codec]
            encode_cmd = "enc {in} {out} {ratio}"
            decode_cmd = "dec {in} {out}"
            [augment]
            seed = 3
            p_hflip = 0.25
            max_shift = 2
            fill = "circular"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.codec.unwrap().decode_cmd, "dec {in} {out}");
        let aug = cfg.augment.unwrap();
        assert_eq!((aug.seed, aug.max_shift, aug.fill), (3, 2, Fill::Circular));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            ToolConfig::parse("[augment]\nrotate = true\n"),
            Err(Error::Format(_))
        ));
        assert_eq!(ToolConfig::parse("").unwrap(), ToolConfig::default());
    }
}
