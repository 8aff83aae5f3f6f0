//! Wavelet-domain preprocessing for classifying JPEG2000-compressed images
//! without reconstructing them.
//!
//! The crate follows the irreversible JPEG2000 path as far as the
//! dequantizer and stops there:
//!
//! * [`wavelet`]: the CDF 9/7 transform as dense matrices built from lifting
//!   factors, cross-checked against plain lifting loops.
//! * [`codec`]: level offset, color transform, dead-zone quantization and the
//!   decoder tail (inverse DWT and color conversion) that compressed-domain
//!   inference skips.
//! * [`augment`]: flips, shifts and quarter-turn rotations expressed as
//!   matrices and conjugated so they act directly on coefficients.
//! * [`pack`]: the 12-channel half-resolution network input and its `WCT1`
//!   file format.
//! * [`bench`]: reconstruction-gain and batch-throughput measurements.
//!
//! ```
//! use wavecoef::codec::{decode_tail, forward_pipeline};
//! use wavecoef::pack::pack_subbands;
//! use wavecoef::synth::natural_image;
//! use wavecoef::wavelet::{build_transform_pair, LiftingParams};
//!
//! let img = natural_image(32, 7);
//! let pair = build_transform_pair(32, &LiftingParams::default())?;
//! let [y, cb, cr] = forward_pipeline(&img, &pair, 0.0)?;
//! let tensor = pack_subbands(&y, &cb, &cr)?;
//! assert_eq!((tensor.channels(), tensor.height(), tensor.width()), (12, 16, 16));
//! assert_eq!(decode_tail(&[y, cb, cr], &pair)?, img);
//! # Ok::<(), wavecoef::Error>(())
//! ```

pub mod augment;
pub mod bench;
pub mod cli;
pub mod codec;
pub mod config;
mod error;
pub mod pack;
pub mod synth;
pub mod verify;
pub mod wavelet;

pub use error::{Error, Result};
