//! The JPEG2000 irreversible path around the wavelet transform: 8-bit RGB
//! ingest, level offset and color transform, dead-zone quantization and the
//! decoder tail that a compressed-domain classifier gets to skip.

mod color;
mod external;
mod image;
mod pipeline;
mod quant;

pub use color::{forward_precoding, inverse_precoding, YcbcrPlanes, LEVEL_OFFSET};
pub use external::{external_codec_roundtrip, ExternalCodec};
pub use image::{load_ppm, read_ppm, save_ppm, write_ppm, RgbImage};
pub use pipeline::{analyze, decode_tail, encode, forward_pipeline, max_abs_diff, mse, psnr, EncodedPlanes};
pub use quant::{
    deadzone_quantize, dequantize, dequantize_into, dequantize_value, dequantize_with_bias, quantize_value,
    step_size_for_ratio, QuantizedPlane, StepSize, DEFAULT_RECONSTRUCTION_BIAS,
};
