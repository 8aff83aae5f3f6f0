//! Twelve-channel subband tensors and the on-disk `WCT1` container shared
//! with training code.

mod tensor;
mod wct;

pub use tensor::{
    channel_name, pack_subbands, unpack_subbands, Component, PackedTensor, CHANNEL_ORDER, PACKED_CHANNELS,
};
pub use wct::{
    label_path, read_labels, read_wct, write_labels, write_operator_bank, write_wct, WctFile, WctLayout, DTYPE_F32,
    HEADER_LEN, WCT_MAGIC, WCT_VERSION,
};
