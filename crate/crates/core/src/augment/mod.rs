//! Flip, shift and rotation augmentations carried into the wavelet domain by
//! conjugation with the analysis matrix.

mod operator;
mod policy;

pub use operator::{
    apply_augmentation, apply_naive, conjugate, flip_matrix, shift_matrix, spatial_operator, AugKind, AugOperator,
    Fill, Side, SpatialOperator,
};
pub use policy::{sample_policy, AugPolicy, OperatorCache, PolicySampler};
