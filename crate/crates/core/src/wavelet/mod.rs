//! CDF 9/7 wavelet transform in two independent forms: dense analysis and
//! synthesis matrices built from the lifting factors, and the classic
//! lifting loops.

mod lifting;
mod matrix;
mod plane;
mod transform;

pub use lifting::{
    dwt1d_lifting_reference, dwt2d_lifting_reference, idwt1d_lifting_reference, idwt2d_lifting_reference,
    LiftingParams, CDF97_ALPHA, CDF97_BETA, CDF97_DELTA, CDF97_GAMMA, CDF97_K,
};
pub use matrix::{build_transform_pair, LiftingFactors, TransformPair};
pub use plane::{CoeffPlane, CoeffPyramid, Subband};
pub use transform::{
    dwt2d, dwt_multilevel, dwt_multilevel_with, idwt2d, idwt_multilevel, idwt_partial, idwt_partial_with,
    pairs_for_levels, stack_planes, BatchDwt, BatchScratch,
};
