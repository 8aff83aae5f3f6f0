//! Geometric augmentations as matrix products, and their wavelet-domain form.
//!
//! A spatial augmentation acts on an image plane as `X ↦ G · τ(X) · H`, where
//! `H` acts on columns (horizontal flips and shifts), `G` on rows (vertical
//! flips and shifts) and `τ` is either the identity or a transpose. Because
//! `X_w = Aᵀ · X · A`, the same augmentation applied to coefficients is
//!
//! ```text
//! X_w ↦ (Aᵀ G A⁻ᵀ) · τ(X_w) · (A⁻¹ H A)
//! ```
//!
//! Transposition commutes with the separable transform, so 90° rotations need
//! no extra conjugation.

use ndarray::Array2;

use crate::error::{shape_err, Error, Result};
use crate::wavelet::{CoeffPlane, TransformPair};

/// How a shift fills the pixels it uncovers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fill {
    #[default]
    Zero,
    Circular,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AugKind {
    Identity,
    /// Mirror left-right.
    HFlip,
    /// Mirror top-bottom.
    VFlip,
    /// Move content right by `by` pixels (left when negative).
    HShift {
        by: isize,
        fill: Fill,
    },
    /// Move content down by `by` pixels (up when negative).
    VShift {
        by: isize,
        fill: Fill,
    },
    /// Counter-clockwise rotation by `quarter_turns · 90°`.
    Rot90 {
        quarter_turns: u8,
    },
    /// Applied first to last.
    Compose(Vec<AugKind>),
    /// User-supplied matrices; never cached.
    Custom,
}

/// Which side of the plane a matrix multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `X · H`, acting along rows (horizontal).
    Right,
    /// `G · X`, acting along columns (vertical).
    Left,
}

/// The spatial form `X ↦ G · τ(X) · H`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator {
    pub g: Array2<f64>,
    pub h: Array2<f64>,
    pub transpose: bool,
}

impl SpatialOperator {
    pub fn identity(n: usize) -> Self {
        SpatialOperator {
            g: Array2::eye(n),
            h: Array2::eye(n),
            transpose: false,
        }
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    /// `other ∘ self`: apply `self`, then `other`.
    pub fn then(&self, other: &SpatialOperator) -> SpatialOperator {
        compose_parts(
            (&self.g, self.transpose, &self.h),
            (&other.g, other.transpose, &other.h),
        )
    }

    pub fn apply(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        apply_parts(&self.g, self.transpose, &self.h, x)
    }
}

fn compose_parts(
    first: (&Array2<f64>, bool, &Array2<f64>),
    second: (&Array2<f64>, bool, &Array2<f64>),
) -> SpatialOperator {
    let (g1, t1, h1) = first;
    let (g2, t2, h2) = second;
    // G2 · τ2(G1 · τ1(X) · H1) · H2; a transpose swaps and transposes G1/H1
    if t2 {
        SpatialOperator {
            g: g2.dot(&h1.t()),
            h: g1.t().dot(h2),
            transpose: !t1,
        }
    } else {
        SpatialOperator {
            g: g2.dot(g1),
            h: h1.dot(h2),
            transpose: t1,
        }
    }
}

fn apply_parts(g: &Array2<f64>, transpose: bool, h: &Array2<f64>, x: &Array2<f64>) -> Result<Array2<f64>> {
    let n = h.nrows();
    if x.dim() != (n, n) {
        return Err(shape_err("plane vs operator", (n, n), x.dim()));
    }
    Ok(if transpose {
        g.dot(&x.t()).dot(h)
    } else {
        g.dot(x).dot(h)
    })
}

/// Anti-diagonal permutation: `X · J` reverses columns, `J · X` reverses rows.
pub fn flip_matrix(n: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, n), |(i, j)| if i + j == n - 1 { 1.0 } else { 0.0 })
}

/// Right-multiplication matrix moving columns by `by`: `(X · H)[:, j] = X[:, j - by]`.
pub fn shift_matrix(n: usize, by: isize, fill: Fill) -> Result<Array2<f64>> {
    if by.unsigned_abs() >= n {
        return Err(Error::Range(format!("shift {by} out of range for side {n}")));
    }
    let mut h = Array2::zeros((n, n));
    for j in 0..n {
        let src = j as isize - by;
        let src = match fill {
            Fill::Zero if src < 0 || src >= n as isize => continue,
            Fill::Zero => src as usize,
            Fill::Circular => src.rem_euclid(n as isize) as usize,
        };
        h[[src, j]] = 1.0;
    }
    Ok(h)
}

/// Spatial matrices of a built-in augmentation on an `n × n` plane.
pub fn spatial_operator(kind: &AugKind, n: usize) -> Result<SpatialOperator> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Size(format!("operator side must be even, got {n}")));
    }
    let mut op = SpatialOperator::identity(n);
    match kind {
        AugKind::Identity => {}
        AugKind::HFlip => op.h = flip_matrix(n),
        AugKind::VFlip => op.g = flip_matrix(n),
        AugKind::HShift { by, fill } => op.h = shift_matrix(n, *by, *fill)?,
        // (G · X)[i, :] = X[i - by, :] is the transpose of the column shift
        AugKind::VShift { by, fill } => op.g = shift_matrix(n, *by, *fill)?.reversed_axes(),
        AugKind::Rot90 { quarter_turns } => match quarter_turns % 4 {
            0 => {}
            1 => {
                op.g = flip_matrix(n);
                op.transpose = true;
            }
            2 => {
                op.g = flip_matrix(n);
                op.h = flip_matrix(n);
            }
            _ => {
                op.h = flip_matrix(n);
                op.transpose = true;
            }
        },
        AugKind::Compose(parts) => {
            for part in parts {
                op = op.then(&spatial_operator(part, n)?);
            }
        }
        AugKind::Custom => {
            return Err(Error::Validation(
                "custom operators carry their own matrices; use AugOperator::custom".into(),
            ))
        }
    }
    Ok(op)
}

/// Conjugates a spatial matrix into the coefficient domain:
/// `A⁻¹ · H · A` for [`Side::Right`], `Aᵀ · G · A⁻ᵀ` for [`Side::Left`].
pub fn conjugate(m: &Array2<f64>, pair: &TransformPair, side: Side) -> Result<Array2<f64>> {
    let n = pair.n();
    if m.dim() != (n, n) {
        return Err(shape_err("operator vs transform", (n, n), m.dim()));
    }
    let a = pair.analysis();
    let inv = pair.synthesis();
    Ok(match side {
        Side::Right => inv.dot(m).dot(a),
        Side::Left => a.t().dot(m).dot(&inv.t()),
    })
}

/// A spatial augmentation together with its coefficient-domain equivalent.
#[derive(Debug, Clone)]
pub struct AugOperator {
    kind: AugKind,
    spatial: SpatialOperator,
    g_conj: Array2<f64>,
    h_conj: Array2<f64>,
}

impl AugOperator {
    pub fn new(kind: AugKind, pair: &TransformPair) -> Result<Self> {
        let spatial = spatial_operator(&kind, pair.n())?;
        Self::from_spatial(kind, spatial, pair)
    }

    /// Arbitrary left/right matrices; `None` stands for the identity.
    pub fn custom(g: Option<Array2<f64>>, h: Option<Array2<f64>>, pair: &TransformPair) -> Result<Self> {
        let n = pair.n();
        let spatial = SpatialOperator {
            g: g.unwrap_or_else(|| Array2::eye(n)),
            h: h.unwrap_or_else(|| Array2::eye(n)),
            transpose: false,
        };
        Self::from_spatial(AugKind::Custom, spatial, pair)
    }

    fn from_spatial(kind: AugKind, spatial: SpatialOperator, pair: &TransformPair) -> Result<Self> {
        let g_conj = conjugate(&spatial.g, pair, Side::Left)?;
        let h_conj = conjugate(&spatial.h, pair, Side::Right)?;
        Ok(AugOperator {
            kind,
            spatial,
            g_conj,
            h_conj,
        })
    }

    pub fn kind(&self) -> &AugKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.spatial.n()
    }

    pub fn spatial(&self) -> &SpatialOperator {
        &self.spatial
    }

    pub fn g(&self) -> &Array2<f64> {
        &self.spatial.g
    }

    pub fn h(&self) -> &Array2<f64> {
        &self.spatial.h
    }

    pub fn transposes(&self) -> bool {
        self.spatial.transpose
    }

    pub fn g_conj(&self) -> &Array2<f64> {
        &self.g_conj
    }

    pub fn h_conj(&self) -> &Array2<f64> {
        &self.h_conj
    }

    pub fn is_identity(&self) -> bool {
        self.kind == AugKind::Identity
    }

    /// The augmentation on an image plane.
    pub fn apply_spatial(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        self.spatial.apply(x)
    }
}

/// The augmentation on a level-1 coefficient plane: `G_conj · τ(X_w) · H_conj`.
pub fn apply_augmentation(w: &CoeffPlane, op: &AugOperator) -> Result<CoeffPlane> {
    if w.level() != 1 {
        return Err(Error::Validation(format!(
            "augmentation is defined on level-1 planes, got level {}",
            w.level()
        )));
    }
    let out = apply_parts(op.g_conj(), op.transposes(), op.h_conj(), w.data())?;
    CoeffPlane::new(out, 1)
}

/// The spatial matrices applied to the coefficient grid as if it were an
/// image. This is the incorrect transfer of a spatial augmentation and is
/// kept as a negative control.
pub fn apply_naive(w: &CoeffPlane, op: &AugOperator) -> Result<CoeffPlane> {
    let out = op.apply_spatial(w.data())?;
    CoeffPlane::new(out, w.level())
}
