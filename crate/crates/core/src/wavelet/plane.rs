use ndarray::{s, Array2, ArrayView2};

use super::lifting::LiftingParams;
use crate::error::{Error, Result};

/// One quadrant of a level-1 decomposition. The first letter is the
/// horizontal (column) filter, the second the vertical (row) filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subband {
    LL,
    HL,
    LH,
    HH,
}

impl Subband {
    pub const ALL: [Subband; 4] = [Subband::LL, Subband::HL, Subband::LH, Subband::HH];

    /// `(row, col)` quadrant index: HL sits top-right, LH bottom-left.
    pub fn quadrant(self) -> (usize, usize) {
        match self {
            Subband::LL => (0, 0),
            Subband::HL => (0, 1),
            Subband::LH => (1, 0),
            Subband::HH => (1, 1),
        }
    }
}

/// An `n × n` grid of wavelet coefficients in subband layout.
///
/// `level` counts the decompositions present in the grid. A level-1 plane is
/// four quadrants; deeper planes keep decomposing the top-left quadrant.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPlane {
    level: usize,
    data: Array2<f64>,
}

impl CoeffPlane {
    pub fn new(data: Array2<f64>, level: usize) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(Error::Size(format!(
                "coefficient plane must be square, got {rows}x{cols}"
            )));
        }
        if level == 0 {
            return Err(Error::Range("coefficient plane level must be at least 1".into()));
        }
        if rows % (1 << level) != 0 {
            return Err(Error::Size(format!("side {rows} is not divisible by 2^{level}")));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("coefficient plane contains non-finite values".into()));
        }
        Ok(CoeffPlane { level, data })
    }

    pub(crate) fn from_parts_unchecked(data: Array2<f64>, level: usize) -> Self {
        CoeffPlane { level, data }
    }

    /// Overwrites the contents in place; `f` receives the current grid.
    pub(crate) fn overwrite(&mut self, level: usize, f: impl FnOnce(&mut Array2<f64>)) {
        self.level = level;
        f(&mut self.data);
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(Array2::zeros((n, n)), 1)
    }

    pub fn side(&self) -> usize {
        self.data.nrows()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    /// View of one level-1 quadrant.
    pub fn subband(&self, band: Subband) -> ArrayView2<'_, f64> {
        let h = self.side() / 2;
        let (qr, qc) = band.quadrant();
        self.data.slice(s![qr * h..(qr + 1) * h, qc * h..(qc + 1) * h])
    }

    /// The four level-1 quadrants in `LL, HL, LH, HH` order.
    pub fn split_subbands(&self) -> [Array2<f64>; 4] {
        Subband::ALL.map(|b| self.subband(b).to_owned())
    }

    /// Inverse of [`CoeffPlane::split_subbands`].
    pub fn merge_subbands(bands: &[Array2<f64>; 4], level: usize) -> Result<Self> {
        let h = bands[0].nrows();
        for b in bands {
            if b.dim() != (h, h) {
                return Err(crate::error::shape_err("subband", (h, h), b.dim()));
            }
        }
        let mut data = Array2::zeros((2 * h, 2 * h));
        for (band, values) in Subband::ALL.iter().zip(bands) {
            let (qr, qc) = band.quadrant();
            data.slice_mut(s![qr * h..(qr + 1) * h, qc * h..(qc + 1) * h])
                .assign(values);
        }
        Self::new(data, level)
    }
}

/// A multi-level decomposition stored in place: the deepest LL band sits in
/// the top-left corner, each coarser ring of detail bands around it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPyramid {
    levels: usize,
    grid: Array2<f64>,
    params: LiftingParams,
}

impl CoeffPyramid {
    pub fn new(grid: Array2<f64>, levels: usize) -> Result<Self> {
        let plane = CoeffPlane::new(grid, levels)?;
        Ok(CoeffPyramid {
            levels,
            grid: plane.data,
            params: LiftingParams::default(),
        })
    }

    /// Records the lifting parameters the pyramid was produced with, so the
    /// inverse uses the same ones.
    pub fn with_params(mut self, params: LiftingParams) -> Self {
        self.params = params;
        self
    }

    pub fn params(&self) -> &LiftingParams {
        &self.params
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Side length of the original image.
    pub fn side(&self) -> usize {
        self.grid.nrows()
    }

    pub fn grid(&self) -> &Array2<f64> {
        &self.grid
    }

    pub fn coefficient_count(&self) -> usize {
        self.grid.len()
    }

    /// The final low/low band.
    pub fn ll(&self) -> ArrayView2<'_, f64> {
        let h = self.side() >> self.levels;
        self.grid.slice(s![..h, ..h])
    }

    /// Detail band `band` produced at decomposition `level` (1 = finest).
    pub fn detail(&self, level: usize, band: Subband) -> Result<ArrayView2<'_, f64>> {
        if level == 0 || level > self.levels {
            return Err(Error::Range(format!("level {level} outside 1..={}", self.levels)));
        }
        if band == Subband::LL {
            return Err(Error::Validation("LL is not a detail band; use ll()".into()));
        }
        let h = self.side() >> level;
        let (qr, qc) = band.quadrant();
        Ok(self.grid.slice(s![qr * h..(qr + 1) * h, qc * h..(qc + 1) * h]))
    }

    /// The grid viewed as a plane carrying all its levels.
    pub fn to_plane(&self) -> CoeffPlane {
        CoeffPlane::from_parts_unchecked(self.grid.clone(), self.levels)
    }

    pub fn into_plane(self) -> CoeffPlane {
        CoeffPlane::from_parts_unchecked(self.grid, self.levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_merge_identity() {
        let data = Array2::from_shape_fn((8, 8), |(i, j)| (i * 8 + j) as f64);
        let plane = CoeffPlane::new(data, 1).unwrap();
        let back = CoeffPlane::merge_subbands(&plane.split_subbands(), 1).unwrap();
        assert_eq!(plane, back);
    }

    #[test]
    fn quadrant_positions() {
        let mut data = Array2::zeros((4, 4));
        data[[0, 3]] = 1.0; // top-right
        data[[3, 0]] = 2.0; // bottom-left
        let plane = CoeffPlane::new(data, 1).unwrap();
        assert_eq!(plane.subband(Subband::HL)[[0, 1]], 1.0);
        assert_eq!(plane.subband(Subband::LH)[[1, 0]], 2.0);
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(matches!(CoeffPlane::new(Array2::zeros((4, 6)), 1), Err(Error::Size(_))));
        let mut d = Array2::zeros((4, 4));
        d[[1, 1]] = f64::NAN;
        assert!(matches!(CoeffPlane::new(d, 1), Err(Error::Validation(_))));
        assert!(matches!(
            CoeffPlane::new(Array2::zeros((12, 12)), 3),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn pyramid_detail_views() {
        let grid = Array2::from_shape_fn((16, 16), |(i, j)| (i * 16 + j) as f64);
        let p = CoeffPyramid::new(grid, 2).unwrap();
        assert_eq!(p.coefficient_count(), 256);
        assert_eq!(p.ll().dim(), (4, 4));
        let hh2 = p.detail(2, Subband::HH).unwrap();
        assert_eq!(hh2[[0, 0]], (4 * 16 + 4) as f64);
        assert!(p.detail(3, Subband::HL).is_err());
        assert!(p.detail(1, Subband::LL).is_err());
    }
}
