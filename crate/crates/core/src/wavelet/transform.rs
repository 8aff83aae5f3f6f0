use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array2, Array3, ArrayView2, Axis};

use super::lifting::LiftingParams;
use super::matrix::{build_transform_pair, TransformPair};
use super::plane::{CoeffPlane, CoeffPyramid};
use crate::error::{shape_err, Error, Result};

fn check_square(x: &ArrayView2<'_, f64>, n: usize) -> Result<()> {
    if x.dim() != (n, n) {
        return Err(shape_err("plane vs transform", (n, n), x.dim()));
    }
    Ok(())
}

/// Forward level-1 transform `Aᵀ · x · A`.
pub fn dwt2d(x: ArrayView2<'_, f64>, pair: &TransformPair) -> Result<CoeffPlane> {
    check_square(&x, pair.n())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("input plane contains non-finite values".into()));
    }
    let a = pair.analysis();
    let w = a.t().dot(&x).dot(a);
    Ok(CoeffPlane::from_parts_unchecked(w, 1))
}

/// Inverse level-1 transform `A⁻ᵀ · w · A⁻¹`.
pub fn idwt2d(w: &CoeffPlane, pair: &TransformPair) -> Result<Array2<f64>> {
    check_square(&w.data().view(), pair.n())?;
    if w.level() != 1 {
        return Err(Error::Validation(format!(
            "idwt2d inverts a level-1 plane, got level {}; use idwt_partial first",
            w.level()
        )));
    }
    Ok(synthesize(w.data().view(), pair))
}

fn synthesize(w: ArrayView2<'_, f64>, pair: &TransformPair) -> Array2<f64> {
    let inv = pair.synthesis();
    inv.t().dot(&w).dot(inv)
}

/// Transform pairs for sides `n, n/2, …` down to the last level.
pub fn pairs_for_levels(n: usize, levels: usize, params: &LiftingParams) -> Result<Vec<TransformPair>> {
    if levels == 0 {
        return Err(Error::Range("level count must be at least 1".into()));
    }
    if levels >= usize::BITS as usize || !n.is_multiple_of(1 << levels) {
        return Err(Error::Size(format!("side {n} is not divisible by 2^{levels}")));
    }
    (0..levels).map(|l| build_transform_pair(n >> l, params)).collect()
}

/// Repeated level-1 transforms of the low/low band.
pub fn dwt_multilevel(x: ArrayView2<'_, f64>, levels: usize, params: &LiftingParams) -> Result<CoeffPyramid> {
    let (rows, cols) = x.dim();
    if rows != cols {
        return Err(Error::Size(format!("plane must be square, got {rows}x{cols}")));
    }
    let pairs = pairs_for_levels(rows, levels, params)?;
    dwt_multilevel_with(x, &pairs)
}

/// As [`dwt_multilevel`] with prebuilt pairs, one per level starting at full size.
pub fn dwt_multilevel_with(x: ArrayView2<'_, f64>, pairs: &[TransformPair]) -> Result<CoeffPyramid> {
    let first = pairs
        .first()
        .ok_or_else(|| Error::Range("level count must be at least 1".into()))?;
    let mut grid = dwt2d(x, first)?.into_data();
    for pair in &pairs[1..] {
        let m = pair.n();
        if m * 2 > grid.nrows() || grid.nrows() % m != 0 {
            return Err(shape_err("pair for next level", grid.nrows() / 2, m));
        }
        let ll = grid.slice(s![..m, ..m]).to_owned();
        let next = dwt2d(ll.view(), pair)?;
        grid.slice_mut(s![..m, ..m]).assign(next.data());
    }
    Ok(CoeffPyramid::new(grid, pairs.len())?.with_params(*first.params()))
}

/// Undo the coarsest `levels - target` decompositions, returning the grid as
/// a plane that still carries `target` levels.
pub fn idwt_partial(p: &CoeffPyramid, target: usize) -> Result<CoeffPlane> {
    if target == 0 || target > p.levels() {
        return Err(Error::Range(format!(
            "target level {target} outside 1..={}",
            p.levels()
        )));
    }
    let pairs = pairs_for_levels(p.side(), p.levels(), p.params())?;
    idwt_partial_with(p, target, &pairs)
}

pub fn idwt_partial_with(p: &CoeffPyramid, target: usize, pairs: &[TransformPair]) -> Result<CoeffPlane> {
    if target == 0 || target > p.levels() {
        return Err(Error::Range(format!(
            "target level {target} outside 1..={}",
            p.levels()
        )));
    }
    if pairs.len() < p.levels() {
        return Err(shape_err("pair count", p.levels(), pairs.len()));
    }
    let mut grid = p.grid().clone();
    // level l (1-based) was produced on a side of n >> (l - 1)
    for level in (target + 1..=p.levels()).rev() {
        let pair = &pairs[level - 1];
        let m = pair.n();
        let block = synthesize(grid.slice(s![..m, ..m]), pair);
        grid.slice_mut(s![..m, ..m]).assign(&block);
    }
    Ok(CoeffPlane::from_parts_unchecked(grid, target))
}

/// Full inverse of a pyramid back to the spatial plane.
pub fn idwt_multilevel(p: &CoeffPyramid) -> Result<Array2<f64>> {
    let pairs = pairs_for_levels(p.side(), p.levels(), p.params())?;
    let level1 = idwt_partial_with(p, 1, &pairs)?;
    idwt2d(&level1, &pairs[0])
}

/// Single-precision analysis of many equally sized planes at once.
///
/// Batched single-precision transform for dataset-scale preprocessing.
///
/// Planes are stacked into tall matrices and multiplied by `A` one cache-sized
/// chunk at a time; each plane of that result is then multiplied by `Aᵀ` from
/// the left, which realizes `Aᵀ · x · A` without transposing any data.
// planes per chunk are chosen so the intermediate stays in L2
const BATCH_CHUNK_ELEMENTS: usize = 64 * 1024;

#[derive(Debug, Clone)]
pub struct BatchDwt {
    n: usize,
    analysis: Array2<f32>,
    synthesis: Array2<f32>,
}

/// Scratch space for [`BatchDwt::forward_into`], reusable across batches of
/// the same size.
#[derive(Debug, Clone, Default)]
pub struct BatchScratch {
    half: Array2<f32>,
}

impl BatchDwt {
    pub fn new(pair: &TransformPair) -> Self {
        BatchDwt {
            n: pair.n(),
            analysis: pair.analysis().mapv(|v| v as f32),
            synthesis: pair.synthesis().mapv(|v| v as f32),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `planes` has shape `(count, n, n)`.
    pub fn forward(&self, planes: &Array3<f32>) -> Result<Array3<f32>> {
        let mut out = Array3::zeros(planes.dim());
        self.forward_into(planes, &mut out, &mut BatchScratch::default())?;
        Ok(out)
    }

    pub fn inverse(&self, coeffs: &Array3<f32>) -> Result<Array3<f32>> {
        let mut out = Array3::zeros(coeffs.dim());
        self.apply(coeffs, &mut out, &mut BatchScratch::default(), &self.synthesis)?;
        Ok(out)
    }

    /// Allocation-free variant of [`forward`](Self::forward) once `scratch`
    /// has grown to the batch size.
    pub fn forward_into(&self, planes: &Array3<f32>, out: &mut Array3<f32>, scratch: &mut BatchScratch) -> Result<()> {
        self.apply(planes, out, scratch, &self.analysis)
    }

    fn apply(
        &self,
        planes: &Array3<f32>,
        out: &mut Array3<f32>,
        scratch: &mut BatchScratch,
        m: &Array2<f32>,
    ) -> Result<()> {
        let (_, rows, cols) = planes.dim();
        if rows != self.n || cols != self.n {
            return Err(shape_err("batch plane", (self.n, self.n), (rows, cols)));
        }
        if out.dim() != planes.dim() {
            return Err(shape_err("batch output", planes.dim(), out.dim()));
        }
        let n = self.n;
        let planes = planes.as_standard_layout();
        let chunk = (BATCH_CHUNK_ELEMENTS / (n * n)).max(1);
        if scratch.half.dim() != (chunk * n, n) {
            scratch.half = Array2::zeros((chunk * n, n));
        }
        for (xs, mut os) in planes
            .axis_chunks_iter(Axis(0), chunk)
            .zip(out.axis_chunks_iter_mut(Axis(0), chunk))
        {
            let c = xs.dim().0;
            let tall = xs.into_shape_with_order((c * n, n)).expect("standard layout");
            let mut half = scratch.half.slice_mut(s![..c * n, ..]);
            general_mat_mul(1.0, &tall, m, 0.0, &mut half);
            for (k, mut o) in os.outer_iter_mut().enumerate() {
                let y = half.slice(s![k * n..(k + 1) * n, ..]);
                general_mat_mul(1.0, &m.t(), &y, 0.0, &mut o);
            }
        }
        Ok(())
    }
}

/// Per-plane convenience over [`BatchDwt`], useful for small batches of views.
pub fn stack_planes<'a>(planes: impl IntoIterator<Item = ArrayView2<'a, f32>>, n: usize) -> Result<Array3<f32>> {
    let views: Vec<_> = planes.into_iter().collect();
    for v in &views {
        if v.dim() != (n, n) {
            return Err(shape_err("plane", (n, n), v.dim()));
        }
    }
    if views.is_empty() {
        return Ok(Array3::zeros((0, n, n)));
    }
    ndarray::stack(Axis(0), &views).map_err(|e| Error::Shape(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_plane(n: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((n, n), |_| rng.random_range(-128.0..128.0))
    }

    fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_in_zero_out() {
        let pair = build_transform_pair(16, &LiftingParams::default()).unwrap();
        let w = dwt2d(Array2::zeros((16, 16)).view(), &pair).unwrap();
        assert!(w.data().iter().all(|&v| v == 0.0));
        let x = idwt2d(&w, &pair).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let pair = build_transform_pair(16, &LiftingParams::default()).unwrap();
        let err = dwt2d(Array2::zeros((8, 8)).view(), &pair).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
        let w = CoeffPlane::zeros(8).unwrap();
        assert!(matches!(idwt2d(&w, &pair), Err(Error::Shape(_))));
    }

    #[test]
    fn ll_only_constant_reconstructs_constant() {
        let pair = build_transform_pair(16, &LiftingParams::default()).unwrap();
        let mut w = Array2::zeros((16, 16));
        w.slice_mut(s![..8, ..8]).fill(-3.5);
        let x = idwt2d(&CoeffPlane::new(w, 1).unwrap(), &pair).unwrap();
        assert!(x.iter().all(|v| (v + 3.5).abs() < 1e-9));
    }

    #[test]
    fn multilevel_single_level_matches_plane() {
        let x = random_plane(16, 3);
        let pair = build_transform_pair(16, &LiftingParams::default()).unwrap();
        let pyr = dwt_multilevel(x.view(), 1, &LiftingParams::default()).unwrap();
        assert_eq!(pyr.grid(), dwt2d(x.view(), &pair).unwrap().data());
    }

    #[test]
    fn multilevel_roundtrip_and_partial() {
        let x = random_plane(32, 9);
        let pyr = dwt_multilevel(x.view(), 2, &LiftingParams::default()).unwrap();
        assert!(max_abs_diff(&idwt_multilevel(&pyr).unwrap(), &x) < 1e-9);

        let pair = build_transform_pair(32, &LiftingParams::default()).unwrap();
        let level1 = idwt_partial(&pyr, 1).unwrap();
        assert!(max_abs_diff(level1.data(), dwt2d(x.view(), &pair).unwrap().data()) < 1e-9);

        let same = idwt_partial(&pyr, 2).unwrap();
        assert_eq!(same.data(), pyr.grid());
        assert!(matches!(idwt_partial(&pyr, 3), Err(Error::Range(_))));
        assert!(matches!(idwt_partial(&pyr, 0), Err(Error::Range(_))));
    }

    #[test]
    fn multilevel_rejects_indivisible() {
        let x = Array2::zeros((24, 24));
        assert!(matches!(
            dwt_multilevel(x.view(), 4, &LiftingParams::default()),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn batch_matches_double_path() {
        let pair = build_transform_pair(32, &LiftingParams::default()).unwrap();
        let batch = BatchDwt::new(&pair);
        let planes: Vec<Array2<f64>> = (0..5).map(|s| random_plane(32, s)).collect();
        let single: Vec<Array2<f32>> = planes.iter().map(|p| p.mapv(|v| v as f32)).collect();
        let stacked = stack_planes(single.iter().map(|p| p.view()), 32).unwrap();
        let out = batch.forward(&stacked).unwrap();
        for (i, p) in planes.iter().enumerate() {
            let expect = dwt2d(p.view(), &pair).unwrap();
            let got = out.index_axis(Axis(0), i).mapv(|v| v as f64);
            assert!(max_abs_diff(&got, expect.data()) < 1e-3);
        }
        let back = batch.inverse(&out).unwrap();
        let err = back
            .iter()
            .zip(stacked.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f32, f32::max);
        assert!(err < 1e-3, "{err}");
    }
}
