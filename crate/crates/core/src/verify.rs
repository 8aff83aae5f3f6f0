//! Self-check suite run by `wavecoef verify`: each check compares one path of
//! the library against an independent one on fixed seeded inputs.

use ndarray::Array2;

use crate::augment::{apply_augmentation, apply_naive, AugKind, AugOperator, Fill};
use crate::codec::{deadzone_quantize, decode_tail, dequantize, forward_pipeline, max_abs_diff};
use crate::error::Result;
use crate::synth::{natural_image, random_plane};
use crate::wavelet::{build_transform_pair, dwt2d, dwt2d_lifting_reference, idwt2d, CoeffPlane, LiftingParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn within(name: &'static str, err: f64, tol: f64) -> Self {
        CheckResult {
            name,
            passed: err < tol,
            detail: format!("max error {err:.3e} (tolerance {tol:.0e})"),
        }
    }

    pub fn line(&self) -> String {
        if self.passed {
            format!("ok {} ({})", self.name, self.detail)
        } else {
            format!("FAILED {}: {}", self.name, self.detail)
        }
    }
}

fn factorization() -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for n in [4, 8, 32, 64] {
        let pair = build_transform_pair(n, &LiftingParams::default())?;
        worst = worst.max(max_abs_diff(&pair.factors().product(), pair.analysis()));
        worst = worst.max(max_abs_diff(&pair.analysis().dot(pair.synthesis()), &Array2::eye(n)));
    }
    Ok(CheckResult::within("factorization", worst, 1e-10))
}

fn perfect_reconstruction() -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for (k, n) in [8usize, 16, 32, 64, 224].into_iter().enumerate() {
        let pair = build_transform_pair(n, &LiftingParams::default())?;
        let x = random_plane(n, k as u64);
        let back = idwt2d(&dwt2d(x.view(), &pair)?, &pair)?;
        worst = worst.max(max_abs_diff(&back, &x));
    }
    Ok(CheckResult::within("perfect-reconstruction", worst, 1e-10))
}

fn matrix_lifting_equivalence() -> Result<CheckResult> {
    let params = LiftingParams::default();
    let pair = build_transform_pair(32, &params)?;
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let x = random_plane(32, 100 + seed);
        let m = dwt2d(x.view(), &pair)?;
        let l = dwt2d_lifting_reference(x.view(), &params)?;
        worst = worst.max(max_abs_diff(m.data(), &l));
    }
    Ok(CheckResult::within("matrix-lifting-equivalence", worst, 1e-9))
}

fn constant_image() -> Result<CheckResult> {
    let pair = build_transform_pair(32, &LiftingParams::default())?;
    let w = dwt2d(Array2::from_elem((32, 32), 128.0).view(), &pair)?;
    let mut worst = 0.0f64;
    for ((i, j), v) in w.data().indexed_iter() {
        let expect = if i < 16 && j < 16 { 128.0 } else { 0.0 };
        worst = worst.max((v - expect).abs());
    }
    Ok(CheckResult::within("constant-image", worst, 1e-9))
}

fn conjugation() -> Result<Vec<CheckResult>> {
    let pair = build_transform_pair(32, &LiftingParams::default())?;
    let img = natural_image(32, 5);
    let [y, ..] = forward_pipeline(&img, &pair, 0.0)?;
    let spatial = idwt2d(&y, &pair)?;
    let kinds = [
        AugKind::HFlip,
        AugKind::VFlip,
        AugKind::HShift {
            by: 3,
            fill: Fill::Zero,
        },
        AugKind::VShift {
            by: -2,
            fill: Fill::Zero,
        },
        AugKind::Rot90 { quarter_turns: 1 },
    ];
    let mut worst = 0.0f64;
    for kind in kinds {
        let op = AugOperator::new(kind, &pair)?;
        let recon = idwt2d(&apply_augmentation(&y, &op)?, &pair)?;
        worst = worst.max(max_abs_diff(&recon, &op.apply_spatial(&spatial)?));
    }
    let flip = AugOperator::new(AugKind::HFlip, &pair)?;
    let naive = idwt2d(&apply_naive(&y, &flip)?, &pair)?;
    let naive_err = max_abs_diff(&naive, &flip.apply_spatial(&spatial)?);
    Ok(vec![
        CheckResult::within("conjugated-augmentation", worst, 1e-6),
        CheckResult {
            name: "naive-flip-negative-control",
            passed: naive_err > 0.1,
            detail: format!("naive flip error {naive_err:.3} (must exceed 0.1)"),
        },
    ])
}

fn quantizer_bound() -> Result<CheckResult> {
    let values = Array2::from_shape_fn((40, 40), |(i, j)| (i * 40 + j) as f64 * 0.0125 - 10.0);
    let plane = CoeffPlane::new(values.clone(), 1)?;
    let mut ok = true;
    let mut worst_ratio = 0.0f64;
    for step in [1.0, 2.0, 8.0] {
        let q = deadzone_quantize(&plane, step)?;
        let back = dequantize(&q);
        for ((y, yhat), qi) in values.iter().zip(back.data()).zip(q.indices()) {
            ok &= (*qi == 0) == (y.abs() < step);
            worst_ratio = worst_ratio.max((y - yhat).abs() / step);
        }
    }
    Ok(CheckResult {
        name: "quantizer-bound",
        passed: ok && worst_ratio <= 1.0,
        detail: format!("dead zone consistent: {ok}, worst error {worst_ratio:.3} steps"),
    })
}

fn lossless_pipeline() -> Result<CheckResult> {
    let pair = build_transform_pair(32, &LiftingParams::default())?;
    let mut mismatches = 0;
    for seed in 0..5 {
        let img = natural_image(32, seed);
        if decode_tail(&forward_pipeline(&img, &pair, 0.0)?, &pair)? != img {
            mismatches += 1;
        }
    }
    Ok(CheckResult {
        name: "lossless-at-ratio-0",
        passed: mismatches == 0,
        detail: format!("{mismatches}/5 images differ"),
    })
}

pub fn run_checks() -> Result<Vec<CheckResult>> {
    let mut out = vec![
        factorization()?,
        perfect_reconstruction()?,
        matrix_lifting_equivalence()?,
        constant_image()?,
    ];
    out.extend(conjugation()?);
    out.push(quantizer_bound()?);
    out.push(lossless_pipeline()?);
    Ok(out)
}
