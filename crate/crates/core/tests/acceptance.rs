//! End-to-end acceptance criteria. Each test prints one `PASS`/`FAIL` line to
//! stderr (visible without `--nocapture`) and then asserts.
//!
//! The tests share one lock so the timing criteria never overlap other work.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wavecoef::augment::{apply_augmentation, apply_naive, AugKind, AugOperator, Fill};
use wavecoef::bench::{bench_batch_dwt, bench_recon_gain, MIN_ITERATIONS};
use wavecoef::codec::{
    deadzone_quantize, decode_tail, dequantize, dequantize_value, forward_pipeline, max_abs_diff, psnr, quantize_value,
    write_ppm, DEFAULT_RECONSTRUCTION_BIAS,
};
use wavecoef::pack::{pack_subbands, read_wct, unpack_subbands, write_wct};
use wavecoef::synth::{natural_image, random_plane};
use wavecoef::wavelet::{build_transform_pair, dwt2d, dwt2d_lifting_reference, idwt2d, CoeffPlane, LiftingParams};

static SERIAL: Mutex<()> = Mutex::new(());

fn report(id: u32, name: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance {id} {name}: {verdict} ({detail})");
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_perfect_reconstruction() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [8usize, 16, 32, 64, 224] {
        let pair = build_transform_pair(n, &LiftingParams::default()).unwrap();
        for seed in 0..100 {
            let x = random_plane(n, (n as u64) << 16 | seed);
            let back = idwt2d(&dwt2d(x.view(), &pair).unwrap(), &pair).unwrap();
            worst = worst.max(max_abs_diff(&back, &x));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "perfect reconstruction",
        worst < 1e-10 && secs < 60.0,
        &format!("max error {worst:.2e} < 1e-10 over 500 planes, {secs:.2} s < 60 s"),
    );
}

#[test]
fn criterion_2_matrix_lifting_equivalence() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let params = LiftingParams::default();
    let pair = build_transform_pair(32, &params).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let x = random_plane(32, 7_000 + seed);
        let m = dwt2d(x.view(), &pair).unwrap();
        let l = dwt2d_lifting_reference(x.view(), &params).unwrap();
        worst = worst.max(max_abs_diff(m.data(), &l));
    }
    report(
        2,
        "matrix/lifting equivalence",
        worst < 1e-9,
        &format!("max difference {worst:.2e} < 1e-9 over 100 planes of 32x32"),
    );
}

#[test]
fn criterion_3_conjugated_augmentation() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let n = 32;
    let pair = build_transform_pair(n, &LiftingParams::default()).unwrap();
    let mut kinds = vec![AugKind::HFlip, AugKind::VFlip];
    for by in (-4isize..=4).filter(|b| *b != 0) {
        kinds.push(AugKind::HShift { by, fill: Fill::Zero });
        kinds.push(AugKind::VShift { by, fill: Fill::Zero });
    }
    let mut ops: Vec<AugOperator> = kinds.into_iter().map(|k| AugOperator::new(k, &pair).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let scale = 1.0 / (n as f64).sqrt();
    for _ in 0..20 {
        let h = ndarray::Array2::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0) * scale);
        ops.push(AugOperator::custom(None, Some(h), &pair).unwrap());
    }

    let mut inputs: Vec<CoeffPlane> = (0..3)
        .map(|s| dwt2d(random_plane(n, 900 + s).view(), &pair).unwrap())
        .collect();
    inputs.push(forward_pipeline(&natural_image(n, 4), &pair, 0.0).unwrap()[0].clone());

    let mut worst = 0.0f64;
    for op in &ops {
        for w in &inputs {
            let spatial = idwt2d(w, &pair).unwrap();
            let recon = idwt2d(&apply_augmentation(w, op).unwrap(), &pair).unwrap();
            worst = worst.max(max_abs_diff(&recon, &op.apply_spatial(&spatial).unwrap()));
        }
    }
    let flip = &ops[0];
    let mut naive_min = f64::INFINITY;
    for w in &inputs {
        let spatial = idwt2d(w, &pair).unwrap();
        let naive = idwt2d(&apply_naive(w, flip).unwrap(), &pair).unwrap();
        naive_min = naive_min.min(max_abs_diff(&naive, &flip.apply_spatial(&spatial).unwrap()));
    }
    report(
        3,
        "conjugated augmentation",
        worst < 1e-6 && naive_min > 0.1,
        &format!(
            "{} operators: max error {worst:.2e} < 1e-6; naive subband flip error at least {naive_min:.2} > 0.1",
            ops.len()
        ),
    );
}

#[test]
fn criterion_4_quantizer_bound() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let grid: Vec<f64> = (-10_000i32..=10_000).map(|k| f64::from(k) * 0.01).collect();
    // the same grid through the plane-level quantizer, padded to a square
    let side = (grid.len() as f64).sqrt().ceil() as usize;
    let side = side + side % 2;
    let padded: Vec<f64> = grid.iter().copied().cycle().take(side * side).collect();
    let plane = CoeffPlane::new(
        ndarray::Array2::from_shape_vec((side, side), padded.clone()).unwrap(),
        1,
    )
    .unwrap();

    let mut zero_rule_violations = 0usize;
    let mut worst_over_step = 0.0f64;
    for step in [1.0, 2.0, 8.0] {
        for &y in &grid {
            let q = quantize_value(y, step) as i32;
            if (q == 0) != (y.abs() < step) {
                zero_rule_violations += 1;
            }
            let back = dequantize_value(q, step, DEFAULT_RECONSTRUCTION_BIAS);
            worst_over_step = worst_over_step.max((back - y).abs() / step);
        }
        let q = deadzone_quantize(&plane, step).unwrap();
        let back = dequantize(&q);
        for ((&y, &qi), &yhat) in padded.iter().zip(q.indices()).zip(back.data()) {
            if (qi == 0) != (y.abs() < step) {
                zero_rule_violations += 1;
            }
            worst_over_step = worst_over_step.max((yhat - y).abs() / step);
        }
    }
    report(
        4,
        "quantizer bound",
        zero_rule_violations == 0 && worst_over_step <= 1.0,
        &format!(
            "{} grid points x 3 steps: {zero_rule_violations} dead-zone violations, worst error {worst_over_step:.3} steps <= 1",
            grid.len()
        ),
    );
}

#[test]
fn criterion_5_reconstruction_gain_trend() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let report_ = bench_recon_gain(&[32, 64, 224], MIN_ITERATIONS).unwrap();
    let gains: Vec<f64> = report_.rows.iter().map(|r| r.gain_pct).collect();
    let above_half = gains.iter().all(|g| *g > 50.0);
    let non_decreasing = gains.windows(2).all(|w| w[1] >= w[0]);
    report(
        5,
        "reconstruction gain trend",
        above_half && non_decreasing,
        &format!(
            "gain % at 32/64/224 = {:.1}/{:.1}/{:.1}, medians of {} runs",
            gains[0], gains[1], gains[2], report_.env.iterations
        ),
    );
}

#[test]
fn criterion_6_batch_dwt_throughput() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let r = bench_batch_dwt(10_000, 32).unwrap();
    report(
        6,
        "batch DWT throughput",
        r.matrix_ms < 10_000.0 && r.speedup >= 5.0,
        &format!(
            "10000 images of 32x32x3: matrix {:.1} ms < 10 s, lifting {:.1} ms extrapolated from {} images, speedup {:.2} >= 5",
            r.matrix_ms, r.lifting_ms, r.lifting_sample, r.speedup
        ),
    );
}

#[test]
fn criterion_7_lossless_end_to_end() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let sides = [16usize, 32, 64, 224];
    for i in 0..20u64 {
        let side = sides[i as usize % sides.len()];
        let img = natural_image(side, 500 + i);
        let pair = build_transform_pair(side, &LiftingParams::default()).unwrap();
        let [y, cb, cr] = forward_pipeline(&img, &pair, 0.0).unwrap();
        let path = dir.path().join(format!("img{i}.wct"));
        write_wct(&path, &[pack_subbands(&y, &cb, &cr).unwrap()]).unwrap();
        let tensors = read_wct(&path).unwrap();
        let planes = unpack_subbands(&tensors[0]).unwrap();
        let decoded = decode_tail(&planes, &pair).unwrap();

        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_ppm(&img, &mut a).unwrap();
        write_ppm(&decoded, &mut b).unwrap();
        if a == b {
            identical += 1;
        }
    }
    report(
        7,
        "lossless end-to-end at r=0",
        identical == 20,
        &format!("{identical}/20 PPM files byte-identical after pipeline, WCT file and decode"),
    );
}

#[test]
fn criterion_8_distortion_monotonicity() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let ratios = [0.0, 5.0, 10.0, 15.0];
    let mut violations = 0;
    let mut mean = [0.0f64; 4];
    for i in 0..20u64 {
        let side = if i % 2 == 0 { 32 } else { 64 };
        let img = natural_image(side, 800 + i);
        let pair = build_transform_pair(side, &LiftingParams::default()).unwrap();
        let curve: Vec<f64> = ratios
            .iter()
            .map(|&r| {
                psnr(
                    &img,
                    &decode_tail(&forward_pipeline(&img, &pair, r).unwrap(), &pair).unwrap(),
                )
                .unwrap()
            })
            .collect();
        violations += curve.windows(2).filter(|w| w[1] > w[0]).count();
        for (m, p) in mean.iter_mut().zip(&curve[1..]) {
            *m += p / 20.0;
        }
    }
    report(
        8,
        "distortion monotonicity",
        violations == 0,
        &format!(
            "20 images, {violations} increases; mean PSNR at r=5/10/15 = {:.2}/{:.2}/{:.2} dB (r=0 lossless)",
            mean[0], mean[1], mean[2]
        ),
    );
}
