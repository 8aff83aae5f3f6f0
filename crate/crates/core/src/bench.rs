//! Timing harness for the two speed claims of compressed-domain inference:
//! how much decoder time is saved by stopping at the dequantizer, and how fast
//! a precomputed matrix transform processes a whole dataset.
//!
//! Every timing is the median of at least [`MIN_ITERATIONS`] runs after
//! [`WARMUP_ITERATIONS`] discarded runs, single-threaded. Each timed path is
//! checked against an independent result before it is timed.

use std::fmt::Write as _;
use std::hint::black_box;
use std::io::Write;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use ndarray::{Array2, Array3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{decode_tail, dequantize, dequantize_into, encode, EncodedPlanes};
use crate::error::{Error, Result};
use crate::synth::natural_image;
use crate::wavelet::{
    build_transform_pair, dwt2d_lifting_reference, idwt2d, idwt2d_lifting_reference, BatchDwt, BatchScratch,
    LiftingParams,
};

pub const MIN_ITERATIONS: usize = 30;
pub const WARMUP_ITERATIONS: usize = 3;

/// Compression parameter of the inputs to the reconstruction-gain benchmark.
pub const RECON_BENCH_RATIO: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EnvNote {
    pub cpu: String,
    pub iterations: usize,
    pub warmup: usize,
    pub threads: usize,
}

impl EnvNote {
    fn capture(iterations: usize) -> Self {
        let cpu = std::fs::read_to_string("/proc/cpuinfo")
            .ok()
            .and_then(|s| {
                s.lines()
                    .find(|l| l.starts_with("model name"))
                    .and_then(|l| l.split(':').nth(1))
                    .map(|v| v.trim().to_string())
            })
            .unwrap_or_else(|| std::env::consts::ARCH.to_string());
        EnvNote {
            cpu,
            iterations,
            warmup: WARMUP_ITERATIONS,
            threads: 1,
        }
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Shortest timed sample; faster calls are repeated inside one sample.
pub const MIN_SAMPLE_MS: f64 = 1.0;

fn median(mut times: Vec<f64>) -> f64 {
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    if times.len().is_multiple_of(2) {
        (times[mid - 1] + times[mid]) / 2.0
    } else {
        times[mid]
    }
}

/// Per-call time of `reps` back-to-back calls, in milliseconds.
fn sample_ms(reps: usize, f: &mut impl FnMut()) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        f();
    }
    start.elapsed().as_secs_f64() * 1e3 / reps as f64
}

/// Calls per sample so that one sample lasts at least [`MIN_SAMPLE_MS`].
fn calibrate(f: &mut impl FnMut()) -> usize {
    let mut reps = 1;
    loop {
        let ms = sample_ms(reps, f) * reps as f64;
        if ms >= MIN_SAMPLE_MS || reps >= 1 << 20 {
            return reps;
        }
        reps = (reps * 2).max((reps as f64 * MIN_SAMPLE_MS / ms.max(1e-6)).ceil() as usize);
    }
}

/// Median per-call wall time of `f` in milliseconds.
pub fn median_ms(iterations: usize, mut f: impl FnMut()) -> f64 {
    for _ in 0..WARMUP_ITERATIONS {
        f();
    }
    let reps = calibrate(&mut f);
    median((0..iterations).map(|_| sample_ms(reps, &mut f)).collect())
}

/// One image size of the reconstruction-gain table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconGainRow {
    pub size: usize,
    /// Dequantizer only: what a compressed-domain consumer pays.
    pub dequant_ms: f64,
    /// Dequantizer plus inverse DWT, inverse color transform and level offset.
    pub total_ms: f64,
    /// Work skipped by stopping after the dequantizer.
    pub gain_ms: f64,
    pub gain_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<ReconGainRow>,
    pub env: EnvNote,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl BenchReport {
    /// One `size=… total_ms=… gain_ms=… gain_pct=…` line per row.
    pub fn records(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "size={} total_ms={:.4} gain_ms={:.4} gain_pct={:.2}",
                    r.size, r.total_ms, r.gain_ms, r.gain_pct
                )
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let mut s = format!(
            "# decode tail = dequantize + 3x inverse DWT + inverse color transform + level offset (no entropy decoding)\n\
             # cpu=\"{}\" iterations={} warmup={} threads={}\n",
            self.env.cpu, self.env.iterations, self.env.warmup, self.env.threads
        );
        for line in self.records() {
            let _ = writeln!(s, "{line}");
        }
        s
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(["size", "dequant_ms", "total_ms", "gain_ms", "gain_pct"])
            .map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.size.to_string(),
                format!("{:.6}", r.dequant_ms),
                format!("{:.6}", r.total_ms),
                format!("{:.6}", r.gain_ms),
                format!("{:.4}", r.gain_pct),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Times decoding of a quantized natural image per size: dequantization alone
/// against the full decoder tail.
pub fn bench_recon_gain(sizes: &[usize], iterations: usize) -> Result<BenchReport> {
    if iterations < MIN_ITERATIONS {
        return Err(Error::Validation(format!(
            "iterations must be at least {MIN_ITERATIONS}, got {iterations}"
        )));
    }
    if sizes.is_empty() {
        return Err(Error::Validation("no sizes given".into()));
    }
    let started_unix = unix_now();
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let pair = build_transform_pair(size, &LiftingParams::default())?;
        let img = natural_image(size, size as u64);
        let quantized = match encode(&img, &pair, RECON_BENCH_RATIO)? {
            EncodedPlanes::Quantized(q) => q,
            EncodedPlanes::Unquantized(_) => unreachable!("ratio is positive"),
        };

        // the timed inverse must agree with the lifting loops
        let luma = dequantize(&quantized[0]);
        let matrix = idwt2d(&luma, &pair)?;
        let lifting = idwt2d_lifting_reference(luma.data().view(), pair.params())?;
        let err = crate::codec::max_abs_diff(&matrix, &lifting);
        if err > 1e-9 {
            return Err(Error::Validation(format!(
                "inverse transform disagrees with lifting reference by {err:e} at size {size}"
            )));
        }

        // One decode per call: the dequantizer writes into reused planes, as
        // a data loader would, and both segments are timed inside the same
        // run so they see the same cache state.
        let mut planes = quantized.each_ref().map(dequantize);
        let mut segments = |dequant: &mut f64, total: &mut f64| {
            let start = Instant::now();
            for (q, p) in quantized.iter().zip(planes.iter_mut()) {
                dequantize_into(q, p).expect("same sizes");
            }
            black_box(&planes);
            let mid = Instant::now();
            black_box(decode_tail(&planes, &pair).expect("verified sizes"));
            let end = Instant::now();
            *dequant += (mid - start).as_secs_f64() * 1e3;
            *total += (end - start).as_secs_f64() * 1e3;
        };
        let (mut d, mut t) = (0.0, 0.0);
        for _ in 0..WARMUP_ITERATIONS {
            segments(&mut d, &mut t);
        }
        let reps = ((MIN_SAMPLE_MS / (t / WARMUP_ITERATIONS as f64)).ceil() as usize).max(1);
        let (mut dequant_samples, mut total_samples) = (Vec::new(), Vec::new());
        for _ in 0..iterations {
            let (mut d, mut t) = (0.0, 0.0);
            for _ in 0..reps {
                segments(&mut d, &mut t);
            }
            dequant_samples.push(d / reps as f64);
            total_samples.push(t / reps as f64);
        }
        let (dequant_ms, total_ms) = (median(dequant_samples), median(total_samples));
        let gain_ms = (total_ms - dequant_ms).max(0.0);
        let gain_pct = if total_ms > 0.0 {
            (gain_ms / total_ms * 100.0).clamp(0.0, 100.0)
        } else {
            0.0
        };
        rows.push(ReconGainRow {
            size,
            dequant_ms,
            total_ms,
            gain_ms,
            gain_pct,
        });
    }
    Ok(BenchReport {
        rows,
        env: EnvNote::capture(iterations),
        started_unix,
        finished_unix: unix_now(),
    })
}

/// Dataset-scale forward transform: batched matrix products against
/// per-image lifting loops over the same images.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchDwtReport {
    pub count: usize,
    pub side: usize,
    /// Whole batch through [`BatchDwt`], median of `env.iterations` runs.
    pub matrix_ms: f64,
    /// Images of the lifting subsample.
    pub lifting_sample: usize,
    pub lifting_sample_ms: f64,
    /// `lifting_sample_ms` scaled to the whole batch.
    pub lifting_ms: f64,
    pub speedup: f64,
    pub env: EnvNote,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl BatchDwtReport {
    pub fn records(&self) -> Vec<String> {
        vec![format!(
            "count={} size={} matrix_ms={:.3} lifting_sample={} lifting_sample_ms={:.3} lifting_ms={:.3} speedup={:.2}",
            self.count,
            self.side,
            self.matrix_ms,
            self.lifting_sample,
            self.lifting_sample_ms,
            self.lifting_ms,
            self.speedup
        )]
    }
}

/// Transforms `count` random `side × side × 3` images through [`BatchDwt`].
/// The lifting loops are timed on a 1% subsample (at least one image) and
/// extrapolated to the whole batch.
pub fn bench_batch_dwt(count: usize, side: usize) -> Result<BatchDwtReport> {
    bench_batch_dwt_with(count, side, MIN_ITERATIONS)
}

pub fn bench_batch_dwt_with(count: usize, side: usize, iterations: usize) -> Result<BatchDwtReport> {
    if count == 0 {
        return Err(Error::Validation("count must be at least 1".into()));
    }
    if iterations < MIN_ITERATIONS {
        return Err(Error::Validation(format!(
            "iterations must be at least {MIN_ITERATIONS}, got {iterations}"
        )));
    }
    let started_unix = unix_now();
    let params = LiftingParams::default();
    let pair = build_transform_pair(side, &params)?;
    let batch = BatchDwt::new(&pair);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let planes = Array3::from_shape_fn((count * 3, side, side), |_| rng.random_range(-128.0f32..128.0));
    let sample = (count / 100).max(1);
    let sample_planes: Vec<Array2<f64>> = planes
        .outer_iter()
        .take(sample * 3)
        .map(|p| p.mapv(f64::from))
        .collect();

    // buffers are reused across iterations, as a data loader would
    let mut out = Array3::zeros(planes.dim());
    let mut scratch = BatchScratch::default();
    batch.forward_into(&planes, &mut out, &mut scratch)?;
    for (got, x) in out.outer_iter().zip(&sample_planes) {
        let reference = dwt2d_lifting_reference(x.view(), &params)?;
        let err = crate::codec::max_abs_diff(&got.mapv(f64::from), &reference);
        if err > 1e-2 {
            return Err(Error::Validation(format!(
                "batch transform disagrees with lifting reference by {err:e}"
            )));
        }
    }

    let matrix_ms = median_ms(iterations, || {
        batch
            .forward_into(&planes, &mut out, &mut scratch)
            .expect("verified shape");
        black_box(&out);
    });
    let lifting_sample_ms = median_ms(iterations, || {
        for x in &sample_planes {
            black_box(dwt2d_lifting_reference(x.view(), &params).expect("verified shape"));
        }
    });
    let lifting_ms = lifting_sample_ms * count as f64 / sample as f64;
    Ok(BatchDwtReport {
        count,
        side,
        matrix_ms,
        lifting_sample: sample,
        lifting_sample_ms,
        lifting_ms,
        speedup: lifting_ms / matrix_ms,
        env: EnvNote::capture(iterations),
        started_unix,
        finished_unix: unix_now(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_few_iterations_rejected() {
        assert!(matches!(bench_recon_gain(&[32], 1), Err(Error::Validation(_))));
        assert!(matches!(bench_batch_dwt(0, 32), Err(Error::Validation(_))));
    }

    #[test]
    fn single_image_batch() {
        let r = bench_batch_dwt(1, 16).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.lifting_sample, 1);
        assert!(r.matrix_ms > 0.0 && r.speedup.is_finite());
        assert_eq!(r.records().len(), 1);
    }

    #[test]
    fn report_schema() {
        let r = bench_recon_gain(&[16, 32], 30).unwrap();
        let lines = r.records();
        assert_eq!(lines.len(), 2);
        for (line, size) in lines.iter().zip([16, 32]) {
            let keys: Vec<&str> = line.split(' ').map(|kv| kv.split('=').next().unwrap()).collect();
            assert_eq!(keys, ["size", "total_ms", "gain_ms", "gain_pct"]);
            assert!(line.starts_with(&format!("size={size} ")));
        }
        for row in &r.rows {
            assert!((0.0..=100.0).contains(&row.gain_pct));
        }
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("size,dequant_ms,total_ms,gain_ms,gain_pct\n16,"));
        assert_eq!(text.lines().count(), 3);
    }
}
