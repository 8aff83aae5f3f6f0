//! The `wavecoef` command-line tool.
//!
//! Exit codes: 0 on success, 1 for validation errors (bad flags, sizes,
//! ranges, failed checks), 2 for I/O and file-format errors. Every error is
//! printed to standard error with an `error:` prefix.

use std::ffi::OsString;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ndarray::{Array3, Axis};

use crate::augment::{apply_augmentation, AugKind, AugOperator, AugPolicy, Fill, OperatorCache, PolicySampler};
use crate::bench::{bench_batch_dwt, bench_recon_gain, MIN_ITERATIONS};
use crate::codec::{
    decode_tail, external_codec_roundtrip, forward_precoding, inverse_precoding, load_ppm, psnr, save_ppm,
    step_size_for_ratio, YcbcrPlanes,
};
use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::pack::{
    label_path, pack_subbands, unpack_subbands, write_labels, write_operator_bank, write_wct, PackedTensor, WctFile,
    WctLayout,
};
use crate::verify::run_checks;
use crate::wavelet::{build_transform_pair, dwt_multilevel, idwt_multilevel, CoeffPlane, CoeffPyramid, LiftingParams};

#[derive(Debug, Parser)]
#[command(
    name = "wavecoef",
    version,
    about = "CDF 9/7 wavelet coefficients for compressed-domain image classification"
)]
pub struct Cli {
    /// TOML file with [codec] and [augment] sections (default: $WAVECOEF_CODEC_CONFIG)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level offset, color transform and multi-level DWT of a PPM image
    Dwt(DwtArgs),
    /// Reconstruct a PPM image from a WCT file
    Idwt(IdwtArgs),
    /// Full forward path: precode, DWT, quantize, dequantize, pack into 12 subband channels
    Pipeline(PipelineArgs),
    /// Apply a wavelet-domain augmentation to every tensor of a WCT file
    Augment(AugmentArgs),
    /// Run the built-in consistency checks
    Verify,
    /// Timing benchmarks
    Bench(BenchArgs),
    /// Round-trip an image through the external JPEG2000 codec from the config file
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Args)]
pub struct DwtArgs {
    /// Input image (binary PPM)
    #[arg(long = "in", value_name = "PPM")]
    pub input: PathBuf,
    /// Decomposition levels
    #[arg(long, default_value_t = 1, value_name = "L")]
    pub levels: u8,
    /// Output: 3 full-size Y/Cb/Cr coefficient planes
    #[arg(long, value_name = "WCT")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IdwtArgs {
    /// Packed subband or pyramid WCT file
    #[arg(long = "in", value_name = "WCT")]
    pub input: PathBuf,
    /// Output image (binary PPM)
    #[arg(long, value_name = "PPM")]
    pub out: PathBuf,
    /// Which tensor of the file to reconstruct
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Input image (binary PPM)
    #[arg(long = "in", value_name = "PPM")]
    pub input: PathBuf,
    /// Compression parameter r; 0 disables quantization, otherwise step = 2^(r/5)
    #[arg(long, default_value_t = 0.0, value_name = "R")]
    pub ratio: f64,
    /// Output packed tensor file
    #[arg(long, value_name = "WCT")]
    pub out: PathBuf,
    /// Also write a .lbl sidecar holding this class label
    #[arg(long, value_name = "CLASS")]
    pub label: Option<u16>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("op").required(true).args(["hflip", "vflip", "shift", "random"])))]
pub struct AugmentArgs {
    /// Input WCT file (packed subbands or single-level planes)
    #[arg(long = "in", value_name = "WCT")]
    pub input: PathBuf,
    /// Mirror every image left-right
    #[arg(long)]
    pub hflip: bool,
    /// Mirror every image top-bottom
    #[arg(long)]
    pub vflip: bool,
    /// Shift every image by DX columns and DY rows, zero fill
    #[arg(long, value_name = "DX,DY", value_parser = parse_shift, allow_hyphen_values = true)]
    pub shift: Option<(isize, isize)>,
    /// Draw one operator per tensor from the [augment] policy
    #[arg(long)]
    pub random: bool,
    /// Seed for --random (overrides the policy seed)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output WCT file, same layout as the input
    #[arg(long, value_name = "WCT")]
    pub out: PathBuf,
    /// Also write the conjugated operator matrices used, one per tensor
    #[arg(long, value_name = "WCT")]
    pub export_ops: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(subcommand)]
    pub which: BenchCommand,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Decoder time saved by stopping at the dequantizer
    Recon {
        /// Comma-separated image sides
        #[arg(long, value_delimiter = ',', default_value = "32,64,224")]
        sizes: Vec<usize>,
        /// Timed iterations per measurement (at least 30)
        #[arg(long, default_value_t = MIN_ITERATIONS)]
        iterations: usize,
        /// Also write the table as CSV
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Batched matrix DWT against per-image lifting loops
    Dwt {
        /// Number of 3-channel images
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Image side
        #[arg(long, default_value_t = 32)]
        size: usize,
    },
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    /// Input image (binary PPM)
    #[arg(long = "in", value_name = "PPM")]
    pub input: PathBuf,
    /// Compression parameter passed to the encoder template
    #[arg(long, default_value_t = 0.0, value_name = "R")]
    pub ratio: f64,
    /// Decoded image (binary PPM)
    #[arg(long, value_name = "PPM")]
    pub out: PathBuf,
}

fn parse_shift(s: &str) -> std::result::Result<(isize, isize), String> {
    let (dx, dy) = s.split_once(',').ok_or_else(|| format!("expected DX,DY, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<isize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(dx)?, parse(dy)?))
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Dwt(a) => cmd_dwt(a),
        Command::Idwt(a) => cmd_idwt(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Augment(a) => cmd_augment(a, cli.config.as_deref()),
        Command::Verify => cmd_verify(),
        Command::Bench(b) => cmd_bench(&b.which),
        Command::Roundtrip(a) => cmd_roundtrip(a, cli.config.as_deref()),
    }
}

fn cmd_dwt(a: &DwtArgs) -> Result<()> {
    let img = load_ppm(&a.input)?;
    let n = img.square_side()?;
    if a.levels == 0 || a.levels > 15 {
        return Err(Error::Range(format!("levels must be in 1..=15, got {}", a.levels)));
    }
    let planes = forward_precoding(&img);
    let mut tensor = Array3::<f32>::zeros((3, n, n));
    for (c, plane) in planes.channels().into_iter().enumerate() {
        let pyr = dwt_multilevel(plane.view(), a.levels as usize, &LiftingParams::default())?;
        tensor.index_axis_mut(Axis(0), c).assign(&pyr.grid().mapv(|v| v as f32));
    }
    WctFile::new(WctLayout::Pyramid { levels: a.levels }, (3, n, n), vec![tensor])?.save(&a.out)
}

fn cmd_idwt(a: &IdwtArgs) -> Result<()> {
    let file = WctFile::load(&a.input)?;
    let tensor = file.tensors.get(a.index).ok_or_else(|| {
        Error::Range(format!(
            "index {} out of range: file holds {} tensors",
            a.index,
            file.tensors.len()
        ))
    })?;
    let img = match file.layout {
        WctLayout::Packed => {
            let planes = unpack_subbands(&PackedTensor::new(tensor.clone())?)?;
            let pair = build_transform_pair(planes[0].side(), &LiftingParams::default())?;
            decode_tail(&planes, &pair)?
        }
        WctLayout::Pyramid { levels } => {
            if file.shape.0 != 3 {
                return Err(Error::Format(format!(
                    "pyramid file must have 3 channels, got {}",
                    file.shape.0
                )));
            }
            let mut channels = Vec::with_capacity(3);
            for c in tensor.axis_iter(Axis(0)) {
                let pyr = CoeffPyramid::new(c.mapv(f64::from), levels as usize)?;
                channels.push(idwt_multilevel(&pyr)?);
            }
            let [y, cb, cr]: [_; 3] = channels.try_into().expect("three channels");
            inverse_precoding(&YcbcrPlanes::new(y, cb, cr)?)?
        }
        WctLayout::OperatorBank => {
            return Err(Error::Format("operator bank files hold no image".into()));
        }
    };
    save_ppm(&img, &a.out)
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<()> {
    let img = load_ppm(&a.input)?;
    let n = img.square_side()?;
    let pair = build_transform_pair(n, &LiftingParams::default())?;
    let planes = crate::codec::forward_pipeline(&img, &pair, a.ratio)?;
    let tensor = pack_subbands(&planes[0], &planes[1], &planes[2])?;
    write_wct(&a.out, &[tensor])?;
    if let Some(label) = a.label {
        write_labels(label_path(&a.out), &[label])?;
    }
    Ok(())
}

fn augment_kind(a: &AugmentArgs) -> Option<AugKind> {
    if a.hflip {
        Some(AugKind::HFlip)
    } else if a.vflip {
        Some(AugKind::VFlip)
    } else {
        a.shift.map(|(dx, dy)| {
            AugKind::Compose(vec![
                AugKind::HShift {
                    by: dx,
                    fill: Fill::Zero,
                },
                AugKind::VShift {
                    by: dy,
                    fill: Fill::Zero,
                },
            ])
        })
    }
}

fn cmd_augment(a: &AugmentArgs, config: Option<&Path>) -> Result<()> {
    let file = WctFile::load(&a.input)?;
    let (c, h, w) = file.shape;
    let n = match file.layout {
        WctLayout::Packed => 2 * h,
        WctLayout::Pyramid { levels: 1 } if c == 3 => h,
        WctLayout::Pyramid { levels } => {
            return Err(Error::Validation(format!(
                "augmentation needs level-1 coefficients, file has {levels} levels"
            )))
        }
        WctLayout::OperatorBank => return Err(Error::Format("cannot augment an operator bank".into())),
    };
    if h != w {
        return Err(Error::Format(format!("non-square tensors {h}x{w}")));
    }
    let pair = Arc::new(build_transform_pair(n, &LiftingParams::default())?);

    let mut next_op: Box<dyn FnMut() -> Result<Arc<AugOperator>>> = match augment_kind(a) {
        Some(kind) => {
            let mut cache = OperatorCache::new(Arc::clone(&pair));
            let op = cache.get(kind)?;
            Box::new(move || Ok(Arc::clone(&op)))
        }
        None => {
            let mut policy = ToolConfig::discover(config)?.augment.unwrap_or_else(AugPolicy::default);
            if let Some(seed) = a.seed {
                policy.seed = seed;
            }
            let mut sampler = PolicySampler::new(policy, Arc::clone(&pair))?;
            Box::new(move || sampler.next_operator())
        }
    };

    let mut used = Vec::with_capacity(file.tensors.len());
    let mut out = Vec::with_capacity(file.tensors.len());
    for tensor in &file.tensors {
        let op = next_op()?;
        let planes: [CoeffPlane; 3] = match file.layout {
            WctLayout::Packed => unpack_subbands(&PackedTensor::new(tensor.clone())?)?,
            _ => {
                let mut it = tensor.axis_iter(Axis(0)).map(|p| CoeffPlane::new(p.mapv(f64::from), 1));
                [it.next().expect("3")?, it.next().expect("3")?, it.next().expect("3")?]
            }
        };
        let [y, cb, cr] = planes.each_ref().map(|p| apply_augmentation(p, &op));
        let (y, cb, cr) = (y?, cb?, cr?);
        out.push(match file.layout {
            WctLayout::Packed => pack_subbands(&y, &cb, &cr)?.into_data(),
            _ => {
                let mut t = Array3::zeros((3, n, n));
                for (i, p) in [y, cb, cr].iter().enumerate() {
                    t.index_axis_mut(Axis(0), i).assign(&p.data().mapv(|v| v as f32));
                }
                t
            }
        });
        used.push(op);
    }
    WctFile::new(file.layout, file.shape, out)?.save(&a.out)?;
    if let Some(path) = &a.export_ops {
        let refs: Vec<&AugOperator> = used.iter().map(|op| op.as_ref()).collect();
        write_operator_bank(path, &refs)?;
    }
    Ok(())
}

fn cmd_verify() -> Result<()> {
    let checks = run_checks()?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        println!("{}", c.line());
    }
    if failed > 0 {
        return Err(Error::Validation(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn cmd_bench(which: &BenchCommand) -> Result<()> {
    match which {
        BenchCommand::Recon { sizes, iterations, csv } => {
            for &s in sizes {
                if s % 2 != 0 || s < 4 {
                    return Err(Error::Size(format!(
                        "benchmark sizes must be even and at least 4, got {s}"
                    )));
                }
            }
            let report = bench_recon_gain(sizes, *iterations)?;
            print!("{}", report.describe());
            if let Some(path) = csv {
                report.write_csv(File::create(path)?)?;
            }
        }
        BenchCommand::Dwt { count, size } => {
            let report = bench_batch_dwt(*count, *size)?;
            for line in report.records() {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn cmd_roundtrip(a: &RoundtripArgs, config: Option<&Path>) -> Result<()> {
    step_size_for_ratio(a.ratio)?;
    let codec = ToolConfig::discover(config)?
        .codec
        .ok_or_else(|| Error::Unavailable("no [codec] section in the configuration".into()))?;
    let img = load_ppm(&a.input)?;
    let decoded = external_codec_roundtrip(&img, a.ratio, &codec)?;
    println!("ratio={} psnr_db={:.3}", a.ratio, psnr(&img, &decoded)?);
    save_ppm(&decoded, &a.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_parser() {
        assert_eq!(parse_shift("3,-2").unwrap(), (3, -2));
        assert_eq!(parse_shift("-1, 4").unwrap(), (-1, 4));
        assert!(parse_shift("3").is_err());
        assert!(parse_shift("a,b").is_err());
    }

    #[test]
    fn exclusive_augment_flags() {
        let r = Cli::try_parse_from([
            "wavecoef", "augment", "--in", "a", "--out", "b", "--hflip", "--shift", "1,1",
        ]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["wavecoef", "augment", "--in", "a", "--out", "b"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["wavecoef", "augment", "--in", "a", "--out", "b", "--shift", "-1,2"]);
        assert!(r.is_ok());
    }

    #[test]
    fn unknown_flag_is_exit_1() {
        assert_eq!(run(["wavecoef", "verify", "--bogus"]), 1);
    }

    #[test]
    fn verify_cli_contract() {
        assert_eq!(run(["wavecoef", "verify"]), 0);
    }
}
