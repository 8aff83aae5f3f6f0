//! Batched f32 matrix DWT against a per-image lifting loop.
//!
//! `cargo run --release --example batch_dwt_bench -- 10000 32`

use wavecoef::bench::bench_batch_dwt;

fn main() -> wavecoef::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let count = args.next().flatten().unwrap_or(2_000);
    let side = args.next().flatten().unwrap_or(32);
    for line in bench_batch_dwt(count, side)?.records() {
        println!("{line}");
    }
    Ok(())
}
