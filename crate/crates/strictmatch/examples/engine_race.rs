//! Wall-clock comparison of the fft and naive strict-match engines on one
//! grid cell, after checking that they produce the same surface.
//!
//! Run with: cargo run --release -p strictmatch --example engine_race [signal template levels]

use strictmatch::bench::{run_cell, CSV_HEADER};

fn main() -> strictmatch::Result<()> {
    let mut args = std::env::args().skip(1);
    let signal: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(256);
    let template: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(32);
    let levels: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(16);

    println!("signal {signal}x{signal}, template {template}x{template}, {levels} levels");
    let cell = run_cell(signal, template, levels, 0)?;
    assert!(cell.engines_agree, "engines disagree; timings would be meaningless");

    println!("{CSV_HEADER}");
    println!("{}", cell.csv_row(rayon::current_num_threads()));
    println!();
    println!(
        "fft {:.1} ms vs naive {:.1} ms: {:.1}x faster",
        cell.fft_seconds * 1e3,
        cell.naive_seconds * 1e3,
        cell.speedup
    );
    Ok(())
}
