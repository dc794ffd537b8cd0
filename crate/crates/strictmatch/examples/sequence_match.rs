//! Strict matching of two 1D binary sequences, printing the whole lag table.
//!
//! Run with: cargo run -p strictmatch --example sequence_match

use strictmatch::{min_level_surface, strict_match, GrayImage, Mode};

fn main() -> strictmatch::Result<()> {
    let template = GrayImage::signal(1, vec![0, 1, 0, 1, 1, 1, 0, 1, 1, 0])?;
    let signal = GrayImage::signal(1, vec![1, 0, 1, 0, 1, 0, 1, 1, 0, 0])?;

    // Binary input, so a single threshold layer suffices (g = 1).
    let result = strict_match(&template, &signal, 1, Mode::Linear)?;

    println!("template: 0101110110");
    println!("signal:   1010101100");
    println!();
    println!("{:>6}  {:>5}", "lag", "score");
    for x in 0..result.surface.width() {
        let (lag, _) = result.surface.lag_of(x, 0);
        let score = result.surface.get(x, 0);
        let marker = if (lag, 0) == result.peak_lag { "  <- peak" } else { "" };
        println!("{lag:>6}  {score:>5}{marker}");
    }
    println!();
    println!(
        "peak {} at lag {} (template shifted {} by {})",
        result.peak_value,
        result.peak_lag.0,
        if result.peak_lag.0 < 0 { "left" } else { "right" },
        result.peak_lag.0.abs()
    );
    println!(
        "template mass {} (the score of a perfect alignment)",
        result.template_mass.unwrap()
    );

    // The direct min-level summation reproduces the spectral surface exactly.
    let oracle = min_level_surface(&template, &signal, 1, Mode::Linear)?;
    assert_eq!(result.surface.values(), oracle.values());
    println!("verified against the direct min-level summation");
    Ok(())
}
