//! Threshold decomposition of a small gradient image: show each binary layer
//! as ASCII art and write it out as a PGM.
//!
//! Run with: cargo run -p strictmatch --example decompose_layers [out_dir]

use std::fs;
use std::path::PathBuf;

use strictmatch::io::{write_pgm, PgmFormat};
use strictmatch::{decompose, level_counts, GrayImage, QuantizationScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "out".into()).into();

    // A radial-ish gradient with a bright spot off center.
    let image = GrayImage::from_fn(16, 8, 255, |x, y| {
        let dx = x as f64 - 11.0;
        let dy = (y as f64 - 3.0) * 2.0;
        let r = (dx * dx + dy * dy).sqrt();
        (255.0 * (1.0 - r / 14.0).max(0.0)) as u32
    })?;

    let scheme = QuantizationScheme::new(image.depth(), 4)?;
    println!("cutoffs: {:?}", scheme.thresholds());

    let stack = decompose(&image, &scheme)?;
    fs::create_dir_all(&out_dir)?;
    for layer in stack.layers() {
        println!("\nlayer {} (pixels at or above {}):", layer.index(), scheme.thresholds()[layer.index() - 1]);
        for y in 0..layer.height() {
            let row: String = (0..layer.width())
                .map(|x| if layer.get(x, y) == 1 { '#' } else { '.' })
                .collect();
            println!("  {row}");
        }
        let pgm = GrayImage::new(
            layer.width(),
            layer.height(),
            1,
            layer.values().iter().map(|&v| u32::from(v)).collect(),
        )?;
        let path = out_dir.join(format!("layer_{:02}.pgm", layer.index()));
        fs::write(&path, write_pgm(&pgm, PgmFormat::Ascii)?)?;
        println!("  -> {}", path.display());
    }

    // Column sums over the layers recover each pixel's quantized level.
    let counts = level_counts(&image, &scheme)?;
    println!("\nlevel counts (the image requantized to {} levels):", scheme.levels());
    for y in 0..image.height() {
        let row: String = (0..image.width())
            .map(|x| char::from_digit(counts[y * image.width() + x], 10).unwrap())
            .collect();
        println!("  {row}");
    }
    Ok(())
}
