//! The full 2D pipeline on a generated scene: strict match, threshold at half
//! the surface maximum, label the connected groups, report centers of mass.
//!
//! Run with: cargo run -p strictmatch --example find_pattern [out_dir]

use std::fs;
use std::path::PathBuf;

use strictmatch::io::{detections_to_csv, write_pgm, write_surface_pgm, PgmFormat, SurfaceScale};
use strictmatch::{detect_peaks, scenario_2d, strict_match, Connectivity, Mode, Weighting};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "out".into()).into();
    fs::create_dir_all(&out_dir)?;

    let scene = scenario_2d(42);
    println!(
        "scene: {}x{} signal, {}x{} template planted at {:?}",
        scene.signal.width(),
        scene.signal.height(),
        scene.template.width(),
        scene.template.height(),
        scene.true_lag
    );

    let result = strict_match(&scene.template, &scene.signal, 4, Mode::Linear)?;
    println!(
        "strict match: peak {} of possible {} at lag {:?}",
        result.peak_value,
        result.template_mass.unwrap(),
        result.peak_lag
    );

    let detections = detect_peaks(&result.surface, 0.5, Connectivity::Eight, Weighting::Intensity)?;
    println!(
        "{} group(s) above half the surface maximum (T = {}):",
        detections.detections.len(),
        detections.threshold
    );
    for d in &detections.detections {
        println!(
            "  #{}: anchor ({:.2}, {:.2})  center ({:.2}, {:.2})  area {}  peak {}",
            d.id, d.anchor.0, d.anchor.1, d.center.0, d.center.1, d.area, d.peak
        );
    }

    fs::write(out_dir.join("template.pgm"), write_pgm(&scene.template, PgmFormat::Binary)?)?;
    fs::write(out_dir.join("signal.pgm"), write_pgm(&scene.signal, PgmFormat::Binary)?)?;
    fs::write(
        out_dir.join("surface.pgm"),
        write_surface_pgm(&result.surface, SurfaceScale::Max255, PgmFormat::Binary)?,
    )?;
    fs::write(out_dir.join("detections.csv"), detections_to_csv(&detections))?;
    println!("artifacts in {}", out_dir.display());
    Ok(())
}
