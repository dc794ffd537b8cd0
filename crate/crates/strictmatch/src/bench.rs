//! Wall-clock comparison of the spectral and naive strict-match engines.
//!
//! A cell is only reported after both engines produced the same surface;
//! timing a run whose outputs disagree would be meaningless.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::image::GrayImage;
use crate::matcher::{strict_match_with, Engine};
use crate::spectral::{Mode, SNAP_TOLERANCE};

/// One measured grid cell.
#[derive(Debug, Clone)]
pub struct BenchCell {
    pub signal_side: usize,
    pub template_side: usize,
    pub levels: usize,
    pub fft_seconds: f64,
    pub naive_seconds: f64,
    /// `naive_seconds / fft_seconds`.
    pub speedup: f64,
    /// Whether the engines agreed lag-for-lag within the snapping tolerance.
    pub engines_agree: bool,
}

pub const CSV_HEADER: &str =
    "signal,template,levels,threads,fft_seconds,naive_seconds,speedup,engines_agree";

impl BenchCell {
    pub fn csv_row(&self, threads: usize) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.3},{}",
            self.signal_side,
            self.template_side,
            self.levels,
            threads,
            self.fft_seconds,
            self.naive_seconds,
            self.speedup,
            self.engines_agree
        )
    }
}

fn random_image(side: usize, depth: u32, rng: &mut ChaCha8Rng) -> GrayImage {
    let pixels = (0..side * side)
        .map(|_| rng.random_range(0..=depth))
        .collect();
    GrayImage::new(side, side, depth, pixels).expect("generated pixels are in range")
}

/// Runs both engines on one random square pair and times them. The equality
/// verdict is computed before the timings are considered reportable.
pub fn run_cell(signal_side: usize, template_side: usize, levels: usize, seed: u64) -> Result<BenchCell> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let template = random_image(template_side, 255, &mut rng);
    let signal = random_image(signal_side, 255, &mut rng);

    let start = Instant::now();
    let fft = strict_match_with(&template, &signal, levels, Mode::Linear, Engine::Fft)?;
    let fft_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let naive = strict_match_with(&template, &signal, levels, Mode::Linear, Engine::Naive)?;
    let naive_seconds = start.elapsed().as_secs_f64();

    let engines_agree = fft
        .surface
        .values()
        .iter()
        .zip(naive.surface.values())
        .all(|(a, b)| (a - b).abs() <= SNAP_TOLERANCE);

    Ok(BenchCell {
        signal_side,
        template_side,
        levels,
        fft_seconds,
        naive_seconds,
        speedup: naive_seconds / fft_seconds,
        engines_agree,
    })
}
