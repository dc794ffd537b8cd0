//! Acceptance suite: one test per release criterion, each printing a PASS or
//! FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here, in code: spectral-vs-naive agreement at
//! 1e-6 absolute per lag, strict-vs-min-level equality exact after integer
//! snapping, structural invariants exact.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strictmatch::io::{detections_to_csv, read_pgm, write_pgm, PgmFormat};
use strictmatch::{
    bench, cross_correlate_fft, cross_correlate_naive, decompose, detect_peaks, level_counts,
    min_level_surface, plain_correlation, plain_correlation_with, scenario_1d, strict_match,
    Connectivity, Engine, GrayImage, Mask, Mode, QuantizationScheme, Weighting,
};

const PER_LAG_TOLERANCE: f64 = 1e-6;

fn report(id: u32, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPTANCE {id} ({name}): PASS");
    } else {
        println!("ACCEPTANCE {id} ({name}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("acceptance criterion {id} failed:\n{}", failures.join("\n"));
    }
}

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, depth: u32) -> GrayImage {
    let pixels = (0..w * h).map(|_| rng.random_range(0..=depth)).collect();
    GrayImage::new(w, h, depth, pixels).unwrap()
}

#[test]
fn criterion_1_worked_sequence_reproduction() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let template = GrayImage::signal(1, vec![0, 1, 0, 1, 1, 1, 0, 1, 1, 0]).unwrap();
    let signal = GrayImage::signal(1, vec![1, 0, 1, 0, 1, 0, 1, 1, 0, 0]).unwrap();
    let result = strict_match(&template, &signal, 1, Mode::Linear).unwrap();

    if result.peak_value != 5.0 {
        failures.push(format!("peak value {} != 5", result.peak_value));
    }
    if result.peak_lag != (-1, 0) {
        failures.push(format!(
            "peak lag {:?} is not the left-shift-by-one alignment (-1, 0)",
            result.peak_lag
        ));
    }
    let expected_table = [
        0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 2.0, 5.0, 2.0, 3.0, 2.0, 3.0, 1.0, 1.0, 1.0, 0.0,
        0.0, 0.0,
    ];
    if result.surface.values() != expected_table {
        failures.push(format!(
            "surface {:?} differs from the hand-computed table",
            result.surface.values()
        ));
    }
    if start.elapsed() > Duration::from_secs(1) {
        failures.push(format!("runtime {:?} exceeded 1 s", start.elapsed()));
    }
    report(1, "worked 1D sequence, peak 5 at left shift by one", failures);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let depths = [1u32, 15, 255];
    let levels = [1usize, 2, 4, 8, 16];

    let mut pairs = 0;
    for case in 0..240 {
        let depth = depths[case % depths.len()];
        let g = levels[case % levels.len()];
        let mode = if case % 2 == 0 { Mode::Linear } else { Mode::Circular };

        let (template, signal) = match mode {
            Mode::Linear => {
                let (tw, th) = (rng.random_range(1..=8), rng.random_range(1..=8));
                let (sw, sh) = (rng.random_range(tw..=32), rng.random_range(th..=32));
                (
                    random_image(&mut rng, tw, th, depth),
                    random_image(&mut rng, sw, sh, depth),
                )
            }
            Mode::Circular => {
                let (w, h) = (rng.random_range(1..=8), rng.random_range(1..=8));
                (
                    random_image(&mut rng, w, h, depth),
                    random_image(&mut rng, w, h, depth),
                )
            }
        };
        pairs += 1;

        // Raw correlation: spectral vs direct summation on the gray values.
        let fft = cross_correlate_fft(
            &template.to_f64(),
            template.dims(),
            &signal.to_f64(),
            signal.dims(),
            mode,
        )
        .unwrap();
        let naive = cross_correlate_naive(
            &template.to_f64(),
            template.dims(),
            &signal.to_f64(),
            signal.dims(),
            mode,
        )
        .unwrap();
        let worst = fft
            .values()
            .iter()
            .zip(naive.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if worst > PER_LAG_TOLERANCE {
            failures.push(format!(
                "case {case}: fft vs naive differ by {worst:e} (G={depth}, g={g}, {mode:?})"
            ));
        }

        // Strict match vs the exact min-level characterization.
        let strict = strict_match(&template, &signal, g, mode).unwrap();
        let oracle = min_level_surface(&template, &signal, g, mode).unwrap();
        if strict.surface.values() != oracle.values() {
            failures.push(format!(
                "case {case}: strict surface differs from min-level oracle (G={depth}, g={g}, {mode:?})"
            ));
        }
        if failures.len() > 5 {
            break;
        }
    }

    if pairs < 200 {
        failures.push(format!("only {pairs} pairs exercised, need at least 200"));
    }
    if start.elapsed() > Duration::from_secs(60) {
        failures.push(format!("runtime {:?} exceeded 60 s", start.elapsed()));
    }
    report(
        2,
        "fft/naive within 1e-6 per lag and strict == min-level exactly, 240 random pairs",
        failures,
    );
}

#[test]
fn criterion_3_layer_structure() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1A7E);
    let depths = [1u32, 15, 255];
    let levels = [1usize, 2, 4, 8, 16];

    for case in 0..500 {
        let depth = depths[case % depths.len()];
        let g = levels[(case / 3) % levels.len()];
        let (w, h) = (rng.random_range(1..=16), rng.random_range(1..=16));
        let img = random_image(&mut rng, w, h, depth);
        let scheme = QuantizationScheme::new(depth, g).unwrap();
        let stack = decompose(&img, &scheme).unwrap();
        let counts = level_counts(&img, &scheme).unwrap();

        for pair in stack.layers().windows(2) {
            for i in 0..w * h {
                if pair[1].values()[i] > pair[0].values()[i] {
                    failures.push(format!(
                        "case {case}: nesting violated at pixel {i} (G={depth}, g={g})"
                    ));
                }
            }
        }
        for (i, &count) in counts.iter().enumerate() {
            let col: u32 = stack.layers().iter().map(|l| u32::from(l.values()[i])).sum();
            if col != count {
                failures.push(format!(
                    "case {case}: reconstruction violated at pixel {i}: {col} != {count}"
                ));
            }
        }
        if failures.len() > 5 {
            break;
        }
    }
    report(3, "layer nesting and reconstruction on 500 random images", failures);
}

#[test]
fn criterion_4_discriminability() {
    let mut failures = Vec::new();
    let mut strict_hits = 0;
    let mut plain_misses = 0;

    for seed in 0..10u64 {
        let sc = scenario_1d(seed);

        let strict = strict_match(&sc.template, &sc.signal, 16, Mode::Linear).unwrap();
        if strict.peak_lag == sc.true_lag {
            strict_hits += 1;
        } else {
            failures.push(format!(
                "seed {seed}: strict argmax {:?} != planted {:?}",
                strict.peak_lag, sc.true_lag
            ));
        }
        // Verify the strict surface against the exact oracle.
        let oracle = min_level_surface(&sc.template, &sc.signal, 16, Mode::Linear).unwrap();
        if strict.surface.values() != oracle.values() {
            failures.push(format!("seed {seed}: strict surface differs from min-level oracle"));
        }

        let plain = plain_correlation(&sc.template, &sc.signal, Mode::Linear).unwrap();
        if plain.peak_lag != sc.true_lag {
            plain_misses += 1;
        }
        // Verify the plain surface against the naive engine.
        let plain_naive =
            plain_correlation_with(&sc.template, &sc.signal, Mode::Linear, Engine::Naive)
                .unwrap();
        let worst = plain
            .surface
            .values()
            .iter()
            .zip(plain_naive.surface.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if worst > PER_LAG_TOLERANCE {
            failures.push(format!("seed {seed}: plain fft vs naive differ by {worst:e}"));
        }
    }

    if strict_hits != 10 {
        failures.push(format!("strict match found the plant in {strict_hits}/10 scenes, need 10"));
    }
    if plain_misses < 8 {
        failures.push(format!(
            "plain correlation misplaced its argmax in only {plain_misses}/10 scenes, need >= 8"
        ));
    }
    println!(
        "  discriminability: strict {strict_hits}/10 on target, plain fooled {plain_misses}/10"
    );
    println!(
        "  (the CLI end of this pipeline is exercised by the strictmatch-cli test suite)"
    );
    report(4, "strict finds the plant 10/10, plain fooled >= 8/10", failures);
}

#[test]
fn criterion_5_detection_determinism_and_labeling_oracle() {
    let mut failures = Vec::new();

    // Byte-identical CSV across repeated runs of the full chain.
    let sc = scenario_1d(3);
    let surface = strict_match(&sc.template, &sc.signal, 4, Mode::Linear)
        .unwrap()
        .surface;
    let first = detect_peaks(&surface, 0.5, Connectivity::Eight, Weighting::Intensity).unwrap();
    let baseline = detections_to_csv(&first);
    for run in 0..5 {
        let again =
            detect_peaks(&surface, 0.5, Connectivity::Eight, Weighting::Intensity).unwrap();
        if detections_to_csv(&again) != baseline {
            failures.push(format!("run {run}: detection CSV bytes changed"));
        }
    }

    // Component counts against an independent flood-fill oracle.
    let mut rng = ChaCha8Rng::seed_from_u64(0xF100D);
    for case in 0..100 {
        let (w, h) = (rng.random_range(1..=16), rng.random_range(1..=16));
        let bits: Vec<bool> = (0..w * h).map(|_| rng.random_bool(0.4)).collect();
        let mask = Mask::from_bits(w, h, 1.0, bits).unwrap();
        for connectivity in [Connectivity::Four, Connectivity::Eight] {
            let labeled = strictmatch::label_components(&mask, connectivity);
            let oracle = flood_fill_count(&mask, connectivity);
            if labeled.count() != oracle {
                failures.push(format!(
                    "case {case}: labeler found {} components, flood fill {} ({connectivity:?})",
                    labeled.count(),
                    oracle
                ));
            }
        }
        if failures.len() > 5 {
            break;
        }
    }
    report(
        5,
        "byte-identical detection CSV and flood-fill-verified component counts",
        failures,
    );
}

/// Stack-based flood fill, independent of the union-find labeler.
fn flood_fill_count(mask: &Mask, connectivity: Connectivity) -> u32 {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.bits()[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push((start % w, start / w));
        while let Some((x, y)) = stack.pop() {
            let mut neighbors = vec![];
            if x > 0 {
                neighbors.push((x - 1, y));
            }
            if x + 1 < w {
                neighbors.push((x + 1, y));
            }
            if y > 0 {
                neighbors.push((x, y - 1));
            }
            if y + 1 < h {
                neighbors.push((x, y + 1));
            }
            if connectivity == Connectivity::Eight {
                if x > 0 && y > 0 {
                    neighbors.push((x - 1, y - 1));
                }
                if x + 1 < w && y > 0 {
                    neighbors.push((x + 1, y - 1));
                }
                if x > 0 && y + 1 < h {
                    neighbors.push((x - 1, y + 1));
                }
                if x + 1 < w && y + 1 < h {
                    neighbors.push((x + 1, y + 1));
                }
            }
            for (nx, ny) in neighbors {
                let i = ny * w + nx;
                if mask.bits()[i] && !seen[i] {
                    seen[i] = true;
                    stack.push((nx, ny));
                }
            }
        }
    }
    count
}

#[test]
fn criterion_6_spectral_engine_outruns_naive() {
    let mut failures = Vec::new();
    let cell = bench::run_cell(256, 32, 16, 0xBE7C).unwrap();

    if !cell.engines_agree {
        failures.push("fft and naive engines disagree on the 256/32/g16 cell".into());
    }
    if cell.fft_seconds >= cell.naive_seconds {
        failures.push(format!(
            "fft {}s is not strictly faster than naive {}s",
            cell.fft_seconds, cell.naive_seconds
        ));
    }
    println!("  {}", bench::CSV_HEADER);
    println!("  {}", cell.csv_row(rayon::current_num_threads()));
    report(
        6,
        "fft wall time strictly below naive at signal 256^2, template 32^2, g=16",
        failures,
    );
}

#[test]
fn criterion_7_pgm_round_trip() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x96B);

    for case in 0..100 {
        let depth = [1u32, 255, 65535][case % 3];
        let format = if case % 2 == 0 {
            PgmFormat::Ascii
        } else {
            PgmFormat::Binary
        };
        let (w, h) = (rng.random_range(1..=12), rng.random_range(1..=12));
        let img = random_image(&mut rng, w, h, depth);
        let bytes = write_pgm(&img, format).unwrap();
        match read_pgm(&bytes) {
            Ok(back) if back == img => {}
            Ok(_) => failures.push(format!("case {case}: pixels changed across round trip")),
            Err(e) => failures.push(format!("case {case}: canonical output failed to parse: {e}")),
        }
        if failures.len() > 5 {
            break;
        }
    }
    report(7, "pixel-exact PGM round trips at 1/8/16-bit depths", failures);
}
