//! Deterministic synthetic scenes that separate strict matching from plain
//! correlation.
//!
//! Each scene plants one exact copy of a low-amplitude, asymmetric template
//! into an empty signal, then adds rectangular distractor pulses of a
//! different shape at double the amplitude and one isolated saturated spike.
//! Plain correlation scales with intensity, so its argmax lands on a bright
//! distractor; the strict score of a distractor is capped by how much of the
//! template footprint it covers, so with enough quantization levels the
//! strict argmax stays on the planted copy.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::image::GrayImage;

/// Gray depth used by all generated scenes.
pub const SCENE_DEPTH: u32 = 255;

const SIGNAL_LEN_1D: usize = 256;
const TEMPLATE_LEN_1D: usize = 16;
const SIGNAL_SIDE_2D: usize = 64;
const TEMPLATE_SIDE_2D: usize = 8;

/// A generated scene and where the template was planted.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub template: GrayImage,
    pub signal: GrayImage,
    /// Displacement of the planted instance: the lag a correct matcher
    /// reports as its argmax.
    pub true_lag: (i64, i64),
}

/// Standard 1D scene: three distractors plus a spike.
pub fn scenario_1d(seed: u64) -> Scenario {
    scenario_1d_with(seed, 3, true)
}

/// Standard 2D scene: three distractor blocks plus a spike.
pub fn scenario_2d(seed: u64) -> Scenario {
    scenario_2d_with(seed, 3, true)
}

// Non-overlapping slot placement by rejection sampling. The occupied area is
// a small fraction of the scene, so a fit always exists at these densities.
fn place(
    rng: &mut ChaCha8Rng,
    extent: (usize, usize),
    scene: (usize, usize),
    taken: &mut Vec<(usize, usize, usize, usize)>,
) -> (usize, usize) {
    let margin = 3;
    let (w, h) = extent;
    let (sw, sh) = scene;
    assert!(
        w + 4 < sw && (sh == 1 && h == 1 || h + 4 < sh),
        "slot larger than scene"
    );
    for _ in 0..10_000 {
        let x = rng.random_range(2..sw - w - 2);
        let y = if sh == 1 { 0 } else { rng.random_range(2..sh - h - 2) };
        let free = taken.iter().all(|&(tx, ty, tw, th)| {
            x >= tx + tw + margin
                || tx >= x + w + margin
                || y >= ty + th + margin
                || ty >= y + h + margin
        });
        if free {
            taken.push((x, y, w, h));
            return (x, y);
        }
    }
    panic!("could not place a {w}x{h} slot; lower the distractor count");
}

/// 1D scene with explicit clutter controls; `scenario_1d_with(seed, 0, false)`
/// is the degenerate scene where both matchers agree.
pub fn scenario_1d_with(seed: u64, distractors: usize, spike: bool) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Slow ramp up, fast drop, jittered per seed: asymmetric and low-valued.
    let mut base: Vec<i64> = (0..12).map(|i| 24 + (72 * i) / 11).collect();
    base.extend_from_slice(&[72, 48, 32, 24]);
    let template: Vec<u32> = base
        .iter()
        .map(|&v| {
            let jitter = rng.random_range(-8i64..=8);
            (v + jitter).clamp(1, 110) as u32
        })
        .collect();

    let mut samples = vec![0u32; SIGNAL_LEN_1D];
    let mut taken = Vec::new();

    let true_x = place(&mut rng, (TEMPLATE_LEN_1D, 1), (SIGNAL_LEN_1D, 1), &mut taken).0;
    samples[true_x..true_x + TEMPLATE_LEN_1D].copy_from_slice(&template);

    for _ in 0..distractors {
        let width = rng.random_range(9..=13);
        let amp = rng.random_range(200..=255);
        let x = place(&mut rng, (width, 1), (SIGNAL_LEN_1D, 1), &mut taken).0;
        samples[x..x + width].fill(amp);
    }
    if spike {
        let x = place(&mut rng, (1, 1), (SIGNAL_LEN_1D, 1), &mut taken).0;
        samples[x] = SCENE_DEPTH;
    }

    Scenario {
        template: GrayImage::signal(SCENE_DEPTH, template).unwrap(),
        signal: GrayImage::signal(SCENE_DEPTH, samples).unwrap(),
        true_lag: (true_x as i64, 0),
    }
}

/// 2D scene with explicit clutter controls.
pub fn scenario_2d_with(seed: u64, distractors: usize, spike: bool) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2d2d_2d2d);

    let side = TEMPLATE_SIDE_2D;
    let mut template = vec![0u32; side * side];
    for y in 0..side {
        for x in 0..side {
            // Diagonal gradient blob, brighter toward one corner.
            let base = (24 + 9 * x + 5 * y).min(100) as i64;
            let jitter = rng.random_range(-6i64..=6);
            template[y * side + x] = (base + jitter).clamp(1, 110) as u32;
        }
    }

    let scene = (SIGNAL_SIDE_2D, SIGNAL_SIDE_2D);
    let mut samples = vec![0u32; scene.0 * scene.1];
    let mut taken = Vec::new();

    let (tx, ty) = place(&mut rng, (side, side), scene, &mut taken);
    for y in 0..side {
        for x in 0..side {
            samples[(ty + y) * scene.0 + tx + x] = template[y * side + x];
        }
    }

    for _ in 0..distractors {
        let w = rng.random_range(4..=6);
        let h = rng.random_range(4..=6);
        let amp = rng.random_range(200..=255);
        let (x, y) = place(&mut rng, (w, h), scene, &mut taken);
        for yy in 0..h {
            for xx in 0..w {
                samples[(y + yy) * scene.0 + x + xx] = amp;
            }
        }
    }
    if spike {
        let (x, y) = place(&mut rng, (1, 1), scene, &mut taken);
        samples[y * scene.0 + x] = SCENE_DEPTH;
    }

    Scenario {
        template: GrayImage::new(side, side, SCENE_DEPTH, template).unwrap(),
        signal: GrayImage::new(scene.0, scene.1, SCENE_DEPTH, samples).unwrap(),
        true_lag: (tx as i64, ty as i64),
    }
}
