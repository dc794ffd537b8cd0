//! Gray-level requantization and binary threshold decomposition.
//!
//! A `QuantizationScheme` turns a gray depth `G` and a level count `g` into an
//! explicit ladder of cutoffs; `decompose` slices an image into one binary
//! layer per cutoff, layer `i` marking the pixels at or above cutoff `i`.
//! Because the cutoffs increase, the layers nest: wherever a higher layer is
//! set, every lower layer is set too, and the column sum over layers at a
//! pixel equals the number of cutoffs that pixel clears (its level count).

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// The threshold ladder driving a decomposition: `g` strictly increasing
/// cutoffs over a source depth `G`.
///
/// Cutoffs are `i * G / g` for `i = 1..=g`, so the count is exactly `g`, the
/// top cutoff sits at `G`, and doubling `g` refines the ladder in place
/// (every coarse cutoff survives in the finer ladder). The one special case
/// is `g = 1`, where the single cutoff is `G / 2` so that a binary image of
/// depth 1 decomposes to itself.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationScheme {
    levels: usize,
    depth: u32,
    thresholds: Vec<f64>,
}

impl QuantizationScheme {
    pub fn new(depth: u32, levels: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        if levels == 0 {
            return Err(Error::ZeroLevels);
        }
        if levels as u64 > u64::from(depth) {
            log::warn!(
                "requested {levels} levels for depth {depth}: cutoffs fall between \
                 integer gray values and some layers will be duplicates"
            );
        }
        let thresholds = if levels == 1 {
            vec![f64::from(depth) / 2.0]
        } else {
            (1..=levels)
                .map(|i| i as f64 * f64::from(depth) / levels as f64)
                .collect()
        };
        debug_assert!(thresholds.windows(2).all(|w| w[0] < w[1]));
        Ok(Self {
            levels,
            depth,
            thresholds,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// The strictly increasing cutoff list; `thresholds()[i]` drives layer `i + 1`.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of cutoffs a value clears. Comparison is inclusive: a pixel
    /// equal to a cutoff belongs to that layer. Pixel-vs-cutoff comparison is
    /// exact integer-vs-f64, so results do not depend on the platform.
    pub fn level_of(&self, value: u32) -> u32 {
        self.thresholds
            .iter()
            .take_while(|&&t| f64::from(value) >= t)
            .count() as u32
    }
}

/// One binary slice of a decomposition. `index` is the 1-based layer ordinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLayer {
    width: usize,
    height: usize,
    index: usize,
    values: Vec<u8>,
}

impl BinaryLayer {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Row-major values, each 0 or 1.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.values[y * self.width + x]
    }

    pub fn ones(&self) -> u64 {
        self.values.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }
}

/// The ordered set of binary layers produced by one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    layers: Vec<BinaryLayer>,
    scheme: QuantizationScheme,
}

impl LayerStack {
    pub fn layers(&self) -> &[BinaryLayer] {
        &self.layers
    }

    pub fn scheme(&self) -> &QuantizationScheme {
        &self.scheme
    }

    /// Total number of set bits across all layers; the image's mass under
    /// this scheme and the strict-match score of the image against itself.
    pub fn mass(&self) -> u64 {
        self.layers.iter().map(BinaryLayer::ones).sum()
    }
}

/// Slices `image` into one binary layer per cutoff of `scheme`:
/// `layer_i(x) = 1` iff `pixel(x) >= thresholds[i]`.
pub fn decompose(image: &GrayImage, scheme: &QuantizationScheme) -> Result<LayerStack> {
    if scheme.depth() != image.depth() {
        return Err(Error::SchemeDepthMismatch {
            scheme: scheme.depth(),
            image: image.depth(),
        });
    }
    let layers = scheme
        .thresholds()
        .iter()
        .enumerate()
        .map(|(i, &cutoff)| BinaryLayer {
            width: image.width(),
            height: image.height(),
            index: i + 1,
            values: image
                .pixels()
                .iter()
                .map(|&p| u8::from(f64::from(p) >= cutoff))
                .collect(),
        })
        .collect();
    Ok(LayerStack {
        layers,
        scheme: scheme.clone(),
    })
}

/// Closed form of the decomposition column sums: `L(x)` counts the cutoffs
/// pixel `x` clears, i.e. the pixel's requantized level.
pub fn level_counts(image: &GrayImage, scheme: &QuantizationScheme) -> Result<Vec<u32>> {
    if scheme.depth() != image.depth() {
        return Err(Error::SchemeDepthMismatch {
            scheme: scheme.depth(),
            image: image.depth(),
        });
    }
    Ok(image.pixels().iter().map(|&p| scheme.level_of(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_two_levels_at_depth_255() {
        let s = QuantizationScheme::new(255, 2).unwrap();
        assert_eq!(s.thresholds(), &[127.5, 255.0]);
    }

    #[test]
    fn scheme_four_levels_at_depth_16() {
        let s = QuantizationScheme::new(16, 4).unwrap();
        assert_eq!(s.thresholds(), &[4.0, 8.0, 12.0, 16.0]);
        assert_eq!(s.thresholds().len(), s.levels());
    }

    #[test]
    fn scheme_binary_degenerate_case() {
        let s = QuantizationScheme::new(1, 1).unwrap();
        assert_eq!(s.thresholds(), &[0.5]);
    }

    #[test]
    fn scheme_count_and_monotonicity_hold_over_grid() {
        for depth in [1u32, 2, 9, 15, 16, 255, 65535] {
            for levels in [1usize, 2, 3, 4, 8, 16, 17] {
                let s = QuantizationScheme::new(depth, levels).unwrap();
                assert_eq!(s.thresholds().len(), levels, "G={depth} g={levels}");
                assert!(s.thresholds().iter().all(|&t| t > 0.0));
                assert!(s.thresholds().windows(2).all(|w| w[0] < w[1]));
                assert!(*s.thresholds().last().unwrap() <= f64::from(depth));
            }
        }
    }

    #[test]
    fn scheme_rejects_zero_inputs() {
        assert!(matches!(
            QuantizationScheme::new(0, 4),
            Err(Error::ZeroDepth)
        ));
        assert!(matches!(
            QuantizationScheme::new(255, 0),
            Err(Error::ZeroLevels)
        ));
    }

    #[test]
    fn binary_image_decomposes_to_itself() {
        let bits = vec![0, 1, 0, 1, 1, 1, 0, 1, 1, 0];
        let img = GrayImage::signal(1, bits.clone()).unwrap();
        let scheme = QuantizationScheme::new(1, 1).unwrap();
        let stack = decompose(&img, &scheme).unwrap();
        assert_eq!(stack.layers().len(), 1);
        let layer: Vec<u32> = stack.layers()[0].values().iter().map(|&v| u32::from(v)).collect();
        assert_eq!(layer, bits);
    }

    #[test]
    fn constant_zero_image_gives_all_zero_layers() {
        let img = GrayImage::constant(4, 3, 255, 0).unwrap();
        let scheme = QuantizationScheme::new(255, 8).unwrap();
        let stack = decompose(&img, &scheme).unwrap();
        assert!(stack
            .layers()
            .iter()
            .all(|l| l.values().iter().all(|&v| v == 0)));
        assert_eq!(stack.mass(), 0);
    }

    #[test]
    fn three_pixel_example_with_three_levels() {
        let img = GrayImage::signal(9, vec![2, 5, 9]).unwrap();
        let scheme = QuantizationScheme::new(9, 3).unwrap();
        assert_eq!(scheme.thresholds(), &[3.0, 6.0, 9.0]);
        let stack = decompose(&img, &scheme).unwrap();
        assert_eq!(stack.layers()[0].values(), &[0, 1, 1]);
        assert_eq!(stack.layers()[1].values(), &[0, 0, 1]);
        assert_eq!(stack.layers()[2].values(), &[0, 0, 1]);
        let counts = level_counts(&img, &scheme).unwrap();
        assert_eq!(counts, vec![0, 1, 3]);
    }

    #[test]
    fn level_counts_saturate_at_extremes() {
        let full = GrayImage::constant(3, 3, 255, 255).unwrap();
        let zero = GrayImage::constant(3, 3, 255, 0).unwrap();
        let scheme = QuantizationScheme::new(255, 16).unwrap();
        assert!(level_counts(&full, &scheme)
            .unwrap()
            .iter()
            .all(|&l| l == 16));
        assert!(level_counts(&zero, &scheme).unwrap().iter().all(|&l| l == 0));
    }

    #[test]
    fn level_counts_match_decompose_column_sums() {
        // Fixed pseudo-random 8x8 image, g = 4.
        let img = GrayImage::from_fn(8, 8, 255, |x, y| ((x * 37 + y * 101 + 13) % 256) as u32)
            .unwrap();
        let scheme = QuantizationScheme::new(255, 4).unwrap();
        let stack = decompose(&img, &scheme).unwrap();
        let counts = level_counts(&img, &scheme).unwrap();
        for (i, &count) in counts.iter().enumerate() {
            let col: u32 = stack.layers().iter().map(|l| u32::from(l.values()[i])).sum();
            assert_eq!(col, count);
        }
    }

    #[test]
    fn layers_nest_downward() {
        let img = GrayImage::from_fn(6, 5, 99, |x, y| ((x * 17 + y * 29) % 100) as u32).unwrap();
        let scheme = QuantizationScheme::new(99, 7).unwrap();
        let stack = decompose(&img, &scheme).unwrap();
        for pair in stack.layers().windows(2) {
            for (lo, hi) in pair[0].values().iter().zip(pair[1].values()) {
                assert!(hi <= lo);
            }
        }
    }

    #[test]
    fn decompose_rejects_depth_mismatch() {
        let img = GrayImage::constant(2, 2, 255, 7).unwrap();
        let scheme = QuantizationScheme::new(100, 4).unwrap();
        assert!(matches!(
            decompose(&img, &scheme),
            Err(Error::SchemeDepthMismatch { .. })
        ));
        assert!(matches!(
            level_counts(&img, &scheme),
            Err(Error::SchemeDepthMismatch { .. })
        ));
    }
}
