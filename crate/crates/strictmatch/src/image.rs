//! Gray-level raster type shared by the whole pipeline.

use crate::error::{Error, Result};

/// A nonnegative integer raster with a declared maximum gray level.
///
/// `height == 1` encodes a 1D signal; everything downstream (decomposition,
/// correlation, detection) treats that case uniformly. Every pixel satisfies
/// `0 <= pixel <= depth`, enforced at construction rather than clamped later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    depth: u32,
    pixels: Vec<u32>,
}

impl GrayImage {
    /// Builds an image from row-major pixels, validating dimensions, the
    /// buffer length, and the per-pixel depth bound.
    pub fn new(width: usize, height: usize, depth: u32, pixels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(Error::PixelCount {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        if let Some(&value) = pixels.iter().find(|&&p| p > depth) {
            return Err(Error::PixelOutOfRange { value, depth });
        }
        Ok(Self {
            width,
            height,
            depth,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every coordinate.
    pub fn from_fn(
        width: usize,
        height: usize,
        depth: u32,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, depth, pixels)
    }

    /// A 1D signal: a raster of height one.
    pub fn signal(depth: u32, samples: Vec<u32>) -> Result<Self> {
        let n = samples.len();
        Self::new(n, 1, depth, samples)
    }

    /// A constant-valued image.
    pub fn constant(width: usize, height: usize, depth: u32, value: u32) -> Result<Self> {
        Self::new(width, height, depth, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// The declared maximum gray level G.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn pixels(&self) -> &[u32] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.pixels[y * self.width + x]
    }

    pub fn is_1d(&self) -> bool {
        self.height == 1
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Reinterprets the image at a higher declared depth without touching
    /// pixel data. Matching two images quantized against different ladders is
    /// meaningless, so callers holding images of unequal depth should promote
    /// both to the larger one before matching.
    pub fn promote_depth(&self, depth: u32) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::DepthNotRaised {
                from: self.depth,
                to: depth,
            });
        }
        Ok(Self {
            depth,
            ..self.clone()
        })
    }

    /// Pixel values as a row-major `f64` buffer, for the correlation engines.
    pub fn to_f64(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p)).collect()
    }
}
