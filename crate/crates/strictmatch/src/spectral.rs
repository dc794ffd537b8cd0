//! Discrete Fourier transforms and the fast / naive cross-correlation pair.
//!
//! Conventions, shared by every surface produced here and asserted by tests:
//!
//! * The forward DFT is unnormalized; the inverse carries the `1/N` factor,
//!   so `inverse_dft(forward_dft(x)) == x`.
//! * Correlation (not convolution): the surface holds
//!   `c[tau] = sum_x a(x) * b(x + tau)`, realized spectrally as
//!   `F^-1(conj(F(a)) * F(b))`. The conjugate is what makes an asymmetric
//!   template match at its true displacement instead of the mirrored one.
//! * Linear mode zero-pads to `(wa + wb - 1) x (ha + hb - 1)` so lags never
//!   wrap; index (0, 0) is the most negative displacement and `origin` marks
//!   zero lag at `(wa - 1, ha - 1)`. Circular mode requires equal dimensions
//!   and indexes cyclic lags from 0 with `origin` at (0, 0).
//! * Padded transform sizes are rounded up to 5-smooth lengths for speed and
//!   the result is cropped back, so output dimensions are always exact.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Correlations of binary layers are integer counts; spectral results within
/// this distance of an integer are snapped to it.
pub const SNAP_TOLERANCE: f64 = 1e-6;

/// Lag-space handling for a correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Zero-padded, non-wrapping lags; the default for template matching.
    Linear,
    /// Cyclic lags from the raw DFT product; requires equal dimensions.
    Circular,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Linear => "linear",
            Mode::Circular => "circular",
        }
    }
}

/// Complex DFT coefficients of a real raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    width: usize,
    height: usize,
    bins: Vec<Complex<f64>>,
}

impl Spectrum {
    pub fn new(width: usize, height: usize, bins: Vec<Complex<f64>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRaster);
        }
        let expected = width * height;
        if bins.len() != expected {
            return Err(Error::SpectrumSize {
                width,
                height,
                expected,
                got: bins.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bins,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bins(&self) -> &[Complex<f64>] {
        &self.bins
    }
}

/// A real-valued raster indexed by lag, with `origin` recording which index
/// corresponds to zero displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSurface {
    width: usize,
    height: usize,
    values: Vec<f64>,
    origin: (usize, usize),
}

impl RealSurface {
    pub fn new(
        width: usize,
        height: usize,
        values: Vec<f64>,
        origin: (usize, usize),
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRaster);
        }
        let expected = width * height;
        if values.len() != expected {
            return Err(Error::RasterSize {
                width,
                height,
                expected,
                got: values.len(),
            });
        }
        if origin.0 >= width || origin.1 >= height {
            return Err(Error::OriginOutOfBounds {
                x: origin.0,
                y: origin.1,
                width,
                height,
            });
        }
        Ok(Self {
            width,
            height,
            values,
            origin,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the zero-displacement lag.
    pub fn origin(&self) -> (usize, usize) {
        self.origin
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Signed displacement encoded by surface index `(x, y)`.
    pub fn lag_of(&self, x: usize, y: usize) -> (i64, i64) {
        (x as i64 - self.origin.0 as i64, y as i64 - self.origin.1 as i64)
    }

    /// Surface index holding displacement `lag`, if it is in range.
    pub fn index_of(&self, lag: (i64, i64)) -> Option<(usize, usize)> {
        let x = lag.0 + self.origin.0 as i64;
        let y = lag.1 + self.origin.1 as i64;
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            Some((x as usize, y as usize))
        } else {
            None
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Peak value and its lag. Ties break to the smallest row-major index.
    pub fn peak(&self) -> (f64, (i64, i64)) {
        let mut best = f64::NEG_INFINITY;
        let mut at = (0usize, 0usize);
        for y in 0..self.height {
            for x in 0..self.width {
                let v = self.get(x, y);
                if v > best {
                    best = v;
                    at = (x, y);
                }
            }
        }
        (best, self.lag_of(at.0, at.1))
    }

    /// Rounds every value within `tol` of an integer to that integer.
    /// Negative zero normalizes to zero so serialized surfaces are stable.
    pub fn snap_integers(&mut self, tol: f64) {
        for v in &mut self.values {
            let r = v.round();
            if (*v - r).abs() <= tol {
                *v = if r == 0.0 { 0.0 } else { r };
            }
        }
    }

    /// Elementwise sum; dimensions and origins must agree.
    pub(crate) fn accumulate(&mut self, other: &RealSurface) {
        debug_assert_eq!(self.width, other.width);
        debug_assert_eq!(self.height, other.height);
        debug_assert_eq!(self.origin, other.origin);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }
}

fn check_raster(values: &[f64], dims: (usize, usize)) -> Result<()> {
    let (width, height) = dims;
    if width == 0 || height == 0 {
        return Err(Error::EmptyRaster);
    }
    let expected = width * height;
    if values.len() != expected {
        return Err(Error::RasterSize {
            width,
            height,
            expected,
            got: values.len(),
        });
    }
    Ok(())
}

/// Smallest 5-smooth integer (factors 2, 3, 5 only) that is `>= n`.
pub fn next_fast_len(n: usize) -> usize {
    debug_assert!(n >= 1);
    let mut best = usize::MAX;
    let mut p5 = 1usize;
    while p5 < best {
        let mut p35 = p5;
        while p35 < best {
            // Smallest power of two lifting p35 to or above n.
            let mut candidate = p35;
            while candidate < n {
                match candidate.checked_mul(2) {
                    Some(c) => candidate = c,
                    None => break,
                }
            }
            if candidate >= n && candidate < best {
                best = candidate;
            }
            match p35.checked_mul(3) {
                Some(c) => p35 = c,
                None => break,
            }
        }
        match p5.checked_mul(5) {
            Some(c) => p5 = c,
            None => break,
        }
    }
    best
}

/// In-place 2D FFT as a row pass followed by a column pass.
fn fft_2d(buf: &mut [Complex<f64>], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let row_fft = if inverse {
        planner.plan_fft_inverse(width)
    } else {
        planner.plan_fft_forward(width)
    };
    for row in buf.chunks_exact_mut(width) {
        row_fft.process(row);
    }
    if height > 1 {
        let col_fft = if inverse {
            planner.plan_fft_inverse(height)
        } else {
            planner.plan_fft_forward(height)
        };
        let mut col = vec![Complex::default(); height];
        for x in 0..width {
            for y in 0..height {
                col[y] = buf[y * width + x];
            }
            col_fft.process(&mut col);
            for y in 0..height {
                buf[y * width + x] = col[y];
            }
        }
    }
}

/// Unnormalized forward DFT of a real raster.
pub fn forward_dft(values: &[f64], dims: (usize, usize)) -> Result<Spectrum> {
    check_raster(values, dims)?;
    let (width, height) = dims;
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft_2d(&mut buf, width, height, false);
    Spectrum::new(width, height, buf)
}

/// Inverse DFT scaled by `1/N`, returning the real parts.
///
/// For spectra of real data the imaginary residue is below `1e-9` of the peak
/// magnitude and is discarded; feeding a spectrum that does not correspond to
/// a real raster simply projects onto its real part.
pub fn inverse_dft(spectrum: &Spectrum) -> Vec<f64> {
    let mut buf = spectrum.bins().to_vec();
    fft_2d(&mut buf, spectrum.width(), spectrum.height(), true);
    let scale = 1.0 / (spectrum.width() * spectrum.height()) as f64;
    buf.into_iter().map(|c| c.re * scale).collect()
}

/// Lag-space geometry shared by the fft and naive correlators.
fn surface_geometry(
    a_dims: (usize, usize),
    b_dims: (usize, usize),
    mode: Mode,
) -> Result<(usize, usize, (usize, usize))> {
    let (wa, ha) = a_dims;
    let (wb, hb) = b_dims;
    match mode {
        Mode::Linear => Ok((wa + wb - 1, ha + hb - 1, (wa - 1, ha - 1))),
        Mode::Circular => {
            if a_dims != b_dims {
                return Err(Error::CircularDimsMismatch {
                    aw: wa,
                    ah: ha,
                    bw: wb,
                    bh: hb,
                });
            }
            Ok((wa, ha, (0, 0)))
        }
    }
}

/// Cross-correlates two real rasters through the frequency domain:
/// `surface[tau] = sum_x a(x) * b(x + tau)`.
pub fn cross_correlate_fft(
    a: &[f64],
    a_dims: (usize, usize),
    b: &[f64],
    b_dims: (usize, usize),
    mode: Mode,
) -> Result<RealSurface> {
    check_raster(a, a_dims)?;
    check_raster(b, b_dims)?;
    let (out_w, out_h, origin) = surface_geometry(a_dims, b_dims, mode)?;

    let (fft_w, fft_h) = match mode {
        Mode::Linear => (next_fast_len(out_w), next_fast_len(out_h)),
        Mode::Circular => (out_w, out_h),
    };
    let n = fft_w * fft_h;

    let embed = |src: &[f64], (w, h): (usize, usize)| {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for y in 0..h {
            for x in 0..w {
                buf[y * fft_w + x].re = src[y * w + x];
            }
        }
        buf
    };

    let mut fa = embed(a, a_dims);
    let mut fb = embed(b, b_dims);
    fft_2d(&mut fa, fft_w, fft_h, false);
    fft_2d(&mut fb, fft_w, fft_h, false);
    for (va, vb) in fa.iter_mut().zip(&fb) {
        *va = va.conj() * vb;
    }
    fft_2d(&mut fa, fft_w, fft_h, true);
    let scale = 1.0 / n as f64;

    // Negative lags live at the top of the cyclic buffer; fold them back.
    let mut values = vec![0.0; out_w * out_h];
    for iy in 0..out_h {
        let ty = iy as i64 - origin.1 as i64;
        let ky = ty.rem_euclid(fft_h as i64) as usize;
        for ix in 0..out_w {
            let tx = ix as i64 - origin.0 as i64;
            let kx = tx.rem_euclid(fft_w as i64) as usize;
            values[iy * out_w + ix] = fa[ky * fft_w + kx].re * scale;
        }
    }
    RealSurface::new(out_w, out_h, values, origin)
}

/// Direct-summation sliding dot product with exactly the same lag indexing
/// and origin convention as [`cross_correlate_fft`]. Bit-for-bit
/// deterministic; serves as the spectral path's ground truth and as the
/// benchmark baseline.
pub fn cross_correlate_naive(
    a: &[f64],
    a_dims: (usize, usize),
    b: &[f64],
    b_dims: (usize, usize),
    mode: Mode,
) -> Result<RealSurface> {
    check_raster(a, a_dims)?;
    check_raster(b, b_dims)?;
    let (out_w, out_h, origin) = surface_geometry(a_dims, b_dims, mode)?;
    let (wa, ha) = a_dims;
    let (wb, hb) = b_dims;

    let mut values = vec![0.0; out_w * out_h];
    match mode {
        Mode::Linear => {
            for iy in 0..out_h {
                let ty = iy as i64 - origin.1 as i64;
                let y0 = (-ty).max(0) as usize;
                let y1 = (hb as i64 - ty).min(ha as i64).max(0) as usize;
                for ix in 0..out_w {
                    let tx = ix as i64 - origin.0 as i64;
                    let x0 = (-tx).max(0) as usize;
                    let x1 = (wb as i64 - tx).min(wa as i64).max(0) as usize;
                    let mut acc = 0.0;
                    for y in y0..y1 {
                        let by = (y as i64 + ty) as usize;
                        for x in x0..x1 {
                            let bx = (x as i64 + tx) as usize;
                            acc += a[y * wa + x] * b[by * wb + bx];
                        }
                    }
                    values[iy * out_w + ix] = acc;
                }
            }
        }
        Mode::Circular => {
            for ty in 0..out_h {
                for tx in 0..out_w {
                    let mut acc = 0.0;
                    for y in 0..ha {
                        let by = (y + ty) % hb;
                        for x in 0..wa {
                            let bx = (x + tx) % wb;
                            acc += a[y * wa + x] * b[by * wb + bx];
                        }
                    }
                    values[ty * out_w + tx] = acc;
                }
            }
        }
    }
    RealSurface::new(out_w, out_h, values, origin)
}
