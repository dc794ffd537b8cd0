//! The strict matcher, its exact direct-summation counterpart, and the plain
//! bilinear-correlation baseline.
//!
//! The strict score of a template against a signal at lag `tau` is the number
//! of coincident ones summed over all binary threshold layers. Because the
//! layers nest, that sum collapses to
//! `sum_x min(L_t(x), L_s(x + tau))`
//! where `L` is the per-pixel level count — so the spectral path
//! (per-layer FFT correlations, summed) and [`min_level_surface`] (direct
//! min-sum) must agree lag for lag. The latter characterizes the former
//! exactly and serves as its oracle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::layers::{decompose, level_counts, QuantizationScheme};
use crate::spectral::{
    cross_correlate_fft, cross_correlate_naive, Mode, RealSurface, SNAP_TOLERANCE,
};

/// Which correlation primitive drives the match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Frequency-domain correlation; the fast path.
    Fft,
    /// Direct sliding-window summation; the slow reference.
    Naive,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Fft => "fft",
            Engine::Naive => "naive",
        }
    }

    fn correlate(
        self,
        a: &[f64],
        a_dims: (usize, usize),
        b: &[f64],
        b_dims: (usize, usize),
        mode: Mode,
    ) -> Result<RealSurface> {
        match self {
            Engine::Fft => cross_correlate_fft(a, a_dims, b, b_dims, mode),
            Engine::Naive => cross_correlate_naive(a, a_dims, b, b_dims, mode),
        }
    }
}

/// Outcome of a matching run: the full lag surface plus its peak.
#[derive(Debug, Clone)]
pub struct MatchResult {
    /// Score per lag; strict surfaces are snapped to integers.
    pub surface: RealSurface,
    /// Quantization levels used; `None` for plain correlation.
    pub levels: Option<usize>,
    pub mode: Mode,
    /// Maximum surface value.
    pub peak_value: f64,
    /// Displacement attaining the peak; ties break to the smallest
    /// row-major surface index.
    pub peak_lag: (i64, i64),
    /// Total template level count, the strict score of the template against
    /// itself and an upper bound for every lag. `None` for plain correlation.
    pub template_mass: Option<f64>,
}

fn check_pair(template: &GrayImage, signal: &GrayImage, mode: Mode) -> Result<()> {
    if template.depth() != signal.depth() {
        return Err(Error::DepthMismatch {
            template: template.depth(),
            signal: signal.depth(),
        });
    }
    match mode {
        Mode::Linear => {
            if template.width() > signal.width() || template.height() > signal.height() {
                return Err(Error::TemplateLargerThanSignal {
                    tw: template.width(),
                    th: template.height(),
                    sw: signal.width(),
                    sh: signal.height(),
                });
            }
        }
        Mode::Circular => {
            if template.dims() != signal.dims() {
                return Err(Error::CircularDimsMismatch {
                    aw: template.width(),
                    ah: template.height(),
                    bw: signal.width(),
                    bh: signal.height(),
                });
            }
        }
    }
    Ok(())
}

/// Strict match via the FFT engine. See [`strict_match_with`].
pub fn strict_match(
    template: &GrayImage,
    signal: &GrayImage,
    levels: usize,
    mode: Mode,
) -> Result<MatchResult> {
    strict_match_with(template, signal, levels, mode, Engine::Fft)
}

/// Decomposes template and signal against one shared threshold ladder,
/// cross-correlates each layer pair, and sums the per-layer surfaces into the
/// global strict-match surface.
///
/// Both images must declare the same depth so that a single scheme drives
/// both decompositions; promote the smaller-depth image first if they differ.
/// Per-layer surfaces are integer counts, so each is snapped before the sum —
/// layers can then be accumulated in any order without changing the result.
pub fn strict_match_with(
    template: &GrayImage,
    signal: &GrayImage,
    levels: usize,
    mode: Mode,
    engine: Engine,
) -> Result<MatchResult> {
    check_pair(template, signal, mode)?;
    let scheme = QuantizationScheme::new(template.depth(), levels)?;
    let t_stack = decompose(template, &scheme)?;
    let s_stack = decompose(signal, &scheme)?;
    let t_dims = template.dims();
    let s_dims = signal.dims();

    let layer_surfaces: Vec<RealSurface> = t_stack
        .layers()
        .par_iter()
        .zip(s_stack.layers().par_iter())
        .map(|(tl, sl)| {
            let mut surface =
                engine.correlate(&tl.to_f64(), t_dims, &sl.to_f64(), s_dims, mode)?;
            surface.snap_integers(SNAP_TOLERANCE);
            Ok(surface)
        })
        .collect::<Result<_>>()?;

    let mut iter = layer_surfaces.into_iter();
    let mut surface = iter.next().expect("levels >= 1");
    for layer in iter {
        surface.accumulate(&layer);
    }
    surface.snap_integers(SNAP_TOLERANCE);

    let (peak_value, peak_lag) = surface.peak();
    let mass = t_stack.mass();
    Ok(MatchResult {
        surface,
        levels: Some(levels),
        mode,
        peak_value,
        peak_lag,
        template_mass: Some(mass as f64),
    })
}

/// The exact strict-match surface by direct summation:
/// `surface[tau] = sum_x min(L_t(x), L_s(x + tau))` over the level-count
/// rasters. Integer arithmetic throughout; this is the value the spectral
/// path approximates and must reproduce exactly after snapping.
pub fn min_level_surface(
    template: &GrayImage,
    signal: &GrayImage,
    levels: usize,
    mode: Mode,
) -> Result<RealSurface> {
    check_pair(template, signal, mode)?;
    let scheme = QuantizationScheme::new(template.depth(), levels)?;
    let lt = level_counts(template, &scheme)?;
    let ls = level_counts(signal, &scheme)?;
    let (wa, ha) = template.dims();
    let (wb, hb) = signal.dims();

    let (out_w, out_h, origin) = match mode {
        Mode::Linear => (wa + wb - 1, ha + hb - 1, (wa - 1, ha - 1)),
        Mode::Circular => (wa, ha, (0, 0)),
    };

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
                    let mut acc: u64 = 0;
                    for y in y0..y1 {
                        let by = (y as i64 + ty) as usize;
                        for x in x0..x1 {
                            let bx = (x as i64 + tx) as usize;
                            acc += u64::from(lt[y * wa + x].min(ls[by * wb + bx]));
                        }
                    }
                    values[iy * out_w + ix] = acc as f64;
                }
            }
        }
        Mode::Circular => {
            for ty in 0..out_h {
                for tx in 0..out_w {
                    let mut acc: u64 = 0;
                    for y in 0..ha {
                        let by = (y + ty) % hb;
                        for x in 0..wa {
                            let bx = (x + tx) % wb;
                            acc += u64::from(lt[y * wa + x].min(ls[by * wb + bx]));
                        }
                    }
                    values[ty * out_w + tx] = acc as f64;
                }
            }
        }
    }
    RealSurface::new(out_w, out_h, values, origin)
}

/// Plain correlation via the FFT engine. See [`plain_correlation_with`].
pub fn plain_correlation(
    template: &GrayImage,
    signal: &GrayImage,
    mode: Mode,
) -> Result<MatchResult> {
    plain_correlation_with(template, signal, mode, Engine::Fft)
}

/// Raw bilinear cross-correlation of gray values: no decomposition, no
/// normalization. The comparison baseline whose score scales with intensity —
/// one bright distractor can outscore a true instance.
pub fn plain_correlation_with(
    template: &GrayImage,
    signal: &GrayImage,
    mode: Mode,
    engine: Engine,
) -> Result<MatchResult> {
    check_pair(template, signal, mode)?;
    let surface = engine.correlate(
        &template.to_f64(),
        template.dims(),
        &signal.to_f64(),
        signal.dims(),
        mode,
    )?;
    let (peak_value, peak_lag) = surface.peak();
    Ok(MatchResult {
        surface,
        levels: None,
        mode,
        peak_value,
        peak_lag,
        template_mass: None,
    })
}
