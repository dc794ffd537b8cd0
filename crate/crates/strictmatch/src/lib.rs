//! Strict spectral template matching for gray-level rasters.
//!
//! Plain cross-correlation is bilinear: one saturated pixel in the signal can
//! outscore a faithful copy of the template, so its peaks say more about
//! brightness than shape. This crate implements the stricter nonlinear
//! alternative: decompose template and signal into `g` binary layers by
//! thresholding, cross-correlate each layer pair through the FFT, and sum the
//! per-layer surfaces. The resulting score counts coincident ones across
//! layers — equivalently the sliding sum of pointwise minimum quantized
//! levels — and saturates instead of rewarding brightness. `g` is the
//! tolerance knob: more levels, stricter matching.
//!
//! # Quick start
//!
//! ```
//! use strictmatch::{strict_match, GrayImage, Mode};
//!
//! // Two binary sequences as height-1 rasters.
//! let template = GrayImage::signal(1, vec![0, 1, 0, 1, 1, 1, 0, 1, 1, 0])?;
//! let signal = GrayImage::signal(1, vec![1, 0, 1, 0, 1, 0, 1, 1, 0, 0])?;
//!
//! let result = strict_match(&template, &signal, 1, Mode::Linear)?;
//! assert_eq!(result.peak_value, 5.0);
//! assert_eq!(result.peak_lag, (-1, 0)); // best alignment shifts the template left by one
//! # Ok::<(), strictmatch::Error>(())
//! ```
//!
//! # Module map
//!
//! - [`image`] — the validated [`GrayImage`] raster (height 1 encodes a 1D signal)
//! - [`layers`] — threshold ladders and binary layer decomposition
//! - [`spectral`] — DFTs plus the fft/naive cross-correlation pair
//! - [`matcher`] — strict match, its exact min-level counterpart, and the
//!   plain-correlation baseline
//! - [`detect`] — threshold / connected components / centers of mass
//! - [`scenario`] — synthetic scenes where plain correlation provably fails
//! - [`io`] — PGM (P2/P5) codecs and CSV artifact writers
//! - [`bench`] — engine timing cells used by the CLI bench command
//!
//! # Runnable examples
//!
//! Each major capability has a standalone example under `examples/`:
//!
//! ```text
//! cargo run -p strictmatch --example sequence_match    # 1D strict matching, full lag table
//! cargo run -p strictmatch --example decompose_layers  # threshold decomposition, layer dump
//! cargo run -p strictmatch --example find_pattern      # full 2D pipeline with detections
//! cargo run -p strictmatch --example discriminability  # strict vs plain argmax over ten scenes
//! cargo run -p strictmatch --example engine_race       # fft vs naive wall times
//! ```
//!
//! The companion `strictmatch-cli` crate wraps the same pipeline in a
//! batch-friendly command-line tool.

pub mod bench;
pub mod detect;
pub mod error;
pub mod image;
pub mod io;
pub mod layers;
pub mod matcher;
pub mod scenario;
pub mod spectral;

pub use detect::{
    centroids, detect_peaks, label_components, threshold_surface, Connectivity, Detection,
    DetectionSet, Labels, Mask, Weighting,
};
pub use error::{Error, Result};
pub use image::GrayImage;
pub use layers::{decompose, level_counts, BinaryLayer, LayerStack, QuantizationScheme};
pub use matcher::{
    min_level_surface, plain_correlation, plain_correlation_with, strict_match,
    strict_match_with, Engine, MatchResult,
};
pub use scenario::{scenario_1d, scenario_1d_with, scenario_2d, scenario_2d_with, Scenario};
pub use spectral::{
    cross_correlate_fft, cross_correlate_naive, forward_dft, inverse_dft, Mode, RealSurface,
    Spectrum, SNAP_TOLERANCE,
};
