use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building rasters, correlating them,
/// or serializing artifacts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer holds {got} samples, expected {width}x{height} = {expected}")]
    PixelCount {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },

    #[error("pixel value {value} exceeds declared gray depth {depth}")]
    PixelOutOfRange { value: u32, depth: u32 },

    #[error("gray depth must be at least 1")]
    ZeroDepth,

    #[error("quantization level count must be at least 1")]
    ZeroLevels,

    #[error("cannot lower declared depth from {from} to {to}")]
    DepthNotRaised { from: u32, to: u32 },

    #[error("scheme depth {scheme} does not match image depth {image}")]
    SchemeDepthMismatch { scheme: u32, image: u32 },

    #[error("template depth {template} does not match signal depth {signal}")]
    DepthMismatch { template: u32, signal: u32 },

    #[error("template {tw}x{th} does not fit inside signal {sw}x{sh} in linear mode")]
    TemplateLargerThanSignal {
        tw: usize,
        th: usize,
        sw: usize,
        sh: usize,
    },

    #[error("circular mode requires equal dimensions, got {aw}x{ah} vs {bw}x{bh}")]
    CircularDimsMismatch {
        aw: usize,
        ah: usize,
        bw: usize,
        bh: usize,
    },

    #[error("raster buffer holds {got} values, expected {width}x{height} = {expected}")]
    RasterSize {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },

    #[error("empty raster")]
    EmptyRaster,

    #[error("surface origin ({x}, {y}) lies outside {width}x{height}")]
    OriginOutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("spectrum holds {got} bins, expected {width}x{height} = {expected}")]
    SpectrumSize {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },

    #[error("threshold fraction must lie in (0, 1], got {0}")]
    FractionOutOfRange(f64),

    #[error("labels are {lw}x{lh} but surface is {sw}x{sh}")]
    LabelDimsMismatch {
        lw: usize,
        lh: usize,
        sw: usize,
        sh: usize,
    },

    #[error("component {0} has zero total mass")]
    ZeroMassComponent(u32),

    #[error("pgm: {0}")]
    PgmParse(String),

    #[error("depth {0} exceeds the 16-bit pgm limit of 65535")]
    DepthTooLarge(u32),

    #[error("surface values out of range for pgm output: {0}")]
    SurfaceNotRenderable(String),
}

impl Error {
    /// True for errors caused by malformed or unreadable input data, as
    /// opposed to violated call preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::PgmParse(_))
    }
}
