//! Portable graymap codecs and CSV artifact writers.
//!
//! PGM (P2 ASCII / P5 binary) is the interchange format for every raster the
//! pipeline touches; 16-bit P5 samples are big-endian per the PNM convention.
//! The writer emits one canonical byte form, so equal images produce equal
//! files. Surfaces rendered to PGM are lossy visualizations; the CSV writers
//! carry exact values.

use std::fmt::Write as _;

use crate::detect::DetectionSet;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::spectral::RealSurface;

/// PGM flavor: `P2` writes ASCII samples, `P5` raw bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Ascii,
    Binary,
}

const PGM_MAX_DEPTH: u32 = 65_535;

fn is_pnm_whitespace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            if is_pnm_whitespace(b) {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_u32(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::PgmParse(format!(
                "expected {what} at byte {start}, found {}",
                self.data
                    .get(start)
                    .map_or("end of data".to_string(), |b| format!("{:?}", *b as char))
            )));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::PgmParse(format!("{what} out of range")))
    }

    fn rest_is_blank(&mut self) -> bool {
        self.skip_space_and_comments();
        self.pos == self.data.len()
    }
}

/// Parses a P2 or P5 graymap into a [`GrayImage`] with `depth = maxval`.
/// Malformed input is rejected outright -- the parser never returns a
/// partially decoded image.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 {
        return Err(Error::PgmParse("data shorter than a magic number".into()));
    }
    let binary = match &bytes[..2] {
        b"P2" => false,
        b"P5" => true,
        magic => {
            return Err(Error::PgmParse(format!(
                "bad magic {:?}, expected P2 or P5",
                String::from_utf8_lossy(magic)
            )))
        }
    };

    let mut tokens = Tokens::new(&bytes[2..]);
    let width = tokens.next_u32("width")?;
    let height = tokens.next_u32("height")?;
    let maxval = tokens.next_u32("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::PgmParse(format!("bad dimensions {width}x{height}")));
    }
    if maxval == 0 || maxval > PGM_MAX_DEPTH {
        return Err(Error::PgmParse(format!("maxval {maxval} out of 1..=65535")));
    }
    let (w, h) = (width as usize, height as usize);
    let count = w * h;
    let mut pixels = Vec::with_capacity(count);

    if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let after = 2 + tokens.pos;
        if after >= bytes.len() || !is_pnm_whitespace(bytes[after]) {
            return Err(Error::PgmParse(
                "missing whitespace between header and raster".into(),
            ));
        }
        let raster = &bytes[after + 1..];
        let sample_size = if maxval > 255 { 2 } else { 1 };
        let need = count * sample_size;
        if raster.len() < need {
            return Err(Error::PgmParse(format!(
                "raster truncated: need {need} bytes, found {}",
                raster.len()
            )));
        }
        if raster[need..].iter().any(|&b| !is_pnm_whitespace(b)) {
            return Err(Error::PgmParse("trailing bytes after raster".into()));
        }
        for chunk in raster[..need].chunks_exact(sample_size) {
            let sample = if sample_size == 2 {
                u32::from(chunk[0]) << 8 | u32::from(chunk[1])
            } else {
                u32::from(chunk[0])
            };
            if sample > maxval {
                return Err(Error::PgmParse(format!(
                    "sample {sample} exceeds maxval {maxval}"
                )));
            }
            pixels.push(sample);
        }
    } else {
        for _ in 0..count {
            let sample = tokens.next_u32("sample")?;
            if sample > maxval {
                return Err(Error::PgmParse(format!(
                    "sample {sample} exceeds maxval {maxval}"
                )));
            }
            pixels.push(sample);
        }
        if !tokens.rest_is_blank() {
            return Err(Error::PgmParse("trailing bytes after raster".into()));
        }
    }

    GrayImage::new(w, h, maxval, pixels)
}

/// Serializes an image to canonical PGM bytes: single spaces and newlines
/// between header tokens, no comments, one image row per line in P2.
pub fn write_pgm(image: &GrayImage, format: PgmFormat) -> Result<Vec<u8>> {
    if image.depth() > PGM_MAX_DEPTH {
        return Err(Error::DepthTooLarge(image.depth()));
    }
    let magic = match format {
        PgmFormat::Ascii => "P2",
        PgmFormat::Binary => "P5",
    };
    let mut out = format!(
        "{magic}\n{} {}\n{}\n",
        image.width(),
        image.height(),
        image.depth()
    )
    .into_bytes();

    match format {
        PgmFormat::Ascii => {
            let mut text = String::new();
            for row in image.pixels().chunks_exact(image.width()) {
                for (i, p) in row.iter().enumerate() {
                    if i > 0 {
                        text.push(' ');
                    }
                    let _ = write!(text, "{p}");
                }
                text.push('\n');
            }
            out.extend_from_slice(text.as_bytes());
        }
        PgmFormat::Binary => {
            if image.depth() > 255 {
                for &p in image.pixels() {
                    out.extend_from_slice(&(p as u16).to_be_bytes());
                }
            } else {
                out.extend(image.pixels().iter().map(|&p| p as u8));
            }
        }
    }
    Ok(out)
}

/// How surface values map to gray samples when rendered as a PGM panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceScale {
    /// Round values half-up and write them as-is; fails if any value is
    /// negative or the maximum exceeds the 16-bit limit.
    None,
    /// Map `[0, max(surface)]` linearly onto `0..=255`, rounding half-up.
    Max255,
}

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// Renders a surface as a PGM panel. This is a lossy visualization; use
/// [`surface_to_csv`] for exact values.
pub fn write_surface_pgm(
    surface: &RealSurface,
    scale: SurfaceScale,
    format: PgmFormat,
) -> Result<Vec<u8>> {
    let image = match scale {
        SurfaceScale::Max255 => {
            let max = surface.max();
            let pixels = if max <= 0.0 {
                vec![0u32; surface.values().len()]
            } else {
                surface
                    .values()
                    .iter()
                    .map(|&v| round_half_up(v * 255.0 / max).clamp(0.0, 255.0) as u32)
                    .collect()
            };
            GrayImage::new(surface.width(), surface.height(), 255, pixels)?
        }
        SurfaceScale::None => {
            let mut pixels = Vec::with_capacity(surface.values().len());
            let mut top = 0u32;
            for &v in surface.values() {
                let r = round_half_up(v);
                if r < 0.0 || r > f64::from(PGM_MAX_DEPTH) {
                    return Err(Error::SurfaceNotRenderable(format!(
                        "value {v} outside 0..=65535"
                    )));
                }
                let r = r as u32;
                top = top.max(r);
                pixels.push(r);
            }
            GrayImage::new(surface.width(), surface.height(), top.max(1), pixels)?
        }
    };
    write_pgm(&image, format)
}

/// Exact surface values as CSV rows `lag_x,lag_y,value`, row-major.
pub fn surface_to_csv(surface: &RealSurface) -> Vec<u8> {
    let mut out = String::from("lag_x,lag_y,value\n");
    for y in 0..surface.height() {
        for x in 0..surface.width() {
            let (lx, ly) = surface.lag_of(x, y);
            let _ = writeln!(out, "{lx},{ly},{}", surface.get(x, y));
        }
    }
    out.into_bytes()
}

/// Detections as CSV with one row per component, ordered by id.
pub fn detections_to_csv(set: &DetectionSet) -> Vec<u8> {
    let mut out = String::from("id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n");
    for d in &set.detections {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            d.id, d.anchor.0, d.anchor.1, d.center.0, d.center.1, d.area, d.mass, d.peak
        );
    }
    out.into_bytes()
}
