//! Rasterizes a scheme's coloring over a rectangular window.
//!
//! Row 0 is the top of the window (largest `y`). Each pixel samples the
//! coloring at its center.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::scheme::{Point, StripScheme};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub px_per_unit: u32,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, px_per_unit: u32) -> Result<Self> {
        let w = Self {
            x0,
            x1,
            y0,
            y1,
            px_per_unit,
        };
        let finite = [x0, x1, y0, y1].iter().all(|v| v.is_finite());
        if !finite || x0 >= x1 || y0 >= y1 || px_per_unit == 0 || w.width() == 0 || w.height() == 0 {
            return Err(Error::InvalidWindow);
        }
        Ok(w)
    }

    pub fn width(&self) -> usize {
        libm::round((self.x1 - self.x0) * self.px_per_unit as f64) as usize
    }

    pub fn height(&self) -> usize {
        libm::round((self.y1 - self.y0) * self.px_per_unit as f64) as usize
    }

    /// Plane point at the center of pixel `(col, row)`.
    pub fn pixel_center(&self, col: usize, row: usize) -> Point {
        let ppu = self.px_per_unit as f64;
        Point::new(self.x0 + (col as f64 + 0.5) / ppu, self.y1 - (row as f64 + 0.5) / ppu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RenderMode {
    /// Hue angle `360 * c / r` at full saturation and value.
    Hue,
    /// Intensity `255 * c / r`.
    Gray,
}

/// Packed 8-bit RGB, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl Raster {
    pub fn pixel(&self, col: usize, row: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }
}

/// Overlay color per mode: black on hue images, red on gray ones.
pub fn overlay_rgb(mode: RenderMode) -> [u8; 3] {
    match mode {
        RenderMode::Hue => [0, 0, 0],
        RenderMode::Gray => [255, 0, 0],
    }
}

/// Gray level for a color value in `[0, r)`.
pub fn gray_level(c: f64, r: f64) -> u8 {
    libm::round(255.0 * c / r).clamp(0.0, 255.0) as u8
}

/// HSV to RGB with saturation and value 1; `hue` in degrees.
pub fn hue_to_rgb(hue: f64) -> [u8; 3] {
    let h = (hue - 360.0 * libm::floor(hue / 360.0)) / 60.0;
    let sector = libm::floor(h) as u32 % 6;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match sector {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [r, g, b].map(|v: f64| libm::round(255.0 * v) as u8)
}

fn crosses_multiple(lo: f64, hi: f64, period: f64) -> bool {
    // some integer multiple of period lies in [lo, hi)
    libm::ceil(lo / period) * period < hi
}

/// Renders rows `rows` into a packed RGB buffer.
pub fn render_rows(sch: &StripScheme, w: &Window, mode: RenderMode, overlay: bool, rows: Range<usize>) -> Vec<u8> {
    let width = w.width();
    let ppu = w.px_per_unit as f64;
    let mut out = vec![0u8; 3 * width * rows.len()];
    for (local, row) in rows.enumerate() {
        let y_hi = w.y1 - row as f64 / ppu;
        let y_lo = w.y1 - (row + 1) as f64 / ppu;
        let on_strip_line = overlay && crosses_multiple(y_lo, y_hi, sch.h);
        let center_y = w.pixel_center(0, row).y;
        let offset = sch.sigma * sch.strip_index(center_y) as f64 * sch.h;
        for col in 0..width {
            let p = w.pixel_center(col, row);
            let x_lo = w.x0 + col as f64 / ppu - offset;
            let x_hi = w.x0 + (col + 1) as f64 / ppu - offset;
            let rgb = if on_strip_line || (overlay && crosses_multiple(x_lo, x_hi, sch.ell)) {
                overlay_rgb(mode)
            } else {
                let c = sch.color_at(p);
                match mode {
                    RenderMode::Gray => [gray_level(c, sch.r); 3],
                    RenderMode::Hue => hue_to_rgb(360.0 * c / sch.r),
                }
            };
            let i = 3 * (local * width + col);
            out[i..i + 3].copy_from_slice(&rgb);
        }
    }
    out
}

pub fn render_coloring(sch: &StripScheme, w: &Window, mode: RenderMode, overlay: bool) -> Raster {
    Raster {
        width: w.width(),
        height: w.height(),
        rgb: render_rows(sch, w, mode, overlay, 0..w.height()),
    }
}
