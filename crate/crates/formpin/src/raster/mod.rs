//! Grayscale page buffers, ink masks, and the raster operations the
//! alignment pipeline is built on.
//!
//! Convention used throughout: 8-bit grayscale, 0 = ink, 255 = paper, rows
//! stored top to bottom. Continuous point coordinates put pixel centers at
//! half-integers, so pixel (x, y) covers [x, x+1) x [y, y+1) and has its
//! center at (x + 0.5, y + 0.5).

mod components;
mod pgm;
mod warp;

pub use components::{connected_components, ComponentLabeling};
pub use pgm::{load_image, save_image};
pub use warp::warp_perspective;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("image dimensions must be nonzero")]
    ZeroDimension,
    #[error("buffer of {len} bytes does not match {w}x{h} image")]
    BufferSize { w: u32, h: u32, len: usize },
    #[error("region {rect:?} exceeds {w}x{h} image bounds")]
    RegionOutOfBounds { rect: Rect, w: u32, h: u32 },
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("transform is not invertible")]
    SingularTransform,
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Format { path: String, reason: String },
}

/// A continuous image-plane position. Pixel (x, y) has center
/// (x + 0.5, y + 0.5).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned pixel rectangle: `x`, `y` is the top-left pixel, `w` x `h`
/// its extent. Width and height are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn new(x: i32, y: i32, w: u32, h: u32) -> Self {
        assert!(w >= 1 && h >= 1, "rect extent must be at least 1x1");
        Rect { x, y, w, h }
    }

    /// Center of the rectangle in continuous coordinates.
    pub fn centroid(&self) -> Point {
        Point::new(
            self.x as f64 + self.w as f64 / 2.0,
            self.y as f64 + self.h as f64 / 2.0,
        )
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.x >= self.x as f64
            && p.x < (self.x as f64 + self.w as f64)
            && p.y >= self.y as f64
            && p.y < (self.y as f64 + self.h as f64)
    }

    fn fits_in(&self, w: u32, h: u32) -> bool {
        self.x >= 0
            && self.y >= 0
            && (self.x as i64 + self.w as i64) <= w as i64
            && (self.y as i64 + self.h as i64) <= h as i64
    }
}

/// 8-bit grayscale image, row-major, 0 = ink and 255 = paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension);
        }
        if data.len() != (width as usize) * (height as usize) {
            return Err(RasterError::BufferSize {
                w: width,
                h: height,
                len: data.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    /// Uniform image of `value` (255 for a blank page).
    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        GrayImage {
            width,
            height,
            data: vec![value; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        self.data[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        self.data[y as usize * self.width as usize + x as usize] = value;
    }

    pub(crate) fn row(&self, y: u32) -> &[u8] {
        let start = y as usize * self.width as usize;
        &self.data[start..start + self.width as usize]
    }
}

/// Per-pixel ink mask; 1 = ink, 0 = background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension);
        }
        if data.len() != (width as usize) * (height as usize) {
            return Err(RasterError::BufferSize {
                w: width,
                h: height,
                len: data.len(),
            });
        }
        debug_assert!(data.iter().all(|&v| v <= 1), "mask values must be 0 or 1");
        Ok(BinaryImage {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        self.data[y as usize * self.width as usize + x as usize]
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|&v| v as u64).sum()
    }

    /// Renders the mask back to grayscale: ink to 0, background to 255.
    pub fn to_gray(&self) -> GrayImage {
        let data = self
            .data
            .iter()
            .map(|&v| if v != 0 { 0 } else { 255 })
            .collect();
        GrayImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// Thresholds a grayscale page into an ink mask: a pixel is ink exactly
/// when its intensity is strictly below `threshold`.
pub fn binarize(image: &GrayImage, threshold: u8) -> BinaryImage {
    let data = image
        .data
        .iter()
        .map(|&v| u8::from(v < threshold))
        .collect();
    BinaryImage {
        width: image.width,
        height: image.height,
        data,
    }
}

/// Bilinear resample to `new_w` x `new_h`.
///
/// Output pixel centers map to source coordinates via
/// `src = (out + 0.5) * (src_dim / out_dim) - 0.5`, clamped to the valid
/// range, so corners stay anchored and a same-size resize is the identity.
pub fn resize_bilinear(image: &GrayImage, new_w: u32, new_h: u32) -> Result<GrayImage, RasterError> {
    if new_w == 0 || new_h == 0 {
        return Err(RasterError::ZeroDimension);
    }
    if new_w == image.width && new_h == image.height {
        return Ok(image.clone());
    }
    let x_ratio = image.width as f64 / new_w as f64;
    let y_ratio = image.height as f64 / new_h as f64;
    let max_x = (image.width - 1) as f64;
    let max_y = (image.height - 1) as f64;
    let mut data = Vec::with_capacity(new_w as usize * new_h as usize);
    for oy in 0..new_h {
        let sy = ((oy as f64 + 0.5) * y_ratio - 0.5).clamp(0.0, max_y);
        let y0 = sy.floor() as u32;
        let y1 = (y0 + 1).min(image.height - 1);
        let fy = sy - y0 as f64;
        let row0 = image.row(y0);
        let row1 = image.row(y1);
        for ox in 0..new_w {
            let sx = ((ox as f64 + 0.5) * x_ratio - 0.5).clamp(0.0, max_x);
            let x0 = sx.floor() as u32;
            let x1 = (x0 + 1).min(image.width - 1);
            let fx = sx - x0 as f64;
            let top = row0[x0 as usize] as f64 * (1.0 - fx) + row0[x1 as usize] as f64 * fx;
            let bot = row1[x0 as usize] as f64 * (1.0 - fx) + row1[x1 as usize] as f64 * fx;
            let v = top * (1.0 - fy) + bot * fy;
            data.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(new_w, new_h, data)
}

/// Copies the pixels of `rect` into a new image.
pub fn crop(image: &GrayImage, rect: Rect) -> Result<GrayImage, RasterError> {
    if !rect.fits_in(image.width, image.height) {
        return Err(RasterError::RegionOutOfBounds {
            rect,
            w: image.width,
            h: image.height,
        });
    }
    let mut data = Vec::with_capacity(rect.w as usize * rect.h as usize);
    for dy in 0..rect.h {
        let y = rect.y as u32 + dy;
        let start = y as usize * image.width as usize + rect.x as usize;
        data.extend_from_slice(&image.data[start..start + rect.w as usize]);
    }
    GrayImage::new(rect.w, rect.h, data)
}

/// Pixel-wise XOR of two ink masks plus the fraction of pixels that differ.
///
/// On an aligned template/scan pair the surviving ink is exactly the
/// content present in one page and not the other, which makes the fraction
/// a cheap alignment-quality score.
pub fn xor_diff(a: &BinaryImage, b: &BinaryImage) -> Result<(BinaryImage, f64), RasterError> {
    if a.width != b.width || a.height != b.height {
        return Err(RasterError::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    let data: Vec<u8> = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| x ^ y)
        .collect();
    let differing: u64 = data.iter().map(|&v| v as u64).sum();
    let fraction = differing as f64 / (a.width as f64 * a.height as f64);
    let image = BinaryImage {
        width: a.width,
        height: a.height,
        data,
    };
    Ok((image, fraction))
}
