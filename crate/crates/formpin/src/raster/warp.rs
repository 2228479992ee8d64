//! Inverse-mapped perspective resampling.

use super::{GrayImage, RasterError};
use crate::homography::Homography;

/// Warps `image` by `h` onto an `out_w` x `out_h` canvas.
///
/// `h` maps source coordinates to output coordinates; each output pixel
/// center is pulled back through the inverse and sampled bilinearly, so no
/// holes appear. Samples falling outside the source image become `fill`.
/// The identity transform reproduces the source bit-exactly.
pub fn warp_perspective(
    image: &GrayImage,
    h: &Homography,
    out_w: u32,
    out_h: u32,
    fill: u8,
) -> Result<GrayImage, RasterError> {
    if out_w == 0 || out_h == 0 {
        return Err(RasterError::ZeroDimension);
    }
    let inv = h.invert().map_err(|_| RasterError::SingularTransform)?;
    let m = inv.entries();
    let src_w = image.width() as f64;
    let src_h = image.height() as f64;
    let last_x = image.width() as usize - 1;
    let last_y = image.height() - 1;
    let mut data = Vec::with_capacity(out_w as usize * out_h as usize);
    for oy in 0..out_h {
        let py = oy as f64 + 0.5;
        for ox in 0..out_w {
            let px = ox as f64 + 0.5;
            let den = m[2][0] * px + m[2][1] * py + m[2][2];
            if den.abs() < 1e-12 {
                data.push(fill);
                continue;
            }
            let sx = (m[0][0] * px + m[0][1] * py + m[0][2]) / den;
            let sy = (m[1][0] * px + m[1][1] * py + m[1][2]) / den;
            if !(0.0..=src_w).contains(&sx) || !(0.0..=src_h).contains(&sy) {
                data.push(fill);
                continue;
            }
            // Shift into pixel-center space; edge samples replicate the
            // border row/column.
            let cx = sx - 0.5;
            let cy = sy - 0.5;
            let x0 = cx.floor();
            let y0 = cy.floor();
            let fx = cx - x0;
            let fy = cy - y0;
            let x0i = (x0.max(0.0) as usize).min(last_x);
            let x1i = ((x0 + 1.0).max(0.0) as usize).min(last_x);
            let y0i = (y0.max(0.0) as u32).min(last_y);
            let y1i = ((y0 + 1.0).max(0.0) as u32).min(last_y);
            let r0 = image.row(y0i);
            let r1 = image.row(y1i);
            let top = r0[x0i] as f64 * (1.0 - fx) + r0[x1i] as f64 * fx;
            let bot = r1[x0i] as f64 * (1.0 - fx) + r1[x1i] as f64 * fx;
            let v = top * (1.0 - fy) + bot * fy;
            data.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(out_w, out_h, data)
}
