//! Binary PGM (P5) reader and writer, the interchange format for every
//! page image this crate touches.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{GrayImage, RasterError};

fn io_err(path: &Path, source: std::io::Error) -> RasterError {
    RasterError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> RasterError {
    RasterError::Format {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Reads one whitespace-delimited header token, skipping `#` comments.
/// Returns the token and the offset just past it.
fn next_token(bytes: &[u8], mut pos: usize) -> Option<(String, usize)> {
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        break;
    }
    if pos >= bytes.len() {
        return None;
    }
    let start = pos;
    while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
        pos += 1;
    }
    let token = String::from_utf8_lossy(&bytes[start..pos]).into_owned();
    Some((token, pos))
}

/// Loads an 8-bit binary PGM image.
///
/// Header comments and arbitrary whitespace are accepted; the maxval must
/// be 255 and exactly width x height pixel bytes must follow the single
/// whitespace byte after the maxval.
pub fn load_image(path: &Path) -> Result<GrayImage, RasterError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let (magic, pos) = next_token(&bytes, 0).ok_or_else(|| format_err(path, "empty file"))?;
    if magic != "P5" {
        return Err(format_err(path, format!("expected P5 magic, found {magic:?}")));
    }
    let mut fields = [0u64; 3];
    let mut pos = pos;
    for (i, name) in ["width", "height", "maxval"].iter().enumerate() {
        let (tok, next) =
            next_token(&bytes, pos).ok_or_else(|| format_err(path, "truncated header"))?;
        fields[i] = tok
            .parse()
            .map_err(|_| format_err(path, format!("invalid {name} {tok:?}")))?;
        pos = next;
    }
    let (w, h, maxval) = (fields[0], fields[1], fields[2]);
    if w == 0 || h == 0 || w > u32::MAX as u64 || h > u32::MAX as u64 {
        return Err(format_err(path, format!("bad dimensions {w}x{h}")));
    }
    if maxval != 255 {
        return Err(format_err(path, format!("unsupported maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from pixel data.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(format_err(path, "missing separator before pixel data"));
    }
    pos += 1;
    let expected = (w * h) as usize;
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(format_err(
            path,
            format!("expected {expected} pixel bytes, found {}", data.len()),
        ));
    }
    if data.len() > expected {
        return Err(format_err(
            path,
            format!("{} trailing bytes after pixel data", data.len() - expected),
        ));
    }
    GrayImage::new(w as u32, h as u32, data.to_vec())
}

/// Writes the image as binary PGM with maxval 255.
pub fn save_image(path: &Path, image: &GrayImage) -> Result<(), RasterError> {
    let mut out = Vec::with_capacity(image.data().len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())
        .expect("writing to a Vec cannot fail");
    out.extend_from_slice(image.data());
    fs::write(path, out).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("formpin-pgm-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let img = GrayImage::new(3, 2, vec![0, 1, 127, 128, 254, 255]).unwrap();
        let path = tmp("roundtrip.pgm");
        save_image(&path, &img).unwrap();
        let back = load_image(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn header_comments_and_whitespace_are_tolerated() {
        let path = tmp("comments.pgm");
        let mut bytes = b"P5 # magic\n# a comment line\n  3\t2 # dims\n255\n".to_vec();
        bytes.extend_from_slice(&[10, 20, 30, 40, 50, 60]);
        fs::write(&path, bytes).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.data(), &[10, 20, 30, 40, 50, 60]);
    }

    #[test]
    fn rejects_wrong_magic() {
        let path = tmp("magic.pgm");
        fs::write(&path, b"P2\n1 1\n255\n0").unwrap();
        assert!(load_image(&path).is_err());
    }

    #[test]
    fn rejects_non_255_maxval() {
        let path = tmp("maxval.pgm");
        fs::write(&path, b"P5\n1 1\n65535\n\x00\x00").unwrap();
        assert!(load_image(&path).is_err());
    }

    #[test]
    fn rejects_truncated_pixels() {
        let path = tmp("truncated.pgm");
        fs::write(&path, b"P5\n2 2\n255\n\x00\x01\x02").unwrap();
        assert!(load_image(&path).is_err());
    }

    #[test]
    fn rejects_missing_file() {
        assert!(load_image(&tmp("does-not-exist.pgm")).is_err());
    }

    #[test]
    fn pixel_data_may_start_with_whitespace_byte() {
        // The first pixel byte after the separator may itself look like
        // whitespace (e.g. 0x20); it must be treated as data.
        let path = tmp("space-pixel.pgm");
        fs::write(&path, b"P5\n2 1\n255\n\x20\x0a").unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.data(), &[0x20, 0x0a]);
    }
}
