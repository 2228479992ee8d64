//! Word-box sources for the aligner.
//!
//! Downstream stages only consume [`OcrPage`]; where the boxes come from
//! is swappable. Two backends exist: a ground-truth JSON sidecar written
//! by the synthetic renderer (deterministic, used by most tests) and an
//! external OCR engine invoked as a subprocess speaking the de-facto
//! word-level TSV format. A [`Lexicon`] filters recognized text down to
//! real words before keypoints are taken from it.

use std::collections::HashSet;
use std::path::Path;
use std::process::Command;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::Rect;

#[derive(Debug, Error)]
pub enum OcrError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid sidecar: {reason}")]
    Sidecar { path: String, reason: String },
    #[error("word {text:?} box exceeds {w}x{h} image bounds")]
    BoxOutOfBounds { text: String, w: u32, h: u32 },
    #[error("TSV header missing or malformed")]
    TsvHeader,
    #[error("TSV line {line}: {reason}")]
    TsvField { line: usize, reason: String },
    #[error("failed to launch OCR engine {bin:?}: {source}")]
    Launch {
        bin: String,
        source: std::io::Error,
    },
    #[error("OCR engine {bin:?} failed ({status}): {stderr}")]
    EngineFailed {
        bin: String,
        status: String,
        stderr: String,
    },
}

/// One recognized word and where it sits on the page.
#[derive(Debug, Clone, PartialEq)]
pub struct WordBox {
    /// Non-empty, no interior whitespace.
    pub text: String,
    pub box_: Rect,
    /// Recognition confidence in [0, 100]; ground truth reports 100.
    pub confidence: f64,
}

/// All word boxes of one page, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct OcrPage {
    pub words: Vec<WordBox>,
    pub image_w: u32,
    pub image_h: u32,
}

impl OcrPage {
    /// Validates that every box sits inside the image.
    pub fn new(words: Vec<WordBox>, image_w: u32, image_h: u32) -> Result<Self, OcrError> {
        for w in &words {
            let b = w.box_;
            if b.x < 0
                || b.y < 0
                || b.x as i64 + b.w as i64 > image_w as i64
                || b.y as i64 + b.h as i64 > image_h as i64
            {
                return Err(OcrError::BoxOutOfBounds {
                    text: w.text.clone(),
                    w: image_w,
                    h: image_h,
                });
            }
        }
        Ok(OcrPage {
            words,
            image_w,
            image_h,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SidecarWord {
    text: String,
    x: i32,
    y: i32,
    w: u32,
    h: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct SidecarDoc {
    image_w: u32,
    image_h: u32,
    words: Vec<SidecarWord>,
}

/// Reads a ground-truth sidecar and validates it against the image
/// dimensions the caller observed.
pub fn read_words_sidecar(
    path: &Path,
    image_w: u32,
    image_h: u32,
) -> Result<OcrPage, OcrError> {
    let sidecar_err = |reason: String| OcrError::Sidecar {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| OcrError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let doc: SidecarDoc = serde_json::from_str(&text).map_err(|e| sidecar_err(e.to_string()))?;
    if doc.image_w != image_w || doc.image_h != image_h {
        return Err(sidecar_err(format!(
            "declared {}x{} but image is {image_w}x{image_h}",
            doc.image_w, doc.image_h
        )));
    }
    let mut words = Vec::with_capacity(doc.words.len());
    for w in doc.words {
        if w.text.is_empty() || w.text.chars().any(char::is_whitespace) {
            return Err(sidecar_err(format!("invalid word text {:?}", w.text)));
        }
        if w.w == 0 || w.h == 0 {
            return Err(sidecar_err(format!("word {:?} has an empty box", w.text)));
        }
        words.push(WordBox {
            text: w.text,
            box_: Rect::new(w.x, w.y, w.w, w.h),
            confidence: 100.0,
        });
    }
    OcrPage::new(words, image_w, image_h)
}

/// Writes a page back out in sidecar format (pretty-printed JSON).
pub fn write_words_sidecar(path: &Path, page: &OcrPage) -> Result<(), OcrError> {
    let doc = SidecarDoc {
        image_w: page.image_w,
        image_h: page.image_h,
        words: page
            .words
            .iter()
            .map(|w| SidecarWord {
                text: w.text.clone(),
                x: w.box_.x,
                y: w.box_.y,
                w: w.box_.w,
                h: w.box_.h,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&doc).expect("sidecar serialization cannot fail");
    std::fs::write(path, text).map_err(|e| OcrError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Decodes word-level rows from the TSV an OCR engine prints.
///
/// The 12-column header is required. Word rows are those with level 5,
/// non-negative confidence, and non-blank single-token text; all other
/// rows are structural (page/block/paragraph/line) and ignored. Rows with
/// non-positive width or height are dropped as engine noise.
pub fn parse_ocr_tsv(tsv_text: &str) -> Result<Vec<WordBox>, OcrError> {
    let mut lines = tsv_text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(OcrError::TsvHeader);
    };
    let cols: Vec<&str> = header.split('\t').collect();
    if cols.len() != 12 || cols[0] != "level" || cols[11] != "text" {
        return Err(OcrError::TsvHeader);
    }
    let mut words = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let field_err = |reason: String| OcrError::TsvField {
            line: idx + 1,
            reason,
        };
        let level: u32 = fields[0]
            .trim()
            .parse()
            .map_err(|_| field_err(format!("non-numeric level {:?}", fields[0])))?;
        if level != 5 {
            continue;
        }
        if fields.len() != 12 {
            return Err(field_err(format!("expected 12 columns, got {}", fields.len())));
        }
        let mut geom = [0i64; 4];
        for (slot, col) in [(0usize, 6usize), (1, 7), (2, 8), (3, 9)] {
            geom[slot] = fields[col]
                .trim()
                .parse()
                .map_err(|_| field_err(format!("non-numeric geometry field {:?}", fields[col])))?;
        }
        let conf: f64 = fields[10]
            .trim()
            .parse()
            .map_err(|_| field_err(format!("non-numeric confidence {:?}", fields[10])))?;
        if conf < 0.0 {
            continue;
        }
        let text = fields[11].trim();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            continue;
        }
        let [left, top, width, height] = geom;
        if left < 0 || top < 0 || width < 1 || height < 1 {
            continue;
        }
        words.push(WordBox {
            text: text.to_string(),
            box_: Rect::new(left as i32, top as i32, width as u32, height as u32),
            confidence: conf,
        });
    }
    Ok(words)
}

/// How to invoke the external OCR engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OcrProcessConfig {
    /// Executable name or path; the `FORMPIN_OCR_BIN` environment
    /// variable overrides it.
    pub bin: String,
    /// Page segmentation mode passed as `--psm`.
    pub psm: u32,
    pub extra_args: Vec<String>,
}

impl Default for OcrProcessConfig {
    fn default() -> Self {
        OcrProcessConfig {
            bin: "tesseract".to_string(),
            psm: 6,
            extra_args: Vec::new(),
        }
    }
}

impl OcrProcessConfig {
    /// Binary to invoke after applying the environment override.
    pub fn effective_bin(&self) -> String {
        std::env::var("FORMPIN_OCR_BIN").unwrap_or_else(|_| self.bin.clone())
    }
}

/// Runs the configured engine on an image file and decodes its TSV
/// output. The invocation is `<bin> <image> stdout --psm <n> [extra] tsv`.
pub fn read_words_external(
    image_path: &Path,
    config: &OcrProcessConfig,
) -> Result<OcrPage, OcrError> {
    let image = crate::raster::load_image(image_path).map_err(|e| OcrError::Io {
        path: image_path.display().to_string(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()),
    })?;
    let bin = config.effective_bin();
    let mut cmd = Command::new(&bin);
    cmd.arg(image_path)
        .arg("stdout")
        .arg("--psm")
        .arg(config.psm.to_string());
    for a in &config.extra_args {
        cmd.arg(a);
    }
    cmd.arg("tsv");
    let output = cmd.output().map_err(|e| OcrError::Launch {
        bin: bin.clone(),
        source: e,
    })?;
    if !output.status.success() {
        return Err(OcrError::EngineFailed {
            bin,
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    let words = parse_ocr_tsv(&String::from_utf8_lossy(&output.stdout))?;
    // Engines occasionally report boxes that poke past the image edge;
    // clip rather than fail.
    let (iw, ih) = (image.width(), image.height());
    let clipped = words
        .into_iter()
        .filter_map(|mut w| {
            let x2 = (w.box_.x as i64 + w.box_.w as i64).min(iw as i64);
            let y2 = (w.box_.y as i64 + w.box_.h as i64).min(ih as i64);
            if w.box_.x as i64 >= x2 || w.box_.y as i64 >= y2 {
                return None;
            }
            w.box_ = Rect::new(
                w.box_.x,
                w.box_.y,
                (x2 - w.box_.x as i64) as u32,
                (y2 - w.box_.y as i64) as u32,
            );
            Some(w)
        })
        .collect();
    OcrPage::new(clipped, iw, ih)
}

/// Set of known words; membership is case-insensitive.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashSet<String>,
}

impl Lexicon {
    /// Loads a newline-delimited wordlist; entries are folded to
    /// lowercase and blank lines skipped.
    pub fn from_path(path: &Path) -> Result<Self, OcrError> {
        let text = std::fs::read_to_string(path).map_err(|e| OcrError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Ok(Self::from_words(text.lines()))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries = words
            .into_iter()
            .filter_map(|w| {
                let t = w.as_ref().trim();
                if t.is_empty() {
                    None
                } else {
                    Some(t.to_lowercase())
                }
            })
            .collect();
        Lexicon { entries }
    }

    /// Wordlist embedded in the binary; covers common English filler
    /// words plus the vocabulary of the bundled demo layouts.
    pub fn builtin() -> Self {
        Self::from_words(include_str!("../assets/words.txt").lines())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("formpin-ocr-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    const FIXTURE_TSV: &str = "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext\n\
1\t1\t0\t0\t0\t0\t0\t0\t1600\t2400\t-1\t\n\
2\t1\t1\t0\t0\t0\t10\t20\t300\t40\t-1\t\n\
3\t1\t1\t1\t0\t0\t10\t20\t300\t40\t-1\t\n\
4\t1\t1\t1\t1\t0\t10\t20\t300\t40\t-1\t\n\
5\t1\t1\t1\t1\t1\t10\t20\t40\t12\t96.5\tName\n\
5\t1\t1\t1\t1\t2\t60\t20\t52\t12\t91.2\tAddress\n\
5\t1\t1\t1\t1\t3\t120\t20\t30\t12\t-1\tsmudge\n\
5\t1\t1\t1\t1\t4\t160\t20\t30\t12\t88.0\t \n\
5\t1\t1\t1\t1\t5\t200\t20\t30\t12\t77.0\tDate\n";

    #[test]
    fn tsv_fixture_parses_to_expected_words() {
        let words = parse_ocr_tsv(FIXTURE_TSV).unwrap();
        assert_eq!(
            words,
            vec![
                WordBox {
                    text: "Name".into(),
                    box_: Rect::new(10, 20, 40, 12),
                    confidence: 96.5,
                },
                WordBox {
                    text: "Address".into(),
                    box_: Rect::new(60, 20, 52, 12),
                    confidence: 91.2,
                },
                WordBox {
                    text: "Date".into(),
                    box_: Rect::new(200, 20, 30, 12),
                    confidence: 77.0,
                },
            ]
        );
    }

    #[test]
    fn tsv_header_only_yields_empty_list() {
        let header = FIXTURE_TSV.lines().next().unwrap();
        assert!(parse_ocr_tsv(header).unwrap().is_empty());
    }

    #[test]
    fn tsv_missing_header_is_an_error() {
        assert!(matches!(parse_ocr_tsv(""), Err(OcrError::TsvHeader)));
        assert!(matches!(
            parse_ocr_tsv("5\t1\t1\t1\t1\t1\t10\t20\t40\t12\t96.5\tName\n"),
            Err(OcrError::TsvHeader)
        ));
    }

    #[test]
    fn tsv_non_numeric_geometry_is_an_error() {
        let header = FIXTURE_TSV.lines().next().unwrap();
        let bad = format!("{header}\n5\t1\t1\t1\t1\t1\tten\t20\t40\t12\t96.5\tName\n");
        assert!(matches!(
            parse_ocr_tsv(&bad),
            Err(OcrError::TsvField { line: 2, .. })
        ));
    }

    #[test]
    fn sidecar_round_trip_preserves_words() {
        let page = OcrPage::new(
            vec![
                WordBox {
                    text: "Name".into(),
                    box_: Rect::new(10, 20, 40, 12),
                    confidence: 100.0,
                },
                WordBox {
                    text: "Date".into(),
                    box_: Rect::new(80, 20, 36, 12),
                    confidence: 100.0,
                },
            ],
            200,
            100,
        )
        .unwrap();
        let path = tmp("roundtrip.json");
        write_words_sidecar(&path, &page).unwrap();
        let back = read_words_sidecar(&path, 200, 100).unwrap();
        assert_eq!(back, page);
    }

    #[test]
    fn sidecar_with_no_words_is_valid() {
        let path = tmp("empty.json");
        fs::write(&path, r#"{"image_w":50,"image_h":60,"words":[]}"#).unwrap();
        let page = read_words_sidecar(&path, 50, 60).unwrap();
        assert!(page.words.is_empty());
        assert_eq!((page.image_w, page.image_h), (50, 60));
    }

    #[test]
    fn sidecar_dimension_mismatch_is_rejected() {
        let path = tmp("dims.json");
        fs::write(&path, r#"{"image_w":50,"image_h":60,"words":[]}"#).unwrap();
        assert!(read_words_sidecar(&path, 51, 60).is_err());
    }

    #[test]
    fn sidecar_out_of_bounds_box_is_rejected() {
        let path = tmp("oob.json");
        fs::write(
            &path,
            r#"{"image_w":50,"image_h":60,"words":[{"text":"hi","x":40,"y":0,"w":20,"h":5}]}"#,
        )
        .unwrap();
        assert!(matches!(
            read_words_sidecar(&path, 50, 60),
            Err(OcrError::BoxOutOfBounds { .. })
        ));
    }

    #[test]
    fn sidecar_garbage_is_a_parse_error() {
        let path = tmp("garbage.json");
        fs::write(&path, "not json").unwrap();
        assert!(matches!(
            read_words_sidecar(&path, 1, 1),
            Err(OcrError::Sidecar { .. })
        ));
    }

    #[test]
    fn missing_engine_reports_configured_binary() {
        let img = crate::raster::GrayImage::filled(8, 8, 255);
        let path = tmp("engine-input.pgm");
        crate::raster::save_image(&path, &img).unwrap();
        let config = OcrProcessConfig {
            bin: "formpin-no-such-engine".into(),
            ..OcrProcessConfig::default()
        };
        match read_words_external(&path, &config) {
            Err(OcrError::Launch { bin, .. }) => assert_eq!(bin, "formpin-no-such-engine"),
            other => panic!("expected launch error, got {other:?}"),
        }
    }

    #[test]
    fn lexicon_membership_is_case_folded() {
        let lex = Lexicon::from_words(["Name", "date", ""]);
        assert_eq!(lex.len(), 2);
        assert!(lex.contains("name"));
        assert!(lex.contains("NAME"));
        assert!(lex.contains("Date"));
        assert!(!lex.contains("Xq7z"));
    }

    #[test]
    fn builtin_lexicon_contains_demo_vocabulary() {
        let lex = Lexicon::builtin();
        for word in ["name", "value", "total", "amount", "date"] {
            assert!(lex.contains(word), "missing {word}");
        }
    }
}
