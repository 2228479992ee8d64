//! Synthetic form rendering and ground-truth perturbation.
//!
//! Pages rendered here come with exact word boxes and, after
//! [`perturb_document`], an exact test-to-template homography. That pair
//! (image + ground truth) is what the estimator is validated against.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::homography::{Homography, HomographyError};
use crate::ocr::{OcrError, OcrPage, WordBox};
use crate::raster::{warp_perspective, GrayImage, Point, RasterError, Rect};

mod glyphs;

use glyphs::{BASE_GLYPH_H, BASE_GLYPH_W, GLYPH_ROWS};

/// Background intensity used for regions the perturbation exposes. Slightly
/// off-white so warps are visible, but far above the binarization threshold.
pub const EXPOSED_BACKGROUND: u8 = 245;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("no glyph for character {0:?}")]
    UnsupportedChar(char),
    #[error("word {index} has empty text")]
    EmptyWord { index: usize },
    #[error("word {index} ({text:?}) needs a positive scale")]
    BadWordScale { index: usize, text: String },
    #[error("word {index} ({text:?}) extends beyond the page")]
    OutOfPage { index: usize, text: String },
    #[error("words {a:?} and {b:?} overlap")]
    WordOverlap { a: String, b: String },
    #[error("perturbation scale factors must be positive")]
    DegenerateScale,
    #[error("layout {path}: {reason}")]
    Layout { path: String, reason: String },
    #[error(transparent)]
    Transform(#[from] HomographyError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Sidecar(#[from] OcrError),
}

/// One character shape at base scale, row-major ink mask.
#[derive(Debug, Clone)]
pub struct GlyphBitmap {
    width: u32,
    height: u32,
    ink: Vec<bool>,
}

impl GlyphBitmap {
    fn from_rows(ch: char, rows: &[&str; 16]) -> Self {
        let mut ink = Vec::with_capacity((BASE_GLYPH_W * BASE_GLYPH_H) as usize);
        for row in rows {
            assert_eq!(
                row.len(),
                BASE_GLYPH_W as usize,
                "glyph {ch:?} row width"
            );
            ink.extend(row.bytes().map(|b| b == b'#'));
        }
        GlyphBitmap {
            width: BASE_GLYPH_W,
            height: BASE_GLYPH_H,
            ink,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn ink_at(&self, x: u32, y: u32) -> bool {
        assert!(x < self.width && y < self.height);
        self.ink[(y * self.width + x) as usize]
    }

    pub fn ink_count(&self) -> u32 {
        self.ink.iter().filter(|&&b| b).count() as u32
    }
}

/// The full character repertoire plus inter-character spacing at base scale.
#[derive(Debug, Clone)]
pub struct GlyphSet {
    glyphs: BTreeMap<char, GlyphBitmap>,
    spacing: u32,
}

impl GlyphSet {
    /// The repertoire compiled into the library: A-Z, a-z, 0-9.
    pub fn embedded() -> &'static GlyphSet {
        static SET: OnceLock<GlyphSet> = OnceLock::new();
        SET.get_or_init(|| {
            let mut glyphs = BTreeMap::new();
            for (ch, rows) in GLYPH_ROWS {
                let bitmap = GlyphBitmap::from_rows(*ch, rows);
                assert!(bitmap.ink_count() > 0, "glyph {ch:?} has no ink");
                glyphs.insert(*ch, bitmap);
            }
            GlyphSet { glyphs, spacing: 2 }
        })
    }

    pub fn glyph(&self, ch: char) -> Option<&GlyphBitmap> {
        self.glyphs.get(&ch)
    }

    pub fn spacing(&self) -> u32 {
        self.spacing
    }

    pub fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.glyphs.keys().copied()
    }
}

/// Purpose of a form field, as recorded in field annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Printed,
    Handwritten,
    Unknown,
}

impl Default for FieldKind {
    fn default() -> Self {
        FieldKind::Unknown
    }
}

/// A named region of the template, e.g. a box a person writes into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldDto", into = "FieldDto")]
pub struct FieldAnnotation {
    pub name: String,
    pub region: Rect,
    pub kind: FieldKind,
}

#[derive(Serialize, Deserialize)]
struct FieldDto {
    name: String,
    x: i32,
    y: i32,
    w: u32,
    h: u32,
    #[serde(default)]
    kind: FieldKind,
}

impl TryFrom<FieldDto> for FieldAnnotation {
    type Error = String;

    fn try_from(d: FieldDto) -> Result<Self, String> {
        if d.w < 1 || d.h < 1 {
            return Err(format!("field {:?} has an empty region", d.name));
        }
        Ok(FieldAnnotation {
            name: d.name,
            region: Rect::new(d.x, d.y, d.w, d.h),
            kind: d.kind,
        })
    }
}

impl From<FieldAnnotation> for FieldDto {
    fn from(f: FieldAnnotation) -> FieldDto {
        FieldDto {
            name: f.name,
            x: f.region.x,
            y: f.region.y,
            w: f.region.w,
            h: f.region.h,
            kind: f.kind,
        }
    }
}

/// One word stamped on the page; `x`, `y` is the top-left corner of its
/// first glyph cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedWord {
    pub text: String,
    pub x: f64,
    pub y: f64,
    #[serde(default = "default_word_scale")]
    pub scale: f64,
}

fn default_word_scale() -> f64 {
    1.0
}

impl PlacedWord {
    pub fn new(text: impl Into<String>, x: f64, y: f64, scale: f64) -> Self {
        PlacedWord {
            text: text.into(),
            x,
            y,
            scale,
        }
    }

    pub fn anchor(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Everything needed to render one page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentLayout {
    pub page_w: u32,
    pub page_h: u32,
    pub words: Vec<PlacedWord>,
    #[serde(default)]
    pub fields: Vec<FieldAnnotation>,
}

impl DocumentLayout {
    pub fn from_path(path: &Path) -> Result<DocumentLayout, SynthError> {
        let text = fs::read_to_string(path).map_err(|e| SynthError::Layout {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| SynthError::Layout {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

fn scaled_extent(base: u32, scale: f64) -> u32 {
    ((base as f64 * scale).round() as i64).max(1) as u32
}

fn rects_overlap(a: Rect, b: Rect) -> bool {
    (a.x as i64) < b.x as i64 + b.w as i64
        && (b.x as i64) < a.x as i64 + a.w as i64
        && (a.y as i64) < b.y as i64 + b.h as i64
        && (b.y as i64) < a.y as i64 + a.h as i64
}

/// Sixty distinct dictionary words whose first and last characters are
/// rich in usable tips.
const SAMPLE_WORDS: [&str; 60] = [
    "Take", "Value", "Total", "Amount", "Away", "Yearly", "Vector", "Wait", "Kite", "Zebra",
    "Xray", "Moat", "Next", "Near", "Tax", "Year", "Very", "Many", "Worker", "Matter",
    "Number", "Vendor", "Tender", "Keeper", "Tutor", "Mayor", "Minor", "Major", "Water",
    "Winter", "Writer", "Tiger", "Timer", "Tower", "Trailer", "Tracker", "Teller", "Tailor",
    "Waiter", "Valor", "Vapor", "Victor", "Visitor", "Vigor", "Anchor", "Author", "Answer",
    "Armor", "Actor", "Alter", "Amber", "After", "Koala", "Kayak", "Zero", "Zipper",
    "Zephyr", "Zonal", "Xenon", "Xylem",
];

/// A deterministic 60-word form: a 6x10 grid of distinct words plus three
/// annotated fill-in regions in the gaps between rows.
///
/// Word spacing is wide relative to the page, so every word's neighborhood
/// disk is empty and matching rests on global text uniqueness. That makes
/// the page usable at any rotation or scale a perturbation produces.
pub fn sample_form_layout(page_w: u32, page_h: u32, word_scale: f64) -> DocumentLayout {
    let (w, h) = (page_w as f64, page_h as f64);
    let mut words = Vec::with_capacity(SAMPLE_WORDS.len());
    for (i, text) in SAMPLE_WORDS.iter().enumerate() {
        let col = (i % 6) as f64;
        let row = (i / 6) as f64;
        words.push(PlacedWord::new(
            *text,
            (0.025 + 0.1625 * col) * w,
            (0.020 + 0.096 * row) * h,
            word_scale,
        ));
    }
    let field = |name: &str, fx: f64, fy: f64, kind: FieldKind| FieldAnnotation {
        name: name.into(),
        region: Rect::new(
            (fx * w) as i32,
            (fy * h) as i32,
            (0.25 * w) as u32,
            (0.035 * h) as u32,
        ),
        kind,
    };
    DocumentLayout {
        page_w,
        page_h,
        words,
        fields: vec![
            field("name", 0.50, 0.048, FieldKind::Handwritten),
            field("date", 0.05, 0.459, FieldKind::Printed),
            field("amount", 0.55, 0.747, FieldKind::Handwritten),
        ],
    }
}

/// Vocabulary for the dense stress form. Every tip class a word emits is
/// stable under rotation: single-pixel extremes only (A/V/T/Y/v/y/4 on the
/// left, r/T/Y on the right, A/1/4 on top, V/v/y on the bottom). Words
/// whose extremes are two-pronged or flat runs flip by whole strokes when
/// rotated and would land outside any reasonable inlier threshold. Texts
/// are pairwise distinct (matching is case-sensitive) so every word can
/// match by global uniqueness alone.
const STRESS_WORDS: [&str; 128] = [
    "Actor", "Vapor", "Tiger", "vapor", "Anchor", "Victor", "Timber", "1040",
    "Author", "Vigor", "Tracer", "vigor", "Archer", "Vendor", "Trader", "4506",
    "Answer", "Visor", "Tender", "visor", "Antler", "Veneer", "Tanner", "1776",
    "Armor", "Valor", "Ticker", "valor", "Arbor", "Viewer", "Tailor", "1910",
    "Amber", "Vicar", "Tower", "vicar", "Anger", "Viper", "Tumor", "4850",
    "Ardor", "Tenor", "vector", "Altar", "Timer", "Avatar",
    "After", "Vapour", "Taker", "vapour", "Alder", "Valour", "Tamer", "1120",
    "Adder", "Vigour", "Taper", "vigour", "Aster", "Velour", "Terror", "1099",
    "Auger", "Valuer", "Tether", "valuer", "Abuser", "Vector", "Tiller", "1945",
    "Adorer", "Veer", "Tinder", "veer", "Aimer", "viewer", "Tinker", "Angler",
    "viper", "Toner", "Anther", "vendor", "Tremor", "Arguer", "veneer", "Tucker",
    "victor", "Turner", "Tutor", "Taster", "velour", "Tapir",
    "Yonder", "yonder", "Yawner", "yawner", "Yapper", "yapper", "Yeller",
    "yeller", "Yammer", "yammer", "Year", "year", "Audio", "Apple", "Attic",
    "April", "Atlas", "Anthem", "Aspen", "Asset", "Autumn", "August", "Agile",
    "Around", "every", "entry", "velvet", "violet", "vowel", "venom", "yogurt",
    "yearn", "dancer", "favor", "harbor", "corner",
];

/// A 128-word form dense enough to hold registration accuracy across the
/// whole perturbation envelope, where a 2x scale leaves only the middle
/// quarter of the page visible.
///
/// Words sit one per site on a staggered grid: centers 174 base px apart
/// within a row, rows 166 apart with alternate rows offset by a half
/// pitch. Nearest neighbors then stay 165+ px apart, so every template
/// neighborhood disk is empty and matching rests on global text
/// uniqueness; a word cropped at the page edge costs only itself. Sites
/// fill center-out, keeping the words with the most stable tips inside
/// the quarter-page window. Per-site jitter decorrelates positions from
/// the resampling grid.
pub fn stress_form_layout(page_w: u32, page_h: u32, word_scale: f64) -> DocumentLayout {
    let mut sites = Vec::new();
    for row in 0..15u32 {
        let cols = if row % 2 == 0 { 9 } else { 8 };
        for col in 0..cols {
            let jx = ((col * 7 + row * 13) % 7) as f64 - 3.0;
            let jy = ((col * 5 + row * 17) % 7) as f64 - 3.0;
            let cx = 86.0 + 174.0 * col as f64 + if row % 2 == 0 { 0.0 } else { 87.0 } + jx;
            let cy = 42.0 + 166.0 * row as f64 + jy;
            sites.push((cx, cy));
        }
    }
    sites.sort_by(|a, b| {
        let da = ((a.0 - 800.0) / 400.0).abs().max(((a.1 - 1200.0) / 600.0).abs());
        let db = ((b.0 - 800.0) / 400.0).abs().max(((b.1 - 1200.0) / 600.0).abs());
        da.partial_cmp(&db).unwrap()
    });
    let mut words = Vec::with_capacity(STRESS_WORDS.len());
    for (text, (cx, cy)) in STRESS_WORDS.iter().zip(&sites) {
        // Rendered ink is 14n-2 base px wide for n glyphs: 12 per glyph
        // plus a 2 px gap.
        let width = (14.0 * text.len() as f64 - 2.0) * word_scale;
        words.push(PlacedWord::new(
            *text,
            (cx - width / 2.0) * (page_w as f64 / 1600.0),
            (cy - 8.0 * word_scale) * (page_h as f64 / 2400.0),
            word_scale,
        ));
    }
    DocumentLayout {
        page_w,
        page_h,
        words,
        fields: Vec::new(),
    }
}

/// Stamps every word of `layout` onto a white page and reports the exact
/// ink boxes as a ground-truth word sidecar.
///
/// Glyphs are scaled by nearest neighbor, so ink stays pure black and the
/// boxes stay exact at any scale.
pub fn render_document(
    layout: &DocumentLayout,
    glyphs: &GlyphSet,
) -> Result<(GrayImage, OcrPage), SynthError> {
    if layout.page_w == 0 || layout.page_h == 0 {
        return Err(SynthError::Layout {
            path: "<layout>".to_string(),
            reason: "page dimensions must be nonzero".to_string(),
        });
    }
    let mut page = GrayImage::filled(layout.page_w, layout.page_h, 255);
    let mut words: Vec<WordBox> = Vec::with_capacity(layout.words.len());

    for (index, word) in layout.words.iter().enumerate() {
        if word.text.is_empty() {
            return Err(SynthError::EmptyWord { index });
        }
        if !(word.scale > 0.0) || !word.scale.is_finite() {
            return Err(SynthError::BadWordScale {
                index,
                text: word.text.clone(),
            });
        }
        let out_of_page = || SynthError::OutOfPage {
            index,
            text: word.text.clone(),
        };

        let mut pen_x = word.x.round() as i64;
        let pen_y = word.y.round() as i64;
        let advance_gap = scaled_extent(glyphs.spacing(), word.scale) as i64;
        let mut bounds: Option<(i64, i64, i64, i64)> = None;

        for ch in word.text.chars() {
            let glyph = glyphs
                .glyph(ch)
                .ok_or(SynthError::UnsupportedChar(ch))?;
            let target_w = scaled_extent(glyph.width(), word.scale);
            let target_h = scaled_extent(glyph.height(), word.scale);
            for ty in 0..target_h {
                let src_y = ty * glyph.height() / target_h;
                for tx in 0..target_w {
                    let src_x = tx * glyph.width() / target_w;
                    if !glyph.ink_at(src_x, src_y) {
                        continue;
                    }
                    let px = pen_x + tx as i64;
                    let py = pen_y + ty as i64;
                    if px < 0
                        || py < 0
                        || px >= layout.page_w as i64
                        || py >= layout.page_h as i64
                    {
                        return Err(out_of_page());
                    }
                    page.set(px as u32, py as u32, 0);
                    bounds = Some(match bounds {
                        None => (px, py, px, py),
                        Some((x0, y0, x1, y1)) => {
                            (x0.min(px), y0.min(py), x1.max(px), y1.max(py))
                        }
                    });
                }
            }
            pen_x += target_w as i64 + advance_gap;
        }

        let (x0, y0, x1, y1) = bounds.expect("every glyph has ink");
        let tight = Rect::new(
            x0 as i32,
            y0 as i32,
            (x1 - x0 + 1) as u32,
            (y1 - y0 + 1) as u32,
        );
        for prior in &words {
            if rects_overlap(prior.box_, tight) {
                return Err(SynthError::WordOverlap {
                    a: prior.text.clone(),
                    b: word.text.clone(),
                });
            }
        }
        words.push(WordBox {
            text: word.text.clone(),
            box_: tight,
            confidence: 100.0,
        });
    }

    let sidecar = OcrPage::new(words, layout.page_w, layout.page_h)?;
    Ok((page, sidecar))
}

/// Fraction of pixels darker than `threshold`. Against a freshly rendered
/// page this is the exact ink coverage.
pub fn ink_fraction(image: &GrayImage, threshold: u8) -> f64 {
    let total = image.width() as u64 * image.height() as u64;
    let ink = image
        .data()
        .iter()
        .filter(|&&v| v < threshold)
        .count() as u64;
    ink as f64 / total as f64
}

/// A template-to-test page transformation, expressed in intuitive units.
/// Translations are fractions of the page dimensions; rotation and scaling
/// act about the page center. `tilt_x`/`tilt_y` are the projective
/// bottom-row terms and should stay small (order 1e-4) to keep the page
/// recognizable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationParams {
    pub rotation_deg: f64,
    pub translate_x: f64,
    pub translate_y: f64,
    pub scale_x: f64,
    pub scale_y: f64,
    pub tilt_x: f64,
    pub tilt_y: f64,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        PerturbationParams {
            rotation_deg: 0.0,
            translate_x: 0.0,
            translate_y: 0.0,
            scale_x: 1.0,
            scale_y: 1.0,
            tilt_x: 0.0,
            tilt_y: 0.0,
        }
    }
}

/// Builds the template-to-test homography for `p` on a page of the given
/// size: rotation and scaling about the page center, then translation,
/// with the projective tilt terms in the bottom row.
pub fn make_homography(
    p: &PerturbationParams,
    page_w: u32,
    page_h: u32,
) -> Result<Homography, SynthError> {
    if !(p.scale_x > 0.0 && p.scale_y > 0.0)
        || !p.scale_x.is_finite()
        || !p.scale_y.is_finite()
    {
        return Err(SynthError::DegenerateScale);
    }
    let cx = page_w as f64 / 2.0;
    let cy = page_h as f64 / 2.0;
    let theta = p.rotation_deg.to_radians();
    let (sin, cos) = theta.sin_cos();
    let tx = p.translate_x * page_w as f64;
    let ty = p.translate_y * page_h as f64;

    // T(center) . translate . scale . rotate . T(-center), multiplied out.
    let a = p.scale_x * cos;
    let b = -p.scale_x * sin;
    let c = p.scale_y * sin;
    let d = p.scale_y * cos;
    let affine = [
        [a, b, cx + tx - a * cx - b * cy],
        [c, d, cy + ty - c * cx - d * cy],
        [0.0, 0.0, 1.0],
    ];
    let tilt = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [p.tilt_x, p.tilt_y, 1.0],
    ];
    let m = crate::homography::linalg::mat3_mul(&affine, &tilt);
    Ok(Homography::from_matrix(m)?)
}

/// Warps `img` by the perturbation and returns the test page together with
/// the ground-truth test-to-template homography (the map an aligner must
/// recover). Exposed background is filled with [`EXPOSED_BACKGROUND`].
pub fn perturb_document(
    img: &GrayImage,
    p: &PerturbationParams,
) -> Result<(GrayImage, Homography), SynthError> {
    let forward = make_homography(p, img.width(), img.height())?;
    let test = warp_perspective(img, &forward, img.width(), img.height(), EXPOSED_BACKGROUND)?;
    let true_h = forward.invert()?;
    Ok((test, true_h))
}
