//! End-to-end alignment: load, resize, binarize, gather words, match,
//! estimate, warp, diff. Plus field extraction on the aligned page and a
//! perturbation stress harness.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::correspond::{
    correspondences_from_matches, eligible_matches, NeighborhoodParams,
};
use crate::homography::{
    ransac_estimate, EstimateReport, Homography, HomographyError, RansacParams,
};
use crate::keypoint::{CharTipTable, EligibilityParams, KeypointError};
use crate::ocr::{
    read_words_external, read_words_sidecar, Lexicon, OcrError, OcrPage, OcrProcessConfig,
    WordBox,
};
use crate::raster::{
    binarize, crop, load_image, resize_bilinear, save_image, warp_perspective, xor_diff,
    BinaryImage, GrayImage, Point, RasterError, Rect,
};
use crate::synth::{perturb_document, PerturbationParams};

pub use crate::synth::{FieldAnnotation, FieldKind};

/// Every failure leaving the pipeline falls into one of five classes, each
/// with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("input: {0}")]
    Input(String),
    #[error("ocr: {0}")]
    Ocr(#[from] OcrError),
    #[error("matching: found {found} correspondences, need at least {needed}")]
    Match { found: usize, needed: usize },
    #[error("estimation: {0}")]
    Estimate(#[from] HomographyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 3,
            PipelineError::Ocr(_) => 4,
            PipelineError::Match { .. } => 5,
            PipelineError::Estimate(_) => 6,
            PipelineError::Io { .. } => 7,
        }
    }
}

fn raster_err(e: RasterError) -> PipelineError {
    match e {
        RasterError::Io { path, source } => PipelineError::Io { path, source },
        other => PipelineError::Input(other.to_string()),
    }
}

fn keypoint_err(e: KeypointError) -> PipelineError {
    PipelineError::Input(e.to_string())
}

/// The working resolution both pages are resampled to before anything else
/// looks at them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CanvasSize {
    pub width: u32,
    pub height: u32,
}

impl Default for CanvasSize {
    fn default() -> Self {
        CanvasSize {
            width: 1600,
            height: 2400,
        }
    }
}

/// Where word boxes come from: a ground-truth JSON sidecar next to each
/// image, or an external OCR engine run on the binarized page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OcrBackendConfig {
    Sidecar,
    External(OcrProcessConfig),
}

impl Default for OcrBackendConfig {
    fn default() -> Self {
        OcrBackendConfig::Sidecar
    }
}

/// Neighborhood matching knobs as they appear in config files. A missing
/// radius means a tenth of the canvas width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NeighborhoodConfig {
    pub radius: Option<f64>,
    pub overlap_threshold: f64,
}

impl Default for NeighborhoodConfig {
    fn default() -> Self {
        NeighborhoodConfig {
            radius: None,
            overlap_threshold: 0.90,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct PipelineConfig {
    pub canvas: CanvasSize,
    pub binarize_threshold: Option<u8>,
    pub eligibility: EligibilityParams,
    pub neighborhood: NeighborhoodConfig,
    pub ransac: RansacParams,
    pub ocr_backend: OcrBackendConfig,
    pub tip_table_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn from_path(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| PipelineError::Input(format!("config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |msg: &str| Err(PipelineError::Input(msg.to_string()));
        if self.canvas.width < 100 || self.canvas.height < 100 {
            return fail("canvas must be at least 100x100");
        }
        if self.eligibility.min_word_len < 1 || self.eligibility.min_box_height < 1 {
            return fail("eligibility minimums must be at least 1");
        }
        let t = self.neighborhood.overlap_threshold;
        if !(t > 0.0 && t <= 1.0) {
            return fail("overlap threshold must be in (0, 1]");
        }
        if let Some(r) = self.neighborhood.radius {
            if !(r > 0.0) {
                return fail("neighborhood radius must be positive");
            }
        }
        if !(self.ransac.inlier_threshold > 0.0) {
            return fail("ransac inlier threshold must be positive");
        }
        if !(self.ransac.confidence > 0.0 && self.ransac.confidence < 1.0) {
            return fail("ransac confidence must be in (0, 1)");
        }
        if self.ransac.max_iterations < 1 {
            return fail("ransac needs at least one iteration");
        }
        Ok(())
    }

    pub fn binarize_threshold(&self) -> u8 {
        self.binarize_threshold.unwrap_or(170)
    }

    fn neighborhood_params(&self) -> NeighborhoodParams {
        NeighborhoodParams {
            radius: self
                .neighborhood
                .radius
                .unwrap_or(0.1 * self.canvas.width as f64),
            overlap_threshold: self.neighborhood.overlap_threshold,
        }
    }

    fn tip_table(&self) -> Result<CharTipTable, PipelineError> {
        match &self.tip_table_path {
            Some(path) => CharTipTable::from_path(path)
                .map_err(|e| PipelineError::Input(e.to_string())),
            None => Ok(CharTipTable::default()),
        }
    }

    fn lexicon(&self) -> Result<Lexicon, PipelineError> {
        match &self.lexicon_path {
            Some(path) => Lexicon::from_path(path).map_err(PipelineError::Ocr),
            None => Ok(Lexicon::builtin()),
        }
    }
}

/// Everything align produces: the rewarped page, diagnostics, and the test
/// page's words carried into the template frame (box corners mapped
/// through the estimated homography).
#[derive(Debug, Clone)]
pub struct AlignedDocument {
    pub aligned: GrayImage,
    pub report: AlignmentReport,
    pub words_in_template_frame: OcrPage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub estimate: EstimateReport,
    /// Fraction of binarized pixels that differ between template and
    /// aligned test page.
    pub xor_residual: f64,
    pub correspondence_count: usize,
    pub matched_word_count: usize,
    pub timings_ms: BTreeMap<String, f64>,
}

/// One cropped field region of the aligned page.
#[derive(Debug, Clone)]
pub struct FieldCrop {
    pub annotation: FieldAnnotation,
    pub patch: GrayImage,
    pub recognized_text: Option<String>,
}

struct Timer {
    timings: BTreeMap<String, f64>,
    started: Instant,
}

impl Timer {
    fn new() -> Self {
        Timer {
            timings: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let elapsed = self.started.elapsed().as_secs_f64() * 1e3;
        *self.timings.entry(stage.to_string()).or_insert(0.0) += elapsed;
        self.started = Instant::now();
    }
}

/// Scales a page of word boxes onto the canvas. Exact when the source
/// already has canvas dimensions.
fn scale_words_to_canvas(page: &OcrPage, canvas: CanvasSize) -> OcrPage {
    if page.image_w == canvas.width && page.image_h == canvas.height {
        return page.clone();
    }
    let sx = canvas.width as f64 / page.image_w as f64;
    let sy = canvas.height as f64 / page.image_h as f64;
    let words = page
        .words
        .iter()
        .filter_map(|w| {
            let x = (w.box_.x as f64 * sx).round() as i64;
            let y = (w.box_.y as f64 * sy).round() as i64;
            let bw = ((w.box_.w as f64 * sx).round() as i64).max(1);
            let bh = ((w.box_.h as f64 * sy).round() as i64).max(1);
            clamp_box(x, y, bw, bh, canvas).map(|box_| WordBox {
                text: w.text.clone(),
                box_,
                confidence: w.confidence,
            })
        })
        .collect();
    OcrPage::new(words, canvas.width, canvas.height).expect("clamped boxes fit the canvas")
}

fn clamp_box(x: i64, y: i64, w: i64, h: i64, canvas: CanvasSize) -> Option<Rect> {
    let x0 = x.clamp(0, canvas.width as i64 - 1);
    let y0 = y.clamp(0, canvas.height as i64 - 1);
    let x1 = (x + w).clamp(0, canvas.width as i64);
    let y1 = (y + h).clamp(0, canvas.height as i64);
    if x1 - x0 < 1 || y1 - y0 < 1 {
        return None;
    }
    Some(Rect::new(
        x0 as i32,
        y0 as i32,
        (x1 - x0) as u32,
        (y1 - y0) as u32,
    ))
}

/// Word boxes for one canvas-sized page, from whichever backend the config
/// names. `provided` carries sidecar-style ground truth (in the source
/// image's frame) and is required by the sidecar backend.
fn acquire_words(
    bin: &BinaryImage,
    provided: Option<&OcrPage>,
    config: &PipelineConfig,
    role: &str,
) -> Result<OcrPage, PipelineError> {
    match &config.ocr_backend {
        OcrBackendConfig::Sidecar => {
            let page = provided.ok_or_else(|| {
                PipelineError::Input(format!("no word sidecar available for the {role} page"))
            })?;
            Ok(scale_words_to_canvas(page, config.canvas))
        }
        OcrBackendConfig::External(process) => {
            let dir = tempfile::tempdir().map_err(|e| PipelineError::Io {
                path: "tempdir".into(),
                source: e,
            })?;
            let path = dir.path().join(format!("{role}.pgm"));
            save_image(&path, &bin.to_gray()).map_err(raster_err)?;
            Ok(read_words_external(&path, process)?)
        }
    }
}

/// The alignment core. Both images may be any size; they are resampled to
/// the canvas first, and sidecar words are scaled along.
pub fn align_pages(
    template: &GrayImage,
    template_words: Option<&OcrPage>,
    test: &GrayImage,
    test_words: Option<&OcrPage>,
    config: &PipelineConfig,
) -> Result<AlignedDocument, PipelineError> {
    config.validate()?;
    let canvas = config.canvas;
    let mut timer = Timer::new();

    let template = resize_bilinear(template, canvas.width, canvas.height).map_err(raster_err)?;
    let test = resize_bilinear(test, canvas.width, canvas.height).map_err(raster_err)?;
    timer.lap("resize");

    let threshold = config.binarize_threshold();
    let template_bin = binarize(&template, threshold);
    let test_bin = binarize(&test, threshold);
    timer.lap("binarize");

    let template_page = acquire_words(&template_bin, template_words, config, "template")?;
    let test_page = acquire_words(&test_bin, test_words, config, "test")?;
    timer.lap("ocr");

    let table = config.tip_table()?;
    let lexicon = config.lexicon()?;
    let matches = eligible_matches(
        &template_page,
        &test_page,
        &lexicon,
        &config.eligibility,
        &config.neighborhood_params(),
    );
    let correspondences =
        correspondences_from_matches(&template_bin, &test_bin, &matches, &table)
            .map_err(keypoint_err)?;
    timer.lap("match");

    if correspondences.len() < 4 {
        return Err(PipelineError::Match {
            found: correspondences.len(),
            needed: 4,
        });
    }
    let estimate = ransac_estimate(&correspondences, &config.ransac)?;
    timer.lap("estimate");

    let aligned = warp_perspective(
        &test,
        &estimate.homography,
        canvas.width,
        canvas.height,
        255,
    )
    .map_err(raster_err)?;
    timer.lap("warp");

    let aligned_bin = binarize(&aligned, threshold);
    let (_, xor_residual) = xor_diff(&template_bin, &aligned_bin).map_err(raster_err)?;
    timer.lap("diff");

    let words_in_template_frame = map_words(&test_page, &estimate.homography, canvas);

    Ok(AlignedDocument {
        aligned,
        report: AlignmentReport {
            xor_residual,
            correspondence_count: correspondences.len(),
            matched_word_count: matches.len(),
            timings_ms: timer.timings,
            estimate,
        },
        words_in_template_frame,
    })
}

/// Carries each word box through `h` (corner AABB), dropping words that
/// leave the canvas or collapse.
fn map_words(page: &OcrPage, h: &Homography, canvas: CanvasSize) -> OcrPage {
    let words = page
        .words
        .iter()
        .filter_map(|w| {
            let b = w.box_;
            let corners = [
                Point::new(b.x as f64, b.y as f64),
                Point::new(b.x as f64 + b.w as f64, b.y as f64),
                Point::new(b.x as f64, b.y as f64 + b.h as f64),
                Point::new(b.x as f64 + b.w as f64, b.y as f64 + b.h as f64),
            ];
            let mut xs = [0.0f64; 4];
            let mut ys = [0.0f64; 4];
            for (i, c) in corners.iter().enumerate() {
                let p = h.apply_point(*c).ok()?;
                xs[i] = p.x;
                ys[i] = p.y;
            }
            let x0 = xs.iter().cloned().fold(f64::INFINITY, f64::min).floor();
            let y0 = ys.iter().cloned().fold(f64::INFINITY, f64::min).floor();
            let x1 = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil();
            let y1 = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil();
            if !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) {
                return None;
            }
            clamp_box(
                x0 as i64,
                y0 as i64,
                (x1 - x0) as i64,
                (y1 - y0) as i64,
                canvas,
            )
            .map(|box_| WordBox {
                text: w.text.clone(),
                box_,
                confidence: w.confidence,
            })
        })
        .collect();
    OcrPage::new(words, canvas.width, canvas.height).expect("clamped boxes fit the canvas")
}

fn sidecar_path(image_path: &Path) -> PathBuf {
    image_path.with_extension("json")
}

fn load_page_with_sidecar(
    path: &Path,
    config: &PipelineConfig,
) -> Result<(GrayImage, Option<OcrPage>), PipelineError> {
    let image = load_image(path).map_err(raster_err)?;
    let words = match config.ocr_backend {
        OcrBackendConfig::Sidecar => Some(read_words_sidecar(
            &sidecar_path(path),
            image.width(),
            image.height(),
        )?),
        OcrBackendConfig::External(_) => None,
    };
    Ok((image, words))
}

/// File-level entry point: loads both pages (plus sidecars when the config
/// asks for them) and aligns the test page onto the template.
pub fn align_document_full(
    template_path: &Path,
    test_path: &Path,
    config: &PipelineConfig,
) -> Result<AlignedDocument, PipelineError> {
    config.validate()?;
    let (template, template_words) = load_page_with_sidecar(template_path, config)?;
    let (test, test_words) = load_page_with_sidecar(test_path, config)?;
    align_pages(
        &template,
        template_words.as_ref(),
        &test,
        test_words.as_ref(),
        config,
    )
}

/// As [`align_document_full`], returning just the aligned page and report.
pub fn align_document(
    template_path: &Path,
    test_path: &Path,
    config: &PipelineConfig,
) -> Result<(GrayImage, AlignmentReport), PipelineError> {
    let out = align_document_full(template_path, test_path, config)?;
    Ok((out.aligned, out.report))
}

/// Crops each annotated region out of the aligned page.
///
/// Printed fields gain recognized text when words are available: either
/// ground-truth words already mapped into the template frame, or an
/// external OCR pass over the patch itself.
pub fn extract_fields(
    aligned: &GrayImage,
    annotations: &[FieldAnnotation],
    config: &PipelineConfig,
    words_in_template_frame: Option<&OcrPage>,
) -> Result<Vec<FieldCrop>, PipelineError> {
    let mut crops = Vec::with_capacity(annotations.len());
    for annotation in annotations {
        let patch = crop(aligned, annotation.region).map_err(|e| match e {
            RasterError::RegionOutOfBounds { .. } => PipelineError::Input(format!(
                "field {:?}: {e}",
                annotation.name
            )),
            other => raster_err(other),
        })?;
        let recognized_text = if annotation.kind == FieldKind::Printed {
            recognize_patch(annotation, &patch, config, words_in_template_frame)?
        } else {
            None
        };
        crops.push(FieldCrop {
            annotation: annotation.clone(),
            patch,
            recognized_text,
        });
    }
    Ok(crops)
}

fn recognize_patch(
    annotation: &FieldAnnotation,
    patch: &GrayImage,
    config: &PipelineConfig,
    words: Option<&OcrPage>,
) -> Result<Option<String>, PipelineError> {
    let mut found: Vec<(Rect, String)> = Vec::new();
    if let Some(page) = words {
        for w in &page.words {
            if annotation.region.contains_point(w.box_.centroid()) {
                found.push((w.box_, w.text.clone()));
            }
        }
    } else if let OcrBackendConfig::External(process) = &config.ocr_backend {
        let dir = tempfile::tempdir().map_err(|e| PipelineError::Io {
            path: "tempdir".into(),
            source: e,
        })?;
        let path = dir.path().join("patch.pgm");
        save_image(&path, patch).map_err(raster_err)?;
        let page = read_words_external(&path, process)?;
        for w in &page.words {
            found.push((w.box_, w.text.clone()));
        }
    }
    if found.is_empty() {
        return Ok(None);
    }
    Ok(Some(reading_order_text(found)))
}

/// Joins word boxes in reading order: boxes sharing a vertical band form a
/// line read left to right; lines read top to bottom. Centroid sorting
/// would misorder words whose descenders stretch their boxes.
fn reading_order_text(mut words: Vec<(Rect, String)>) -> String {
    words.sort_by_key(|(b, _)| (b.y, b.x));
    let mut lines: Vec<(i64, i64, Vec<(Rect, String)>)> = Vec::new();
    for (b, t) in words {
        let top = b.y as i64;
        let bottom = top + b.h as i64;
        match lines.last_mut() {
            Some((line_top, line_bottom, line)) if top < *line_bottom && bottom > *line_top => {
                *line_top = (*line_top).min(top);
                *line_bottom = (*line_bottom).max(bottom);
                line.push((b, t));
            }
            _ => lines.push((top, bottom, vec![(b, t)])),
        }
    }
    let mut parts: Vec<String> = Vec::new();
    for (_, _, mut line) in lines {
        line.sort_by_key(|(b, _)| (b.x, b.y));
        parts.extend(line.into_iter().map(|(_, t)| t));
    }
    parts.join(" ")
}

/// Reads `{"fields": [...]}` annotations.
pub fn read_fields_file(path: &Path) -> Result<Vec<FieldAnnotation>, PipelineError> {
    #[derive(Deserialize)]
    struct FieldsFile {
        fields: Vec<FieldAnnotation>,
    }
    let text = fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let parsed: FieldsFile = serde_json::from_str(&text)
        .map_err(|e| PipelineError::Input(format!("fields {}: {e}", path.display())))?;
    Ok(parsed.fields)
}

/// On-disk form of an [`AlignmentReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredReport {
    pub homography: [f64; 9],
    pub inlier_count: usize,
    pub inlier_mask: Vec<bool>,
    pub mean_inlier_reproj_error_px: f64,
    pub correspondences: usize,
    pub matched_words: usize,
    pub xor_residual: f64,
    pub timings_ms: BTreeMap<String, f64>,
}

impl From<&AlignmentReport> for StoredReport {
    fn from(r: &AlignmentReport) -> Self {
        StoredReport {
            homography: r.estimate.homography.to_row_major(),
            inlier_count: r.estimate.inlier_count,
            inlier_mask: r.estimate.inlier_mask.clone(),
            mean_inlier_reproj_error_px: r.estimate.mean_inlier_reproj_error,
            correspondences: r.correspondence_count,
            matched_words: r.matched_word_count,
            xor_residual: r.xor_residual,
            timings_ms: r.timings_ms.clone(),
        }
    }
}

pub fn write_report(report: &AlignmentReport, path: &Path) -> Result<(), PipelineError> {
    let stored = StoredReport::from(report);
    let mut text = serde_json::to_string_pretty(&stored)
        .expect("report serialization cannot fail");
    text.push('\n');
    fs::write(path, text).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn read_report(path: &Path) -> Result<StoredReport, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| PipelineError::Input(format!("report {}: {e}", path.display())))
}

/// The perturbation grid for [`stress_grid`]: the full cross product of
/// the three axes, with each translation value applied to both x and y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressGrid {
    pub rotations_deg: Vec<f64>,
    pub translations: Vec<f64>,
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StressCell {
    pub rotation_deg: f64,
    pub translation: f64,
    pub scale: f64,
    pub success: bool,
    /// Mean reprojection error of the 4 canvas corners, estimated vs true
    /// homography, in pixels. Absent when the cell failed.
    pub corner_error_px: Option<f64>,
    pub inlier_count: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StressSummary {
    pub cells: usize,
    pub succeeded: usize,
    pub max_corner_error_px: Option<f64>,
    pub mean_corner_error_px: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StressReport {
    pub cells: Vec<StressCell>,
    pub summary: StressSummary,
}

impl StressReport {
    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        let mut text =
            serde_json::to_string_pretty(self).expect("stress serialization cannot fail");
        text.push('\n');
        fs::write(path, text).map_err(|e| PipelineError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}

/// Mean distance between where the estimated and true homographies send
/// the template's four corners (both maps go test → template, so they are
/// compared on the perturbed corners).
fn corner_error(
    estimated: &Homography,
    forward: &Homography,
    canvas: CanvasSize,
) -> Result<f64, HomographyError> {
    let (w, h) = (canvas.width as f64, canvas.height as f64);
    let mut total = 0.0;
    for corner in [
        Point::new(0.0, 0.0),
        Point::new(w, 0.0),
        Point::new(0.0, h),
        Point::new(w, h),
    ] {
        let moved = forward.apply_point(corner)?;
        let back = estimated.apply_point(moved)?;
        total += back.distance(corner);
    }
    Ok(total / 4.0)
}

/// Runs the aligner against synthetic perturbations of `template_path`
/// over the whole grid. Failing cells are recorded, not fatal.
pub fn stress_grid(
    template_path: &Path,
    config: &PipelineConfig,
    grid: &StressGrid,
) -> Result<StressReport, PipelineError> {
    config.validate()?;
    let canvas = config.canvas;
    let (template_raw, template_words_raw) = load_page_with_sidecar(template_path, config)?;
    let template =
        resize_bilinear(&template_raw, canvas.width, canvas.height).map_err(raster_err)?;
    let template_words = template_words_raw
        .as_ref()
        .map(|page| scale_words_to_canvas(page, canvas));

    let mut cells = Vec::new();
    for &rotation in &grid.rotations_deg {
        for &translation in &grid.translations {
            for &scale in &grid.scales {
                let params = PerturbationParams {
                    rotation_deg: rotation,
                    translate_x: translation,
                    translate_y: translation,
                    scale_x: scale,
                    scale_y: scale,
                    ..PerturbationParams::default()
                };
                let outcome = run_cell(&template, template_words.as_ref(), config, &params);
                let mut cell = StressCell {
                    rotation_deg: rotation,
                    translation,
                    scale,
                    success: false,
                    corner_error_px: None,
                    inlier_count: None,
                    error: None,
                };
                match outcome {
                    Ok((err_px, inliers)) => {
                        cell.success = true;
                        cell.corner_error_px = Some(err_px);
                        cell.inlier_count = Some(inliers);
                    }
                    Err(e) => cell.error = Some(e.to_string()),
                }
                cells.push(cell);
            }
        }
    }

    let succeeded = cells.iter().filter(|c| c.success).count();
    let errors: Vec<f64> = cells.iter().filter_map(|c| c.corner_error_px).collect();
    let summary = StressSummary {
        cells: cells.len(),
        succeeded,
        max_corner_error_px: errors.iter().cloned().reduce(f64::max),
        mean_corner_error_px: if errors.is_empty() {
            None
        } else {
            Some(errors.iter().sum::<f64>() / errors.len() as f64)
        },
    };
    Ok(StressReport { cells, summary })
}

fn run_cell(
    template: &GrayImage,
    template_words: Option<&OcrPage>,
    config: &PipelineConfig,
    params: &PerturbationParams,
) -> Result<(f64, usize), PipelineError> {
    let canvas = config.canvas;
    let (test, _true_h) = perturb_document(template, params)
        .map_err(|e| PipelineError::Input(format!("perturbation: {e}")))?;
    let forward = crate::synth::make_homography(params, canvas.width, canvas.height)
        .map_err(|e| PipelineError::Input(format!("perturbation: {e}")))?;

    // Ground-truth boxes for the warped page: template boxes carried
    // through the forward map. Words that leave the canvas are dropped
    // whole; a clipped word would produce broken components anyway.
    let test_words = template_words.map(|page| {
        let words = page
            .words
            .iter()
            .filter_map(|w| {
                let mapped = map_single_box(&w.box_, &forward)?;
                let inside = mapped.x >= 0
                    && mapped.y >= 0
                    && mapped.x as i64 + mapped.w as i64 <= canvas.width as i64
                    && mapped.y as i64 + mapped.h as i64 <= canvas.height as i64;
                inside.then(|| WordBox {
                    text: w.text.clone(),
                    box_: mapped,
                    confidence: w.confidence,
                })
            })
            .collect();
        OcrPage::new(words, canvas.width, canvas.height).expect("boxes checked against canvas")
    });

    let out = align_pages(template, template_words, &test, test_words.as_ref(), config)?;
    let err_px = corner_error(&out.report.estimate.homography, &forward, canvas)
        .map_err(PipelineError::Estimate)?;
    Ok((err_px, out.report.estimate.inlier_count))
}

fn map_single_box(b: &Rect, h: &Homography) -> Option<Rect> {
    let corners = [
        Point::new(b.x as f64, b.y as f64),
        Point::new(b.x as f64 + b.w as f64, b.y as f64),
        Point::new(b.x as f64, b.y as f64 + b.h as f64),
        Point::new(b.x as f64 + b.w as f64, b.y as f64 + b.h as f64),
    ];
    let mut x0 = f64::INFINITY;
    let mut y0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for c in corners {
        let p = h.apply_point(c).ok()?;
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let (x0, y0, x1, y1) = (x0.floor(), y0.floor(), x1.ceil(), y1.ceil());
    let w = (x1 - x0) as i64;
    let h_px = (y1 - y0) as i64;
    if w < 1 || h_px < 1 || !x0.is_finite() || !y0.is_finite() {
        return None;
    }
    Some(Rect::new(x0 as i32, y0 as i32, w as u32, h_px as u32))
}

/// Formats a one-line human summary of a report, used by the CLI.
pub fn summarize_report(report: &AlignmentReport) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "matched {} words, {} correspondences, {} inliers, mean error {:.3} px, xor residual {:.5}",
        report.matched_word_count,
        report.correspondence_count,
        report.estimate.inlier_count,
        report.estimate.mean_inlier_reproj_error,
        report.xor_residual,
    );
    s
}
