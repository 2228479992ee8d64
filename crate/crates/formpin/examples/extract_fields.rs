//! Aligns a filled-in copy of a form back onto its blank template and
//! crops the annotated field regions out of the aligned page.
//!
//! Run with `cargo run --example extract_fields`.

use std::fs;

use formpin::homography::Homography;
use formpin::ocr::{OcrPage, WordBox};
use formpin::pipeline::{align_pages, extract_fields, PipelineConfig};
use formpin::raster::{save_image, Point, Rect};
use formpin::synth::{
    make_homography, perturb_document, render_document, sample_form_layout, GlyphSet,
    PerturbationParams, PlacedWord,
};

/// Word boxes carried through the forward warp (axis-aligned hull),
/// standing in for an OCR pass over the scanned page. Words pushed off
/// the canvas are dropped whole.
fn mapped_sidecar(page: &OcrPage, forward: &Homography, w: u32, h: u32) -> OcrPage {
    let words = page
        .words
        .iter()
        .filter_map(|word| {
            let b = word.box_;
            let mut x0 = f64::INFINITY;
            let mut y0 = f64::INFINITY;
            let mut x1 = f64::NEG_INFINITY;
            let mut y1 = f64::NEG_INFINITY;
            for (cx, cy) in [
                (b.x as f64, b.y as f64),
                (b.x as f64 + b.w as f64, b.y as f64),
                (b.x as f64, b.y as f64 + b.h as f64),
                (b.x as f64 + b.w as f64, b.y as f64 + b.h as f64),
            ] {
                let p = forward.apply_point(Point::new(cx, cy)).ok()?;
                x0 = x0.min(p.x);
                y0 = y0.min(p.y);
                x1 = x1.max(p.x);
                y1 = y1.max(p.y);
            }
            let rect = Rect::new(
                x0.floor() as i32,
                y0.floor() as i32,
                (x1.ceil() - x0.floor()) as u32,
                (y1.ceil() - y0.floor()) as u32,
            );
            let inside = rect.x >= 0
                && rect.y >= 0
                && rect.x as i64 + rect.w as i64 <= w as i64
                && rect.y as i64 + rect.h as i64 <= h as i64;
            inside.then(|| WordBox {
                text: word.text.clone(),
                box_: rect,
                confidence: word.confidence,
            })
        })
        .collect();
    OcrPage::new(words, w, h).unwrap()
}

fn main() {
    let dir = std::env::temp_dir().join("formpin_demo");
    fs::create_dir_all(&dir).unwrap();

    let template_layout = sample_form_layout(1600, 2400, 2.0);
    let (template, template_words) =
        render_document(&template_layout, GlyphSet::embedded()).unwrap();

    // The "scanned" page: the same form with entries written into its
    // three fields, then warped like a sloppy scan.
    let mut filled_layout = sample_form_layout(1600, 2400, 2.0);
    for (i, entry) in ["Rover", "June", "Seven"].iter().enumerate() {
        let region = filled_layout.fields[i].region;
        filled_layout.words.push(PlacedWord::new(
            *entry,
            region.x as f64 + 10.0,
            region.y as f64 + 8.0,
            3.0,
        ));
    }
    let (filled, filled_words) = render_document(&filled_layout, GlyphSet::embedded()).unwrap();
    let params = PerturbationParams {
        rotation_deg: 2.5,
        translate_x: -0.05,
        translate_y: 0.03,
        ..PerturbationParams::default()
    };
    let (scanned, _) = perturb_document(&filled, &params).unwrap();
    let forward = make_homography(&params, 1600, 2400).unwrap();
    let scanned_words = mapped_sidecar(&filled_words, &forward, 1600, 2400);

    let out = align_pages(
        &template,
        Some(&template_words),
        &scanned,
        Some(&scanned_words),
        &PipelineConfig::default(),
    )
    .unwrap();
    println!(
        "aligned with {} inliers, xor residual {:.5}",
        out.report.estimate.inlier_count, out.report.xor_residual
    );

    let crops = extract_fields(
        &out.aligned,
        &template_layout.fields,
        &PipelineConfig::default(),
        Some(&out.words_in_template_frame),
    )
    .unwrap();
    for crop in &crops {
        let path = dir.join(format!("field_{}.pgm", crop.annotation.name));
        save_image(&path, &crop.patch).unwrap();
        match &crop.recognized_text {
            Some(text) => println!(
                "field {:?} ({:?}): {} -> text {text:?}",
                crop.annotation.name,
                crop.annotation.kind,
                path.display()
            ),
            None => println!(
                "field {:?} ({:?}): {} (no text recognized)",
                crop.annotation.name,
                crop.annotation.kind,
                path.display()
            ),
        }
    }
}
