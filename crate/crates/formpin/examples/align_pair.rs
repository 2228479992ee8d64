//! Full alignment round trip: render a form, warp it the way a bad scan
//! would, align the warp back onto the template, and compare the
//! recovered homography against the known ground truth.
//!
//! Run with `cargo run --example align_pair`.

use std::fs;

use formpin::homography::Homography;
use formpin::ocr::{OcrPage, WordBox};
use formpin::pipeline::{align_pages, summarize_report, PipelineConfig};
use formpin::raster::{save_image, Point, Rect};
use formpin::synth::{
    make_homography, perturb_document, render_document, sample_form_layout, GlyphSet,
    PerturbationParams,
};

/// Template word boxes carried through the forward warp (axis-aligned
/// hull), standing in for what an OCR engine would read off the test
/// page. Words pushed off the canvas are dropped whole.
fn mapped_sidecar(page: &OcrPage, forward: &Homography, w: u32, h: u32) -> OcrPage {
    let words = page
        .words
        .iter()
        .filter_map(|word| {
            let b = word.box_;
            let corners = [
                (b.x as f64, b.y as f64),
                (b.x as f64 + b.w as f64, b.y as f64),
                (b.x as f64, b.y as f64 + b.h as f64),
                (b.x as f64 + b.w as f64, b.y as f64 + b.h as f64),
            ];
            let mut x0 = f64::INFINITY;
            let mut y0 = f64::INFINITY;
            let mut x1 = f64::NEG_INFINITY;
            let mut y1 = f64::NEG_INFINITY;
            for (cx, cy) in corners {
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

    let layout = sample_form_layout(1600, 2400, 2.0);
    let (template, template_words) = render_document(&layout, GlyphSet::embedded()).unwrap();

    let params = PerturbationParams {
        rotation_deg: -4.0,
        translate_x: 0.12,
        translate_y: -0.08,
        scale_x: 1.3,
        scale_y: 1.3,
        ..PerturbationParams::default()
    };
    let (test, _) = perturb_document(&template, &params).unwrap();
    let forward = make_homography(&params, 1600, 2400).unwrap();
    let test_words = mapped_sidecar(&template_words, &forward, 1600, 2400);
    println!(
        "perturbation: rot {} deg, translate ({}, {}), scale {}; {} words stay on page",
        params.rotation_deg,
        params.translate_x,
        params.translate_y,
        params.scale_x,
        test_words.words.len(),
    );

    let out = align_pages(
        &template,
        Some(&template_words),
        &test,
        Some(&test_words),
        &PipelineConfig::default(),
    )
    .unwrap();
    println!("{}", summarize_report(&out.report));

    // Corner error: where the estimate and the truth disagree about the
    // template corners, measured on the warped page.
    let mut total = 0.0;
    for corner in [(0.0, 0.0), (1600.0, 0.0), (0.0, 2400.0), (1600.0, 2400.0)] {
        let moved = forward.apply_point(Point::new(corner.0, corner.1)).unwrap();
        let back = out.report.estimate.homography.apply_point(moved).unwrap();
        total += back.distance(Point::new(corner.0, corner.1));
    }
    println!("mean corner error vs ground truth: {:.3} px", total / 4.0);

    let aligned_path = dir.join("aligned.pgm");
    save_image(&aligned_path, &out.aligned).unwrap();
    println!("aligned page written to {}", aligned_path.display());
}
