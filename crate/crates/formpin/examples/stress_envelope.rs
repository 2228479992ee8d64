//! Sweeps a coarse perturbation grid over the bundled stress form and
//! prints per-cell registration accuracy. The full acceptance grid runs
//! 945 cells; this keeps a representative 60 so it finishes in seconds.
//!
//! Run with `cargo run --example stress_envelope`.

use std::fs;

use formpin::ocr::write_words_sidecar;
use formpin::pipeline::{stress_grid, PipelineConfig, StressGrid};
use formpin::raster::save_image;
use formpin::synth::{render_document, stress_form_layout, GlyphSet};

fn main() {
    let dir = std::env::temp_dir().join("formpin_demo");
    fs::create_dir_all(&dir).unwrap();

    let layout = stress_form_layout(1600, 2400, 2.0);
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let template = dir.join("stress_template.pgm");
    save_image(&template, &page).unwrap();
    write_words_sidecar(&dir.join("stress_template.json"), &words).unwrap();

    let grid = StressGrid {
        rotations_deg: vec![-7.0, -3.5, 0.0, 3.5, 7.0],
        translations: vec![-0.4, 0.0, 0.4],
        scales: vec![0.5, 1.0, 1.5, 2.0],
    };
    let started = std::time::Instant::now();
    let report = stress_grid(&template, &PipelineConfig::default(), &grid).unwrap();
    let elapsed = started.elapsed();

    println!("rotation  translation  scale   corner err  inliers");
    for cell in &report.cells {
        match cell.corner_error_px {
            Some(err) => println!(
                "{:+8.1}  {:+11.1}  {:5.2}  {:8.3} px  {:7}",
                cell.rotation_deg,
                cell.translation,
                cell.scale,
                err,
                cell.inlier_count.unwrap_or(0),
            ),
            None => println!(
                "{:+8.1}  {:+11.1}  {:5.2}  FAILED: {}",
                cell.rotation_deg,
                cell.translation,
                cell.scale,
                cell.error.as_deref().unwrap_or("unknown"),
            ),
        }
    }
    let s = &report.summary;
    println!(
        "\n{}/{} cells succeeded in {elapsed:.1?}; corner error mean {:.3} px, max {:.3} px",
        s.succeeded,
        s.cells,
        s.mean_corner_error_px.unwrap_or(f64::NAN),
        s.max_corner_error_px.unwrap_or(f64::NAN),
    );
}
