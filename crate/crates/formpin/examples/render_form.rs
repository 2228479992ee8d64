//! Renders the two bundled form layouts to disk: the 60-word sample form
//! with fill-in fields, and the 128-word high-density stress form.
//!
//! Run with `cargo run --example render_form`.

use std::fs;

use formpin::ocr::write_words_sidecar;
use formpin::raster::save_image;
use formpin::synth::{ink_fraction, render_document, sample_form_layout, stress_form_layout, GlyphSet};

fn main() {
    let dir = std::env::temp_dir().join("formpin_demo");
    fs::create_dir_all(&dir).unwrap();

    for (name, layout) in [
        ("sample_form", sample_form_layout(1600, 2400, 2.0)),
        ("stress_form", stress_form_layout(1600, 2400, 2.0)),
    ] {
        let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
        let image_path = dir.join(format!("{name}.pgm"));
        save_image(&image_path, &page).unwrap();
        write_words_sidecar(&dir.join(format!("{name}.json")), &words).unwrap();
        println!(
            "{}: {}x{}, {} words, {} fields, ink fraction {:.4}",
            image_path.display(),
            page.width(),
            page.height(),
            words.words.len(),
            layout.fields.len(),
            ink_fraction(&page, 170),
        );
    }
}
