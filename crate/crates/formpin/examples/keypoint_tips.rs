//! Shows which characters carry usable tips and where those tips land on
//! rendered ink.
//!
//! Run with `cargo run --example keypoint_tips`.

use formpin::keypoint::{word_keypoints, CharTipTable};
use formpin::raster::binarize;
use formpin::synth::{render_document, DocumentLayout, GlyphSet, PlacedWord};

fn main() {
    let table = CharTipTable::default();

    println!("tip classes by character:");
    for ch in table.all_chars() {
        let mut classes = Vec::new();
        if table.begins_word(ch) {
            classes.push("left-of-word");
        }
        if table.ends_word(ch) {
            classes.push("right-of-word");
        }
        if table.has_top(ch) {
            classes.push("top");
        }
        if table.has_bottom(ch) {
            classes.push("bottom");
        }
        println!("  {ch}: {}", classes.join(", "));
    }

    // Tips are extracted per word from the first and last characters only;
    // interior characters never contribute.
    let layout = DocumentLayout {
        page_w: 400,
        page_h: 120,
        words: vec![PlacedWord::new("Actor", 40.0, 30.0, 2.0)],
        fields: Vec::new(),
    };
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let bin = binarize(&page, 170);
    let keypoints = word_keypoints(&bin, &words.words[0], &table).unwrap();

    println!("\nkeypoints of {:?} at box {:?}:", words.words[0].text, words.words[0].box_);
    for k in &keypoints {
        println!(
            "  {:?} tip of {:?} ({:?} char) at ({}, {})",
            k.tip, k.character, k.word_end, k.location.x, k.location.y
        );
    }
}
