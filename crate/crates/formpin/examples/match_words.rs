//! Demonstrates word matching under repetition: identical labels are told
//! apart by the bag of words around them, and a perfect tie refuses to
//! guess.
//!
//! Run with `cargo run --example match_words`.

use formpin::correspond::{match_word, neighborhood_bag, NeighborhoodParams};
use formpin::ocr::OcrPage;
use formpin::synth::{render_document, DocumentLayout, GlyphSet, PlacedWord};

fn page(words: &[(&str, f64, f64)]) -> OcrPage {
    let layout = DocumentLayout {
        page_w: 1600,
        page_h: 1200,
        words: words
            .iter()
            .map(|&(t, x, y)| PlacedWord::new(t, x, y, 1.0))
            .collect(),
        fields: Vec::new(),
    };
    render_document(&layout, GlyphSet::embedded()).unwrap().1
}

fn main() {
    let params = NeighborhoodParams {
        radius: 160.0,
        overlap_threshold: 0.90,
    };

    // Two "Name" labels, each fingerprinted by different neighbors.
    let spec = [
        ("Name", 200.0, 200.0),
        ("Date", 150.0, 150.0),
        ("Total", 300.0, 150.0),
        ("Name", 1200.0, 900.0),
        ("City", 1150.0, 850.0),
        ("Phone", 1150.0, 960.0),
    ];
    let template = page(&spec);
    let shifted: Vec<(&str, f64, f64)> =
        spec.iter().map(|&(t, x, y)| (t, x + 30.0, y + 20.0)).collect();
    let test = page(&shifted);

    for word in template.words.iter().filter(|w| w.text == "Name") {
        let bag = neighborhood_bag(&template, word, params.radius);
        let mut near: Vec<&str> = bag.keys().map(String::as_str).collect();
        near.sort_unstable();
        match match_word(&template, word, &test, &params) {
            Some(m) => println!(
                "\"Name\" at {:?} (near {:?}) -> test box {:?}, score {:.2}",
                word.box_, near, m.test_word.box_, m.score
            ),
            None => println!("\"Name\" at {:?} (near {:?}) -> no match", word.box_, near),
        }
    }

    // Identical neighborhoods on both occurrences: the tie is left
    // unresolved rather than matched arbitrarily.
    let tie = [
        ("Name", 200.0, 200.0),
        ("Date", 150.0, 150.0),
        ("Name", 1200.0, 900.0),
        ("Date", 1150.0, 850.0),
    ];
    let tie_template = page(&tie);
    let tie_test = page(&tie);
    let unresolved = match_word(&tie_template, &tie_template.words[0], &tie_test, &params);
    println!("two \"Name\"s with identical neighborhoods -> {unresolved:?}");
}
