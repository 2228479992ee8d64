//! Word matching across pages and keypoint correspondence assembly.
//!
//! A word's identity is its text; repeated texts are disambiguated by the
//! bag of words around them. Form pages repeat labels constantly ("Name",
//! "Date"), but the words near each occurrence differ, so the bag acts as
//! a cheap positional fingerprint that survives rotation and scaling.

use std::collections::HashMap;

use crate::keypoint::{
    filter_eligible_words, word_keypoints, CharTipTable, EligibilityParams, KeypointError,
    TipClass,
};
use crate::ocr::{Lexicon, OcrPage, WordBox};
use crate::raster::{BinaryImage, Point};

/// Disambiguation settings. The radius is in template-image pixels; both
/// pages sit on the same canvas, so one radius serves both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodParams {
    pub radius: f64,
    pub overlap_threshold: f64,
}

impl NeighborhoodParams {
    /// Radius of a tenth of the page width, threshold 90%.
    pub fn for_page_width(page_w: u32) -> Self {
        NeighborhoodParams {
            radius: 0.1 * page_w as f64,
            overlap_threshold: 0.90,
        }
    }
}

impl Default for NeighborhoodParams {
    fn default() -> Self {
        NeighborhoodParams::for_page_width(1600)
    }
}

/// A template word resolved to its counterpart in the test page.
#[derive(Debug, Clone, PartialEq)]
pub struct WordMatch {
    pub template_word: WordBox,
    pub test_word: WordBox,
    /// Fraction of the template neighborhood found near the candidate;
    /// at least the overlap threshold by construction.
    pub score: f64,
}

/// One matched pair of tip locations: `test_pt` in the test frame should
/// map onto `template_pt` under the homography being estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    pub template_pt: Point,
    pub test_pt: Point,
    pub tip: TipClass,
    pub word_text: String,
}

/// Lowercased texts of all other words whose centroid lies within `radius`
/// of the center word's centroid, with multiplicity.
pub fn neighborhood_bag(
    page: &OcrPage,
    center: &WordBox,
    radius: f64,
) -> HashMap<String, u32> {
    let origin = center.box_.centroid();
    let mut bag = HashMap::new();
    for word in &page.words {
        if word.text == center.text && word.box_ == center.box_ {
            continue;
        }
        if word.box_.centroid().distance(origin) <= radius {
            *bag.entry(word.text.to_lowercase()).or_insert(0) += 1;
        }
    }
    bag
}

fn bag_total(bag: &HashMap<String, u32>) -> u64 {
    bag.values().map(|&n| n as u64).sum()
}

fn bag_overlap(a: &HashMap<String, u32>, b: &HashMap<String, u32>) -> u64 {
    a.iter()
        .map(|(text, &n)| n.min(b.get(text).copied().unwrap_or(0)) as u64)
        .sum()
}

fn occurrences(page: &OcrPage, text: &str) -> usize {
    page.words.iter().filter(|w| w.text == text).count()
}

/// Finds the test-page occurrence of `template_word`, if any is
/// unambiguous.
///
/// Candidates share the exact text; each is scored by how much of the
/// template neighborhood it reproduces. The winner must clear the overlap
/// threshold and beat every rival outright; a tied top score stays
/// unmatched. A template word with an empty neighborhood can only match
/// when its text is globally unique on both pages.
pub fn match_word(
    template_page: &OcrPage,
    template_word: &WordBox,
    test_page: &OcrPage,
    params: &NeighborhoodParams,
) -> Option<WordMatch> {
    assert!(params.radius > 0.0);
    assert!(params.overlap_threshold > 0.0 && params.overlap_threshold <= 1.0);

    let candidates: Vec<&WordBox> = test_page
        .words
        .iter()
        .filter(|w| w.text == template_word.text)
        .collect();
    if candidates.is_empty() {
        return None;
    }

    let template_bag = neighborhood_bag(template_page, template_word, params.radius);
    let template_total = bag_total(&template_bag);

    if template_total == 0 {
        let unique_here = occurrences(template_page, &template_word.text) == 1;
        if unique_here && candidates.len() == 1 {
            return Some(WordMatch {
                template_word: template_word.clone(),
                test_word: candidates[0].clone(),
                score: 1.0,
            });
        }
        return None;
    }

    let mut best: Option<(&WordBox, f64)> = None;
    let mut tied = false;
    for candidate in candidates {
        let bag = neighborhood_bag(test_page, candidate, params.radius);
        let score = bag_overlap(&template_bag, &bag) as f64 / template_total as f64;
        if score < params.overlap_threshold {
            continue;
        }
        match best {
            None => best = Some((candidate, score)),
            Some((_, top)) if score > top => {
                best = Some((candidate, score));
                tied = false;
            }
            Some((_, top)) if score == top => tied = true,
            Some(_) => {}
        }
    }
    match best {
        Some((word, score)) if !tied => Some(WordMatch {
            template_word: template_word.clone(),
            test_word: word.clone(),
            score,
        }),
        _ => None,
    }
}

/// Matches every eligible template word against the test page.
pub fn eligible_matches(
    template_page: &OcrPage,
    test_page: &OcrPage,
    lex: &Lexicon,
    eparams: &EligibilityParams,
    nparams: &NeighborhoodParams,
) -> Vec<WordMatch> {
    filter_eligible_words(template_page, lex, eparams)
        .iter()
        .filter_map(|word| match_word(template_page, word, test_page, nparams))
        .collect()
}

/// Expands word matches into tip-level point pairs.
///
/// Each side extracts its own keypoints; a pair forms only when the same
/// (tip, word end) shows up on both sides, so a tip lost to noise on one
/// side silently drops its partner.
pub fn correspondences_from_matches(
    template_bin: &BinaryImage,
    test_bin: &BinaryImage,
    matches: &[WordMatch],
    table: &CharTipTable,
) -> Result<Vec<Correspondence>, KeypointError> {
    let mut out = Vec::new();
    for m in matches {
        let from_template = word_keypoints(template_bin, &m.template_word, table)?;
        let from_test = word_keypoints(test_bin, &m.test_word, table)?;
        for kt in &from_template {
            let partner = from_test
                .iter()
                .find(|ku| ku.tip == kt.tip && ku.word_end == kt.word_end);
            if let Some(ku) = partner {
                out.push(Correspondence {
                    template_pt: kt.location,
                    test_pt: ku.location,
                    tip: kt.tip,
                    word_text: m.template_word.text.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// The full matching stage: eligible template words, disambiguated against
/// the test page, expanded to keypoint pairs.
pub fn build_correspondences(
    template: (&BinaryImage, &OcrPage),
    test: (&BinaryImage, &OcrPage),
    table: &CharTipTable,
    eparams: &EligibilityParams,
    nparams: &NeighborhoodParams,
    lex: &Lexicon,
) -> Result<Vec<Correspondence>, KeypointError> {
    let matches = eligible_matches(template.1, test.1, lex, eparams, nparams);
    correspondences_from_matches(template.0, test.0, &matches, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{binarize, Rect};
    use crate::synth::{render_document, DocumentLayout, GlyphSet, PlacedWord};

    fn word(text: &str, x: i32, y: i32) -> WordBox {
        WordBox {
            text: text.into(),
            box_: Rect::new(x, y, 10, 10),
            confidence: 100.0,
        }
    }

    fn page_of(words: Vec<WordBox>) -> OcrPage {
        OcrPage::new(words, 1600, 2400).unwrap()
    }

    #[test]
    fn bag_collects_only_words_within_radius() {
        // Center at (105, 105); neighbors at controlled distances.
        let center = word("Hub", 100, 100);
        let page = page_of(vec![
            center.clone(),
            word("near", 150, 100),  // 50 away
            word("close", 100, 180), // 80 away
            word("the", 40, 100),    // 60 away
            word("the", 100, 40),    // 60 away
            word("far", 400, 100),   // 300 away
            word("away", 100, 500),  // 395 away
        ]);
        let bag = neighborhood_bag(&page, &center, 100.0);
        assert_eq!(bag.get("near"), Some(&1));
        assert_eq!(bag.get("close"), Some(&1));
        assert_eq!(bag.get("the"), Some(&2));
        assert_eq!(bag.get("far"), None);
        assert_eq!(bag_total(&bag), 4);
    }

    #[test]
    fn bag_excludes_the_center_but_not_its_twins() {
        let center = word("Name", 100, 100);
        let twin = word("Name", 140, 100);
        let page = page_of(vec![center.clone(), twin]);
        let bag = neighborhood_bag(&page, &center, 100.0);
        assert_eq!(bag.get("name"), Some(&1));
    }

    #[test]
    fn isolated_word_has_an_empty_bag() {
        let center = word("Lone", 100, 100);
        let page = page_of(vec![center.clone(), word("far", 900, 900)]);
        assert!(neighborhood_bag(&page, &center, 100.0).is_empty());
    }

    /// Template "Hospital" with `total` neighbors; the test page keeps
    /// `kept` of them. Both pages place the word at the same spot.
    fn hospital_pages(total: usize, kept: usize) -> (OcrPage, WordBox, OcrPage) {
        let tpl_word = word("Hospital", 500, 500);
        let mut tpl_words = vec![tpl_word.clone()];
        let mut test_words = vec![tpl_word.clone()];
        for i in 0..total {
            let neighbor = word(&format!("n{i}"), 440 + 14 * i as i32, 460);
            tpl_words.push(neighbor.clone());
            if i < kept {
                test_words.push(neighbor);
            }
        }
        (page_of(tpl_words), tpl_word, page_of(test_words))
    }

    #[test]
    fn nine_of_ten_neighbors_scores_point_nine() {
        let (tpl, tpl_word, test) = hospital_pages(10, 9);
        let params = NeighborhoodParams {
            radius: 160.0,
            overlap_threshold: 0.90,
        };
        let m = match_word(&tpl, &tpl_word, &test, &params).unwrap();
        assert!((m.score - 0.9).abs() < 1e-12);
        assert_eq!(m.test_word.box_, tpl_word.box_);
    }

    #[test]
    fn eight_of_ten_neighbors_is_below_threshold() {
        let (tpl, tpl_word, test) = hospital_pages(10, 8);
        let params = NeighborhoodParams {
            radius: 160.0,
            overlap_threshold: 0.90,
        };
        assert!(match_word(&tpl, &tpl_word, &test, &params).is_none());
    }

    #[test]
    fn repeated_word_resolves_to_the_right_neighborhood() {
        // Template "Name" sits near picket words; the test page has two
        // "Name"s, one with the same picket and one surrounded by noise.
        let tpl_name = word("Name", 200, 200);
        let tpl = page_of(vec![
            tpl_name.clone(),
            word("first", 260, 200),
            word("last", 200, 260),
        ]);
        let test = page_of(vec![
            word("Name", 200, 200),
            word("first", 260, 200),
            word("last", 200, 260),
            word("Name", 900, 900),
            word("phone", 960, 900),
            word("photo", 900, 960),
        ]);
        let m = match_word(&tpl, &tpl_name, &test, &NeighborhoodParams::default()).unwrap();
        assert_eq!(m.test_word.box_, Rect::new(200, 200, 10, 10));
        assert!((m.score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perfectly_tied_candidates_match_nothing() {
        let tpl_name = word("Name", 200, 200);
        let tpl = page_of(vec![
            tpl_name.clone(),
            word("first", 260, 200),
        ]);
        // Both test occurrences reproduce the full template bag.
        let test = page_of(vec![
            word("Name", 200, 200),
            word("first", 260, 200),
            word("Name", 900, 900),
            word("first", 960, 900),
        ]);
        assert!(match_word(&tpl, &tpl_name, &test, &NeighborhoodParams::default()).is_none());
    }

    #[test]
    fn text_missing_from_the_test_page_matches_nothing() {
        let tpl_word = word("Unique", 100, 100);
        let tpl = page_of(vec![tpl_word.clone()]);
        let test = page_of(vec![word("Other", 100, 100)]);
        assert!(match_word(&tpl, &tpl_word, &test, &NeighborhoodParams::default()).is_none());
    }

    #[test]
    fn empty_bag_falls_back_to_global_uniqueness() {
        let lone = word("Lone", 100, 100);
        let tpl = page_of(vec![lone.clone()]);
        let params = NeighborhoodParams::default();

        let test_once = page_of(vec![word("Lone", 700, 900)]);
        let m = match_word(&tpl, &lone, &test_once, &params).unwrap();
        assert_eq!(m.score, 1.0);
        assert_eq!(m.test_word.box_, Rect::new(700, 900, 10, 10));

        let test_twice = page_of(vec![word("Lone", 700, 900), word("Lone", 100, 100)]);
        assert!(match_word(&tpl, &lone, &test_twice, &params).is_none());
    }

    fn rendered(layout: &DocumentLayout) -> (BinaryImage, OcrPage) {
        let (page, sidecar) = render_document(layout, GlyphSet::embedded()).unwrap();
        (binarize(&page, 170), sidecar)
    }

    fn spread_layout(dx: f64, dy: f64) -> DocumentLayout {
        DocumentLayout {
            page_w: 1600,
            page_h: 1200,
            words: vec![
                PlacedWord::new("Value", 100.0 + dx, 100.0 + dy, 2.0),
                PlacedWord::new("Take", 700.0 + dx, 300.0 + dy, 2.0),
                PlacedWord::new("Worker", 300.0 + dx, 700.0 + dy, 2.0),
                PlacedWord::new("Amount", 1000.0 + dx, 800.0 + dy, 2.0),
                PlacedWord::new("Yearly", 1100.0 + dx, 100.0 + dy, 2.0),
            ],
            fields: Vec::new(),
        }
    }

    #[test]
    fn self_alignment_pins_every_tip_to_itself() {
        let (bin, page) = rendered(&spread_layout(0.0, 0.0));
        let corr = build_correspondences(
            (&bin, &page),
            (&bin, &page),
            &CharTipTable::default(),
            &EligibilityParams::default(),
            &NeighborhoodParams::for_page_width(1600),
            &Lexicon::builtin(),
        )
        .unwrap();
        // Every word leads with a listed capital, so each yields at least
        // one pair.
        assert!(corr.len() >= 5, "got {}", corr.len());
        for c in &corr {
            assert_eq!(c.template_pt, c.test_pt, "{}", c.word_text);
        }
    }

    #[test]
    fn integer_translation_shifts_every_correspondence_exactly() {
        let (tpl_bin, tpl_page) = rendered(&spread_layout(0.0, 0.0));
        let (test_bin, test_page) = rendered(&spread_layout(23.0, 41.0));
        let corr = build_correspondences(
            (&tpl_bin, &tpl_page),
            (&test_bin, &test_page),
            &CharTipTable::default(),
            &EligibilityParams::default(),
            &NeighborhoodParams::for_page_width(1600),
            &Lexicon::builtin(),
        )
        .unwrap();
        assert!(corr.len() >= 5);
        for c in &corr {
            assert_eq!(c.test_pt.x - c.template_pt.x, 23.0, "{}", c.word_text);
            assert_eq!(c.test_pt.y - c.template_pt.y, 41.0, "{}", c.word_text);
        }
    }

    #[test]
    fn template_without_eligible_words_yields_nothing() {
        let layout = DocumentLayout {
            page_w: 400,
            page_h: 300,
            words: vec![PlacedWord::new("zz", 50.0, 50.0, 1.0)],
            fields: Vec::new(),
        };
        let (bin, page) = rendered(&layout);
        let corr = build_correspondences(
            (&bin, &page),
            (&bin, &page),
            &CharTipTable::default(),
            &EligibilityParams::default(),
            &NeighborhoodParams::default(),
            &Lexicon::builtin(),
        )
        .unwrap();
        assert!(corr.is_empty());
    }
}
