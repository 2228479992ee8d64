//! Character-tip keypoints.
//!
//! Words whose first or last character has a pointed, unambiguous extremity
//! (the apex of 'A', the foot of 'L', the vertex of 'V') yield repeatable
//! sub-pixel landmarks: label the components inside the word box, take the
//! leftmost or rightmost one, and read off the extremal ink pixel. Curved
//! glyphs never qualify because their extremum slides along the outline.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ocr::{Lexicon, OcrPage, WordBox};
use crate::raster::{connected_components, BinaryImage, Point, RasterError, Rect};

/// Which extremity of a component a keypoint marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TipClass {
    Left,
    Right,
    Top,
    Bottom,
}

/// Whether a keypoint came from the word's first or last character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordEnd {
    First,
    Last,
}

#[derive(Debug, thiserror::Error)]
pub enum KeypointError {
    #[error("cannot take a tip of an empty component")]
    EmptyComponent,
    #[error("tip table {path}: {reason}")]
    Table { path: String, reason: String },
    #[error("character {0:?} has a curved outline and cannot serve as a tip")]
    CurvedChar(char),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

/// Characters whose extremal pixel is not a stable landmark.
const CURVED: [char; 7] = ['O', 'D', 'o', '0', 'Q', 'C', 'c'];

/// Which characters may anchor which tip, by word position. Membership is
/// case-sensitive: 'v' and 'V' have different geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharTipTable {
    beg: BTreeSet<char>,
    end: BTreeSet<char>,
    top: BTreeSet<char>,
    bottom: BTreeSet<char>,
}

#[derive(Deserialize)]
struct TipTableDto {
    beg: Vec<String>,
    end: Vec<String>,
    top: Vec<String>,
    bottom: Vec<String>,
}

impl Default for CharTipTable {
    fn default() -> Self {
        let set = |chars: &str| chars.chars().collect::<BTreeSet<char>>();
        CharTipTable {
            beg: set("AVTYMNWKXZ4vwxyzk"),
            end: set("VTLYKXZ7rxz"),
            top: set("AMVWTY14vwy"),
            bottom: set("VWvwyL"),
        }
    }
}

impl CharTipTable {
    pub fn new(
        beg: BTreeSet<char>,
        end: BTreeSet<char>,
        top: BTreeSet<char>,
        bottom: BTreeSet<char>,
    ) -> Result<Self, KeypointError> {
        let table = CharTipTable {
            beg,
            end,
            top,
            bottom,
        };
        for ch in CURVED {
            if table.lists_for(ch).is_some() {
                return Err(KeypointError::CurvedChar(ch));
            }
        }
        Ok(table)
    }

    /// Loads an override table from JSON: four arrays (`beg`, `end`, `top`,
    /// `bottom`) of single-character strings.
    pub fn from_path(path: &Path) -> Result<Self, KeypointError> {
        let fail = |reason: String| KeypointError::Table {
            path: path.display().to_string(),
            reason,
        };
        let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
        let dto: TipTableDto =
            serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
        let mut sets = [BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), BTreeSet::new()];
        for (set, entries) in sets.iter_mut().zip([dto.beg, dto.end, dto.top, dto.bottom]) {
            for entry in entries {
                let mut chars = entry.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => {
                        set.insert(ch);
                    }
                    _ => {
                        return Err(fail(format!(
                            "entry {entry:?} is not a single character"
                        )))
                    }
                }
            }
        }
        let [beg, end, top, bottom] = sets;
        CharTipTable::new(beg, end, top, bottom)
    }

    pub fn begins_word(&self, ch: char) -> bool {
        self.beg.contains(&ch)
    }

    pub fn ends_word(&self, ch: char) -> bool {
        self.end.contains(&ch)
    }

    pub fn has_top(&self, ch: char) -> bool {
        self.top.contains(&ch)
    }

    pub fn has_bottom(&self, ch: char) -> bool {
        self.bottom.contains(&ch)
    }

    fn lists_for(&self, ch: char) -> Option<()> {
        (self.beg.contains(&ch)
            || self.end.contains(&ch)
            || self.top.contains(&ch)
            || self.bottom.contains(&ch))
        .then_some(())
    }

    /// Every character any list mentions.
    pub fn all_chars(&self) -> BTreeSet<char> {
        self.beg
            .iter()
            .chain(&self.end)
            .chain(&self.top)
            .chain(&self.bottom)
            .copied()
            .collect()
    }
}

/// Filters for words worth extracting keypoints from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EligibilityParams {
    pub min_word_len: usize,
    pub min_box_height: u32,
    pub require_lexicon: bool,
}

impl Default for EligibilityParams {
    fn default() -> Self {
        EligibilityParams {
            min_word_len: 3,
            min_box_height: 12,
            require_lexicon: true,
        }
    }
}

/// A located character tip.
#[derive(Debug, Clone, PartialEq)]
pub struct Keypoint {
    pub location: Point,
    pub tip: TipClass,
    pub character: char,
    pub word_end: WordEnd,
    pub word_text: String,
    pub word_box: Rect,
}

/// Words long enough, tall enough, and (optionally) spelled correctly.
/// Short words and tiny print give unreliable components. Order preserved.
pub fn filter_eligible_words(
    page: &OcrPage,
    lex: &Lexicon,
    params: &EligibilityParams,
) -> Vec<WordBox> {
    assert!(params.min_word_len >= 1 && params.min_box_height >= 1);
    page.words
        .iter()
        .filter(|w| w.text.chars().count() >= params.min_word_len)
        .filter(|w| w.box_.h >= params.min_box_height)
        .filter(|w| !params.require_lexicon || lex.contains(&w.text))
        .cloned()
        .collect()
}

/// The extremal ink pixel of a component, as a pixel-center point.
///
/// Ties break toward the baseline for horizontal tips (max y) and toward
/// the left for vertical tips (min x), so feet and left corners win.
pub fn extract_tip(pixels: &[(u32, u32)], tip: TipClass) -> Result<Point, KeypointError> {
    let mut best: Option<(u32, u32)> = None;
    for &(x, y) in pixels {
        let better = match best {
            None => true,
            Some((bx, by)) => match tip {
                TipClass::Left => x < bx || (x == bx && y > by),
                TipClass::Right => x > bx || (x == bx && y > by),
                TipClass::Top => y < by || (y == by && x < bx),
                TipClass::Bottom => y > by || (y == by && x < bx),
            },
        };
        if better {
            best = Some((x, y));
        }
    }
    let (x, y) = best.ok_or(KeypointError::EmptyComponent)?;
    Ok(Point::new(x as f64 + 0.5, y as f64 + 0.5))
}

/// All keypoints a single word yields.
///
/// The leftmost component stands in for the first character and the
/// rightmost for the last; a character in several lists emits several
/// keypoints. A box with no usable components yields an empty list.
pub fn word_keypoints(
    bin: &BinaryImage,
    word: &WordBox,
    table: &CharTipTable,
) -> Result<Vec<Keypoint>, KeypointError> {
    let labeling = connected_components(bin, word.box_)?;

    // Thresholding debris: 1x1 flecks must not claim an end of the word.
    let solid: Vec<u32> = (1..=labeling.count() as u32)
        .filter(|&label| {
            let b = labeling.bounding_box(label);
            !(b.w < 2 && b.h < 2)
        })
        .collect();
    if solid.is_empty() {
        return Ok(Vec::new());
    }

    let leftmost = *solid
        .iter()
        .min_by_key(|&&label| labeling.bounding_box(label).x)
        .expect("nonempty");
    let rightmost = *solid
        .iter()
        .max_by_key(|&&label| {
            let b = labeling.bounding_box(label);
            b.x as i64 + b.w as i64
        })
        .expect("nonempty");

    let mut out = Vec::new();
    let mut emit = |label: u32, tip: TipClass, ch: char, end: WordEnd| -> Result<(), KeypointError> {
        let location = extract_tip(&labeling.pixels(label), tip)?;
        out.push(Keypoint {
            location,
            tip,
            character: ch,
            word_end: end,
            word_text: word.text.clone(),
            word_box: word.box_,
        });
        Ok(())
    };

    let first = word.text.chars().next();
    let last = word.text.chars().last();

    if let Some(ch) = first {
        if table.begins_word(ch) {
            emit(leftmost, TipClass::Left, ch, WordEnd::First)?;
        }
        if table.has_top(ch) {
            emit(leftmost, TipClass::Top, ch, WordEnd::First)?;
        }
        if table.has_bottom(ch) {
            emit(leftmost, TipClass::Bottom, ch, WordEnd::First)?;
        }
    }
    if let Some(ch) = last {
        if table.ends_word(ch) {
            emit(rightmost, TipClass::Right, ch, WordEnd::Last)?;
        }
        if table.has_top(ch) {
            emit(rightmost, TipClass::Top, ch, WordEnd::Last)?;
        }
        if table.has_bottom(ch) {
            emit(rightmost, TipClass::Bottom, ch, WordEnd::Last)?;
        }
    }
    Ok(out)
}
