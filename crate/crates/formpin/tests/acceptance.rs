//! End-to-end guarantees of the crate, one test per promise. Each test
//! asserts the documented tolerance and, where stated, a runtime budget.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formpin::correspond::{match_word, Correspondence, NeighborhoodParams};
use formpin::homography::{
    dlt, dlt_minimal, ransac_estimate, reprojection_error, Homography, RansacParams,
};
use formpin::keypoint::{CharTipTable, TipClass, word_keypoints};
use formpin::ocr::{parse_ocr_tsv, read_words_external, write_words_sidecar, OcrPage,
    OcrProcessConfig, WordBox};
use formpin::pipeline::{
    align_document, align_pages, stress_grid, PipelineConfig, StressGrid,
};
use formpin::raster::{binarize, load_image, save_image, GrayImage, Point, Rect};
use formpin::synth::{
    ink_fraction, make_homography, perturb_document, render_document, sample_form_layout,
    stress_form_layout, DocumentLayout, GlyphBitmap, GlyphSet, PerturbationParams, PlacedWord,
};

fn pair(test: (f64, f64), template: (f64, f64)) -> Correspondence {
    Correspondence {
        template_pt: Point::new(template.0, template.1),
        test_pt: Point::new(test.0, test.1),
        tip: TipClass::Left,
        word_text: String::new(),
    }
}

/// Oracle transform built from explicit matrix products rather than the
/// library's own composition helpers.
fn oracle_h(theta_deg: f64, sx: f64, sy: f64, tx: f64, ty: f64, p1: f64, p2: f64) -> Homography {
    let t = theta_deg.to_radians();
    let (s, c) = t.sin_cos();
    let affine = [[sx * c, -sx * s, tx], [sy * s, sy * c, ty], [0.0, 0.0, 1.0]];
    let tilt = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [p1, p2, 1.0]];
    let mut prod = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, tilt_row) in tilt.iter().enumerate() {
                prod[i][j] += affine[i][k] * tilt_row[j];
            }
        }
    }
    Homography::from_matrix(prod).unwrap()
}

fn random_oracle_h(rng: &mut impl Rng) -> Homography {
    oracle_h(
        rng.gen_range(-12.0..12.0),
        rng.gen_range(0.6..1.6),
        rng.gen_range(0.6..1.6),
        rng.gen_range(-250.0..250.0),
        rng.gen_range(-250.0..250.0),
        rng.gen_range(-1.5e-4..1.5e-4),
        rng.gen_range(-1.5e-4..1.5e-4),
    )
}

fn exact_pairs(h: &Homography, n: usize, rng: &mut impl Rng) -> Vec<Correspondence> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = Point::new(rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0));
        let Ok(q) = h.apply_point(p) else { continue };
        out.push(pair((p.x, p.y), (q.x, q.y)));
    }
    out
}

fn max_entry_rel_diff(a: &Homography, b: &Homography) -> f64 {
    let av = a.to_row_major();
    let bv = b.to_row_major();
    (0..9)
        .map(|i| (av[i] - bv[i]).abs() / av[i].abs().max(1.0))
        .fold(0.0, f64::max)
}

#[test]
fn dlt_recovers_500_seeded_homographies_within_1e6() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let truth = random_oracle_h(&mut rng);
        let corr = exact_pairs(&truth, 6, &mut rng);
        let estimated = dlt(&corr).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let diff = max_entry_rel_diff(&truth, &estimated);
        assert!(diff <= 1e-6, "trial {trial}: relative entry error {diff:.3e}");
        worst = worst.max(diff);
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("500 recoveries, worst relative entry error {worst:.3e}, {elapsed:?}");
}

#[test]
fn ransac_rejects_30_percent_contamination() {
    let started = Instant::now();
    let mut exact_sets = 0usize;
    for trial in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4200 + trial);
        let truth = random_oracle_h(&mut rng);
        let mut corr = exact_pairs(&truth, 21, &mut rng);
        let mut outliers = 0;
        while outliers < 9 {
            let c = pair(
                (rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0)),
                (rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0)),
            );
            // Keep outliers unambiguous: far from the true surface.
            if reprojection_error(&truth, &c).map_or(false, |e| e > 10.0) {
                corr.push(c);
                outliers += 1;
            }
        }
        let params = RansacParams {
            rng_seed: 7000 + trial,
            ..RansacParams::default()
        };
        let report = ransac_estimate(&corr, &params).unwrap();
        let expected: Vec<bool> = (0..30).map(|i| i < 21).collect();
        if report.inlier_mask == expected {
            exact_sets += 1;
            let diff = max_entry_rel_diff(&truth, &report.homography);
            assert!(diff <= 1e-6, "trial {trial}: relative entry error {diff:.3e}");
        }
    }
    let elapsed = started.elapsed();
    assert!(exact_sets >= 99, "exact inlier set in only {exact_sets}/100 trials");
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("exact inlier set in {exact_sets}/100 trials, {elapsed:?}");
}

#[test]
fn self_alignment_is_numerically_identity() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let layout = sample_form_layout(1600, 2400, 1.0);
    assert_eq!(layout.words.len(), 60);
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let path = dir.path().join("form.pgm");
    save_image(&path, &page).unwrap();
    write_words_sidecar(&dir.path().join("form.json"), &words).unwrap();

    let (_, report) = align_document(&path, &path, &PipelineConfig::default()).unwrap();
    let h = report.estimate.homography.entries();
    let mut max_dev = 0.0f64;
    for r in 0..3 {
        for c in 0..3 {
            let expect = if r == c { 1.0 } else { 0.0 };
            max_dev = max_dev.max((h[r][c] - expect).abs());
        }
    }
    let elapsed = started.elapsed();
    assert!(max_dev < 1e-4, "max |H - I| entry = {max_dev:.3e}");
    assert!(report.xor_residual < 0.001, "xor residual {}", report.xor_residual);
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    println!(
        "max |H - I| = {max_dev:.3e}, xor residual {:.6}, {elapsed:?}",
        report.xor_residual
    );
}

fn axis(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect()
}

#[test]
fn stress_envelope_sweep_succeeds_everywhere() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let layout = stress_form_layout(1600, 2400, 2.0);
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let path = dir.path().join("form.pgm");
    save_image(&path, &page).unwrap();
    write_words_sidecar(&dir.path().join("form.json"), &words).unwrap();

    let grid = StressGrid {
        rotations_deg: axis(-7.0, 1.0, 15),
        translations: axis(-0.4, 0.1, 9),
        scales: axis(0.5, 0.25, 7),
    };
    let report = stress_grid(&path, &PipelineConfig::default(), &grid).unwrap();
    let elapsed = started.elapsed();

    assert_eq!(report.summary.cells, 15 * 9 * 7);
    for cell in &report.cells {
        assert!(
            cell.success,
            "cell rot {} trans {} scale {} failed: {:?}",
            cell.rotation_deg, cell.translation, cell.scale, cell.error
        );
        let err = cell.corner_error_px.unwrap();
        assert!(
            err < 2.0,
            "cell rot {} trans {} scale {}: corner error {err:.3} px",
            cell.rotation_deg, cell.translation, cell.scale
        );
    }
    let mean = report.summary.mean_corner_error_px.unwrap();
    let max = report.summary.max_corner_error_px.unwrap();
    assert!(elapsed < Duration::from_secs(180), "took {elapsed:?}");
    println!(
        "{} cells, corner error mean {mean:.3} px max {max:.3} px, {elapsed:?}",
        report.summary.cells
    );
}

/// Extremal ink pixel of a glyph bitmap under the documented tie rules,
/// found by brute-force scan.
fn bitmap_extremum(glyph: &GlyphBitmap, tip: TipClass) -> (u32, u32) {
    let mut best: Option<(u32, u32)> = None;
    for y in 0..glyph.height() {
        for x in 0..glyph.width() {
            if !glyph.ink_at(x, y) {
                continue;
            }
            best = Some(match best {
                None => (x, y),
                Some((bx, by)) => {
                    let wins = match tip {
                        TipClass::Left => x < bx || (x == bx && y > by),
                        TipClass::Right => x > bx || (x == bx && y > by),
                        TipClass::Top => y < by || (y == by && x < bx),
                        TipClass::Bottom => y > by || (y == by && x < bx),
                    };
                    if wins {
                        (x, y)
                    } else {
                        (bx, by)
                    }
                }
            });
        }
    }
    best.expect("glyph has ink")
}

fn single_char_keypoints(ch: char, anchor: (u32, u32)) -> Vec<formpin::keypoint::Keypoint> {
    let layout = DocumentLayout {
        page_w: 260,
        page_h: 160,
        words: vec![PlacedWord::new(ch.to_string(), anchor.0 as f64, anchor.1 as f64, 1.0)],
        fields: Vec::new(),
    };
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let bin = binarize(&page, 170);
    word_keypoints(&bin, &words.words[0], &CharTipTable::default()).unwrap()
}

#[test]
fn tips_match_bitmap_extrema_and_translate_exactly() {
    let table = CharTipTable::default();
    let glyphs = GlyphSet::embedded();
    let anchor = (37u32, 29u32);
    let mut checked = 0usize;

    for ch in table.all_chars() {
        let glyph = glyphs.glyph(ch).expect("table characters have glyphs");
        let keypoints = single_char_keypoints(ch, anchor);
        assert!(!keypoints.is_empty(), "{ch:?} produced no keypoints");

        let mut expected_tips = Vec::new();
        if table.begins_word(ch) {
            expected_tips.push(TipClass::Left);
        }
        if table.ends_word(ch) {
            expected_tips.push(TipClass::Right);
        }
        if table.has_top(ch) {
            expected_tips.push(TipClass::Top);
        }
        if table.has_bottom(ch) {
            expected_tips.push(TipClass::Bottom);
        }
        for tip in expected_tips {
            let (gx, gy) = bitmap_extremum(glyph, tip);
            let want = Point::new(
                (anchor.0 + gx) as f64 + 0.5,
                (anchor.1 + gy) as f64 + 0.5,
            );
            let found = keypoints.iter().filter(|k| k.tip == tip).count();
            assert!(found > 0, "{ch:?}: no {tip:?} keypoint");
            for k in keypoints.iter().filter(|k| k.tip == tip) {
                assert_eq!(k.location, want, "{ch:?} {tip:?}");
                checked += 1;
            }
        }

        // Integer translation of the page moves every keypoint exactly.
        for (dx, dy) in [(3u32, 5u32), (40, 23), (101, 57)] {
            let moved = single_char_keypoints(ch, (anchor.0 + dx, anchor.1 + dy));
            assert_eq!(moved.len(), keypoints.len(), "{ch:?} +({dx},{dy})");
            for (a, b) in keypoints.iter().zip(moved.iter()) {
                assert_eq!(a.tip, b.tip);
                assert_eq!(
                    Point::new(a.location.x + dx as f64, a.location.y + dy as f64),
                    b.location,
                    "{ch:?} {:?} +({dx},{dy})",
                    a.tip
                );
            }
        }
    }
    println!("{checked} tip locations verified against bitmap scans");
}

fn page_of(words: Vec<(&str, f64, f64)>, w: u32, h: u32) -> (OcrPage, Vec<WordBox>) {
    let layout = DocumentLayout {
        page_w: w,
        page_h: h,
        words: words
            .into_iter()
            .map(|(t, x, y)| PlacedWord::new(t, x, y, 1.0))
            .collect(),
        fields: Vec::new(),
    };
    let (_, page) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let boxes = page.words.clone();
    (page, boxes)
}

#[test]
fn repeated_word_resolved_by_neighborhood_and_tie_yields_none() {
    let params = NeighborhoodParams {
        radius: 160.0,
        overlap_threshold: 0.90,
    };
    // Two "Name" instances, each surrounded by its own picket of words.
    let spec = vec![
        ("Name", 200.0, 200.0),
        ("Date", 150.0, 150.0),
        ("Total", 300.0, 150.0),
        ("Amount", 150.0, 260.0),
        ("Name", 1200.0, 900.0),
        ("City", 1150.0, 850.0),
        ("State", 1300.0, 850.0),
        ("Phone", 1150.0, 960.0),
    ];
    let (template, tboxes) = page_of(spec.clone(), 1600, 1200);
    let shifted: Vec<(&str, f64, f64)> =
        spec.iter().map(|&(t, x, y)| (t, x + 25.0, y + 15.0)).collect();
    let (test, xboxes) = page_of(shifted, 1600, 1200);

    for (idx, other_idx) in [(0usize, 4usize), (4, 0)] {
        let m = match_word(&template, &tboxes[idx], &test, &params)
            .unwrap_or_else(|| panic!("instance at index {idx} unmatched"));
        assert!(m.score >= 0.9, "score {}", m.score);
        assert_eq!(m.test_word.box_, xboxes[idx].box_, "wrong instance chosen");
        assert_ne!(m.test_word.box_, xboxes[other_idx].box_);
        // And the same resolution works from the test page's side.
        let back = match_word(&test, &xboxes[idx], &template, &params).unwrap();
        assert_eq!(back.test_word.box_, tboxes[idx].box_);
    }

    // Identical neighborhoods: a perfect tie must refuse to choose.
    let tie = vec![
        ("Name", 200.0, 200.0),
        ("Date", 150.0, 150.0),
        ("Total", 300.0, 150.0),
        ("Name", 1200.0, 900.0),
        ("Date", 1150.0, 850.0),
        ("Total", 1300.0, 850.0),
    ];
    let (tie_template, tie_boxes) = page_of(tie.clone(), 1600, 1200);
    let (tie_test, _) = page_of(tie, 1600, 1200);
    assert!(match_word(&tie_template, &tie_boxes[0], &tie_test, &params).is_none());
    println!("both instances resolved with score >= 0.9; tie produced no match");
}

#[test]
fn xor_residual_stays_within_fill_fraction_band() {
    let template_layout = sample_form_layout(1600, 2400, 1.0);
    let (template, template_words) =
        render_document(&template_layout, GlyphSet::embedded()).unwrap();

    let mut filled_layout = sample_form_layout(1600, 2400, 1.0);
    for (i, entry) in ["Rover", "June", "Seven"].iter().enumerate() {
        let region = filled_layout.fields[i].region;
        filled_layout.words.push(PlacedWord::new(
            *entry,
            region.x as f64 + 10.0,
            region.y as f64 + 8.0,
            4.0,
        ));
    }
    let (filled, filled_words) = render_document(&filled_layout, GlyphSet::embedded()).unwrap();
    let fill_fraction = ink_fraction(&filled, 170) - ink_fraction(&template, 170);
    assert!(fill_fraction > 0.001, "fill fraction {fill_fraction}");

    let out = align_pages(
        &template,
        Some(&template_words),
        &filled,
        Some(&filled_words),
        &PipelineConfig::default(),
    )
    .unwrap();
    let low = fill_fraction - 0.005;
    let high = fill_fraction + 0.02;
    assert!(
        out.report.xor_residual >= low && out.report.xor_residual <= high,
        "xor residual {} outside [{low}, {high}]",
        out.report.xor_residual
    );
    println!(
        "fill fraction {fill_fraction:.5}, xor residual {:.5}",
        out.report.xor_residual
    );
}

#[test]
fn minimal_and_nullspace_solvers_agree_on_200_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8100);
    let mut done = 0usize;
    let mut worst = 0.0f64;
    while done < 200 {
        let truth = random_oracle_h(&mut rng);
        let corr = exact_pairs(&truth, 4, &mut rng);
        // Nearly collinear template triples are rejected by both solvers;
        // such draws do not count as instances.
        let (Ok(a), Ok(b)) = (dlt_minimal(&corr), dlt(&corr)) else {
            continue;
        };
        let diff = max_entry_rel_diff(&a, &b);
        assert!(diff <= 1e-8, "instance {done}: relative entry gap {diff:.3e}");
        worst = worst.max(diff);
        done += 1;
    }
    println!("200 instances, worst relative entry gap {worst:.3e}");
}

#[test]
fn stored_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();

    // Grayscale image bytes survive a save/load cycle bit for bit.
    let mut data = Vec::with_capacity(317 * 211);
    for i in 0..317 * 211usize {
        data.push(((i * 7 + (i / 317) * 13) % 256) as u8);
    }
    let image = GrayImage::new(317, 211, data.clone()).unwrap();
    let pgm = dir.path().join("roundtrip.pgm");
    save_image(&pgm, &image).unwrap();
    let back = load_image(&pgm).unwrap();
    assert_eq!(back.data(), &data[..]);

    // An alignment report re-reads with every field equal.
    let layout = sample_form_layout(800, 1200, 1.0);
    let (page, words) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let config = PipelineConfig {
        canvas: formpin::pipeline::CanvasSize {
            width: 800,
            height: 1200,
        },
        ..PipelineConfig::default()
    };
    let out = align_pages(&page, Some(&words), &page, Some(&words), &config).unwrap();
    let report_path = dir.path().join("report.json");
    formpin::pipeline::write_report(&out.report, &report_path).unwrap();
    let stored = formpin::pipeline::read_report(&report_path).unwrap();
    assert_eq!(
        stored,
        formpin::pipeline::StoredReport::from(&out.report)
    );
    assert_eq!(stored.homography, out.report.estimate.homography.to_row_major());

    // A fixed TSV fixture parses to exactly the expected words.
    let tsv = "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext\n\
               1\t1\t0\t0\t0\t0\t0\t0\t640\t480\t-1\t\n\
               4\t1\t1\t1\t1\t0\t28\t30\t300\t40\t-1\t\n\
               5\t1\t1\t1\t1\t1\t28\t30\t120\t38\t96.21\tInvoice\n\
               5\t1\t1\t1\t1\t2\t160\t31\t90\t36\t88.5\tTotal\n\
               5\t1\t1\t1\t1\t3\t260\t33\t40\t30\t72\t42\n";
    let parsed = parse_ocr_tsv(tsv).unwrap();
    let expected = vec![
        WordBox {
            text: "Invoice".to_string(),
            box_: Rect::new(28, 30, 120, 38),
            confidence: 96.21,
        },
        WordBox {
            text: "Total".to_string(),
            box_: Rect::new(160, 31, 90, 36),
            confidence: 88.5,
        },
        WordBox {
            text: "42".to_string(),
            box_: Rect::new(260, 33, 40, 30),
            confidence: 72.0,
        },
    ];
    assert_eq!(parsed, expected);
    println!("image, report, and TSV formats round-trip exactly");
}

fn iou(a: Rect, b: Rect) -> f64 {
    let x0 = a.x.max(b.x) as i64;
    let y0 = a.y.max(b.y) as i64;
    let x1 = (a.x as i64 + a.w as i64).min(b.x as i64 + b.w as i64);
    let y1 = (a.y as i64 + a.h as i64).min(b.y as i64 + b.h as i64);
    let inter = ((x1 - x0).max(0) * (y1 - y0).max(0)) as f64;
    let union = (a.w as i64 * a.h as i64 + b.w as i64 * b.h as i64) as f64 - inter;
    inter / union
}

#[test]
fn external_ocr_backend_when_engine_is_installed() {
    let process = OcrProcessConfig::default();
    let bin = process.effective_bin();
    let probe = std::process::Command::new(&bin)
        .arg("--version")
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status();
    if probe.is_err() {
        println!("SKIP: OCR engine {bin:?} not installed");
        return;
    }

    let dir = tempfile::tempdir().unwrap();
    let layout = sample_form_layout(1600, 2400, 2.0);
    let (page, sidecar) = render_document(&layout, GlyphSet::embedded()).unwrap();
    let path = dir.path().join("form.pgm");
    save_image(&path, &page).unwrap();

    let recognized = read_words_external(&path, &process).unwrap();
    let lexicon = formpin::ocr::Lexicon::builtin();
    let mut missed = Vec::new();
    for truth in &sidecar.words {
        if truth.box_.h < 20 || !lexicon.contains(&truth.text) {
            continue;
        }
        let hit = recognized.words.iter().any(|w| {
            w.text.eq_ignore_ascii_case(&truth.text) && iou(w.box_, truth.box_) >= 0.5
        });
        if !hit {
            missed.push(truth.text.clone());
        }
    }
    assert!(missed.is_empty(), "words missed by the engine: {missed:?}");

    // End-to-end alignment driven purely by the engine's boxes.
    let params = PerturbationParams {
        rotation_deg: 5.0,
        ..PerturbationParams::default()
    };
    let (test, _) = perturb_document(&page, &params).unwrap();
    let test_path = dir.path().join("test.pgm");
    save_image(&test_path, &test).unwrap();
    let config = PipelineConfig {
        ocr_backend: formpin::pipeline::OcrBackendConfig::External(process),
        ..PipelineConfig::default()
    };
    let (_, report) = align_document(&path, &test_path, &config).unwrap();
    let forward = make_homography(&params, 1600, 2400).unwrap();
    let mut total = 0.0;
    for corner in [
        Point::new(0.0, 0.0),
        Point::new(1600.0, 0.0),
        Point::new(0.0, 2400.0),
        Point::new(1600.0, 2400.0),
    ] {
        let moved = forward.apply_point(corner).unwrap();
        let back = report.estimate.homography.apply_point(moved).unwrap();
        total += back.distance(corner);
    }
    let corner_error = total / 4.0;
    assert!(corner_error < 4.0, "corner error {corner_error:.3} px");
    println!("engine words verified, corner error {corner_error:.3} px");
}
