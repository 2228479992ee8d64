//! Drives the binary through its four subcommands and checks the exit
//! code contract: 0 success, 3 bad input, 4 OCR failure, 5 too few
//! matches, 7 I/O failure.

use std::path::Path;
use std::process::{Command, Output};

use formpin::synth::{sample_form_layout, DocumentLayout, PlacedWord};

fn formpin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formpin"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_layout(path: &Path, layout: &DocumentLayout) {
    std::fs::write(path, serde_json::to_string_pretty(layout).unwrap()).unwrap();
}

#[test]
fn synth_align_extract_stress_flow() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let layout = sample_form_layout(1600, 2400, 2.0);
    write_layout(&root.join("layout.json"), &layout);
    let out = formpin(
        &["synth", "--layout", "layout.json", "--out-prefix", "doc"],
        root,
    );
    assert_exit(&out, 0);
    for name in ["doc.pgm", "doc.json", "doc_fields.json"] {
        assert!(root.join(name).is_file(), "{name} missing after synth");
    }

    // A translated copy is a warp the aligner must undo exactly.
    let mut moved = layout.clone();
    for word in &mut moved.words {
        word.x += 37.0;
        word.y += 22.0;
    }
    for field in &mut moved.fields {
        field.region.x += 37;
        field.region.y += 22;
    }
    write_layout(&root.join("moved.json"), &moved);
    let out = formpin(
        &["synth", "--layout", "moved.json", "--out-prefix", "scan"],
        root,
    );
    assert_exit(&out, 0);

    let out = formpin(
        &[
            "align",
            "--template",
            "doc.pgm",
            "--test",
            "scan.pgm",
            "--out",
            "aligned.pgm",
            "--report",
            "report.json",
            "--xor-out",
            "diff.pgm",
        ],
        root,
    );
    assert_exit(&out, 0);
    for name in ["aligned.pgm", "aligned.json", "report.json", "diff.pgm"] {
        assert!(root.join(name).is_file(), "{name} missing after align");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("report.json")).unwrap())
            .unwrap();
    let h = report["homography"].as_array().unwrap();
    assert!((h[2].as_f64().unwrap() + 37.0).abs() < 0.2, "tx {}", h[2]);
    assert!((h[5].as_f64().unwrap() + 22.0).abs() < 0.2, "ty {}", h[5]);

    let out = formpin(
        &[
            "extract",
            "--aligned",
            "aligned.pgm",
            "--fields",
            "doc_fields.json",
            "--out-dir",
            "crops",
        ],
        root,
    );
    assert_exit(&out, 0);
    for field in &layout.fields {
        let crop = root.join("crops").join(format!("{}.pgm", field.name));
        assert!(crop.is_file(), "missing crop {}", crop.display());
    }

    let out = formpin(
        &[
            "stress",
            "--template",
            "doc.pgm",
            "--rotations",
            "-2:2:2",
            "--translations",
            "0",
            "--scales",
            "1.0",
            "--out",
            "stress.json",
        ],
        root,
    );
    assert_exit(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("stress.json")).unwrap())
            .unwrap();
    assert_eq!(report["summary"]["cells"], 3);
    assert_eq!(report["summary"]["succeeded"], 3);
}

#[test]
fn missing_image_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = formpin(
        &[
            "align",
            "--template",
            "nope.pgm",
            "--test",
            "nope.pgm",
            "--out",
            "a.pgm",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert_exit(&out, 7);
}

#[test]
fn malformed_layout_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("layout.json"), "{not json").unwrap();
    let out = formpin(
        &["synth", "--layout", "layout.json", "--out-prefix", "doc"],
        dir.path(),
    );
    assert_exit(&out, 3);
}

#[test]
fn reversed_stress_axis_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let layout = sample_form_layout(800, 1200, 1.0);
    write_layout(&dir.path().join("layout.json"), &layout);
    let out = formpin(
        &["synth", "--layout", "layout.json", "--out-prefix", "doc"],
        dir.path(),
    );
    assert_exit(&out, 0);
    let out = formpin(
        &[
            "stress",
            "--template",
            "doc.pgm",
            "--rotations",
            "5:1:1",
            "--translations",
            "0",
            "--scales",
            "1",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    assert_exit(&out, 3);
}

#[test]
fn missing_sidecar_exits_with_ocr_code() {
    let dir = tempfile::tempdir().unwrap();
    let layout = sample_form_layout(800, 1200, 1.0);
    write_layout(&dir.path().join("layout.json"), &layout);
    let out = formpin(
        &["synth", "--layout", "layout.json", "--out-prefix", "doc"],
        dir.path(),
    );
    assert_exit(&out, 0);
    std::fs::copy(dir.path().join("doc.pgm"), dir.path().join("lone.pgm")).unwrap();
    let out = formpin(
        &[
            "align",
            "--template",
            "lone.pgm",
            "--test",
            "lone.pgm",
            "--out",
            "a.pgm",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert_exit(&out, 4);
}

#[test]
fn disjoint_vocabularies_exit_with_match_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = sample_form_layout(800, 1200, 1.0);
    a.words.truncate(8);
    a.fields.clear();
    let mut b = a.clone();
    for (word, text) in b.words.iter_mut().zip([
        "Kite", "Zebra", "Xray", "Moat", "Koala", "Kayak", "Zero", "Xenon",
    ]) {
        word.text = text.into();
    }
    write_layout(&dir.path().join("a.json"), &a);
    write_layout(&dir.path().join("b.json"), &b);
    assert_exit(
        &formpin(&["synth", "--layout", "a.json", "--out-prefix", "a"], dir.path()),
        0,
    );
    assert_exit(
        &formpin(&["synth", "--layout", "b.json", "--out-prefix", "b"], dir.path()),
        0,
    );
    let out = formpin(
        &[
            "align",
            "--template",
            "a.pgm",
            "--test",
            "b.pgm",
            "--out",
            "out.pgm",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert_exit(&out, 5);
}
