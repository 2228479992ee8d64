use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use formpin::ocr::{read_words_sidecar, write_words_sidecar};
use formpin::pipeline::{
    align_document_full, extract_fields, read_fields_file, stress_grid, summarize_report,
    write_report, PipelineConfig, PipelineError, StressGrid,
};
use formpin::raster::{binarize, load_image, resize_bilinear, save_image, xor_diff};
use formpin::synth::{render_document, DocumentLayout, GlyphSet, SynthError};

#[derive(Parser)]
#[command(
    name = "formpin",
    version,
    about = "Aligns scanned forms to their template via character-tip keypoints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align a scanned test page onto its template.
    Align {
        /// Template page (PGM).
        #[arg(long)]
        template: PathBuf,
        /// Test page to align (PGM).
        #[arg(long)]
        test: PathBuf,
        /// Pipeline configuration (JSON); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the aligned page (PGM).
        #[arg(long)]
        out: PathBuf,
        /// Where to write the alignment report (JSON).
        #[arg(long)]
        report: PathBuf,
        /// Optional XOR difference mask (PGM, differing pixels as ink).
        #[arg(long)]
        xor_out: Option<PathBuf>,
    },
    /// Crop annotated field regions out of an aligned page.
    Extract {
        /// Aligned page produced by `align` (PGM).
        #[arg(long)]
        aligned: PathBuf,
        /// Field annotations (JSON).
        #[arg(long)]
        fields: PathBuf,
        /// Directory the crops are written into.
        #[arg(long)]
        out_dir: PathBuf,
        /// Pipeline configuration (JSON); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Render a synthetic document from a layout description.
    Synth {
        /// Document layout (JSON).
        #[arg(long)]
        layout: PathBuf,
        /// Output prefix; writes <prefix>.pgm and <prefix>.json.
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Sweep a grid of synthetic perturbations and report accuracy.
    Stress {
        /// Template page (PGM).
        #[arg(long)]
        template: PathBuf,
        /// Pipeline configuration (JSON); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Rotation axis in degrees: a single value or start:end:step.
        #[arg(long, default_value = "-7:7:1")]
        rotations: String,
        /// Translation axis as a fraction of page size, applied to both x
        /// and y: a single value or start:end:step.
        #[arg(long, default_value = "-0.4:0.4:0.1")]
        translations: String,
        /// Scale axis: a single value or start:end:step.
        #[arg(long, default_value = "0.5:2.0:0.25")]
        scales: String,
        /// Where to write the stress report (JSON).
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Align {
            template,
            test,
            config,
            out,
            report,
            xor_out,
        } => cmd_align(&template, &test, config.as_deref(), &out, &report, xor_out.as_deref()),
        Command::Extract {
            aligned,
            fields,
            out_dir,
            config,
        } => cmd_extract(&aligned, &fields, &out_dir, config.as_deref()),
        Command::Synth { layout, out_prefix } => cmd_synth(&layout, &out_prefix),
        Command::Stress {
            template,
            config,
            rotations,
            translations,
            scales,
            out,
        } => cmd_stress(&template, config.as_deref(), &rotations, &translations, &scales, &out),
    }
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig, PipelineError> {
    match path {
        Some(p) => PipelineConfig::from_path(p),
        None => Ok(PipelineConfig::default()),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    }
}

fn raster_to_pipeline(e: formpin::raster::RasterError) -> PipelineError {
    match e {
        formpin::raster::RasterError::Io { path, source } => PipelineError::Io { path, source },
        other => PipelineError::Input(other.to_string()),
    }
}

fn cmd_align(
    template: &Path,
    test: &Path,
    config: Option<&Path>,
    out: &Path,
    report_path: &Path,
    xor_out: Option<&Path>,
) -> Result<(), PipelineError> {
    let config = load_config(config)?;
    let result = align_document_full(template, test, &config)?;

    save_image(out, &result.aligned).map_err(raster_to_pipeline)?;
    write_report(&result.report, report_path)?;
    // Word sidecar in the template frame, for `extract` to pick up.
    write_words_sidecar(&out.with_extension("json"), &result.words_in_template_frame)?;

    if let Some(xor_path) = xor_out {
        let template_img = load_image(template).map_err(raster_to_pipeline)?;
        let canvas = config.canvas;
        let template_img = resize_bilinear(&template_img, canvas.width, canvas.height)
            .map_err(raster_to_pipeline)?;
        let threshold = config.binarize_threshold();
        let (mask, _) = xor_diff(
            &binarize(&template_img, threshold),
            &binarize(&result.aligned, threshold),
        )
        .map_err(raster_to_pipeline)?;
        save_image(xor_path, &mask.to_gray()).map_err(raster_to_pipeline)?;
    }

    println!("{}", summarize_report(&result.report));
    Ok(())
}

fn cmd_extract(
    aligned: &Path,
    fields: &Path,
    out_dir: &Path,
    config: Option<&Path>,
) -> Result<(), PipelineError> {
    let config = load_config(config)?;
    let image = load_image(aligned).map_err(raster_to_pipeline)?;
    let annotations = read_fields_file(fields)?;

    // `align` leaves a word sidecar next to its output; use it when present.
    let sidecar = aligned.with_extension("json");
    let words = if sidecar.is_file() {
        Some(read_words_sidecar(&sidecar, image.width(), image.height())?)
    } else {
        None
    };

    let crops = extract_fields(&image, &annotations, &config, words.as_ref())?;

    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut texts: BTreeMap<String, String> = BTreeMap::new();
    for crop in &crops {
        let stem: String = crop
            .annotation
            .name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        let path = out_dir.join(format!("{stem}.pgm"));
        save_image(&path, &crop.patch).map_err(raster_to_pipeline)?;
        match &crop.recognized_text {
            Some(text) => {
                println!("{}: {} (text: {text:?})", crop.annotation.name, path.display());
                texts.insert(crop.annotation.name.clone(), text.clone());
            }
            None => println!("{}: {}", crop.annotation.name, path.display()),
        }
    }
    if !texts.is_empty() {
        let path = out_dir.join("text.json");
        let mut body = serde_json::to_string_pretty(&texts).expect("string map serializes");
        body.push('\n');
        std::fs::write(&path, body).map_err(io_err(&path))?;
    }
    println!("{} field(s) written to {}", crops.len(), out_dir.display());
    Ok(())
}

fn synth_to_pipeline(e: SynthError) -> PipelineError {
    match e {
        SynthError::Raster(r) => raster_to_pipeline(r),
        SynthError::Sidecar(o) => PipelineError::Ocr(o),
        other => PipelineError::Input(other.to_string()),
    }
}

fn cmd_synth(layout_path: &Path, out_prefix: &Path) -> Result<(), PipelineError> {
    let layout = DocumentLayout::from_path(layout_path).map_err(synth_to_pipeline)?;
    let (page, words) = render_document(&layout, GlyphSet::embedded()).map_err(synth_to_pipeline)?;

    let image_path = out_prefix.with_extension("pgm");
    let sidecar_path = out_prefix.with_extension("json");
    save_image(&image_path, &page).map_err(raster_to_pipeline)?;
    write_words_sidecar(&sidecar_path, &words)?;
    println!(
        "wrote {} ({}x{}) and {} ({} words)",
        image_path.display(),
        page.width(),
        page.height(),
        sidecar_path.display(),
        words.words.len()
    );

    if !layout.fields.is_empty() {
        #[derive(serde::Serialize)]
        struct FieldsFile<'a> {
            fields: &'a [formpin::pipeline::FieldAnnotation],
        }
        let fields_path = {
            let mut name = out_prefix.file_name().unwrap_or_default().to_os_string();
            name.push("_fields.json");
            out_prefix.with_file_name(name)
        };
        let mut body = serde_json::to_string_pretty(&FieldsFile { fields: &layout.fields })
            .expect("annotations serialize");
        body.push('\n');
        std::fs::write(&fields_path, body).map_err(io_err(&fields_path))?;
        println!("wrote {} ({} fields)", fields_path.display(), layout.fields.len());
    }
    Ok(())
}

/// Parses a grid axis: `start:end:step` (inclusive) or a single value.
fn parse_axis(spec: &str, axis: &str) -> Result<Vec<f64>, PipelineError> {
    let bad = |reason: &str| {
        PipelineError::Input(format!("{axis} axis {spec:?}: {reason}"))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64, PipelineError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad("expected a number"))
            .and_then(|v| v.is_finite().then_some(v).ok_or_else(|| bad("must be finite")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, end, step] => {
            let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if end < start {
                return Err(bad("end is below start"));
            }
            let count = ((end - start) / step).round() as usize;
            let values = (0..=count)
                .map(|i| {
                    // Snap accumulated float error so grid labels stay clean.
                    let v = start + i as f64 * step;
                    (v * 1e10).round() / 1e10
                })
                .filter(|&v| v <= end + step * 1e-9)
                .collect::<Vec<f64>>();
            Ok(values)
        }
        _ => Err(bad("expected VALUE or START:END:STEP")),
    }
}

fn cmd_stress(
    template: &Path,
    config: Option<&Path>,
    rotations: &str,
    translations: &str,
    scales: &str,
    out: &Path,
) -> Result<(), PipelineError> {
    let config = load_config(config)?;
    let grid = StressGrid {
        rotations_deg: parse_axis(rotations, "rotation")?,
        translations: parse_axis(translations, "translation")?,
        scales: parse_axis(scales, "scale")?,
    };
    let report = stress_grid(template, &config, &grid)?;
    report.write(out)?;
    let s = &report.summary;
    match (s.max_corner_error_px, s.mean_corner_error_px) {
        (Some(max), Some(mean)) => println!(
            "{}/{} cells succeeded; corner error mean {mean:.3} px, max {max:.3} px; wrote {}",
            s.succeeded,
            s.cells,
            out.display()
        ),
        _ => println!(
            "{}/{} cells succeeded; wrote {}",
            s.succeeded,
            s.cells,
            out.display()
        ),
    }
    Ok(())
}
