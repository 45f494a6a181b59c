use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dca_forge::batch::{RowError, SourceRow};
use dca_forge::dataset::{build_manifest, scan_clean_dir, DcaImage, Label, Split};
use dca_forge::heatmap::{aggregate_groups, quantify_dir, GroupAggregateRow, HeatmapLabel};
use dca_forge::inpaint::{inpaint_batch, InpaintBatchConfig, InpaintParams, INPAINT_REPORT};
use dca_forge::io::{list_files, load_image, read_csv, save_image, write_csv};
use dca_forge::mask::{categorize_batch, detect_batch, MaskRecord, MASK_ERRORS, MASK_RECORDS};
use dca_forge::metrics::{compute_metrics, experiment_report, MetricsReport, PredictionRecord, ReportKey};
use dca_forge::synth::{batch_superimpose, SynthConfig, SynthMode, SYNTH_ERRORS, SYNTH_MANIFEST};
use dca_forge::{DcaError, DetectConfig};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::metadata::InputDigest;
use crate::probe::{contrast_probe, SEPARATOR};

/// Failure of a subcommand, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<DcaError> for CliError {
    fn from(e: DcaError) -> Self {
        match e {
            DcaError::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// What a run read, wrote and found; feeds the run metadata.
#[derive(Debug, Default)]
pub struct RunLog {
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub summary: Map<String, Value>,
    pub stdout: Vec<String>,
}

impl RunLog {
    fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

pub fn dispatch(command: &Command, log: &mut RunLog) -> CliResult {
    match command {
        Command::Mask(a) => mask(a, log),
        Command::Categorize(a) => categorize(a, log),
        Command::Synth(a) => synth(a, log),
        Command::Inpaint(a) => inpaint(a, log),
        Command::HeatmapStats(a) => heatmap_stats(a, log),
        Command::Metrics(a) => metrics(a, log),
        Command::DatasetBuild(a) => dataset_build(a, log),
        Command::ContrastProbe(a) => probe(a, log),
    }
}

fn parent_dir(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

fn ensure_parent(path: &Path) -> CliResult {
    let dir = parent_dir(path);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))
}

fn read_manifest(input: &ManifestInput, log: &mut RunLog) -> CliResult<(Vec<SourceRow>, PathBuf)> {
    log.inputs.push(InputDigest::file(&input.manifest));
    let rows: Vec<SourceRow> = read_csv(&input.manifest)?;
    let base = input
        .base_dir
        .clone()
        .unwrap_or_else(|| parent_dir(&input.manifest));
    let files: Vec<PathBuf> = rows
        .iter()
        .map(|r| r.resolve(Some(&base)))
        .filter(|p| p.is_file())
        .collect();
    log.inputs.push(InputDigest::set(
        format!("{} (referenced images)", input.manifest.display()),
        &files,
    ));
    Ok((rows, base))
}

fn batch_counts(log: &mut RunLog, rows: usize, ok: usize, errors: &[RowError]) {
    log.note("rows", rows);
    log.note("succeeded", ok);
    log.note("failed", errors.len());
}

fn category_counts(records: &[MaskRecord]) -> Value {
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry(r.category.to_string()).or_insert(0usize) += 1;
    }
    json!(counts)
}

fn mask(a: &MaskArgs, log: &mut RunLog) -> CliResult {
    let (rows, base) = read_manifest(&a.input, log)?;
    let config = DetectConfig {
        dark_threshold: a.dark_threshold,
        min_dark_fraction: a.min_dark_fraction,
        max_rms_residual: a.max_residual,
        ..DetectConfig::default()
    };
    log.note("detect_config", json!(config));
    let batch = detect_batch(&rows, Some(&base), &a.out_dir, &config, &a.thresholds)?;
    log.output(&a.out_dir.join("masks"));
    log.output(&a.out_dir.join(MASK_RECORDS));
    if !batch.errors.is_empty() {
        log.output(&a.out_dir.join(MASK_ERRORS));
    }
    batch_counts(log, rows.len(), batch.records.len(), &batch.errors);
    log.note("categories", category_counts(&batch.records));
    Ok(())
}

fn categorize(a: &CategorizeArgs, log: &mut RunLog) -> CliResult {
    log.inputs.push(InputDigest::dir(&a.masks_dir));
    let rows: Vec<SourceRow> = list_files(&a.masks_dir)?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
        .filter_map(|p| {
            let id = p.file_stem()?.to_str()?.to_string();
            Some(SourceRow::new(id, p.to_string_lossy()))
        })
        .collect();
    let batch = categorize_batch(&rows, None, &a.out_dir, &a.thresholds)?;
    log.output(&a.out_dir.join(MASK_RECORDS));
    if !batch.errors.is_empty() {
        log.output(&a.out_dir.join(MASK_ERRORS));
    }
    batch_counts(log, rows.len(), batch.records.len(), &batch.errors);
    log.note("categories", category_counts(&batch.records));
    Ok(())
}

fn synth(a: &SynthArgs, log: &mut RunLog) -> CliResult {
    if a.mode == SynthMode::Binary && (a.sigma.is_some() || a.radius_reduction.is_some()) {
        return Err(CliError::Usage(
            "--sigma and --radius-reduction apply to realistic mode only".into(),
        ));
    }
    let (rows, base) = read_manifest(&a.input, log)?;
    let config = SynthConfig {
        thresholds: a.thresholds,
        sigma: a.sigma,
        radius_reduction: a.radius_reduction,
        ..SynthConfig::new(a.mode, a.band, a.seed)
    };
    let batch = batch_superimpose(&rows, Some(&base), &a.out_dir, &config)?;
    log.output(&a.out_dir.join("images"));
    log.output(&a.out_dir.join("masks"));
    log.output(&a.out_dir.join(SYNTH_MANIFEST));
    if !batch.errors.is_empty() {
        log.output(&a.out_dir.join(SYNTH_ERRORS));
    }
    batch_counts(log, rows.len(), batch.records.len(), &batch.errors);
    Ok(())
}

fn inpaint(a: &InpaintArgs, log: &mut RunLog) -> CliResult {
    let (rows, base) = read_manifest(&a.input, log)?;
    log.inputs.push(InputDigest::dir(&a.masks_dir));
    let config = InpaintBatchConfig {
        method: a.method,
        params: InpaintParams {
            inpaint_radius: a.radius,
            ns_iterations: a.iters,
            ns_dt: a.dt,
        },
        hole_dilation: a.dilation,
    };
    log.note("hole_dilation", a.dilation);
    let batch = inpaint_batch(&rows, Some(&base), &a.masks_dir, &a.out_dir, &config)?;
    log.output(&a.out_dir.join(INPAINT_REPORT));
    batch_counts(log, rows.len(), batch.report.len(), &batch.errors);
    log.note(
        "not_converged",
        batch.report.iter().filter(|r| !r.converged).count(),
    );
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parent_dir(path).join(format!("{stem}_{suffix}.csv"))
}

fn heatmap_stats(a: &HeatmapArgs, log: &mut RunLog) -> CliResult {
    log.inputs.push(InputDigest::file(&a.labels));
    log.inputs.push(InputDigest::dir(&a.heatmaps_dir));
    log.inputs.push(InputDigest::dir(&a.masks_dir));
    let labels: Vec<HeatmapLabel> = read_csv(&a.labels)?;
    let batch = quantify_dir(&labels, &a.heatmaps_dir, &a.masks_dir)?;
    ensure_parent(&a.out)?;
    write_csv(&a.out, &batch.rows)?;
    log.output(&a.out);
    if !batch.errors.is_empty() {
        let path = sibling(&a.out, "errors");
        write_csv(&path, &batch.errors)?;
        log.output(&path);
    }
    let (groups, skipped) = aggregate_groups(&batch.rows)?;
    let groups_path = a.groups.clone().unwrap_or_else(|| sibling(&a.out, "groups"));
    ensure_parent(&groups_path)?;
    let rows: Vec<GroupAggregateRow> = groups.iter().map(Into::into).collect();
    write_csv(&groups_path, &rows)?;
    log.output(&groups_path);
    batch_counts(log, labels.len(), batch.rows.len(), &batch.errors);
    log.note("groups", groups.len());
    log.note("rows_without_external_region", skipped);
    log.note(
        "heatmap_intensity",
        "color heatmaps reduced to ITU-R 601 luma; gray heatmaps used as is",
    );
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

fn metric_lines(m: &MetricsReport) -> Vec<String> {
    vec![
        format!("acc {}", m.acc),
        format!("tpr {}", fmt_opt(m.tpr)),
        format!("tnr {}", fmt_opt(m.tnr)),
        format!("precision {}", fmt_opt(m.precision)),
        format!("f1 {}", fmt_opt(m.f1)),
        format!("auc {}", fmt_opt(m.auc)),
        format!("tp {} fp {} tn {} fn {}", m.tp, m.fp, m.tn, m.fn_),
    ]
}

#[derive(Debug, Deserialize)]
struct RunRow {
    slice: String,
    variant: String,
    model: String,
    preds: PathBuf,
}

fn metrics(a: &MetricsArgs, log: &mut RunLog) -> CliResult {
    log.note("threshold", a.threshold);
    if let Some(preds_path) = &a.preds {
        log.inputs.push(InputDigest::file(preds_path));
        let preds: Vec<PredictionRecord> = read_csv(preds_path)?;
        let m = compute_metrics(&preds, a.threshold)?;
        log.stdout.extend(metric_lines(&m));
        log.note("metrics", json!(m));
        if let Some(out) = &a.out {
            ensure_parent(out)?;
            let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Data(e.to_string()))?;
            std::fs::write(out, text + "\n")
                .map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
            log.output(out);
        }
        return Ok(());
    }
    let (Some(runs_path), Some(out)) = (&a.runs, &a.out) else {
        return Err(CliError::Usage(
            "metrics needs --preds, or --runs with --out".into(),
        ));
    };
    log.inputs.push(InputDigest::file(runs_path));
    let runs: Vec<RunRow> = read_csv(runs_path)?;
    let base = parent_dir(runs_path);
    let mut entries = Vec::with_capacity(runs.len());
    for run in &runs {
        let path = if run.preds.is_relative() {
            base.join(&run.preds)
        } else {
            run.preds.clone()
        };
        log.inputs.push(InputDigest::file(&path));
        let preds: Vec<PredictionRecord> = read_csv(&path)?;
        let key = ReportKey {
            slice: run.slice.clone(),
            variant: run.variant.clone(),
            model: run.model.clone(),
        };
        entries.push((key, compute_metrics(&preds, a.threshold)?));
    }
    let report = experiment_report(&entries)?;
    ensure_parent(out)?;
    write_csv(out, &report)?;
    log.output(out);
    log.note("runs", report.len());
    log.stdout.push(format!(
        "{} report rows written to {}",
        report.len(),
        out.display()
    ));
    Ok(())
}

fn dataset_build(a: &DatasetArgs, log: &mut RunLog) -> CliResult {
    log.inputs.push(InputDigest::dir(&a.clean_melanoma));
    log.inputs.push(InputDigest::dir(&a.clean_non_melanoma));
    let mut clean = scan_clean_dir(&a.clean_melanoma, Label::Melanoma, &a.source)?;
    clean.extend(scan_clean_dir(
        &a.clean_non_melanoma,
        Label::NonMelanoma,
        &a.source,
    )?);
    let dca: Vec<DcaImage> = match &a.dca {
        Some(p) => {
            log.inputs.push(InputDigest::file(p));
            read_csv(p)?
        }
        None => Vec::new(),
    };
    let rows = build_manifest(&clean, &dca, a.seed)?;
    ensure_parent(&a.out)?;
    write_csv(&a.out, &rows)?;
    log.output(&a.out);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &rows {
        let split = match r.split {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        };
        *counts.entry(format!("{split}/{}", r.label)).or_default() += 1;
    }
    log.note("rows", rows.len());
    log.note("counts", json!(counts));
    Ok(())
}

fn probe(a: &ProbeArgs, log: &mut RunLog) -> CliResult {
    if !(a.factor.is_finite() && a.factor > 0.0) {
        return Err(CliError::Usage(format!(
            "--factor must be positive, got {}",
            a.factor
        )));
    }
    log.inputs.push(InputDigest::file(&a.image));
    let img = load_image(&a.image)?;
    let heat = match &a.heatmap {
        Some(p) => {
            log.inputs.push(InputDigest::file(p));
            Some(load_image(p)?)
        }
        None => None,
    };
    let probe = contrast_probe(&img, a.factor, heat.as_ref())?;
    ensure_parent(&a.out)?;
    save_image(&a.out, &probe.image)?;
    log.output(&a.out);
    log.note("panels", probe.panels);
    log.note("panel_width", img.width());
    log.note("separator", SEPARATOR);
    if let Some(e) = probe.extrema {
        log.note(
            "extrema",
            json!({
                "brightest": [e.brightest.0, e.brightest.1],
                "brightest_value": e.brightest_value,
                "darkest": [e.darkest.0, e.darkest.1],
                "darkest_value": e.darkest_value,
            }),
        );
    }
    Ok(())
}
