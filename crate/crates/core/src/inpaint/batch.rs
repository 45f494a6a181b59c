use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{InpaintMethod, InpaintParams, InpaintRequest};
use crate::batch::{all_failed, create_dir, run_rows, RowError, SourceRow};
use crate::error::{DcaError, Result};
use crate::io::{load_image, save_image, write_csv};
use crate::mask::DcaMask;

pub const INPAINT_REPORT: &str = "report.csv";
pub const INPAINT_ERRORS: &str = "errors.csv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InpaintBatchConfig {
    pub method: InpaintMethod,
    pub params: InpaintParams,
    /// The DCA region is grown by this many pixels before filling so the
    /// dark anti-aliased rim does not seed the fill.
    pub hole_dilation: usize,
}

impl InpaintBatchConfig {
    pub fn new(method: InpaintMethod) -> Self {
        Self {
            method,
            params: InpaintParams::default(),
            hole_dilation: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InpaintReportRow {
    pub image_id: String,
    pub method: InpaintMethod,
    pub fill_pixels: usize,
    pub seconds: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Default)]
pub struct InpaintBatch {
    pub report: Vec<InpaintReportRow>,
    pub errors: Vec<RowError>,
}

/// Inpaints the DCA of every row. The mask for row `id` is read from
/// `masks_dir/<id>.png`; results go to `out_dir/<id>.png` and the per-row
/// report to `out_dir/report.csv`.
pub fn inpaint_batch(
    rows: &[SourceRow],
    base_dir: Option<&Path>,
    masks_dir: &Path,
    out_dir: &Path,
    config: &InpaintBatchConfig,
) -> Result<InpaintBatch> {
    if rows.is_empty() {
        return Err(DcaError::EmptyInput("inpainting manifest has no rows".into()));
    }
    config.params.validate()?;
    create_dir(out_dir)?;
    let (report, errors) = run_rows(
        rows,
        |r| r.image_id.as_str(),
        |_, row| inpaint_one(row, base_dir, masks_dir, out_dir, config),
    );
    let batch = InpaintBatch { report, errors };
    if !batch.errors.is_empty() {
        write_csv(&out_dir.join(INPAINT_ERRORS), &batch.errors)?;
    }
    if batch.report.is_empty() {
        return Err(all_failed("inpainted", &batch.errors));
    }
    write_csv(&out_dir.join(INPAINT_REPORT), &batch.report)?;
    Ok(batch)
}

fn inpaint_one(
    row: &SourceRow,
    base_dir: Option<&Path>,
    masks_dir: &Path,
    out_dir: &Path,
    config: &InpaintBatchConfig,
) -> Result<InpaintReportRow> {
    let img = load_image(&row.resolve(base_dir))?;
    let mask = DcaMask::from_raster(load_image(&masks_dir.join(format!("{}.png", row.image_id)))?)?;
    if !img.same_dimensions(mask.width(), mask.height()) {
        return Err(DcaError::shape(
            format!("{}x{} mask", img.width(), img.height()),
            format!("{}x{} mask", mask.width(), mask.height()),
        ));
    }
    let hole = mask.dca_region().dilate(config.hole_dilation);
    let started = Instant::now();
    let outcome = InpaintRequest::new(&img, &hole, config.method)
        .with_params(config.params)
        .run()?;
    let seconds = started.elapsed().as_secs_f64();
    save_image(&out_dir.join(format!("{}.png", row.image_id)), &outcome.image)?;
    Ok(InpaintReportRow {
        image_id: row.image_id.clone(),
        method: config.method,
        fill_pixels: outcome.fill_pixels,
        seconds,
        converged: outcome.converged,
    })
}
