//! Internal/external quantification of network-focus heatmaps.
//!
//! The internal region is the lesion side of the DCA mask (raster 255), the
//! external region the DCA itself (raster 0). For each region the RMS
//! contrast (population standard deviation) and the mean brightness are
//! computed on the raw 0–255 scale; color heatmaps are reduced to luma first.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::batch::{all_failed, run_rows, RowError};
use crate::error::{DcaError, Result};
use crate::image::{region_brightness, region_rms, ImageBuffer, IntensityScale, PixelRegion};
use crate::io::load_image;
use crate::mask::{DcaMask, DcaSizeCategory};

/// `(internal, external)`: pixels where the mask raster is 255 and 0.
pub fn split_regions(mask: &DcaMask) -> (PixelRegion, PixelRegion) {
    (mask.content_region(), mask.dca_region())
}

/// Statistics of one heatmap. External fields are `None` when the mask has
/// no DCA pixels; they serialize as empty CSV fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionStatsRow {
    pub image_id: String,
    pub internal_rms: f64,
    pub external_rms: Option<f64>,
    pub rms_diff: Option<f64>,
    pub internal_brightness: f64,
    pub external_brightness: Option<f64>,
    pub brightness_diff: Option<f64>,
}

impl RegionStatsRow {
    pub fn has_external(&self) -> bool {
        self.external_rms.is_some()
    }
}

/// Computes internal and external RMS contrast and brightness of `heatmap`.
pub fn quantify_heatmap(image_id: &str, heatmap: &ImageBuffer, mask: &DcaMask) -> Result<RegionStatsRow> {
    if !heatmap.same_dimensions(mask.width(), mask.height()) {
        return Err(DcaError::shape(
            format!("{}x{} heatmap", mask.width(), mask.height()),
            format!("{}x{} heatmap", heatmap.width(), heatmap.height()),
        ));
    }
    let gray;
    let heatmap = match heatmap.channels() {
        1 => heatmap,
        _ => {
            gray = heatmap.to_luma();
            &gray
        }
    };
    let (internal, external) = split_regions(mask);
    let internal_rms = region_rms(heatmap, &internal, IntensityScale::Raw)?;
    let internal_brightness = region_brightness(heatmap, &internal)?;
    let (external_rms, external_brightness) = if external.is_empty() {
        (None, None)
    } else {
        (
            Some(region_rms(heatmap, &external, IntensityScale::Raw)?),
            Some(region_brightness(heatmap, &external)?),
        )
    };
    Ok(RegionStatsRow {
        image_id: image_id.to_string(),
        internal_rms,
        external_rms,
        rms_diff: external_rms.map(|e| internal_rms - e),
        internal_brightness,
        external_brightness,
        brightness_diff: external_brightness.map(|e| internal_brightness - e),
    })
}

/// One line of `labels.csv`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatmapLabel {
    pub image_id: String,
    pub model: String,
    pub test_set: String,
    pub dca_size: DcaSizeCategory,
}

/// A labeled row of `stats.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledStats {
    pub image_id: String,
    pub model: String,
    pub test_set: String,
    pub dca_size: DcaSizeCategory,
    pub internal_rms: f64,
    pub external_rms: Option<f64>,
    pub rms_diff: Option<f64>,
    pub internal_brightness: f64,
    pub external_brightness: Option<f64>,
    pub brightness_diff: Option<f64>,
}

impl LabeledStats {
    pub fn new(label: &HeatmapLabel, stats: RegionStatsRow) -> Self {
        Self {
            image_id: stats.image_id,
            model: label.model.clone(),
            test_set: label.test_set.clone(),
            dca_size: label.dca_size,
            internal_rms: stats.internal_rms,
            external_rms: stats.external_rms,
            rms_diff: stats.rms_diff,
            internal_brightness: stats.internal_brightness,
            external_brightness: stats.external_brightness,
            brightness_diff: stats.brightness_diff,
        }
    }

    pub fn has_external(&self) -> bool {
        self.external_rms.is_some()
    }

    pub fn key(&self) -> GroupKey {
        GroupKey {
            model: self.model.clone(),
            test_set: self.test_set.clone(),
            dca_size: self.dca_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupKey {
    pub model: String,
    pub test_set: String,
    pub dca_size: DcaSizeCategory,
}

/// Population mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Values are summed in sorted order so the result does not depend on
    /// row order.
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let mut sq: Vec<f64> = v.iter().map(|x| (x - mean).powi(2)).collect();
        sq.sort_by(f64::total_cmp);
        Self {
            mean,
            std: (sq.iter().sum::<f64>() / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupAggregate {
    pub key: GroupKey,
    pub n: usize,
    pub internal_rms: MeanStd,
    pub external_rms: MeanStd,
    pub rms_diff: MeanStd,
    pub internal_brightness: MeanStd,
    pub external_brightness: MeanStd,
    pub brightness_diff: MeanStd,
}

/// Flat CSV form of [`GroupAggregate`]: RMS columns, then brightness columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAggregateRow {
    pub model: String,
    pub test_set: String,
    pub dca_size: DcaSizeCategory,
    pub n: usize,
    pub rms_internal_mean: f64,
    pub rms_internal_std: f64,
    pub rms_external_mean: f64,
    pub rms_external_std: f64,
    pub rms_diff_mean: f64,
    pub brightness_internal_mean: f64,
    pub brightness_internal_std: f64,
    pub brightness_external_mean: f64,
    pub brightness_external_std: f64,
    pub brightness_diff_mean: f64,
}

impl From<&GroupAggregate> for GroupAggregateRow {
    fn from(g: &GroupAggregate) -> Self {
        Self {
            model: g.key.model.clone(),
            test_set: g.key.test_set.clone(),
            dca_size: g.key.dca_size,
            n: g.n,
            rms_internal_mean: g.internal_rms.mean,
            rms_internal_std: g.internal_rms.std,
            rms_external_mean: g.external_rms.mean,
            rms_external_std: g.external_rms.std,
            rms_diff_mean: g.rms_diff.mean,
            brightness_internal_mean: g.internal_brightness.mean,
            brightness_internal_std: g.internal_brightness.std,
            brightness_external_mean: g.external_brightness.mean,
            brightness_external_std: g.external_brightness.std,
            brightness_diff_mean: g.brightness_diff.mean,
        }
    }
}

/// Aggregates rows per (model, test set, DCA size), sorted by key. Rows
/// without an external region cannot contribute a difference and are left
/// out; the second value counts them.
pub fn aggregate_groups(rows: &[LabeledStats]) -> Result<(Vec<GroupAggregate>, usize)> {
    let mut groups: BTreeMap<GroupKey, Vec<&LabeledStats>> = BTreeMap::new();
    let mut skipped = 0;
    for r in rows {
        if r.has_external() {
            groups.entry(r.key()).or_default().push(r);
        } else {
            skipped += 1;
        }
    }
    if groups.is_empty() {
        return Err(DcaError::EmptyInput(
            "no heatmap rows with an external region to aggregate".into(),
        ));
    }
    let aggregates = groups
        .into_iter()
        .map(|(key, members)| {
            let col =
                |f: fn(&LabeledStats) -> f64| MeanStd::of(&members.iter().map(|r| f(r)).collect::<Vec<_>>());
            GroupAggregate {
                n: members.len(),
                internal_rms: col(|r| r.internal_rms),
                external_rms: col(|r| r.external_rms.unwrap_or_default()),
                rms_diff: col(|r| r.rms_diff.unwrap_or_default()),
                internal_brightness: col(|r| r.internal_brightness),
                external_brightness: col(|r| r.external_brightness.unwrap_or_default()),
                brightness_diff: col(|r| r.brightness_diff.unwrap_or_default()),
                key,
            }
        })
        .collect();
    Ok((aggregates, skipped))
}

#[derive(Debug, Clone, Default)]
pub struct HeatmapBatch {
    pub rows: Vec<LabeledStats>,
    pub errors: Vec<RowError>,
}

/// Quantifies `heatmaps_dir/<id>.png` against `masks_dir/<id>.png` for every
/// label, in label order.
pub fn quantify_dir(labels: &[HeatmapLabel], heatmaps_dir: &Path, masks_dir: &Path) -> Result<HeatmapBatch> {
    if labels.is_empty() {
        return Err(DcaError::EmptyInput("labels file has no rows".into()));
    }
    let (rows, errors) = run_rows(
        labels,
        |l| l.image_id.as_str(),
        |_, label| quantify_one(label, heatmaps_dir, masks_dir),
    );
    if rows.is_empty() {
        return Err(all_failed("quantified", &errors));
    }
    let batch = HeatmapBatch { rows, errors };
    Ok(batch)
}

fn quantify_one(label: &HeatmapLabel, heatmaps_dir: &Path, masks_dir: &Path) -> Result<LabeledStats> {
    let file = format!("{}.png", label.image_id);
    let heatmap = load_image(&heatmaps_dir.join(&file))?;
    let mask = DcaMask::from_raster(load_image(&masks_dir.join(&file))?)?;
    Ok(LabeledStats::new(
        label,
        quantify_heatmap(&label.image_id, &heatmap, &mask)?,
    ))
}
