//! Binary classification metrics with melanoma as the positive class.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{DcaError, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub image_id: String,
    pub true_label: Label,
    /// Melanoma probability.
    pub score: f64,
}

impl PredictionRecord {
    pub fn new(image_id: impl Into<String>, true_label: Label, score: f64) -> Self {
        Self {
            image_id: image_id.into(),
            true_label,
            score,
        }
    }
}

/// Confusion counts and derived rates. Ratios with a zero denominator are
/// `None`; `auc` is `None` when only one class is present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub acc: f64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub precision: Option<f64>,
    pub f1: Option<f64>,
    pub auc: Option<f64>,
}

impl MetricsReport {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn validate(preds: &[PredictionRecord]) -> Result<()> {
    if preds.is_empty() {
        return Err(DcaError::EmptyInput("no predictions".into()));
    }
    if let Some(p) = preds.iter().find(|p| !(0.0..=1.0).contains(&p.score)) {
        return Err(DcaError::Data(format!(
            "score {} of '{}' is outside [0, 1]",
            p.score, p.image_id
        )));
    }
    Ok(())
}

/// Counts and rates at `threshold`; a score at or above it predicts melanoma.
pub fn compute_metrics(preds: &[PredictionRecord], threshold: f64) -> Result<MetricsReport> {
    validate(preds)?;
    if !threshold.is_finite() {
        return Err(DcaError::param(format!(
            "threshold must be finite, got {threshold}"
        )));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for p in preds {
        match (p.true_label.is_positive(), p.score >= threshold) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
            (true, false) => fn_ += 1,
        }
    }
    let tpr = ratio(tp, tp + fn_);
    let precision = ratio(tp, tp + fp);
    let f1 = match (precision, tpr) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Ok(MetricsReport {
        tp,
        fp,
        tn,
        fn_,
        acc: (tp + tn) as f64 / preds.len() as f64,
        tpr,
        tnr: ratio(tn, tn + fp),
        precision,
        f1,
        auc: compute_auc(preds).ok(),
    })
}

/// Area under the ROC curve by trapezoids over every distinct score.
/// Tied positive/negative pairs count one half.
pub fn compute_auc(preds: &[PredictionRecord]) -> Result<f64> {
    validate(preds)?;
    let mut sorted: Vec<(f64, bool)> = preds
        .iter()
        .map(|p| (p.score, p.true_label.is_positive()))
        .collect();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let pos = sorted.iter().filter(|s| s.1).count() as u128;
    let neg = sorted.len() as u128 - pos;
    if pos == 0 || neg == 0 {
        return Err(DcaError::Data(
            "AUC needs both melanoma and non-melanoma predictions".into(),
        ));
    }
    // Twice the area in units of one (positive, negative) cell.
    let mut area2: u128 = 0;
    let mut tp: u128 = 0;
    let mut i = 0;
    while i < sorted.len() {
        let (mut p, mut n) = (0u128, 0u128);
        let score = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == score {
            if sorted[i].1 {
                p += 1;
            } else {
                n += 1;
            }
            i += 1;
        }
        area2 += n * (2 * tp + p);
        tp += p;
    }
    Ok(area2 as f64 / (2 * pos * neg) as f64)
}

/// Identifies one evaluated test slice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReportKey {
    pub slice: String,
    pub variant: String,
    pub model: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub slice: String,
    pub variant: String,
    pub model: String,
    pub acc: f64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub precision: Option<f64>,
    pub f1: Option<f64>,
    pub auc: Option<f64>,
}

/// One report row per (slice, variant, model), in input order.
pub fn experiment_report(entries: &[(ReportKey, MetricsReport)]) -> Result<Vec<ReportRow>> {
    if entries.is_empty() {
        return Err(DcaError::EmptyInput("no experiment runs".into()));
    }
    let mut seen = HashSet::new();
    entries
        .iter()
        .map(|(key, m)| {
            if !seen.insert(key) {
                return Err(DcaError::DuplicateKey(format!(
                    "{}/{}/{}",
                    key.slice, key.variant, key.model
                )));
            }
            Ok(ReportRow {
                slice: key.slice.clone(),
                variant: key.variant.clone(),
                model: key.model.clone(),
                acc: m.acc,
                tpr: m.tpr,
                tnr: m.tnr,
                precision: m.precision,
                f1: m.f1,
                auc: m.auc,
            })
        })
        .collect()
}
