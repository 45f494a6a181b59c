//! Dark corner artifact (DCA) masks: the lens circle, its rendered raster,
//! detection from a lesion image and the area-based size category.
//!
//! Raster convention: 255 marks image content inside the lens circle, 0 marks
//! the DCA region.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::batch::{all_failed, create_dir, run_rows, RowError, SourceRow};
use crate::circle_fit::fit_circle_trimmed;
use crate::error::{DcaError, Result};
use crate::image::{ImageBuffer, PixelRegion};
use crate::io::{load_image, save_image, write_csv};

pub const INSIDE: u8 = 255;
pub const OUTSIDE: u8 = 0;

/// Lens circle in pixel coordinates. The center may lie outside the image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
}

impl Circle {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) || !cx.is_finite() || !cy.is_finite() {
            return Err(DcaError::param(format!(
                "circle needs finite center and positive radius, got ({cx}, {cy}, r={radius})"
            )));
        }
        Ok(Self { cx, cy, radius })
    }

    /// Closed-disk membership of the pixel center `(x, y)`.
    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let dx = x as f64 - self.cx;
        let dy = y as f64 - self.cy;
        dx * dx + dy * dy <= self.radius * self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Circle::new(self.cx, self.cy, radius)
    }
}

/// Fraction of a `width x height` image falling outside `circle`, counted
/// row by row. Agrees with [`Circle::contains`] on every pixel.
pub fn outside_fraction(circle: &Circle, width: usize, height: usize) -> f64 {
    let mut inside = 0usize;
    for y in 0..height {
        inside += (0..width).filter(|&x| circle.contains(x, y)).count();
    }
    1.0 - inside as f64 / (width * height) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcaMask {
    raster: ImageBuffer,
    circle: Option<Circle>,
    area_fraction: f64,
}

impl DcaMask {
    /// Wraps a mask raster read from disk. Every value must be 0 or 255.
    pub fn from_raster(raster: ImageBuffer) -> Result<Self> {
        let raster = raster.to_luma();
        if let Some(bad) = raster.data().iter().find(|&&v| v != INSIDE && v != OUTSIDE) {
            return Err(DcaError::Data(format!(
                "mask raster holds value {bad}, expected 0 or 255"
            )));
        }
        let outside = raster.data().iter().filter(|&&v| v == OUTSIDE).count();
        let area_fraction = outside as f64 / raster.pixel_count() as f64;
        Ok(Self {
            raster,
            circle: None,
            area_fraction,
        })
    }

    pub fn raster(&self) -> &ImageBuffer {
        &self.raster
    }

    /// The circle the raster was rendered from; `None` for rasters loaded
    /// from files.
    pub fn circle(&self) -> Option<Circle> {
        self.circle
    }

    /// DCA pixels divided by all pixels.
    pub fn area_fraction(&self) -> f64 {
        self.area_fraction
    }

    pub fn width(&self) -> usize {
        self.raster.width()
    }

    pub fn height(&self) -> usize {
        self.raster.height()
    }

    /// Pixels inside the lens circle (image content).
    pub fn content_region(&self) -> PixelRegion {
        let members = self.raster.data().iter().map(|&v| v == INSIDE).collect();
        PixelRegion::new(self.width(), self.height(), members).expect("raster-sized membership")
    }

    /// Pixels of the DCA itself.
    pub fn dca_region(&self) -> PixelRegion {
        self.content_region().complement()
    }
}

/// Renders the closed disk of `circle` as a mask raster.
pub fn render_mask(circle: Circle, width: usize, height: usize) -> Result<DcaMask> {
    let raster = ImageBuffer::from_fn_gray(width, height, |x, y| {
        if circle.contains(x, y) {
            INSIDE
        } else {
            OUTSIDE
        }
    })?;
    let outside = raster.data().iter().filter(|&&v| v == OUTSIDE).count();
    Ok(DcaMask {
        area_fraction: outside as f64 / (width * height) as f64,
        raster,
        circle: Some(circle),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DcaSizeCategory {
    Other,
    Small,
    Medium,
    Large,
}

impl DcaSizeCategory {
    pub const ALL: [DcaSizeCategory; 4] = [
        DcaSizeCategory::Small,
        DcaSizeCategory::Medium,
        DcaSizeCategory::Large,
        DcaSizeCategory::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DcaSizeCategory::Other => "other",
            DcaSizeCategory::Small => "small",
            DcaSizeCategory::Medium => "medium",
            DcaSizeCategory::Large => "large",
        }
    }
}

impl fmt::Display for DcaSizeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DcaSizeCategory {
    type Err = DcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "other" | "oth" => Ok(DcaSizeCategory::Other),
            "small" => Ok(DcaSizeCategory::Small),
            "medium" => Ok(DcaSizeCategory::Medium),
            "large" => Ok(DcaSizeCategory::Large),
            _ => Err(DcaError::param(format!("unknown DCA size category '{s}'"))),
        }
    }
}

/// Area-fraction cut points: below `other` is Other, then Small up to
/// `medium`, Medium up to `large`, Large from `large` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeThresholds {
    pub other: f64,
    pub medium: f64,
    pub large: f64,
}

impl Default for SizeThresholds {
    fn default() -> Self {
        Self {
            other: 0.01,
            medium: 0.10,
            large: 0.30,
        }
    }
}

impl SizeThresholds {
    pub fn new(other: f64, medium: f64, large: f64) -> Result<Self> {
        let t = Self { other, medium, large };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.other && self.other < self.medium && self.medium < self.large && self.large < 1.0;
        if !ok {
            return Err(DcaError::param(format!(
                "size thresholds must be strictly ascending in (0, 1), got ({}, {}, {})",
                self.other, self.medium, self.large
            )));
        }
        Ok(())
    }

    pub fn category(&self, area_fraction: f64) -> DcaSizeCategory {
        if area_fraction < self.other {
            DcaSizeCategory::Other
        } else if area_fraction < self.medium {
            DcaSizeCategory::Small
        } else if area_fraction < self.large {
            DcaSizeCategory::Medium
        } else {
            DcaSizeCategory::Large
        }
    }

    /// Half-open `[lo, hi)` area band of a category.
    pub fn band(&self, category: DcaSizeCategory) -> (f64, f64) {
        match category {
            DcaSizeCategory::Other => (0.0, self.other),
            DcaSizeCategory::Small => (self.other, self.medium),
            DcaSizeCategory::Medium => (self.medium, self.large),
            DcaSizeCategory::Large => (self.large, f64::INFINITY),
        }
    }
}

impl FromStr for SizeThresholds {
    type Err = DcaError;

    /// Parses `"0.01,0.1,0.3"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DcaError::param(format!("bad thresholds '{s}': {e}")))?;
        match parts[..] {
            [a, b, c] => SizeThresholds::new(a, b, c),
            _ => Err(DcaError::param(format!("expected three thresholds, got '{s}'"))),
        }
    }
}

pub fn categorize(mask: &DcaMask, thresholds: &SizeThresholds) -> Result<DcaSizeCategory> {
    thresholds.validate()?;
    Ok(thresholds.category(mask.area_fraction()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    /// Gray levels strictly below this count as dark.
    pub dark_threshold: u8,
    /// Minimum fraction of pixels that must be dark and border-connected.
    pub min_dark_fraction: f64,
    /// Fraction of boundary points with the largest residuals dropped before the refit.
    pub trim_fraction: f64,
    /// Largest accepted RMS geometric residual of the final fit, in pixels.
    pub max_rms_residual: f64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            dark_threshold: 40,
            min_dark_fraction: 0.01,
            trim_fraction: 0.10,
            max_rms_residual: 3.0,
        }
    }
}

pub const MIN_DETECT_SIDE: usize = 32;

/// Dark pixels 4-connected to the image border.
fn border_connected_dark(gray: &ImageBuffer, threshold: u8) -> Vec<bool> {
    let (w, h) = (gray.width(), gray.height());
    let dark: Vec<bool> = gray.data().iter().map(|&v| v < threshold).collect();
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let seed = |i: usize, seen: &mut Vec<bool>, stack: &mut Vec<usize>| {
        if dark[i] && !seen[i] {
            seen[i] = true;
            stack.push(i);
        }
    };
    for x in 0..w {
        seed(x, &mut seen, &mut stack);
        seed((h - 1) * w + x, &mut seen, &mut stack);
    }
    for y in 0..h {
        seed(y * w, &mut seen, &mut stack);
        seed(y * w + w - 1, &mut seen, &mut stack);
    }
    while let Some(i) = stack.pop() {
        let (x, y) = (i % w, i / w);
        if x > 0 {
            seed(i - 1, &mut seen, &mut stack);
        }
        if x + 1 < w {
            seed(i + 1, &mut seen, &mut stack);
        }
        if y > 0 {
            seed(i - w, &mut seen, &mut stack);
        }
        if y + 1 < h {
            seed(i + w, &mut seen, &mut stack);
        }
    }
    seen
}

/// Midpoints between each DCA pixel and its 4-neighbors outside the DCA.
fn boundary_points(dca: &[bool], w: usize, h: usize) -> Vec<(f64, f64)> {
    let mut points = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !dca[i] {
                continue;
            }
            let (fx, fy) = (x as f64, y as f64);
            if x > 0 && !dca[i - 1] {
                points.push((fx - 0.5, fy));
            }
            if x + 1 < w && !dca[i + 1] {
                points.push((fx + 0.5, fy));
            }
            if y > 0 && !dca[i - w] {
                points.push((fx, fy - 0.5));
            }
            if y + 1 < h && !dca[i + w] {
                points.push((fx, fy + 0.5));
            }
        }
    }
    points
}

/// Finds the lens circle of a lesion image and renders its mask.
pub fn detect_dca_circle(img: &ImageBuffer, config: &DetectConfig) -> Result<DcaMask> {
    let (w, h) = (img.width(), img.height());
    if w < MIN_DETECT_SIDE || h < MIN_DETECT_SIDE {
        return Err(DcaError::param(format!(
            "detection needs at least {MIN_DETECT_SIDE}x{MIN_DETECT_SIDE} pixels, got {w}x{h}"
        )));
    }
    let gray = img.to_luma();
    let dca = border_connected_dark(&gray, config.dark_threshold);
    let dark_count = dca.iter().filter(|&&d| d).count();
    let dark_fraction = dark_count as f64 / (w * h) as f64;
    if dark_fraction < config.min_dark_fraction {
        return Err(DcaError::NoDcaDetected(format!(
            "only {:.3}% of pixels are dark and border-connected",
            100.0 * dark_fraction
        )));
    }

    let points = boundary_points(&dca, w, h);
    let fit = fit_circle_trimmed(&points, config.trim_fraction).ok_or_else(|| {
        DcaError::NoDcaDetected(format!(
            "circle fit degenerate on {} boundary points",
            points.len()
        ))
    })?;
    if fit.rms_residual > config.max_rms_residual {
        return Err(DcaError::NoDcaDetected(format!(
            "circle fit residual {:.2} px exceeds {:.2} px",
            fit.rms_residual, config.max_rms_residual
        )));
    }

    // The dark zone has to sit outside the lens, not be a dark disk inside it.
    let dark_outside = dca
        .iter()
        .enumerate()
        .filter(|(i, &d)| d && !fit.circle.contains(i % w, i / w))
        .count();
    if 2 * dark_outside < dark_count {
        return Err(DcaError::NoDcaDetected(
            "dark region lies inside the fitted circle".into(),
        ));
    }

    render_mask(fit.circle, w, h)
}

/// One row of the circle CSV. Circle fields are empty for masks read from
/// disk, whose raster carries no fitted circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskRecord {
    pub image_id: String,
    pub cx: Option<f64>,
    pub cy: Option<f64>,
    pub radius: Option<f64>,
    pub area_fraction: f64,
    pub category: DcaSizeCategory,
}

impl MaskRecord {
    pub fn new(image_id: &str, mask: &DcaMask, thresholds: &SizeThresholds) -> Self {
        let circle = mask.circle();
        Self {
            image_id: image_id.to_string(),
            cx: circle.map(|c| c.cx),
            cy: circle.map(|c| c.cy),
            radius: circle.map(|c| c.radius),
            area_fraction: mask.area_fraction(),
            category: thresholds.category(mask.area_fraction()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MaskBatch {
    pub records: Vec<MaskRecord>,
    pub errors: Vec<RowError>,
}

pub const MASK_RECORDS: &str = "circles.csv";
pub const MASK_ERRORS: &str = "errors.csv";

/// Detects the DCA of every row, writing `masks/<id>.png`, `circles.csv` and
/// (when rows fail) `errors.csv` under `out_dir`.
pub fn detect_batch(
    rows: &[SourceRow],
    base_dir: Option<&Path>,
    out_dir: &Path,
    config: &DetectConfig,
    thresholds: &SizeThresholds,
) -> Result<MaskBatch> {
    if rows.is_empty() {
        return Err(DcaError::EmptyInput("mask manifest has no rows".into()));
    }
    thresholds.validate()?;
    let masks_dir = out_dir.join("masks");
    create_dir(&masks_dir)?;
    let (records, errors) = run_rows(
        rows,
        |r| r.image_id.as_str(),
        |_, row| {
            let mask = detect_dca_circle(&load_image(&row.resolve(base_dir))?, config)?;
            save_image(&masks_dir.join(format!("{}.png", row.image_id)), mask.raster())?;
            Ok(MaskRecord::new(&row.image_id, &mask, thresholds))
        },
    );
    finish_mask_batch(out_dir, records, errors, "masked")
}

/// Categorizes stored mask rasters. Each row's path points at a mask PNG.
pub fn categorize_batch(
    rows: &[SourceRow],
    base_dir: Option<&Path>,
    out_dir: &Path,
    thresholds: &SizeThresholds,
) -> Result<MaskBatch> {
    if rows.is_empty() {
        return Err(DcaError::EmptyInput("no masks to categorize".into()));
    }
    thresholds.validate()?;
    create_dir(out_dir)?;
    let (records, errors) = run_rows(
        rows,
        |r| r.image_id.as_str(),
        |_, row| {
            let mask = DcaMask::from_raster(load_image(&row.resolve(base_dir))?)?;
            Ok(MaskRecord::new(&row.image_id, &mask, thresholds))
        },
    );
    finish_mask_batch(out_dir, records, errors, "categorized")
}

fn finish_mask_batch(
    out_dir: &Path,
    records: Vec<MaskRecord>,
    errors: Vec<RowError>,
    what: &str,
) -> Result<MaskBatch> {
    if !errors.is_empty() {
        write_csv(&out_dir.join(MASK_ERRORS), &errors)?;
    }
    if records.is_empty() {
        return Err(all_failed(what, &errors));
    }
    write_csv(&out_dir.join(MASK_RECORDS), &records)?;
    Ok(MaskBatch { records, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circle_rejects_zero_radius() {
        assert!(Circle::new(1.0, 1.0, 0.0).is_err());
        assert!(Circle::new(1.0, 1.0, -3.0).is_err());
        assert!(Circle::new(f64::NAN, 1.0, 3.0).is_err());
    }

    #[test]
    fn render_covering_circle() {
        let diag = (64f64 * 64.0 + 48.0 * 48.0).sqrt();
        let m = render_mask(Circle::new(10.0, 5.0, diag).unwrap(), 64, 48).unwrap();
        assert!(m.raster().data().iter().all(|&v| v == INSIDE));
        assert_eq!(m.area_fraction(), 0.0);
    }

    #[test]
    fn render_matches_pixel_count_oracle() {
        let c = Circle::new(128.0, 128.0, 100.0).unwrap();
        let m = render_mask(c, 256, 256).unwrap();
        let mut outside = 0usize;
        for y in 0..256i64 {
            for x in 0..256i64 {
                if (x - 128).pow(2) + (y - 128).pow(2) > 100 * 100 {
                    outside += 1;
                }
            }
        }
        assert_eq!(m.area_fraction(), outside as f64 / 65536.0);
        assert_eq!(outside_fraction(&c, 256, 256), m.area_fraction());
    }

    #[test]
    fn categorize_examples() {
        let t = SizeThresholds::default();
        assert_eq!(t.category(0.005), DcaSizeCategory::Other);
        assert_eq!(t.category(0.0), DcaSizeCategory::Other);
        assert_eq!(t.category(0.01), DcaSizeCategory::Small);
        assert_eq!(t.category(0.1), DcaSizeCategory::Medium);
        assert_eq!(t.category(0.5), DcaSizeCategory::Large);

        let covering = render_mask(Circle::new(16.0, 16.0, 100.0).unwrap(), 32, 32).unwrap();
        assert_eq!(categorize(&covering, &t).unwrap(), DcaSizeCategory::Other);
        let bad = SizeThresholds {
            other: 0.2,
            medium: 0.1,
            large: 0.3,
        };
        assert!(categorize(&covering, &bad).is_err());
        assert!(SizeThresholds::new(0.0, 0.1, 0.3).is_err());
        assert!(SizeThresholds::new(0.1, 0.1, 0.3).is_err());
        assert!(SizeThresholds::new(0.1, 0.2, 1.0).is_err());
    }

    #[test]
    fn thresholds_parse() {
        let t: SizeThresholds = "0.02, 0.2,0.4".parse().unwrap();
        assert_eq!(
            t,
            SizeThresholds {
                other: 0.02,
                medium: 0.2,
                large: 0.4
            }
        );
        assert!("0.1,0.2".parse::<SizeThresholds>().is_err());
        assert!("a,b,c".parse::<SizeThresholds>().is_err());
    }

    #[test]
    fn mask_from_raster_validates_values() {
        let ok = ImageBuffer::from_fn_gray(4, 4, |x, _| if x < 1 { 0 } else { 255 }).unwrap();
        let m = DcaMask::from_raster(ok).unwrap();
        assert_eq!(m.area_fraction(), 0.25);
        assert!(m.circle().is_none());
        let bad = ImageBuffer::filled(4, 4, 1, 128).unwrap();
        assert!(DcaMask::from_raster(bad).is_err());
    }

    fn binary_dca(w: usize, h: usize, c: Circle, fill: u8) -> ImageBuffer {
        ImageBuffer::from_fn_gray(w, h, |x, y| if c.contains(x, y) { fill } else { 0 }).unwrap()
    }

    #[test]
    fn detects_centered_circle() {
        let truth = Circle::new(128.0, 128.0, 100.0).unwrap();
        let img = binary_dca(256, 256, truth, 170);
        let m = detect_dca_circle(&img, &DetectConfig::default()).unwrap();
        let c = m.circle().unwrap();
        assert!(
            (c.cx - 128.0).abs() <= 2.0 && (c.cy - 128.0).abs() <= 2.0,
            "{c:?}"
        );
        assert!((c.radius - 100.0).abs() <= 2.0, "{c:?}");
    }

    #[test]
    fn no_dca_in_bright_or_black_images() {
        let cfg = DetectConfig::default();
        let bright = ImageBuffer::filled(64, 64, 3, 200).unwrap();
        assert!(matches!(
            detect_dca_circle(&bright, &cfg),
            Err(DcaError::NoDcaDetected(_))
        ));
        let black = ImageBuffer::filled(64, 64, 1, 0).unwrap();
        assert!(matches!(
            detect_dca_circle(&black, &cfg),
            Err(DcaError::NoDcaDetected(_))
        ));
    }

    #[test]
    fn too_small_for_detection() {
        let img = ImageBuffer::filled(31, 64, 1, 0).unwrap();
        assert!(matches!(
            detect_dca_circle(&img, &DetectConfig::default()),
            Err(DcaError::Parameter(_))
        ));
    }

    #[test]
    fn dark_disk_is_not_a_lens() {
        // A black blob touching the border, bright elsewhere.
        let blob = Circle::new(0.0, 32.0, 20.0).unwrap();
        let img =
            ImageBuffer::from_fn_gray(64, 64, |x, y| if blob.contains(x, y) { 0 } else { 200 }).unwrap();
        assert!(detect_dca_circle(&img, &DetectConfig::default()).is_err());
    }

    #[test]
    fn detect_and_categorize_batches() {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("src");
        std::fs::create_dir_all(&src).unwrap();
        let truth = Circle::new(48.0, 48.0, 40.0).unwrap();
        save_image(&src.join("a.png"), &binary_dca(96, 96, truth, 180)).unwrap();
        save_image(&src.join("b.png"), &ImageBuffer::filled(96, 96, 1, 200).unwrap()).unwrap();
        let rows = vec![SourceRow::new("a", "a.png"), SourceRow::new("b", "b.png")];
        let out = dir.path().join("out");
        let t = SizeThresholds::default();
        let batch = detect_batch(&rows, Some(&src), &out, &DetectConfig::default(), &t).unwrap();
        assert_eq!(batch.records.len(), 1);
        assert_eq!(batch.errors[0].image_id, "b");
        let rec = &batch.records[0];
        assert!((rec.radius.unwrap() - 40.0).abs() <= 2.0);
        assert!(out.join(MASK_RECORDS).exists() && out.join(MASK_ERRORS).exists());
        let header = std::fs::read_to_string(out.join(MASK_RECORDS)).unwrap();
        assert!(header.starts_with("image_id,cx,cy,radius,area_fraction,category\n"));

        let stored = vec![SourceRow::new("a", "masks/a.png")];
        let cat = categorize_batch(&stored, Some(&out), &dir.path().join("cat"), &t).unwrap();
        assert_eq!(cat.records[0].radius, None);
        assert_eq!(cat.records[0].area_fraction, rec.area_fraction);
        assert_eq!(cat.records[0].category, rec.category);
        assert!(detect_batch(&[], None, &out, &DetectConfig::default(), &t).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn render_agrees_with_predicate(cx in -20.0f64..80.0, cy in -20.0f64..80.0, r in 0.5f64..90.0) {
            let c = Circle::new(cx, cy, r).unwrap();
            let m = render_mask(c, 48, 40).unwrap();
            let mut zeros = 0;
            for y in 0..40 {
                for x in 0..48 {
                    let v = m.raster().get(x, y, 0);
                    prop_assert_eq!(v == INSIDE, c.contains(x, y));
                    zeros += usize::from(v == OUTSIDE);
                }
            }
            prop_assert_eq!(m.area_fraction(), zeros as f64 / (48.0 * 40.0));
            prop_assert_eq!(render_mask(c, 48, 40).unwrap(), m);
        }

        #[test]
        fn categorize_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let t = SizeThresholds::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(t.category(lo) <= t.category(hi));
        }
    }
}
