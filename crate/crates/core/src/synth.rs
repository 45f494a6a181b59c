//! Synthetic DCA superimposition.
//!
//! Binary mode blacks out everything outside the lens circle. Realistic mode
//! blurs the binary composite and pastes the original image back inside a
//! slightly smaller circle, leaving a soft band between content and black.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::batch::{all_failed, create_dir, run_rows, RowError, SourceRow};
use crate::blur::gaussian_blur;
use crate::error::{DcaError, Result};
use crate::image::ImageBuffer;
use crate::io::{load_image, save_image, write_csv};
use crate::mask::{outside_fraction, render_mask, Circle, DcaSizeCategory, SizeThresholds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealisticDcaParams {
    /// Blur width in pixels.
    pub sigma: f64,
    /// How far the paste-back circle is shrunk, in pixels.
    pub radius_reduction: f64,
}

impl RealisticDcaParams {
    pub fn new(sigma: f64, radius_reduction: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(DcaError::param(format!("sigma must be positive, got {sigma}")));
        }
        if !(radius_reduction.is_finite() && radius_reduction > 0.0) {
            return Err(DcaError::param(format!(
                "radius reduction must be positive, got {radius_reduction}"
            )));
        }
        Ok(Self {
            sigma,
            radius_reduction,
        })
    }

    /// `sigma = radius / 20` clamped to `[2, 15]`, reduction `ceil(3 sigma)`.
    pub fn for_circle(circle: &Circle) -> Self {
        let sigma = (circle.radius / 20.0).clamp(2.0, 15.0);
        Self::with_sigma(sigma)
    }

    pub fn with_sigma(sigma: f64) -> Self {
        Self {
            sigma,
            radius_reduction: (3.0 * sigma).ceil(),
        }
    }
}

/// Keeps pixels inside the closed disk and sets all others to 0.
pub fn superimpose_binary(img: &ImageBuffer, circle: &Circle) -> ImageBuffer {
    let mut out = img.clone();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !circle.contains(x, y) {
                out.pixel_mut(x, y).fill(0);
            }
        }
    }
    out
}

pub fn superimpose_realistic(
    img: &ImageBuffer,
    circle: &Circle,
    params: &RealisticDcaParams,
) -> Result<ImageBuffer> {
    let params = RealisticDcaParams::new(params.sigma, params.radius_reduction)?;
    let reduced_radius = circle.radius - params.radius_reduction;
    if reduced_radius < 1.0 {
        return Err(DcaError::param(format!(
            "radius reduction {} leaves a reduced radius of {reduced_radius:.2} px (< 1)",
            params.radius_reduction
        )));
    }
    let reduced = circle.with_radius(reduced_radius)?;
    let composite = superimpose_binary(img, circle);
    let mut out = gaussian_blur(&composite, params.sigma)?;
    for y in 0..img.height() {
        for x in 0..img.width() {
            if reduced.contains(x, y) {
                out.pixel_mut(x, y).copy_from_slice(img.pixel(x, y));
            }
        }
    }
    Ok(out)
}

/// Smallest radius the sampler will propose, as a fraction of the shorter side.
const MIN_RADIUS_FRACTION: f64 = 0.25;
const SAMPLE_ATTEMPTS: usize = 256;

/// Draws a circle whose rendered DCA area falls in `category`'s band.
///
/// Centers are uniform over the middle half of each axis; radii are uniform
/// over the interval whose area fraction lies in the band. Category Other
/// additionally requires at least one DCA pixel.
pub fn sample_circle<R: Rng>(
    rng: &mut R,
    width: usize,
    height: usize,
    category: DcaSizeCategory,
    thresholds: &SizeThresholds,
) -> Result<Circle> {
    thresholds.validate()?;
    let (lo, hi) = thresholds.band(category);
    let (w, h) = (width as f64, height as f64);
    let min_r = MIN_RADIUS_FRACTION * w.min(h);
    let in_band = |f: f64| f >= lo && f < hi && (category != DcaSizeCategory::Other || f > 0.0);

    for _ in 0..SAMPLE_ATTEMPTS {
        let cx = rng.random_range(0.25 * w..=0.75 * w);
        let cy = rng.random_range(0.25 * h..=0.75 * h);
        let far = [(0.0, 0.0), (w - 1.0, 0.0), (0.0, h - 1.0), (w - 1.0, h - 1.0)]
            .iter()
            .map(|&(x, y): &(f64, f64)| (x - cx).hypot(y - cy))
            .fold(0.0, f64::max);
        let frac = |r: f64| outside_fraction(&Circle { cx, cy, radius: r }, width, height);

        // Area fraction is non-increasing in the radius.
        let r_low = if hi.is_finite() {
            bisect(min_r, far, |r| frac(r) < hi)
        } else {
            min_r
        };
        let r_high = if lo > 0.0 {
            bisect(min_r, far, |r| frac(r) < lo)
        } else {
            far
        };
        if r_low > r_high {
            continue;
        }
        let radius = if r_high > r_low {
            rng.random_range(r_low..r_high)
        } else {
            r_low
        };
        let circle = Circle::new(cx, cy, radius)?;
        if in_band(frac(radius)) {
            return Ok(circle);
        }
    }
    Err(DcaError::Data(format!(
        "could not sample a {category} DCA circle for a {width}x{height} image"
    )))
}

/// Smallest `r` in `[lo, hi]` with `pred(r)`, assuming `pred` is monotone
/// false-then-true. Returns `hi` if it never turns true.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    if pred(lo) {
        return lo;
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthMode {
    Binary,
    Realistic,
}

impl SynthMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthMode::Binary => "binary",
            SynthMode::Realistic => "realistic",
        }
    }
}

impl fmt::Display for SynthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SynthMode {
    type Err = DcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "binary" => Ok(SynthMode::Binary),
            "realistic" => Ok(SynthMode::Realistic),
            _ => Err(DcaError::param(format!("unknown synthesis mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub mode: SynthMode,
    pub band: DcaSizeCategory,
    pub seed: u64,
    pub thresholds: SizeThresholds,
    /// Fixed blur width; per-circle default when absent.
    pub sigma: Option<f64>,
    /// Fixed paste-back shrink; `ceil(3 sigma)` when absent.
    pub radius_reduction: Option<f64>,
}

impl SynthConfig {
    pub fn new(mode: SynthMode, band: DcaSizeCategory, seed: u64) -> Self {
        Self {
            mode,
            band,
            seed,
            thresholds: SizeThresholds::default(),
            sigma: None,
            radius_reduction: None,
        }
    }

    fn realistic_params(&self, circle: &Circle) -> Result<RealisticDcaParams> {
        let base = match self.sigma {
            Some(s) => RealisticDcaParams::new(s, (3.0 * s).ceil())?,
            None => RealisticDcaParams::for_circle(circle),
        };
        RealisticDcaParams::new(base.sigma, self.radius_reduction.unwrap_or(base.radius_reduction))
    }
}

/// One row of the augmented manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthRecord {
    pub image_id: String,
    pub path: String,
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
    pub sigma: Option<f64>,
    pub radius_reduction: Option<f64>,
    pub area_fraction: f64,
    pub category: DcaSizeCategory,
}

#[derive(Debug, Clone, Default)]
pub struct SynthBatch {
    pub records: Vec<SynthRecord>,
    pub errors: Vec<RowError>,
}

pub const SYNTH_MANIFEST: &str = "manifest.csv";
pub const SYNTH_ERRORS: &str = "errors.csv";

/// Applies synthetic DCA to every row, writing `images/<id>.png`,
/// `masks/<id>.png`, `manifest.csv` and (when rows fail) `errors.csv` under
/// `out_dir`. Row `i` draws from stream `i` of a ChaCha generator keyed by the
/// seed, so output does not depend on scheduling.
pub fn batch_superimpose(
    rows: &[SourceRow],
    base_dir: Option<&Path>,
    out_dir: &Path,
    config: &SynthConfig,
) -> Result<SynthBatch> {
    if rows.is_empty() {
        return Err(DcaError::EmptyInput("synthesis manifest has no rows".into()));
    }
    config.thresholds.validate()?;
    let images_dir = out_dir.join("images");
    let masks_dir = out_dir.join("masks");
    create_dir(&images_dir)?;
    create_dir(&masks_dir)?;
    let (records, errors) = run_rows(
        rows,
        |r| r.image_id.as_str(),
        |i, row| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            synth_one(row, base_dir, &images_dir, &masks_dir, config, &mut rng)
        },
    );
    let batch = SynthBatch { records, errors };
    if !batch.errors.is_empty() {
        write_csv(&out_dir.join(SYNTH_ERRORS), &batch.errors)?;
    }
    if batch.records.is_empty() {
        return Err(all_failed("synthesized", &batch.errors));
    }
    write_csv(&out_dir.join(SYNTH_MANIFEST), &batch.records)?;
    Ok(batch)
}

fn synth_one(
    row: &SourceRow,
    base_dir: Option<&Path>,
    images_dir: &Path,
    masks_dir: &Path,
    config: &SynthConfig,
    rng: &mut ChaCha8Rng,
) -> Result<SynthRecord> {
    let img = load_image(&row.resolve(base_dir))?;
    let circle = sample_circle(rng, img.width(), img.height(), config.band, &config.thresholds)?;
    let (out, params) = match config.mode {
        SynthMode::Binary => (superimpose_binary(&img, &circle), None),
        SynthMode::Realistic => {
            let params = config.realistic_params(&circle)?;
            (superimpose_realistic(&img, &circle, &params)?, Some(params))
        }
    };
    let mask = render_mask(circle, img.width(), img.height())?;
    let file = format!("{}.png", row.image_id);
    let out_path: PathBuf = images_dir.join(&file);
    save_image(&out_path, &out)?;
    save_image(&masks_dir.join(&file), mask.raster())?;
    Ok(SynthRecord {
        image_id: row.image_id.clone(),
        path: format!("images/{file}"),
        cx: circle.cx,
        cy: circle.cy,
        radius: circle.radius,
        sigma: params.map(|p| p.sigma),
        radius_reduction: params.map(|p| p.radius_reduction),
        area_fraction: mask.area_fraction(),
        category: config.thresholds.category(mask.area_fraction()),
    })
}
