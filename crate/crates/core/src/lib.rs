//! Toolkit for dark corner artifacts (DCA) in dermoscopic images.
//!
//! - [`mask`]: lens-circle detection, mask rendering and size categories
//! - [`synth`]: binary and soft-edged synthetic DCA superimposition
//! - [`inpaint`]: DCA removal by fast-marching and Navier-Stokes inpainting
//! - [`heatmap`]: internal/external RMS contrast and brightness of heatmaps
//! - [`dataset`] and [`metrics`]: DCA-split manifests and classification metrics

pub mod batch;
pub mod blur;
pub mod circle_fit;
pub mod dataset;
pub mod error;
pub mod heatmap;
pub mod image;
pub mod inpaint;
pub mod io;
pub mod mask;
pub mod metrics;
pub mod synth;

pub use crate::blur::gaussian_blur;
pub use crate::dataset::{build_manifest, Label, ManifestRow};
pub use crate::error::{DcaError, Result};
pub use crate::heatmap::{aggregate_groups, quantify_heatmap, split_regions, GroupAggregate, RegionStatsRow};
pub use crate::image::{
    enhance_contrast, locate_extrema, region_brightness, region_rms, to_grayscale, ExtremaReport,
    ImageBuffer, IntensityScale, PixelRegion,
};
pub use crate::inpaint::{InpaintMethod, InpaintParams, InpaintRequest};
pub use crate::mask::{
    categorize, detect_dca_circle, render_mask, Circle, DcaMask, DcaSizeCategory, DetectConfig,
    SizeThresholds,
};
pub use crate::metrics::{compute_auc, compute_metrics, experiment_report, MetricsReport, PredictionRecord};
pub use crate::synth::{superimpose_binary, superimpose_realistic, RealisticDcaParams};
