use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dca_forge::inpaint::InpaintMethod;
use dca_forge::synth::SynthMode;
use dca_forge::{DcaSizeCategory, SizeThresholds};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "dca-forge",
    version,
    about = "Dark corner artifact toolkit for dermoscopic images"
)]
pub struct Cli {
    /// Where to write the run metadata JSON; derived from the output path by default.
    #[arg(long, global = true, value_name = "PATH")]
    pub metadata: Option<PathBuf>,

    /// Suppress the summary printed to stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Detect the lens circle of each image and write DCA masks.
    Mask(MaskArgs),
    /// Assign size categories to stored DCA masks.
    Categorize(CategorizeArgs),
    /// Superimpose synthetic DCA onto images.
    Synth(SynthArgs),
    /// Remove DCA by inpainting the masked region.
    Inpaint(InpaintArgs),
    /// Internal/external contrast and brightness of heatmaps.
    HeatmapStats(HeatmapArgs),
    /// Classification metrics from prediction files.
    Metrics(MetricsArgs),
    /// Build the DCA-split balanced dataset manifest.
    DatasetBuild(DatasetArgs),
    /// Side-by-side original / contrast-enhanced / heatmap panels.
    ContrastProbe(ProbeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mask(_) => "mask",
            Command::Categorize(_) => "categorize",
            Command::Synth(_) => "synth",
            Command::Inpaint(_) => "inpaint",
            Command::HeatmapStats(_) => "heatmap-stats",
            Command::Metrics(_) => "metrics",
            Command::DatasetBuild(_) => "dataset-build",
            Command::ContrastProbe(_) => "contrast-probe",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ManifestInput {
    /// CSV with image_id and path columns.
    #[arg(long, value_name = "CSV")]
    pub manifest: PathBuf,

    /// Directory relative paths are resolved against; defaults to the manifest's directory.
    #[arg(long, value_name = "DIR")]
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MaskArgs {
    #[command(flatten)]
    pub input: ManifestInput,

    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Gray levels below this count as dark.
    #[arg(long, default_value_t = 40)]
    pub dark_threshold: u8,

    #[arg(long, default_value_t = 0.01)]
    pub min_dark_fraction: f64,

    /// Largest accepted RMS residual of the circle fit, pixels.
    #[arg(long, default_value_t = 3.0)]
    pub max_residual: f64,

    /// Category bounds other,medium,large as area fractions.
    #[arg(long, default_value = "0.01,0.10,0.30")]
    pub thresholds: SizeThresholds,
}

#[derive(Debug, Args, Serialize)]
pub struct CategorizeArgs {
    /// Directory of mask PNGs (values 0 and 255); the file stem is the image id.
    #[arg(long, value_name = "DIR")]
    pub masks_dir: PathBuf,

    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    #[arg(long, default_value = "0.01,0.10,0.30")]
    pub thresholds: SizeThresholds,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long)]
    pub mode: SynthMode,

    #[command(flatten)]
    pub input: ManifestInput,

    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Size band the sampled circles must fall into.
    #[arg(long)]
    pub band: DcaSizeCategory,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Blur width of realistic DCA, pixels; scales with the radius when absent.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Paste-back shrink of realistic DCA, pixels.
    #[arg(long)]
    pub radius_reduction: Option<f64>,

    #[arg(long, default_value = "0.01,0.10,0.30")]
    pub thresholds: SizeThresholds,
}

#[derive(Debug, Args, Serialize)]
pub struct InpaintArgs {
    /// telea or ns.
    #[arg(long)]
    pub method: InpaintMethod,

    #[command(flatten)]
    pub input: ManifestInput,

    /// Directory holding <image_id>.png masks.
    #[arg(long, value_name = "DIR")]
    pub masks_dir: PathBuf,

    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Fast-marching neighborhood radius, pixels.
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,

    /// Navier-Stokes iteration budget.
    #[arg(long, default_value_t = 300)]
    pub iters: usize,

    /// Navier-Stokes time step.
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,

    /// Growth of the DCA region before filling, pixels.
    #[arg(long, default_value_t = 2)]
    pub dilation: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HeatmapArgs {
    /// Directory holding <image_id>.png heatmaps.
    #[arg(long, value_name = "DIR")]
    pub heatmaps_dir: PathBuf,

    /// Directory holding <image_id>.png DCA masks.
    #[arg(long, value_name = "DIR")]
    pub masks_dir: PathBuf,

    /// CSV with image_id, model, test_set, dca_size.
    #[arg(long, value_name = "CSV")]
    pub labels: PathBuf,

    /// Per-heatmap statistics CSV.
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,

    /// Per-group aggregate CSV; `<out stem>_groups.csv` by default.
    #[arg(long, value_name = "CSV")]
    pub groups: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsArgs {
    /// Predictions CSV (image_id, true_label, score).
    #[arg(
        long,
        value_name = "CSV",
        conflicts_with = "runs",
        required_unless_present = "runs"
    )]
    pub preds: Option<PathBuf>,

    /// CSV of slice, variant, model, preds; one prediction file per run.
    #[arg(long, value_name = "CSV", requires = "out")]
    pub runs: Option<PathBuf>,

    /// Scores at or above this predict melanoma.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,

    /// Output file: JSON for --preds, report CSV for --runs.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DatasetArgs {
    /// Directory of clean melanoma images.
    #[arg(long, value_name = "DIR")]
    pub clean_melanoma: PathBuf,

    /// Directory of clean non-melanoma images.
    #[arg(long, value_name = "DIR")]
    pub clean_non_melanoma: PathBuf,

    /// CSV of DCA test images: image_id, path, label, dca_category, source.
    #[arg(long, value_name = "CSV")]
    pub dca: Option<PathBuf>,

    /// Source tag for clean images.
    #[arg(long, default_value = "clean")]
    pub source: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, value_name = "PATH")]
    pub image: PathBuf,

    /// Contrast factor around mid-gray.
    #[arg(long, default_value_t = 2.0)]
    pub factor: f64,

    /// Optional heatmap of the same size; extrema are circled.
    #[arg(long, value_name = "PATH")]
    pub heatmap: Option<PathBuf>,

    /// Output PNG.
    #[arg(long, value_name = "PNG")]
    pub out: PathBuf,
}
