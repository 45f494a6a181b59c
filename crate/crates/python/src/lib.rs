//! Python module `dca_forge`: images, DCA masks, synthesis, inpainting,
//! heatmap statistics and classification metrics.

use std::path::PathBuf;

use dca_forge::{
    compute_auc as core_auc, compute_metrics as core_metrics, detect_dca_circle as core_detect,
    enhance_contrast as core_contrast, gaussian_blur as core_blur, quantify_heatmap as core_quantify,
    region_rms as core_rms, render_mask, superimpose_binary as core_binary,
    superimpose_realistic as core_realistic, Circle, DcaError, DcaMask, DetectConfig, ImageBuffer,
    InpaintMethod, InpaintParams, InpaintRequest, IntensityScale, Label, PixelRegion, PredictionRecord,
    RealisticDcaParams, SizeThresholds,
};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn py_err(e: DcaError) -> PyErr {
    match e {
        DcaError::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for dca_forge::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// 8-bit image with 1 (gray) or 3 (RGB) interleaved channels.
#[pyclass(name = "Image", module = "dca_forge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyImage(ImageBuffer);

#[pymethods]
impl PyImage {
    #[new]
    fn new(width: usize, height: usize, channels: usize, data: &[u8]) -> PyResult<Self> {
        ImageBuffer::new(width, height, channels, data.to_vec())
            .py()
            .map(Self)
    }

    #[staticmethod]
    fn filled(width: usize, height: usize, channels: usize, value: u8) -> PyResult<Self> {
        ImageBuffer::filled(width, height, channels, value).py().map(Self)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        dca_forge::io::load_image(&path).py().map(Self)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        dca_forge::io::save_image(&path, &self.0).py()
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.0.channels()
    }

    /// Row-major interleaved pixel bytes.
    fn tobytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.0.data())
    }

    /// Channel values of one pixel as `bytes`.
    fn pixel(&self, x: usize, y: usize) -> PyResult<Vec<u8>> {
        if x >= self.0.width() || y >= self.0.height() {
            return Err(PyValueError::new_err(format!(
                "({x}, {y}) is outside the {}x{} image",
                self.0.width(),
                self.0.height()
            )));
        }
        Ok(self.0.pixel(x, y).to_vec())
    }

    fn to_luma(&self) -> Self {
        Self(self.0.to_luma())
    }

    fn to_rgb(&self) -> Self {
        Self(self.0.to_rgb())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "Image({}x{}, channels={})",
            self.0.width(),
            self.0.height(),
            self.0.channels()
        )
    }
}

/// Lens circle in pixel coordinates.
#[pyclass(name = "Circle", module = "dca_forge", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyCircle(Circle);

#[pymethods]
impl PyCircle {
    #[new]
    fn new(cx: f64, cy: f64, radius: f64) -> PyResult<Self> {
        Circle::new(cx, cy, radius).py().map(Self)
    }

    #[getter]
    fn cx(&self) -> f64 {
        self.0.cx
    }

    #[getter]
    fn cy(&self) -> f64 {
        self.0.cy
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius
    }

    fn __repr__(&self) -> String {
        format!(
            "Circle(cx={}, cy={}, radius={})",
            self.0.cx, self.0.cy, self.0.radius
        )
    }
}

/// Binary DCA mask: 255 inside the lens circle, 0 on the artifact.
#[pyclass(name = "Mask", module = "dca_forge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMask(DcaMask);

#[pymethods]
impl PyMask {
    #[staticmethod]
    fn render(circle: &PyCircle, width: usize, height: usize) -> PyResult<Self> {
        render_mask(circle.0, width, height).py().map(Self)
    }

    #[staticmethod]
    fn from_image(image: &PyImage) -> PyResult<Self> {
        DcaMask::from_raster(image.0.clone()).py().map(Self)
    }

    #[getter]
    fn area_fraction(&self) -> f64 {
        self.0.area_fraction()
    }

    #[getter]
    fn circle(&self) -> Option<PyCircle> {
        self.0.circle().map(PyCircle)
    }

    /// Size category name for the given `(other, medium, large)` thresholds.
    #[pyo3(signature = (thresholds = None))]
    fn category(&self, thresholds: Option<(f64, f64, f64)>) -> PyResult<&'static str> {
        let t = match thresholds {
            Some((o, m, l)) => SizeThresholds::new(o, m, l).py()?,
            None => SizeThresholds::default(),
        };
        dca_forge::categorize(&self.0, &t).py().map(|c| c.as_str())
    }

    fn to_image(&self) -> PyImage {
        PyImage(self.0.raster().clone())
    }

    fn __repr__(&self) -> String {
        format!(
            "Mask({}x{}, area_fraction={:.4})",
            self.0.width(),
            self.0.height(),
            self.0.area_fraction()
        )
    }
}

/// Finds the lens circle of an image with a dark corner artifact.
#[pyfunction]
#[pyo3(signature = (image, dark_threshold = 40, min_dark_fraction = 0.01, max_residual = 3.0))]
fn detect_dca_circle(
    py: Python<'_>,
    image: &PyImage,
    dark_threshold: u8,
    min_dark_fraction: f64,
    max_residual: f64,
) -> PyResult<PyMask> {
    let config = DetectConfig {
        dark_threshold,
        min_dark_fraction,
        max_rms_residual: max_residual,
        ..DetectConfig::default()
    };
    py.detach(|| core_detect(&image.0, &config)).py().map(PyMask)
}

#[pyfunction]
fn superimpose_binary(image: &PyImage, circle: &PyCircle) -> PyImage {
    PyImage(core_binary(&image.0, &circle.0))
}

/// Soft-edged DCA. `sigma` defaults to `radius / 20` clamped to `[2, 15]`,
/// `radius_reduction` to `ceil(3 sigma)`.
#[pyfunction]
#[pyo3(signature = (image, circle, sigma = None, radius_reduction = None))]
fn superimpose_realistic(
    py: Python<'_>,
    image: &PyImage,
    circle: &PyCircle,
    sigma: Option<f64>,
    radius_reduction: Option<f64>,
) -> PyResult<PyImage> {
    let params = match (sigma, radius_reduction) {
        (None, None) => RealisticDcaParams::for_circle(&circle.0),
        (s, r) => {
            let s = s.unwrap_or_else(|| RealisticDcaParams::for_circle(&circle.0).sigma);
            RealisticDcaParams::new(s, r.unwrap_or((3.0 * s).ceil())).py()?
        }
    };
    py.detach(|| core_realistic(&image.0, &circle.0, &params))
        .py()
        .map(PyImage)
}

/// Fills the DCA region of `mask`, dilated by `dilation` pixels.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (image, mask, method = "telea", dilation = 2, radius = 5.0, iterations = 300, dt = 0.1))]
fn inpaint(
    py: Python<'_>,
    image: &PyImage,
    mask: &PyMask,
    method: &str,
    dilation: usize,
    radius: f64,
    iterations: usize,
    dt: f64,
) -> PyResult<PyImage> {
    let method: InpaintMethod = method.parse().py()?;
    let params = InpaintParams {
        inpaint_radius: radius,
        ns_iterations: iterations,
        ns_dt: dt,
    };
    let hole = mask.0.dca_region().dilate(dilation);
    py.detach(|| {
        InpaintRequest::new(&image.0, &hole, method)
            .with_params(params)
            .run()
    })
    .py()
    .map(|o| PyImage(o.image))
}

#[pyfunction]
fn gaussian_blur(py: Python<'_>, image: &PyImage, sigma: f64) -> PyResult<PyImage> {
    py.detach(|| core_blur(&image.0, sigma)).py().map(PyImage)
}

#[pyfunction]
fn enhance_contrast(image: &PyImage, factor: f64) -> PyResult<PyImage> {
    core_contrast(&image.0, factor).py().map(PyImage)
}

/// Population standard deviation of the member pixels of a gray image.
#[pyfunction]
#[pyo3(signature = (image, members, normalized = false))]
fn region_rms(image: &PyImage, members: Vec<bool>, normalized: bool) -> PyResult<f64> {
    let region = PixelRegion::new(image.0.width(), image.0.height(), members).py()?;
    let scale = if normalized {
        IntensityScale::Normalized
    } else {
        IntensityScale::Raw
    };
    core_rms(&image.0, &region, scale).py()
}

/// Internal and external RMS contrast and brightness of a heatmap.
#[pyfunction]
#[pyo3(signature = (heatmap, mask, image_id = ""))]
fn quantify_heatmap<'py>(
    py: Python<'py>,
    heatmap: &PyImage,
    mask: &PyMask,
    image_id: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let row = core_quantify(image_id, &heatmap.0, &mask.0).py()?;
    let d = PyDict::new(py);
    d.set_item("image_id", row.image_id)?;
    d.set_item("internal_rms", row.internal_rms)?;
    d.set_item("external_rms", row.external_rms)?;
    d.set_item("rms_diff", row.rms_diff)?;
    d.set_item("internal_brightness", row.internal_brightness)?;
    d.set_item("external_brightness", row.external_brightness)?;
    d.set_item("brightness_diff", row.brightness_diff)?;
    Ok(d)
}

fn predictions(labels: Vec<String>, scores: Vec<f64>) -> PyResult<Vec<PredictionRecord>> {
    if labels.len() != scores.len() {
        return Err(PyValueError::new_err(format!(
            "{} labels but {} scores",
            labels.len(),
            scores.len()
        )));
    }
    labels
        .iter()
        .zip(scores)
        .enumerate()
        .map(|(i, (l, s))| Ok(PredictionRecord::new(i.to_string(), l.parse::<Label>().py()?, s)))
        .collect()
}

/// Confusion counts and rates; labels are `melanoma` or `non_melanoma`.
#[pyfunction]
#[pyo3(signature = (labels, scores, threshold = 0.5))]
fn compute_metrics<'py>(
    py: Python<'py>,
    labels: Vec<String>,
    scores: Vec<f64>,
    threshold: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = core_metrics(&predictions(labels, scores)?, threshold).py()?;
    let d = PyDict::new(py);
    d.set_item("tp", m.tp)?;
    d.set_item("fp", m.fp)?;
    d.set_item("tn", m.tn)?;
    d.set_item("fn", m.fn_)?;
    d.set_item("acc", m.acc)?;
    d.set_item("tpr", m.tpr)?;
    d.set_item("tnr", m.tnr)?;
    d.set_item("precision", m.precision)?;
    d.set_item("f1", m.f1)?;
    d.set_item("auc", m.auc)?;
    Ok(d)
}

#[pyfunction]
fn compute_auc(labels: Vec<String>, scores: Vec<f64>) -> PyResult<f64> {
    core_auc(&predictions(labels, scores)?).py()
}

#[pymodule(name = "dca_forge")]
fn dca_forge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyImage>()?;
    m.add_class::<PyCircle>()?;
    m.add_class::<PyMask>()?;
    m.add_function(wrap_pyfunction!(detect_dca_circle, m)?)?;
    m.add_function(wrap_pyfunction!(superimpose_binary, m)?)?;
    m.add_function(wrap_pyfunction!(superimpose_realistic, m)?)?;
    m.add_function(wrap_pyfunction!(inpaint, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_blur, m)?)?;
    m.add_function(wrap_pyfunction!(enhance_contrast, m)?)?;
    m.add_function(wrap_pyfunction!(region_rms, m)?)?;
    m.add_function(wrap_pyfunction!(quantify_heatmap, m)?)?;
    m.add_function(wrap_pyfunction!(compute_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(compute_auc, m)?)?;
    Ok(())
}
