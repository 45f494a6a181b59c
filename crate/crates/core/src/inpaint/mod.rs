//! DCA removal by inpainting: fast-marching ([`inpaint_telea`]) and
//! Navier-Stokes style isophote transport ([`inpaint_navier_stokes`]).
//!
//! Both methods leave every pixel outside the hole untouched and process
//! channels independently.

mod batch;
mod navier_stokes;
mod telea;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use self::batch::{inpaint_batch, InpaintBatch, InpaintBatchConfig, InpaintReportRow, INPAINT_REPORT};
pub use self::navier_stokes::CONVERGENCE_LEVELS;

use crate::error::{DcaError, Result};
use crate::image::{ImageBuffer, PixelRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InpaintMethod {
    #[serde(rename = "telea")]
    Telea,
    #[serde(rename = "ns")]
    NavierStokes,
}

impl InpaintMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            InpaintMethod::Telea => "telea",
            InpaintMethod::NavierStokes => "ns",
        }
    }
}

impl fmt::Display for InpaintMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InpaintMethod {
    type Err = DcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "telea" => Ok(InpaintMethod::Telea),
            "ns" | "navier-stokes" | "navier_stokes" => Ok(InpaintMethod::NavierStokes),
            _ => Err(DcaError::param(format!("unknown inpainting method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InpaintParams {
    /// Neighborhood radius for the fast-marching weighted average, pixels.
    pub inpaint_radius: f64,
    pub ns_iterations: usize,
    pub ns_dt: f64,
}

impl Default for InpaintParams {
    fn default() -> Self {
        Self {
            inpaint_radius: 5.0,
            ns_iterations: 300,
            ns_dt: 0.1,
        }
    }
}

impl InpaintParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.inpaint_radius.is_finite() && self.inpaint_radius >= 1.0) {
            return Err(DcaError::param(format!(
                "inpaint radius must be at least 1 px, got {}",
                self.inpaint_radius
            )));
        }
        if self.ns_iterations == 0 {
            return Err(DcaError::param("Navier-Stokes iterations must be positive"));
        }
        if !(self.ns_dt.is_finite() && self.ns_dt > 0.0) {
            return Err(DcaError::param(format!(
                "time step must be positive, got {}",
                self.ns_dt
            )));
        }
        Ok(())
    }
}

/// An image, the pixels to fill (`true` = fill) and how to fill them.
#[derive(Debug, Clone, Copy)]
pub struct InpaintRequest<'a> {
    pub image: &'a ImageBuffer,
    pub hole: &'a PixelRegion,
    pub method: InpaintMethod,
    pub params: InpaintParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InpaintOutcome {
    pub image: ImageBuffer,
    pub fill_pixels: usize,
    /// Transport steps run (0 for fast marching).
    pub iterations: usize,
    /// Always true for fast marching; for Navier-Stokes, whether the update
    /// dropped below [`CONVERGENCE_LEVELS`] within the iteration budget.
    pub converged: bool,
}

impl<'a> InpaintRequest<'a> {
    pub fn new(image: &'a ImageBuffer, hole: &'a PixelRegion, method: InpaintMethod) -> Self {
        Self {
            image,
            hole,
            method,
            params: InpaintParams::default(),
        }
    }

    pub fn with_params(mut self, params: InpaintParams) -> Self {
        self.params = params;
        self
    }

    fn validate(&self) -> Result<usize> {
        self.params.validate()?;
        if !self.image.same_dimensions(self.hole.width(), self.hole.height()) {
            return Err(DcaError::shape(
                format!("{}x{} hole", self.image.width(), self.image.height()),
                format!("{}x{} hole", self.hole.width(), self.hole.height()),
            ));
        }
        let fill = self.hole.count();
        if fill == self.image.pixel_count() {
            return Err(DcaError::NoBoundary);
        }
        Ok(fill)
    }

    /// Runs the method named in the request.
    pub fn run(&self) -> Result<InpaintOutcome> {
        match self.method {
            InpaintMethod::Telea => inpaint_telea(self),
            InpaintMethod::NavierStokes => inpaint_navier_stokes(self),
        }
    }
}

fn quantize(values: &[f64], scale: f64, like: &ImageBuffer) -> ImageBuffer {
    let data = values
        .iter()
        .map(|v| (v * scale).round().clamp(0.0, 255.0) as u8)
        .collect();
    ImageBuffer::new(like.width(), like.height(), like.channels(), data).expect("same shape")
}

/// Keeps original samples outside the hole so non-hole pixels are bit-exact.
fn restore_known(out: &mut ImageBuffer, original: &ImageBuffer, hole: &PixelRegion) {
    for y in 0..original.height() {
        for x in 0..original.width() {
            if !hole.contains(x, y) {
                out.pixel_mut(x, y).copy_from_slice(original.pixel(x, y));
            }
        }
    }
}

/// Fast-marching inpainting of the request's hole.
pub fn inpaint_telea(req: &InpaintRequest<'_>) -> Result<InpaintOutcome> {
    let fill_pixels = req.validate()?;
    if fill_pixels == 0 {
        return Ok(InpaintOutcome {
            image: req.image.clone(),
            fill_pixels,
            iterations: 0,
            converged: true,
        });
    }
    let values = telea::telea_fill(req.image, req.hole, req.params.inpaint_radius);
    let mut image = quantize(&values, 1.0, req.image);
    restore_known(&mut image, req.image, req.hole);
    Ok(InpaintOutcome {
        image,
        fill_pixels,
        iterations: 0,
        converged: true,
    })
}

/// Isophote-transport inpainting warm-started from the fast-marching fill.
pub fn inpaint_navier_stokes(req: &InpaintRequest<'_>) -> Result<InpaintOutcome> {
    let fill_pixels = req.validate()?;
    if fill_pixels == 0 {
        return Ok(InpaintOutcome {
            image: req.image.clone(),
            fill_pixels,
            iterations: 0,
            converged: true,
        });
    }
    let (w, h, ch) = (req.image.width(), req.image.height(), req.image.channels());
    let warm = telea::telea_fill(req.image, req.hole, req.params.inpaint_radius);
    let transport = navier_stokes::Transport::new(w, h, req.hole.members());

    let mut values = vec![0.0; warm.len()];
    let mut iterations = 0;
    let mut converged = true;
    let mut plane = vec![0.0; w * h];
    for c in 0..ch {
        for (i, p) in plane.iter_mut().enumerate() {
            *p = warm[i * ch + c] / 255.0;
        }
        let (steps, ok) = transport.run(&mut plane, req.params.ns_iterations, req.params.ns_dt);
        iterations = iterations.max(steps);
        converged &= ok;
        for (i, p) in plane.iter().enumerate() {
            values[i * ch + c] = *p;
        }
    }
    let mut image = quantize(&values, 255.0, req.image);
    restore_known(&mut image, req.image, req.hole);
    Ok(InpaintOutcome {
        image,
        fill_pixels,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const METHODS: [InpaintMethod; 2] = [InpaintMethod::Telea, InpaintMethod::NavierStokes];

    fn analytic_gradient(x: usize) -> f64 {
        x as f64 * 255.0 / 127.0
    }

    fn gradient_image() -> ImageBuffer {
        ImageBuffer::from_fn_gray(128, 128, |x, _| analytic_gradient(x).round() as u8).unwrap()
    }

    /// Mean absolute deviation from the unquantized ramp inside `hole`.
    fn gradient_error(out: &ImageBuffer, hole: &PixelRegion) -> f64 {
        let mut sum = 0.0;
        for y in 0..out.height() {
            for x in 0..out.width() {
                if hole.contains(x, y) {
                    sum += (f64::from(out.get(x, y, 0)) - analytic_gradient(x)).abs();
                }
            }
        }
        sum / hole.count() as f64
    }

    fn centered_square(w: usize, h: usize, side: usize) -> PixelRegion {
        let (x0, y0) = ((w - side) / 2, (h - side) / 2);
        PixelRegion::from_fn(w, h, |x, y| x >= x0 && x < x0 + side && y >= y0 && y < y0 + side)
    }

    fn mean_abs_error(a: &ImageBuffer, b: &ImageBuffer, region: &PixelRegion) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for y in 0..a.height() {
            for x in 0..a.width() {
                if region.contains(x, y) {
                    sum += (f64::from(a.get(x, y, 0)) - f64::from(b.get(x, y, 0))).abs();
                    n += 1;
                }
            }
        }
        sum / n as f64
    }

    fn random_texture(w: usize, h: usize, ch: usize, seed: u64) -> ImageBuffer {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..w * h * ch).map(|_| rng.random()).collect();
        ImageBuffer::new(w, h, ch, data).unwrap()
    }

    #[test]
    fn constant_image_recovered() {
        let img = ImageBuffer::filled(48, 40, 3, 173).unwrap();
        let hole = PixelRegion::from_fn(48, 40, |x, y| (x as f64 - 20.0).hypot(y as f64 - 18.0) < 9.0);
        for m in METHODS {
            let out = InpaintRequest::new(&img, &hole, m).run().unwrap();
            assert_eq!(out.image, img, "{m}");
            assert!(out.converged);
        }
    }

    #[test]
    fn empty_hole_is_identity() {
        let img = random_texture(20, 20, 3, 1);
        let hole = PixelRegion::empty(20, 20);
        for m in METHODS {
            let out = InpaintRequest::new(&img, &hole, m).run().unwrap();
            assert_eq!(out.image, img);
            assert_eq!(out.fill_pixels, 0);
        }
    }

    #[test]
    fn total_hole_has_no_boundary() {
        let img = random_texture(8, 8, 1, 2);
        let hole = PixelRegion::full(8, 8);
        for m in METHODS {
            assert!(matches!(
                InpaintRequest::new(&img, &hole, m).run(),
                Err(DcaError::NoBoundary)
            ));
        }
    }

    #[test]
    fn mismatched_hole_is_a_shape_error() {
        let img = random_texture(8, 8, 1, 3);
        let hole = PixelRegion::empty(8, 9);
        assert!(matches!(
            InpaintRequest::new(&img, &hole, InpaintMethod::Telea).run(),
            Err(DcaError::Shape { .. })
        ));
    }

    #[test]
    fn bad_params_rejected() {
        let img = random_texture(8, 8, 1, 3);
        let hole = PixelRegion::empty(8, 8);
        let bad = InpaintParams {
            ns_dt: 0.0,
            ..Default::default()
        };
        assert!(InpaintRequest::new(&img, &hole, InpaintMethod::NavierStokes)
            .with_params(bad)
            .run()
            .is_err());
        let bad = InpaintParams {
            inpaint_radius: 0.5,
            ..Default::default()
        };
        assert!(InpaintRequest::new(&img, &hole, InpaintMethod::Telea)
            .with_params(bad)
            .run()
            .is_err());
    }

    #[test]
    fn linear_gradient_through_centered_hole() {
        let img = gradient_image();
        let hole = centered_square(128, 128, 10);
        for m in METHODS {
            let out = InpaintRequest::new(&img, &hole, m).run().unwrap();
            let err = gradient_error(&out.image, &hole);
            assert!(err <= 3.0, "{m}: mean abs error {err}");
        }
    }

    #[test]
    fn error_grows_with_hole_size() {
        let img = gradient_image();
        let sizes = [4usize, 8, 16, 32];
        for m in METHODS {
            let errors: Vec<f64> = sizes
                .iter()
                .map(|&s| {
                    let hole = centered_square(128, 128, s);
                    let out = InpaintRequest::new(&img, &hole, m).run().unwrap();
                    mean_abs_error(&out.image, &img, &hole)
                })
                .collect();
            // Slack of one pixel off by one level in the smaller hole.
            let ok = errors
                .windows(2)
                .zip(&sizes)
                .all(|(w, &s)| w[0] <= w[1] + 1.0 / (s * s) as f64);
            assert!(ok, "{m}: {errors:?}");
        }
    }

    #[test]
    fn telea_respects_local_maximum_principle() {
        let img = random_texture(40, 40, 1, 7);
        let hole = PixelRegion::from_fn(40, 40, |x, y| (x as f64 - 19.5).hypot(y as f64 - 21.0) < 8.0);
        let out = InpaintRequest::new(&img, &hole, InpaintMethod::Telea)
            .run()
            .unwrap();
        let ring = hole.dilate(5);
        let known: Vec<u8> = (0..40 * 40)
            .filter(|&i| ring.members()[i] && !hole.members()[i])
            .map(|i| img.data()[i])
            .collect();
        let (lo, hi) = (*known.iter().min().unwrap(), *known.iter().max().unwrap());
        for i in 0..40 * 40 {
            if hole.members()[i] {
                let v = u16::from(out.image.data()[i]);
                assert!(
                    v + 1 >= u16::from(lo) && v <= u16::from(hi) + 1,
                    "{v} outside [{lo}, {hi}]"
                );
            }
        }
    }

    #[test]
    fn navier_stokes_reports_iterations() {
        let img = random_texture(32, 32, 1, 9);
        let hole = centered_square(32, 32, 8);
        let params = InpaintParams {
            ns_iterations: 3,
            ..Default::default()
        };
        let out = InpaintRequest::new(&img, &hole, InpaintMethod::NavierStokes)
            .with_params(params)
            .run()
            .unwrap();
        assert!(out.iterations <= 3);
        if !out.converged {
            assert_eq!(out.iterations, 3);
        }
    }

    #[test]
    fn method_names_parse() {
        assert_eq!("telea".parse::<InpaintMethod>().unwrap(), InpaintMethod::Telea);
        assert_eq!(
            "NS".parse::<InpaintMethod>().unwrap(),
            InpaintMethod::NavierStokes
        );
        assert!("patchmatch".parse::<InpaintMethod>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn known_pixels_untouched_and_channels_independent(
            seed in any::<u64>(),
            cx in 4.0f64..28.0,
            cy in 4.0f64..28.0,
            r in 2.0f64..9.0,
        ) {
            let img = random_texture(32, 32, 3, seed);
            let hole = PixelRegion::from_fn(32, 32, |x, y| (x as f64 - cx).hypot(y as f64 - cy) <= r);
            for m in METHODS {
                let params = InpaintParams { ns_iterations: 20, ..Default::default() };
                let out = InpaintRequest::new(&img, &hole, m).with_params(params).run().unwrap().image;
                for y in 0..32 {
                    for x in 0..32 {
                        if !hole.contains(x, y) {
                            prop_assert_eq!(out.pixel(x, y), img.pixel(x, y));
                        }
                    }
                }
                let planes: Vec<ImageBuffer> = (0..3)
                    .map(|c| {
                        let plane = img.channel(c);
                        InpaintRequest::new(&plane, &hole, m).with_params(params).run().unwrap().image
                    })
                    .collect();
                prop_assert_eq!(ImageBuffer::from_planes(&planes).unwrap(), out);
            }
        }
    }
}
