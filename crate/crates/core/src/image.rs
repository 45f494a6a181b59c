//! Pixel buffers, pixel regions and the per-region intensity statistics
//! every other module builds on.
//!
//! Intensities are stored at 8-bit precision in row-major, channel-interleaved
//! order. Statistics are computed on the raw 0–255 scale unless
//! [`IntensityScale::Normalized`] is requested, in which case each intensity is
//! divided by 255 first.

use crate::error::{DcaError, Result};

/// A 2-D raster of 8-bit intensities with 1 (gray) or 3 (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(DcaError::param(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(DcaError::param(format!(
                "images must have 1 or 3 channels, got {channels}"
            )));
        }
        let expected = width * height * channels;
        if data.len() != expected {
            return Err(DcaError::shape(
                format!("{expected} samples"),
                format!("{} samples", data.len()),
            ));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// An image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds a single-channel image from a per-pixel function of `(x, y)`.
    pub fn from_fn_gray(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, 1, data)
    }

    /// Builds a three-channel image from a per-pixel function of `(x, y)`.
    pub fn from_fn_rgb(width: usize, height: usize, f: impl Fn(usize, usize) -> [u8; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, 3, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: u8) {
        let i = self.index(x, y, c);
        self.data[i] = value;
    }

    /// All channel samples of pixel `(x, y)`.
    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let start = self.index(x, y, 0);
        &self.data[start..start + self.channels]
    }

    pub fn pixel_mut(&mut self, x: usize, y: usize) -> &mut [u8] {
        let start = self.index(x, y, 0);
        let channels = self.channels;
        &mut self.data[start..start + channels]
    }

    pub fn same_dimensions(&self, width: usize, height: usize) -> bool {
        self.width == width && self.height == height
    }

    /// Intensities mapped to `[0, 1]` by dividing by 255.
    pub fn to_normalized(&self) -> Vec<f64> {
        self.data.iter().map(|&v| f64::from(v) / 255.0).collect()
    }

    /// Extracts channel `c` as a single-channel image.
    pub fn channel(&self, c: usize) -> ImageBuffer {
        assert!(c < self.channels, "channel {c} out of range");
        let data = self.data.chunks_exact(self.channels).map(|px| px[c]).collect();
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Reassembles an image from single-channel planes of equal size.
    pub fn from_planes(planes: &[ImageBuffer]) -> Result<ImageBuffer> {
        let first = planes.first().ok_or_else(|| DcaError::param("no planes given"))?;
        let (w, h) = (first.width, first.height);
        if planes.iter().any(|p| p.channels != 1 || !p.same_dimensions(w, h)) {
            return Err(DcaError::shape(
                format!("{w}x{h} single-channel planes"),
                "mixed plane shapes",
            ));
        }
        let channels = planes.len();
        let mut data = Vec::with_capacity(w * h * channels);
        for i in 0..w * h {
            data.extend(planes.iter().map(|p| p.data[i]));
        }
        ImageBuffer::new(w, h, channels, data)
    }

    /// Expands a gray image to three identical channels; RGB is returned as is.
    pub fn to_rgb(&self) -> ImageBuffer {
        if self.channels == 3 {
            return self.clone();
        }
        let data = self.data.iter().flat_map(|&v| [v, v, v]).collect();
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        }
    }

    /// Gray view of the image: luma for RGB, a copy for gray.
    pub fn to_luma(&self) -> ImageBuffer {
        if self.channels == 1 {
            self.clone()
        } else {
            luma_of_rgb(self)
        }
    }
}

/// Per-pixel membership mask over an image of known dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelRegion {
    width: usize,
    height: usize,
    members: Vec<bool>,
}

impl PixelRegion {
    pub fn new(width: usize, height: usize, members: Vec<bool>) -> Result<Self> {
        if members.len() != width * height {
            return Err(DcaError::shape(
                format!("{} membership flags", width * height),
                format!("{} membership flags", members.len()),
            ));
        }
        Ok(Self {
            width,
            height,
            members,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            members: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            members: vec![true; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut members = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                members.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            members,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.members[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, member: bool) {
        self.members[y * self.width + x] = member;
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn complement(&self) -> PixelRegion {
        PixelRegion {
            width: self.width,
            height: self.height,
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    /// Grows the region by `radius` pixels (Euclidean disk structuring element).
    pub fn dilate(&self, radius: usize) -> PixelRegion {
        if radius == 0 {
            return self.clone();
        }
        let r = radius as isize;
        let offsets: Vec<(isize, isize)> = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .filter(|(dx, dy)| dx * dx + dy * dy <= r * r)
            .collect();
        let (w, h) = (self.width as isize, self.height as isize);
        let mut out = self.clone();
        for y in 0..h {
            for x in 0..w {
                if !self.members[(y * w + x) as usize] {
                    continue;
                }
                for &(dx, dy) in &offsets {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx >= 0 && ny >= 0 && nx < w && ny < h {
                        out.members[(ny * w + nx) as usize] = true;
                    }
                }
            }
        }
        out
    }
}

/// Whether region statistics run on raw 0–255 intensities or on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntensityScale {
    #[default]
    Raw,
    Normalized,
}

/// Locations and values of the brightest and darkest pixels of a gray image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremaReport {
    pub brightest: (usize, usize),
    pub darkest: (usize, usize),
    pub brightest_value: u8,
    pub darkest_value: u8,
}

fn require_gray(img: &ImageBuffer) -> Result<()> {
    if img.channels != 1 {
        return Err(DcaError::shape(
            "1-channel image",
            format!("{} channels", img.channels),
        ));
    }
    Ok(())
}

fn luma_of_rgb(img: &ImageBuffer) -> ImageBuffer {
    let data = img
        .data
        .chunks_exact(3)
        .map(|px| {
            let y = 0.299 * f64::from(px[0]) + 0.587 * f64::from(px[1]) + 0.114 * f64::from(px[2]);
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    ImageBuffer {
        width: img.width,
        height: img.height,
        channels: 1,
        data,
    }
}

/// ITU-R 601 luma of an RGB image.
pub fn to_grayscale(img: &ImageBuffer) -> Result<ImageBuffer> {
    if img.channels != 3 {
        return Err(DcaError::shape(
            "3-channel image",
            format!("{} channels", img.channels),
        ));
    }
    Ok(luma_of_rgb(img))
}

/// Linear contrast stretch about mid-gray: `v -> 128 + factor * (v - 128)`.
pub fn enhance_contrast(img: &ImageBuffer, factor: f64) -> Result<ImageBuffer> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(DcaError::param(format!(
            "contrast factor must be positive, got {factor}"
        )));
    }
    let lut: Vec<u8> = (0..=255u8)
        .map(|v| {
            (128.0 + factor * (f64::from(v) - 128.0))
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    let data = img.data.iter().map(|&v| lut[v as usize]).collect();
    ImageBuffer::new(img.width, img.height, img.channels, data)
}

fn region_values(img: &ImageBuffer, region: &PixelRegion) -> Result<Vec<f64>> {
    require_gray(img)?;
    if !img.same_dimensions(region.width, region.height) {
        return Err(DcaError::shape(
            format!("{}x{} region", img.width, img.height),
            format!("{}x{} region", region.width, region.height),
        ));
    }
    let values: Vec<f64> = img
        .data
        .iter()
        .zip(&region.members)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| f64::from(v))
        .collect();
    if values.is_empty() {
        return Err(DcaError::EmptyRegion);
    }
    Ok(values)
}

/// RMS contrast: population standard deviation of the member intensities.
pub fn region_rms(img: &ImageBuffer, region: &PixelRegion, scale: IntensityScale) -> Result<f64> {
    let mut values = region_values(img, region)?;
    if scale == IntensityScale::Normalized {
        values.iter_mut().for_each(|v| *v /= 255.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

/// Mean member intensity on the raw 0–255 scale.
pub fn region_brightness(img: &ImageBuffer, region: &PixelRegion) -> Result<f64> {
    let values = region_values(img, region)?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Global maximum and minimum of a gray image; ties go to the first pixel in
/// row-major order.
pub fn locate_extrema(img: &ImageBuffer) -> Result<ExtremaReport> {
    require_gray(img)?;
    let (mut max_i, mut min_i) = (0usize, 0usize);
    for (i, &v) in img.data.iter().enumerate() {
        if v > img.data[max_i] {
            max_i = i;
        }
        if v < img.data[min_i] {
            min_i = i;
        }
    }
    let coord = |i: usize| (i % img.width, i / img.width);
    Ok(ExtremaReport {
        brightest: coord(max_i),
        darkest: coord(min_i),
        brightest_value: img.data[max_i],
        darkest_value: img.data[min_i],
    })
}
