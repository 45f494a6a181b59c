//! Contrast-probe panels: original, contrast-enhanced and optionally a
//! heatmap with its brightest and darkest pixels circled.

use dca_forge::{enhance_contrast, locate_extrema, ExtremaReport, ImageBuffer, Result};

/// Width of the white bar between panels.
pub const SEPARATOR: usize = 4;
const BRIGHTEST_COLOR: [u8; 3] = [0, 255, 0];
const DARKEST_COLOR: [u8; 3] = [255, 0, 255];

/// Ring radius for the extrema markers.
pub fn marker_radius(width: usize, height: usize) -> usize {
    (width.min(height) / 16).max(4)
}

/// Draws a two-pixel ring centred on `(cx, cy)`, clipped to the image.
pub fn draw_ring(img: &mut ImageBuffer, cx: usize, cy: usize, radius: usize, color: [u8; 3]) {
    let r = radius as f64;
    let reach = radius as isize + 1;
    for dy in -reach..=reach {
        for dx in -reach..=reach {
            let (x, y) = (cx as isize + dx, cy as isize + dy);
            if x < 0 || y < 0 || x as usize >= img.width() || y as usize >= img.height() {
                continue;
            }
            let d = ((dx * dx + dy * dy) as f64).sqrt();
            if (d - r).abs() <= 1.0 {
                img.pixel_mut(x as usize, y as usize).copy_from_slice(&color);
            }
        }
    }
}

/// Places RGB panels of equal height side by side with white separators.
pub fn hstack(panels: &[ImageBuffer]) -> Result<ImageBuffer> {
    let h = panels[0].height();
    let w = panels.iter().map(ImageBuffer::width).sum::<usize>() + SEPARATOR * (panels.len() - 1);
    let mut out = ImageBuffer::filled(w, h, 3, 255)?;
    let mut x0 = 0;
    for p in panels {
        for y in 0..h {
            for x in 0..p.width() {
                out.pixel_mut(x0 + x, y).copy_from_slice(p.pixel(x, y));
            }
        }
        x0 += p.width() + SEPARATOR;
    }
    Ok(out)
}

pub struct Probe {
    pub image: ImageBuffer,
    pub extrema: Option<ExtremaReport>,
    pub panels: usize,
}

/// Builds the triptych. `heatmap` must match the image size; its extrema are
/// taken on luma.
pub fn contrast_probe(img: &ImageBuffer, factor: f64, heatmap: Option<&ImageBuffer>) -> Result<Probe> {
    let rgb = img.to_rgb();
    let mut panels = vec![rgb.clone(), enhance_contrast(&rgb, factor)?];
    let mut extrema = None;
    if let Some(h) = heatmap {
        if !h.same_dimensions(img.width(), img.height()) {
            return Err(dca_forge::DcaError::Shape {
                expected: format!("{}x{} heatmap", img.width(), img.height()),
                actual: format!("{}x{} heatmap", h.width(), h.height()),
            });
        }
        let report = locate_extrema(&h.to_luma())?;
        let mut panel = h.to_rgb();
        let r = marker_radius(h.width(), h.height());
        draw_ring(
            &mut panel,
            report.brightest.0,
            report.brightest.1,
            r,
            BRIGHTEST_COLOR,
        );
        draw_ring(&mut panel, report.darkest.0, report.darkest.1, r, DARKEST_COLOR);
        panels.push(panel);
        extrema = Some(report);
    }
    Ok(Probe {
        panels: panels.len(),
        image: hstack(&panels)?,
        extrema,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ImageBuffer {
        ImageBuffer::from_fn_rgb(40, 30, |x, y| [(x * 5) as u8, (y * 7) as u8, 100]).unwrap()
    }

    #[test]
    fn unit_factor_gives_identical_panels() {
        let img = sample();
        let p = contrast_probe(&img, 1.0, None).unwrap();
        assert_eq!(p.panels, 2);
        assert_eq!(p.image.width(), 2 * 40 + SEPARATOR);
        for y in 0..30 {
            for x in 0..40 {
                assert_eq!(p.image.pixel(x, y), p.image.pixel(x + 40 + SEPARATOR, y));
            }
        }
    }

    #[test]
    fn heatmap_panel_marks_extrema() {
        let img = sample();
        let heat = ImageBuffer::from_fn_gray(40, 30, |x, y| {
            if (x, y) == (30, 20) {
                250
            } else {
                100 + (x % 3) as u8
            }
        })
        .unwrap();
        let p = contrast_probe(&img, 2.0, Some(&heat)).unwrap();
        assert_eq!(p.panels, 3);
        assert_eq!(p.image.width(), 3 * 40 + 2 * SEPARATOR);
        let e = p.extrema.unwrap();
        assert_eq!(e, locate_extrema(&heat).unwrap());
        let x0 = 2 * (40 + SEPARATOR);
        let r = marker_radius(40, 30);
        assert_eq!(p.image.pixel(x0 + 30 + r, 20), &BRIGHTEST_COLOR);
        assert_eq!(p.image.pixel(x0 + 30, 20), &[250, 250, 250]);
    }

    #[test]
    fn heatmap_size_must_match() {
        let heat = ImageBuffer::filled(10, 10, 1, 0).unwrap();
        assert!(contrast_probe(&sample(), 1.5, Some(&heat)).is_err());
        assert!(contrast_probe(&sample(), 0.0, None).is_err());
    }
}
