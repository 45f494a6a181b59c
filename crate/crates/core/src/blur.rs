//! Separable Gaussian blur with edge replication.

use crate::error::{DcaError, Result};
use crate::image::ImageBuffer;

/// Sampled, normalized Gaussian taps of half-width `ceil(3 * sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(DcaError::param(format!(
            "blur sigma must be positive, got {sigma}"
        )));
    }
    let half = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    Ok(taps)
}

/// Blurs every channel independently. Intermediate results stay in `f64`
/// between the horizontal and vertical passes; rounding happens once.
pub fn gaussian_blur(img: &ImageBuffer, sigma: f64) -> Result<ImageBuffer> {
    let taps = gaussian_kernel(sigma)?;
    let half = (taps.len() / 2) as isize;
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let src = img.data();

    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut horizontal = vec![0.0f64; w * h * ch];
    for y in 0..h {
        let row = y * w;
        for x in 0..w {
            for c in 0..ch {
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let sx = clamp(x as isize + k as isize - half, w);
                    acc += t * f64::from(src[(row + sx) * ch + c]);
                }
                horizontal[(row + x) * ch + c] = acc;
            }
        }
    }

    let mut out = vec![0u8; w * h * ch];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let sy = clamp(y as isize + k as isize - half, h);
                    acc += t * horizontal[(sy * w + x) * ch + c];
                }
                out[(y * w + x) * ch + c] = acc.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    ImageBuffer::new(w, h, ch, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct 2-D convolution with the sampled 2-D Gaussian (not factored).
    fn brute_force_blur(img: &ImageBuffer, sigma: f64) -> Vec<f64> {
        let half = (3.0 * sigma).ceil() as isize;
        let mut weights = Vec::new();
        for dy in -half..=half {
            for dx in -half..=half {
                let r2 = (dx * dx + dy * dy) as f64;
                weights.push((dx, dy, (-r2 / (2.0 * sigma * sigma)).exp()));
            }
        }
        let total: f64 = weights.iter().map(|w| w.2).sum();
        let (w, h) = (img.width() as isize, img.height() as isize);
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for &(dx, dy, wt) in &weights {
                    let sx = (x + dx).clamp(0, w - 1) as usize;
                    let sy = (y + dy).clamp(0, h - 1) as usize;
                    acc += wt * f64::from(img.get(sx, sy, 0));
                }
                out.push(acc / total);
            }
        }
        out
    }

    #[test]
    fn kernel_is_normalized_with_expected_width() {
        let k = gaussian_kernel(1.5).unwrap();
        assert_eq!(k.len(), 2 * 5 + 1);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(gaussian_kernel(0.0).is_err());
        assert!(gaussian_kernel(-2.0).is_err());
        assert!(gaussian_kernel(f64::NAN).is_err());
    }

    #[test]
    fn constant_image_is_preserved() {
        for sigma in [0.5, 1.0, 3.7] {
            let img = ImageBuffer::filled(17, 9, 3, 143).unwrap();
            assert_eq!(gaussian_blur(&img, sigma).unwrap(), img);
        }
    }

    #[test]
    fn impulse_response_matches_center_weight() {
        let mut img = ImageBuffer::filled(41, 41, 1, 0).unwrap();
        img.set(20, 20, 0, 255);
        let out = gaussian_blur(&img, 1.0).unwrap();
        // Sampled 2-D Gaussian at the origin, normalized over the truncated window.
        let total: f64 = (-3..=3)
            .flat_map(|y: i32| (-3..=3).map(move |x: i32| (-((x * x + y * y) as f64) / 2.0).exp()))
            .sum();
        let expected = (255.0 / total).round() as u8;
        assert_eq!(out.get(20, 20, 0), expected);
    }

    #[test]
    fn matches_brute_force_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let img = ImageBuffer::from_fn_gray(64, 64, |_, _| 0).unwrap();
        let data: Vec<u8> = (0..img.pixel_count()).map(|_| rng.random()).collect();
        let img = ImageBuffer::new(64, 64, 1, data).unwrap();
        let fast = gaussian_blur(&img, 2.0).unwrap();
        let slow = brute_force_blur(&img, 2.0);
        for (a, b) in fast.data().iter().zip(&slow) {
            assert!((f64::from(*a) - b).abs() <= 1.0, "{a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn output_within_input_range(seed in any::<u64>(), sigma in 0.3f64..4.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<u8> = (0..24 * 20).map(|_| rng.random_range(30..220)).collect();
            let img = ImageBuffer::new(24, 20, 1, data).unwrap();
            let out = gaussian_blur(&img, sigma).unwrap();
            let (lo, hi) = (*img.data().iter().min().unwrap(), *img.data().iter().max().unwrap());
            prop_assert!(out.data().iter().all(|&v| v >= lo && v <= hi));
        }

        #[test]
        fn mean_is_preserved(seed in any::<u64>(), sigma in 0.5f64..2.0) {
            // Edge replication over-weights border pixels; on white noise the
            // drift only stays under half a level once the image is large.
            let side = ((8.0 * sigma).ceil() as usize).max(96);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<u8> = (0..side * side).map(|_| rng.random()).collect();
            let img = ImageBuffer::new(side, side, 1, data).unwrap();
            let out = gaussian_blur(&img, sigma).unwrap();
            let mean = |b: &ImageBuffer| b.data().iter().map(|&v| f64::from(v)).sum::<f64>() / b.pixel_count() as f64;
            prop_assert!((mean(&img) - mean(&out)).abs() <= 0.5);
        }
    }
}
