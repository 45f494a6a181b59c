#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

use dca_forge::io::save_image;
use dca_forge::ImageBuffer;
use rand::Rng;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dca-forge")
}

pub fn run_cli(args: &[&str]) -> Output {
    std::process::Command::new(bin())
        .args(args)
        .output()
        .expect("spawn dca-forge")
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Skin-like RGB texture: smooth low-frequency shading, pixel noise and a
/// darker lesion blob near the middle. Luma stays well above the default
/// dark threshold.
pub fn skin_texture<R: Rng>(rng: &mut R, w: usize, h: usize) -> ImageBuffer {
    let waves: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(0.5..3.0) / w as f64,
                rng.random_range(0.5..3.0) / h as f64,
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(5.0..12.0),
            )
        })
        .collect();
    let base = [
        rng.random_range(180.0..215.0),
        rng.random_range(130.0..160.0),
        rng.random_range(110.0..140.0),
    ];
    let (lx, ly) = (
        w as f64 * rng.random_range(0.4..0.6),
        h as f64 * rng.random_range(0.4..0.6),
    );
    let (ax, ay) = (
        w as f64 * rng.random_range(0.08..0.2),
        h as f64 * rng.random_range(0.08..0.2),
    );
    let noise: Vec<f64> = (0..w * h).map(|_| rng.random_range(-6.0..6.0)).collect();
    ImageBuffer::from_fn_rgb(w, h, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        let shade: f64 = waves
            .iter()
            .map(|&(kx, ky, ph, amp)| amp * (std::f64::consts::TAU * (kx * fx + ky * fy) + ph).sin())
            .sum();
        let d = ((fx - lx) / ax).powi(2) + ((fy - ly) / ay).powi(2);
        let lesion = if d <= 1.0 { 0.55 + 0.2 * d } else { 1.0 };
        let n = noise[y * w + x];
        let c = |b: f64| (b * lesion + shade + n).round().clamp(0.0, 255.0) as u8;
        [c(base[0]), c(base[1]), c(base[2])]
    })
    .unwrap()
}

/// Writes `n` textures as `<dir>/img_<i>.png` and a manifest listing them.
pub fn write_texture_set<R: Rng>(rng: &mut R, dir: &Path, n: usize, w: usize, h: usize) -> PathBuf {
    std::fs::create_dir_all(dir).unwrap();
    let mut manifest = String::from("image_id,path\n");
    for i in 0..n {
        let name = format!("img_{i:02}.png");
        save_image(&dir.join(&name), &skin_texture(rng, w, h)).unwrap();
        manifest.push_str(&format!("img_{i:02},{name}\n"));
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest).unwrap();
    path
}

pub fn csv_header(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .next()
        .unwrap_or_default()
        .to_string()
}

pub fn csv_rows(path: &Path) -> usize {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .count()
        .saturating_sub(1)
}
