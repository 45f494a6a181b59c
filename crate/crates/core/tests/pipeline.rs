//! File-based batch pipeline: synthesize, detect, inpaint, quantify.

use std::path::Path;

use dca_forge::batch::SourceRow;
use dca_forge::heatmap::{quantify_dir, HeatmapLabel};
use dca_forge::inpaint::{inpaint_batch, InpaintBatchConfig};
use dca_forge::io::{load_image, save_image};
use dca_forge::mask::detect_batch;
use dca_forge::synth::{batch_superimpose, SynthConfig, SynthMode};
use dca_forge::{DcaSizeCategory, DetectConfig, ImageBuffer, InpaintMethod, SizeThresholds};

const SIDE: usize = 96;

fn write_sources(dir: &Path, n: usize) -> Vec<SourceRow> {
    std::fs::create_dir_all(dir).unwrap();
    (0..n)
        .map(|i| {
            let img = ImageBuffer::from_fn_rgb(SIDE, SIDE, |x, y| {
                [
                    (150 + x / 2 + i) as u8,
                    (120 + y / 3) as u8,
                    (100 + (x + y) / 8) as u8,
                ]
            })
            .unwrap();
            let name = format!("s{i}.png");
            save_image(&dir.join(&name), &img).unwrap();
            SourceRow::new(format!("s{i}"), name)
        })
        .collect()
}

#[test]
fn batch_pipeline_round_trips_through_files() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let src = root.join("src");
    let mut rows = write_sources(&src, 6);
    rows.push(SourceRow::new("missing", "missing.png"));

    let thresholds = SizeThresholds::default();
    let config = SynthConfig::new(SynthMode::Binary, DcaSizeCategory::Medium, 3);
    let synth_dir = root.join("synth");
    let synth = batch_superimpose(&rows, Some(&src), &synth_dir, &config).unwrap();
    assert_eq!(synth.records.len(), 6);
    assert_eq!(synth.errors.len(), 1);
    assert_eq!(synth.errors[0].image_id, "missing");
    for r in &synth.records {
        assert_eq!(r.category, DcaSizeCategory::Medium, "{r:?}");
    }

    let synth_rows: Vec<SourceRow> = synth
        .records
        .iter()
        .map(|r| SourceRow::new(r.image_id.clone(), r.path.clone()))
        .collect();
    let mask_dir = root.join("masks");
    let masks = detect_batch(
        &synth_rows,
        Some(&synth_dir),
        &mask_dir,
        &DetectConfig::default(),
        &thresholds,
    )
    .unwrap();
    assert!(masks.errors.is_empty(), "{:?}", masks.errors);
    for (m, s) in masks.records.iter().zip(&synth.records) {
        assert_eq!(m.image_id, s.image_id);
        assert!((m.cx.unwrap() - s.cx).abs() <= 2.0, "{m:?} vs {s:?}");
        assert!((m.cy.unwrap() - s.cy).abs() <= 2.0, "{m:?} vs {s:?}");
        assert!((m.radius.unwrap() - s.radius).abs() <= 2.0, "{m:?} vs {s:?}");
        assert_eq!(m.category, s.category);
    }

    let fill_dir = root.join("filled");
    let fill = inpaint_batch(
        &synth_rows,
        Some(&synth_dir),
        &mask_dir.join("masks"),
        &fill_dir,
        &InpaintBatchConfig::new(InpaintMethod::Telea),
    )
    .unwrap();
    assert_eq!(fill.report.len(), 6);
    for r in &fill.report {
        let out = load_image(&fill_dir.join(format!("{}.png", r.image_id))).unwrap();
        assert!(
            out.to_luma().get(0, 0, 0) > 100,
            "{}: corner still dark",
            r.image_id
        );
    }

    let heat_dir = root.join("heat");
    std::fs::create_dir_all(&heat_dir).unwrap();
    let labels: Vec<HeatmapLabel> = masks
        .records
        .iter()
        .map(|m| {
            let heat = ImageBuffer::from_fn_gray(SIDE, SIDE, |x, y| ((x * 7 + y * 3) % 256) as u8).unwrap();
            save_image(&heat_dir.join(format!("{}.png", m.image_id)), &heat).unwrap();
            HeatmapLabel {
                image_id: m.image_id.clone(),
                model: "clean".into(),
                test_set: "original".into(),
                dca_size: m.category,
            }
        })
        .collect();
    let stats = quantify_dir(&labels, &heat_dir, &mask_dir.join("masks")).unwrap();
    assert_eq!(stats.rows.len(), 6);
    for r in &stats.rows {
        assert_eq!(r.rms_diff, Some(r.internal_rms - r.external_rms.unwrap()));
    }
}
