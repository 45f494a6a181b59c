//! DCA-split balanced dataset manifests.
//!
//! Clean images of each class are sorted, shuffled with a seeded RNG and cut
//! into train (`floor(0.9 n)`) and validation; the larger class is truncated
//! so both classes have the same count. Every DCA image goes to the test
//! split under its size category.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DcaError, Result};
use crate::mask::DcaSizeCategory;

pub const TRAIN_FRACTION: f64 = 0.9;
pub const MIN_CLEAN_PER_CLASS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Melanoma,
    NonMelanoma,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Melanoma, Label::NonMelanoma];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Melanoma => "melanoma",
            Label::NonMelanoma => "non_melanoma",
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Melanoma
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = DcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "melanoma" | "mel" => Ok(Label::Melanoma),
            "non_melanoma" | "nonmelanoma" | "non_mel" => Ok(Label::NonMelanoma),
            _ => Err(DcaError::param(format!("unknown label '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

/// DCA category column of the manifest: `none` for clean images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifestCategory {
    None,
    Small,
    Medium,
    Large,
    Other,
}

impl From<DcaSizeCategory> for ManifestCategory {
    fn from(c: DcaSizeCategory) -> Self {
        match c {
            DcaSizeCategory::Other => ManifestCategory::Other,
            DcaSizeCategory::Small => ManifestCategory::Small,
            DcaSizeCategory::Medium => ManifestCategory::Medium,
            DcaSizeCategory::Large => ManifestCategory::Large,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub image_id: String,
    pub path: String,
    pub label: Label,
    pub split: Split,
    pub dca_category: ManifestCategory,
    pub source: String,
}

/// A clean (DCA-free) input image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanImage {
    pub image_id: String,
    pub path: String,
    pub label: Label,
    pub source: String,
}

/// A DCA input image with its size category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcaImage {
    pub image_id: String,
    pub path: String,
    pub label: Label,
    pub dca_category: DcaSizeCategory,
    pub source: String,
}

/// Lists the PNG/JPEG files of `dir` as clean images of one class. The image
/// id is the file stem.
pub fn scan_clean_dir(dir: &Path, label: Label, source: &str) -> Result<Vec<CleanImage>> {
    let io_err = |source| DcaError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        if !matches!(ext.as_deref(), Some("png" | "jpg" | "jpeg")) {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        out.push(CleanImage {
            image_id: stem.to_string(),
            path: path.to_string_lossy().into_owned(),
            label,
            source: source.to_string(),
        });
    }
    out.sort_by(|a, b| a.image_id.cmp(&b.image_id).then_with(|| a.path.cmp(&b.path)));
    Ok(out)
}

/// Builds the manifest. Output order: train, val, test; within a split by
/// category, label and image id.
pub fn build_manifest(clean: &[CleanImage], dca: &[DcaImage], seed: u64) -> Result<Vec<ManifestRow>> {
    let mut seen = HashSet::new();
    for id in clean
        .iter()
        .map(|c| &c.image_id)
        .chain(dca.iter().map(|d| &d.image_id))
    {
        if !seen.insert(id.as_str()) {
            return Err(DcaError::DuplicateKey(id.clone()));
        }
    }

    let mut per_class: Vec<Vec<&CleanImage>> = Label::ALL
        .iter()
        .map(|&l| {
            let mut v: Vec<&CleanImage> = clean.iter().filter(|c| c.label == l).collect();
            v.sort_by(|a, b| a.image_id.cmp(&b.image_id));
            v
        })
        .collect();
    if per_class[0].is_empty() {
        return Err(DcaError::Data("no clean melanoma images".into()));
    }
    for (label, class) in Label::ALL.iter().zip(&per_class) {
        if class.len() < MIN_CLEAN_PER_CLASS {
            return Err(DcaError::Data(format!(
                "{} clean {label} images, need at least {MIN_CLEAN_PER_CLASS}",
                class.len()
            )));
        }
    }

    let n = per_class.iter().map(Vec::len).min().unwrap_or(0);
    let n_train = (TRAIN_FRACTION * n as f64).floor() as usize;
    let mut rows = Vec::with_capacity(2 * n + dca.len());
    for (stream, class) in per_class.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        class.shuffle(&mut rng);
        class.truncate(n);
        for (i, c) in class.iter().enumerate() {
            rows.push(ManifestRow {
                image_id: c.image_id.clone(),
                path: c.path.clone(),
                label: c.label,
                split: if i < n_train { Split::Train } else { Split::Val },
                dca_category: ManifestCategory::None,
                source: c.source.clone(),
            });
        }
    }
    rows.extend(dca.iter().map(|d| ManifestRow {
        image_id: d.image_id.clone(),
        path: d.path.clone(),
        label: d.label,
        split: Split::Test,
        dca_category: d.dca_category.into(),
        source: d.source.clone(),
    }));
    rows.sort_by(|a, b| {
        (a.split, a.dca_category, a.label, &a.image_id).cmp(&(b.split, b.dca_category, b.label, &b.image_id))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn clean(label: Label, n: usize) -> Vec<CleanImage> {
        (0..n)
            .map(|i| CleanImage {
                image_id: format!("{label}_{i:05}"),
                path: format!("{label}/{i:05}.jpg"),
                label,
                source: "fixture".into(),
            })
            .collect()
    }

    fn dca(label: Label, counts: [(DcaSizeCategory, usize); 4]) -> Vec<DcaImage> {
        counts
            .iter()
            .flat_map(|&(cat, n)| {
                (0..n).map(move |i| DcaImage {
                    image_id: format!("dca_{label}_{cat}_{i:04}"),
                    path: format!("dca/{label}/{cat}/{i:04}.jpg"),
                    label,
                    dca_category: cat,
                    source: "fixture".into(),
                })
            })
            .collect()
    }

    fn count(rows: &[ManifestRow], label: Label, split: Split) -> usize {
        rows.iter()
            .filter(|r| r.label == label && r.split == split)
            .count()
    }

    #[test]
    fn holdout_counts_follow_floor() {
        let mut c = clean(Label::Melanoma, 3063);
        c.extend(clean(Label::NonMelanoma, 3063));
        let rows = build_manifest(&c, &[], 1).unwrap();
        for l in Label::ALL {
            assert_eq!(count(&rows, l, Split::Train), 2756);
            assert_eq!(count(&rows, l, Split::Val), 307);
        }
    }

    #[test]
    fn larger_class_is_truncated_to_balance() {
        let mut c = clean(Label::Melanoma, 50);
        c.extend(clean(Label::NonMelanoma, 80));
        let rows = build_manifest(&c, &[], 3).unwrap();
        for split in [Split::Train, Split::Val] {
            assert_eq!(
                count(&rows, Label::Melanoma, split),
                count(&rows, Label::NonMelanoma, split)
            );
        }
        assert_eq!(count(&rows, Label::Melanoma, Split::Train), 45);
    }

    #[test]
    fn dca_rows_all_go_to_test_with_categories() {
        let counts = [
            (DcaSizeCategory::Small, 9),
            (DcaSizeCategory::Medium, 4),
            (DcaSizeCategory::Large, 0),
            (DcaSizeCategory::Other, 2),
        ];
        let mut c = clean(Label::Melanoma, 10);
        c.extend(clean(Label::NonMelanoma, 10));
        let mut d = dca(Label::Melanoma, counts);
        d.extend(dca(Label::NonMelanoma, counts));
        let rows = build_manifest(&c, &d, 0).unwrap();
        let mut per: HashMap<ManifestCategory, usize> = HashMap::new();
        for r in &rows {
            match r.split {
                Split::Test => {
                    assert_ne!(r.dca_category, ManifestCategory::None);
                    *per.entry(r.dca_category).or_default() += 1;
                }
                _ => assert_eq!(r.dca_category, ManifestCategory::None),
            }
        }
        assert_eq!(per[&ManifestCategory::Small], 18);
        assert_eq!(per[&ManifestCategory::Medium], 8);
        assert!(!per.contains_key(&ManifestCategory::Large));
        assert_eq!(per[&ManifestCategory::Other], 4);
    }

    #[test]
    fn seed_determines_split_and_input_order_does_not() {
        let mut c = clean(Label::Melanoma, 40);
        c.extend(clean(Label::NonMelanoma, 40));
        let a = build_manifest(&c, &[], 11).unwrap();
        let mut reversed = c.clone();
        reversed.reverse();
        assert_eq!(a, build_manifest(&reversed, &[], 11).unwrap());
        assert_ne!(a, build_manifest(&c, &[], 12).unwrap());
    }

    #[test]
    fn errors_on_missing_melanoma_small_class_and_duplicates() {
        assert!(matches!(
            build_manifest(&clean(Label::NonMelanoma, 20), &[], 0),
            Err(DcaError::Data(_))
        ));
        let mut c = clean(Label::Melanoma, 20);
        c.extend(clean(Label::NonMelanoma, 5));
        assert!(matches!(build_manifest(&c, &[], 0), Err(DcaError::Data(_))));
        let mut c = clean(Label::Melanoma, 20);
        c.extend(clean(Label::NonMelanoma, 20));
        c.push(c[0].clone());
        assert!(matches!(
            build_manifest(&c, &[], 0),
            Err(DcaError::DuplicateKey(_))
        ));
    }

    #[test]
    fn label_and_category_text_forms() {
        assert_eq!("non-melanoma".parse::<Label>().unwrap(), Label::NonMelanoma);
        assert_eq!(Label::NonMelanoma.to_string(), "non_melanoma");
        assert!("benign".parse::<Label>().is_err());
        assert_eq!(
            ManifestCategory::from(DcaSizeCategory::Other),
            ManifestCategory::Other
        );
    }

    #[test]
    fn manifest_csv_header_and_bytes_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = clean(Label::Melanoma, 12);
        c.extend(clean(Label::NonMelanoma, 12));
        let d = dca(
            Label::Melanoma,
            [
                (DcaSizeCategory::Small, 1),
                (DcaSizeCategory::Medium, 1),
                (DcaSizeCategory::Large, 1),
                (DcaSizeCategory::Other, 1),
            ],
        );
        let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        crate::io::write_csv(&p1, &build_manifest(&c, &d, 5).unwrap()).unwrap();
        crate::io::write_csv(&p2, &build_manifest(&c, &d, 5).unwrap()).unwrap();
        let a = std::fs::read(&p1).unwrap();
        assert_eq!(a, std::fs::read(&p2).unwrap());
        let text = String::from_utf8(a).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "image_id,path,label,split,dca_category,source"
        );
        assert!(text.lines().any(|l| l.ends_with(",melanoma,test,other,fixture")));
    }

    #[test]
    fn scans_image_files_sorted_by_stem() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["b.png", "a.JPG", "notes.txt", "c.jpeg"] {
            std::fs::write(dir.path().join(name), b"x").unwrap();
        }
        let found = scan_clean_dir(dir.path(), Label::Melanoma, "isic").unwrap();
        let ids: Vec<_> = found.iter().map(|c| c.image_id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert!(scan_clean_dir(&dir.path().join("missing"), Label::Melanoma, "x").is_err());
    }
}
