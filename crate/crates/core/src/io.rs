//! PNG/JPEG reading and writing, CSV helpers and file digests.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{DcaError, Result};
use crate::image::ImageBuffer;

/// Loads an 8-bit image. Gray inputs (with or without alpha) stay single
/// channel, everything else is converted to RGB.
pub fn load_image(path: &Path) -> Result<ImageBuffer> {
    let dynamic = image::open(path).map_err(|source| DcaError::Image {
        path: path.to_path_buf(),
        source,
    })?;
    let (w, h) = (dynamic.width() as usize, dynamic.height() as usize);
    match dynamic {
        DynamicImage::ImageLuma8(_) | DynamicImage::ImageLumaA8(_) | DynamicImage::ImageLuma16(_) => {
            ImageBuffer::new(w, h, 1, dynamic.to_luma8().into_raw())
        }
        other => ImageBuffer::new(w, h, 3, other.to_rgb8().into_raw()),
    }
}

/// Writes PNG or JPEG according to the file extension.
pub fn save_image(path: &Path, img: &ImageBuffer) -> Result<()> {
    let format = ImageFormat::from_path(path).map_err(|source| DcaError::Image {
        path: path.to_path_buf(),
        source,
    })?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(DcaError::param(format!(
            "{}: only .png and .jpg/.jpeg outputs are supported",
            path.display()
        )));
    }
    let color = if img.channels() == 1 {
        image::ExtendedColorType::L8
    } else {
        image::ExtendedColorType::Rgb8
    };
    image::save_buffer_with_format(
        path,
        img.data(),
        img.width() as u32,
        img.height() as u32,
        color,
        format,
    )
    .map_err(|source| DcaError::Image {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| DcaError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(csv_err)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| DcaError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|source| DcaError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Hex SHA-256 of a file's contents.
pub fn file_digest(path: &Path) -> Result<String> {
    let io_err = |source| DcaError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = reader.read(&mut buf).map_err(io_err)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Hex SHA-256 over the `name digest` lines of several files, in the order
/// given. Names are the final path components.
pub fn files_digest(paths: &[PathBuf]) -> Result<String> {
    let mut hasher = Sha256::new();
    for p in paths {
        let name = p.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
        hasher.update(format!("{name} {}\n", file_digest(p)?).as_bytes());
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Regular files directly inside `dir`, sorted by name.
pub fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io_err = |source| DcaError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        if entry.file_type().map_err(io_err)?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combined_digest_depends_on_content_and_order() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        std::fs::write(&a, b"one").unwrap();
        std::fs::write(&b, b"two").unwrap();
        std::fs::create_dir(dir.path().join("sub")).unwrap();
        let listed = list_files(dir.path()).unwrap();
        assert_eq!(listed, vec![a.clone(), b.clone()]);
        let d = files_digest(&listed).unwrap();
        assert_ne!(d, files_digest(&[b.clone(), a.clone()]).unwrap());
        std::fs::write(&b, b"three").unwrap();
        assert_ne!(d, files_digest(&listed).unwrap());
    }

    #[test]
    fn png_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let rgb = ImageBuffer::from_fn_rgb(7, 5, |x, y| [x as u8 * 30, y as u8 * 50, 9]).unwrap();
        let gray = ImageBuffer::from_fn_gray(6, 3, |x, y| (x * 40 + y) as u8).unwrap();
        for (name, img) in [("rgb.png", &rgb), ("gray.png", &gray)] {
            let path = dir.path().join(name);
            save_image(&path, img).unwrap();
            assert_eq!(&load_image(&path).unwrap(), img);
        }
    }

    #[test]
    fn jpeg_keeps_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.jpg");
        let img = ImageBuffer::filled(16, 8, 3, 120).unwrap();
        save_image(&path, &img).unwrap();
        let back = load_image(&path).unwrap();
        assert_eq!((back.width(), back.height(), back.channels()), (16, 8, 3));
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = load_image(Path::new("/nonexistent/lesion.png")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/lesion.png"));
    }

    #[test]
    fn digest_of_known_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abc.txt");
        std::fs::write(&path, b"abc").unwrap();
        assert_eq!(
            file_digest(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
