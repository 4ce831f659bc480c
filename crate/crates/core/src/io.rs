//! Image and mask files.
//!
//! Images are read with the `image` crate (PGM and PNG; colour inputs are
//! converted to BT.601 luma) and written as binary 8-bit PGM. Masks are stored
//! as binary PBM (P4) where a set bit marks an available sample.

use std::fs;
use std::io::Write;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use crate::error::{FsrError, Result};
use crate::grid::{ImageGrid, SamplingMask};

/// ITU-R BT.601 luma of an 8-bit RGB triple.
#[inline]
pub fn bt601_luma(r: u8, g: u8, b: u8) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

pub fn image_from_dynamic(img: &DynamicImage) -> Result<ImageGrid> {
    let (width, height) = (img.width() as usize, img.height() as usize);
    let samples: Vec<f64> = match img {
        DynamicImage::ImageLuma8(gray) => gray.as_raw().iter().map(|&v| v as f64).collect(),
        DynamicImage::ImageLumaA8(_) => img.to_luma8().as_raw().iter().map(|&v| v as f64).collect(),
        _ => img
            .to_rgb8()
            .pixels()
            .map(|p| bt601_luma(p[0], p[1], p[2]))
            .collect(),
    };
    ImageGrid::new(width, height, samples)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<ImageGrid> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| FsrError::Image {
        path: path.to_path_buf(),
        source,
    })?;
    image_from_dynamic(&img)
}

/// Rounds and clamps samples to 8 bits.
pub fn to_gray8(image: &ImageGrid) -> Vec<u8> {
    image
        .samples()
        .iter()
        .map(|&v| v.round().clamp(0.0, 255.0) as u8)
        .collect()
}

pub fn encode_pgm(image: &ImageGrid) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    PnmEncoder::new(&mut buf)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(
            &to_gray8(image),
            image.width() as u32,
            image.height() as u32,
            ExtendedColorType::L8,
        )
        .map_err(|e| FsrError::Format {
            format: "PGM",
            reason: e.to_string(),
        })?;
    Ok(buf)
}

pub fn write_pgm(path: impl AsRef<Path>, image: &ImageGrid) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(image)?).map_err(|e| FsrError::io(path, e))
}

pub fn encode_pbm(mask: &SamplingMask) -> Vec<u8> {
    let (w, h) = (mask.width(), mask.height());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    for row in 0..h {
        let mut packed = vec![0u8; row_bytes];
        for col in 0..w {
            if mask.is_known(row, col) {
                packed[col / 8] |= 0x80 >> (col % 8);
            }
        }
        out.extend_from_slice(&packed);
    }
    out
}

fn pbm_error(reason: impl Into<String>) -> FsrError {
    FsrError::Format {
        format: "PBM",
        reason: reason.into(),
    }
}

pub fn decode_pbm(data: &[u8]) -> Result<SamplingMask> {
    let mut pos = 0;
    let mut next_token = || -> Result<String> {
        loop {
            match data.get(pos) {
                Some(b'#') => {
                    while data.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(pbm_error("truncated header")),
            }
        }
        let start = pos;
        while data.get(pos).is_some_and(|c| !c.is_ascii_whitespace()) {
            pos += 1;
        }
        Ok(String::from_utf8_lossy(&data[start..pos]).into_owned())
    };
    let magic = next_token()?;
    if magic != "P4" {
        return Err(pbm_error(format!("expected P4 magic, got {magic:?}")));
    }
    let mut dim = || -> Result<usize> {
        next_token()?
            .parse()
            .map_err(|_| pbm_error("invalid dimension"))
    };
    let (w, h) = (dim()?, dim()?);
    // single whitespace byte separates header and raster
    pos += 1;
    let row_bytes = w.div_ceil(8);
    let raster = data
        .get(pos..pos + row_bytes * h)
        .ok_or_else(|| pbm_error("truncated raster"))?;
    let mut flags = Vec::with_capacity(w * h);
    for row in raster.chunks_exact(row_bytes) {
        for col in 0..w {
            flags.push(row[col / 8] & (0x80 >> (col % 8)) != 0);
        }
    }
    SamplingMask::new(w, h, flags)
}

pub fn read_pbm(path: impl AsRef<Path>) -> Result<SamplingMask> {
    let path = path.as_ref();
    decode_pbm(&fs::read(path).map_err(|e| FsrError::io(path, e))?)
}

pub fn write_pbm(path: impl AsRef<Path>, mask: &SamplingMask) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| FsrError::io(path, e))?;
    file.write_all(&encode_pbm(mask))
        .map_err(|e| FsrError::io(path, e))
}
