//! Raster and trace I/O.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::{DynamicImage, ImageEncoder, ImageFormat, ImageReader};

use super::CliError;
use crate::image::Image;
use crate::postproc::EdgeMap;

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

fn luma(r: f64, g: f64, b: f64) -> f64 {
    LUMA_R * r + LUMA_G * g + LUMA_B * b
}

/// Reads a grayscale or color PNG/PGM (8 or 16 bit) or a CSV trace.
/// Values keep their native scale; color is reduced with BT.601 weights.
pub fn decode_image(path: &Path) -> Result<Image, CliError> {
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        return decode_trace_csv(path);
    }
    let reader = ImageReader::open(path)
        .map_err(|e| CliError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| CliError::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        Some(other) => {
            return Err(CliError::format(path, format!("unsupported raster format {other:?}")))
        }
        None => return Err(CliError::format(path, "unrecognized raster format")),
    }
    let decoded = reader
        .decode()
        .map_err(|e| CliError::format(path, format!("decode failed: {e}")))?;
    dynamic_to_image(decoded).map_err(|m| CliError::format(path, m))
}

fn dynamic_to_image(img: DynamicImage) -> Result<Image, String> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels: Vec<f64> = match img {
        DynamicImage::ImageLuma8(b) => b.into_raw().into_iter().map(f64::from).collect(),
        DynamicImage::ImageLumaA8(b) => b.pixels().map(|p| f64::from(p.0[0])).collect(),
        DynamicImage::ImageLuma16(b) => b.into_raw().into_iter().map(f64::from).collect(),
        DynamicImage::ImageLumaA16(b) => b.pixels().map(|p| f64::from(p.0[0])).collect(),
        DynamicImage::ImageRgb8(b) => b
            .pixels()
            .map(|p| luma(p.0[0].into(), p.0[1].into(), p.0[2].into()))
            .collect(),
        DynamicImage::ImageRgba8(b) => b
            .pixels()
            .map(|p| luma(p.0[0].into(), p.0[1].into(), p.0[2].into()))
            .collect(),
        DynamicImage::ImageRgb16(b) => b
            .pixels()
            .map(|p| luma(p.0[0].into(), p.0[1].into(), p.0[2].into()))
            .collect(),
        DynamicImage::ImageRgba16(b) => b
            .pixels()
            .map(|p| luma(p.0[0].into(), p.0[1].into(), p.0[2].into()))
            .collect(),
        other => {
            return Err(format!("unsupported pixel layout {:?}", other.color()));
        }
    };
    Image::new(h, w, pixels).map_err(|e| e.to_string())
}

/// One sample per line; with commas, the last field is the sample. A
/// non-numeric first line is treated as a header.
fn decode_trace_csv(path: &Path) -> Result<Image, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => samples.push(v),
            Ok(v) => {
                return Err(CliError::format(path, format!("line {}: non-finite value {v}", lineno + 1)))
            }
            Err(_) if lineno == 0 => continue,
            Err(_) => {
                return Err(CliError::format(path, format!("line {}: cannot parse `{field}`", lineno + 1)))
            }
        }
    }
    if samples.is_empty() {
        return Err(CliError::format(path, "no samples"));
    }
    Image::from_trace(samples).map_err(|e| CliError::format(path, e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Portable float map (`Pf`, little-endian, bottom row first).
pub fn encode_pfm(path: &Path, rows: usize, cols: usize, values: &[f64]) -> Result<(), CliError> {
    let mut out = create(path)?;
    let mut write = || -> std::io::Result<()> {
        write!(out, "Pf\n{cols} {rows}\n-1.0\n")?;
        for r in (0..rows).rev() {
            for &v in &values[r * cols..(r + 1) * cols] {
                out.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        out.flush()
    };
    write().map_err(|e| CliError::io(path, e))
}

/// Reads a little-endian grayscale PFM written by [`encode_pfm`].
pub fn decode_pfm(path: &Path) -> Result<Image, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut header = Vec::new();
    let mut offset = 0;
    while header.len() < 3 {
        let end = bytes[offset..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| CliError::format(path, "truncated PFM header"))?;
        header.push(String::from_utf8_lossy(&bytes[offset..offset + end]).trim().to_string());
        offset += end + 1;
    }
    if header[0] != "Pf" {
        return Err(CliError::format(path, "not a grayscale PFM"));
    }
    let dims: Vec<usize> = header[1].split_whitespace().filter_map(|s| s.parse().ok()).collect();
    let scale: f64 = header[2].parse().map_err(|_| CliError::format(path, "bad PFM scale"))?;
    if dims.len() != 2 || scale >= 0.0 {
        return Err(CliError::format(path, "unsupported PFM header"));
    }
    let (cols, rows) = (dims[0], dims[1]);
    let data = &bytes[offset..];
    if data.len() != rows * cols * 4 {
        return Err(CliError::format(path, "PFM payload size mismatch"));
    }
    let mut pixels = vec![0.0; rows * cols];
    for (i, chunk) in data.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
        let (file_row, c) = (i / cols, i % cols);
        pixels[(rows - 1 - file_row) * cols + c] = f64::from(v);
    }
    Image::new(rows, cols, pixels).map_err(|e| CliError::format(path, e.to_string()))
}

/// 32-bit float grayscale TIFF.
pub fn encode_tiff_f32(path: &Path, rows: usize, cols: usize, values: &[f64]) -> Result<(), CliError> {
    use tiff::encoder::{colortype, TiffEncoder};

    let data: Vec<f32> = values.iter().map(|&v| v as f32).collect();
    let out = create(path)?;
    let mut encoder = TiffEncoder::new(out).map_err(|e| CliError::format(path, e.to_string()))?;
    encoder
        .write_image::<colortype::Gray32Float>(cols as u32, rows as u32, &data)
        .map_err(|e| CliError::format(path, e.to_string()))
}

/// 8-bit grayscale PNG with edges at 255 and background at 0.
pub fn encode_edge_png(path: &Path, em: &EdgeMap) -> Result<(), CliError> {
    let data: Vec<u8> = em.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    encode_gray_png(path, em.rows(), em.cols(), &data)
}

pub(crate) fn encode_gray_png(path: &Path, rows: usize, cols: usize, data: &[u8]) -> Result<(), CliError> {
    let out = create(path)?;
    image::codecs::png::PngEncoder::new(out)
        .write_image(data, cols as u32, rows as u32, image::ExtendedColorType::L8)
        .map_err(|e| CliError::format(path, e.to_string()))
}

/// Reads an edge PNG back; any nonzero sample is an edge.
pub fn decode_edge_png(path: &Path) -> Result<EdgeMap, CliError> {
    let img = image::open(path).map_err(|e| CliError::format(path, e.to_string()))?;
    let gray = img.to_luma8();
    let (cols, rows) = (gray.width() as usize, gray.height() as usize);
    let bits = gray.into_raw().into_iter().map(|v| v != 0).collect();
    EdgeMap::new(rows, cols, bits).map_err(|e| CliError::format(path, e.to_string()))
}

/// Two-column `index,<column>` CSV.
pub fn encode_trace_csv(path: &Path, column: &str, values: &[f64]) -> Result<(), CliError> {
    let mut out = create(path)?;
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "index,{column}")?;
        for (i, v) in values.iter().enumerate() {
            writeln!(out, "{i},{v:e}")?;
        }
        out.flush()
    };
    write().map_err(|e| CliError::io(path, e))
}
