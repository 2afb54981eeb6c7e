//! Grayscale file codecs: PGM (P2 ASCII and P5 binary) handled natively,
//! PNG through the `image` crate.

use std::fs;
use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Reads a PGM or PNG file into 8-bit grayscale, sniffing the format from
/// its leading bytes.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_gray(&bytes).map_err(|reason| Error::Format {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn decode_gray(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    if bytes.starts_with(PNG_MAGIC) {
        let dynamic = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
            .map_err(|e| e.to_string())?;
        let luma = dynamic.to_luma8();
        let (w, h) = luma.dimensions();
        return GrayImage::new(w as usize, h as usize, luma.into_raw()).map_err(|e| e.to_string());
    }
    decode_pgm(bytes)
}

struct Header {
    ascii: bool,
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> std::result::Result<Header, String> {
    let ascii = match bytes.get(..2) {
        Some(b"P2") => true,
        Some(b"P5") => false,
        _ => return Err("not a PGM (expected P2 or P5 magic)".into()),
    };
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in &mut fields {
        // whitespace and '#' comments may separate header tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            return Err("truncated PGM header".into());
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .unwrap()
            .parse()
            .map_err(|_| "PGM header value out of range".to_string())?;
    }
    // exactly one whitespace byte separates the header from P5 raster data
    if !bytes.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err("missing whitespace after PGM header".into());
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(format!("PGM has zero dimension {width}x{height}"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("PGM maxval {maxval} outside 1..=65535"));
    }
    Ok(Header {
        ascii,
        width: width as usize,
        height: height as usize,
        maxval,
        data_start: pos + 1,
    })
}

fn rescale(v: u32, maxval: u32) -> std::result::Result<u8, String> {
    if v > maxval {
        return Err(format!("sample {v} exceeds maxval {maxval}"));
    }
    if maxval == 255 {
        return Ok(v as u8);
    }
    Ok(((v as u64 * 255 + maxval as u64 / 2) / maxval as u64) as u8)
}

pub fn decode_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let h = parse_header(bytes)?;
    let n = h.width * h.height;
    let body = &bytes[h.data_start.min(bytes.len())..];
    let mut pixels = Vec::with_capacity(n);
    if h.ascii {
        let text = std::str::from_utf8(body).map_err(|_| "P2 body is not ASCII".to_string())?;
        for tok in text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_ascii_whitespace)
        {
            let v: u32 = tok.parse().map_err(|_| format!("bad P2 sample {tok:?}"))?;
            pixels.push(rescale(v, h.maxval)?);
        }
        if pixels.len() != n {
            return Err(format!(
                "P2 body has {} samples, expected {n}",
                pixels.len()
            ));
        }
    } else {
        let wide = h.maxval > 255;
        let need = if wide { 2 * n } else { n };
        if body.len() < need {
            return Err(format!("P5 body has {} bytes, expected {need}", body.len()));
        }
        if wide {
            for pair in body[..need].chunks_exact(2) {
                pixels.push(rescale(
                    u16::from_be_bytes([pair[0], pair[1]]) as u32,
                    h.maxval,
                )?);
            }
        } else {
            for &b in &body[..need] {
                pixels.push(rescale(b as u32, h.maxval)?);
            }
        }
    }
    GrayImage::new(h.width, h.height, pixels).map_err(|e| e.to_string())
}

/// Binary P5 encoding with maxval 255.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let buf = image::GrayImage::from_raw(
        img.width() as u32,
        img.height() as u32,
        img.pixels().to_vec(),
    )
    .ok_or_else(|| Error::invalid("image buffer size mismatch"))?;
    let mut out = std::io::Cursor::new(Vec::new());
    buf.write_to(&mut out, image::ImageFormat::Png)
        .map_err(|e| Error::invalid(format!("png encode failed: {e}")))?;
    Ok(out.into_inner())
}

/// Writes PNG when the extension is `.png`, PGM (P5) otherwise.
pub fn write_gray(path: &Path, img: &GrayImage) -> Result<()> {
    let is_png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let bytes = if is_png {
        encode_png(img)?
    } else {
        encode_pgm(img)
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
