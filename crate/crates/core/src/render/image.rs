//! RGBA float images and PPM/PFM output.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::error::{Result, VktError};

/// Linear RGBA image, row-major with the origin at the top-left.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRGBA {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[f32; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    /// 8-bit binary RGB, gamma 2.2.
    Ppm,
    /// Little-endian float RGB, linear.
    Pfm,
}

impl ImageFormat {
    /// `.pfm` selects PFM; everything else is PPM.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("pfm") => ImageFormat::Pfm,
            _ => ImageFormat::Ppm,
        }
    }
}

impl ImageRGBA {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, pixels: vec![[0.0; 4]; width * height] }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f32; 4] {
        self.pixels[y * self.width + x]
    }

    pub fn encode(&self, format: ImageFormat) -> Vec<u8> {
        match format {
            ImageFormat::Ppm => self.encode_ppm(),
            ImageFormat::Pfm => self.encode_pfm(),
        }
    }

    pub fn encode_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for p in &self.pixels {
            for &c in &p[..3] {
                out.push(encode_gamma(c));
            }
        }
        out
    }

    pub fn encode_pfm(&self) -> Vec<u8> {
        let mut out = format!("PF\n{} {}\n-1.0\n", self.width, self.height).into_bytes();
        for y in (0..self.height).rev() {
            for p in &self.pixels[y * self.width..(y + 1) * self.width] {
                for &c in &p[..3] {
                    out.extend_from_slice(&c.to_le_bytes());
                }
            }
        }
        out
    }
}

/// `round(255 * clamp(c, 0, 1)^(1/2.2))`.
pub fn encode_gamma(c: f32) -> u8 {
    let c = if c.is_nan() { 0.0 } else { (c as f64).clamp(0.0, 1.0) };
    (255.0 * c.powf(1.0 / 2.2)).round() as u8
}

pub fn write_image(img: &ImageRGBA, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&img.encode(format))?;
    f.sync_data()?;
    Ok(())
}

fn header_token(r: &mut impl BufRead) -> Result<String> {
    let mut tok = Vec::new();
    let mut b = [0u8];
    loop {
        if r.read(&mut b)? == 0 {
            break;
        }
        if b[0].is_ascii_whitespace() {
            if tok.is_empty() {
                continue;
            }
            break;
        }
        tok.push(b[0]);
    }
    String::from_utf8(tok).map_err(|_| VktError::invalid("non-ASCII image header"))
}

/// Parses a PFM (colour, either endianness). Alpha is set to 1.
pub fn decode_pfm(bytes: &[u8]) -> Result<ImageRGBA> {
    let mut r = std::io::Cursor::new(bytes);
    if header_token(&mut r)? != "PF" {
        return Err(VktError::invalid("not a colour PFM file"));
    }
    let parse = |s: String| s.parse::<usize>().map_err(|_| VktError::invalid(format!("bad PFM dimension '{s}'")));
    let width = parse(header_token(&mut r)?)?;
    let height = parse(header_token(&mut r)?)?;
    let scale: f32 = header_token(&mut r)?.parse().map_err(|_| VktError::invalid("bad PFM scale"))?;
    let little = scale < 0.0;
    let mut img = ImageRGBA::new(width, height);
    let mut buf = [0u8; 4];
    for y in (0..height).rev() {
        for x in 0..width {
            let mut px = [0f32, 0.0, 0.0, 1.0];
            for c in px.iter_mut().take(3) {
                r.read_exact(&mut buf).map_err(|_| VktError::TruncatedPayload {
                    expected: (width * height * 12) as u64,
                    actual: bytes.len() as u64,
                })?;
                *c = if little { f32::from_le_bytes(buf) } else { f32::from_be_bytes(buf) };
            }
            img.pixels[y * width + x] = px;
        }
    }
    Ok(img)
}

pub fn read_pfm(path: impl AsRef<Path>) -> Result<ImageRGBA> {
    decode_pfm(&std::fs::read(path)?)
}
