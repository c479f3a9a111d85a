//! Tangle matrices on disk: CSV of raw `τ = C²` and binary PPM heat maps of
//! `log₂ τ`.
//!
//! CSV: `n` lines of `n` comma-separated values, row `i` is qubit `i`,
//! numbers in shortest round-trip decimal form, no header.
//!
//! PPM: `P6\n{w} {h}\n255\n` followed by `w·h` RGB triples, rows top to
//! bottom. Pixel `(i, j)` (row `i`, column `j`) shows pair `(i, j)`, each
//! pair spanning `scale × scale` pixels. Values with `log₂ τ ≥ FLOOR` map to
//! gray level `round(255·(log₂ τ − FLOOR)/(−FLOOR))`, brighter meaning more
//! entangled; `τ = 0`, the diagonal and anything below the floor are
//! [`FLOOR_COLOR`].

use std::io::Write;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use quilt_core::measures::PairwiseTangleMatrix;

/// Lowest rendered `log₂ τ`: about the double-precision noise scale.
pub const HEATMAP_FLOOR: f64 = -52.0;
/// Dark red marks disentangled pairs.
pub const FLOOR_COLOR: [u8; 3] = [128, 0, 0];

pub fn tangle_csv(m: &PairwiseTangleMatrix) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for i in 0..m.n() {
        w.write_record(m.row(i).iter().map(f64::to_string)).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn write_tangle_csv(m: &PairwiseTangleMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, tangle_csv(m)).with_context(|| format!("writing {}", path.display()))
}

pub fn parse_tangle_csv(bytes: &[u8]) -> Result<PairwiseTangleMatrix> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(bytes);
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| f.trim().parse::<f64>().with_context(|| format!("bad value {f:?}")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(PairwiseTangleMatrix::from_rows(&rows)?)
}

pub fn read_tangle_csv(path: &Path) -> Result<PairwiseTangleMatrix> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tangle_csv(&bytes).with_context(|| format!("parsing {}", path.display()))
}

/// Colour of one pair.
pub fn pixel(tangle: f64) -> [u8; 3] {
    let v = tangle.log2();
    if v.is_nan() || v < HEATMAP_FLOOR {
        return FLOOR_COLOR;
    }
    let g = (255.0 * (v.min(0.0) - HEATMAP_FLOOR) / -HEATMAP_FLOOR).round() as u8;
    [g, g, g]
}

/// `log₂ τ` at the centre of a gray level; `None` for the floor colour.
pub fn decode_pixel(px: [u8; 3]) -> Option<f64> {
    if px == FLOOR_COLOR {
        return None;
    }
    Some(HEATMAP_FLOOR + f64::from(px[0]) * -HEATMAP_FLOOR / 255.0)
}

pub fn heatmap_ppm(m: &PairwiseTangleMatrix, scale: u32) -> Vec<u8> {
    let scale = scale.max(1) as usize;
    let side = m.n() * scale;
    let mut out = format!("P6\n{side} {side}\n255\n").into_bytes();
    out.reserve(3 * side * side);
    for i in 0..m.n() {
        let row: Vec<u8> = (0..m.n())
            .flat_map(|j| {
                let px = if i == j { FLOOR_COLOR } else { pixel(m.get(i, j)) };
                std::iter::repeat_n(px, scale).flatten()
            })
            .collect();
        for _ in 0..scale {
            out.extend_from_slice(&row);
        }
    }
    out
}

pub fn write_heatmap(m: &PairwiseTangleMatrix, scale: u32, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    f.write_all(&heatmap_ppm(m, scale))?;
    Ok(())
}

/// A decoded PPM image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl Image {
    pub fn at(&self, row: usize, col: usize) -> [u8; 3] {
        let k = 3 * (row * self.width + col);
        [self.rgb[k], self.rgb[k + 1], self.rgb[k + 2]]
    }
}

/// Reads the binary PPM subset written by [`heatmap_ppm`].
pub fn parse_ppm(bytes: &[u8]) -> Result<Image> {
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        ensure!(start < pos, "truncated PPM header");
        fields.push(std::str::from_utf8(&bytes[start..pos])?.to_string());
    }
    if fields[0] != "P6" || fields[3] != "255" {
        bail!("not an 8-bit P6 image");
    }
    let (width, height): (usize, usize) = (fields[1].parse()?, fields[2].parse()?);
    let rgb = bytes[pos + 1..].to_vec();
    ensure!(rgb.len() == 3 * width * height, "PPM has {} data bytes, expected {}", rgb.len(), 3 * width * height);
    Ok(Image { width, height, rgb })
}
