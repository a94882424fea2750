//! Spatial expression plots: the input images for the marker-gene task.
//!
//! Cells are drawn as filled circles at their tissue coordinates, colored
//! by a linear ramp from `low_color` to `high_color` over the expression
//! range. Rendering is fully deterministic: the same inputs and style
//! produce byte-identical PNG files on one platform.

use std::io::BufWriter;
use std::path::Path;

use super::CorpusError;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: u32,
    pub height: u32,
    pub point_radius: u32,
    pub margin: u32,
    pub background: [u8; 3],
    /// Color of the minimum expression value.
    pub low_color: [u8; 3],
    /// Color of the maximum expression value.
    pub high_color: [u8; 3],
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            point_radius: 5,
            margin: 24,
            background: [255, 255, 255],
            low_color: [225, 225, 225],
            high_color: [165, 15, 21],
        }
    }
}

/// Renders one gene's spatial expression plot to a PNG file and returns the
/// pixel positions the cell centers were drawn at (in input order).
///
/// The color scale maps the minimum expression to `low_color` and the
/// maximum to `high_color`; when all values are equal, every point takes
/// the low end of the scale.
pub fn render_spatial_plot(
    coords: &[(f64, f64)],
    expression: &[f64],
    gene: &str,
    style: &PlotStyle,
    out_path: &Path,
) -> Result<Vec<(u32, u32)>, CorpusError> {
    if coords.len() != expression.len() || coords.is_empty() {
        return Err(CorpusError::LengthMismatch {
            coords: coords.len(),
            expression: expression.len(),
        });
    }
    if expression.iter().any(|e| !e.is_finite()) {
        return Err(CorpusError::NonFiniteExpression);
    }
    if coords.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(CorpusError::NonFiniteCoordinate);
    }

    let (width, height) = (style.width.max(1), style.height.max(1));
    let mut pixels = vec![0u8; (width * height * 3) as usize];
    for chunk in pixels.chunks_exact_mut(3) {
        chunk.copy_from_slice(&style.background);
    }

    let min_x = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let max_x = coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = coords.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let max_y = coords.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let min_e = expression.iter().copied().fold(f64::INFINITY, f64::min);
    let max_e = expression.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let margin = style.margin as f64;
    let span_x = (width as f64 - 2.0 * margin).max(1.0);
    let span_y = (height as f64 - 2.0 * margin).max(1.0);
    let project = |value: f64, lo: f64, hi: f64, span: f64| -> f64 {
        if hi > lo {
            (value - lo) / (hi - lo) * span
        } else {
            span / 2.0
        }
    };

    let mut centers = Vec::with_capacity(coords.len());
    for (&(x, y), &e) in coords.iter().zip(expression) {
        let px = (margin + project(x, min_x, max_x, span_x)).round() as i64;
        // Flip y so larger coordinates plot higher.
        let py = (height as f64 - 1.0 - (margin + project(y, min_y, max_y, span_y))).round() as i64;
        let t = if max_e > min_e { (e - min_e) / (max_e - min_e) } else { 0.0 };
        let color = [
            lerp_channel(style.low_color[0], style.high_color[0], t),
            lerp_channel(style.low_color[1], style.high_color[1], t),
            lerp_channel(style.low_color[2], style.high_color[2], t),
        ];
        draw_disc(&mut pixels, width, height, px, py, style.point_radius, color);
        centers.push((px.clamp(0, width as i64 - 1) as u32, py.clamp(0, height as i64 - 1) as u32));
    }

    let file = std::fs::File::create(out_path)?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), width, height);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    encoder.add_text_chunk("gene".to_string(), gene.to_string())?;
    let mut writer = encoder.write_header()?;
    writer.write_image_data(&pixels)?;
    writer.finish()?;
    Ok(centers)
}

fn lerp_channel(lo: u8, hi: u8, t: f64) -> u8 {
    (lo as f64 + (hi as f64 - lo as f64) * t).round().clamp(0.0, 255.0) as u8
}

fn draw_disc(pixels: &mut [u8], width: u32, height: u32, cx: i64, cy: i64, radius: u32, color: [u8; 3]) {
    let r = radius as i64;
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy > r * r {
                continue;
            }
            let (x, y) = (cx + dx, cy + dy);
            if x < 0 || y < 0 || x >= width as i64 || y >= height as i64 {
                continue;
            }
            let idx = ((y as u32 * width + x as u32) * 3) as usize;
            pixels[idx..idx + 3].copy_from_slice(&color);
        }
    }
}

/// Decodes a PNG and samples the RGB value at one pixel (test support for
/// verifying rendered plots).
pub fn sample_pixel(path: &Path, x: u32, y: u32) -> Result<[u8; 3], CorpusError> {
    let decoder = png::Decoder::new(std::io::BufReader::new(std::fs::File::open(path)?));
    let mut reader = decoder
        .read_info()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "image too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let stride = info.width as usize * 3;
    let idx = y as usize * stride + x as usize * 3;
    Ok([buf[idx], buf[idx + 1], buf[idx + 2]])
}
