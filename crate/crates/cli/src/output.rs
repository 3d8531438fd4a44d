//! CSV, JSON and PNG writers.
//!
//! Numbers are written with 17 significant digits in scientific notation and
//! `\n` line endings so files are byte-identical across platforms.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use image::{Rgb, RgbImage};
use serde::Serialize;
use twotone_core::units::to_hz;
use twotone_core::{Complex64, SweepGrid};

pub fn number(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// `freq_hz, re, im, abs` rows.
pub fn spectrum_csv(freqs: &[f64], values: &[Complex64]) -> String {
    let mut out = String::from("freq_hz,re,im,abs\n");
    for (&w, z) in freqs.iter().zip(values) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            number(to_hz(w)),
            number(z.re),
            number(z.im),
            number(z.norm())
        );
    }
    out
}

/// `|value|` with probe frequencies across and magnon frequencies down.
pub fn grid_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("magnon_hz\\probe_hz");
    for &w in &grid.probe_axis {
        out.push(',');
        out.push_str(&number(to_hz(w)));
    }
    out.push('\n');
    for (j, &wm) in grid.magnon_axis.iter().enumerate() {
        out.push_str(&number(to_hz(wm)));
        for z in grid.column(j) {
            out.push(',');
            out.push_str(&number(z.norm()));
        }
        out.push('\n');
    }
    out
}

pub fn overlay_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("magnon_hz,re_wp,re_wm,re_Op,re_Om\n");
    for ((&wm, poles), zeros) in grid.magnon_axis.iter().zip(&grid.overlay_poles).zip(&grid.overlay_zeros) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            number(to_hz(wm)),
            number(to_hz(poles.0)),
            number(to_hz(poles.1)),
            number(to_hz(zeros.0)),
            number(to_hz(zeros.1))
        );
    }
    out
}

/// Anchor colours of a dark-blue to white sequential map.
const OSLO: [(f64, [f64; 3]); 5] = [
    (0.00, [1.0, 1.0, 1.0]),
    (0.25, [13.0, 50.0, 93.0]),
    (0.50, [54.0, 101.0, 165.0]),
    (0.75, [137.0, 158.0, 194.0]),
    (1.00, [255.0, 255.0, 255.0]),
];

pub fn colormap(t: f64) -> Rgb<u8> {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let k = OSLO.windows(2).position(|w| t <= w[1].0).unwrap_or(OSLO.len() - 2);
    let ((t0, c0), (t1, c1)) = (OSLO[k], OSLO[k + 1]);
    let s = (t - t0) / (t1 - t0);
    Rgb(std::array::from_fn(|i| (c0[i] + s * (c1[i] - c0[i])).round() as u8))
}

const POLE_MARK: Rgb<u8> = Rgb([230, 120, 20]);
const ZERO_MARK: Rgb<u8> = Rgb([200, 40, 160]);

/// Heatmap of `|value|` scaled to `[0, max]`, magnon frequency increasing
/// upward. Poles are marked as solid and zeros as dashed traces.
pub fn heatmap(grid: &SweepGrid, overlays: bool) -> RgbImage {
    let (w, h) = (grid.n_probe() as u32, grid.n_magnon() as u32);
    let max = grid.values.iter().map(|z| z.norm()).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let mut img = RgbImage::new(w, h);
    for j in 0..grid.n_magnon() {
        let y = h - 1 - j as u32;
        for (i, z) in grid.column(j).iter().enumerate() {
            let t = if max > 0.0 { z.norm() / max } else { 0.0 };
            img.put_pixel(i as u32, y, colormap(t));
        }
        if !overlays || grid.n_probe() < 2 {
            continue;
        }
        let step = grid.probe_step();
        let start = grid.probe_axis[0];
        let mut mark = |freq: f64, colour: Rgb<u8>| {
            let idx = ((freq - start) / step).round();
            if idx >= 0.0 && idx < w as f64 {
                img.put_pixel(idx as u32, y, colour);
            }
        };
        let (a, b) = grid.overlay_poles[j];
        mark(a, POLE_MARK);
        mark(b, POLE_MARK);
        if j % 4 < 2 {
            let (a, b) = grid.overlay_zeros[j];
            mark(a, ZERO_MARK);
            mark(b, ZERO_MARK);
        }
    }
    img
}

pub fn write_png(path: &Path, img: &RgbImage) -> anyhow::Result<()> {
    img.save(path).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(number(1.0), "1.0000000000000000e0");
        assert_eq!(number(-2.5e10), "-2.5000000000000000e10");
        assert_eq!(number(f64::NAN), "NaN");
        let x = 0.1 + 0.2;
        assert_eq!(number(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn colormap_is_dark_to_light() {
        let lum = |c: Rgb<u8>| c.0.iter().map(|&v| v as u32).sum::<u32>();
        let samples: Vec<u32> = (0..=20).map(|k| lum(colormap(k as f64 / 20.0))).collect();
        assert!(samples.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(colormap(1.0), Rgb([255, 255, 255]));
        assert_eq!(colormap(f64::NAN), colormap(0.0));
    }
}
