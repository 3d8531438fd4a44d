use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use twotone_core::spectral::{
    anti_resonance_coupling, classify_regime, denominator_zeros, effective_drive_params,
    numerator_zeros, t2_numerator_zero,
};
use twotone_core::sweep::{evaluate, run_sweep};
use twotone_core::units::to_hz;
use twotone_core::verify::{run_all, VerifyOptions, VerifyReport};
use twotone_core::{Complex64, SweepAxis};

use crate::config::RunConfig;
use crate::output;

/// Complex angular frequency reported in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexHz {
    pub re_hz: f64,
    pub im_hz: f64,
}

impl From<Complex64> for ComplexHz {
    fn from(z: Complex64) -> Self {
        Self { re_hz: to_hz(z.re), im_hz: to_hz(z.im) }
    }
}

fn prepare(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

/// Writes `spectrum_<quantity>.csv` along the probe window at the configured
/// magnon frequency.
pub fn cmd_spectrum(config: &RunConfig, dir: &Path) -> anyhow::Result<PathBuf> {
    prepare(dir)?;
    let params = config.params();
    let drive = config.drive()?;
    let (probe, _) = config.axes();
    let freqs = probe.values();
    let values: Vec<Complex64> = freqs
        .iter()
        .map(|&w| {
            evaluate(config.quantity, &params, &drive, w)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
        .collect();
    let path = dir.join(format!("spectrum_{}.csv", config.quantity));
    output::write_text(&path, &output::spectrum_csv(&freqs, &values))?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub quantity: String,
    pub probe_points: usize,
    pub magnon_points: usize,
    pub singular_cells: usize,
    pub snapshot_hash: String,
    pub files: Vec<String>,
}

/// Writes the grid CSV, the overlay CSV, a JSON summary and optionally a PNG.
pub fn cmd_sweep(config: &RunConfig, dir: &Path, workers: Option<usize>) -> anyhow::Result<SweepSummary> {
    prepare(dir)?;
    let params = config.params();
    let drive = config.drive()?;
    let (probe, magnon) = config.axes();
    let grid = run_sweep(&params, &drive, &probe, &magnon, config.quantity, workers)?;
    let q = config.quantity;
    let grid_path = dir.join(format!("grid_{q}.csv"));
    output::write_text(&grid_path, &output::grid_csv(&grid))?;
    let overlay_path = dir.join(format!("overlay_{q}.csv"));
    output::write_text(&overlay_path, &output::overlay_csv(&grid))?;
    let mut files = vec![grid_path, overlay_path];
    if config.emit_plots {
        let png = dir.join(format!("heatmap_{q}.png"));
        output::write_png(&png, &output::heatmap(&grid, true))?;
        files.push(png);
    }
    let summary = SweepSummary {
        quantity: q.to_string(),
        probe_points: grid.n_probe(),
        magnon_points: grid.n_magnon(),
        singular_cells: grid.singular_cells,
        snapshot_hash: grid.snapshot_hash.clone(),
        files: files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect(),
    };
    output::write_json(&dir.join(format!("sweep_{q}.json")), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleEntry {
    pub magnon_hz: f64,
    pub poles: [ComplexHz; 2],
    pub zeros: [ComplexHz; 2],
    /// Finite zero of the transmission numerator, absent for a degenerate drive.
    pub t2_zero: Option<ComplexHz>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolesReport {
    pub delta: f64,
    pub delta0: f64,
    pub phi: f64,
    pub phi0: f64,
    pub g_effective: ComplexHz,
    pub regime: String,
    pub entries: Vec<PoleEntry>,
}

pub fn poles_report(config: &RunConfig) -> anyhow::Result<PolesReport> {
    let params = config.params();
    let drive = config.drive()?;
    let magnon: Vec<f64> = if config.poles.magnon.is_empty() {
        let (_, axis) = config.axes();
        let n = axis.points.min(21);
        if n == 1 {
            vec![axis.start]
        } else {
            SweepAxis::new(axis.start, axis.stop, n).values()
        }
    } else {
        config.poles.magnon.iter().map(|f| f.angular()).collect()
    };
    let effective = effective_drive_params(&params, &drive);
    let entries = magnon
        .iter()
        .map(|&wm| {
            let p = params.with_magnon_frequency(wm);
            let (wp, wn) = denominator_zeros(&p);
            let (zp, zn) = numerator_zeros(&p, &drive);
            PoleEntry {
                magnon_hz: to_hz(wm),
                poles: [wp.into(), wn.into()],
                zeros: [zp.into(), zn.into()],
                t2_zero: t2_numerator_zero(&p, &drive).ok().map(Into::into),
            }
        })
        .collect();
    Ok(PolesReport {
        delta: drive.delta,
        delta0: effective.delta_0,
        phi: drive.phi,
        phi0: effective.phi_0,
        g_effective: anti_resonance_coupling(&params, &drive).into(),
        regime: classify_regime(&params, &drive).to_string(),
        entries,
    })
}

pub fn cmd_poles(config: &RunConfig, dir: &Path) -> anyhow::Result<PolesReport> {
    prepare(dir)?;
    let report = poles_report(config)?;
    output::write_json(&dir.join("poles.json"), &report)?;
    Ok(report)
}

pub fn cmd_verify(config: &RunConfig, dir: &Path, workers: Option<usize>) -> anyhow::Result<VerifyReport> {
    prepare(dir)?;
    let options = VerifyOptions {
        seed: config.verify.seed,
        params: config.params(),
        run_ode: config.verify.ode,
        run_alignment: config.verify.alignment,
        grid_points: config.sweep.probe_points.max(3),
        workers,
    };
    let report = run_all(&options);
    output::write_json(&dir.join("verify.json"), &report)?;
    Ok(report)
}
