//! Response maps over probe frequency × magnon frequency.
//!
//! Each magnon frequency is one column; columns are evaluated in parallel and
//! never share state, so the result does not depend on the worker count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{self, DriveSpec, SystemParams};
use crate::spectral::{denominator_zeros, numerator_zeros};
use crate::units::ghz;

/// Magnon gyromagnetic ratio γ in rad/(s·T), γ/2π = 28 GHz/T.
pub const GYROMAGNETIC_RATIO: f64 = 28.0 * 2.0 * std::f64::consts::PI * 1e9;

/// Magnon frequency `ωm = γ|H0|` for a bias field in tesla.
pub fn magnon_frequency_from_field(field_tesla: f64) -> f64 {
    GYROMAGNETIC_RATIO * field_tesla.abs()
}

pub fn field_from_magnon_frequency(omega_m: f64) -> f64 {
    omega_m / GYROMAGNETIC_RATIO
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    R1,
    T2,
    R2,
    T1,
    S11,
    S21,
    S13,
    S23,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::R1,
        Quantity::T2,
        Quantity::R2,
        Quantity::T1,
        Quantity::S11,
        Quantity::S21,
        Quantity::S13,
        Quantity::S23,
    ];

    /// Two-tone quantities are power normalized, S-parameters are not.
    pub fn is_two_tone(self) -> bool {
        matches!(self, Quantity::R1 | Quantity::T2 | Quantity::R2 | Quantity::T1)
    }

    /// Whether ports 2 and 3 (rather than 1 and 3) carry the drive.
    pub fn driven_from_port2(self) -> bool {
        matches!(self, Quantity::R2 | Quantity::T1)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown quantity '{s}'")))
    }
}

/// Evaluates one response value, normalized for two-tone quantities.
pub fn evaluate(
    quantity: Quantity,
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
) -> Result<Complex64> {
    let raw = match quantity {
        Quantity::R1 => model::reflection_port1(params, drive, omega)?,
        Quantity::T2 => model::transmission_port2(params, drive, omega)?,
        Quantity::R2 => model::reflection_port2(params, drive, omega)?,
        Quantity::T1 => model::transmission_port1(params, drive, omega)?,
        Quantity::S11 => model::s_matrix(params, omega)?.s11,
        Quantity::S21 => model::s_matrix(params, omega)?.s21,
        Quantity::S13 => model::s_matrix(params, omega)?.s13,
        Quantity::S23 => model::s_matrix(params, omega)?.s23,
    };
    Ok(if quantity.is_two_tone() { model::normalize(raw, drive) } else { raw })
}

/// Evenly spaced frequency axis in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepAxis {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points }
    }

    /// `points` samples over `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, points: usize) -> Self {
        Self::new(center - half_width, center + half_width, points)
    }

    /// A single sample.
    pub fn at(value: f64) -> Self {
        Self::new(value, value, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::InvalidInput("sweep axis needs at least one point".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidInput("sweep axis bounds must be finite".into()));
        }
        if self.points > 1 && !(self.stop > self.start) {
            return Err(Error::InvalidInput(format!(
                "sweep axis must be increasing, got {} .. {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        if self.points > 1 {
            (self.stop - self.start) / (self.points - 1) as f64
        } else {
            0.0
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

/// Grid of responses stored column by column: `values[magnon_idx * n_probe + probe_idx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub quantity: Quantity,
    pub probe_axis: Vec<f64>,
    pub magnon_axis: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `(Re ω̃+, Re ω̃−)` per magnon frequency.
    pub overlay_poles: Vec<(f64, f64)>,
    /// `(Re Ω̃+, Re Ω̃−)` per magnon frequency.
    pub overlay_zeros: Vec<(f64, f64)>,
    /// Cells where the response was singular, stored as NaN.
    pub singular_cells: usize,
    /// SHA-256 of the parameters, drive and axes the grid was built from.
    pub snapshot_hash: String,
}

impl SweepGrid {
    pub fn n_probe(&self) -> usize {
        self.probe_axis.len()
    }

    pub fn n_magnon(&self) -> usize {
        self.magnon_axis.len()
    }

    pub fn value(&self, probe_idx: usize, magnon_idx: usize) -> Complex64 {
        self.values[magnon_idx * self.n_probe() + probe_idx]
    }

    /// All probe samples at one magnon frequency.
    pub fn column(&self, magnon_idx: usize) -> &[Complex64] {
        let n = self.n_probe();
        &self.values[magnon_idx * n..(magnon_idx + 1) * n]
    }

    /// Probe spacing, or zero for a single probe point.
    pub fn probe_step(&self) -> f64 {
        match self.probe_axis.as_slice() {
            [a, b, ..] => b - a,
            _ => 0.0,
        }
    }
}

/// Digest of every input that determines a grid.
pub fn snapshot_hash(
    params: &SystemParams,
    drive: &DriveSpec,
    probe: &SweepAxis,
    magnon: &SweepAxis,
    quantity: Quantity,
) -> String {
    let p = params;
    let fields = [
        p.omega_c, p.omega_m, p.g_abs, p.g_arg, p.kappa_c, p.kappa_m, p.kappa_1, p.kappa_2,
        p.kappa_3, p.phi_1, p.phi_2, p.phi_3, p.zeta, p.phi_3p, drive.delta, drive.phi,
        drive.amplitude, probe.start, probe.stop, magnon.start, magnon.stop,
    ];
    let mut hasher = Sha256::new();
    for v in fields {
        hasher.update(v.to_bits().to_le_bytes());
    }
    hasher.update((probe.points as u64).to_le_bytes());
    hasher.update((magnon.points as u64).to_le_bytes());
    hasher.update(quantity.to_string().as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluates `quantity` on every (probe, magnon) pair.
///
/// `workers` caps the thread count; `None` uses the global rayon pool.
/// Singular cells become NaN and are counted rather than aborting the sweep.
pub fn run_sweep(
    params: &SystemParams,
    drive: &DriveSpec,
    probe: &SweepAxis,
    magnon: &SweepAxis,
    quantity: Quantity,
    workers: Option<usize>,
) -> Result<SweepGrid> {
    params.validate()?;
    drive.validate()?;
    probe.validate()?;
    magnon.validate()?;
    let probe_axis = probe.values();
    let magnon_axis = magnon.values();
    let n_probe = probe_axis.len();
    let mut values = vec![Complex64::new(0.0, 0.0); n_probe * magnon_axis.len()];

    let fill = |values: &mut [Complex64]| -> usize {
        values
            .par_chunks_mut(n_probe)
            .zip(magnon_axis.par_iter())
            .map(|(column, &omega_m)| {
                let p = params.with_magnon_frequency(omega_m);
                let mut singular = 0;
                for (cell, &w) in column.iter_mut().zip(&probe_axis) {
                    *cell = evaluate(quantity, &p, drive, w).unwrap_or_else(|_| {
                        singular += 1;
                        Complex64::new(f64::NAN, f64::NAN)
                    });
                }
                singular
            })
            .sum()
    };
    let singular_cells = match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
            pool.install(|| fill(&mut values))
        }
        None => fill(&mut values),
    };
    if singular_cells > 0 {
        log::warn!("{singular_cells} singular cells stored as NaN");
    }

    let (overlay_poles, overlay_zeros) = magnon_axis
        .iter()
        .map(|&omega_m| {
            let p = params.with_magnon_frequency(omega_m);
            let (wp, wm) = denominator_zeros(&p);
            let zero_params = if quantity.driven_from_port2() { p.swap_ports_12() } else { p };
            let (zp, zm) = numerator_zeros(&zero_params, drive);
            ((wp.re, wm.re), (zp.re, zm.re))
        })
        .unzip();

    Ok(SweepGrid {
        quantity,
        snapshot_hash: snapshot_hash(params, drive, probe, magnon, quantity),
        probe_axis,
        magnon_axis,
        values,
        overlay_poles,
        overlay_zeros,
        singular_cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremum {
    Minima,
    Maxima,
}

/// Strict interior local extrema of `|value|` along each magnon column, as
/// `(probe_idx, magnon_idx)` pairs ordered by column then probe index.
pub fn locate_extrema(grid: &SweepGrid, mode: Extremum) -> Vec<(usize, usize)> {
    let mut found = Vec::new();
    for j in 0..grid.n_magnon() {
        let mags: Vec<f64> = grid.column(j).iter().map(|z| z.norm()).collect();
        for i in 1..mags.len().saturating_sub(1) {
            let (l, c, r) = (mags[i - 1], mags[i], mags[i + 1]);
            let hit = match mode {
                Extremum::Minima => c < l && c < r,
                Extremum::Maxima => c > l && c > r,
            };
            if hit {
                found.push((i, j));
            }
        }
    }
    found
}

/// Which overlay curve an extremum is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overlay {
    Poles,
    Zeros,
}

/// Distance, in probe cells, from each extremum to the nearest overlay branch
/// at the same magnon frequency.
pub fn overlay_offsets(grid: &SweepGrid, extrema: &[(usize, usize)], overlay: Overlay) -> Vec<f64> {
    let step = grid.probe_step();
    let curves = match overlay {
        Overlay::Poles => &grid.overlay_poles,
        Overlay::Zeros => &grid.overlay_zeros,
    };
    extrema
        .iter()
        .map(|&(i, j)| {
            let w = grid.probe_axis[i];
            let (a, b) = curves[j];
            let d = (w - a).abs().min((w - b).abs());
            if step > 0.0 {
                d / step
            } else {
                d
            }
        })
        .collect()
}

/// Default window: `ωc ± 5|g|` on both axes with 401 points each.
pub fn default_axes(params: &SystemParams) -> (SweepAxis, SweepAxis) {
    let half = 5.0 * params.g_abs;
    let half = if half > 0.0 { half } else { ghz(0.1) };
    (
        SweepAxis::centered(params.omega_c, half, 401),
        SweepAxis::centered(params.omega_c, half, 401),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mhz;

    fn small_axes(p: &SystemParams) -> (SweepAxis, SweepAxis) {
        (
            SweepAxis::centered(p.omega_c, mhz(100.0), 41),
            SweepAxis::centered(p.omega_c, mhz(100.0), 7),
        )
    }

    #[test]
    fn one_cell_equals_direct_call() {
        let p = SystemParams::default();
        let d = DriveSpec::new(0.7, 1.2);
        let w = p.omega_c + mhz(3.0);
        for q in Quantity::ALL {
            let g = run_sweep(&p, &d, &SweepAxis::at(w), &SweepAxis::at(p.omega_m), q, Some(1))
                .unwrap();
            assert_eq!(g.values, vec![evaluate(q, &p, &d, w).unwrap()]);
        }
    }

    #[test]
    fn normalization_applies_only_to_two_tone() {
        let p = SystemParams::default();
        let d = DriveSpec::new(1.0, 0.0);
        let w = p.omega_c;
        let r1 = model::reflection_port1(&p, &d, w).unwrap();
        assert_eq!(evaluate(Quantity::R1, &p, &d, w).unwrap(), r1 / 2f64.sqrt());
        let s11 = model::s_matrix(&p, w).unwrap().s11;
        assert_eq!(evaluate(Quantity::S11, &p, &d, w).unwrap(), s11);
    }

    #[test]
    fn columns_are_independent() {
        let p = SystemParams::default();
        let d = DriveSpec::new(0.5, 0.0);
        let (probe, magnon) = small_axes(&p);
        let grid = run_sweep(&p, &d, &probe, &magnon, Quantity::R1, None).unwrap();
        for (j, &wm) in grid.magnon_axis.iter().enumerate() {
            let single =
                run_sweep(&p, &d, &probe, &SweepAxis::at(wm), Quantity::R1, Some(1)).unwrap();
            assert_eq!(grid.column(j), single.values.as_slice());
        }
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let p = SystemParams::default();
        let d = DriveSpec::new(1.1, 2.0);
        let (probe, magnon) = small_axes(&p);
        let a = run_sweep(&p, &d, &probe, &magnon, Quantity::T2, Some(1)).unwrap();
        let b = run_sweep(&p, &d, &probe, &magnon, Quantity::T2, Some(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn singular_cells_become_nan() {
        let mut p = SystemParams::default();
        p.kappa_c = 0.0;
        p.kappa_1 = 0.0;
        p.kappa_2 = 0.0;
        p.g_abs = 0.0;
        // lossless cavity: A vanishes on the cavity frequency
        let probe = SweepAxis::new(p.omega_c - mhz(1.0), p.omega_c + mhz(1.0), 3);
        let g = run_sweep(&p, &DriveSpec::single_tone(), &probe, &SweepAxis::at(p.omega_m), Quantity::S11, None)
            .unwrap();
        assert_eq!(g.singular_cells, 1);
        assert!(g.values[1].re.is_nan());
        assert!(g.values[0].re.is_finite());
    }

    #[test]
    fn constant_grid_has_no_extrema() {
        let mut p = SystemParams::default();
        p.kappa_1 = 0.0;
        let (probe, magnon) = small_axes(&p);
        let g = run_sweep(&p, &DriveSpec::single_tone(), &probe, &magnon, Quantity::S11, None).unwrap();
        assert!(g.values.iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        assert!(locate_extrema(&g, Extremum::Minima).is_empty());
        assert!(locate_extrema(&g, Extremum::Maxima).is_empty());
    }

    #[test]
    fn bare_cavity_dip() {
        let mut p = SystemParams::default();
        p.g_abs = 0.0;
        let (probe, magnon) = small_axes(&p);
        let g = run_sweep(&p, &DriveSpec::single_tone(), &probe, &magnon, Quantity::S11, None).unwrap();
        let minima = locate_extrema(&g, Extremum::Minima);
        assert_eq!(minima.len(), g.n_magnon());
        assert!(minima.iter().all(|&(i, _)| i == 20));
    }

    #[test]
    fn axis_values_and_validation() {
        let a = SweepAxis::new(1.0, 2.0, 5);
        assert_eq!(a.values(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        assert!(SweepAxis::new(2.0, 1.0, 5).validate().is_err());
        assert!(SweepAxis::new(1.0, 2.0, 0).validate().is_err());
        assert!(SweepAxis::at(3.0).validate().is_ok());
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
        }
        assert_eq!("r1".parse::<Quantity>().unwrap(), Quantity::R1);
        assert!("S33".parse::<Quantity>().is_err());
    }

    #[test]
    fn hash_tracks_inputs() {
        let p = SystemParams::default();
        let d = DriveSpec::single_tone();
        let (a, b) = small_axes(&p);
        let h = snapshot_hash(&p, &d, &a, &b, Quantity::R1);
        assert_eq!(h.len(), 64);
        assert_eq!(h, snapshot_hash(&p, &d, &a, &b, Quantity::R1));
        let mut q = p;
        q.kappa_3 *= 1.0 + f64::EPSILON;
        assert_ne!(h, snapshot_hash(&q, &d, &a, &b, Quantity::R1));
    }

    #[test]
    fn field_conversion() {
        let w = magnon_frequency_from_field(10.0 / 28.0);
        assert!((w - ghz(10.0)).abs() < 1e-3);
        assert!((field_from_magnon_frequency(w) - 10.0 / 28.0).abs() < 1e-15);
    }
}
