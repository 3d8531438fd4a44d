//! Invariant suites run by `twotone verify`.
//!
//! Each suite draws seeded random parameters, evaluates one invariant and
//! reports the worst residual against its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    eigenvalues, schrieffer_wolff, steady_state_frequency, steady_state_ode, OdeSettings,
};
use crate::model::{self, DriveSpec, SystemParams};
use crate::spectral::{
    anti_resonance_coupling, denominator_zeros, effective_coupling, effective_drive_params,
    numerator_zeros,
};
use crate::sweep::{self, Extremum, Overlay, Quantity, SweepAxis};
use crate::units::{ghz, mhz};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub passed: bool,
    pub samples: usize,
}

impl SuiteReport {
    fn new(name: &str, tolerance: f64, residuals: &[f64]) -> Self {
        // NaN residuals count as failures
        let worst = residuals
            .iter()
            .fold(0.0f64, |acc, &r| if r.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(r) });
        Self {
            name: name.to_string(),
            tolerance,
            worst_residual: worst,
            passed: worst <= tolerance,
            samples: residuals.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Base parameters for the grid alignment suites.
    pub params: SystemParams,
    pub run_ode: bool,
    pub run_alignment: bool,
    pub grid_points: usize,
    pub workers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0x7770_70e5,
            params: SystemParams::default(),
            run_ode: true,
            run_alignment: true,
            grid_points: 401,
            workers: None,
        }
    }
}

/// Random physical parameters with the cavity between `carrier.0` and
/// `carrier.1` (rad/s) and about half of the draws with crosstalk.
pub fn random_params<R: Rng>(rng: &mut R, carrier: (f64, f64)) -> SystemParams {
    let omega_c = rng.random_range(carrier.0..carrier.1);
    let mut rate = |lo: f64, hi: f64| mhz(rng.random_range(lo..hi));
    let p = SystemParams {
        omega_c,
        omega_m: 0.0,
        g_abs: rate(1.0, 50.0),
        g_arg: 0.0,
        kappa_c: rate(0.1, 5.0),
        kappa_m: rate(0.1, 5.0),
        kappa_1: rate(0.5, 20.0),
        kappa_2: rate(0.5, 20.0),
        kappa_3: rate(0.5, 20.0),
        phi_1: 0.0,
        phi_2: 0.0,
        phi_3: 0.0,
        zeta: 0.0,
        phi_3p: 0.0,
    };
    let mut phase = || rng.random_range(-PI..PI);
    let mut p = SystemParams {
        omega_m: omega_c + mhz(100.0) * phase() / PI,
        g_arg: phase(),
        phi_1: phase(),
        phi_2: phase(),
        phi_3: phase(),
        phi_3p: phase(),
        ..p
    };
    if rng.random_bool(0.5) {
        p.zeta = rng.random_range(0.0..0.5);
    }
    p
}

pub fn random_drive<R: Rng>(rng: &mut R) -> DriveSpec {
    DriveSpec::new(rng.random_range(0.0..3.0), rng.random_range(-PI..PI))
}

/// A probe frequency within 150 MHz of the cavity.
pub fn random_probe<R: Rng>(rng: &mut R, params: &SystemParams) -> f64 {
    params.omega_c + mhz(rng.random_range(-150.0..150.0))
}

fn default_carrier() -> (f64, f64) {
    (ghz(1.0), ghz(12.0))
}

fn composition(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..200 {
        let p = random_params(rng, default_carrier());
        let d = random_drive(rng);
        let w = random_probe(rng, &p);
        let s = model::s_matrix(&p, w).unwrap();
        let ratio = d.ratio();
        let r1 = model::reflection_port1(&p, &d, w).unwrap();
        let t2 = model::transmission_port2(&p, &d, w).unwrap();
        res.push((r1 - (s.s11 + ratio * s.s13)).norm());
        res.push((t2 - (s.s21 + ratio * s.s23)).norm());
    }
    SuiteReport::new("composition identity r1 = S11 + δe^{iφ}S13, t2 = S21 + δe^{iφ}S23", 1e-12, &res)
}

fn port_swap(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..200 {
        let p = random_params(rng, default_carrier());
        let d = random_drive(rng);
        let w = random_probe(rng, &p);
        let q = p.swap_ports_12();
        res.push(
            (model::reflection_port2(&p, &d, w).unwrap() - model::reflection_port1(&q, &d, w).unwrap())
                .norm(),
        );
        res.push(
            (model::transmission_port1(&p, &d, w).unwrap()
                - model::transmission_port2(&q, &d, w).unwrap())
            .norm(),
        );
    }
    SuiteReport::new("port swap symmetry", 1e-12, &res)
}

fn crosstalk_continuity(rng: &mut ChaCha8Rng, base: &SystemParams) -> SuiteReport {
    // The leading correction is √ζ times rate ratios such as √(κ3/κ1)·δ, so
    // the rates are held at the base values and only phases, detuning,
    // drive and probe are drawn.
    let mut res = Vec::new();
    for _ in 0..100 {
        let mut phase = || rng.random_range(-PI..PI);
        let p = SystemParams {
            g_arg: phase(),
            phi_1: phase(),
            phi_2: phase(),
            phi_3: phase(),
            phi_3p: phase(),
            zeta: 0.0,
            ..*base
        }
        .with_magnon_frequency(base.omega_c + mhz(rng.random_range(-100.0..100.0)));
        let d = random_drive(rng);
        let w = random_probe(rng, &p);
        let mut q = p;
        q.zeta = 1e-12;
        let a = model::reflection_port1(&p, &d, w).unwrap();
        let b = model::reflection_port1(&q, &d, w).unwrap();
        // r1 vanishes at anti-resonances, so compare against the interfering terms
        let s = model::s_matrix(&p, w).unwrap();
        res.push((a - b).norm() / (s.s11.norm() + d.delta * s.s13.norm()));
        let g0 = effective_coupling(&p, &d);
        let g1 = anti_resonance_coupling(&q, &d);
        res.push((g0 - g1).norm() / p.g_abs);
    }
    SuiteReport::new("crosstalk continuity at ζ = 1e-12", 1e-5, &res)
}

fn pole_residual(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..500 {
        let p = random_params(rng, default_carrier());
        let modes = model::complex_mode_frequencies(&p);
        let scale = modes.coupling_product().norm() + (modes.omega_c * modes.omega_m).norm();
        let (wp, wm) = denominator_zeros(&p);
        res.push(model::mode_determinant(&p, wp).norm() / scale);
        res.push(model::mode_determinant(&p, wm).norm() / scale);
    }
    SuiteReport::new("pole residual |D(ω̃±)| / (|g|² + |ω̃cω̃m|)", 1e-9, &res)
}

fn zero_residual(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..500 {
        let p = random_params(rng, default_carrier());
        let d = random_drive(rng);
        let modes = model::complex_mode_frequencies(&p);
        let scale = modes.coupling_product().norm() + (modes.omega_c * modes.omega_m).norm();
        let (zp, zm) = numerator_zeros(&p, &d);
        res.push(model::reflection_numerator(&p, &d, zp).norm() / scale);
        res.push(model::reflection_numerator(&p, &d, zm).norm() / scale);
    }
    SuiteReport::new("zero residual |N(Ω̃±)| / (|g|² + |ω̃cω̃m|)", 1e-9, &res)
}

fn monotone_repulsion(params: &SystemParams) -> SuiteReport {
    let p = params.with_magnon_frequency(params.omega_c);
    let e = effective_drive_params(&p, &DriveSpec::single_tone());
    let split = |d0: f64| {
        let (zp, zm) = numerator_zeros(&p, &DriveSpec::from_effective(&p, d0, e.phi_0).unwrap());
        (zp - zm).re
    };
    // residual: 1 for every step where the splitting fails to grow
    let res: Vec<f64> = (0..300)
        .map(|k| (split((k + 1) as f64 / 100.0) <= split(k as f64 / 100.0)) as u8 as f64)
        .collect();
    SuiteReport::new("zero splitting grows with δ0 at φ − φ0 = 0", 0.0, &res)
}

fn attraction_branch(params: &SystemParams) -> SuiteReport {
    let e = effective_drive_params(params, &DriveSpec::single_tone());
    let phi = e.phi_0 + PI;
    let mut res = Vec::new();
    for k in 1..=100 {
        let d0 = k as f64 / 100.0;
        let g = effective_coupling(params, &DriveSpec::from_effective(params, d0, phi).unwrap());
        res.push(g.im.abs() / params.g_abs);
        let d0 = 1.0 + 2.0 * k as f64 / 100.0;
        let g = effective_coupling(params, &DriveSpec::from_effective(params, d0, phi).unwrap());
        res.push(g.re.abs() / params.g_abs);
    }
    SuiteReport::new("G real for δ0 ≤ 1, imaginary for δ0 > 1 at φ − φ0 = π", 1e-9, &res)
}

fn input_output(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..100 {
        let p = random_params(rng, default_carrier());
        let d = random_drive(rng);
        let w = random_probe(rng, &p);
        let s = steady_state_frequency(&p, &d, w).unwrap();
        let r1 = model::reflection_port1(&p, &d, w).unwrap();
        res.push((s.reflection_port1(&p).unwrap() - r1).norm());
    }
    SuiteReport::new("input-output relation 1 + √κ1 e^{−iφ1} c reproduces r1", 1e-12, &res)
}

fn ode_equivalence(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut res = Vec::new();
    for _ in 0..20 {
        let p = random_params(rng, (ghz(1.0), ghz(3.0)));
        let d = random_drive(rng);
        let w = p.omega_c + mhz(rng.random_range(-60.0..60.0));
        let f = steady_state_frequency(&p, &d, w).unwrap();
        let r = OdeSettings::recommended(&p, w, 1e-8)
            .and_then(|o| steady_state_ode(&p, &d, w, o.t_max, o.dt_max, 1e-6));
        match r {
            Ok(s) => {
                let num = ((s.c_amp - f.c_amp).norm_sqr() + (s.m_amp - f.m_amp).norm_sqr()).sqrt();
                let den = (f.c_amp.norm_sqr() + f.m_amp.norm_sqr()).sqrt();
                res.push(num / den);
            }
            Err(_) => res.push(f64::NAN),
        }
    }
    SuiteReport::new("time-domain steady state matches frequency solution", 1e-6, &res)
}

fn displacement(rng: &mut ChaCha8Rng) -> (SuiteReport, SuiteReport) {
    let mut linear = Vec::new();
    let mut spectrum = Vec::new();
    for k in 0..50 {
        let p = random_params(rng, default_carrier());
        // every other draw sits in the attraction regime
        let d = if k % 2 == 0 {
            let e = effective_drive_params(&p, &DriveSpec::single_tone());
            DriveSpec::from_effective(&p, rng.random_range(1.0..3.0), e.phi_0 + PI).unwrap()
        } else {
            random_drive(rng)
        };
        let wd = random_probe(rng, &p);
        let Ok(sw) = schrieffer_wolff(&p, &d, wd) else {
            linear.push(f64::NAN);
            spectrum.push(f64::NAN);
            continue;
        };
        let [ec, em] = crate::dynamics::effective_hamiltonian(&p, &d, wd).linear;
        linear.push(sw.residual_linear / ec.norm().max(em.norm()).max(1.0));
        let (ep, em) = eigenvalues(&sw.h_transformed);
        let (wp, wm) = denominator_zeros(&p);
        let scale = p.g_abs.max((wp - wd).norm()).max((wm - wd).norm());
        spectrum.push((ep - (wp - wd)).norm().max((em - (wm - wd)).norm()) / scale);
    }
    (
        SuiteReport::new("displacement removes the drive terms", 1e-12, &linear),
        SuiteReport::new("displaced spectrum equals ω̃± − ωd", 1e-10, &spectrum),
    )
}

/// The six (δ0, φ − φ0) configurations of the level attraction study.
pub fn reference_panels() -> [(f64, f64); 6] {
    [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (0.5, PI), (1.0, PI), (2.0, PI)]
}

fn alignment(options: &VerifyOptions) -> (SuiteReport, SuiteReport) {
    let p = options.params;
    let e = effective_drive_params(&p, &DriveSpec::single_tone());
    let half = 5.0 * p.g_abs;
    let axis = SweepAxis::centered(p.omega_c, half, options.grid_points);
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    for (d0, rel_phase) in reference_panels() {
        let d = DriveSpec::from_effective(&p, d0, e.phi_0 + rel_phase).unwrap();
        let r1 = sweep::run_sweep(&p, &d, &axis, &axis, Quantity::R1, options.workers).unwrap();
        let minima = sweep::locate_extrema(&r1, Extremum::Minima);
        zeros.extend(sweep::overlay_offsets(&r1, &minima, Overlay::Zeros));
        let t2 = sweep::run_sweep(&p, &d, &axis, &axis, Quantity::T2, options.workers).unwrap();
        let maxima = sweep::locate_extrema(&t2, Extremum::Maxima);
        poles.extend(sweep::overlay_offsets(&t2, &maxima, Overlay::Poles));
    }
    (
        SuiteReport::new("|R1| column minima within one cell of Re Ω̃±", 1.0, &zeros),
        SuiteReport::new("|T2| column maxima within one cell of Re ω̃±", 1.0, &poles),
    )
}

pub fn run_all(options: &VerifyOptions) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut suites = vec![
        composition(&mut rng),
        port_swap(&mut rng),
        crosstalk_continuity(&mut rng, &options.params),
        pole_residual(&mut rng),
        zero_residual(&mut rng),
        monotone_repulsion(&options.params),
        attraction_branch(&options.params),
        input_output(&mut rng),
    ];
    let (linear, spectrum) = displacement(&mut rng);
    suites.push(linear);
    suites.push(spectrum);
    if options.run_ode {
        suites.push(ode_equivalence(&mut rng));
    }
    if options.run_alignment {
        let (z, p) = alignment(options);
        suites.push(z);
        suites.push(p);
    }
    let all_passed = suites.iter().all(|s| s.passed);
    VerifyReport { seed: options.seed, suites, all_passed }
}

/// Response at the cell closest to `(probe, magnon)` for quick checks.
pub fn sample(grid: &sweep::SweepGrid, probe: f64, magnon: f64) -> Complex64 {
    let nearest = |axis: &[f64], v: f64| {
        axis.iter()
            .enumerate()
            .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    };
    grid.value(nearest(&grid.probe_axis, probe), nearest(&grid.magnon_axis, magnon))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_suites_pass_and_are_deterministic() {
        let o = VerifyOptions { run_ode: false, run_alignment: false, ..Default::default() };
        let a = run_all(&o);
        for s in &a.suites {
            assert!(s.passed, "{} worst {}", s.name, s.worst_residual);
        }
        assert_eq!(a, run_all(&o));
    }

    #[test]
    fn nan_residual_fails() {
        let s = SuiteReport::new("x", 1.0, &[0.1, f64::NAN, 0.2]);
        assert!(!s.passed);
        assert!(s.worst_residual.is_nan());
    }

    #[test]
    fn random_params_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            random_params(&mut rng, default_carrier()).validate().unwrap();
            random_drive(&mut rng).validate().unwrap();
        }
    }
}
