//! Pole/zero factorization of the two-tone reflection.
//!
//! The reflection factors as
//!
//! ```text
//! r1(ω) = (ω − Ω̃+)(ω − Ω̃−) / ((ω − ω̃+)(ω − ω̃−))
//! ```
//!
//! The poles ω̃± are the normal modes and do not depend on the drive. The
//! zeros Ω̃± follow from the same quadratic after `ω̃c ↦ ω̃c′` and `|g| ↦ G`,
//! where the anti-resonance coupling `G` carries the drive amplitude and
//! phase. A real `G` separates the zeros (repulsion), an imaginary `G` makes
//! their real parts merge (attraction).
//!
//! Everything here is closed form. Iterative root finders only appear in
//! the tests.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{complex_mode_frequencies, DriveSpec, SystemParams};
use crate::units::{unit_phasor, wrap_phase};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `|G| < CROSSING_TOLERANCE·|g|` is classified as a level crossing.
pub const CROSSING_TOLERANCE: f64 = 1e-6;

/// `G²` counts as real when `|Im G²| ≤ REAL_TOLERANCE·|G²|`.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Factorized form of the two-tone reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalResponse {
    /// (ω̃+, ω̃−), zeros of the denominator.
    pub poles: (Complex64, Complex64),
    /// (Ω̃+, Ω̃−), zeros of the numerator.
    pub zeros: (Complex64, Complex64),
    /// Anti-resonance coupling G (or G̃ with crosstalk).
    pub g_effective: Complex64,
    /// ω̃c′ = ω̃c + iκ1 (or ω̃c″ with crosstalk).
    pub omega_c_shifted: Complex64,
}

/// Effective port 3 amplitude and phase offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveDriveParams {
    pub delta_0: f64,
    /// In `(−π, π]`.
    pub phi_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Repulsion,
    Attraction,
    Crossing,
    Intermediate,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Repulsion => "Repulsion",
            Regime::Attraction => "Attraction",
            Regime::Crossing => "Crossing",
            Regime::Intermediate => "Intermediate",
        };
        f.write_str(s)
    }
}

/// Orders a root pair: larger real part first, ties broken by larger imaginary part.
fn labeled(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let a_first = a.re > b.re || (a.re == b.re && a.im >= b.im);
    if a_first {
        (a, b)
    } else {
        (b, a)
    }
}

/// Principal square root with `−0.0` imaginary parts treated as `+0.0`, so
/// negative reals map onto the positive imaginary axis.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    Complex64::new(z.re, z.im + 0.0).sqrt()
}

/// Roots of `(z − a)(z − b) − coupling_sq`, principal branch, labeled.
pub fn coupled_roots(a: Complex64, b: Complex64, coupling_sq: Complex64) -> (Complex64, Complex64) {
    if coupling_sq == Complex64::new(0.0, 0.0) {
        return labeled(a, b);
    }
    let mean = (a + b) / 2.0;
    let diff = a - b;
    let half_split = principal_sqrt(diff * diff + 4.0 * coupling_sq) / 2.0;
    labeled(mean + half_split, mean - half_split)
}

/// Normal-mode frequencies ω̃± (poles of every response coefficient).
pub fn denominator_zeros(params: &SystemParams) -> (Complex64, Complex64) {
    let modes = complex_mode_frequencies(params);
    coupled_roots(modes.omega_c, modes.omega_m, modes.coupling_product())
}

pub fn effective_drive_params(params: &SystemParams, drive: &DriveSpec) -> EffectiveDriveParams {
    let p = params;
    let delta_0 = if p.g_abs > 0.0 {
        (p.kappa_1 * p.kappa_3).sqrt() / p.g_abs * drive.delta
    } else {
        f64::INFINITY
    };
    let phi_0 = wrap_phase(p.phi_1 - p.phi_3 + p.g_arg - FRAC_PI_2);
    EffectiveDriveParams { delta_0, phi_0 }
}

/// `1 + δ0 e^{i(φ−φ0)}`, the squared anti-resonance coupling in units of |g|².
///
/// Sums that cancel to within rounding of their inputs are returned as exact
/// zero so the crossing point gives `G = 0` rather than a `1e-8` residue.
fn coupling_ratio_sq(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    let p = params;
    let delta_0 = (p.kappa_1 * p.kappa_3).sqrt() / p.g_abs * drive.delta;
    let theta = drive.phi + p.phi_3 - p.phi_1 + FRAC_PI_2 - p.g_arg;
    let w = 1.0 + delta_0 * unit_phasor(theta);
    if w.norm() <= 4.0 * f64::EPSILON * (1.0 + delta_0) {
        Complex64::new(0.0, 0.0)
    } else {
        w
    }
}

/// Anti-resonance coupling without crosstalk, `G = |g|√(1 + δ0 e^{i(φ−φ0)})`.
pub fn effective_coupling(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    if params.g_abs == 0.0 {
        // G² = |g|² + |g|√(κ1κ3)δ e^{iθ} vanishes identically.
        return Complex64::new(0.0, 0.0);
    }
    params.g_abs * principal_sqrt(coupling_ratio_sq(params, drive))
}

/// `G̃² = g̃g̃′ + i g̃′√(κ1κ3) δ e^{i(φ+φ3−φ1)}`.
fn crosstalk_coupling_sq(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    let p = params;
    let modes = complex_mode_frequencies(p);
    modes.coupling_product()
        + I * modes.g_prime
            * (p.kappa_1 * p.kappa_3).sqrt()
            * drive.delta
            * Complex64::cis(drive.phi + p.phi_3 - p.phi_1)
}

/// Anti-resonance coupling G̃ including port 3 to cavity crosstalk.
pub fn effective_coupling_crosstalk(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    principal_sqrt(crosstalk_coupling_sq(params, drive))
}

/// G without crosstalk and G̃ otherwise.
pub fn anti_resonance_coupling(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    if params.zeta == 0.0 {
        effective_coupling(params, drive)
    } else {
        effective_coupling_crosstalk(params, drive)
    }
}

/// ω̃c′ = ω̃c + iκ1, or ω̃c″ = ω̃c + i[κ1 + √ζ√(κ1κ3) δ e^{i(φ+φ3′−φ1)}] with crosstalk.
pub fn shifted_cavity_frequency(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    let p = params;
    let modes = complex_mode_frequencies(p);
    let mut shift = Complex64::new(p.kappa_1, 0.0);
    if p.zeta != 0.0 {
        shift += p.zeta.sqrt()
            * (p.kappa_1 * p.kappa_3).sqrt()
            * drive.delta
            * Complex64::cis(drive.phi + p.phi_3p - p.phi_1);
    }
    modes.omega_c + I * shift
}

fn coupling_sq(params: &SystemParams, drive: &DriveSpec) -> Complex64 {
    if params.zeta == 0.0 {
        params.g_abs * params.g_abs * coupling_ratio_sq(params, drive)
    } else {
        crosstalk_coupling_sq(params, drive)
    }
}

/// Anti-resonance frequencies Ω̃± (zeros of the reflection numerator).
pub fn numerator_zeros(params: &SystemParams, drive: &DriveSpec) -> (Complex64, Complex64) {
    let modes = complex_mode_frequencies(params);
    let shifted = shifted_cavity_frequency(params, drive);
    coupled_roots(shifted, modes.omega_m, coupling_sq(params, drive))
}

pub fn factorize(params: &SystemParams, drive: &DriveSpec) -> RationalResponse {
    RationalResponse {
        poles: denominator_zeros(params),
        zeros: numerator_zeros(params, drive),
        g_effective: anti_resonance_coupling(params, drive),
        omega_c_shifted: shifted_cavity_frequency(params, drive),
    }
}

/// The single finite zero of the transmission numerator,
/// `ω = ω̃m − g̃′ e^{iφ3} √κ3 δe^{iφ} / (√κ1 e^{iφ1} + √(ζκ3) e^{iφ3′} δe^{iφ})`.
pub fn t2_numerator_zero(params: &SystemParams, drive: &DriveSpec) -> Result<Complex64> {
    let p = params;
    let modes = complex_mode_frequencies(p);
    let ratio = drive.ratio();
    let linear = p.kappa_1.sqrt() * Complex64::cis(p.phi_1)
        + (p.zeta * p.kappa_3).sqrt() * Complex64::cis(p.phi_3p) * ratio;
    let scale = p.kappa_1.sqrt() + (p.zeta * p.kappa_3).sqrt() * drive.delta;
    if linear.norm() <= 4.0 * f64::EPSILON * scale {
        return Err(Error::DegenerateDrive);
    }
    let offset = modes.g_prime * Complex64::cis(p.phi_3) * p.kappa_3.sqrt() * ratio / linear;
    Ok(modes.omega_m - offset)
}

pub fn classify_regime(params: &SystemParams, drive: &DriveSpec) -> Regime {
    let g = anti_resonance_coupling(params, drive);
    if g.norm() < CROSSING_TOLERANCE * params.g_abs || g == Complex64::new(0.0, 0.0) {
        return Regime::Crossing;
    }
    let g_sq = g * g;
    if g_sq.im.abs() <= REAL_TOLERANCE * g_sq.norm() {
        if g_sq.re > 0.0 {
            Regime::Repulsion
        } else {
            Regime::Attraction
        }
    } else {
        Regime::Intermediate
    }
}
