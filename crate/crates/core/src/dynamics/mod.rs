//! Steady-state mode amplitudes under coherent two-tone driving.
//!
//! The closed-form responses of [`crate::model`] are re-derived here in two
//! independent ways: by solving the frequency-space equations of motion and
//! by integrating them in the time domain. The [`displacement`] submodule
//! shows that the drive only shifts the mode operators and leaves the
//! normal-mode spectrum untouched.

mod displacement;
mod ode;

pub use displacement::{
    effective_hamiltonian, eigenvalues, schrieffer_wolff, EffectiveHamiltonian, Matrix2, SwResult,
};
pub use ode::{steady_state_ode, OdeSettings};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{complex_mode_frequencies, DriveSpec, SystemParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Long-time amplitudes of `e^{−iωt}` in ⟨c⟩ and ⟨m⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub c_amp: Complex64,
    pub m_amp: Complex64,
    pub omega_drive: f64,
    /// Port 1 input field `ℰ/√(2π)`, the reference for port outputs.
    pub input_field: f64,
}

impl SteadyState {
    fn per_unit_input(&self) -> Result<Complex64> {
        if self.input_field == 0.0 {
            return Err(Error::InvalidInput("response is undefined without a port 1 input".into()));
        }
        Ok(self.c_amp / self.input_field)
    }

    /// `1 + √κ1 e^{−iφ1} c / p1_in`.
    pub fn reflection_port1(&self, params: &SystemParams) -> Result<Complex64> {
        let c = self.per_unit_input()?;
        Ok(1.0 + params.kappa_1.sqrt() * Complex64::cis(-params.phi_1) * c)
    }

    /// `√κ2 e^{−iφ2} c / p1_in`.
    pub fn transmission_port2(&self, params: &SystemParams) -> Result<Complex64> {
        let c = self.per_unit_input()?;
        Ok(params.kappa_2.sqrt() * Complex64::cis(-params.phi_2) * c)
    }
}

/// Port input fields `(p1_in, p3_in)` for a drive.
pub(crate) fn input_fields(drive: &DriveSpec) -> (f64, Complex64) {
    let p1 = drive.amplitude / std::f64::consts::TAU.sqrt();
    (p1, p1 * drive.ratio())
}

/// Forcing amplitudes `(ℰc, ℰm)` entering `ċ = … − ℰc e^{−iωt}`, `ṁ = … − ℰm e^{−iωt}`.
pub(crate) fn drive_amplitudes(params: &SystemParams, drive: &DriveSpec) -> [Complex64; 2] {
    let p = params;
    let (p1, p3) = input_fields(drive);
    let cavity = p.kappa_1.sqrt() * Complex64::cis(p.phi_1) * p1
        + (p.zeta * p.kappa_3).sqrt() * Complex64::cis(p.phi_3p) * p3;
    let magnon = p.kappa_3.sqrt() * Complex64::cis(p.phi_3) * p3;
    [cavity, magnon]
}

/// Solves the frequency-space equations of motion
///
/// ```text
/// Δ̃c c − g̃′ m = −i ℰc
/// −g̃ c + Δ̃m m = −i ℰm
/// ```
pub fn steady_state_frequency(
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
) -> Result<SteadyState> {
    let modes = complex_mode_frequencies(params);
    let d = modes.detunings(Complex64::new(omega, 0.0));
    let a = d.dtilde_c * d.dtilde_m - modes.coupling_product();
    if a.re == 0.0 && a.im == 0.0 {
        return Err(Error::SingularResponse { omega });
    }
    let [fc, fm] = drive_amplitudes(params, drive);
    let (b1, b2) = (-I * fc, -I * fm);
    Ok(SteadyState {
        c_amp: (b1 * d.dtilde_m + modes.g_prime * b2) / a,
        m_amp: (d.dtilde_c * b2 + modes.g * b1) / a,
        omega_drive: omega,
        input_field: input_fields(drive).0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{reflection_port1, transmission_port2};
    use crate::units::mhz;
    use nalgebra::{Matrix2 as NaMatrix2, Vector2};

    #[test]
    fn zero_drive_gives_zero_amplitudes() {
        let d = DriveSpec::new(1.3, 0.4).with_amplitude(0.0);
        let s = steady_state_frequency(&SystemParams::default(), &d, mhz(10_003.0)).unwrap();
        assert_eq!(s.c_amp, Complex64::new(0.0, 0.0));
        assert_eq!(s.m_amp, Complex64::new(0.0, 0.0));
        assert!(s.reflection_port1(&SystemParams::default()).is_err());
    }

    #[test]
    fn decoupled_cavity_is_a_lorentzian() {
        let mut p = SystemParams::default();
        p.g_abs = 0.0;
        p.phi_1 = 0.7;
        let w = mhz(10_004.0);
        let s = steady_state_frequency(&p, &DriveSpec::single_tone(), w).unwrap();
        assert_eq!(s.m_amp, Complex64::new(0.0, 0.0));
        let dc = w - complex_mode_frequencies(&p).omega_c;
        let expected = -I * p.kappa_1.sqrt() * Complex64::cis(p.phi_1) / dc * s.input_field;
        assert!((s.c_amp - expected).norm() < 1e-14 * expected.norm());
    }

    #[test]
    fn matches_a_direct_linear_solve() {
        let mut p = SystemParams::default();
        p.zeta = 0.2;
        p.phi_3p = 0.3;
        p.phi_2 = -0.5;
        let d = DriveSpec::from_effective(&p, 1.0, std::f64::consts::PI).unwrap();
        let w = p.omega_c;
        let modes = complex_mode_frequencies(&p);
        let dt = modes.detunings(Complex64::new(w, 0.0));
        let m = NaMatrix2::new(dt.dtilde_c, -modes.g_prime, -modes.g, dt.dtilde_m);
        let [fc, fm] = drive_amplitudes(&p, &d);
        let x = m.lu().solve(&Vector2::new(-I * fc, -I * fm)).unwrap();
        let s = steady_state_frequency(&p, &d, w).unwrap();
        assert!((s.c_amp - x[0]).norm() < 1e-12 * x[0].norm());
        assert!((s.m_amp - x[1]).norm() < 1e-12 * x[1].norm());
        let r1 = reflection_port1(&p, &d, w).unwrap();
        assert!((s.reflection_port1(&p).unwrap() - r1).norm() < 1e-12);
        let t2 = transmission_port2(&p, &d, w).unwrap();
        assert!((s.transmission_port2(&p).unwrap() - t2).norm() < 1e-12);
    }
}
