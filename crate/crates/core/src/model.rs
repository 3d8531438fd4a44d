//! Closed-form input-output response of a cavity mode and a magnon mode
//! coupled to three ports.
//!
//! Ports 1 and 2 couple to the cavity, port 3 couples to the magnon and,
//! through the crosstalk factor `zeta`, weakly to the cavity. All response
//! coefficients share the mode determinant
//!
//! ```text
//! A(ω) = Δ̃c Δ̃m − g̃ g̃′,   Δ̃c = ω − ω̃c,   Δ̃m = ω − ω̃m
//! ```
//!
//! Internally every coefficient is evaluated at a complex frequency so the
//! same code can be used to check pole and zero locations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::mhz;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Static cavity, magnon and port parameters. Frequencies and rates in rad/s,
/// phases in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_c: f64,
    pub omega_m: f64,
    pub g_abs: f64,
    pub g_arg: f64,
    pub kappa_c: f64,
    pub kappa_m: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub kappa_3: f64,
    pub phi_1: f64,
    pub phi_2: f64,
    pub phi_3: f64,
    /// Port 3 to cavity crosstalk factor, dimensionless.
    pub zeta: f64,
    /// Phase of the port 3 to cavity crosstalk coupling.
    pub phi_3p: f64,
}

impl Default for SystemParams {
    /// ωc/2π = ωm/2π = 10 GHz, |g|/2π = 20 MHz, arg g = −π/2, κc/2π = κm/2π = 1 MHz,
    /// κ1/2π = κ2/2π = 10 MHz, κ3/2π = 5 MHz, all port phases zero, no crosstalk.
    fn default() -> Self {
        Self {
            omega_c: mhz(10_000.0),
            omega_m: mhz(10_000.0),
            g_abs: mhz(20.0),
            g_arg: -std::f64::consts::FRAC_PI_2,
            kappa_c: mhz(1.0),
            kappa_m: mhz(1.0),
            kappa_1: mhz(10.0),
            kappa_2: mhz(10.0),
            kappa_3: mhz(5.0),
            phi_1: 0.0,
            phi_2: 0.0,
            phi_3: 0.0,
            zeta: 0.0,
            phi_3p: 0.0,
        }
    }
}

impl SystemParams {
    /// Complex coherent coupling `g = |g| e^{i arg g}`.
    pub fn g(&self) -> Complex64 {
        Complex64::from_polar(self.g_abs, self.g_arg)
    }

    pub fn with_magnon_frequency(mut self, omega_m: f64) -> Self {
        self.omega_m = omega_m;
        self
    }

    /// Exchanges the roles of ports 1 and 2.
    pub fn swap_ports_12(mut self) -> Self {
        std::mem::swap(&mut self.kappa_1, &mut self.kappa_2);
        std::mem::swap(&mut self.phi_1, &mut self.phi_2);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_c", self.omega_c),
            ("omega_m", self.omega_m),
            ("g_abs", self.g_abs),
            ("g_arg", self.g_arg),
            ("kappa_c", self.kappa_c),
            ("kappa_m", self.kappa_m),
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
            ("kappa_3", self.kappa_3),
            ("phi_1", self.phi_1),
            ("phi_2", self.phi_2),
            ("phi_3", self.phi_3),
            ("zeta", self.zeta),
            ("phi_3p", self.phi_3p),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.omega_c <= 0.0 || self.omega_m <= 0.0 {
            return Err(Error::InvalidParams("mode frequencies must be positive".into()));
        }
        let non_negative = [
            ("g_abs", self.g_abs),
            ("kappa_c", self.kappa_c),
            ("kappa_m", self.kappa_m),
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
            ("kappa_3", self.kappa_3),
            ("zeta", self.zeta),
        ];
        for (name, v) in non_negative {
            if v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.rwa_violated() {
            log::warn!(
                "|g| = {:.3e} rad/s exceeds 0.1·ωc; the rotating-wave model is questionable",
                self.g_abs
            );
        }
        Ok(())
    }

    /// True when `|g| > 0.1 ωc`, outside the rotating-wave regime.
    pub fn rwa_violated(&self) -> bool {
        self.g_abs > 0.1 * self.omega_c
    }
}

/// Two-tone drive: port 3 carries `δ e^{iφ}` times the port 1 input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub delta: f64,
    pub phi: f64,
    /// Port 1 coherent amplitude ℰ in √(photons/s).
    pub amplitude: f64,
}

impl Default for DriveSpec {
    fn default() -> Self {
        Self::single_tone()
    }
}

impl DriveSpec {
    pub fn new(delta: f64, phi: f64) -> Self {
        Self { delta, phi, amplitude: 1.0 }
    }

    /// Port 1 only.
    pub fn single_tone() -> Self {
        Self::new(0.0, 0.0)
    }

    /// Builds the drive from the effective amplitude `δ0 = √(κ1κ3)/|g| · δ`.
    pub fn from_effective(params: &SystemParams, delta_0: f64, phi: f64) -> Result<Self> {
        let scale = (params.kappa_1 * params.kappa_3).sqrt();
        if scale == 0.0 {
            return Err(Error::InvalidInput(
                "effective amplitude is undefined when κ1·κ3 = 0".into(),
            ));
        }
        Ok(Self::new(delta_0 * params.g_abs / scale, phi))
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.phi.is_finite() && self.amplitude.is_finite()) {
            return Err(Error::InvalidInput("drive fields must be finite".into()));
        }
        if self.delta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        Ok(())
    }

    /// `δ e^{iφ}`.
    pub fn ratio(&self) -> Complex64 {
        Complex64::from_polar(self.delta, self.phi)
    }

    /// Power renormalization `1/√(1+δ²)`.
    pub fn power_normalization(&self) -> f64 {
        1.0 / (1.0 + self.delta * self.delta).sqrt()
    }
}

/// Dressed complex mode frequencies and couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    /// ω̃c = ωc − i(κc+κ1+κ2+ζκ3)/2
    pub omega_c: Complex64,
    /// ω̃m = ωm − i(κm+κ3)/2
    pub omega_m: Complex64,
    /// g̃, the coupling in the magnon equation.
    pub g: Complex64,
    /// g̃′, the coupling in the cavity equation.
    pub g_prime: Complex64,
}

impl ModeFrequencies {
    pub fn detunings(&self, z: Complex64) -> ComplexDetunings {
        ComplexDetunings { dtilde_c: z - self.omega_c, dtilde_m: z - self.omega_m }
    }

    /// `g̃ g̃′`, equal to `|g|²` without crosstalk.
    pub fn coupling_product(&self) -> Complex64 {
        self.g * self.g_prime
    }
}

/// Complex detunings `Δ̃c = ω − ω̃c`, `Δ̃m = ω − ω̃m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDetunings {
    pub dtilde_c: Complex64,
    pub dtilde_m: Complex64,
}

pub fn complex_mode_frequencies(params: &SystemParams) -> ModeFrequencies {
    let p = params;
    let omega_c = Complex64::new(
        p.omega_c,
        -(p.kappa_c + p.kappa_1 + p.kappa_2 + p.zeta * p.kappa_3) / 2.0,
    );
    let omega_m = Complex64::new(p.omega_m, -(p.kappa_m + p.kappa_3) / 2.0);
    let g = p.g();
    let leak = p.zeta.sqrt() * p.kappa_3 / 2.0;
    let g_tilde = g - I * leak * Complex64::cis(p.phi_3 - p.phi_3p);
    let g_tilde_prime = g.conj() - I * leak * Complex64::cis(p.phi_3p - p.phi_3);
    ModeFrequencies { omega_c, omega_m, g: g_tilde, g_prime: g_tilde_prime }
}

/// Mode determinant `A(z) = Δ̃cΔ̃m − g̃g̃′` at a complex frequency.
pub fn mode_determinant(params: &SystemParams, z: Complex64) -> Complex64 {
    let modes = complex_mode_frequencies(params);
    let d = modes.detunings(z);
    d.dtilde_c * d.dtilde_m - modes.coupling_product()
}

/// The four input/output port combinations evaluated by [`port_response`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CavityPort {
    One,
    Two,
}

impl CavityPort {
    fn coupling(self, p: &SystemParams) -> (f64, f64) {
        match self {
            CavityPort::One => (p.kappa_1, p.phi_1),
            CavityPort::Two => (p.kappa_2, p.phi_2),
        }
    }
}

/// Output at cavity port `out` per unit input at cavity port `input`, with
/// port 3 carrying `ratio` times that input. Returns `(numerator, A)` where
/// the response is `numerator / A`.
fn port_response_parts(
    params: &SystemParams,
    ratio: Complex64,
    z: Complex64,
    out: CavityPort,
    input: CavityPort,
) -> (Complex64, Complex64) {
    let p = params;
    let modes = complex_mode_frequencies(p);
    let d = modes.detunings(z);
    let a = d.dtilde_c * d.dtilde_m - modes.coupling_product();
    let (k_out, phi_out) = out.coupling(p);
    let (k_in, phi_in) = input.coupling(p);

    // Cavity amplitude (times A) per unit input, projected onto the output port.
    let direct = d.dtilde_m * k_in.sqrt() * Complex64::cis(phi_in - phi_out);
    let via_port3 = (modes.g_prime * Complex64::cis(p.phi_3 - phi_out)
        + p.zeta.sqrt() * Complex64::cis(p.phi_3p - phi_out) * d.dtilde_m)
        * p.kappa_3.sqrt()
        * ratio;
    let mut numerator = -I * k_out.sqrt() * (direct + via_port3);
    if out == input {
        numerator += a;
    }
    (numerator, a)
}

fn checked_ratio(numerator: Complex64, a: Complex64, omega: f64) -> Result<Complex64> {
    if a.re == 0.0 && a.im == 0.0 {
        return Err(Error::SingularResponse { omega });
    }
    Ok(numerator / a)
}

fn port_response(
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
    out: CavityPort,
    input: CavityPort,
) -> Result<Complex64> {
    let (n, a) = port_response_parts(params, drive.ratio(), Complex64::new(omega, 0.0), out, input);
    checked_ratio(n, a, omega)
}

/// Single-port scattering coefficients at one probe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    pub s13: Complex64,
    pub s23: Complex64,
}

pub fn s_matrix(params: &SystemParams, omega: f64) -> Result<SMatrix> {
    let p = params;
    let modes = complex_mode_frequencies(p);
    let d = modes.detunings(Complex64::new(omega, 0.0));
    let a = d.dtilde_c * d.dtilde_m - modes.coupling_product();
    if a.re == 0.0 && a.im == 0.0 {
        return Err(Error::SingularResponse { omega });
    }
    let k12 = (p.kappa_1 * p.kappa_2).sqrt();
    let from_port3 = |phi_out: f64| {
        modes.g_prime * Complex64::cis(p.phi_3 - phi_out)
            + p.zeta.sqrt() * Complex64::cis(p.phi_3p - phi_out) * d.dtilde_m
    };
    Ok(SMatrix {
        s11: 1.0 - I * d.dtilde_m * p.kappa_1 / a,
        s22: 1.0 - I * d.dtilde_m * p.kappa_2 / a,
        s21: -I * d.dtilde_m * k12 * Complex64::cis(p.phi_1 - p.phi_2) / a,
        s12: -I * d.dtilde_m * k12 * Complex64::cis(p.phi_2 - p.phi_1) / a,
        s13: -I * (p.kappa_1 * p.kappa_3).sqrt() * from_port3(p.phi_1) / a,
        s23: -I * (p.kappa_2 * p.kappa_3).sqrt() * from_port3(p.phi_2) / a,
    })
}

/// Unnormalized two-tone reflection `r1` at port 1.
pub fn reflection_port1(params: &SystemParams, drive: &DriveSpec, omega: f64) -> Result<Complex64> {
    port_response(params, drive, omega, CavityPort::One, CavityPort::One)
}

/// Unnormalized two-tone transmission `t2` into port 2 (port 1 and 3 driven).
pub fn transmission_port2(
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
) -> Result<Complex64> {
    port_response(params, drive, omega, CavityPort::Two, CavityPort::One)
}

/// Reflection at port 2 when ports 2 and 3 are driven.
pub fn reflection_port2(params: &SystemParams, drive: &DriveSpec, omega: f64) -> Result<Complex64> {
    port_response(params, drive, omega, CavityPort::Two, CavityPort::Two)
}

/// Transmission into port 1 when ports 2 and 3 are driven.
pub fn transmission_port1(
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
) -> Result<Complex64> {
    port_response(params, drive, omega, CavityPort::One, CavityPort::Two)
}

/// Applies the power renormalization `1/√(1+δ²)`.
pub fn normalize(value: Complex64, drive: &DriveSpec) -> Complex64 {
    value * drive.power_normalization()
}

/// Numerator `N(z) = r1(z)·A(z)` of the two-tone reflection at a complex frequency.
pub fn reflection_numerator(params: &SystemParams, drive: &DriveSpec, z: Complex64) -> Complex64 {
    port_response_parts(params, drive.ratio(), z, CavityPort::One, CavityPort::One).0
}

/// Numerator `t2(z)·A(z)` of the two-tone transmission at a complex frequency.
pub fn transmission_numerator(params: &SystemParams, drive: &DriveSpec, z: Complex64) -> Complex64 {
    port_response_parts(params, drive.ratio(), z, CavityPort::Two, CavityPort::One).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mhz, to_mhz};

    fn reference() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn mode_frequencies_without_crosstalk() {
        let mut p = reference();
        p.g_arg = -std::f64::consts::FRAC_PI_2;
        let m = complex_mode_frequencies(&p);
        assert_eq!(m.g, p.g());
        assert_eq!(m.g_prime, p.g().conj());
        assert!((m.g - Complex64::new(0.0, -mhz(20.0))).norm() < 1e-6);
        assert!((m.g_prime - Complex64::new(0.0, mhz(20.0))).norm() < 1e-6);
    }

    #[test]
    fn lossless_limit_has_real_mode_frequencies() {
        let mut p = reference();
        p.kappa_c = 0.0;
        p.kappa_m = 0.0;
        p.kappa_1 = 0.0;
        p.kappa_2 = 0.0;
        p.kappa_3 = 0.0;
        let m = complex_mode_frequencies(&p);
        assert_eq!(m.omega_c, Complex64::new(p.omega_c, 0.0));
        assert_eq!(m.omega_m, Complex64::new(p.omega_m, 0.0));
    }

    #[test]
    fn reference_linewidths() {
        let m = complex_mode_frequencies(&reference());
        assert!((to_mhz(m.omega_c.im) + 10.5).abs() < 1e-12);
        assert!((to_mhz(m.omega_m.im) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn crosstalk_adds_cavity_damping() {
        let mut p = reference();
        p.zeta = 0.4;
        let m = complex_mode_frequencies(&p);
        let expected = -(p.kappa_c + p.kappa_1 + p.kappa_2 + 0.4 * p.kappa_3) / 2.0;
        assert_eq!(m.omega_c.im, expected);
        assert!(m.g_prime != m.g.conj());
    }

    #[test]
    fn decoupled_port_reflects_fully() {
        let mut p = reference();
        p.kappa_1 = 0.0;
        for k in -10..=10 {
            let w = p.omega_c + mhz(7.0 * k as f64);
            assert_eq!(s_matrix(&p, w).unwrap().s11, Complex64::new(1.0, 0.0));
            let r1 = reflection_port1(&p, &DriveSpec::single_tone(), w).unwrap();
            assert!((r1 - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn s21_and_s12_have_equal_magnitude() {
        let mut p = reference();
        p.phi_1 = 0.3;
        p.phi_2 = -1.1;
        for k in -20..=20 {
            let s = s_matrix(&p, p.omega_c + mhz(3.3 * k as f64)).unwrap();
            assert!((s.s21.norm() - s.s12.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_tone_limits() {
        let p = reference();
        let d = DriveSpec::single_tone();
        let w = p.omega_c + mhz(4.0);
        let s = s_matrix(&p, w).unwrap();
        assert!((reflection_port1(&p, &d, w).unwrap() - s.s11).norm() < 1e-15);
        assert!((transmission_port2(&p, &d, w).unwrap() - s.s21).norm() < 1e-15);
        assert!((reflection_port2(&p, &d, w).unwrap() - s.s22).norm() < 1e-15);
        assert!((transmission_port1(&p, &d, w).unwrap() - s.s12).norm() < 1e-15);
    }

    #[test]
    fn decoupled_output_port_transmits_nothing() {
        let mut p = reference();
        p.kappa_2 = 0.0;
        let t2 = transmission_port2(&p, &DriveSpec::single_tone(), p.omega_c).unwrap();
        assert_eq!(t2.norm(), 0.0);
    }

    #[test]
    fn symmetric_ports_reflect_identically() {
        let p = reference();
        let d = DriveSpec::new(1.7, 0.4);
        for k in -10..=10 {
            let w = p.omega_c + mhz(5.0 * k as f64);
            let r1 = reflection_port1(&p, &d, w).unwrap();
            let r2 = reflection_port2(&p, &d, w).unwrap();
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn normalization() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(normalize(one, &DriveSpec::single_tone()), one);
        let r = normalize(one, &DriveSpec::new(1.0, 0.0));
        assert!((r.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 4.0 * f64::EPSILON);
        let r = normalize(one, &DriveSpec::new(12.0, 0.0));
        assert!((r.re - 1.0 / 145f64.sqrt()).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn singular_response_is_an_error() {
        let mut p = reference();
        p.kappa_c = 0.0;
        p.kappa_m = 0.0;
        p.kappa_1 = 0.0;
        p.kappa_2 = 0.0;
        p.kappa_3 = 0.0;
        p.g_abs = 0.0;
        let err = s_matrix(&p, p.omega_c).unwrap_err();
        assert!(matches!(err, Error::SingularResponse { .. }));
        assert!(reflection_port1(&p, &DriveSpec::single_tone(), p.omega_c).is_err());
    }

    #[test]
    fn validation() {
        assert!(reference().validate().is_ok());
        let mut p = reference();
        p.kappa_1 = -1.0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.omega_m = 0.0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.zeta = f64::NAN;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.g_abs = 0.2 * p.omega_c;
        assert!(p.rwa_violated());
        assert!(p.validate().is_ok());
        assert!(DriveSpec::new(-0.1, 0.0).validate().is_err());
    }

    #[test]
    fn effective_drive_round_trip() {
        let p = reference();
        let d = DriveSpec::from_effective(&p, 1.0, 0.0).unwrap();
        let expected = mhz(20.0) / (mhz(10.0) * mhz(5.0)).sqrt();
        assert!((d.delta - expected).abs() < 1e-12);
        let mut q = p;
        q.kappa_3 = 0.0;
        assert!(DriveSpec::from_effective(&q, 1.0, 0.0).is_err());
    }
}
