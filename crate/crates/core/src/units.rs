//! Frequency conversions and phase helpers.
//!
//! Everything inside the crate is an angular frequency in rad/s. Ordinary
//! frequencies (Hz) only appear at the I/O boundary.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Converts an ordinary frequency in Hz to rad/s.
#[inline]
pub fn hz(value: f64) -> f64 {
    TAU * value
}

#[inline]
pub fn khz(value: f64) -> f64 {
    hz(value * 1e3)
}

#[inline]
pub fn mhz(value: f64) -> f64 {
    hz(value * 1e6)
}

#[inline]
pub fn ghz(value: f64) -> f64 {
    hz(value * 1e9)
}

/// Converts an angular frequency in rad/s back to Hz.
#[inline]
pub fn to_hz(omega: f64) -> f64 {
    omega / TAU
}

#[inline]
pub fn to_mhz(omega: f64) -> f64 {
    to_hz(omega) * 1e-6
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// `e^{iθ}` evaluated after reducing θ to `(−π, π]` and reflecting about ±π.
///
/// For angles within rounding of π this yields exactly `-1 + 0i`, which keeps
/// `1 + δ0·e^{iθ}` purely real on the level-attraction line instead of
/// picking up a `sin(π) ≈ 1.2e-16` imaginary residue.
pub fn unit_phasor(theta: f64) -> Complex64 {
    let t = wrap_phase(theta);
    if t.abs() <= PI / 2.0 {
        Complex64::cis(t)
    } else {
        let reflected = if t > 0.0 { t - PI } else { t + PI };
        -Complex64::cis(reflected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(to_hz(hz(1.5)), 1.5);
        assert!((to_mhz(mhz(20.0)) - 20.0).abs() < 1e-12);
        assert!((ghz(10.0) - 2.0 * PI * 1e10).abs() < 1e-3);
        assert!((khz(1.0) - 2.0 * PI * 1e3).abs() < 1e-12);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(0.5) - 0.5).abs() < 1e-15);
        assert!((wrap_phase(-0.5 - TAU) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn phasor_is_exact_on_the_negative_axis() {
        assert_eq!(unit_phasor(PI), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_phasor(-PI), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_phasor(0.0), Complex64::new(1.0, 0.0));
        for k in -20..=20 {
            let theta = 0.37 * k as f64;
            let d = unit_phasor(theta) - Complex64::cis(theta);
            assert!(d.norm() < 1e-14, "θ = {theta}");
        }
    }
}
