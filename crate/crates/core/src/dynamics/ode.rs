//! Lab-frame time integration of the driven equations of motion
//!
//! ```text
//! ċ = −iω̃c c − i g̃′ m − ℰc e^{−iωt}
//! ṁ = −iω̃m m − i g̃ c − ℰm e^{−iωt}
//! ```
//!
//! with classical RK4. The step divides the drive period exactly, so the
//! forcing phasors at whole and half steps come from a fixed table and the
//! phase never accumulates rounding error.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{drive_amplitudes, input_fields, SteadyState};
use crate::error::{Error, Result};
use crate::model::{complex_mode_frequencies, DriveSpec, SystemParams};
use crate::spectral::denominator_zeros;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Fewest steps per drive period.
pub const MIN_STEPS_PER_PERIOD: usize = 50;

/// Integration horizon, step cap and period-to-period drift tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSettings {
    pub t_max: f64,
    pub dt_max: f64,
    pub tol: f64,
}

/// Slowest normal-mode decay rate, `min(−Im ω̃±)`.
fn slowest_decay(params: &SystemParams) -> f64 {
    let (wp, wm) = denominator_zeros(params);
    (-wp.im).min(-wm.im)
}

impl OdeSettings {
    /// Settings aimed at a relative error of about `tol` in the amplitudes.
    ///
    /// RK4 shifts a lab-frame eigenvalue near `ω` by roughly `ω⁵h⁴/120`, which
    /// moves a response of linewidth `γ` by that amount over `γ`. The step is
    /// chosen with a further factor ten of headroom, and the horizon lets the
    /// slowest transient decay to `tol/100`.
    pub fn recommended(params: &SystemParams, omega: f64, tol: f64) -> Result<Self> {
        let gamma = slowest_decay(params);
        if !(gamma > 0.0) {
            return Err(Error::InvalidInput("the steady state requires damped normal modes".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        let (wp, wm) = denominator_zeros(params);
        let top = omega.abs().max(wp.norm()).max(wm.norm());
        let dt_max = (tol * 12.0 * gamma / top.powi(5)).powf(0.25);
        let t_max = (100.0 / tol).ln().max(10.0) / gamma;
        Ok(Self { t_max, dt_max, tol })
    }
}

/// Integrates from rest and extracts the co-rotating amplitudes averaged over
/// the final drive period.
pub fn steady_state_ode(
    params: &SystemParams,
    drive: &DriveSpec,
    omega: f64,
    t_max: f64,
    dt_max: f64,
    tol: f64,
) -> Result<SteadyState> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!("drive frequency must be positive, got {omega}")));
    }
    if !(dt_max > 0.0) {
        return Err(Error::InvalidInput(format!("dt_max must be positive, got {dt_max}")));
    }
    let gamma = slowest_decay(params);
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput("the steady state requires damped normal modes".into()));
    }
    if !(t_max >= 10.0 / gamma) {
        return Err(Error::InvalidInput(format!(
            "t_max = {t_max:.3e} s is shorter than ten decay times ({:.3e} s)",
            10.0 / gamma
        )));
    }

    let period = TAU / omega;
    let steps = MIN_STEPS_PER_PERIOD.max((period / dt_max).ceil() as usize);
    let periods = ((t_max / period).ceil() as usize).max(2);
    let h = period / steps as f64;

    // phasor[j] = e^{−iωt} at t = j·h/2, periodic in j with period 2·steps
    let phasor: Vec<Complex64> =
        (0..2 * steps).map(|j| Complex64::cis(-PI * j as f64 / steps as f64)).collect();

    let modes = complex_mode_frequencies(params);
    let [fc, fm] = drive_amplitudes(params, drive);
    // y' = M y − F e^{−iωt}
    let m00 = -I * modes.omega_c;
    let m01 = -I * modes.g_prime;
    let m10 = -I * modes.g;
    let m11 = -I * modes.omega_m;
    let rhs = |c: Complex64, m: Complex64, e: Complex64| {
        (m00 * c + m01 * m - fc * e, m10 * c + m11 * m - fm * e)
    };

    let (mut c, mut m) = (ZERO, ZERO);
    let mut averages = [(ZERO, ZERO); 2];
    let half = h / 2.0;
    for period_idx in 0..periods {
        let tail = (period_idx + 2).checked_sub(periods);
        let mut sum = (ZERO, ZERO);
        for n in 0..steps {
            if tail.is_some() {
                let back = phasor[2 * n].conj();
                sum.0 += c * back;
                sum.1 += m * back;
            }
            let e0 = phasor[2 * n];
            let e_half = phasor[2 * n + 1];
            let e1 = phasor[(2 * n + 2) % (2 * steps)];
            let k1 = rhs(c, m, e0);
            let k2 = rhs(c + half * k1.0, m + half * k1.1, e_half);
            let k3 = rhs(c + half * k2.0, m + half * k2.1, e_half);
            let k4 = rhs(c + h * k3.0, m + h * k3.1, e1);
            c += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            m += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        if let Some(slot) = tail {
            averages[slot] = (sum.0 / steps as f64, sum.1 / steps as f64);
        }
    }

    let (prev, last) = (averages[0], averages[1]);
    let size = (last.0.norm_sqr() + last.1.norm_sqr()).sqrt();
    let change = ((last.0 - prev.0).norm_sqr() + (last.1 - prev.1).norm_sqr()).sqrt();
    let drift = if size > 0.0 { change / size } else { change };
    log::debug!("ODE: {steps} steps/period, {periods} periods, drift {drift:.3e}");
    if drift > tol {
        return Err(Error::NonConvergence { drift, tol, t_max: periods as f64 * period });
    }
    Ok(SteadyState {
        c_amp: last.0,
        m_amp: last.1,
        omega_drive: omega,
        input_field: input_fields(drive).0,
    })
}
