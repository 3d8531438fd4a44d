use thiserror::Error;

/// Errors produced by the response model, the pole/zero analysis and the
/// dynamics layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// `A(ω) = Δ̃cΔ̃m − g̃g̃′` vanished at the requested probe frequency.
    #[error("singular response at ω = {omega} rad/s: the mode determinant vanishes")]
    SingularResponse { omega: f64 },

    /// The linear coefficient of the transmission numerator vanished, so
    /// the numerator has no finite zero.
    #[error("degenerate drive: the transmission numerator has no finite zero")]
    DegenerateDrive,

    /// The displacement system `[[Δc, g],[g*, Δm]]` is singular.
    #[error("singular detuning: drive at ω_d = {omega_drive} rad/s is resonant with a normal mode")]
    SingularDetuning { omega_drive: f64 },

    /// Period-to-period drift of the co-rotating amplitudes still exceeded
    /// the tolerance when the integration reached `t_max`.
    #[error("ODE steady state did not converge: drift {drift:.3e} > tolerance {tol:.3e} at t = {t_max:.3e} s")]
    NonConvergence { drift: f64, tol: f64, t_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
