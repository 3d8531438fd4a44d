//! Displacement of the rotating-frame Hamiltonian
//!
//! ```text
//! H = Σ h_jk a_j† a_k + Σ (ε_j a_j + ε̄_j a_j†),   a = (c, m)
//! ```
//!
//! by the generator `Λ = Σ (λ_j a_j − μ_j a_j†)`. Choosing `λ` and `μ` to
//! cancel the linear terms leaves the quadratic part, and therefore the
//! spectrum, unchanged up to a constant. The transformation is exact because
//! commutators of `Λ` with linear terms are c-numbers.
//!
//! For a Hermitian quadratic part `μ = λ*` and `e^Λ` is unitary. The damped
//! matrix is not Hermitian, so `λ` and `μ` are solved for separately and the
//! transformation is a similarity rather than a unitary.

use num_complex::Complex64;

use super::drive_amplitudes;
use crate::error::{Error, Result};
use crate::model::{complex_mode_frequencies, DriveSpec, SystemParams};
use crate::spectral::coupled_roots;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Row-major 2×2 complex matrix over the (cavity, magnon) modes.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Rotating-frame Hamiltonian with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    /// `[[ω̃c − ωd, g̃′], [g̃, ω̃m − ωd]]`
    pub quadratic: Matrix2,
    /// `(εc, εm)`, coefficients of the annihilation operators.
    pub linear: [Complex64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwResult {
    pub lambda_c: Complex64,
    pub lambda_m: Complex64,
    /// Creation-operator coefficients of the generator; `μ = λ*` without loss.
    pub mu_c: Complex64,
    pub mu_m: Complex64,
    pub h_transformed: Matrix2,
    pub energy_offset: Complex64,
    /// Largest remaining linear coefficient after the transformation.
    pub residual_linear: f64,
}

/// Eigenvalues of a 2×2 matrix, labeled like the normal modes.
pub fn eigenvalues(h: &Matrix2) -> (Complex64, Complex64) {
    coupled_roots(h[0][0], h[1][1], h[0][1] * h[1][0])
}

pub fn effective_hamiltonian(
    params: &SystemParams,
    drive: &DriveSpec,
    omega_drive: f64,
) -> EffectiveHamiltonian {
    let modes = complex_mode_frequencies(params);
    let [drive_c, drive_m] = drive_amplitudes(params, drive);
    EffectiveHamiltonian {
        quadratic: [
            [modes.omega_c - omega_drive, modes.g_prime],
            [modes.g, modes.omega_m - omega_drive],
        ],
        linear: [I * drive_c, I * drive_m],
    }
}

/// Normal-ordered operator with at most quadratic terms.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Operator {
    constant: Complex64,
    /// Coefficients of `a_j`.
    lowering: [Complex64; 2],
    /// Coefficients of `a_j†`.
    raising: [Complex64; 2],
    /// Coefficients of `a_j† a_k`.
    quadratic: Matrix2,
}

impl Operator {
    fn zero() -> Self {
        Self { constant: ZERO, lowering: [ZERO; 2], raising: [ZERO; 2], quadratic: [[ZERO; 2]; 2] }
    }

    fn add_scaled(&self, other: &Operator, s: f64) -> Operator {
        let mut out = *self;
        out.constant += s * other.constant;
        for j in 0..2 {
            out.lowering[j] += s * other.lowering[j];
            out.raising[j] += s * other.raising[j];
            for k in 0..2 {
                out.quadratic[j][k] += s * other.quadratic[j][k];
            }
        }
        out
    }
}

/// `[G, X]` for a linear generator `G = Σ α_i a_i + β_i a_i†`.
///
/// Uses `[a_i, a_j† a_k] = δ_ij a_k`, `[a_i†, a_j† a_k] = −δ_ik a_j†` and
/// `[a_i, a_j†] = δ_ij`.
fn commutator(alpha: &[Complex64; 2], beta: &[Complex64; 2], x: &Operator) -> Operator {
    let mut out = Operator::zero();
    for i in 0..2 {
        for k in 0..2 {
            out.lowering[k] += alpha[i] * x.quadratic[i][k];
            out.raising[k] -= beta[i] * x.quadratic[k][i];
        }
        out.constant += alpha[i] * x.raising[i] - beta[i] * x.lowering[i];
    }
    out
}

/// Solves `m·x = rhs`, or `None` when `m` is numerically singular.
fn solve2(m: &Matrix2, rhs: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = (m[0][0] * m[1][1]).norm() + (m[0][1] * m[1][0]).norm();
    if det.norm() <= 1e-14 * scale || det.norm() == 0.0 {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Removes the drive terms from the effective Hamiltonian.
pub fn schrieffer_wolff(
    params: &SystemParams,
    drive: &DriveSpec,
    omega_drive: f64,
) -> Result<SwResult> {
    let heff = effective_hamiltonian(params, drive, omega_drive);
    let h = heff.quadratic;
    let eps = heff.linear;
    let eps_bar = [eps[0].conj(), eps[1].conj()];
    let ht = [[h[0][0], h[1][0]], [h[0][1], h[1][1]]];

    let singular = Error::SingularDetuning { omega_drive };
    // lowering terms cancel when ε + hᵀλ = 0, raising terms when ε̄ + hμ = 0
    let lambda = solve2(&ht, [-eps[0], -eps[1]]).ok_or(singular.clone())?;
    let mu = solve2(&h, [-eps_bar[0], -eps_bar[1]]).ok_or(singular)?;

    let hamiltonian =
        Operator { constant: ZERO, lowering: eps, raising: eps_bar, quadratic: h };
    let alpha = lambda;
    let beta = [-mu[0], -mu[1]];
    // e^Λ H e^{−Λ} = H + [Λ,H] + ½[Λ,[Λ,H]], higher orders vanish identically
    let first = commutator(&alpha, &beta, &hamiltonian);
    let second = commutator(&alpha, &beta, &first);
    let transformed = hamiltonian.add_scaled(&first, 1.0).add_scaled(&second, 0.5);

    let residual_linear = transformed
        .lowering
        .iter()
        .chain(transformed.raising.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(SwResult {
        lambda_c: lambda[0],
        lambda_m: lambda[1],
        mu_c: mu[0],
        mu_m: mu[1],
        h_transformed: hamiltonian.quadratic,
        energy_offset: transformed.constant,
        residual_linear,
    })
}
