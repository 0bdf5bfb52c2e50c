//! Concurrence and entanglement of formation.

use crate::error::{domain, Error, Result};
use crate::linalg::{general_eigenvalues_4x4, h2, hermitian_eigen, singular_values, tolerance, C64};
use crate::states::{check_gwl_p, check_werner_p, sigma_yy, spin_flip_matrix, TwoQubitDensity, WMatrix};

/// Wootters concurrence together with the square roots of the eigenvalues
/// of `ρρ̃`, descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    pub sqrt_eigenvalues: [f64; 4],
}

impl ConcurrenceResult {
    fn from_sqrt(mut s: [f64; 4]) -> Self {
        s.sort_by(|a, b| b.total_cmp(a));
        let value = wootters_margin(&s).max(0.0);
        ConcurrenceResult { value, sqrt_eigenvalues: s }
    }

    /// `√λ₁ − √λ₂ − √λ₃ − √λ₄` before clipping.
    pub fn margin(&self) -> f64 {
        wootters_margin(&self.sqrt_eigenvalues)
    }
}

fn wootters_margin(s: &[f64; 4]) -> f64 {
    s[0] - s[1] - s[2] - s[3]
}

/// `2|det W|`.
pub fn concurrence_pure(psi: &WMatrix) -> f64 {
    (2.0 * psi.determinant().norm()).min(1.0)
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// The `√λᵢ` are obtained as singular values of `Xᵀ(σy⊗σy)X` with
/// `ρ = XX†`, which keeps full absolute precision for small `λᵢ`.
pub fn concurrence_mixed(rho: &TwoQubitDensity) -> Result<ConcurrenceResult> {
    let eig = hermitian_eigen(rho.matrix())?;
    let tol = tolerance();
    let mut x = eig.vectors;
    for (k, &l) in eig.values.0.iter().enumerate() {
        if l < -tol {
            return Err(domain(format!("density matrix has eigenvalue {l:.3e}")));
        }
        let r = l.max(0.0).sqrt();
        for i in 0..4 {
            x.0[i][k] *= r;
        }
    }
    let yy = sigma_yy();
    let tau = x.transpose() * yy * x;
    Ok(ConcurrenceResult::from_sqrt(singular_values(&tau)?))
}

/// Eigenvalues of `ρρ̃` from the general eigensolver, clipped to be
/// non-negative and sorted descending. Imaginary parts above the tolerance
/// are a numeric error.
pub fn rho_rho_tilde_eigenvalues(rho: &TwoQubitDensity) -> Result<[f64; 4]> {
    let m = *rho.matrix() * spin_flip_matrix(rho.matrix());
    let ev = general_eigenvalues_4x4(&m)?;
    let tol = tolerance();
    let mut out = [0.0; 4];
    for (o, z) in out.iter_mut().zip(ev.iter()) {
        if z.im.abs() > tol || z.re < -tol {
            return Err(Error::Numeric {
                message: format!("eigenvalue {z} of ρρ̃ is not a non-negative real"),
                residual: z.im.abs().max(-z.re),
            });
        }
        *o = z.re.max(0.0);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Concurrence from the eigenvalue route (`√` of the eigenvalues of `ρρ̃`).
/// Loses roughly half the digits of [`concurrence_mixed`]; kept as an
/// independent cross-check.
pub fn concurrence_mixed_via_eigenvalues(rho: &TwoQubitDensity) -> Result<ConcurrenceResult> {
    let l = rho_rho_tilde_eigenvalues(rho)?;
    Ok(ConcurrenceResult::from_sqrt(l.map(f64::sqrt)))
}

/// Closed-form eigenvalues of `ρρ̃` for a GWL built on a pure state of
/// concurrence `c`, in the order `(λ₁, λ₂, λ₃, λ₄)` of the closed form.
pub fn gwl_spin_flip_eigenvalues(c: f64, p: f64) -> [f64; 4] {
    let d0sq = 1.0 - c * c;
    let base = ((1.0 - p) / 4.0).powi(2);
    let root = ((1.0 + p).powi(2) - 4.0 * p * p * d0sq).max(0.0).sqrt();
    let split = p.abs() * c * root;
    // λ₁ + λ₂ and λ₁λ₂ = ((1−p)(1+3p)/16)²; λ₂ from the product avoids
    // cancellation when it is tiny
    let sum = (8.0 * c * c * p * p - 3.0 * p * p + 2.0 * p + 1.0) / 8.0;
    let prod = ((1.0 - p) * (1.0 + 3.0 * p) / 16.0).powi(2);
    let l1 = (sum + split / 2.0) / 2.0;
    let l2 = if l1 > 0.0 { prod / l1 } else { 0.0 };
    [l1, l2, base, base]
}

/// Unclipped Wootters combination for a GWL; its sign change marks the
/// separability threshold `p = 1/(1 + 2c)`.
pub fn concurrence_gwl_margin(c: f64, p: f64) -> f64 {
    let l = gwl_spin_flip_eigenvalues(c, p);
    let mut s = l.map(|x| x.max(0.0).sqrt());
    s.sort_by(|a, b| b.total_cmp(a));
    wootters_margin(&s)
}

/// Concurrence of `ρ_GWL(ψ, p)` as a function of `C[ψ]` and `p` only.
pub fn concurrence_gwl_analytic(c: f64, p: f64) -> Result<f64> {
    check_unit(c, "concurrence")?;
    check_gwl_p(p)?;
    Ok(concurrence_gwl_margin(c.clamp(0.0, 1.0), p).max(0.0))
}

fn check_unit(x: f64, what: &str) -> Result<()> {
    let tol = tolerance();
    if !(x >= -tol && x <= 1.0 + tol) {
        return Err(domain(format!("{what} {x} outside [0, 1]")));
    }
    Ok(())
}

/// `E = H₂((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    check_unit(c, "concurrence")?;
    let c = c.clamp(0.0, 1.0);
    Ok(h2((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

pub fn eof_gwl(c: f64, p: f64) -> Result<f64> {
    eof_from_concurrence(concurrence_gwl_analytic(c, p)?)
}

pub fn eof_pure(psi: &WMatrix) -> f64 {
    h2((1.0 + psi.delta0()) / 2.0)
}

/// Closed-form EoF of the Werner state; zero on `[−1/3, 1/3]`.
pub fn eof_werner(p: f64) -> Result<f64> {
    check_werner_p(p)?;
    if p >= -1.0 / 3.0 {
        return Ok(0.0);
    }
    let q = 3.0 * p + 1.0;
    Ok(h2((2.0 - (4.0 - q * q).max(0.0).sqrt()) / 4.0))
}

/// `|⟨ψ|ψ̃⟩|` computed from explicit kets.
pub fn spin_flip_overlap(psi: &WMatrix) -> f64 {
    let a = psi.ket();
    let b = psi.spin_flip().ket();
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<C64>().norm()
}
