//! Pure states in W-matrix form, Werner and generalized Werner-like (GWL)
//! mixtures, and the spin-flip operation.

use std::fmt;
use std::str::FromStr;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::linalg::{
    clamp_spectrum, hermitian_eigenvalues, kronecker, pauli_y, tolerance, Mat2, Mat4, Spectrum,
    Subsystem, C64, ONE, ZERO,
};

/// Largest normalization defect that text input may carry and still be
/// silently rescaled.
pub const RENORMALIZE_LIMIT: f64 = 1e-6;

/// Amplitude matrix `W[i][j] = ⟨ij|ψ⟩` of a normalized two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WMatrix(Mat2);

impl WMatrix {
    /// Wrap a matrix whose squared Frobenius norm is 1 within the tolerance.
    pub fn new(m: Mat2) -> Result<Self> {
        let norm2 = m.frobenius_norm().powi(2);
        if !norm2.is_finite() || (norm2 - 1.0).abs() > tolerance() {
            return Err(domain(format!("W-matrix is not normalized: tr(WW†) = {norm2}")));
        }
        Ok(WMatrix(m))
    }

    pub fn from_entries(w00: C64, w01: C64, w10: C64, w11: C64) -> Result<Self> {
        Self::new(Mat2::new([[w00, w01], [w10, w11]]))
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(Mat2::from_real(rows))
    }

    /// Scale an arbitrary non-zero matrix to unit norm.
    pub fn normalized(m: Mat2) -> Result<Self> {
        let n = m.frobenius_norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(domain("cannot normalize a zero or non-finite W-matrix"));
        }
        Ok(WMatrix(m.scale(1.0 / n)))
    }

    /// Representative `diag(a, b)` of the class with concurrence `c`, where
    /// `a, b = √((1 ± Δ₀)/2)` and `Δ₀ = √(1 − c²)`.
    pub fn canonical(c: f64) -> Result<Self> {
        let tol = tolerance();
        if !(c >= -tol && c <= 1.0 + tol) {
            return Err(domain(format!("concurrence {c} outside [0, 1]")));
        }
        let c = c.clamp(0.0, 1.0);
        let d0 = (1.0 - c * c).sqrt();
        let a = ((1.0 + d0) / 2.0).sqrt();
        let b = ((1.0 - d0) / 2.0).sqrt();
        Ok(WMatrix(Mat2::from_real_diagonal([a, b])))
    }

    /// Ket `|ψ⟩` as a length-4 vector in the `2i + j` ordering.
    pub fn from_ket(ket: [C64; 4]) -> Result<Self> {
        Self::new(Mat2::new([[ket[0], ket[1]], [ket[2], ket[3]]]))
    }

    pub fn ket(&self) -> [C64; 4] {
        let w = &self.0 .0;
        [w[0][0], w[0][1], w[1][0], w[1][1]]
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }

    /// Same state with the two qubits exchanged.
    pub fn swapped(&self) -> Self {
        WMatrix(self.0.transpose())
    }

    /// `σy · W̄ · σyᵀ`, the W-matrix of `(σy ⊗ σy)|ψ*⟩`.
    pub fn spin_flip(&self) -> Self {
        let y = pauli_y();
        WMatrix(y * self.0.conj() * y.transpose())
    }

    /// Reduced state of the kept subsystem: `WW†` for A, `WᵀW̄` for B.
    pub fn reduced(&self, kept: Subsystem) -> Mat2 {
        let w = match kept {
            Subsystem::A => self.0,
            Subsystem::B => self.0.transpose(),
        };
        w * w.adjoint()
    }

    /// `Δ₀ = √(1 − C²)`, the length of either reduced Bloch vector.
    pub fn delta0(&self) -> f64 {
        let c = 2.0 * self.determinant().norm();
        (1.0 - c * c).max(0.0).sqrt()
    }

    /// Parse four whitespace-separated complex tokens (`re+imj`), row-major.
    /// Inputs off unit norm by less than [`RENORMALIZE_LIMIT`] are rescaled
    /// with a warning.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(Error::Parse(format!("expected 4 complex entries, found {}", tokens.len())));
        }
        let mut e = [ZERO; 4];
        for (slot, tok) in e.iter_mut().zip(&tokens) {
            *slot = C64::from_str(tok)
                .map_err(|_| Error::Parse(format!("invalid complex number `{tok}`")))?;
            if !(slot.re.is_finite() && slot.im.is_finite()) {
                return Err(Error::Parse(format!("non-finite entry `{tok}`")));
            }
        }
        let m = Mat2::new([[e[0], e[1]], [e[2], e[3]]]);
        let norm2 = m.frobenius_norm().powi(2);
        let defect = (norm2 - 1.0).abs();
        if defect <= tolerance() {
            return Ok(WMatrix(m));
        }
        if defect < RENORMALIZE_LIMIT {
            warn!("W-matrix norm off by {defect:.3e}; renormalizing");
            return Self::normalized(m);
        }
        Err(domain(format!("W-matrix norm² is {norm2}, too far from 1 to renormalize")))
    }

    /// Bell state `(|00⟩ + |11⟩)/√2`.
    pub fn psi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        WMatrix(Mat2::from_real_diagonal([h, h]))
    }

    /// Bell state `(|00⟩ − |11⟩)/√2`.
    pub fn psi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        WMatrix(Mat2::from_real_diagonal([h, -h]))
    }

    /// Bell state `(|01⟩ + |10⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        WMatrix(Mat2::from_real([[0.0, h], [h, 0.0]]))
    }

    /// Singlet `(|01⟩ − |10⟩)/√2`.
    pub fn phi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        WMatrix(Mat2::from_real([[0.0, h], [-h, 0.0]]))
    }

    /// Product state `|00⟩`.
    pub fn product_00() -> Self {
        WMatrix(Mat2::from_real_diagonal([1.0, 0.0]))
    }
}

impl fmt::Display for WMatrix {
    /// Round-trips through [`WMatrix::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.ket();
        let parts: Vec<String> = k.iter().map(|z| format!("{}{:+}j", z.re, z.im)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The four representative states with concurrence 1, 3/4, 1/2 and 1/4.
pub mod examples {
    use super::WMatrix;

    pub fn psi_max() -> WMatrix {
        WMatrix::psi_plus()
    }

    pub fn psi_3() -> WMatrix {
        let s6 = 6f64.sqrt();
        let k = 1.0 / (2.0 * 10f64.sqrt());
        WMatrix::from_real([[3.0 * k, s6 * k], [2.0 * s6 * k, -k]]).expect("normalized")
    }

    pub fn psi_2() -> WMatrix {
        let s2 = 2f64.sqrt();
        let k = 1.0 / 6.0;
        WMatrix::from_real([[-3.0 * k, -3.0 * s2 * k], [2.0 * s2 * k, k]]).expect("normalized")
    }

    pub fn psi_1() -> WMatrix {
        let (s5, s7) = (5f64.sqrt(), 7f64.sqrt());
        let k = 1.0 / 8.0;
        WMatrix::from_real([[s7 * k, s5 * k], [3.0 * s5 * k, s7 * k]]).expect("normalized")
    }

    /// `(name, state, concurrence)` in decreasing concurrence.
    pub fn all() -> [(&'static str, WMatrix, f64); 4] {
        [
            ("psi_max", psi_max(), 1.0),
            ("psi_3", psi_3(), 0.75),
            ("psi_2", psi_2(), 0.5),
            ("psi_1", psi_1(), 0.25),
        ]
    }
}

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity(Mat4);

impl TwoQubitDensity {
    pub fn new(m: Mat4) -> Result<Self> {
        let tol = tolerance();
        if !m.is_hermitian(tol) {
            return Err(domain("density matrix is not Hermitian"));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(domain(format!("density matrix has trace {tr}")));
        }
        let mut spec = hermitian_eigenvalues(&m)?;
        clamp_spectrum(&mut spec, "density matrix")?;
        Ok(TwoQubitDensity(m))
    }

    /// Skip validation; used by constructors that are positive by
    /// construction and by the unchecked escape hatches.
    pub fn new_unchecked(m: Mat4) -> Self {
        TwoQubitDensity(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn eigenvalues(&self) -> Result<Spectrum<4>> {
        hermitian_eigenvalues(&self.0)
    }

    pub fn reduced(&self, kept: Subsystem) -> Mat2 {
        crate::linalg::reduced_state(&self.0, kept)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

/// Exchange operator `F = Σᵢⱼ |ij⟩⟨ji|` on two qubits.
pub fn exchange_operator() -> Mat4 {
    let mut f = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            f.0[2 * i + j][2 * j + i] = ONE;
        }
    }
    f
}

/// `|ψ⟩⟨ψ|` as a 4×4 matrix.
pub fn projector(psi: &WMatrix) -> Mat4 {
    let k = psi.ket();
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = k[i] * k[j].conj();
        }
    }
    m
}

pub fn pure_density(psi: &WMatrix) -> TwoQubitDensity {
    TwoQubitDensity(projector(psi))
}

pub const WERNER_P_MIN: f64 = -1.0;
pub const WERNER_P_MAX: f64 = 1.0 / 3.0;
pub const GWL_P_MIN: f64 = -1.0 / 3.0;
pub const GWL_P_MAX: f64 = 1.0;

fn check_range(p: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    let tol = tolerance();
    if !(p >= lo - tol && p <= hi + tol) {
        return Err(domain(format!("{what} mixing parameter {p} outside [{lo}, {hi}]")));
    }
    Ok(())
}

pub(crate) fn check_werner_p(p: f64) -> Result<()> {
    check_range(p, WERNER_P_MIN, WERNER_P_MAX, "Werner")
}

pub(crate) fn check_gwl_p(p: f64) -> Result<()> {
    check_range(p, GWL_P_MIN, GWL_P_MAX, "GWL")
}

/// Werner state `(1−p)/4·𝟙 + (p/2)·F`, `p ∈ [−1, 1/3]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerState {
    p: f64,
}

impl WernerState {
    pub fn new(p: f64) -> Result<Self> {
        check_werner_p(p)?;
        Ok(WernerState { p })
    }

    /// No range check; the matrix may fail to be positive.
    pub fn new_unchecked(p: f64) -> Self {
        WernerState { p }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn matrix(&self) -> Mat4 {
        Mat4::identity().scale((1.0 - self.p) / 4.0) + exchange_operator().scale(self.p / 2.0)
    }

    pub fn density(&self) -> TwoQubitDensity {
        TwoQubitDensity(self.matrix())
    }
}

/// Generalized Werner-like state `(1−p)/4·𝟙 + p|ψ⟩⟨ψ|`, `p ∈ [−1/3, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwlState {
    psi: WMatrix,
    p: f64,
}

impl GwlState {
    pub fn new(psi: WMatrix, p: f64) -> Result<Self> {
        check_gwl_p(p)?;
        Ok(GwlState { psi, p })
    }

    pub fn new_unchecked(psi: WMatrix, p: f64) -> Self {
        GwlState { psi, p }
    }

    pub fn psi(&self) -> &WMatrix {
        &self.psi
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn matrix(&self) -> Mat4 {
        Mat4::identity().scale((1.0 - self.p) / 4.0) + projector(&self.psi).scale(self.p)
    }

    pub fn density(&self) -> TwoQubitDensity {
        TwoQubitDensity(self.matrix())
    }
}

pub fn werner(p: f64) -> Result<TwoQubitDensity> {
    WernerState::new(p).map(|w| w.density())
}

pub fn gwl(psi: &WMatrix, p: f64) -> Result<TwoQubitDensity> {
    GwlState::new(*psi, p).map(|g| g.density())
}

/// `σy ⊗ σy`.
pub fn sigma_yy() -> Mat4 {
    let y = pauli_y();
    kronecker(&y, &y)
}

/// `(σy⊗σy) ρ̄ (σy⊗σy)`.
pub fn spin_flip_matrix(rho: &Mat4) -> Mat4 {
    let yy = sigma_yy();
    yy * rho.conj() * yy
}

pub fn spin_flip(rho: &TwoQubitDensity) -> TwoQubitDensity {
    TwoQubitDensity(spin_flip_matrix(&rho.0))
}

/// Reduced state of `|ψ⟩⟨ψ|` on the kept subsystem, straight from the
/// W-matrix.
pub fn reduced_from_wmatrix(psi: &WMatrix, kept: Subsystem) -> Mat2 {
    psi.reduced(kept)
}

/// `(U_A ⊗ U_B)|ψ⟩`, i.e. `W ↦ U_A W U_Bᵀ`.
pub fn local_unitary(psi: &WMatrix, u_a: &Mat2, u_b: &Mat2) -> Result<WMatrix> {
    let tol = tolerance();
    if !u_a.is_unitary(tol) || !u_b.is_unitary(tol) {
        return Err(domain("local operation is not unitary"));
    }
    Ok(WMatrix(*u_a * psi.0 * u_b.transpose()))
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state from a seed.
pub fn random_pure_state(seed: u64) -> WMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k: [C64; 4] = std::array::from_fn(|_| gaussian_complex(&mut rng));
        let m = Mat2::new([[k[0], k[1]], [k[2], k[3]]]);
        if let Ok(w) = WMatrix::normalized(m) {
            return w;
        }
    }
}

/// Haar-distributed element of U(2) from a seed.
pub fn random_unitary(seed: u64) -> Mat2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_u64.rotate_left(32));
    let (a, b) = loop {
        let a = gaussian_complex(&mut rng);
        let b = gaussian_complex(&mut rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-12 {
            break (a / n, b / n);
        }
    };
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Mat2::new([[a, -b.conj()], [b, a.conj()]]) * phase
}
