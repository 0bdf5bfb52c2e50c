//! Dense complex linear algebra for the 2×2 and 4×4 matrices that appear in
//! two-qubit problems, plus the entropy primitives built on top of it.
//!
//! Two-qubit basis ordering is `|ij⟩ = |i⟩_A ⊗ |j⟩_B` with row-major index
//! `2i + j`; every module in the crate relies on it.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use log::warn;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default value of the crate-wide numeric tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(DEFAULT_TOLERANCE.to_bits());

/// Crate-wide numeric tolerance used by range, trace and positivity checks.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replace the crate-wide tolerance. Meant to be called once at start-up
/// (the CLI does so for `--tol`).
pub fn set_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0 && tol < 1e-2) {
        return Err(domain(format!("tolerance must lie in (0, 1e-2), got {tol}")));
    }
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

/// One side of the bipartition `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => write!(f, "A"),
            Subsystem::B => write!(f, "B"),
        }
    }
}

/// Square complex matrix of fixed size. Only `N = 2` and `N = 4` are used.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

impl<const N: usize> fmt::Debug for Mat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat{N}[")?;
        for row in &self.0 {
            write!(f, " ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Mat<N> {
    pub const fn new(rows: [[C64; N]; N]) -> Self {
        Mat(rows)
    }

    pub const fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        N
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |M − M†|` entrywise is at most `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    /// Real diagonal of a (presumably Hermitian) matrix.
    pub fn real_diagonal(&self) -> [f64; N] {
        let mut d = [0.0; N];
        for (i, x) in d.iter_mut().enumerate() {
            *x = self.0[i][i].re;
        }
        d
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> [C64; N] {
        let mut v = [ZERO; N];
        for (i, x) in v.iter_mut().enumerate() {
            *x = self.0[i][j];
        }
        v
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = (0..N).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Hermitian part `(M + M†)/2`, used to strip round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }
}

impl Mat2 {
    pub fn determinant(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for Mat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<C64> for Mat<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.map(|z| z * s)
    }
}

impl<const N: usize> Mul<f64> for Mat<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

pub fn pauli_x() -> Mat2 {
    Mat::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Mat2 {
    Mat([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> Mat2 {
    Mat::from_real([[1.0, 0.0], [0.0, -1.0]])
}

/// Tensor product respecting the `|ij⟩ → 2i + j` ordering.
pub fn kronecker(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Partial trace over `traced`: `partial_trace(ρ, B) = tr_B ρ = ρ_A`.
pub fn partial_trace(rho: &Mat4, traced: Subsystem) -> Mat2 {
    let mut m = Mat2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            m.0[a][b] = match traced {
                Subsystem::B => rho.0[2 * a][2 * b] + rho.0[2 * a + 1][2 * b + 1],
                Subsystem::A => rho.0[a][b] + rho.0[2 + a][2 + b],
            };
        }
    }
    m
}

/// Reduced state of the subsystem that is kept: `reduced_state(ρ, A) = ρ_A`.
pub fn reduced_state(rho: &Mat4, kept: Subsystem) -> Mat2 {
    partial_trace(rho, kept.other())
}

/// `−x log₂ x` with the `0 log 0 = 0` convention.
#[inline]
pub fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln() / LN_2
    }
}

/// `x log₂ y` that vanishes whenever `x` does, including `y = 0`.
#[inline]
pub(crate) fn xlog2y(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln() / LN_2
    }
}

/// Shannon binary entropy in bits. Inputs within the tolerance outside
/// `[0, 1]` are clamped.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let tol = tolerance();
    if !(x >= -tol && x <= 1.0 + tol) {
        return Err(domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(neg_xlog2x(x) + neg_xlog2x(1.0 - x))
}

/// Unchecked binary entropy for internal callers whose argument is in range
/// by construction.
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum<const N: usize>(pub [f64; N]);

impl<const N: usize> Spectrum<N> {
    pub fn values(&self) -> &[f64; N] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        self.0[N - 1]
    }

    /// `−Σ λ log₂ λ` over the spectrum; negative round-off is ignored.
    pub fn entropy(&self) -> f64 {
        self.0.iter().map(|&l| neg_xlog2x(l)).sum()
    }
}

/// Eigen-decomposition of a Hermitian matrix: spectrum plus the unitary
/// whose columns are the matching eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<const N: usize> {
    pub values: Spectrum<N>,
    pub vectors: Mat<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `Σ λᵢ vᵢ vᵢ†`.
    pub fn reconstruct(&self) -> Mat<N> {
        let lam = Mat::from_real_diagonal(self.values.0);
        self.vectors * lam * self.vectors.adjoint()
    }
}

/// 2×2 unitary block `U` such that `U† H U` is diagonal for the Hermitian
/// block `H = [[app, g], [ḡ, aqq]]`.
fn jacobi_rotation(app: f64, aqq: f64, g: C64) -> [[C64; 2]; 2] {
    let mag = g.norm();
    let phase = if mag > 0.0 { g / mag } else { ONE };
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let pc = phase.conj();
    [[C64::new(c, 0.0), C64::new(s, 0.0)], [-pc * s, pc * c]]
}

/// Replace columns `p`, `q` of `m` by `m · U` restricted to those columns.
fn rotate_columns<const N: usize>(m: &mut Mat<N>, p: usize, q: usize, u: &[[C64; 2]; 2]) {
    for i in 0..N {
        let (a, b) = (m.0[i][p], m.0[i][q]);
        m.0[i][p] = a * u[0][0] + b * u[1][0];
        m.0[i][q] = a * u[0][1] + b * u[1][1];
    }
}

/// Replace rows `p`, `q` of `m` by `U† · m` restricted to those rows.
fn rotate_rows_adjoint<const N: usize>(m: &mut Mat<N>, p: usize, q: usize, u: &[[C64; 2]; 2]) {
    for j in 0..N {
        let (a, b) = (m.0[p][j], m.0[q][j]);
        m.0[p][j] = u[0][0].conj() * a + u[1][0].conj() * b;
        m.0[q][j] = u[0][1].conj() * a + u[1][1].conj() * b;
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

fn off_diagonal_norm<const N: usize>(m: &Mat<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += m.0[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigen<const N: usize>(m: &Mat<N>) -> Result<HermitianEigen<N>> {
    let scale = m.frobenius_norm();
    let tol = tolerance();
    if !m.is_hermitian(tol * scale.max(1.0)) {
        return Err(Error::Contract(format!(
            "hermitian eigensolver given a non-Hermitian matrix (asymmetry {:.3e})",
            m.max_abs_diff(&m.adjoint())
        )));
    }
    let mut a = m.hermitian_part();
    let mut v = Mat::<N>::identity();
    let target = f64::EPSILON * scale * 0.5;

    let mut converged = scale == 0.0;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let g = a.0[p][q];
                if g.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let u = jacobi_rotation(a.0[p][p].re, a.0[q][q].re, g);
                rotate_columns(&mut a, p, q, &u);
                rotate_rows_adjoint(&mut a, p, q, &u);
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;
                rotate_columns(&mut v, p, q, &u);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e3 * target {
        return Err(Error::Numeric {
            message: "Jacobi sweeps did not converge".into(),
            residual: off_diagonal_norm(&a),
        });
    }

    let diag = a.real_diagonal();
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = Spectrum(std::array::from_fn(|k| diag[order[k]]));
    let mut vectors = Mat::<N>::zeros();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors.0[i][k] = v.0[i][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

pub fn hermitian_eigenvalues<const N: usize>(m: &Mat<N>) -> Result<Spectrum<N>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Singular values (descending) by one-sided Hestenes–Jacobi. Small singular
/// values keep absolute accuracy `ε‖M‖`, unlike the square root of the
/// eigenvalues of `M†M`.
pub fn singular_values<const N: usize>(m: &Mat<N>) -> Result<[f64; N]> {
    let mut a = *m;
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok([0.0; N]);
    }
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in (p + 1)..N {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..N {
                    alpha += a.0[i][p].norm_sqr();
                    beta += a.0[i][q].norm_sqr();
                    gamma += a.0[i][p].conj() * a.0[i][q];
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let u = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, &u);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric {
            message: "one-sided Jacobi SVD did not converge".into(),
            residual: off_diagonal_norm(&(a.adjoint() * a)),
        });
    }
    let mut sv: [f64; N] = std::array::from_fn(|j| {
        (0..N).map(|i| a.0[i][j].norm_sqr()).sum::<f64>().sqrt()
    });
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Clamp round-off negatives of a density-matrix spectrum. Values in
/// `[−tol, 0)` are set to zero with a warning; anything below is an error.
pub(crate) fn clamp_spectrum<const N: usize>(spec: &mut Spectrum<N>, what: &str) -> Result<()> {
    let tol = tolerance();
    for l in spec.0.iter_mut() {
        if *l < -tol {
            return Err(domain(format!("{what}: eigenvalue {l:.3e} is negative beyond tolerance")));
        }
        if *l < 0.0 {
            if *l < -1e3 * f64::EPSILON {
                warn!("{what}: clamping eigenvalue {l:.3e} to zero");
            }
            *l = 0.0;
        }
    }
    Ok(())
}

/// Von Neumann entropy `−tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &Mat<N>) -> Result<f64> {
    let tol = tolerance();
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(domain(format!("density matrix has trace {tr}, expected 1")));
    }
    let mut spec = hermitian_eigenvalues(rho)?;
    clamp_spectrum(&mut spec, "von Neumann entropy")?;
    Ok(spec.entropy())
}

/// Reduce to upper Hessenberg form by Householder reflections.
fn hessenberg<const N: usize>(m: &Mat<N>) -> Mat<N> {
    let mut a = *m;
    for k in 0..N.saturating_sub(2) {
        let norm_x: f64 = ((k + 1)..N).map(|i| a.0[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = a.0[k + 1][k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm_x;
        let mut v = [ZERO; N];
        for i in (k + 1)..N {
            v[i] = a.0[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vv†/v†v) A
        for j in 0..N {
            let s: C64 = (0..N).map(|i| v[i].conj() * a.0[i][j]).sum::<C64>() * (2.0 / vnorm2);
            for i in 0..N {
                a.0[i][j] -= v[i] * s;
            }
        }
        // A ← A (I − 2vv†/v†v)
        for i in 0..N {
            let s: C64 = (0..N).map(|j| a.0[i][j] * v[j]).sum::<C64>() * (2.0 / vnorm2);
            for j in 0..N {
                a.0[i][j] -= s * v[j].conj();
            }
        }
        for i in (k + 2)..N {
            a.0[i][k] = ZERO;
        }
    }
    a
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

const QR_MAX_ITER_PER_EIGENVALUE: usize = 200;

/// Eigenvalues of a general complex matrix by shifted Hessenberg QR with
/// bottom-up deflation. The order of the result is unspecified.
pub fn general_eigenvalues<const N: usize>(m: &Mat<N>) -> Result<[C64; N]> {
    let mut a = hessenberg(m);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut eig = [ZERO; N];
    let mut n = N;
    let mut iter = 0usize;
    let mut total = 0usize;
    while n > 0 {
        if n == 1 {
            eig[0] = a.0[0][0];
            break;
        }
        let sub = a.0[n - 1][n - 2].norm();
        let local = a.0[n - 1][n - 1].norm() + a.0[n - 2][n - 2].norm();
        if sub <= f64::EPSILON * (local + scale) {
            eig[n - 1] = a.0[n - 1][n - 1];
            a.0[n - 1][n - 2] = ZERO;
            n -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > QR_MAX_ITER_PER_EIGENVALUE {
            return Err(Error::Numeric {
                message: format!("QR iteration stalled with {n} eigenvalues unresolved"),
                residual: sub,
            });
        }
        let mut mu = wilkinson_shift(
            a.0[n - 2][n - 2],
            a.0[n - 2][n - 1],
            a.0[n - 1][n - 2],
            a.0[n - 1][n - 1],
        );
        if iter % 11 == 10 {
            // exceptional shift to break cycles
            mu += C64::new(0.75 * sub, 0.25 * sub);
        }
        for i in 0..n {
            a.0[i][i] -= mu;
        }
        let mut rots = Vec::with_capacity(n - 1);
        for k in 0..(n - 1) {
            let x = a.0[k][k];
            let y = a.0[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if r == 0.0 {
                rots.push((ONE, ZERO));
                continue;
            }
            let c = x / r;
            let s = y / r;
            // rows k, k+1 ← [[c̄, s̄], [−s, c]] · rows
            for j in k..N {
                let (u, w) = (a.0[k][j], a.0[k + 1][j]);
                a.0[k][j] = c.conj() * u + s.conj() * w;
                a.0[k + 1][j] = -s * u + c * w;
            }
            a.0[k + 1][k] = ZERO;
            rots.push((c, s));
        }
        for (k, &(c, s)) in rots.iter().enumerate() {
            // columns k, k+1 ← columns · [[c, −s̄], [s, c̄]]
            for i in 0..=(k + 1).min(n - 1) {
                let (u, w) = (a.0[i][k], a.0[i][k + 1]);
                a.0[i][k] = u * c + w * s;
                a.0[i][k + 1] = -u * s.conj() + w * c.conj();
            }
        }
        for i in 0..n {
            a.0[i][i] += mu;
        }
    }
    log::trace!("general eigensolver used {total} QR steps");
    Ok(eig)
}

/// Eigenvalues of a general 4×4 complex matrix.
pub fn general_eigenvalues_4x4(m: &Mat4) -> Result<[C64; 4]> {
    general_eigenvalues(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn random_hermitian(seed: u64) -> Mat4 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m.hermitian_part()
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // 2 − (3/4) log₂ 3, evaluated independently
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), 0.811_278_124_459_132_8, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_entropy(1.0 + 1e-12).unwrap(), 0.0);
        assert!(matches!(binary_entropy(1.1), Err(Error::Domain(_))));
        assert!(matches!(binary_entropy(-0.01), Err(Error::Domain(_))));
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn scalar_matrix_spectrum() {
        let m = Mat4::identity().scale(0.25);
        let s = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(s.0, [0.25; 4]);
        assert_abs_diff_eq!(von_neumann_entropy(&m).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Mat4::identity();
        m.0[0][1] = ONE;
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn entropy_requires_unit_trace() {
        let m = Mat2::identity();
        assert!(matches!(von_neumann_entropy(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn pure_projector_has_zero_entropy() {
        let v = [C64::new(0.5, 0.1), C64::new(0.2, -0.3), C64::new(-0.4, 0.0), C64::new(0.1, 0.6)];
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut p = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                p.0[i][j] = v[i] * v[j].conj() / (n * n);
            }
        }
        assert_abs_diff_eq!(von_neumann_entropy(&p).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eigen_reconstructs_and_sums_to_trace() {
        for seed in 0..50 {
            let m = random_hermitian(seed);
            let e = hermitian_eigen(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) < 1e-12);
            assert!(e.vectors.is_unitary(1e-12));
            assert_abs_diff_eq!(e.values.sum(), m.trace().re, epsilon = 1e-12);
            for w in e.values.0.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn general_matches_hermitian_path() {
        for seed in 100..150 {
            let m = random_hermitian(seed);
            let h = hermitian_eigenvalues(&m).unwrap();
            let mut g: Vec<f64> = general_eigenvalues_4x4(&m)
                .unwrap()
                .iter()
                .map(|z| {
                    assert!(z.im.abs() < 1e-10);
                    z.re
                })
                .collect();
            g.sort_by(|a, b| b.total_cmp(a));
            for (x, y) in g.iter().zip(h.0.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn general_eigenvalues_of_diagonal_and_triangular() {
        let d = Mat4::from_real_diagonal([0.1, -2.0, 3.5, 0.0]);
        let mut g: Vec<f64> = general_eigenvalues_4x4(&d).unwrap().iter().map(|z| z.re).collect();
        g.sort_by(|a, b| a.total_cmp(b));
        assert_eq!(g, vec![-2.0, 0.0, 0.1, 3.5]);

        // non-normal upper triangular with complex diagonal
        let mut t = Mat4::zeros();
        let diag = [C64::new(1.0, 1.0), C64::new(-0.5, 0.0), C64::new(0.0, 2.0), C64::new(3.0, -1.0)];
        for i in 0..4 {
            t.0[i][i] = diag[i];
            for j in (i + 1)..4 {
                t.0[i][j] = C64::new(1.0 + i as f64, j as f64);
            }
        }
        // conjugate by a dense unitary so the solver has real work to do
        let u = {
            let e = hermitian_eigen(&random_hermitian(7)).unwrap();
            e.vectors
        };
        let m = u * t * u.adjoint();
        let eig = general_eigenvalues_4x4(&m).unwrap();
        for z in diag {
            let best = eig.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "missing eigenvalue {z}");
        }
    }

    #[test]
    fn rotation_generator_has_complex_eigenvalues() {
        let mut m = Mat4::zeros();
        m.0[0][1] = C64::new(-1.0, 0.0);
        m.0[1][0] = ONE;
        m.0[2][2] = C64::new(2.0, 0.0);
        m.0[3][3] = C64::new(-3.0, 0.0);
        let eig = general_eigenvalues_4x4(&m).unwrap();
        for z in [I, -I, C64::new(2.0, 0.0), C64::new(-3.0, 0.0)] {
            assert!(eig.iter().any(|w| (w - z).norm() < 1e-12));
        }
    }

    #[test]
    fn kronecker_and_partial_trace() {
        assert_eq!(kronecker(&Mat2::identity(), &Mat2::identity()), Mat4::identity());
        let rho = Mat2::from_real([[0.7, 0.2], [0.2, 0.3]]);
        let sigma = Mat([[C64::new(0.4, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.6, 0.0)]]);
        let k = kronecker(&rho, &sigma);
        assert!(partial_trace(&k, Subsystem::B).max_abs_diff(&rho) < 1e-15);
        assert!(partial_trace(&k, Subsystem::A).max_abs_diff(&sigma) < 1e-15);
        assert!(reduced_state(&k, Subsystem::A).max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn z_projector_lift_is_block_diagonal() {
        let p0 = Mat2::from_real_diagonal([1.0, 0.0]);
        assert_eq!(kronecker(&p0, &Mat2::identity()), Mat4::from_real_diagonal([1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn yy_matrix_is_antidiagonal() {
        // σy ⊗ σy = antidiag(−1, 1, 1, −1)
        let yy = kronecker(&pauli_y(), &pauli_y());
        let mut expected = Mat4::zeros();
        expected.0[0][3] = -ONE;
        expected.0[1][2] = ONE;
        expected.0[2][1] = ONE;
        expected.0[3][0] = -ONE;
        assert!(yy.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn singular_values_of_rank_one() {
        let mut m = Mat4::zeros();
        let u = [0.5, 0.5, 0.5, 0.5];
        let v = [C64::new(0.6, 0.0), ZERO, C64::new(0.0, 0.8), ZERO];
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = v[j].conj() * u[i] * 3.0;
            }
        }
        let sv = singular_values(&m).unwrap();
        assert_abs_diff_eq!(sv[0], 3.0, epsilon = 1e-14);
        for s in &sv[1..] {
            assert!(s.abs() < 1e-15);
        }
    }

    #[test]
    fn singular_values_match_eigen_route_when_well_conditioned() {
        for seed in 200..220 {
            let h = random_hermitian(seed);
            let sv = singular_values(&h).unwrap();
            let mut abs_eig: Vec<f64> = hermitian_eigenvalues(&h).unwrap().0.iter().map(|l| l.abs()).collect();
            abs_eig.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in sv.iter().zip(&abs_eig) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn negative_spectrum_rejected() {
        let m = Mat2::from_real_diagonal([1.2, -0.2]);
        assert!(matches!(von_neumann_entropy(&m), Err(Error::Domain(_))));
        // tiny negative round-off is clamped
        let m = Mat2::from_real_diagonal([1.0 + 1e-13, -1e-13]);
        assert_abs_diff_eq!(von_neumann_entropy(&m).unwrap(), 0.0, epsilon = 1e-12);
    }
}
