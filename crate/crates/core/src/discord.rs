//! Quantum discord: closed forms for Werner and GWL states, Lüders-rule
//! measurement updates, and a brute-force minimization over rank-1
//! projective measurements used as an independent oracle.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::linalg::{
    h2, kronecker, pauli_x, pauli_y, pauli_z, tolerance, von_neumann_entropy, xlog2y, Mat2, Mat4,
    Subsystem, C64,
};
use crate::states::{check_gwl_p, check_werner_p, TwoQubitDensity, WMatrix};

/// Measurement axis `n̂ = (sin 2θ cos φ, sin 2θ sin φ, cos 2θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementDirection { theta, phi }
    }

    pub fn bloch(&self) -> [f64; 3] {
        let (s2, c2) = (2.0 * self.theta).sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [s2 * cp, s2 * sp, c2]
    }

    /// `Πₘ = ½[𝟙 + (−1)ᵐ n̂·σ]`, `m ∈ {0, 1}`.
    pub fn projector(&self, m: usize) -> Mat2 {
        let [x, y, z] = self.bloch();
        let sign = if m == 0 { 0.5 } else { -0.5 };
        Mat2::identity().scale(0.5)
            + (pauli_x().scale(x) + pauli_y().scale(y) + pauli_z().scale(z)).scale(sign)
    }

    /// `Πₘ ⊗ 𝟙` or `𝟙 ⊗ Πₘ` depending on the measured side.
    pub fn lifted_projector(&self, m: usize, measured: Subsystem) -> Mat4 {
        let p = self.projector(m);
        match measured {
            Subsystem::A => kronecker(&p, &Mat2::identity()),
            Subsystem::B => kronecker(&Mat2::identity(), &p),
        }
    }
}

/// One outcome of a projective measurement on one side of the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostMeasurement {
    pub probability: f64,
    /// Normalized state of the unmeasured side; `None` for an empty branch.
    pub conditional_state: Option<Mat2>,
    /// Difference of the conditional-state eigenvalues, i.e. the mixing
    /// parameter `x` of `(1−x)/2·𝟙 + x|ψ̂⟩⟨ψ̂|`.
    pub mixing_x: Option<f64>,
}

impl PostMeasurement {
    pub fn is_empty(&self) -> bool {
        self.conditional_state.is_none()
    }
}

/// Unnormalized conditional state `tr_meas[(Π ⊗ 𝟙) ρ]` on the other side.
fn conditional_block(rho: &Mat4, pi: &Mat2, measured: Subsystem) -> Mat2 {
    let mut m = Mat2::zeros();
    for b in 0..2 {
        for d in 0..2 {
            let mut s = C64::new(0.0, 0.0);
            for a in 0..2 {
                for a2 in 0..2 {
                    s += match measured {
                        Subsystem::A => pi.0[a][a2] * rho.0[2 * a2 + b][2 * a + d],
                        Subsystem::B => pi.0[a][a2] * rho.0[2 * b + a2][2 * d + a],
                    };
                }
            }
            m.0[b][d] = s;
        }
    }
    m
}

/// Trace and Bloch length of a 2×2 Hermitian block.
fn trace_and_bloch(m: &Mat2) -> (f64, f64) {
    let t = m.0[0][0].re + m.0[1][1].re;
    let dz = m.0[0][0].re - m.0[1][1].re;
    let r = (dz * dz + 4.0 * m.0[0][1].norm_sqr()).sqrt();
    (t, if t > 0.0 { (r / t).min(1.0) } else { 0.0 })
}

/// Lüders update `Πₘρ Πₘ / pₘ`, reduced to the unmeasured side.
pub fn luders_update(
    rho: &TwoQubitDensity,
    dir: &MeasurementDirection,
    m: usize,
    measured: Subsystem,
) -> PostMeasurement {
    let block = conditional_block(rho.matrix(), &dir.projector(m), measured);
    let (prob, x) = trace_and_bloch(&block);
    if prob <= tolerance() {
        return PostMeasurement { probability: prob.max(0.0), conditional_state: None, mixing_x: None };
    }
    PostMeasurement {
        probability: prob,
        conditional_state: Some(block.hermitian_part().scale(1.0 / prob)),
        mixing_x: Some(x),
    }
}

/// `Σₘ pₘ S(ρ_{other|m})` for one measurement axis. Empty branches add 0.
pub fn conditional_entropy(rho: &Mat4, dir: &MeasurementDirection, measured: Subsystem) -> f64 {
    (0..2)
        .map(|m| {
            let block = conditional_block(rho, &dir.projector(m), measured);
            let (t, r) = trace_and_bloch(&block);
            if t <= 0.0 {
                0.0
            } else {
                t * h2((1.0 + r) / 2.0)
            }
        })
        .sum()
}

/// Post-measurement mixing parameter `x = p⟨Π⟩ / ((1−p)/2 + p⟨Π⟩)`.
pub fn mixing_after_measurement(p: f64, prob_pi: f64) -> Result<f64> {
    let tol = tolerance();
    if !(prob_pi >= -tol && prob_pi <= 1.0 + tol) {
        return Err(domain(format!("probability {prob_pi} outside [0, 1]")));
    }
    check_gwl_p(p)?;
    let den = (1.0 - p) / 2.0 + p * prob_pi;
    if den <= tol {
        return Err(Error::Degenerate(format!("empty branch: denominator {den:.3e}")));
    }
    Ok(p * prob_pi / den)
}

/// Half the Bloch-vector length of the reduced state on `side`; the swing of
/// `⟨Πₘ⟩ψ` around ½ as the axis moves.
pub fn amplitude(psi: &WMatrix, side: Subsystem) -> f64 {
    let r = psi.reduced(side);
    let sx = 2.0 * r.0[0][1].re;
    let sy = -2.0 * r.0[0][1].im;
    let sz = r.0[0][0].re - r.0[1][1].re;
    (0.5 * (sx * sx + sy * sy + sz * sz).sqrt()).min(0.5)
}

/// `F_p(x) = (1−p)/(2(1−x))·H₂((1+x)/2)`, `x < 1`.
pub fn f_p(p: f64, x: f64) -> Result<f64> {
    if !(x < 1.0) || x < -1.0 {
        return Err(domain(format!("F_p needs x in [−1, 1), got {x}")));
    }
    Ok((1.0 - p) / (2.0 * (1.0 - x)) * h2((1.0 + x) / 2.0))
}

/// `2 − ((1−3p)/4)log₂(1−3p) − (3(1+p)/4)log₂(1+p)`.
pub fn entropy_werner(p: f64) -> Result<f64> {
    check_werner_p(p)?;
    let a = (1.0 - 3.0 * p).max(0.0);
    let b = (1.0 + p).max(0.0);
    Ok(2.0 - xlog2y(a / 4.0, a) - xlog2y(3.0 * b / 4.0, b))
}

/// `2 − (3(1−p)/4)log₂(1−p) − ((1+3p)/4)log₂(1+3p)`; independent of ψ.
pub fn entropy_gwl(p: f64) -> Result<f64> {
    check_gwl_p(p)?;
    let a = (1.0 - p).max(0.0);
    let b = (1.0 + 3.0 * p).max(0.0);
    Ok(2.0 - xlog2y(3.0 * a / 4.0, a) - xlog2y(b / 4.0, b))
}

fn check_concurrence(c: f64) -> Result<f64> {
    let tol = tolerance();
    if !(c >= -tol && c <= 1.0 + tol) {
        return Err(domain(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(c.clamp(0.0, 1.0))
}

/// Entropy of either reduced state of a GWL: `H₂((1 + pΔ₀)/2)`.
pub fn reduced_entropy_gwl(c: f64, p: f64) -> Result<f64> {
    let c = check_concurrence(c)?;
    check_gwl_p(p)?;
    let d0 = (1.0 - c * c).sqrt();
    Ok(h2((1.0 + p * d0) / 2.0))
}

/// Minimal conditional entropy of a GWL given the measured-side amplitude
/// `a`, with the optimal mixings `(x̄₀, x̄₁)`.
///
/// Written as `½(1 ∓ 2pA)·H₂((1 + x̄)/2)` so that no `0/0` appears when a
/// branch weight vanishes.
pub fn conditional_entropy_gwl_from_amplitude(a: f64, p: f64) -> Result<(f64, f64, f64)> {
    check_gwl_p(p)?;
    if !(-tolerance()..=0.5 + tolerance()).contains(&a) {
        return Err(domain(format!("amplitude {a} outside [0, 1/2]")));
    }
    let a = a.clamp(0.0, 0.5);
    let w0 = 1.0 - 2.0 * p * a;
    let w1 = 1.0 + 2.0 * p * a;
    let x0 = if w0 > 0.0 { p * (1.0 - 2.0 * a) / w0 } else { 0.0 };
    let x1 = if w1 > 0.0 { p * (1.0 + 2.0 * a) / w1 } else { 0.0 };
    let branch = |w: f64, x: f64| if w > 0.0 { 0.5 * w * h2((1.0 + x) / 2.0) } else { 0.0 };
    Ok((branch(w0, x0) + branch(w1, x1), x0, x1))
}

/// Minimal conditional entropy after measuring side A of `ρ_GWL(ψ, p)`.
pub fn conditional_entropy_gwl_analytic(psi: &WMatrix, p: f64) -> Result<(f64, f64, f64)> {
    conditional_entropy_gwl_from_amplitude(amplitude(psi, Subsystem::A), p)
}

/// `H₂((1+p)/2) − 1 + ((1−3p)/4)log₂(1−3p) + (3(1+p)/4)log₂(1+p)`.
pub fn qd_werner(p: f64) -> Result<f64> {
    let s = entropy_werner(p)?;
    Ok(1.0 - s + h2((1.0 + p) / 2.0))
}

/// Term-by-term view of the GWL discord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordBreakdown {
    pub total_entropy: f64,
    pub reduced_entropy_a: f64,
    pub reduced_entropy_b: f64,
    /// Minimal conditional entropy after measuring A.
    pub conditional_entropy: f64,
    pub mutual_information: f64,
    /// Discord with the measurement on A.
    pub discord: f64,
    /// Discord with the measurement on B.
    pub discord_reverse: f64,
    pub x0: f64,
    pub x1: f64,
    pub amplitude: f64,
}

impl DiscordBreakdown {
    /// Difference between the two one-sided discords.
    pub fn balance(&self) -> f64 {
        self.discord - self.discord_reverse
    }

    pub fn classical_correlation(&self) -> f64 {
        self.mutual_information - self.discord
    }
}

fn breakdown(p: f64, delta0: f64, amp_a: f64, amp_b: f64) -> Result<DiscordBreakdown> {
    let total = entropy_gwl(p)?;
    let reduced = h2((1.0 + p * delta0) / 2.0);
    let (cond_a, x0, x1) = conditional_entropy_gwl_from_amplitude(amp_a, p)?;
    let (cond_b, _, _) = conditional_entropy_gwl_from_amplitude(amp_b, p)?;
    Ok(DiscordBreakdown {
        total_entropy: total,
        reduced_entropy_a: reduced,
        reduced_entropy_b: reduced,
        conditional_entropy: cond_a,
        mutual_information: 2.0 * reduced - total,
        discord: reduced - total + cond_a,
        discord_reverse: reduced - total + cond_b,
        x0,
        x1,
        amplitude: amp_a,
    })
}

/// Closed-form discord of `ρ_GWL(ψ, p)`.
pub fn qd_gwl_analytic(psi: &WMatrix, p: f64) -> Result<DiscordBreakdown> {
    check_gwl_p(p)?;
    breakdown(p, psi.delta0(), amplitude(psi, Subsystem::A), amplitude(psi, Subsystem::B))
}

/// Closed-form GWL discord from the pure-state concurrence alone.
pub fn qd_gwl_class(c: f64, p: f64) -> Result<DiscordBreakdown> {
    let c = check_concurrence(c)?;
    check_gwl_p(p)?;
    let d0 = (1.0 - c * c).sqrt();
    breakdown(p, d0, d0 / 2.0, d0 / 2.0)
}

/// Settings for the brute-force measurement minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Grid points in `θ ∈ [0, π/2]`.
    pub grid_theta: usize,
    /// Grid points in `φ ∈ [0, 2π)`.
    pub grid_phi: usize,
    /// Best grid cells that seed a local refinement.
    pub starts: usize,
    pub max_sweeps: usize,
    /// Refinement stops once the search bracket is below this (radians).
    pub step_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { grid_theta: 64, grid_phi: 128, starts: 3, max_sweeps: 64, step_tol: 1e-9 }
    }
}

impl OracleConfig {
    /// `n × 2n` grid with default refinement.
    pub fn with_grid(n: usize) -> Self {
        OracleConfig { grid_theta: n, grid_phi: 2 * n, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_theta < 8 || self.grid_phi < 8 {
            return Err(domain("oracle grid needs at least 8 points per axis"));
        }
        if self.starts == 0 || !(self.step_tol > 0.0) {
            return Err(domain("oracle needs at least one start and a positive step tolerance"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub discord: f64,
    pub conditional_entropy: f64,
    pub direction: MeasurementDirection,
    pub sweeps: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimum of `f` on `[lo, hi]`, shrunk to width `tol`.
fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coordinate-wise refinement from a grid point. The bracket half-widths
/// start at one grid spacing and halve every sweep.
fn refine(
    obj: &impl Fn(f64, f64) -> f64,
    start: (f64, f64, f64),
    spacing: (f64, f64),
    cfg: &OracleConfig,
) -> std::result::Result<(f64, f64, f64, usize), f64> {
    let (mut th, mut ph, mut best) = start;
    let (mut ht, mut hp) = spacing;
    for sweep in 1..=cfg.max_sweeps {
        let (t, v) = golden_section(&|t| obj(t, ph), th - ht, th + ht, ht * 1e-3);
        if v < best {
            th = t;
            best = v;
        }
        let (q, v) = golden_section(&|q| obj(th, q), ph - hp, ph + hp, hp * 1e-3);
        if v < best {
            ph = q;
            best = v;
        }
        ht *= 0.5;
        hp *= 0.5;
        if ht.max(hp) < cfg.step_tol {
            return Ok((th, ph, best, sweep));
        }
    }
    Err(best)
}

/// Smallest conditional entropy over rank-1 projective measurements on
/// `measured`, found by grid search plus local refinement.
pub fn minimize_conditional_entropy(
    rho: &Mat4,
    measured: Subsystem,
    cfg: &OracleConfig,
) -> Result<(f64, MeasurementDirection, usize)> {
    cfg.validate()?;
    let obj = |t: f64, q: f64| conditional_entropy(rho, &MeasurementDirection::new(t, q), measured);
    let dt = FRAC_PI_2 / (cfg.grid_theta - 1) as f64;
    let dp = TAU / cfg.grid_phi as f64;
    let cell = |k: usize| ((k / cfg.grid_phi) as f64 * dt, (k % cfg.grid_phi) as f64 * dp);

    let mut values: Vec<(f64, usize)> = (0..cfg.grid_theta * cfg.grid_phi)
        .into_par_iter()
        .map(|k| {
            let (t, q) = cell(k);
            (obj(t, q), k)
        })
        .collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut best: Option<(f64, MeasurementDirection, usize)> = None;
    let mut failure: Option<f64> = None;
    for &(v, k) in values.iter().take(cfg.starts) {
        let (t, q) = cell(k);
        match refine(&obj, (t, q, v), (dt, dp), cfg) {
            Ok((t, q, v, sweeps)) => {
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, MeasurementDirection::new(t, q), sweeps));
                }
            }
            Err(v) => failure = Some(failure.map_or(v, |f: f64| f.min(v))),
        }
    }
    match (best, failure) {
        (Some(b), None) => Ok(b),
        (b, Some(f)) => Err(Error::NotConverged {
            iterations: cfg.max_sweeps,
            best: b.map_or(f, |b| b.0.min(f)),
        }),
        (None, None) => unreachable!("at least one start is refined"),
    }
}

/// Discord by brute-force minimization: `S(ρ_meas) − S(ρ) + min Σ pₘ S(ρ|ₘ)`.
pub fn qd_numeric(
    rho: &TwoQubitDensity,
    measured: Subsystem,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    let s_total = von_neumann_entropy(rho.matrix())?;
    let s_meas = von_neumann_entropy(&rho.reduced(measured))?;
    let (cond, direction, sweeps) = minimize_conditional_entropy(rho.matrix(), measured, cfg)?;
    Ok(OracleResult { discord: s_meas - s_total + cond, conditional_entropy: cond, direction, sweeps })
}
