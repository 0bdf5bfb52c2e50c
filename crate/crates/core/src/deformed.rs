//! f-deformed coherent states and the quasi-Bell states built from them.
//!
//! Only the deformation function `f(n)` of each oscillator family enters;
//! everything else reduces to truncated Fock-space series.

use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::discord::qd_gwl_class;
use crate::error::{domain, Error, Result};
use crate::linalg::{Mat2, C64};
use crate::states::WMatrix;

/// Truncation ceiling for the undeformed family, which has no validity
/// bound of its own.
pub const HARMONIC_NMAX_CAP: usize = 150;

/// Mixing parameter at which [`select_nmax`] compares successive truncations.
pub const NMAX_PROBE_P: f64 = 0.9;

/// Deformation family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deformation {
    /// `f(n) = 1`.
    Harmonic,
    /// `f(n) = √((√(N²+1) − n)/N)`, trap depth `N`; valid for `n < √(N²+1)`.
    PoschlTeller { depth: u32 },
    /// `f(n) = e^{−κ²} L¹ₙ(κ²) / ((n+1) L⁰ₙ(κ²))`; valid for `κ²(2n+1) < 1`.
    Exciton { kappa: f64 },
    /// `f(n) = √(1 + (1−n)/(2N))`, `N` bound states; valid for `n < √(2N+1)`,
    /// or up to `n < 2N+1` (positivity of `f²`) when `relaxed`.
    Morse { bound_states: u32, relaxed: bool },
}

/// Family name without parameters, as spelled on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Harmonic,
    PoschlTeller,
    Exciton,
    Morse,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "harmonic" | "coherent" => Ok(Family::Harmonic),
            "poschl-teller" | "pöschl-teller" | "pt" => Ok(Family::PoschlTeller),
            "exciton" => Ok(Family::Exciton),
            "morse" => Ok(Family::Morse),
            other => Err(Error::Parse(format!("unknown deformation family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Harmonic => "harmonic",
            Family::PoschlTeller => "poschl-teller",
            Family::Exciton => "exciton",
            Family::Morse => "morse",
        })
    }
}

/// Associated Laguerre polynomial `Lₙᵏ(x)` by upward recurrence.
pub fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

impl Deformation {
    pub fn family(&self) -> Family {
        match self {
            Deformation::Harmonic => Family::Harmonic,
            Deformation::PoschlTeller { .. } => Family::PoschlTeller,
            Deformation::Exciton { .. } => Family::Exciton,
            Deformation::Morse { .. } => Family::Morse,
        }
    }

    /// Check the family parameters themselves.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Deformation::PoschlTeller { depth: 0 } | Deformation::Morse { bound_states: 0, .. } => {
                Err(domain("deformation parameter N must be a positive integer"))
            }
            Deformation::Exciton { kappa } if !(kappa.is_finite() && kappa > 0.0 && kappa < 1.0) => {
                Err(domain(format!("exciton κ must lie in (0, 1), got {kappa}")))
            }
            _ => Ok(()),
        }
    }

    /// Whether level `n` satisfies the family validity bound.
    pub fn is_valid_level(&self, n: usize) -> bool {
        let x = n as f64;
        match *self {
            Deformation::Harmonic => true,
            Deformation::PoschlTeller { depth } => {
                let nn = depth as f64;
                x < (nn * nn + 1.0).sqrt()
            }
            Deformation::Exciton { kappa } => kappa * kappa * (2.0 * x + 1.0) < 1.0,
            Deformation::Morse { bound_states, relaxed } => {
                let nn = bound_states as f64;
                if relaxed {
                    x < 2.0 * nn + 1.0
                } else {
                    x < (2.0 * nn + 1.0).sqrt()
                }
            }
        }
    }

    /// Largest valid level, or `None` for an unbounded family.
    pub fn max_level(&self) -> Option<usize> {
        if matches!(self, Deformation::Harmonic) {
            return None;
        }
        let mut n = 0;
        while self.is_valid_level(n + 1) {
            n += 1;
        }
        Some(n)
    }

    /// `f²(n)` from the family formula, without the validity check.
    pub fn f_squared_raw(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            Deformation::Harmonic => 1.0,
            Deformation::PoschlTeller { depth } => {
                let nn = depth as f64;
                ((nn * nn + 1.0).sqrt() - x) / nn
            }
            Deformation::Exciton { kappa } => {
                let k2 = kappa * kappa;
                let f = (-k2).exp() * laguerre(n, 1.0, k2) / ((x + 1.0) * laguerre(n, 0.0, k2));
                f * f
            }
            Deformation::Morse { bound_states, .. } => 1.0 + (1.0 - x) / (2.0 * bound_states as f64),
        }
    }

    /// `f(n)` from the family formula, without the validity check.
    pub fn value_raw(&self, n: usize) -> f64 {
        match *self {
            Deformation::Exciton { kappa } => {
                let k2 = kappa * kappa;
                (-k2).exp() * laguerre(n, 1.0, k2) / ((n as f64 + 1.0) * laguerre(n, 0.0, k2))
            }
            _ => self.f_squared_raw(n).sqrt(),
        }
    }

    /// `f(n)`; levels outside the validity bound are a domain error.
    pub fn value(&self, n: usize) -> Result<f64> {
        self.validate()?;
        if !self.is_valid_level(n) {
            return Err(domain(format!("level {n} outside the validity range of {}", self.family())));
        }
        let f = self.value_raw(n);
        if !(f.is_finite() && f > 0.0) {
            return Err(domain(format!("deformation value f({n}) = {f} is not positive")));
        }
        Ok(f)
    }

    /// `f(n)! = f(0) f(1) ⋯ f(n)`.
    pub fn factorial(&self, n: usize) -> Result<f64> {
        (0..=n).try_fold(1.0, |acc, k| Ok(acc * self.value(k)?))
    }
}

/// `f(n)!` for the given deformation.
pub fn deformed_factorial(def: &Deformation, n: usize) -> Result<f64> {
    def.factorial(n)
}

pub fn deformation_value(def: &Deformation, n: usize) -> Result<f64> {
    def.value(n)
}

/// A deformation together with a Fock-space truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationSpec {
    pub deformation: Deformation,
    pub n_max: usize,
}

impl DeformationSpec {
    pub fn new(deformation: Deformation, n_max: usize) -> Result<Self> {
        deformation.validate()?;
        if !deformation.is_valid_level(n_max) {
            return Err(domain(format!(
                "n_max = {n_max} violates the {} validity bound (largest allowed {:?})",
                deformation.family(),
                deformation.max_level()
            )));
        }
        Ok(DeformationSpec { deformation, n_max })
    }

    pub fn harmonic(n_max: usize) -> Self {
        DeformationSpec { deformation: Deformation::Harmonic, n_max }
    }
}

/// Which construction of the deformed coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Eigenstate of the deformed annihilation operator.
    A,
    /// Approximate deformed displacement of the vacuum.
    D,
    /// Undeformed Glauber state, truncated the same way.
    Coherent,
}

impl Kind {
    /// Power of `f(n)!` in the squared Fock weights.
    pub fn exponent(self) -> i32 {
        match self {
            Kind::A => -2,
            Kind::D => 2,
            Kind::Coherent => 0,
        }
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Kind::A),
            "D" | "d" => Ok(Kind::D),
            "C" | "c" | "coherent" => Ok(Kind::Coherent),
            other => Err(Error::Parse(format!("unknown coherent-state kind `{other}`"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::A => "A",
            Kind::D => "D",
            Kind::Coherent => "C",
        })
    }
}

/// Normalized, truncated Fock expansion of a deformed coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedKet {
    pub coefficients: Vec<C64>,
    pub alpha: C64,
    pub kind: Kind,
    /// `|c_{n_max}|²`, a proxy for the mass lost to truncation.
    pub last_term_weight: f64,
}

impl DeformedKet {
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨α|−α⟩ = Σ (−1)ⁿ |cₙ|²`.
    pub fn parity_overlap(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
            .sum()
    }
}

/// `(f(n)!)^{e/2}` for `n = 0..=n_max`.
fn factorial_powers(spec: &DeformationSpec, exponent: i32) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(spec.n_max + 1);
    let mut acc = 1.0;
    for n in 0..=spec.n_max {
        if exponent != 0 {
            acc *= spec.deformation.value(n)?.powf(exponent as f64 / 2.0);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Fock coefficients `cₙ ∝ αⁿ/√n! · (f(n)!)^{∓1}` (A: −, D: +, coherent: 0),
/// normalized over `0..=n_max`.
pub fn coherent_coefficients(spec: &DeformationSpec, alpha: C64, kind: Kind) -> Result<DeformedKet> {
    if alpha.norm() == 0.0 {
        return Err(domain("coherent amplitude must be non-zero"));
    }
    let powers = factorial_powers(spec, kind.exponent())?;
    let mut coeffs = Vec::with_capacity(spec.n_max + 1);
    let mut t = C64::new(1.0, 0.0);
    for (n, fp) in powers.iter().enumerate() {
        if n > 0 {
            t *= alpha / (n as f64).sqrt();
        }
        coeffs.push(t * *fp);
    }
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(domain("coherent-state series has no finite non-zero norm"));
    }
    for c in coeffs.iter_mut() {
        *c /= norm;
    }
    let last_term_weight = coeffs.last().map_or(0.0, |c| c.norm_sqr());
    Ok(DeformedKet { coefficients: coeffs, alpha, kind, last_term_weight })
}

/// `⟨α|−α⟩ = Σ(−1)ⁿ wₙ / Σ wₙ` with `wₙ = |α|²ⁿ/n! · (f(n)!)^{e}`.
pub fn overlap(spec: &DeformationSpec, alpha: f64, kind: Kind) -> Result<f64> {
    let a2 = alpha * alpha;
    let e = kind.exponent() as f64;
    let mut w = 1.0;
    let (mut num, mut den) = (0.0, 0.0);
    for n in 0..=spec.n_max {
        let f = if e != 0.0 { spec.deformation.value(n)? } else { 1.0 };
        if n > 0 {
            w *= a2 / n as f64;
        }
        w *= f.powf(e);
        if !w.is_finite() {
            return Err(Error::Numeric { message: format!("overlap series term {n} is not finite"), residual: w });
        }
        num += if n % 2 == 0 { w } else { -w };
        den += w;
    }
    let s = num / den;
    if !s.is_finite() {
        return Err(Error::Numeric { message: "overlap series is not finite".into(), residual: s });
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" | "even" => Ok(Sign::Plus),
            "minus" | "-" | "odd" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("unknown quasi-Bell sign `{other}`"))),
        }
    }
}

/// Even (`Plus`) or odd (`Minus`) quasi-Bell state of two deformed coherent
/// states with amplitude `±α`. Only `|α|` enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiBellSpec {
    pub spec: DeformationSpec,
    pub alpha: f64,
    pub kind: Kind,
    pub sign: Sign,
}

impl QuasiBellSpec {
    pub fn new(spec: DeformationSpec, alpha: f64, kind: Kind, sign: Sign) -> Self {
        QuasiBellSpec { spec, alpha: alpha.abs(), kind, sign }
    }

    pub fn overlap(&self) -> Result<f64> {
        overlap(&self.spec, self.alpha, self.kind)
    }
}

fn checked_overlap(qb: &QuasiBellSpec) -> Result<f64> {
    let s = qb.overlap()?;
    if s.abs() >= 1.0 {
        return Err(domain(format!("overlap {s} leaves no orthogonal complement")));
    }
    Ok(s)
}

/// Diagonal W-matrix `n·diag(1 + s, ±(1 − s))`, `n = [2(1 + s²)]^{−1/2}`.
pub fn quasi_bell_wmatrix(qb: &QuasiBellSpec) -> Result<WMatrix> {
    wmatrix_from_overlap(checked_overlap(qb)?, qb.sign)
}

/// Quasi-Bell W-matrix for a given overlap `s ∈ (−1, 1)`.
pub fn wmatrix_from_overlap(s: f64, sign: Sign) -> Result<WMatrix> {
    if !(s.abs() < 1.0) {
        return Err(domain(format!("overlap {s} outside (−1, 1)")));
    }
    let nx = 1.0 / (2.0 * (1.0 + s * s)).sqrt();
    let sign = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    WMatrix::new(Mat2::from_real_diagonal([nx * (1.0 + s), sign * nx * (1.0 - s)]))
}

/// `C = (1 − s²)/(1 + s²)`.
pub fn concurrence_quasi_bell(qb: &QuasiBellSpec) -> Result<f64> {
    let s = checked_overlap(qb)?;
    Ok((1.0 - s * s) / (1.0 + s * s))
}

/// Largest violation over `n ≤ n_max` of the near-unitarity condition of the
/// deformed displacement operator. Uses `f(n_max + 1)` without a validity
/// check since the condition itself involves it.
pub fn displacement_validity(def: &Deformation, alpha: f64, n_max: usize) -> f64 {
    let a2 = alpha * alpha;
    (0..=n_max)
        .map(|n| {
            let x = n as f64;
            let phi = (x + 1.0) * def.f_squared_raw(n + 1) - x * def.f_squared_raw(n) - 1.0;
            0.5 * a2 * phi.abs()
        })
        .fold(0.0, f64::max)
}

/// `Eₙ/ħΩ = ½[(n+1) f²(n+1) + n f²(n)]`.
pub fn energy_level(def: &Deformation, n: usize) -> Result<f64> {
    let f1 = def.value(n + 1)?;
    let f0 = def.value(n)?;
    let x = n as f64;
    Ok(0.5 * ((x + 1.0) * f1 * f1 + x * f0 * f0))
}

fn probe_discord(def: &Deformation, alpha: f64, kind: Kind, n_max: usize) -> Result<f64> {
    let qb = QuasiBellSpec::new(DeformationSpec { deformation: *def, n_max }, alpha, kind, Sign::Plus);
    Ok(qd_gwl_class(concurrence_quasi_bell(&qb)?, NMAX_PROBE_P)?.discord)
}

/// Smallest truncation `n` whose discord at `p = 0.9` differs from that at
/// `n + 1` by less than `tol`. The search stops at the last `n` for which
/// `n + 1` is still a valid level; that cap is returned, with a warning, if
/// the discord never settles.
pub fn select_nmax(def: &Deformation, alpha: f64, kind: Kind, tol: f64) -> Result<usize> {
    def.validate()?;
    let cap = match def.max_level() {
        Some(m) => m.saturating_sub(1),
        None => HARMONIC_NMAX_CAP,
    };
    if cap < 1 {
        return Err(domain(format!("{} validity bound leaves no room for n_max ≥ 1", def.family())));
    }
    let mut prev = probe_discord(def, alpha, kind, 1)?;
    for n in 1..=cap {
        let next = probe_discord(def, alpha, kind, n + 1)?;
        if (next - prev).abs() < tol {
            return Ok(n);
        }
        prev = next;
    }
    warn!(
        "discord did not settle to {tol:e} before the {} cap n_max = {cap}; using the cap",
        def.family()
    );
    Ok(cap)
}
