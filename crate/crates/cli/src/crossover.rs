//! Threshold finders: where EoF and discord cross, and where the discord
//! ordering of the coherent-state kinds switches.

use std::fmt;

use wernerlike::deformed::{concurrence_quasi_bell, Deformation, DeformationSpec, Kind, QuasiBellSpec, Sign};
use wernerlike::discord::{qd_gwl_class, qd_werner};
use wernerlike::entanglement::{eof_gwl, eof_werner};
use wernerlike::{Error, Result};

use crate::state::PRange;

/// Bisection stops once the bracket is narrower than this.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_BISECTIONS: usize = 200;

/// Root of `f` in `[lo, hi]` by bisection. Requires a sign change.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let neg_low = fa < 0.0;
    for _ in 0..MAX_BISECTIONS {
        if b - a < tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_low {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Deformed quasi-Bell family with everything but `|α|` fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedFamily {
    pub deformation: Deformation,
    pub n_max: usize,
    pub kind: Kind,
}

impl DeformedFamily {
    pub fn new(deformation: Deformation, n_max: usize, kind: Kind) -> Result<Self> {
        DeformationSpec::new(deformation, n_max)?;
        Ok(DeformedFamily { deformation, n_max, kind })
    }

    fn with_kind(&self, kind: Kind) -> Self {
        DeformedFamily { kind, ..*self }
    }

    /// Concurrence of the quasi-Bell state at amplitude `alpha`.
    pub fn concurrence(&self, alpha: f64) -> Result<f64> {
        let spec = DeformationSpec { deformation: self.deformation, n_max: self.n_max };
        concurrence_quasi_bell(&QuasiBellSpec::new(spec, alpha, self.kind, Sign::Plus))
    }

    pub fn discord(&self, alpha: f64, p: f64) -> Result<f64> {
        Ok(qd_gwl_class(self.concurrence(alpha)?, p)?.discord)
    }

    pub fn eof_minus_qd(&self, alpha: f64, p: f64) -> Result<f64> {
        let c = self.concurrence(alpha)?;
        Ok(eof_gwl(c, p)? - qd_gwl_class(c, p)?.discord)
    }
}

/// Default p-grid for the max-over-p functionals: the interior of `[0, 1]`.
/// `p = 1` is left out because EoF and discord coincide on pure states.
pub fn default_p_grid() -> PRange {
    PRange { start: 0.01, stop: 0.99, step: 0.01 }
}

fn max_over<F: Fn(f64) -> Result<f64>>(grid: &PRange, f: F) -> Result<f64> {
    grid.points().into_iter().try_fold(f64::NEG_INFINITY, |m, p| Ok(m.max(f(p)?)))
}

/// `g(|α|) = max_p (EoF − QD)` over `grid`.
pub fn eof_qd_gap(fam: &DeformedFamily, alpha: f64, grid: &PRange) -> Result<f64> {
    max_over(grid, |p| fam.eof_minus_qd(alpha, p))
}

/// `h(|α|) = max_p (δ_C − δ_A)` over `grid`, with `fam.kind` ignored.
pub fn ordering_gap(fam: &DeformedFamily, alpha: f64, grid: &PRange) -> Result<f64> {
    let (c, a) = (fam.with_kind(Kind::Coherent), fam.with_kind(Kind::A));
    let (cc, ca) = (c.concurrence(alpha)?, a.concurrence(alpha)?);
    max_over(grid, |p| Ok(qd_gwl_class(cc, p)?.discord - qd_gwl_class(ca, p)?.discord))
}

/// `|α|` at which `max_p (EoF − QD)` changes sign.
pub fn eof_qd_crossover_max_over_p(fam: &DeformedFamily, lo: f64, hi: f64, grid: &PRange, tol: f64) -> Result<f64> {
    bisect(|a| eof_qd_gap(fam, a, grid), lo, hi, tol)
}

/// `p` at which EoF and discord cross for fixed `|α|`.
pub fn eof_qd_crossover_p(fam: &DeformedFamily, alpha: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bisect(|p| fam.eof_minus_qd(alpha, p), lo, hi, tol)
}

/// `|α|` beyond which the undeformed state carries more discord than the
/// A-kind state somewhere on the grid.
pub fn ordering_switch(fam: &DeformedFamily, lo: f64, hi: f64, grid: &PRange, tol: f64) -> Result<f64> {
    bisect(|a| ordering_gap(fam, a, grid), lo, hi, tol)
}

/// `p` at which the Werner EoF and discord cross.
pub fn werner_crossing(lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bisect(|p| Ok(eof_werner(p)? - qd_werner(p)?), lo, hi, tol)
}

/// Which scalar reduction of the EoF–discord comparison to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// Root in `|α|` of `max_p (EoF − QD)`.
    MaxOverP,
    /// Root in `p` of `EoF − QD` at fixed `|α|`.
    PCrossing,
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functional::MaxOverP => "max-over-p",
            Functional::PCrossing => "p-crossing",
        })
    }
}
