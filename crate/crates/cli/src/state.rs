//! State families and p-grids as the command line describes them.

use std::fmt;
use std::path::Path;

use wernerlike::deformed::{
    quasi_bell_wmatrix, select_nmax, Deformation, DeformationSpec, Family, Kind, QuasiBellSpec, Sign,
};
use wernerlike::entanglement::concurrence_pure;
use wernerlike::states::{
    examples, gwl, werner, GWL_P_MAX, GWL_P_MIN, WERNER_P_MAX, WERNER_P_MIN,
};
use wernerlike::{TwoQubitDensity, WMatrix};

use crate::error::{CliError, Result};

/// Truncation tolerance used when `--nmax` is not given.
pub const NMAX_TOL: f64 = 1e-10;

/// Grid points are rounded to this many decimals to remove accumulation noise.
const GRID_DECIMALS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Werner,
    Gwl,
    Deformed,
}

impl std::str::FromStr for StateKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(StateKind::Werner),
            "gwl" => Ok(StateKind::Gwl),
            "deformed" => Ok(StateKind::Deformed),
            other => Err(CliError::usage(format!("unknown state kind `{other}`"))),
        }
    }
}

/// A one-parameter family `p ↦ ρ(p)`.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Werner,
    Gwl { psi: WMatrix },
    /// GWL built on the quasi-Bell state of two deformed coherent states.
    Deformed { qb: QuasiBellSpec, psi: WMatrix },
}

impl StateSpec {
    pub fn gwl(psi: WMatrix) -> Self {
        StateSpec::Gwl { psi }
    }

    pub fn deformed(qb: QuasiBellSpec) -> Result<Self> {
        let psi = quasi_bell_wmatrix(&qb)?;
        Ok(StateSpec::Deformed { qb, psi })
    }

    /// Pure state on which the GWL family is built; `None` for Werner.
    pub fn psi(&self) -> Option<&WMatrix> {
        match self {
            StateSpec::Werner => None,
            StateSpec::Gwl { psi } | StateSpec::Deformed { psi, .. } => Some(psi),
        }
    }

    pub fn p_range(&self) -> (f64, f64) {
        match self {
            StateSpec::Werner => (WERNER_P_MIN, WERNER_P_MAX),
            _ => (GWL_P_MIN, GWL_P_MAX),
        }
    }

    pub fn density(&self, p: f64) -> Result<TwoQubitDensity> {
        Ok(match self.psi() {
            None => werner(p)?,
            Some(psi) => gwl(psi, p)?,
        })
    }

    /// Concurrence of the underlying pure state.
    pub fn pure_concurrence(&self) -> Option<f64> {
        self.psi().map(concurrence_pure)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Werner => write!(f, "werner"),
            StateSpec::Gwl { psi } => write!(f, "gwl psi=[{psi}]"),
            StateSpec::Deformed { qb, .. } => write!(
                f,
                "deformed family={} kind={} alpha={} n_max={} sign={:?}",
                qb.spec.deformation.family(),
                qb.kind,
                qb.alpha,
                qb.spec.n_max,
                qb.sign
            ),
        }
    }
}

/// Parameters of a deformed quasi-Bell state before `n_max` is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedParams {
    pub deformation: Deformation,
    pub alpha: f64,
    pub kind: Kind,
    pub sign: Sign,
    pub n_max: Option<usize>,
}

impl DeformedParams {
    /// Resolves `n_max` (explicit, or by [`select_nmax`]) and builds the spec.
    pub fn resolve(&self) -> Result<QuasiBellSpec> {
        let n_max = match self.n_max {
            Some(n) => n,
            None => {
                let n = select_nmax(&self.deformation, self.alpha, self.kind, NMAX_TOL)?;
                log::info!("selected n_max = {n}");
                n
            }
        };
        let spec = DeformationSpec::new(self.deformation, n_max)?;
        Ok(QuasiBellSpec::new(spec, self.alpha, self.kind, self.sign))
    }
}

/// Builds a deformation from its family name and the optional parameters.
pub fn deformation(
    family: Family,
    depth: Option<u32>,
    kappa: Option<f64>,
    morse_relaxed: bool,
) -> Result<Deformation> {
    let need_n = || depth.ok_or_else(|| CliError::usage(format!("--N is required for {family}")));
    let def = match family {
        Family::Harmonic => Deformation::Harmonic,
        Family::PoschlTeller => Deformation::PoschlTeller { depth: need_n()? },
        Family::Morse => Deformation::Morse { bound_states: need_n()?, relaxed: morse_relaxed },
        Family::Exciton => Deformation::Exciton {
            kappa: kappa.ok_or_else(|| CliError::usage("--kappa is required for exciton"))?,
        },
    };
    def.validate()?;
    Ok(def)
}

/// Reads a W-matrix file (four `re+imj` tokens, row-major).
pub fn read_wmatrix(path: &Path) -> Result<WMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(WMatrix::parse(&text)?)
}

/// One of the four reference states by name.
pub fn example_state(name: &str) -> Result<WMatrix> {
    examples::all()
        .into_iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, psi, _)| psi)
        .ok_or_else(|| CliError::usage(format!("unknown example state `{name}`")))
}

/// Parses a real number, also accepting a fraction `a/b`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            num / den
        }
        None => s.parse().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

/// Inclusive, evenly stepped grid of mixing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(CliError::usage(format!("p step must be positive, got {step}")));
        }
        if !(start < stop) {
            return Err(CliError::usage(format!("p start {start} must be below p stop {stop}")));
        }
        Ok(PRange { start, stop, step })
    }

    /// Checks that the grid stays inside `[lo, hi]`.
    pub fn check_within(&self, lo: f64, hi: f64) -> Result<()> {
        if self.start < lo || self.stop > hi {
            return Err(CliError::usage(format!(
                "p range [{}, {}] leaves the legal interval [{lo}, {hi}]",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Grid points `start + k·step` up to `stop`, ascending. The first point
    /// is `start` exactly; the others are rounded to 12 decimals.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| {
                if k == 0 {
                    return self.start;
                }
                let p = self.start + k as f64 * self.step;
                let rounded: f64 = format!("{p:.GRID_DECIMALS$}").parse().unwrap_or(p);
                rounded.clamp(self.start, self.stop)
            })
            .collect()
    }
}
