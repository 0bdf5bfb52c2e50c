//! Closed-form discord against the brute-force oracle.

use std::fmt;

use rayon::prelude::*;
use wernerlike::discord::{qd_numeric, OracleConfig};
use wernerlike::Subsystem;

use crate::error::{CliError, Result};
use crate::state::{PRange, StateSpec};
use crate::sweep::closed_forms;

pub const DEFAULT_THRESHOLD: f64 = 1e-8;

/// Floor on the denominator of the relative residual.
pub const RESIDUAL_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub state: StateSpec,
    pub range: PRange,
    pub oracle: OracleConfig,
    pub threshold: f64,
}

impl VerifyConfig {
    pub fn new(state: StateSpec, range: PRange, oracle: OracleConfig) -> Result<Self> {
        let (lo, hi) = state.p_range();
        range.check_within(lo, hi)?;
        Ok(VerifyConfig { state, range, oracle, threshold: DEFAULT_THRESHOLD })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Compared { numeric: f64, relative: f64 },
    /// The oracle (or the closed form) raised an error at this point.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub p: f64,
    pub analytic: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub threshold: f64,
}

impl VerifyReport {
    pub fn max_residual(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| match r.outcome {
                Outcome::Compared { relative, .. } => Some(relative),
                Outcome::Failed(_) => None,
            })
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.outcome, Outcome::Failed(_))).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0 && self.max_residual() < self.threshold
    }

    /// `Ok` when every row compared below the threshold.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(CliError::Verification {
                residual: self.max_residual(),
                threshold: self.threshold,
                failures: self.failures(),
            })
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            match &r.outcome {
                Outcome::Failed(msg) => writeln!(f, "FAILED p={} analytic={} : {msg}", r.p, r.analytic)?,
                Outcome::Compared { relative, .. } if *relative >= self.threshold => {
                    writeln!(f, "ABOVE p={} relative_residual={relative:.3e}", r.p)?
                }
                Outcome::Compared { .. } => {}
            }
        }
        write!(
            f,
            "rows={} failures={} max_relative_residual={:.3e} threshold={:.1e}",
            self.rows.len(),
            self.failures(),
            self.max_residual(),
            self.threshold
        )
    }
}

pub fn relative_residual(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(RESIDUAL_FLOOR)
}

fn verify_point(state: &StateSpec, p: f64, oracle: &OracleConfig) -> VerifyRow {
    let analytic = match closed_forms(state, p) {
        Ok((_, qd)) => qd,
        Err(e) => return VerifyRow { p, analytic: f64::NAN, outcome: Outcome::Failed(e.to_string()) },
    };
    let numeric = state
        .density(p)
        .and_then(|rho| qd_numeric(&rho, Subsystem::A, oracle).map_err(Into::into));
    let outcome = match numeric {
        Ok(r) => Outcome::Compared { numeric: r.discord, relative: relative_residual(analytic, r.discord) },
        Err(e) => Outcome::Failed(e.to_string()),
    };
    VerifyRow { p, analytic, outcome }
}

/// Runs the oracle over the grid. Oracle errors become failure rows rather
/// than aborting the run.
pub fn verify(cfg: &VerifyConfig) -> VerifyReport {
    let rows = cfg.range.points().par_iter().map(|&p| verify_point(&cfg.state, p, &cfg.oracle)).collect();
    VerifyReport { rows, threshold: cfg.threshold }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_floor() {
        assert_eq!(relative_residual(0.0, 1e-12), 1e-6);
        assert_eq!(relative_residual(0.5, 0.5), 0.0);
        assert!((relative_residual(2.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn failure_rows_fail_the_report() {
        let report = VerifyReport {
            rows: vec![
                VerifyRow { p: 0.0, analytic: 0.0, outcome: Outcome::Compared { numeric: 0.0, relative: 0.0 } },
                VerifyRow { p: 0.1, analytic: 0.1, outcome: Outcome::Failed("no".into()) },
            ],
            threshold: 1e-8,
        };
        assert_eq!(report.failures(), 1);
        assert!(!report.passed());
        assert!(matches!(report.into_result(), Err(CliError::Verification { failures: 1, .. })));
    }

    #[test]
    fn coarse_werner_verifies() {
        let cfg = VerifyConfig::new(
            StateSpec::Werner,
            PRange::new(-1.0, 1.0 / 3.0, 0.25).unwrap(),
            OracleConfig::with_grid(16),
        )
        .unwrap();
        let report = verify(&cfg);
        assert!(report.passed(), "{report}");
    }
}
