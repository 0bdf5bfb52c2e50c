//! Summary of a single state.

use std::fmt;

use wernerlike::discord::{qd_numeric, OracleConfig};
use wernerlike::entanglement::{concurrence_mixed, eof_from_concurrence};
use wernerlike::linalg::von_neumann_entropy;
use wernerlike::Subsystem;

use crate::error::Result;
use crate::state::StateSpec;
use crate::sweep::closed_forms;

#[derive(Debug, Clone, PartialEq)]
pub struct StateInfo {
    pub p: f64,
    /// Descending.
    pub eigenvalues: [f64; 4],
    pub pure_concurrence: Option<f64>,
    /// Wootters concurrence of the mixed state.
    pub concurrence: f64,
    pub entropy: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub eof: f64,
    pub qd_analytic: f64,
    pub qd_numeric: Option<f64>,
}

pub fn state_info(state: &StateSpec, p: f64, oracle: Option<&OracleConfig>) -> Result<StateInfo> {
    let rho = state.density(p)?;
    let concurrence = concurrence_mixed(&rho)?.value;
    let (_, qd_analytic) = closed_forms(state, p)?;
    let qd_numeric = match oracle {
        Some(cfg) => Some(qd_numeric(&rho, Subsystem::A, cfg)?.discord),
        None => None,
    };
    Ok(StateInfo {
        p,
        eigenvalues: *rho.eigenvalues()?.values(),
        pure_concurrence: state.pure_concurrence(),
        concurrence,
        entropy: von_neumann_entropy(rho.matrix())?,
        entropy_a: von_neumann_entropy(&rho.reduced(Subsystem::A))?,
        entropy_b: von_neumann_entropy(&rho.reduced(Subsystem::B))?,
        eof: eof_from_concurrence(concurrence)?,
        qd_analytic,
        qd_numeric,
    })
}

impl fmt::Display for StateInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}", self.p)?;
        let ev: Vec<String> = self.eigenvalues.iter().map(|v| v.to_string()).collect();
        writeln!(f, "eigenvalues = {}", ev.join(" "))?;
        if let Some(c) = self.pure_concurrence {
            writeln!(f, "pure_concurrence = {c}")?;
        }
        writeln!(f, "concurrence = {}", self.concurrence)?;
        writeln!(f, "entropy = {}", self.entropy)?;
        writeln!(f, "entropy_a = {}", self.entropy_a)?;
        writeln!(f, "entropy_b = {}", self.entropy_b)?;
        writeln!(f, "eof = {}", self.eof)?;
        write!(f, "qd_analytic = {}", self.qd_analytic)?;
        if let Some(q) = self.qd_numeric {
            write!(f, "\nqd_numeric = {q}")?;
        }
        Ok(())
    }
}
