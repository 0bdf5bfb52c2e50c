//! Parameter sweeps written as CSV.

use std::io::Write;

use rayon::prelude::*;
use wernerlike::discord::{qd_gwl_analytic, qd_numeric, qd_werner, OracleConfig};
use wernerlike::entanglement::{concurrence_gwl_analytic, concurrence_mixed, eof_gwl, eof_werner};
use wernerlike::states::werner;
use wernerlike::Subsystem;

use crate::error::Result;
use crate::state::{PRange, StateSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub state: StateSpec,
    pub range: PRange,
    /// Brute-force discord alongside the closed form when set.
    pub oracle: Option<OracleConfig>,
    pub concurrence: bool,
}

impl SweepConfig {
    pub fn new(state: StateSpec, range: PRange) -> Result<Self> {
        let (lo, hi) = state.p_range();
        range.check_within(lo, hi)?;
        Ok(SweepConfig { state, range, oracle: None, concurrence: false })
    }
}

/// One line of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub p: f64,
    pub eof: f64,
    pub qd_analytic: f64,
    pub qd_numeric: Option<f64>,
    /// `|qd_analytic − qd_numeric|`.
    pub residual: Option<f64>,
    pub concurrence: Option<f64>,
}

/// EoF and closed-form discord of one member of the family.
pub fn closed_forms(state: &StateSpec, p: f64) -> Result<(f64, f64)> {
    Ok(match state.psi() {
        None => (eof_werner(p)?, qd_werner(p)?),
        Some(psi) => {
            let c = state.pure_concurrence().unwrap_or_default();
            (eof_gwl(c, p)?, qd_gwl_analytic(psi, p)?.discord)
        }
    })
}

pub fn concurrence(state: &StateSpec, p: f64) -> Result<f64> {
    Ok(match state.pure_concurrence() {
        None => concurrence_mixed(&werner(p)?)?.value,
        Some(c) => concurrence_gwl_analytic(c, p)?,
    })
}

pub fn curve_row(state: &StateSpec, p: f64, oracle: Option<&OracleConfig>, with_c: bool) -> Result<CurveRow> {
    let (eof, qd_analytic) = closed_forms(state, p)?;
    let qd_numeric = match oracle {
        Some(cfg) => Some(qd_numeric(&state.density(p)?, Subsystem::A, cfg)?.discord),
        None => None,
    };
    Ok(CurveRow {
        p,
        eof,
        qd_analytic,
        qd_numeric,
        residual: qd_numeric.map(|n| (qd_analytic - n).abs()),
        concurrence: if with_c { Some(concurrence(state, p)?) } else { None },
    })
}

/// All rows in ascending `p`. Rows are computed in parallel; the first
/// failing row (in `p` order) determines the error.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<CurveRow>> {
    let points = cfg.range.points();
    let rows: Vec<Result<CurveRow>> = points
        .par_iter()
        .map(|&p| curve_row(&cfg.state, p, cfg.oracle.as_ref(), cfg.concurrence))
        .collect();
    rows.into_iter().collect()
}

pub fn csv_header(oracle: bool, concurrence: bool) -> String {
    let mut h = String::from("p,eof,qd_analytic");
    if oracle {
        h.push_str(",qd_numeric,residual");
    }
    if concurrence {
        h.push_str(",concurrence");
    }
    h
}

/// Writes rows with shortest round-trip decimal formatting and LF endings.
pub fn write_csv<W: Write>(mut out: W, rows: &[CurveRow], oracle: bool, concurrence: bool) -> std::io::Result<()> {
    writeln!(out, "{}", csv_header(oracle, concurrence))?;
    for r in rows {
        write!(out, "{},{},{}", r.p, r.eof, r.qd_analytic)?;
        if oracle {
            let n = r.qd_numeric.unwrap_or(f64::NAN);
            let res = r.residual.unwrap_or(f64::NAN);
            write!(out, ",{n},{res}")?;
        }
        if concurrence {
            write!(out, ",{}", r.concurrence.unwrap_or(f64::NAN))?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}
