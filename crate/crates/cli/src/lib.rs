//! Library side of the `wernerlike` command-line tool: CSV sweeps of EoF and
//! discord along Werner, GWL and deformed quasi-Bell families, oracle
//! verification of the closed forms, and threshold finders.

pub mod crossover;
pub mod error;
pub mod info;
pub mod state;
pub mod sweep;
pub mod verify;

pub use error::{CliError, ExitStatus, Result};
pub use state::{DeformedParams, PRange, StateKind, StateSpec};
pub use sweep::{CurveRow, SweepConfig};
pub use verify::{VerifyConfig, VerifyReport};
