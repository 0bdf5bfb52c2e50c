//! Entanglement of formation and quantum discord for two-qubit Werner and
//! generalized Werner-like states, with f-deformed quasi-Bell inputs.

pub mod deformed;
pub mod discord;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{Mat2, Mat4, Subsystem, C64};
pub use states::{TwoQubitDensity, WMatrix};
