//! Finite-difference WENO-5 reconstruction with classical and centered
//! weighting strategies, plus scalar and Euler solvers and the benchmark
//! problems used to compare them.

pub mod analysis;
pub mod error;
pub mod euler;
pub mod grid;
pub mod problems;
pub mod solver;
pub mod weno;

pub use error::{AnalysisError, GridError, KernelError, PhysicsError, ProblemError, SolverError};
pub use weno::{SchemeConfig, SchemeKind};
