//! Exact affine Lie algebra computations and SLE-type growth simulation.
//!
//! * [`lie`]: Chevalley data of `sl_n`, squares of the orthonormal basis.
//! * [`rep`]: exterior-power top spaces.
//! * [`affine`]: graded Weyl modules, Sugawara modes, contravariant form.
//! * [`null`]: null-vector candidates and exact solving for the variances.
//! * [`lattice`]: Frenkel-Kac realization used as an independent oracle.
//! * [`sde`]: Laurent-series growth processes and the martingale Monte Carlo.

pub mod affine;
pub mod error;
pub mod lie;
pub mod lattice;
pub mod linalg;
pub mod null;
pub mod rational;
pub mod rep;
pub mod sde;

pub use error::{Error, Result};
pub use rational::Q;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
