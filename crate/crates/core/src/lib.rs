//! Thermal entanglement, separability thresholds and dense coding for small
//! bipartite spin systems, centred on the two-qutrit bilinear-biquadratic
//! chain in inhomogeneous magnetic fields.

pub mod densecode;
pub mod entanglement;
pub mod error;
pub mod numkernel;
pub mod qstate;
pub mod spinmodels;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};
pub use numkernel::{SquareMatrix, Spectrum};
pub use qstate::{BipartiteDims, DensityMatrix, Subsystem};
pub use spinmodels::QutritChainParams;
