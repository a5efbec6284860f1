//! Qubit dephasing in a PT-symmetric non-Hermitian bosonic bath.
//!
//! - [`dephasing`]: discrete-bath amplitudes `xi_k(t)` and the closed-form
//!   decoherence exponent.
//! - [`continuum`]: Ohmic-bath decoherence exponent by adaptive quadrature.
//! - [`entanglement`]: Wootters concurrence and entanglement of formation.
//! - [`oracle`]: exact truncated-Fock evolution used to check the closed forms.

pub mod continuum;
pub mod dephasing;
pub mod entanglement;
mod error;
pub mod oracle;
pub mod par;
pub mod special;

pub use error::{Error, Result};
