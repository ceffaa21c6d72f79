//! Numerical laboratory for three identical qubits coupled to a single
//! harmonic oscillator in the ultrastrong-coupling regime.
//!
//! The crate covers:
//!
//! * [`hilbert`]: the composite space (three qubits ⊗ truncated Fock space)
//!   and its elementary operators,
//! * [`hamiltonian`]: the full Hamiltonian with its parity and qubit
//!   permutation symmetries,
//! * [`spectra`]: dense eigendecomposition, coupling sweeps, degeneracy
//!   profiles and truncation certification,
//! * [`adiabatic_fast`]: the fast-oscillator approximation (displaced Fock
//!   states, effective 8×8 qubit blocks),
//! * [`adiabatic_slow`]: the fast-qubit approximation (branch potentials,
//!   critical couplings, double-well geometry),
//! * [`diagnostics`]: ground-state quantifiers (reduced states, entropy,
//!   concurrence, squeezing, Husimi Q and Wigner functions).
//!
//! Energies are in units of the oscillator quantum `w0` (with ħ = 1). The
//! basis is ordered qubit 1, qubit 2, qubit 3, oscillator, with `|e⟩`
//! before `|g⟩` and Fock states ascending.

pub mod adiabatic_fast;
pub mod adiabatic_slow;
pub mod diagnostics;
pub mod error;
pub mod export;
pub mod hamiltonian;
pub mod hilbert;
pub mod operator;
pub mod params;
pub mod special;
pub mod spectra;

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use hamiltonian::{build_full_hamiltonian, HamiltonianBundle};
pub use operator::{DenseHermitianOperator, Operator, StateVector, C64};
pub use params::SystemParams;
