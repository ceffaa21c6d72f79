//! Exact spectra: eigendecomposition, coupling sweeps, degeneracy profiles
//! and truncation certification.
//!
//! Levels are tracked by sorted index across a sweep, so level crossings show
//! up as kinks rather than being resolved by continuation. Degenerate levels
//! are always counted with multiplicity.

mod certify;
mod eigen;
mod sweep;

pub use certify::{certify_truncation, CERTIFY_SCHEDULE, CERTIFY_STEP, N_MAX_CAP};
pub use eigen::{eigendecompose, lowest_levels, EigenPairs};
pub(crate) use eigen::{full_ground, sector_ground, symmetric_eigenvalues};
pub(crate) use sweep::in_pool;
pub use sweep::{linspace, spectrum_sweep, spectrum_sweep_with, SpectrumTable, SweepOptions};

/// Default clustering tolerance in units of `w0`.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyProfile {
    pub multiplicities: Vec<usize>,
    pub tolerance: f64,
}

impl DegeneracyProfile {
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// Group sorted levels: a level joins the current group when it lies within
/// `tol` of the previous level (chain clustering).
pub fn degeneracy_profile(levels: &[f64], tol: f64) -> DegeneracyProfile {
    let mut multiplicities = Vec::new();
    let mut prev: Option<f64> = None;
    for &e in levels {
        match (prev, multiplicities.last_mut()) {
            (Some(p), Some(last)) if e - p <= tol => *last += 1,
            _ => multiplicities.push(1),
        }
        prev = Some(e);
    }
    DegeneracyProfile { multiplicities, tolerance: tol }
}
