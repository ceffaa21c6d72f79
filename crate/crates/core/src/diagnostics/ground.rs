use crate::error::Result;
use crate::hamiltonian::{HamiltonianBundle, ParitySector};
use crate::operator::{StateVector, C64};
use crate::params::SystemParams;
use crate::spectra::{eigendecompose, full_ground, sector_ground};

/// Ground/first-excited gaps below this (in units of `w0`) count as degenerate.
pub const NEAR_DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Phase convention: the largest-magnitude amplitude is real and positive.
    pub state: StateVector,
    /// Distance to the next level.
    pub gap: f64,
    pub near_degenerate: bool,
    /// Parity of the returned state when parity is conserved (`ε = 0`).
    pub parity: Option<ParitySector>,
}

/// Ground state of the Hamiltonian carried by `bundle`.
///
/// When the lowest pair is degenerate within [`NEAR_DEGENERACY_TOL`] at
/// `ε = 0`, the parity-even member is returned: the pair is projected with
/// `(1 + Π)/2` and the larger projection is normalized.
pub fn ground_state(bundle: &HamiltonianBundle) -> Result<GroundState> {
    let p = &bundle.params;
    let eig = eigendecompose(&bundle.h_total, 2)?;
    let gap = eig.values[1] - eig.values[0];
    let near_degenerate = gap < NEAR_DEGENERACY_TOL * p.w0();
    let pi = &bundle.parity_op;

    let (state, parity) = if p.is_unbiased() {
        // Projecting onto the parity sector also removes the admixture of a
        // nearly degenerate partner of opposite parity.
        let project = |v: &StateVector, sign: f64| -> Vec<C64> {
            let pv = pi.apply(v.amplitudes());
            v.amplitudes().iter().zip(&pv).map(|(a, b)| (a + b * sign) * 0.5).collect()
        };
        let candidates: &[StateVector] = if near_degenerate { &eig.vectors[..2] } else { &eig.vectors[..1] };
        let even = candidates
            .iter()
            .map(|v| project(v, 1.0))
            .max_by(|a, b| norm_sq(a).total_cmp(&norm_sq(b)))
            .expect("at least one candidate");
        if near_degenerate || norm_sq(&even) > 0.5 {
            (StateVector::normalized(even)?, Some(ParitySector::Even))
        } else {
            (StateVector::normalized(project(&eig.vectors[0], -1.0))?, Some(ParitySector::Odd))
        }
    } else {
        (eig.vectors[0].clone(), None)
    };
    let mut state = state;
    state.fix_global_phase();
    Ok(GroundState { energy: eig.values[0], state, gap, near_degenerate, parity })
}

fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Ground state straight from the parameters, without materializing the
/// dense complex Hamiltonian. At `ε = 0` each parity sector is diagonalized
/// on its own, which makes the degenerate tie-break exact.
pub fn ground_state_of(params: &SystemParams) -> Result<GroundState> {
    params.validate()?;
    let (energy, gap, amplitudes, parity) = if params.is_unbiased() {
        let (even_values, even) = sector_ground(params, ParitySector::Even)?;
        let (odd_values, odd) = sector_ground(params, ParitySector::Odd)?;
        let mut all: Vec<f64> = even_values.iter().chain(&odd_values).copied().collect();
        all.sort_by(f64::total_cmp);
        let gap = all[1] - all[0];
        let (e, o) = (even_values[0], odd_values[0]);
        if e <= o || (e - o).abs() < NEAR_DEGENERACY_TOL * params.w0() {
            (all[0], gap, even, Some(ParitySector::Even))
        } else {
            (o, gap, odd, Some(ParitySector::Odd))
        }
    } else {
        let (values, v) = full_ground(params)?;
        (values[0], values[1] - values[0], v, None)
    };
    let mut state = StateVector::normalized(amplitudes)?;
    state.fix_global_phase();
    Ok(GroundState { energy, state, gap, near_degenerate: gap < NEAR_DEGENERACY_TOL * params.w0(), parity })
}
