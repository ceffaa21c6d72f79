//! Ground-state quantifiers: reduced states, entropy, pairwise concurrence,
//! quadrature squeezing and phase-space portraits of the oscillator.

mod density;
mod ground;
mod phase_space;
mod report;

pub use density::{
    concurrence, von_neumann_entropy, DensityMatrix, PartialTrace, Subsystem, DENSITY_TOL, ENTROPY_CUTOFF,
};
pub use ground::{ground_state, ground_state_of, GroundState, NEAR_DEGENERACY_TOL};
pub use phase_space::{
    detect_cat, hermite_functions, position_density, q_function, wigner_function, CatSignature, GridSpec,
    PhaseSpaceGrid, CAT_FRINGE_DEPTH, CAT_LOBE_FRACTION, CAT_MIN_SEPARATION, MIN_Q_MASS, WIGNER_IMAG_TOL, WIGNER_NORM_TOL,
};
pub use report::{
    build_report, build_report_with, report_sweep, GroundStateReport, ReportOptions, ReportSweep, REPORT_SCALARS,
};

/// Quadrature squeezing of an oscillator state.
///
/// `s = 4 Var − 1` is zero for the vacuum and negative when the variance
/// drops below the vacuum value; `k = (1 + s_x)(1 + s_p)/4` is the
/// uncertainty product `4 Var(X) Var(P)`, bounded below by 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezing {
    pub s_x: f64,
    pub s_p: f64,
    pub k: f64,
}

/// Squeezing parameters from the Fock-basis moments of `rho_osc`.
pub fn squeezing_parameters(rho_osc: &DensityMatrix) -> Squeezing {
    let dim = rho_osc.dim();
    let mut a = num_complex::Complex64::new(0.0, 0.0);
    let mut a2 = num_complex::Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    for m in 0..dim {
        let mf = m as f64;
        n += mf * rho_osc.get(m, m).re;
        if m >= 1 {
            a += rho_osc.get(m, m - 1) * mf.sqrt();
        }
        if m >= 2 {
            a2 += rho_osc.get(m, m - 2) * (mf * (mf - 1.0)).sqrt();
        }
    }
    let x2 = (2.0 * a2.re + 2.0 * n + 1.0) / 4.0;
    let p2 = (-2.0 * a2.re + 2.0 * n + 1.0) / 4.0;
    let var_x = x2 - a.re * a.re;
    let var_p = p2 - a.im * a.im;
    let s_x = 4.0 * var_x - 1.0;
    let s_p = 4.0 * var_p - 1.0;
    Squeezing { s_x, s_p, k: 0.25 * (1.0 + s_x) * (1.0 + s_p) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{displacement_operator, fock_state, quadratures};
    use crate::operator::{Operator, StateVector, C64};

    fn pure(v: Vec<C64>) -> DensityMatrix {
        DensityMatrix::pure(&StateVector::normalized(v).unwrap())
    }

    #[test]
    fn vacuum_is_minimum_uncertainty() {
        let s = squeezing_parameters(&DensityMatrix::pure(&fock_state(0, 10)));
        assert!(s.s_x.abs() < 1e-15 && s.s_p.abs() < 1e-15);
        assert!((s.k - 0.25).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_is_unsqueezed() {
        let d = displacement_operator(0.9, 60).unwrap();
        let v = d.apply(fock_state(0, 60).amplitudes());
        let s = squeezing_parameters(&pure(v));
        assert!(s.s_x.abs() < 1e-10 && s.s_p.abs() < 1e-10, "{s:?}");
    }

    #[test]
    fn fock_state_moments() {
        // Var X = Var P = (2n+1)/4
        let s = squeezing_parameters(&DensityMatrix::pure(&fock_state(3, 10)));
        assert!((s.s_x - 6.0).abs() < 1e-12 && (s.s_p - 6.0).abs() < 1e-12);
        assert!((s.k - 12.25).abs() < 1e-12);
    }

    #[test]
    fn matches_quadrature_matrices() {
        // squeezed-vacuum-like superposition with a complex phase
        let n_max = 12;
        let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
        v[0] = C64::new(0.8, 0.0);
        v[1] = C64::new(0.1, 0.2);
        v[2] = C64::new(-0.4, 0.1);
        v[4] = C64::new(0.15, 0.0);
        let rho = pure(v.clone());
        let s = squeezing_parameters(&rho);
        let state = StateVector::normalized(v).unwrap();
        let (x, p) = quadratures(n_max);
        let var = |q: &Operator| {
            let m1 = q.sandwich(state.amplitudes(), state.amplitudes()).re;
            let m2 = (q * q).sandwich(state.amplitudes(), state.amplitudes()).re;
            m2 - m1 * m1
        };
        // the truncated X² is wrong only in the top level, which is empty here
        assert!((s.s_x - (4.0 * var(&*x) - 1.0)).abs() < 1e-12);
        assert!((s.s_p - (4.0 * var(&*p) - 1.0)).abs() < 1e-12);
        assert!(s.k >= 0.25 - 1e-12);
    }
}
