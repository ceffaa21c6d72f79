//! Full three-qubit Dicke Hamiltonian and its symmetry operators.
//!
//! ```text
//! H = Σ_j [-(Δ/2) σx_j - (ε/2) σz_j] + w0 a†a + λ (a + a†)(σz_1 + σz_2 + σz_3)
//! ```
//!
//! The zero-point energy `w0/2` is omitted. Every matrix element is real in
//! the product basis, which the spectral code exploits; the complex
//! [`HamiltonianBundle`] is the general-purpose carrier.

use faer::Mat;

use crate::error::{Error, Result};
use crate::hilbert::{composite_index, config_index, config_levels, flip, sigma_z_sum, N_QUBITS, QUBIT_SPACE_DIM};
use crate::operator::{DenseHermitianOperator, Operator, C64};
use crate::params::SystemParams;

/// Hamiltonian together with the parameters it was built from and the
/// parity operator `Π = σx1 σx2 σx3 ⊗ (-1)^{a†a}`.
#[derive(Debug, Clone)]
pub struct HamiltonianBundle {
    pub h_total: DenseHermitianOperator,
    pub params: SystemParams,
    pub parity_op: DenseHermitianOperator,
}

/// Visit every nonzero matrix element `(row, col, value)` of H once.
pub(crate) fn for_each_element(params: &SystemParams, mut f: impl FnMut(usize, usize, f64)) {
    let n_max = params.n_max();
    let (delta, eps, w0, lambda) = (params.delta(), params.epsilon(), params.w0(), params.lambda());
    for q in 0..QUBIT_SPACE_DIM {
        let sz = sigma_z_sum(q) as f64;
        for n in 0..=n_max {
            let i = composite_index(q, n, n_max);
            f(i, i, n as f64 * w0 - 0.5 * eps * sz);
            for j in 1..=N_QUBITS {
                f(composite_index(flip(q, j), n, n_max), i, -0.5 * delta);
            }
            if lambda != 0.0 {
                let c = lambda * sz;
                if n < n_max {
                    f(composite_index(q, n + 1, n_max), i, c * ((n + 1) as f64).sqrt());
                }
                if n > 0 {
                    f(composite_index(q, n - 1, n_max), i, c * (n as f64).sqrt());
                }
            }
        }
    }
}

/// Dense real matrix of H.
pub(crate) fn real_hamiltonian(params: &SystemParams) -> Mat<f64> {
    let dim = params.dim();
    let mut m = Mat::<f64>::zeros(dim, dim);
    for_each_element(params, |i, j, v| m[(i, j)] += v);
    m
}

pub fn build_full_hamiltonian(params: &SystemParams) -> Result<HamiltonianBundle> {
    params.validate()?;
    let mut h = Operator::zeros(params.dim());
    for_each_element(params, |i, j, v| h.add_at(i, j, C64::new(v, 0.0)));
    Ok(HamiltonianBundle {
        h_total: DenseHermitianOperator::new(h)?,
        params: *params,
        parity_op: parity_operator(params.n_max()),
    })
}

/// `Π|q, n⟩ = (-1)^n |q̄, n⟩` with `q̄` the configuration with all three qubits flipped.
pub fn parity_operator(n_max: usize) -> DenseHermitianOperator {
    let dim = QUBIT_SPACE_DIM * (n_max + 1);
    let mut p = Operator::zeros(dim);
    for q in 0..QUBIT_SPACE_DIM {
        for n in 0..=n_max {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            p.set(composite_index(QUBIT_SPACE_DIM - 1 - q, n, n_max), composite_index(q, n, n_max), C64::new(sign, 0.0));
        }
    }
    DenseHermitianOperator::new_unchecked(p)
}

/// Unitary that reorders the qubit tensor factors: the qubit in slot `i` of
/// the output is the qubit from slot `perm[i]` of the input (1-based), so
/// `[1, 3, 2]` swaps qubits 2 and 3.
pub fn permutation_operator(perm: [usize; 3], n_max: usize) -> Result<Operator> {
    let mut sorted = perm;
    sorted.sort_unstable();
    if sorted != [1, 2, 3] {
        return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of (1, 2, 3)")));
    }
    let dim = QUBIT_SPACE_DIM * (n_max + 1);
    let mut p = Operator::zeros(dim);
    for q in 0..QUBIT_SPACE_DIM {
        let levels = config_levels(q);
        let target = config_index([levels[perm[0] - 1], levels[perm[1] - 1], levels[perm[2] - 1]]);
        for n in 0..=n_max {
            p.set(composite_index(target, n, n_max), composite_index(q, n, n_max), C64::new(1.0, 0.0));
        }
    }
    Ok(p)
}

/// Eigenspace label of the parity operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParitySector {
    Even,
    Odd,
}

impl ParitySector {
    pub fn eigenvalue(self) -> f64 {
        match self {
            ParitySector::Even => 1.0,
            ParitySector::Odd => -1.0,
        }
    }
}

/// H restricted to one parity sector, valid only at `ε = 0`.
///
/// Sector basis: `(|q, n⟩ ± (-1)^n |q̄, n⟩)/√2` for `q < 4`, ordered like the
/// composite basis. Because `H` commutes with `Π`, the block entries reduce to
/// `H(i, j) ± (-1)^{n_j} H(i, j̄)`.
pub(crate) fn sector_hamiltonian(params: &SystemParams, sector: ParitySector) -> Result<Mat<f64>> {
    if !params.is_unbiased() {
        return Err(Error::InvalidParameter("parity sectors exist only at epsilon = 0".into()));
    }
    let n_max = params.n_max();
    let half = params.dim() / 2;
    let s = sector.eigenvalue();
    let mut m = Mat::<f64>::zeros(half, half);
    // index in the full space -> (sector row, sign) for the representative or its partner
    let reduce = |full: usize| -> (usize, f64) {
        let (q, n) = (full / (n_max + 1), full % (n_max + 1));
        if q < QUBIT_SPACE_DIM / 2 {
            (full, 1.0)
        } else {
            let phase = if n % 2 == 0 { 1.0 } else { -1.0 };
            (composite_index(QUBIT_SPACE_DIM - 1 - q, n, n_max), s * phase)
        }
    };
    for_each_element(params, |i, j, v| {
        if i >= half {
            return;
        }
        let (col, sign) = reduce(j);
        m[(i, col)] += sign * v;
    });
    Ok(m)
}

/// Map a sector-basis vector back to the composite basis.
pub(crate) fn embed_sector_vector(v: &[f64], sector: ParitySector, n_max: usize) -> Vec<C64> {
    let half = v.len();
    let s = sector.eigenvalue();
    let mut out = vec![C64::new(0.0, 0.0); 2 * half];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for (i, &c) in v.iter().enumerate() {
        let (q, n) = (i / (n_max + 1), i % (n_max + 1));
        let phase = if n % 2 == 0 { 1.0 } else { -1.0 };
        out[i] += C64::new(r * c, 0.0);
        out[composite_index(QUBIT_SPACE_DIM - 1 - q, n, n_max)] += C64::new(s * phase * r * c, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{annihilation, number_operator, pauli, tensor, Axis, QubitLevel};

    /// The same Hamiltonian assembled from Kronecker products of the
    /// elementary operators, independently of the element visitor.
    fn tensor_hamiltonian(p: &SystemParams) -> Operator {
        let id_osc = Operator::identity(p.n_max() + 1);
        let id_q = Operator::identity(8);
        let mut h = Operator::zeros(p.dim());
        let mut sz_total = Operator::zeros(8);
        for j in 1..=3 {
            let sx = pauli(Axis::X, j).unwrap();
            let sz = pauli(Axis::Z, j).unwrap();
            let hq = &sx.scale(C64::new(-0.5 * p.delta(), 0.0)) - &sz.scale(C64::new(0.5 * p.epsilon(), 0.0));
            h = &h + &tensor(&[&hq, &id_osc]).unwrap();
            sz_total = &sz_total + &sz;
        }
        let n = number_operator(p.n_max()).scale(C64::new(p.w0(), 0.0));
        h = &h + &tensor(&[&id_q, &n]).unwrap();
        let a = annihilation(p.n_max());
        let x = &a + &a.adjoint();
        let coupling = tensor(&[&sz_total, &x]).unwrap().scale(C64::new(p.lambda(), 0.0));
        &h + &coupling
    }

    #[test]
    fn matches_tensor_construction() {
        let p = SystemParams::new(1.3, 0.4, 0.9, 0.7, 7).unwrap();
        let b = build_full_hamiltonian(&p).unwrap();
        assert!(b.h_total.max_abs_diff(&tensor_hamiltonian(&p)) < 1e-14);
        assert_eq!(b.h_total.dim(), 64);
        assert!(b.h_total.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn coupling_matrix_element() {
        let (lambda, n_max) = (0.37, 9);
        let p = SystemParams::new(1.0, 0.0, 1.0, lambda, n_max).unwrap();
        let b = build_full_hamiltonian(&p).unwrap();
        let eee = config_index([QubitLevel::Excited; 3]);
        for n in 0..n_max {
            let e = b.h_total.get(composite_index(eee, n, n_max), composite_index(eee, n + 1, n_max));
            assert!((e.re - 3.0 * lambda * ((n + 1) as f64).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_properties() {
        let n_max = 6;
        let pi = parity_operator(n_max);
        let id = Operator::identity(8 * (n_max + 1));
        assert_eq!((&*pi * &*pi).max_abs_diff(&id), 0.0);
        let ggg0 = composite_index(7, 0, n_max);
        let out = pi.apply(crate::operator::StateVector::basis(pi.dim(), ggg0).amplitudes());
        assert_eq!(out[composite_index(0, 0, n_max)], C64::new(1.0, 0.0));

        for &lambda in &[0.0, 0.3, 1.1, 2.5] {
            let p = SystemParams::new(1.0, 0.0, 1.0, lambda, n_max).unwrap();
            let h = build_full_hamiltonian(&p).unwrap();
            assert!(h.h_total.commutator(&pi).max_abs() < 1e-10);
        }
        let small = build_full_hamiltonian(&SystemParams::new(1.0, 0.25, 1.0, 0.5, n_max).unwrap()).unwrap();
        let large = build_full_hamiltonian(&SystemParams::new(1.0, 0.5, 1.0, 0.5, n_max).unwrap()).unwrap();
        let c_small = small.h_total.commutator(&pi).max_abs();
        let c_large = large.h_total.commutator(&pi).max_abs();
        assert!(c_small > 0.1);
        assert!((c_large / c_small - 2.0).abs() < 1e-12);
    }

    #[test]
    fn permutations() {
        let n_max = 4;
        assert_eq!(permutation_operator([1, 2, 3], n_max).unwrap().max_abs_diff(&Operator::identity(40)), 0.0);
        assert!(permutation_operator([1, 1, 2], n_max).is_err());
        assert!(permutation_operator([0, 1, 2], n_max).is_err());

        use QubitLevel::{Excited as E, Ground as G};
        let swap23 = permutation_operator([1, 3, 2], n_max).unwrap();
        let idx = |l, n| composite_index(config_index(l), n, n_max);
        assert_eq!(swap23.get(idx([E, G, G], 2), idx([E, G, G], 2)), C64::new(1.0, 0.0));
        assert_eq!(swap23.get(idx([G, G, E], 3), idx([G, E, G], 3)), C64::new(1.0, 0.0));

        let p = SystemParams::new(0.8, 0.3, 1.0, 0.9, n_max).unwrap();
        let h = build_full_hamiltonian(&p).unwrap();
        for perm in [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]] {
            let pm = permutation_operator(perm, n_max).unwrap();
            assert!(h.h_total.commutator(&pm).max_abs() < 1e-12);
        }
    }

    #[test]
    fn sector_blocks_reproduce_projection() {
        let n_max = 5;
        let p = SystemParams::new(1.2, 0.0, 1.0, 0.6, n_max).unwrap();
        let h = build_full_hamiltonian(&p).unwrap();
        for sector in [ParitySector::Even, ParitySector::Odd] {
            let block = sector_hamiltonian(&p, sector).unwrap();
            let half = block.nrows();
            let basis: Vec<Vec<C64>> = (0..half)
                .map(|i| {
                    let mut e = vec![0.0; half];
                    e[i] = 1.0;
                    embed_sector_vector(&e, sector, n_max)
                })
                .collect();
            for i in 0..half {
                let pv = h.parity_op.apply(&basis[i]);
                for (a, b) in pv.iter().zip(&basis[i]) {
                    assert!((a - b * sector.eigenvalue()).norm() < 1e-15);
                }
                for j in 0..half {
                    let want = h.h_total.sandwich(&basis[i], &basis[j]);
                    assert!(want.im.abs() < 1e-15);
                    assert!((block[(i, j)] - want.re).abs() < 1e-13, "({i},{j})");
                }
            }
        }
        assert!(sector_hamiltonian(&p.with_epsilon(0.1).unwrap(), ParitySector::Even).is_err());
    }
}
