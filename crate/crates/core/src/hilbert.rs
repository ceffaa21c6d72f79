//! Composite Hilbert space `qubit1 ⊗ qubit2 ⊗ qubit3 ⊗ oscillator` and its
//! elementary operators.
//!
//! Qubit configurations are indexed `q = 4 b1 + 2 b2 + b3` with `b = 0` for
//! `|e⟩` and `b = 1` for `|g⟩`, so `|eee⟩ = 0` and `|ggg⟩ = 7`. A composite
//! basis state `|q, n⟩` sits at `q (n_max + 1) + n`.

use crate::error::{Error, Result};
use crate::operator::{DenseHermitianOperator, Operator, StateVector, C64};
use crate::spectra::eigendecompose;

pub const N_QUBITS: usize = 3;
pub const QUBIT_SPACE_DIM: usize = 8;

/// Largest dimension [`tensor`] will materialize.
pub const MAX_TENSOR_DIM: usize = 100_000;

/// Unitarity tolerance on the well-converged half of a truncated displacement.
pub const DISPLACEMENT_UNITARITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitLevel {
    Excited,
    Ground,
}

impl QubitLevel {
    fn bit(self) -> usize {
        match self {
            QubitLevel::Excited => 0,
            QubitLevel::Ground => 1,
        }
    }

    /// Eigenvalue of σ_z.
    pub fn sigma_z(self) -> i32 {
        match self {
            QubitLevel::Excited => 1,
            QubitLevel::Ground => -1,
        }
    }
}

pub fn config_index(levels: [QubitLevel; N_QUBITS]) -> usize {
    levels.iter().fold(0, |acc, l| 2 * acc + l.bit())
}

pub fn config_levels(index: usize) -> [QubitLevel; N_QUBITS] {
    assert!(index < QUBIT_SPACE_DIM, "qubit configuration index out of range");
    let level = |bit: usize| if bit == 0 { QubitLevel::Excited } else { QubitLevel::Ground };
    [level((index >> 2) & 1), level((index >> 1) & 1), level(index & 1)]
}

/// Eigenvalue of `σ_z1 + σ_z2 + σ_z3` on configuration `index`.
pub fn sigma_z_sum(index: usize) -> i32 {
    config_levels(index).iter().map(|l| l.sigma_z()).sum()
}

/// Flip qubit `qubit` (1-based) in configuration `index`.
pub fn flip(index: usize, qubit: usize) -> usize {
    index ^ (1 << (N_QUBITS - qubit))
}

pub fn composite_index(config: usize, n: usize, n_max: usize) -> usize {
    config * (n_max + 1) + n
}

/// Single-qubit Pauli matrix in the `(|e⟩, |g⟩)` basis.
pub fn pauli_matrix(axis: Axis) -> Operator {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match axis {
        Axis::X => [[z, one], [one, z]],
        // σ_y|e⟩ = i|g⟩, σ_y|g⟩ = -i|e⟩
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[one, z], [z, -one]],
    };
    Operator::from_fn(2, |r, c| entries[r][c])
}

/// `σ_axis` acting on qubit `qubit` (1..=3), identity on the others; 8×8.
pub fn pauli(axis: Axis, qubit: usize) -> Result<DenseHermitianOperator> {
    if !(1..=N_QUBITS).contains(&qubit) {
        return Err(Error::InvalidParameter(format!("qubit index must be 1..=3, got {qubit}")));
    }
    let id = Operator::identity(2);
    let s = pauli_matrix(axis);
    let factors: Vec<&Operator> = (1..=N_QUBITS).map(|j| if j == qubit { &s } else { &id }).collect();
    Ok(DenseHermitianOperator::new_unchecked(tensor(&factors)?))
}

/// Truncated annihilation operator with `⟨n-1|a|n⟩ = sqrt(n)`.
pub fn annihilation(n_max: usize) -> Operator {
    Operator::from_real_fn(n_max + 1, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

pub fn creation(n_max: usize) -> Operator {
    annihilation(n_max).adjoint()
}

/// `a†a`, diagonal with entries `0..=n_max`.
pub fn number_operator(n_max: usize) -> DenseHermitianOperator {
    let diag: Vec<C64> = (0..=n_max).map(|n| C64::new(n as f64, 0.0)).collect();
    DenseHermitianOperator::new_unchecked(Operator::diagonal(&diag))
}

/// Photon-number parity `(-1)^{a†a}`.
pub fn number_parity(n_max: usize) -> DenseHermitianOperator {
    let diag: Vec<C64> = (0..=n_max).map(|n| C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
    DenseHermitianOperator::new_unchecked(Operator::diagonal(&diag))
}

/// Quadratures `X = (a + a†)/2` and `P = (a - a†)/(2i)`.
pub fn quadratures(n_max: usize) -> (DenseHermitianOperator, DenseHermitianOperator) {
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let x = (&a + &ad).scale(C64::new(0.5, 0.0));
    let p = (&a - &ad).scale(C64::new(0.0, -0.5));
    (DenseHermitianOperator::new_unchecked(x), DenseHermitianOperator::new_unchecked(p))
}

/// Kronecker product in the given order.
pub fn tensor(ops: &[&Operator]) -> Result<Operator> {
    let Some((first, rest)) = ops.split_first() else {
        return Err(Error::InvalidParameter("tensor of an empty operator list".into()));
    };
    let mut dim = first.dim();
    for op in rest {
        dim = dim
            .checked_mul(op.dim())
            .filter(|&d| d <= MAX_TENSOR_DIM)
            .ok_or(Error::DimensionOverflow { dim: dim.saturating_mul(op.dim()), limit: MAX_TENSOR_DIM })?;
    }
    if dim > MAX_TENSOR_DIM {
        return Err(Error::DimensionOverflow { dim, limit: MAX_TENSOR_DIM });
    }
    Ok(rest.iter().fold((*first).clone(), |acc, op| acc.kron(op)))
}

/// Truncation of `D(β) = exp(β (a† - a))` to Fock states `0..=n_max`.
///
/// The exponential is taken exactly (spectral decomposition of the Hermitian
/// generator `iβ(a† - a)`) in a space of twice the size and then restricted,
/// so the returned block approximates the untruncated operator. Columns in
/// the lower half must keep their norm to [`DISPLACEMENT_UNITARITY_TOL`];
/// otherwise the truncation is reported as insufficient.
pub fn displacement_operator(beta: f64, n_max: usize) -> Result<Operator> {
    if beta == 0.0 {
        return Ok(Operator::identity(n_max + 1));
    }
    let padded = 2 * n_max + 1;
    let a = annihilation(padded);
    let generator = (&a.adjoint() - &a).scale(C64::new(0.0, beta));
    let eig = eigendecompose(&DenseHermitianOperator::symmetrized(&generator), padded + 1)?;

    // D = exp(-i G) with G = iβ(a† - a)
    let dim = n_max + 1;
    let mut d = Operator::zeros(dim);
    for (mu, v) in eig.values.iter().zip(&eig.vectors) {
        let phase = C64::new(0.0, -mu).exp();
        let amps = v.amplitudes();
        for j in 0..dim {
            let w = phase * amps[j].conj();
            for i in 0..dim {
                d.add_at(i, j, amps[i] * w);
            }
        }
    }

    let check = &d.adjoint() * &d;
    let half = dim / 2;
    let mut defect = 0.0f64;
    for i in 0..=half {
        for j in 0..=half {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((check.get(i, j) - C64::new(target, 0.0)).norm());
        }
    }
    if defect > DISPLACEMENT_UNITARITY_TOL {
        return Err(Error::TruncationInsufficient { n_max, defect });
    }
    Ok(d)
}

pub fn fock_state(n: usize, n_max: usize) -> StateVector {
    StateVector::basis(n_max + 1, n)
}

/// `|q1 q2 q3⟩ ⊗ |n⟩` in the composite space.
pub fn product_state(levels: [QubitLevel; N_QUBITS], n: usize, n_max: usize) -> StateVector {
    StateVector::basis(QUBIT_SPACE_DIM * (n_max + 1), composite_index(config_index(levels), n, n_max))
}
