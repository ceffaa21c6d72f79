use crate::error::{Error, Result};
use crate::hilbert::{pauli_matrix, Axis, N_QUBITS, QUBIT_SPACE_DIM};
use crate::operator::{Operator, StateVector, C64};
use crate::spectra::eigendecompose;

/// Tolerance on Hermiticity, trace and positivity of a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalues below this are exact zeros in entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > DENSITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let rho = Self { op };
        let lowest = rho.eigenvalues()?[0];
        if lowest < -DENSITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        Self { op: Operator::from_fn(a.len(), |i, j| a[i] * a[j].conj()) }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: Operator::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)) }
    }

    /// Used for reductions of valid states, which are valid by construction.
    pub(crate) fn from_reduction(op: Operator) -> Self {
        // enforce exact Hermiticity against round-off in the contraction
        let n = op.dim();
        Self { op: Operator::from_fn(n, |i, j| (op.get(i, j) + op.get(j, i).conj()) * 0.5) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.op.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigendecompose(&self.op, self.dim())?.values)
    }

    pub fn purity(&self) -> f64 {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.op.get(i, j).norm_sqr()).sum()
    }
}

/// Which factor of `qubit1 ⊗ qubit2 ⊗ qubit3 ⊗ oscillator` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Oscillator,
    Qubits,
    /// Two qubits (1-based, ascending), the third and the oscillator traced out.
    QubitPair(usize, usize),
    /// A single qubit (1-based).
    Qubit(usize),
}

pub trait PartialTrace {
    /// Reduced density matrix of `keep`. The composite dimension must be a
    /// multiple of 8; the oscillator dimension is inferred from it.
    fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix>;
}

fn oscillator_dim(total: usize) -> Result<usize> {
    if total == 0 || total % QUBIT_SPACE_DIM != 0 {
        return Err(Error::DimensionMismatch { expected: QUBIT_SPACE_DIM * (total / QUBIT_SPACE_DIM).max(1), actual: total });
    }
    Ok(total / QUBIT_SPACE_DIM)
}

/// Trace the 8×8 qubit operator down to the qubits listed in `keep` (1-based, ascending).
fn reduce_qubits(rho_q: &Operator, keep: &[usize]) -> Operator {
    let bit = |config: usize, qubit: usize| (config >> (N_QUBITS - qubit)) & 1;
    let sub = |config: usize| keep.iter().fold(0, |acc, &k| 2 * acc + bit(config, k));
    let traced: Vec<usize> = (1..=N_QUBITS).filter(|k| !keep.contains(k)).collect();
    let env = |config: usize| traced.iter().fold(0, |acc, &k| 2 * acc + bit(config, k));
    let mut out = Operator::zeros(1 << keep.len());
    for a in 0..QUBIT_SPACE_DIM {
        for b in 0..QUBIT_SPACE_DIM {
            if env(a) == env(b) {
                out.add_at(sub(a), sub(b), rho_q.get(a, b));
            }
        }
    }
    out
}

fn check_qubits(keep: Subsystem) -> Result<Vec<usize>> {
    let valid = |q: usize| (1..=N_QUBITS).contains(&q);
    match keep {
        Subsystem::QubitPair(i, j) if valid(i) && valid(j) && i < j => Ok(vec![i, j]),
        Subsystem::Qubit(i) if valid(i) => Ok(vec![i]),
        Subsystem::QubitPair(..) | Subsystem::Qubit(_) => {
            Err(Error::InvalidParameter(format!("invalid qubit selection {keep:?}")))
        }
        _ => Ok(vec![1, 2, 3]),
    }
}

impl PartialTrace for StateVector {
    fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let n_osc = oscillator_dim(self.dim())?;
        let c = self.amplitudes();
        let at = |q: usize, n: usize| c[q * n_osc + n];
        let op = match keep {
            Subsystem::Oscillator => Operator::from_fn(n_osc, |n, m| {
                (0..QUBIT_SPACE_DIM).map(|q| at(q, n) * at(q, m).conj()).sum()
            }),
            _ => {
                let qubits = check_qubits(keep)?;
                let rho_q = Operator::from_fn(QUBIT_SPACE_DIM, |a, b| {
                    (0..n_osc).map(|n| at(a, n) * at(b, n).conj()).sum()
                });
                reduce_qubits(&rho_q, &qubits)
            }
        };
        Ok(DensityMatrix::from_reduction(op))
    }
}

impl PartialTrace for DensityMatrix {
    fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let n_osc = oscillator_dim(self.dim())?;
        let at = |q: usize, n: usize, r: usize, m: usize| self.op.get(q * n_osc + n, r * n_osc + m);
        let op = match keep {
            Subsystem::Oscillator => {
                Operator::from_fn(n_osc, |n, m| (0..QUBIT_SPACE_DIM).map(|q| at(q, n, q, m)).sum())
            }
            _ => {
                let qubits = check_qubits(keep)?;
                let rho_q = Operator::from_fn(QUBIT_SPACE_DIM, |a, b| (0..n_osc).map(|n| at(a, n, b, n)).sum());
                reduce_qubits(&rho_q, &qubits)
            }
        };
        Ok(DensityMatrix::from_reduction(op))
    }
}

/// `S = -Tr ρ log₂ ρ`, eigenvalues below [`ENTROPY_CUTOFF`] dropped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s: f64 = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&p| p >= ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum();
    Ok(s.max(0.0))
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots `√e_i` of the eigenvalues of `ρ ρ̃`, with
/// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, are the singular values of `√ρ̃ √ρ`. Taking
/// singular values directly avoids square roots of round-off eigenvalues,
/// which would otherwise leave ~1e-8 of spurious concurrence on product
/// states. Eigenvalues of `ρ` below [`ENTROPY_CUTOFF`] are zeroed before
/// `√ρ` is formed.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, actual: rho.dim() });
    }
    let sy = pauli_matrix(Axis::Y);
    let yy = sy.kron(&sy);

    let eig = eigendecompose(rho.as_operator(), 4)?;
    let mut sqrt_rho = Operator::zeros(4);
    for (p, v) in eig.values.iter().zip(&eig.vectors) {
        if *p < ENTROPY_CUTOFF {
            continue;
        }
        let w = p.sqrt();
        let a = v.amplitudes();
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho.add_at(i, j, a[i] * a[j].conj() * w);
            }
        }
    }
    // √ρ̃ = (σy⊗σy) (√ρ)* (σy⊗σy)
    let conj = Operator::from_fn(4, |i, j| sqrt_rho.get(i, j).conj());
    let sqrt_tilde = &(&yy * &conj) * &yy;
    let product = &sqrt_tilde * &sqrt_rho;
    let mut roots = product.as_mat().singular_values().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}
