//! Fast-oscillator adiabatic approximation.
//!
//! With the qubits frozen in a σ_z configuration of total `s = σz1+σz2+σz3`,
//! the oscillator sees `w0 a†a + sλ(a + a†) = w0 a_s† a_s - s²λ²/w0` with
//! `a_s = a + sλ/w0`. Its eigenstates are the displaced Fock states
//! `|n_s⟩ = D(-sλ/w0)|n⟩`. For each level `n` the eight states
//! `|q⟩|n_{s(q)}⟩` span the space Γ in which the qubits get an effective 8×8
//! Hamiltonian; flips between configurations are dressed by the overlaps
//! `⟨n_s|n_{s'}⟩`.

use std::path::Path;

use faer::Mat;

use crate::error::{Error, Result};
use crate::export::write_text;
use crate::hilbert::{composite_index, flip, sigma_z_sum, N_QUBITS, QUBIT_SPACE_DIM};
use crate::operator::{DenseHermitianOperator, Operator, C64};
use crate::params::SystemParams;
use crate::spectra::{symmetric_eigenvalues, SpectrumTable};
use crate::special::{displaced_overlap, laguerre_assoc};

/// Qubit configurations in Γ order:
/// `eee, eeg, ege, gee, egg, geg, gge, ggg`.
pub const GAMMA_CONFIGS: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// One of the four displaced oscillators, labelled by the σ_z sum it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DisplacedSector {
    label: i32,
}

impl DisplacedSector {
    pub const ALL: [DisplacedSector; 4] = [
        DisplacedSector { label: -3 },
        DisplacedSector { label: -1 },
        DisplacedSector { label: 1 },
        DisplacedSector { label: 3 },
    ];

    pub fn new(label: i32) -> Result<Self> {
        match label {
            -3 | -1 | 1 | 3 => Ok(Self { label }),
            _ => Err(Error::InvalidParameter(format!("sector label must be one of -3, -1, 1, 3; got {label}"))),
        }
    }

    pub fn of_config(config: usize) -> Self {
        Self { label: sigma_z_sum(config) }
    }

    pub fn label(&self) -> i32 {
        self.label
    }

    /// Shift `d` in `a_s = a + d`; the sector's Fock states are `D(-d)|n⟩`.
    pub fn displacement(&self, params: &SystemParams) -> f64 {
        self.label as f64 * params.lambda() / params.w0()
    }

    /// `-s² λ² / w0`.
    pub fn energy_shift(&self, params: &SystemParams) -> f64 {
        let l = params.lambda();
        -(self.label * self.label) as f64 * l * l / params.w0()
    }
}

/// `n w0 - s² λ²/w0`.
pub fn sector_energy(sector: DisplacedSector, n: usize, params: &SystemParams) -> f64 {
    n as f64 * params.w0() + sector.energy_shift(params)
}

/// `⟨m_a|n_b⟩` between Fock states of two displaced oscillators.
pub fn sector_overlap(m: usize, a: DisplacedSector, n: usize, b: DisplacedSector, params: &SystemParams) -> f64 {
    displaced_overlap(m, n, a.displacement(params) - b.displacement(params))
}

/// Table `⟨m_a|n_b⟩` for `m, n ≤ max_level`.
pub fn sector_overlap_table(a: DisplacedSector, b: DisplacedSector, max_level: usize, params: &SystemParams) -> Mat<f64> {
    Mat::from_fn(max_level + 1, max_level + 1, |m, n| sector_overlap(m, a, n, b, params))
}

/// `l = e^{-2λ²/w0²} L_n(4λ²/w0²)`, the overlap of level `n` in neighbouring
/// sectors.
pub fn l_factor(n: usize, params: &SystemParams) -> f64 {
    let r = params.lambda() / params.w0();
    (-2.0 * r * r).exp() * laguerre_assoc(n, 0, 4.0 * r * r)
}

/// Projection of H onto Γ for oscillator level `n`.
#[derive(Debug, Clone)]
pub struct EffectiveQubitBlock {
    pub n: usize,
    pub matrix: DenseHermitianOperator,
    pub l_factor: f64,
    params: SystemParams,
}

impl EffectiveQubitBlock {
    /// Ascending eigenvalues of the projected block.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        symmetric_eigenvalues(&self.matrix.real_part())
    }

    /// The block with the displaced-oscillator energies `n w0 - s²λ²/w0`
    /// removed from the diagonal: three independent qubits with gap
    /// `Δ l` and bias `ε`.
    pub fn qubit_part(&self) -> DenseHermitianOperator {
        let mut m = self.matrix.as_operator().clone();
        for (a, &q) in GAMMA_CONFIGS.iter().enumerate() {
            let e = sector_energy(DisplacedSector::of_config(q), self.n, &self.params);
            m.add_at(a, a, C64::new(-e, 0.0));
        }
        DenseHermitianOperator::new_unchecked(m)
    }
}

fn gamma_position(config: usize) -> usize {
    GAMMA_CONFIGS.iter().position(|&q| q == config).expect("valid configuration")
}

pub fn effective_qubit_block(n: usize, params: &SystemParams) -> EffectiveQubitBlock {
    let mut m = Operator::zeros(QUBIT_SPACE_DIM);
    let (delta, eps) = (params.delta(), params.epsilon());
    for (b, &q) in GAMMA_CONFIGS.iter().enumerate() {
        let sb = DisplacedSector::of_config(q);
        m.add_at(b, b, C64::new(sector_energy(sb, n, params) - 0.5 * eps * sb.label() as f64, 0.0));
        for j in 1..=N_QUBITS {
            let target = flip(q, j);
            let a = gamma_position(target);
            let overlap = sector_overlap(n, DisplacedSector::of_config(target), n, sb, params);
            m.add_at(a, b, C64::new(-0.5 * delta * overlap, 0.0));
        }
    }
    EffectiveQubitBlock {
        n,
        matrix: DenseHermitianOperator::symmetrized(&m),
        l_factor: l_factor(n, params),
        params: *params,
    }
}

/// Gram matrix of the eight Γ states for level `n`.
pub fn gamma_gram(n: usize, params: &SystemParams) -> Mat<f64> {
    Mat::from_fn(8, 8, |a, b| {
        let (qa, qb) = (GAMMA_CONFIGS[a], GAMMA_CONFIGS[b]);
        if qa != qb {
            return 0.0;
        }
        sector_overlap(n, DisplacedSector::of_config(qa), n, DisplacedSector::of_config(qb), params)
    })
}

/// Γ states of level `n` written in the composite basis, columns in Γ order.
/// Requires `params.n_max()` large enough to hold the displaced states.
pub fn gamma_states(n: usize, params: &SystemParams) -> Vec<Vec<C64>> {
    let n_max = params.n_max();
    GAMMA_CONFIGS
        .iter()
        .map(|&q| {
            let s = DisplacedSector::of_config(q);
            let mut v = vec![C64::new(0.0, 0.0); params.dim()];
            for m in 0..=n_max {
                // ⟨m|D(-d)|n⟩
                let amp = displaced_overlap(m, n, -s.displacement(params));
                v[composite_index(q, m, n_max)] = C64::new(amp, 0.0);
            }
            v
        })
        .collect()
}

/// Closed-form eigenvalues of the qubit part:
/// `±(Δ/2)·sqrt(l² + tan²θ)` and `±(3Δ/2)·sqrt(l² + tan²θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergies {
    pub plus1: f64,
    pub minus1: f64,
    pub plus3: f64,
    pub minus3: f64,
}

pub fn closed_form_energies(n: usize, params: &SystemParams) -> ClosedFormEnergies {
    let l = l_factor(n, params);
    let tan = params.epsilon() / params.delta();
    let half = 0.5 * params.delta() * (l * l + tan * tan).sqrt();
    ClosedFormEnergies { plus1: half, minus1: -half, plus3: 3.0 * half, minus3: -3.0 * half }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxLevel {
    pub energy: f64,
    /// Oscillator level of the block the value came from.
    pub n: usize,
    /// Degeneracy of the value within its block.
    pub multiplicity: usize,
}

/// The `k` lowest levels of the approximation: eigenvalues of the blocks
/// `n = 0, 1, 2, ...` merged and sorted.
///
/// Blocks are added until the Gershgorin lower bound of the next block,
/// `n w0 - 9λ²/w0 - 3(Δ + ε)/2`, exceeds the `k`-th collected value.
pub fn approx_low_spectrum(params: &SystemParams, k: usize) -> Result<Vec<ApproxLevel>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let r = params.lambda() / params.w0();
    let floor = -9.0 * r * r * params.w0() - 1.5 * (params.delta() + params.epsilon());
    let mut levels: Vec<ApproxLevel> = Vec::new();
    for n in 0.. {
        let bound = n as f64 * params.w0() + floor;
        if levels.len() >= k && bound > levels[k - 1].energy {
            break;
        }
        let values = effective_qubit_block(n, params).eigenvalues()?;
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for &e in &values {
            let multiplicity = values.iter().filter(|&&v| (v - e).abs() <= 1e-9 * scale).count();
            levels.push(ApproxLevel { energy: e, n, multiplicity });
        }
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    }
    levels.truncate(k);
    Ok(levels)
}

/// Approximate spectrum over a coupling grid in the exact-spectrum table
/// layout; `n_max_used` records the highest block level that entered.
pub fn approx_spectrum_sweep(params_base: &SystemParams, lambda_grid: &[f64], k: usize) -> Result<SpectrumTable> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("empty coupling grid".into()));
    }
    let mut levels = Vec::with_capacity(lambda_grid.len());
    let mut highest = 0;
    for &l in lambda_grid {
        let row = approx_low_spectrum(&params_base.with_lambda(l)?, k)?;
        highest = row.iter().map(|a| a.n).fold(highest, usize::max);
        levels.push(row.iter().map(|a| a.energy).collect());
    }
    Ok(SpectrumTable { lambda_grid: lambda_grid.to_vec(), levels, n_max_used: highest, params_base: *params_base })
}

pub const CSV_SOURCE: &str = "adiabatic_fast";

pub fn write_approx_csv(table: &SpectrumTable, path: &Path) -> Result<()> {
    write_text(path, &table.to_csv(Some(CSV_SOURCE)))
}
