//! Husimi Q and Wigner functions of the oscillator on a rectangular grid.
//!
//! Phase-space points are `α = X + iP` with the quadratures of
//! [`crate::hilbert::quadratures`], and both functions integrate to one over
//! `dX dP`:
//!
//! * `Q(α) = ⟨α|ρ|α⟩ / π`,
//! * `W(α) = (2/π) Tr[ρ D(α) Π D†(α)] = (2/π) Tr[ρ D(2α) Π]`, `Π = (-1)^{a†a}`.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::{csv_string, write_text};
use crate::operator::C64;
use crate::spectra::eigendecompose;
use crate::special::displacement_elements;

use super::density::DensityMatrix;

/// Captured Q mass below which the grid is considered too small.
pub const MIN_Q_MASS: f64 = 0.98;

/// Allowed deviation of the integrated Wigner function from one.
pub const WIGNER_NORM_TOL: f64 = 0.02;

/// Largest tolerated imaginary part of a Wigner value.
pub const WIGNER_IMAG_TOL: f64 = 1e-10;

/// Mixture weights below this are dropped from the phase-space sums.
const WEIGHT_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 201;
    pub const MAX_STEP: f64 = 0.1;

    /// Square grid `[-h, h]²` with `h = 3λ/w0 + 4`: wide enough for both
    /// displaced lobes plus a four-sigma vacuum margin. Uses 201 points per
    /// axis, more if needed to keep the step at or below 0.1.
    pub fn for_coupling(lambda: f64, w0: f64) -> Self {
        Self::square(3.0 * lambda / w0 + 4.0)
    }

    pub fn square(half_width: f64) -> Self {
        let needed = (2.0 * half_width / Self::MAX_STEP).ceil() as usize + 1;
        let n = needed.max(Self::DEFAULT_POINTS);
        Self { x_min: -half_width, x_max: half_width, p_min: -half_width, p_max: half_width, nx: n, np: n }
    }

    /// The same grid scaled about the origin, keeping the step.
    pub fn widened(&self, factor: f64) -> Self {
        let n = |count: usize| ((count - 1) as f64 * factor).ceil() as usize + 1;
        Self {
            x_min: self.x_min * factor,
            x_max: self.x_max * factor,
            p_min: self.p_min * factor,
            p_max: self.p_max * factor,
            nx: n(self.nx),
            np: n(self.np),
        }
    }

    pub fn x_values(&self) -> Vec<f64> {
        axis(self.x_min, self.x_max, self.nx)
    }

    pub fn p_values(&self) -> Vec<f64> {
        axis(self.p_min, self.p_max, self.np)
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 || !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err(Error::InvalidParameter(format!("degenerate phase-space grid {self:?}")));
        }
        Ok(())
    }
}

fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()
}

/// Real function sampled on a grid; `values[i][j]` belongs to
/// `(x_values[i], p_values[j])`.
#[derive(Debug, Clone)]
pub struct PhaseSpaceGrid {
    pub x_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl PhaseSpaceGrid {
    pub fn min(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn steps(&self) -> (f64, f64) {
        (self.x_values[1] - self.x_values[0], self.p_values[1] - self.p_values[0])
    }

    /// Trapezoidal `∫ f dP` at each `X`.
    pub fn marginal_x(&self) -> Vec<f64> {
        let (_, dp) = self.steps();
        self.values.iter().map(|row| trapezoid(row, dp)).collect()
    }

    /// Trapezoidal `∫∫ f dX dP`.
    pub fn integral(&self) -> f64 {
        let (dx, _) = self.steps();
        trapezoid(&self.marginal_x(), dx)
    }

    /// Long-form `X,P,value`, X outer and P inner.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self
            .x_values
            .iter()
            .zip(&self.values)
            .flat_map(|(&x, row)| self.p_values.iter().zip(row).map(move |(&p, &v)| vec![x, p, v]))
            .collect();
        csv_string(&["X", "P", "value"], &rows, None)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

fn trapezoid(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    step * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

/// Fock populations below this are cut from the top of the support.
const SUPPORT_CUTOFF: f64 = 1e-24;

/// `ρ = Σ_k p_k |v_k⟩⟨v_k|` with negligible weights dropped and the Fock
/// space cut after the last populated level, which keeps the per-point cost
/// of the phase-space sums proportional to the actual support.
fn mixture(rho: &DensityMatrix) -> Result<Vec<(f64, Vec<C64>)>> {
    let support = (0..rho.dim()).rev().find(|&n| rho.get(n, n).re > SUPPORT_CUTOFF).map_or(1, |n| n + 1);
    let eig = eigendecompose(rho.as_operator(), rho.dim())?;
    Ok(eig
        .values
        .into_iter()
        .zip(eig.vectors)
        .filter(|(p, _)| *p > WEIGHT_CUTOFF)
        .map(|(p, v)| {
            let mut a = v.into_amplitudes();
            a.truncate(support);
            (p, a)
        })
        .collect())
}

fn sample(spec: &GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> PhaseSpaceGrid {
    let x_values = spec.x_values();
    let p_values = spec.p_values();
    let values = x_values.par_iter().map(|&x| p_values.iter().map(|&p| f(x, p)).collect()).collect();
    PhaseSpaceGrid { x_values, p_values, values }
}

fn q_on_grid(components: &[(f64, Vec<C64>)], spec: &GridSpec) -> PhaseSpaceGrid {
    sample(spec, |x, p| {
        let alpha = C64::new(x, p);
        let dim = components[0].1.len();
        // coherent amplitudes ⟨n|α⟩
        let mut coh = Vec::with_capacity(dim);
        let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..dim {
            if n > 0 {
                c = c * alpha / (n as f64).sqrt();
            }
            coh.push(c);
        }
        components
            .iter()
            .map(|(w, v)| w * coh.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr())
            .sum::<f64>()
            / PI
    })
}

/// Husimi function of an oscillator state.
///
/// If the grid captures less than [`MIN_Q_MASS`] of the distribution it is
/// widened once by half; a second shortfall is an error.
pub fn q_function(rho_osc: &DensityMatrix, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    spec.validate()?;
    let components = mixture(rho_osc)?;
    let grid = q_on_grid(&components, spec);
    if grid.integral() >= MIN_Q_MASS {
        return Ok(grid);
    }
    let grid = q_on_grid(&components, &spec.widened(1.5));
    let mass = grid.integral();
    if mass < MIN_Q_MASS {
        return Err(Error::GridTooSmall { mass });
    }
    Ok(grid)
}

/// Wigner function by displaced parity.
///
/// The matrix elements `⟨m|D(2α)|n⟩` are the exact untruncated ones, so the
/// only truncation effect is the state itself. An integral that misses one
/// by more than [`WIGNER_NORM_TOL`] is reported with a suggested larger
/// truncation; an imaginary residue above [`WIGNER_IMAG_TOL`] is an error.
pub fn wigner_function(rho_osc: &DensityMatrix, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    spec.validate()?;
    let components = mixture(rho_osc)?;
    let dim = components[0].1.len();
    let x_values = spec.x_values();
    let p_values = spec.p_values();
    let rows: Vec<(Vec<f64>, f64)> = x_values
        .par_iter()
        .map(|&x| {
            let mut residue = 0.0f64;
            let row = p_values
                .iter()
                .map(|&p| {
                    let d = displacement_elements(C64::new(2.0 * x, 2.0 * p), dim);
                    let mut total = C64::new(0.0, 0.0);
                    for (w, v) in &components {
                        // ⟨v|D(2α)Π|v⟩
                        let mut s = C64::new(0.0, 0.0);
                        for (m, vm) in v.iter().enumerate() {
                            let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
                            let col: C64 = v.iter().enumerate().map(|(n, vn)| vn.conj() * d.get(n, m)).sum();
                            s += col * vm * parity;
                        }
                        total += s * *w;
                    }
                    residue = residue.max(total.im.abs());
                    2.0 / PI * total.re
                })
                .collect();
            (row, residue)
        })
        .collect();
    let residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if residue > WIGNER_IMAG_TOL {
        return Err(Error::InvalidState(format!("Wigner function has imaginary residue {residue:e}")));
    }
    let grid = PhaseSpaceGrid { x_values, p_values, values: rows.into_iter().map(|r| r.0).collect() };
    let drift = (grid.integral() - 1.0).abs();
    if drift > WIGNER_NORM_TOL {
        return Err(Error::NormalizationDrift { drift, suggested_n_max: 2 * rho_osc.dim() });
    }
    Ok(grid)
}

/// Oscillator eigenfunctions in the X representation,
/// `ψ_n(X) = 2^{1/4} h_n(√2 X)` with `h_n` the normalized Hermite functions.
pub fn hermite_functions(x: f64, count: usize) -> Vec<f64> {
    let u = std::f64::consts::SQRT_2 * x;
    let mut out = Vec::with_capacity(count);
    let norm = 2f64.powf(0.25);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * u * u).exp();
    for n in 0..count {
        out.push(norm * cur);
        let next = (2.0 / (n + 1) as f64).sqrt() * u * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// `⟨X|ρ|X⟩` at each point.
pub fn position_density(rho_osc: &DensityMatrix, xs: &[f64]) -> Result<Vec<f64>> {
    let components = mixture(rho_osc)?;
    let dim = components[0].1.len();
    Ok(xs
        .iter()
        .map(|&x| {
            let psi = hermite_functions(x, dim);
            components
                .iter()
                .map(|(w, v)| w * v.iter().zip(&psi).map(|(a, h)| a * *h).sum::<C64>().norm_sqr())
                .sum()
        })
        .collect())
}

/// Outcome of the cat-state test on a Wigner grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CatSignature {
    pub is_cat: bool,
    /// The two significant local maxima `(X, P, W)` farthest apart in X, if
    /// there are two.
    pub lobes: Option<[(f64, f64, f64); 2]>,
    /// Lowest value strictly between the two lobes in X.
    pub fringe_min: f64,
}

/// Minimum X separation of the two lobes.
pub const CAT_MIN_SEPARATION: f64 = 2.0;

/// Fringe depth relative to the global maximum.
pub const CAT_FRINGE_DEPTH: f64 = 0.01;

/// Local maxima below this fraction of `max W` are ripples, not lobes.
pub const CAT_LOBE_FRACTION: f64 = 0.25;

/// Two significant local maxima at least [`CAT_MIN_SEPARATION`] apart in X
/// with values below `-CAT_FRINGE_DEPTH · max W` somewhere between them.
///
/// The lobes are the outermost significant maxima rather than the two
/// highest: the central fringe of an even cat outgrows either lobe.
pub fn detect_cat(w: &PhaseSpaceGrid) -> CatSignature {
    let (nx, np) = (w.x_values.len(), w.p_values.len());
    let mut peaks: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..nx {
        for j in 0..np {
            let v = w.values[i][j];
            let mut is_peak = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a < 0 || b < 0 || a >= nx as i64 || b >= np as i64 {
                        continue;
                    }
                    let other = w.values[a as usize][b as usize];
                    // plateau ties go to the first point in scan order
                    if other > v || (other == v && (di, dj) < (0, 0)) {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push((w.x_values[i], w.p_values[j], v));
            }
        }
    }
    let threshold = CAT_LOBE_FRACTION * w.max();
    peaks.retain(|p| p.2 >= threshold);
    if peaks.len() < 2 {
        return CatSignature { is_cat: false, lobes: None, fringe_min: f64::NAN };
    }
    // outermost in X; among equal X the higher peak
    let a = *peaks.iter().min_by(|a, b| a.0.total_cmp(&b.0).then(b.2.total_cmp(&a.2))).unwrap();
    let b = *peaks.iter().max_by(|a, b| a.0.total_cmp(&b.0).then(a.2.total_cmp(&b.2))).unwrap();
    let (lo, hi) = (a.0, b.0);
    let fringe_min = w
        .x_values
        .iter()
        .zip(&w.values)
        .filter(|(&x, _)| x > lo && x < hi)
        .flat_map(|(_, row)| row.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let is_cat = hi - lo >= CAT_MIN_SEPARATION && fringe_min < -CAT_FRINGE_DEPTH * w.max();
    CatSignature { is_cat, lobes: Some([a, b]), fringe_min }
}
