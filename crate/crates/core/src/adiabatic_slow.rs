//! Fast-qubit adiabatic approximation.
//!
//! At a frozen oscillator quadrature `X` every qubit sees
//! `-(Δ/2)σx + (2λX - ε/2)σz`, so the three-qubit energies are
//! `c·R(X)` with `R = sqrt(Δ²/4 + (2λX - ε/2)²)` and `c ∈ {-3, -1, +1, +3}`
//! (multiplicities 1, 3, 3, 1). Adding the oscillator potential gives the
//! branch potentials
//!
//! ```text
//! V_c(X) = w0 X² + c R(X)
//! ```
//!
//! Positions are the dimensionless quadrature `X = (a + a†)/2`; the
//! mechanical coordinate and raw coupling only ever enter as `gx = 2λX` and
//! `½ m w0² x² = w0 X²`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::export::{csv_string, write_text};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus3,
    Minus1,
    Plus1,
    Plus3,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::Minus3, Branch::Minus1, Branch::Plus1, Branch::Plus3];

    /// Signed coefficient of `R(X)`.
    pub fn label(self) -> i32 {
        match self {
            Branch::Minus3 => -3,
            Branch::Minus1 => -1,
            Branch::Plus1 => 1,
            Branch::Plus3 => 3,
        }
    }

    pub fn multiplicity(self) -> usize {
        match self {
            Branch::Minus3 | Branch::Plus3 => 1,
            Branch::Minus1 | Branch::Plus1 => 3,
        }
    }

    fn c(self) -> f64 {
        self.label() as f64
    }
}

fn lever(x: f64, p: &SystemParams) -> f64 {
    2.0 * p.lambda() * x - 0.5 * p.epsilon()
}

fn radius(x: f64, p: &SystemParams) -> f64 {
    (0.25 * p.delta() * p.delta() + lever(x, p).powi(2)).sqrt()
}

/// Branch energies `(E_-3, E_-1, E_+1, E_+3)` of the qubits at quadrature `x`.
pub fn qubit_branch_energies(x: f64, params: &SystemParams) -> [f64; 4] {
    let r = radius(x, params);
    [-3.0 * r, -r, r, 3.0 * r]
}

pub fn effective_potential(x: f64, branch: Branch, params: &SystemParams) -> f64 {
    params.w0() * x * x + branch.c() * radius(x, params)
}

/// `dV/dX`.
pub fn potential_gradient(x: f64, branch: Branch, params: &SystemParams) -> f64 {
    2.0 * params.w0() * x + branch.c() * 2.0 * params.lambda() * lever(x, params) / radius(x, params)
}

/// `d²V/dX² = 2 w0 + c λ² Δ² / R³`.
pub fn potential_curvature(x: f64, branch: Branch, params: &SystemParams) -> f64 {
    let (l, d) = (params.lambda(), params.delta());
    2.0 * params.w0() + branch.c() * l * l * d * d / radius(x, params).powi(3)
}

/// Second-order expansion about `X = 0` for `E_q ≫ 2λ|X|`:
/// `V ≈ (w̃²/w0)(X - shift)² + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicExpansion {
    /// `w̃² = w0² + 4 c λ² w0 / E_q`.
    pub renorm_freq_sq: f64,
    /// `c ε λ w0 / (w̃² E_q)`.
    pub shift: f64,
    /// `c E_q / 2`.
    pub offset: f64,
}

pub fn harmonic_expansion(branch: Branch, params: &SystemParams) -> HarmonicExpansion {
    let (w0, l, eq, c) = (params.w0(), params.lambda(), params.e_q(), branch.c());
    let renorm_freq_sq = w0 * w0 + 4.0 * c * l * l * w0 / eq;
    HarmonicExpansion {
        renorm_freq_sq,
        // at the threshold itself the unbiased shift stays at the origin
        shift: if params.epsilon() == 0.0 { 0.0 } else { c * params.epsilon() * l * w0 / (renorm_freq_sq * eq) },
        offset: 0.5 * c * eq,
    }
}

pub fn harmonic_potential(x: f64, branch: Branch, params: &SystemParams) -> f64 {
    let h = harmonic_expansion(branch, params);
    h.renorm_freq_sq / params.w0() * (x - h.shift).powi(2) + h.offset
}

/// Coupling at which `w̃²` of a lower branch vanishes: `sqrt(w0 E_q / 12)`
/// for `-3`, `sqrt(w0 E_q / 4)` for `-1`; upper branches never soften.
pub fn critical_coupling(branch: Branch, params: &SystemParams) -> Option<f64> {
    let base = params.w0() * params.e_q();
    match branch {
        Branch::Minus3 => Some((base / 12.0).sqrt()),
        Branch::Minus1 => Some((base / 4.0).sqrt()),
        Branch::Plus1 | Branch::Plus3 => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellGeometry {
    pub minima_locations: Vec<f64>,
    /// `V(X_min) - V(0)`.
    pub minima_depths: Vec<f64>,
    /// `d²V/dX²` at each minimum.
    pub curvature_at_minima: Vec<f64>,
    pub critical_lambda: Option<f64>,
    pub is_double_well: bool,
}

impl WellGeometry {
    /// Lowest potential value among the minima.
    pub fn min_potential(&self, branch: Branch, params: &SystemParams) -> f64 {
        self.minima_locations
            .iter()
            .map(|&x| effective_potential(x, branch, params))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Minima of a branch potential.
///
/// At `ε = 0` the minima solve `R = 2|c|λ²/w0` in closed form:
/// `X² = c²λ²/w0² - Δ²/(16λ²)` above threshold, `X = 0` otherwise. For
/// `ε > 0` they are located numerically (see [`numerical_minima`]).
pub fn well_geometry(branch: Branch, params: &SystemParams) -> WellGeometry {
    let minima = if params.is_unbiased() { analytic_minima(branch, params) } else { numerical_minima(branch, params) };
    let v0 = effective_potential(0.0, branch, params);
    WellGeometry {
        minima_depths: minima.iter().map(|&x| effective_potential(x, branch, params) - v0).collect(),
        curvature_at_minima: minima.iter().map(|&x| potential_curvature(x, branch, params)).collect(),
        critical_lambda: critical_coupling(branch, params),
        is_double_well: minima.len() == 2,
        minima_locations: minima,
    }
}

fn analytic_minima(branch: Branch, params: &SystemParams) -> Vec<f64> {
    let (w0, l, d, c) = (params.w0(), params.lambda(), params.delta(), branch.c());
    if c > 0.0 || l == 0.0 {
        return vec![0.0];
    }
    let x2 = c * c * l * l / (w0 * w0) - d * d / (16.0 * l * l);
    if x2 <= 0.0 {
        return vec![0.0];
    }
    let x = x2.sqrt();
    vec![-x, x]
}

const GOLDEN_TOL: f64 = 1e-12;

/// Golden-section search for the minimum of a function unimodal on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c == d {
            break;
        }
    }
    0.5 * (a + b)
}

/// Minima located by golden-section search on each convex segment.
///
/// `V'' = 2w0 + cλ²Δ²/R³` changes sign only where `R³ = |c|λ²Δ²/(2w0)`,
/// which gives at most two inflection points around the hyperbola vertex
/// `X_v = ε/(4λ)`. Outside them `V` is convex and holds at most one minimum
/// each; the whole line is convex when the inflections do not exist.
/// `|V' - 2w0X| ≤ 2|c|λ` bounds every minimum to `|X| ≤ |c|λ/w0`. The
/// golden-section result is polished with a few Newton steps on `V'`,
/// because function values alone cannot resolve `X` past about 1e-8 at a
/// flat minimum.
pub fn numerical_minima(branch: Branch, params: &SystemParams) -> Vec<f64> {
    let (w0, l, d, c) = (params.w0(), params.lambda(), params.delta(), branch.c());
    let reach = c.abs() * l / w0 + 1.0;
    let (lo, hi) = (-reach, reach);
    let v = |x: f64| effective_potential(x, branch, params);
    let grad = |x: f64| potential_gradient(x, branch, params);

    let mut segments = Vec::new();
    let inflection_r3 = -c * l * l * d * d / (2.0 * w0);
    let half_gap_sq = 0.25 * d * d;
    let inflections = if c < 0.0 && l > 0.0 && inflection_r3.powf(2.0 / 3.0) > half_gap_sq {
        let u = (inflection_r3.powf(2.0 / 3.0) - half_gap_sq).sqrt();
        let vertex = params.epsilon() / (4.0 * l);
        Some((vertex - u / (2.0 * l), vertex + u / (2.0 * l)))
    } else {
        None
    };
    match inflections {
        Some((x1, x2)) => {
            if grad(x1) > 0.0 {
                segments.push((lo.min(x1 - 1.0), x1));
            }
            if grad(x2) < 0.0 {
                segments.push((x2, hi.max(x2 + 1.0)));
            }
        }
        None => segments.push((lo, hi)),
    }

    segments
        .into_iter()
        .map(|(a, b)| {
            let mut x = golden_section(v, a, b);
            for _ in 0..4 {
                let curv = potential_curvature(x, branch, params);
                if curv <= 0.0 {
                    break;
                }
                let step = grad(x) / curv;
                let next = (x - step).clamp(a, b);
                if (next - x).abs() < 1e-15 * x.abs().max(1.0) {
                    x = next;
                    break;
                }
                x = next;
            }
            x
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellEntry {
    pub branch: Branch,
    pub location: f64,
    /// `V(X_min)`.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricWellReport {
    /// Minima of the `-3` and `-1` branches, lowest energy first.
    pub wells: Vec<WellEntry>,
}

impl AsymmetricWellReport {
    /// The energetically favoured well.
    pub fn favored(&self) -> WellEntry {
        self.wells[0]
    }
}

/// Numerically located minima of the two lower branches, sorted by energy.
/// For `ε > 0` the favoured well sits at `X < 0`; the mirror case `ε < 0`
/// follows from the symmetry `X → -X, ε → -ε`.
pub fn asymmetric_well_report(params: &SystemParams) -> AsymmetricWellReport {
    let mut wells: Vec<WellEntry> = [Branch::Minus3, Branch::Minus1]
        .into_iter()
        .flat_map(|b| {
            numerical_minima(b, params)
                .into_iter()
                .map(move |x| WellEntry { branch: b, location: x, energy: effective_potential(x, b, params) })
        })
        .collect();
    wells.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    AsymmetricWellReport { wells }
}

/// Harmonic quantization of the lowest well: `min_c [V_min + ω/2] - w0/2`
/// with `ω = sqrt(κ w0 / 2)` for curvature `κ` in X units. The `-w0/2`
/// removes the zero-point energy that the exact Hamiltonian omits.
pub fn harmonic_ground_estimate(params: &SystemParams) -> f64 {
    let w0 = params.w0();
    Branch::ALL
        .iter()
        .filter_map(|&b| {
            let g = well_geometry(b, params);
            g.minima_locations
                .iter()
                .zip(&g.curvature_at_minima)
                .filter(|(_, &k)| k > 0.0)
                .map(|(&x, &k)| effective_potential(x, b, params) + 0.5 * (k * w0 / 2.0).sqrt())
                .reduce(f64::min)
        })
        .fold(f64::INFINITY, f64::min)
        - 0.5 * w0
}

/// Sampled branch potential with its geometry.
#[derive(Debug, Clone)]
pub struct EffectivePotentialProfile {
    pub branch: Branch,
    pub x_grid: Vec<f64>,
    pub v_values: Vec<f64>,
    pub params: SystemParams,
    pub geometry: WellGeometry,
}

impl EffectivePotentialProfile {
    pub fn sample(branch: Branch, params: &SystemParams, x_grid: &[f64]) -> Self {
        Self {
            branch,
            x_grid: x_grid.to_vec(),
            v_values: x_grid.iter().map(|&x| effective_potential(x, branch, params)).collect(),
            params: *params,
            geometry: well_geometry(branch, params),
        }
    }
}

/// All four branches on a common grid, in the order `-3, -1, +1, +3`.
pub fn potential_profiles(params: &SystemParams, x_grid: &[f64]) -> [EffectivePotentialProfile; 4] {
    Branch::ALL.map(|b| EffectivePotentialProfile::sample(b, params, x_grid))
}

/// `X,V_minus3,V_minus1,V_plus1,V_plus3`.
pub fn profiles_csv(profiles: &[EffectivePotentialProfile; 4]) -> Result<String> {
    let grid = &profiles[0].x_grid;
    if profiles.iter().any(|p| &p.x_grid != grid) {
        return Err(Error::InvalidParameter("profiles must share one X grid".into()));
    }
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| std::iter::once(x).chain(profiles.iter().map(|p| p.v_values[i])).collect())
        .collect();
    Ok(csv_string(&["X", "V_minus3", "V_minus1", "V_plus1", "V_plus3"], &rows, None))
}

pub fn write_profiles_csv(profiles: &[EffectivePotentialProfile; 4], path: &Path) -> Result<()> {
    write_text(path, &profiles_csv(profiles)?)
}
