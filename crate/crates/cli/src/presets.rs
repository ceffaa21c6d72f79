//! Experiment presets, one per published panel.
//!
//! Every preset fixes the oscillator quantum `w0 = 1` and states the qubit
//! parameters either through `w0/E_q` (spectrum figures, where `E_q` is held
//! fixed and θ splits it into Δ = E_q cos θ, ε = E_q sin θ) or through `w0/Δ`
//! (ground-state figures, where Δ is held fixed and ε = Δ tan θ).

use std::f64::consts::PI;

use dicke_core::adiabatic_slow::{critical_coupling, Branch};
use dicke_core::spectra::linspace;
use dicke_core::{Result, SystemParams};

/// How the qubit parameters of a preset are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    OscillatorToQubit { w0_over_eq: f64 },
    OscillatorToGap { w0_over_delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Portrait {
    Husimi,
    Wigner,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    /// Lowest `k` levels along the coupling grid.
    Spectrum { k: usize },
    /// Ground-state report at a single coupling, with one phase-space portrait.
    PhaseSpace { portrait: Portrait },
    /// Ground-state scalars along the coupling grid, written as `<preset>_<quantity>.csv`.
    Scalars { quantity: &'static str, columns: &'static [&'static str] },
    /// Spectrum and every scalar along a grid, or a full report at one coupling.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// `steps` couplings from `min` to `max`, in units of `w0`.
    Absolute { min: f64, max: f64, steps: usize },
    /// The same, in units of the critical coupling of the −3 branch.
    Critical { min: f64, max: f64, steps: usize },
    Single(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub ratio: Ratio,
    pub theta: f64,
    pub task: Task,
    pub grid: Grid,
}

const SQUEEZING: &[&str] = &["s_x", "s_p", "K"];
const ENTROPY: &[&str] = &["S"];
const CONCURRENCE: &[&str] = &["C"];

const THETAS: [f64; 3] = [0.0, PI / 6.0, PI / 3.0];
const GAP_RATIOS: [f64; 3] = [0.1, 1.0, 10.0];
const FIG6_COUPLINGS: [f64; 3] = [0.5, 1.0, 1.25];

/// Coupling range of the ground-state sweeps for a given `w0/Δ`.
fn gs_grid(w0_over_delta: f64) -> Grid {
    if w0_over_delta >= 10.0 {
        Grid::Absolute { min: 0.0, max: 1.0, steps: 41 }
    } else {
        Grid::Absolute { min: 0.0, max: 2.5, steps: 51 }
    }
}

fn letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Every named preset, in figure order.
pub fn all() -> Vec<Preset> {
    let mut out = Vec::new();
    let spectrum = [(3, 1.0, 13, 2.0), (4, 10.0, 8, 2.0), (5, 0.01, 8, 4.5)];
    for (fig, w0_over_eq, k, max) in spectrum {
        for (i, theta) in THETAS.into_iter().enumerate() {
            out.push(Preset {
                name: format!("fig{fig}{}", letter(i)),
                ratio: Ratio::OscillatorToQubit { w0_over_eq },
                theta,
                task: Task::Spectrum { k },
                grid: Grid::Absolute { min: 0.0, max, steps: 46 },
            });
        }
    }
    for (i, portrait) in [Portrait::Husimi, Portrait::Wigner].into_iter().enumerate() {
        for (j, lambda) in FIG6_COUPLINGS.into_iter().enumerate() {
            out.push(Preset {
                name: format!("fig6{}", letter(3 * i + j)),
                ratio: Ratio::OscillatorToGap { w0_over_delta: 0.1 },
                theta: 0.0,
                task: Task::PhaseSpace { portrait },
                grid: Grid::Single(lambda),
            });
        }
    }
    let scalar_figs = [(7, "squeezing", SQUEEZING), (8, "entropy", ENTROPY), (9, "concurrence", CONCURRENCE)];
    for (fig, quantity, columns) in scalar_figs {
        for (i, w0_over_delta) in GAP_RATIOS.into_iter().enumerate() {
            out.push(Preset {
                name: format!("fig{fig}{}", letter(i)),
                ratio: Ratio::OscillatorToGap { w0_over_delta },
                theta: 0.0,
                task: Task::Scalars { quantity, columns },
                grid: gs_grid(w0_over_delta),
            });
        }
    }
    out.push(Preset {
        name: "fig8d".into(),
        ratio: Ratio::OscillatorToGap { w0_over_delta: 0.01 },
        theta: 0.0,
        task: Task::Scalars { quantity: "entropy", columns: ENTROPY },
        grid: Grid::Critical { min: 0.0, max: 1.6, steps: 33 },
    });
    out.push(Preset {
        name: "custom".into(),
        ratio: Ratio::OscillatorToGap { w0_over_delta: 1.0 },
        theta: 0.0,
        task: Task::Custom,
        grid: Grid::Single(0.0),
    });
    out
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|p| p.name).collect()
}

impl Preset {
    /// `(Δ, ε, w0)` of the preset.
    pub fn qubit_parameters(&self) -> (f64, f64, f64) {
        match self.ratio {
            Ratio::OscillatorToQubit { w0_over_eq } => {
                let e_q = 1.0 / w0_over_eq;
                (e_q * self.theta.cos(), e_q * self.theta.sin(), 1.0)
            }
            Ratio::OscillatorToGap { w0_over_delta } => {
                let delta = 1.0 / w0_over_delta;
                (delta, delta * self.theta.tan(), 1.0)
            }
        }
    }
}

/// Couplings of a grid for the given parameters (critical grids need Δ and w0).
pub fn couplings(grid: &Grid, params: &SystemParams) -> Result<Vec<f64>> {
    Ok(match *grid {
        Grid::Absolute { min, max, steps } => linspace(min, max, steps),
        Grid::Critical { min, max, steps } => {
            let lc = critical_coupling(Branch::Minus3, &params.with_epsilon(0.0)?).unwrap_or(f64::NAN);
            linspace(min * lc, max * lc, steps)
        }
        Grid::Single(l) => vec![l],
    })
}
