use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::export::{format_number, write_text};
use crate::params::SystemParams;
use rayon::prelude::*;

use crate::error::Error;
use crate::spectra::{certify_truncation, in_pool};

use super::density::{concurrence, von_neumann_entropy, PartialTrace, Subsystem};
use super::ground::ground_state_of;
use super::phase_space::{detect_cat, q_function, wigner_function, CatSignature, GridSpec, PhaseSpaceGrid};
use super::squeezing_parameters;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Raise `n_max` until the lowest `k` levels converge to `rel_tol · w0`.
    pub certify: bool,
    pub k: usize,
    pub rel_tol: f64,
    /// Evaluate the Q and Wigner grids (the expensive part of a report).
    pub phase_space: bool,
    /// Grid override; defaults to [`GridSpec::for_coupling`].
    pub grid: Option<GridSpec>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { certify: true, k: 2, rel_tol: 1e-8, phase_space: true, grid: None }
    }
}

/// Every ground-state quantifier computed from one solve.
#[derive(Debug, Clone)]
pub struct GroundStateReport {
    /// Parameters actually used, including the certified `n_max`.
    pub params: SystemParams,
    pub ground_energy: f64,
    pub gap: f64,
    pub near_degenerate: bool,
    /// Entropy of the three-qubit reduced state, in bits.
    pub entropy_s: f64,
    /// Entropy of the oscillator reduced state; equals `entropy_s` for a pure state.
    pub entropy_osc: f64,
    /// Concurrence of qubits 2 and 3.
    pub concurrence_c: f64,
    /// Concurrences of the pairs (1,2), (1,3), (2,3).
    pub pair_concurrences: [f64; 3],
    pub s_x: f64,
    pub s_p: f64,
    pub k_uncertainty: f64,
    pub wigner_min: Option<f64>,
    pub q_grid: Option<PhaseSpaceGrid>,
    pub w_grid: Option<PhaseSpaceGrid>,
    pub cat: Option<CatSignature>,
}

pub fn build_report(params: &SystemParams) -> Result<GroundStateReport> {
    build_report_with(params, &ReportOptions::default())
}

pub fn build_report_with(params: &SystemParams, options: &ReportOptions) -> Result<GroundStateReport> {
    params.validate()?;
    let params = if options.certify {
        params.with_n_max(certify_truncation(params, options.k, options.rel_tol)?)?
    } else {
        *params
    };
    let ground = ground_state_of(&params)?;
    let psi = &ground.state;

    let rho_q = psi.partial_trace(Subsystem::Qubits)?;
    let rho_osc = psi.partial_trace(Subsystem::Oscillator)?;
    let entropy_s = von_neumann_entropy(&rho_q)?;
    let entropy_osc = von_neumann_entropy(&rho_osc)?;

    let mut pair_concurrences = [0.0; 3];
    for (slot, (i, j)) in [(1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
        pair_concurrences[slot] = concurrence(&rho_q.partial_trace(Subsystem::QubitPair(i, j))?)?;
    }

    let sq = squeezing_parameters(&rho_osc);

    let (q_grid, w_grid, wigner_min, cat) = if options.phase_space {
        let spec = options.grid.unwrap_or_else(|| GridSpec::for_coupling(params.lambda(), params.w0()));
        let q = q_function(&rho_osc, &spec)?;
        let w = wigner_function(&rho_osc, &spec)?;
        let cat = detect_cat(&w);
        let min = w.min();
        (Some(q), Some(w), Some(min), Some(cat))
    } else {
        (None, None, None, None)
    };

    Ok(GroundStateReport {
        ground_energy: ground.energy,
        gap: ground.gap,
        near_degenerate: ground.near_degenerate,
        entropy_s,
        entropy_osc,
        concurrence_c: pair_concurrences[2],
        pair_concurrences,
        s_x: sq.s_x,
        s_p: sq.s_p,
        k_uncertainty: sq.k,
        wigner_min,
        q_grid,
        w_grid,
        cat,
        params,
    })
}

/// Reports along a coupling grid, all at one truncation.
#[derive(Debug, Clone)]
pub struct ReportSweep {
    pub lambda_grid: Vec<f64>,
    pub reports: Vec<GroundStateReport>,
    pub n_max_used: usize,
}

/// One report per coupling in `lambda_grid` (ascending). With certification
/// on, `n_max` is certified once at the largest coupling and reused for every
/// point. Points run in parallel on `jobs` threads (default: all cores);
/// results come back in grid order.
pub fn report_sweep(
    params_base: &SystemParams,
    lambda_grid: &[f64],
    options: &ReportOptions,
    jobs: Option<usize>,
) -> Result<ReportSweep> {
    let Some(&lambda_max) = lambda_grid.last() else {
        return Err(Error::InvalidParameter("empty coupling grid".into()));
    };
    if lambda_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("coupling grid must be ascending".into()));
    }
    let n_max = if options.certify {
        certify_truncation(&params_base.with_lambda(lambda_max)?, options.k, options.rel_tol)?
    } else {
        params_base.n_max()
    };
    let base = params_base.with_n_max(n_max)?;
    let point = ReportOptions { certify: false, ..options.clone() };
    let reports = in_pool(jobs, || {
        lambda_grid.par_iter().map(|&l| build_report_with(&base.with_lambda(l)?, &point)).collect()
    })?;
    Ok(ReportSweep { lambda_grid: lambda_grid.to_vec(), reports, n_max_used: n_max })
}

/// Names accepted by [`GroundStateReport::scalar`].
pub const REPORT_SCALARS: [&str; 12] =
    ["E0", "gap", "S", "S_osc", "C", "C12", "C13", "C23", "s_x", "s_p", "K", "wigner_min"];

impl GroundStateReport {
    /// Scalar quantifier by its column name (see [`REPORT_SCALARS`]).
    pub fn scalar(&self, name: &str) -> Option<f64> {
        Some(match name {
            "E0" => self.ground_energy,
            "gap" => self.gap,
            "S" => self.entropy_s,
            "S_osc" => self.entropy_osc,
            "C" => self.concurrence_c,
            "C12" => self.pair_concurrences[0],
            "C13" => self.pair_concurrences[1],
            "C23" => self.pair_concurrences[2],
            "s_x" => self.s_x,
            "s_p" => self.s_p,
            "K" => self.k_uncertainty,
            "wigner_min" => return self.wigner_min,
            _ => return None,
        })
    }

    /// Largest difference between the three pair concurrences.
    pub fn pair_spread(&self) -> f64 {
        let c = self.pair_concurrences;
        let max = c.iter().copied().fold(f64::MIN, f64::max);
        let min = c.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }

    /// `key = value` lines, one scalar per line, in a fixed order.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("delta", format_number(p.delta()));
        line("epsilon", format_number(p.epsilon()));
        line("w0", format_number(p.w0()));
        line("lambda", format_number(p.lambda()));
        line("n_max", p.n_max().to_string());
        line("ground_energy", format_number(self.ground_energy));
        line("gap", format_number(self.gap));
        line("near_degenerate", self.near_degenerate.to_string());
        line("entropy_S", format_number(self.entropy_s));
        line("entropy_osc", format_number(self.entropy_osc));
        line("concurrence_C", format_number(self.concurrence_c));
        line("concurrence_12", format_number(self.pair_concurrences[0]));
        line("concurrence_13", format_number(self.pair_concurrences[1]));
        line("concurrence_23", format_number(self.pair_concurrences[2]));
        line("s_x", format_number(self.s_x));
        line("s_p", format_number(self.s_p));
        line("K_uncertainty", format_number(self.k_uncertainty));
        if let Some(w) = self.wigner_min {
            line("wigner_min", format_number(w));
        }
        if let Some(cat) = &self.cat {
            line("cat_like", cat.is_cat.to_string());
        }
        out
    }

    /// Write `<stem>_report.txt` and, when present, `<stem>_q.csv` and
    /// `<stem>_wigner.csv` into `dir`. Returns the paths written.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let report = dir.join(format!("{stem}_report.txt"));
        write_text(&report, &self.to_text())?;
        written.push(report);
        if let Some(q) = &self.q_grid {
            let path = dir.join(format!("{stem}_q.csv"));
            q.write_csv(&path)?;
            written.push(path);
        }
        if let Some(w) = &self.w_grid {
            let path = dir.join(format!("{stem}_wigner.csv"));
            w.write_csv(&path)?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ReportOptions {
        ReportOptions { grid: Some(GridSpec { x_min: -4.0, x_max: 4.0, p_min: -4.0, p_max: 4.0, nx: 81, np: 81 }), ..ReportOptions::default() }
    }

    #[test]
    fn decoupled_report() {
        let p = SystemParams::from_gap_ratio(0.1, 0.0, 0.0, 20).unwrap();
        let r = build_report_with(&p, &quick()).unwrap();
        assert!(r.entropy_s.abs() < 1e-10 && r.concurrence_c.abs() < 1e-10, "{}", r.to_text());
        assert!(r.s_x.abs() < 1e-10 && r.s_p.abs() < 1e-10);
        assert!(r.wigner_min.unwrap() > 0.0);
        assert!(!r.cat.unwrap().is_cat);
    }

    #[test]
    fn invariants_hold_at_moderate_coupling() {
        for &(ratio, theta, lambda) in &[(0.1, 0.0, 0.6), (1.0, 0.0, 0.7), (1.0, 0.5, 0.9), (10.0, 0.0, 0.15)] {
            let p = SystemParams::from_gap_ratio(ratio, theta, lambda, 40).unwrap();
            let r = build_report_with(&p, &ReportOptions { phase_space: false, ..quick() }).unwrap();
            assert!((0.0..=3.0).contains(&r.entropy_s));
            assert!((0.0..=1.0).contains(&r.concurrence_c));
            assert!(r.s_x >= -1.0 && r.s_p >= -1.0);
            assert!(r.k_uncertainty >= 0.25 - 1e-9);
            assert!((r.entropy_s - r.entropy_osc).abs() < 1e-8);
            assert!(r.pair_spread() < 1e-10, "spread {}", r.pair_spread());
        }
    }

    #[test]
    fn sweep_matches_pointwise_reports() {
        let base = SystemParams::from_gap_ratio(1.0, 0.0, 0.0, 30).unwrap();
        let grid = [0.0, 0.4, 0.8];
        let opts = ReportOptions { certify: false, phase_space: false, ..ReportOptions::default() };
        let sweep = report_sweep(&base, &grid, &opts, Some(2)).unwrap();
        assert_eq!(sweep.n_max_used, 30);
        for (r, &l) in sweep.reports.iter().zip(&grid) {
            let single = build_report_with(&base.with_lambda(l).unwrap(), &opts).unwrap();
            for name in REPORT_SCALARS {
                assert_eq!(r.scalar(name), single.scalar(name), "{name} at {l}");
            }
        }
        assert!(report_sweep(&base, &[0.5, 0.1], &opts, None).is_err());
    }

    #[test]
    fn text_export_is_key_value() {
        let p = SystemParams::from_gap_ratio(1.0, 0.0, 0.3, 20).unwrap();
        let r = build_report_with(&p, &ReportOptions { phase_space: false, ..quick() }).unwrap();
        let text = r.to_text();
        assert!(text.lines().all(|l| l.split(" = ").count() == 2));
        assert!(text.contains("entropy_S = "));
        assert!(!text.contains("wigner_min"));
    }
}
