use std::path::PathBuf;
use std::time::Instant;

use dicke_core::adiabatic_fast::approx_spectrum_sweep;
use dicke_core::adiabatic_slow::{critical_coupling, harmonic_ground_estimate, Branch};
use dicke_core::diagnostics::{build_report_with, report_sweep, GroundStateReport, ReportOptions, REPORT_SCALARS};
use dicke_core::spectra::{degeneracy_profile, spectrum_sweep_with, SweepOptions, DEFAULT_DEGENERACY_TOL};
use dicke_core::{Error, Result, SystemParams};

use crate::output::{update_manifest, versions, ArtifactWriter, Format, Inputs, RunRecord, Table, Truncation};
use crate::presets::{couplings, Portrait, Preset, Task};

/// Convergence target of every certified truncation, in units of `w0`.
pub const REL_TOL: f64 = 1e-8;

/// Levels compared by default in `compare`.
pub const DEFAULT_COMPARE_LEVELS: usize = 8;

/// Levels in the spectrum of a custom sweep.
const CUSTOM_LEVELS: usize = 8;

/// Errors in the command line itself, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: Preset,
    /// Qubit and oscillator parameters; the coupling is taken from `grid`.
    pub params: SystemParams,
    pub grid: Vec<f64>,
    /// Fixed truncation; `None` certifies one.
    pub n_max: Option<usize>,
    pub out_dir: PathBuf,
    pub format: Format,
    pub jobs: Option<usize>,
}

/// Parameter overrides shared by `run` and `compare`.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub w0: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub n_max: Option<usize>,
    pub sweep: Option<(f64, f64, usize)>,
}

/// Parse `min:max:steps`.
pub fn parse_sweep(s: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, steps] = parts.as_slice() else {
        return Err(format!("expected min:max:steps, got '{s}'"));
    };
    let min: f64 = min.trim().parse().map_err(|_| format!("bad sweep minimum '{min}'"))?;
    let max: f64 = max.trim().parse().map_err(|_| format!("bad sweep maximum '{max}'"))?;
    let steps: usize = steps.trim().parse().map_err(|_| format!("bad sweep step count '{steps}'"))?;
    if steps < 2 {
        return Err("a sweep needs at least 2 steps".into());
    }
    if !(min.is_finite() && max.is_finite() && min <= max && min >= 0.0) {
        return Err(format!("sweep range must satisfy 0 <= min <= max, got {min}:{max}"));
    }
    Ok((min, max, steps))
}

impl ExperimentConfig {
    pub fn resolve(
        preset: Preset,
        o: &Overrides,
        out_dir: PathBuf,
        format: Format,
        jobs: Option<usize>,
    ) -> std::result::Result<Self, UsageError> {
        let usage = |e: Error| UsageError(e.to_string());
        let (mut delta, mut epsilon, mut w0) = preset.qubit_parameters();
        if let Some(d) = o.delta {
            delta = d;
        }
        if let Some(w) = o.w0 {
            w0 = w;
        }
        if let Some(t) = o.theta {
            epsilon = delta * t.tan();
        }
        if let Some(e) = o.epsilon {
            epsilon = e;
        }
        let n_max = o.n_max.unwrap_or(SystemParams::DEFAULT_N_MAX);
        let params = SystemParams::new(delta, epsilon, w0, 0.0, n_max).map_err(usage)?;

        let grid = match (o.sweep, o.lambda) {
            (Some((min, max, steps)), _) => dicke_core::spectra::linspace(min, max, steps),
            (None, Some(l)) => vec![l],
            (None, None) => couplings(&preset.grid, &params).map_err(usage)?,
        };
        if grid.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(UsageError(format!("couplings must be finite and non-negative: {grid:?}")));
        }
        if matches!(preset.task, Task::PhaseSpace { .. }) && grid.len() != 1 {
            return Err(UsageError(format!("preset {} evaluates a single coupling; drop --sweep", preset.name)));
        }
        if jobs == Some(0) {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        Ok(Self { preset, params, grid, n_max: o.n_max, out_dir, format, jobs })
    }

    fn report_options(&self, phase_space: bool) -> ReportOptions {
        ReportOptions { certify: self.n_max.is_none(), rel_tol: REL_TOL, phase_space, ..ReportOptions::default() }
    }

    fn inputs(&self, k: Option<usize>) -> Inputs {
        let p = &self.params;
        Inputs { delta: p.delta(), epsilon: p.epsilon(), w0: p.w0(), theta: p.theta(), lambda_grid: self.grid.clone(), k }
    }
}

/// Critical coupling of the −3 branch at zero bias (`NaN` if undefined).
fn lambda_c(params: &SystemParams) -> f64 {
    params.with_epsilon(0.0).ok().and_then(|p| critical_coupling(Branch::Minus3, &p)).unwrap_or(f64::NAN)
}

fn scalar_table(reports: &[GroundStateReport], grid: &[f64], columns: &[&str], lc: f64) -> Table {
    let mut names = vec!["lambda".to_string(), "lambda_over_lambda_c".to_string()];
    names.extend(columns.iter().map(|c| c.to_string()));
    let rows = reports
        .iter()
        .zip(grid)
        .map(|(r, &l)| {
            let mut row = vec![l, l / lc];
            row.extend(columns.iter().map(|c| r.scalar(c).unwrap_or(f64::NAN)));
            row
        })
        .collect();
    Table { columns: names, rows }
}

fn report_document(report: &GroundStateReport, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(report.to_text()),
        Format::Json => {
            let mut map = serde_json::Map::new();
            for line in report.to_text().lines() {
                if let Some((k, v)) = line.split_once(" = ") {
                    let value = match v {
                        "true" => serde_json::Value::Bool(true),
                        "false" => serde_json::Value::Bool(false),
                        _ => v.parse::<f64>().map(serde_json::Value::from).unwrap_or_else(|_| v.into()),
                    };
                    map.insert(k.to_string(), value);
                }
            }
            crate::output::to_json(&map)
        }
    }
}

/// Execute a `run` and return the files written (relative to the output directory).
pub fn run(config: &ExperimentConfig) -> Result<Vec<String>> {
    let start = Instant::now();
    let name = config.preset.name.clone();
    let mut out = ArtifactWriter::new(&config.out_dir, &name, config.format);
    let certified = config.n_max.is_none();
    let mut degeneracies = None;
    let mut k_levels = None;

    let (task, n_max_used) = match &config.preset.task {
        Task::Spectrum { k } => {
            let n = spectrum(config, *k, &mut out, &mut degeneracies)?;
            k_levels = Some(*k);
            ("spectrum", n)
        }
        Task::PhaseSpace { portrait } => {
            let report = build_report_with(&config.params.with_lambda(config.grid[0])?, &config.report_options(true))?;
            out.text(&format!("{name}_report.{}", ext_report(config.format)), &report_document(&report, config.format)?)?;
            let (quantity, grid) = match portrait {
                Portrait::Husimi => ("q", report.q_grid.as_ref()),
                Portrait::Wigner => ("wigner", report.w_grid.as_ref()),
            };
            out.table(quantity, &Table::from_grid(grid.expect("phase-space grids requested")))?;
            ("phase_space", report.params.n_max())
        }
        Task::Scalars { quantity, columns } => {
            let sweep = report_sweep(&config.params, &config.grid, &config.report_options(false), config.jobs)?;
            out.table(quantity, &scalar_table(&sweep.reports, &config.grid, columns, lambda_c(&config.params)))?;
            ("scalars", sweep.n_max_used)
        }
        Task::Custom if config.grid.len() == 1 => {
            let report = build_report_with(&config.params.with_lambda(config.grid[0])?, &config.report_options(true))?;
            out.text(&format!("{name}_report.{}", ext_report(config.format)), &report_document(&report, config.format)?)?;
            out.table("q", &Table::from_grid(report.q_grid.as_ref().expect("requested")))?;
            out.table("wigner", &Table::from_grid(report.w_grid.as_ref().expect("requested")))?;
            ("report", report.params.n_max())
        }
        Task::Custom => {
            let n = spectrum(config, CUSTOM_LEVELS, &mut out, &mut degeneracies)?;
            k_levels = Some(CUSTOM_LEVELS);
            let columns: Vec<&str> = REPORT_SCALARS.iter().copied().filter(|c| *c != "wigner_min").collect();
            let sweep = report_sweep(&config.params, &config.grid, &config.report_options(false), config.jobs)?;
            out.table("scalars", &scalar_table(&sweep.reports, &config.grid, &columns, lambda_c(&config.params)))?;
            ("sweep", n.max(sweep.n_max_used))
        }
    };

    let record = RunRecord {
        command: "run".into(),
        task: task.into(),
        inputs: config.inputs(k_levels),
        truncation: Truncation { n_max: n_max_used, certified, rel_tol: REL_TOL },
        degeneracy_tolerance: DEFAULT_DEGENERACY_TOL,
        degeneracies_at_first_coupling: degeneracies,
        format: config.format,
        files: out.written.clone(),
        versions: versions(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    update_manifest(&config.out_dir, &name, &record)?;
    Ok(out.written)
}

fn ext_report(format: Format) -> &'static str {
    match format {
        Format::Csv => "txt",
        Format::Json => "json",
    }
}

fn spectrum(
    config: &ExperimentConfig,
    k: usize,
    out: &mut ArtifactWriter,
    degeneracies: &mut Option<Vec<usize>>,
) -> Result<usize> {
    let options = SweepOptions { certify: config.n_max.is_none(), rel_tol: REL_TOL, jobs: config.jobs };
    let table = spectrum_sweep_with(&config.params, &config.grid, k, &options)?;
    let tol = DEFAULT_DEGENERACY_TOL * config.params.w0();
    *degeneracies = Some(degeneracy_profile(&table.levels[0], tol).multiplicities);
    out.table("spectrum", &Table::from_spectrum(&table))?;
    Ok(table.n_max_used)
}

/// Largest discrepancies found by [`compare`], in units of `w0`.
#[derive(Debug, Clone, Copy)]
pub struct CompareSummary {
    pub max_fast: f64,
    pub max_slow: f64,
}

/// Exact levels against both adiabatic approximations along the grid.
///
/// Writes `<name>_fast.<ext>` with `|E_exact − E_fast|/w0` for the lowest
/// `k` levels, and `<name>_slow.<ext>` with the exact ground energy, the
/// harmonic fast-qubit estimate and their difference. No threshold is
/// applied: outside an approximation's regime the numbers document how far
/// off it is.
pub fn compare(config: &ExperimentConfig, name: &str, k: usize) -> Result<CompareSummary> {
    let start = Instant::now();
    let mut out = ArtifactWriter::new(&config.out_dir, name, config.format);
    let w0 = config.params.w0();
    let options = SweepOptions { certify: config.n_max.is_none(), rel_tol: REL_TOL, jobs: config.jobs };
    let exact = spectrum_sweep_with(&config.params, &config.grid, k, &options)?;
    let fast = approx_spectrum_sweep(&config.params, &config.grid, k)?;

    let mut columns = vec!["lambda".to_string()];
    columns.extend((1..=k).map(|i| format!("dE{i}")));
    let mut max_fast: f64 = 0.0;
    let rows = config
        .grid
        .iter()
        .zip(exact.levels.iter().zip(&fast.levels))
        .map(|(&l, (e, a))| {
            let mut row = vec![l];
            for (x, y) in e.iter().zip(a) {
                let d = (x - y).abs() / w0;
                max_fast = max_fast.max(d);
                row.push(d);
            }
            row
        })
        .collect();
    out.table("fast", &Table { columns, rows })?;

    let mut max_slow: f64 = 0.0;
    let mut rows = Vec::with_capacity(config.grid.len());
    for (&l, e) in config.grid.iter().zip(&exact.levels) {
        let slow = harmonic_ground_estimate(&config.params.with_lambda(l)?);
        let d = (e[0] - slow).abs() / w0;
        max_slow = max_slow.max(d);
        rows.push(vec![l, e[0], slow, d]);
    }
    let columns = ["lambda", "E0_exact", "E0_slow", "dE0"].map(String::from).to_vec();
    out.table("slow", &Table { columns, rows })?;

    let record = RunRecord {
        command: "compare".into(),
        task: "compare".into(),
        inputs: config.inputs(Some(k)),
        truncation: Truncation { n_max: exact.n_max_used, certified: config.n_max.is_none(), rel_tol: REL_TOL },
        degeneracy_tolerance: DEFAULT_DEGENERACY_TOL,
        degeneracies_at_first_coupling: None,
        format: config.format,
        files: out.written.clone(),
        versions: versions(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    update_manifest(&config.out_dir, name, &record)?;
    Ok(CompareSummary { max_fast, max_slow })
}
