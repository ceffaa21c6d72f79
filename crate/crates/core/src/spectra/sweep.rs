use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::{csv_string, write_text};
use crate::params::SystemParams;

use super::certify::certify_truncation;
use super::eigen::lowest_levels;

/// The `k` lowest levels at each coupling of a grid, all at one truncation.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub lambda_grid: Vec<f64>,
    /// One ascending row per grid point.
    pub levels: Vec<Vec<f64>>,
    pub n_max_used: usize,
    pub params_base: SystemParams,
}

impl SpectrumTable {
    pub fn k(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }

    /// `lambda,E1,...,Ek`, optionally with a constant `source` column.
    pub fn to_csv(&self, source: Option<&str>) -> String {
        let names: Vec<String> = std::iter::once("lambda".to_string())
            .chain((1..=self.k()).map(|i| format!("E{i}")))
            .collect();
        let header: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<Vec<f64>> = self
            .lambda_grid
            .iter()
            .zip(&self.levels)
            .map(|(l, row)| std::iter::once(*l).chain(row.iter().copied()).collect())
            .collect();
        csv_string(&header, &rows, source.map(|s| ("source", s)))
    }

    pub fn write_csv(&self, path: &Path, source: Option<&str>) -> Result<()> {
        write_text(path, &self.to_csv(source))
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Certify the truncation at the largest coupling; otherwise use the
    /// `n_max` of the base parameters as given.
    pub certify: bool,
    pub rel_tol: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { certify: true, rel_tol: 1e-8, jobs: None }
    }
}

pub fn spectrum_sweep(params_base: &SystemParams, lambda_grid: &[f64], k: usize) -> Result<SpectrumTable> {
    spectrum_sweep_with(params_base, lambda_grid, k, &SweepOptions::default())
}

/// Sweep the coupling over `lambda_grid` (non-empty, ascending).
///
/// The truncation requirement grows with the displacement `3λ/w0`, so it is
/// certified once at the largest coupling and used for every point. Rows
/// come back in grid order regardless of the worker schedule.
pub fn spectrum_sweep_with(
    params_base: &SystemParams,
    lambda_grid: &[f64],
    k: usize,
    options: &SweepOptions,
) -> Result<SpectrumTable> {
    let Some(&lambda_max) = lambda_grid.last() else {
        return Err(Error::InvalidParameter("empty coupling grid".into()));
    };
    if lambda_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("coupling grid must be ascending".into()));
    }
    let n_max = if options.certify {
        certify_truncation(&params_base.with_lambda(lambda_max)?, k, options.rel_tol)?
    } else {
        params_base.n_max()
    };
    let base = params_base.with_n_max(n_max)?;

    let work = || -> Result<Vec<Vec<f64>>> {
        lambda_grid.par_iter().map(|&l| lowest_levels(&base.with_lambda(l)?, k)).collect()
    };
    let levels = in_pool(options.jobs, work)?;
    Ok(SpectrumTable { lambda_grid: lambda_grid.to_vec(), levels, n_max_used: n_max, params_base: base })
}

/// Run `work` on a dedicated pool of `jobs` threads, or on the global pool.
pub(crate) fn in_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_and_csv() {
        let p = SystemParams::new(1.0, 0.0, 1.0, 0.0, 10).unwrap();
        let grid = linspace(0.0, 0.6, 4);
        let opts = SweepOptions { certify: false, rel_tol: 1e-8, jobs: Some(2) };
        let t = spectrum_sweep_with(&p, &grid, 3, &opts).unwrap();
        assert_eq!(t.levels.len(), 4);
        assert!((t.levels[0][0] + 1.5).abs() < 1e-12);
        for (l, row) in grid.iter().zip(&t.levels) {
            let direct = lowest_levels(&p.with_lambda(*l).unwrap(), 3).unwrap();
            assert_eq!(row, &direct);
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
        let csv = t.to_csv(None);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("lambda,E1,E2,E3"));
        assert_eq!(csv.lines().count(), 5);
        assert!(t.to_csv(Some("adiabatic_fast")).starts_with("lambda,E1,E2,E3,source\n"));
    }

    #[test]
    fn rejects_bad_grids() {
        let p = SystemParams::new(1.0, 0.0, 1.0, 0.0, 10).unwrap();
        assert!(spectrum_sweep(&p, &[], 3).is_err());
        assert!(spectrum_sweep(&p, &[0.5, 0.1], 3).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
