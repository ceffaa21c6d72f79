use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::eigen::lowest_levels;

/// Candidate truncations, tried in order.
pub const CERTIFY_SCHEDULE: [usize; 7] = [10, 20, 40, 80, 160, 320, 400];

/// Enlargement used to test a candidate.
pub const CERTIFY_STEP: usize = 20;

pub const N_MAX_CAP: usize = 400;

type CacheKey = [u64; 6];

fn cache() -> &'static Mutex<HashMap<CacheKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_key(params: &SystemParams, k: usize, rel_tol: f64) -> CacheKey {
    [
        params.delta().to_bits(),
        params.epsilon().to_bits(),
        params.w0().to_bits(),
        params.lambda().to_bits(),
        k as u64,
        rel_tol.to_bits(),
    ]
}

/// Smallest schedule entry whose `k` lowest levels move by less than
/// `rel_tol · w0` when the truncation grows by [`CERTIFY_STEP`].
///
/// The `n_max` stored in `params` is ignored. Results are memoized per
/// physical parameter set, `k` and `rel_tol`.
pub fn certify_truncation(params: &SystemParams, k: usize, rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("rel_tol must be positive, got {rel_tol}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let key = cache_key(params, k, rel_tol);
    if let Some(&n) = cache().lock().expect("certification cache poisoned").get(&key) {
        return Ok(n);
    }

    let tol = rel_tol * params.w0();
    for &n_max in CERTIFY_SCHEDULE.iter().filter(|&&n| 8 * (n + 1) >= k) {
        let here = lowest_levels(&params.with_n_max(n_max)?, k)?;
        let there = lowest_levels(&params.with_n_max(n_max + CERTIFY_STEP)?, k)?;
        let drift = here.iter().zip(&there).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if drift < tol {
            cache().lock().expect("certification cache poisoned").insert(key, n_max);
            return Ok(n_max);
        }
    }
    Err(Error::TruncationInfeasible { lambda: params.lambda(), cap: N_MAX_CAP })
}
