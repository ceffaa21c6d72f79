//! Physical parameter set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Qubit gap, bias, oscillator quantum, coupling and Fock truncation.
///
/// All energies share one unit; by convention `w0 = 1`. The derived
/// quantities `E_q` and `θ` are computed on demand and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    delta: f64,
    epsilon: f64,
    w0: f64,
    lambda: f64,
    n_max: usize,
}

impl SystemParams {
    pub const DEFAULT_N_MAX: usize = 60;

    pub fn new(delta: f64, epsilon: f64, w0: f64, lambda: f64, n_max: usize) -> Result<Self> {
        let p = Self { delta, epsilon, w0, lambda, n_max };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from the ratio `w0 / E_q` and mixing angle `θ` with `w0 = 1`,
    /// so that `Δ = E_q cos θ` and `ε = E_q sin θ`.
    pub fn from_oscillator_ratio(w0_over_eq: f64, theta: f64, lambda: f64, n_max: usize) -> Result<Self> {
        if !(w0_over_eq > 0.0 && w0_over_eq.is_finite()) {
            return Err(Error::InvalidParameter(format!("w0/E_q must be positive, got {w0_over_eq}")));
        }
        check_theta(theta)?;
        let e_q = 1.0 / w0_over_eq;
        Self::new(e_q * theta.cos(), e_q * theta.sin(), 1.0, lambda, n_max)
    }

    /// Parameters from the ratio `w0 / Δ` and bias angle `θ` (`ε = Δ tan θ`), `w0 = 1`.
    pub fn from_gap_ratio(w0_over_delta: f64, theta: f64, lambda: f64, n_max: usize) -> Result<Self> {
        if !(w0_over_delta > 0.0 && w0_over_delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("w0/Delta must be positive, got {w0_over_delta}")));
        }
        check_theta(theta)?;
        let delta = 1.0 / w0_over_delta;
        Self::new(delta, delta * theta.tan(), 1.0, lambda, n_max)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.delta, self.epsilon, self.w0, self.lambda].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.delta <= 0.0 {
            return Err(Error::InvalidParameter(format!("delta must be > 0, got {}", self.delta)));
        }
        if self.w0 <= 0.0 {
            return Err(Error::InvalidParameter(format!("w0 must be > 0, got {}", self.w0)));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.epsilon < 0.0 {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be >= 1".into()));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Bare qubit splitting `sqrt(Δ² + ε²)`.
    pub fn e_q(&self) -> f64 {
        self.delta.hypot(self.epsilon)
    }

    /// Mixing angle with `tan θ = ε / Δ`, in `[0, π/2)`.
    pub fn theta(&self) -> f64 {
        (self.epsilon / self.delta).atan()
    }

    /// Composite Hilbert-space dimension `8 (n_max + 1)`.
    pub fn dim(&self) -> usize {
        8 * (self.n_max + 1)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.delta, self.epsilon, self.w0, lambda, self.n_max)
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::new(self.delta, self.epsilon, self.w0, self.lambda, n_max)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.delta, epsilon, self.w0, self.lambda, self.n_max)
    }

    /// True when the parity symmetry is exact (`ε = 0`).
    pub fn is_unbiased(&self) -> bool {
        self.epsilon == 0.0
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta must lie in [0, pi/2), got {theta}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derived_quantities() {
        let p = SystemParams::new(3.0, 4.0, 1.0, 0.2, 10).unwrap();
        assert_eq!(p.e_q(), 5.0);
        assert!((p.theta() - (4.0f64 / 3.0).atan()).abs() < 1e-15);
        assert_eq!(p.dim(), 88);
    }

    #[test]
    fn rejects_invalid() {
        assert!(SystemParams::new(0.0, 0.0, 1.0, 0.0, 10).is_err());
        assert!(SystemParams::new(1.0, -0.1, 1.0, 0.0, 10).is_err());
        assert!(SystemParams::new(1.0, 0.0, 0.0, 0.0, 10).is_err());
        assert!(SystemParams::new(1.0, 0.0, 1.0, -1.0, 10).is_err());
        assert!(SystemParams::new(1.0, 0.0, 1.0, 0.0, 0).is_err());
        assert!(SystemParams::new(f64::NAN, 0.0, 1.0, 0.0, 4).is_err());
        assert!(SystemParams::from_oscillator_ratio(1.0, PI / 2.0, 0.0, 4).is_err());
    }

    #[test]
    fn ratio_constructors() {
        let p = SystemParams::from_oscillator_ratio(10.0, PI / 6.0, 1.0, 20).unwrap();
        assert!((p.e_q() - 0.1).abs() < 1e-15);
        assert!((p.theta() - PI / 6.0).abs() < 1e-12);

        let p = SystemParams::from_gap_ratio(0.01, 0.0, 1.0, 20).unwrap();
        assert!((p.delta() - 100.0).abs() < 1e-12);
        assert_eq!(p.epsilon(), 0.0);
        assert!(p.is_unbiased());
    }
}
