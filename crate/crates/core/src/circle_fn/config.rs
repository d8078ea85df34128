use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform sampling grid `ζ_j = exp(i(2πj/M + offset))`, `j = 0..M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    samples: usize,
    offset: f64,
}

impl GridSpec {
    pub const DEFAULT_SAMPLES: usize = 1024;

    pub fn new(samples: usize, offset: f64) -> Result<Self> {
        if samples < 2 || !samples.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "grid size must be a power of two >= 2, got {samples}"
            )));
        }
        let step = TAU / samples as f64;
        if !(0.0..step).contains(&offset) {
            return Err(Error::InvalidConfig(format!(
                "grid offset {offset} outside [0, 2π/{samples})"
            )));
        }
        Ok(GridSpec { samples, offset })
    }

    pub fn with_samples(samples: usize) -> Result<Self> {
        GridSpec::new(samples, 0.0)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.samples as f64 + self.offset
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::cis(self.angle(j))
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(|j| self.angle(j))
    }

    /// Checks `M ≥ 2·degree + 2`.
    pub fn require_degree(&self, degree: usize) -> Result<()> {
        if self.samples < 2 * degree + 2 {
            return Err(Error::GridTooCoarse {
                samples: self.samples,
                reason: format!(
                    "need at least {} samples for degree {degree}",
                    2 * degree + 2
                ),
            });
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            samples: Self::DEFAULT_SAMPLES,
            offset: 0.0,
        }
    }
}

/// Tolerances that can flip a boolean or integer answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative tolerance for pointwise equalities.
    pub eq_tol: f64,
    /// Relative band for a singular value to count as equal to a level `t`.
    pub sv_tol: f64,
    /// Absolute floor below which a Fourier coefficient counts as zero.
    pub coeff_tol: f64,
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, sv_tol: f64, coeff_tol: f64) -> Result<Self> {
        let tol = ToleranceConfig {
            eq_tol,
            sv_tol,
            coeff_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.eq_tol, self.sv_tol, self.coeff_tol]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0);
        if !all_positive {
            return Err(Error::InvalidConfig(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.sv_tol <= self.eq_tol {
            return Err(Error::InvalidConfig(format!(
                "sv_tol ({}) must exceed eq_tol ({})",
                self.sv_tol, self.eq_tol
            )));
        }
        Ok(())
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eq_tol: 1e-9,
            sv_tol: 1e-6,
            coeff_tol: 1e-10,
        }
    }
}
