use crate::error::{Error, Result};

pub const EPS: f64 = f64::EPSILON;

/// Numerical thresholds shared by all reductions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative rank tolerance; `0` selects `max(rows, cols) * eps * sigma_max`.
    pub rank_rtol: f64,
    /// Absolute slack used when classifying eigenvalues against a region boundary.
    pub eig_atol: f64,
    /// Half-width of the strip around the region boundary treated as an error.
    pub boundary_offset: f64,
    /// Seed for the random sample points used by rank and residual checks.
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_rtol: 0.0, eig_atol: 1e-7, boundary_offset: 0.0, seed: 0 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("rank_rtol", self.rank_rtol), ("eig_atol", self.eig_atol), ("boundary_offset", self.boundary_offset)]
        {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Input(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Threshold below which singular values of a `rows x cols` matrix count as zero.
    pub fn rank_threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        if self.rank_rtol > 0.0 {
            self.rank_rtol * sigma_max
        } else {
            rows.max(cols) as f64 * EPS * sigma_max
        }
    }

    /// Absolute threshold for rank decisions on sub-blocks of a larger pencil of norm `norm`.
    pub fn structural(&self, rows: usize, cols: usize, norm: f64) -> f64 {
        if self.rank_rtol > 0.0 {
            self.rank_rtol * norm
        } else {
            (rows * cols).max(50) as f64 * EPS * norm
        }
    }
}
