//! Distribution comparison for win-probability samples: empirical CDFs,
//! two-sample Kolmogorov-Smirnov tests, heavy-tail fits and the scan over
//! Condorcet Random upset probabilities.

mod fit;
mod ks;
mod scan;

pub use fit::{fit_lognormal, fit_power_law, likelihood_ratio_test, FitParams, FitResult, LrtResult, XminMode};
pub use ks::{kolmogorov_survival, ks_statistic, ks_two_sample, ks_two_sample_with, KsMethod, KsResult, EXACT_POOLED_LIMIT};
pub use scan::{scan_cr, upset_grid, ScanResult, ScanStep, DEFAULT_STEP, DEFAULT_THRESHOLD};

use crate::error::{Error, Result};

/// Sorted finite non-negative observations with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    label: String,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!("sample value {bad} is not a finite non-negative number")));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, label: label.into() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.values.is_empty() {
            Err(Error::invalid(format!("sample {:?} is empty", self.label)))
        } else {
            Ok(())
        }
    }
}

/// Right-continuous step function evaluated at each distinct sample value.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub points: Vec<(f64, f64)>,
    pub convention: &'static str,
}

pub const ECDF_CONVENTION: &str = "F(x) = P(X <= x)";
pub const CCDF_CONVENTION: &str = "1 - F(x) = P(X > x)";

pub fn ecdf_points(s: &EmpiricalSample) -> Result<StepFunction> {
    s.require_nonempty()?;
    let n = s.len() as f64;
    let v = s.values();
    let mut points = Vec::new();
    for (k, &x) in v.iter().enumerate() {
        if k + 1 == v.len() || v[k + 1] != x {
            points.push((x, (k + 1) as f64 / n));
        }
    }
    Ok(StepFunction { points, convention: ECDF_CONVENTION })
}

pub fn ccdf_points(s: &EmpiricalSample) -> Result<StepFunction> {
    let ecdf = ecdf_points(s)?;
    let n = s.len();
    let mut below = 0usize;
    let points = ecdf
        .points
        .iter()
        .map(|&(x, _)| {
            below += s.values()[below..].iter().take_while(|&&v| v <= x).count();
            (x, (n - below) as f64 / n as f64)
        })
        .collect();
    Ok(StepFunction { points, convention: CCDF_CONVENTION })
}
