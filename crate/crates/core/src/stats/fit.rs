use std::f64::consts::PI;

use statrs::function::erf::erfc;

use super::EmpiricalSample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XminMode {
    /// Tail is every value `>= x`.
    Fixed(f64),
    /// Whole sample (`xmin` = smallest value).
    SampleMin,
    /// `xmin` minimizing the KS distance between the tail and its fit.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitParams {
    /// Density `(alpha - 1) / xmin * (x / xmin)^-alpha` on `x >= xmin`.
    PowerLaw { alpha: f64, xmin: f64 },
    /// `ln X ~ Normal(mu, sigma^2)`.
    LogNormal { mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub params: FitParams,
    pub log_likelihood: f64,
    /// Observations the fit used (those `>= support_min`).
    pub n_used: usize,
    pub support_min: f64,
}

impl FitResult {
    pub fn family(&self) -> &'static str {
        match self.params {
            FitParams::PowerLaw { .. } => "power-law",
            FitParams::LogNormal { .. } => "log-normal",
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match self.params {
            FitParams::PowerLaw { alpha, xmin } => (alpha - 1.0).ln() - xmin.ln() - alpha * (x / xmin).ln(),
            FitParams::LogNormal { mu, sigma } => {
                let z = (x.ln() - mu) / sigma;
                -x.ln() - sigma.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * z * z
            }
        }
    }

    /// Constant `c` in the density `c * x^-alpha` of a power-law fit.
    pub fn power_law_normalization(&self) -> Option<f64> {
        match self.params {
            FitParams::PowerLaw { alpha, xmin } => Some((alpha - 1.0) * xmin.powf(alpha - 1.0)),
            FitParams::LogNormal { .. } => None,
        }
    }
}

fn power_law_at(values: &[f64], xmin: f64) -> Result<FitResult> {
    if !(xmin > 0.0 && xmin.is_finite()) {
        return Err(Error::invalid(format!("xmin {xmin} must be positive")));
    }
    let tail: Vec<f64> = values.iter().copied().filter(|&x| x >= xmin).collect();
    if tail.len() < 2 {
        return Err(Error::invalid(format!(
            "power-law fit needs at least 2 values >= xmin {xmin}, found {}",
            tail.len()
        )));
    }
    let m = tail.len() as f64;
    let log_sum: f64 = tail.iter().map(|&x| (x / xmin).ln()).sum();
    if log_sum <= 0.0 {
        return Err(Error::invalid(format!("no tail values exceed xmin {xmin}; alpha is unbounded")));
    }
    let alpha = 1.0 + m / log_sum;
    let log_likelihood = m * (alpha - 1.0).ln() - m * xmin.ln() - alpha * log_sum;
    Ok(FitResult {
        params: FitParams::PowerLaw { alpha, xmin },
        log_likelihood,
        n_used: tail.len(),
        support_min: xmin,
    })
}

/// KS distance between the tail at `xmin` and a fitted continuous power law.
fn tail_distance(values: &[f64], alpha: f64, xmin: f64) -> f64 {
    let tail: Vec<f64> = values.iter().copied().filter(|&x| x >= xmin).collect();
    let m = tail.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in tail.iter().enumerate() {
        let model = 1.0 - (x / xmin).powf(1.0 - alpha);
        d = d.max((k as f64 / m - model).abs());
        d = d.max(((k + 1) as f64 / m - model).abs());
    }
    d
}

/// Continuous power-law maximum-likelihood fit over the tail `x >= xmin`.
pub fn fit_power_law(s: &EmpiricalSample, mode: XminMode) -> Result<FitResult> {
    s.require_nonempty()?;
    if s.values()[0] <= 0.0 && !matches!(mode, XminMode::Fixed(_)) {
        return Err(Error::invalid("power-law fit requires positive values"));
    }
    match mode {
        XminMode::Fixed(xmin) => power_law_at(s.values(), xmin),
        XminMode::SampleMin => power_law_at(s.values(), s.values()[0]),
        XminMode::Scan => {
            let mut candidates: Vec<f64> = s.values().to_vec();
            candidates.dedup();
            let mut best: Option<(f64, FitResult)> = None;
            for xmin in candidates {
                let Ok(fit) = power_law_at(s.values(), xmin) else { continue };
                let FitParams::PowerLaw { alpha, .. } = fit.params else { unreachable!() };
                let d = tail_distance(s.values(), alpha, xmin);
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, fit));
                }
            }
            best.map(|(_, f)| f).ok_or_else(|| {
                Error::invalid("power-law xmin scan needs at least 2 distinct values with 2 or more at or above xmin")
            })
        }
    }
}

/// Log-normal maximum-likelihood fit over the whole sample.
pub fn fit_lognormal(s: &EmpiricalSample) -> Result<FitResult> {
    let v = s.values();
    if v.len() < 2 {
        return Err(Error::invalid("log-normal fit needs at least 2 values"));
    }
    if v[0] <= 0.0 {
        return Err(Error::invalid("log-normal fit requires positive values"));
    }
    let m = v.len() as f64;
    let logs: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let mu = logs.iter().sum::<f64>() / m;
    let var = logs.iter().map(|l| (l - mu) * (l - mu)).sum::<f64>() / m;
    let sigma = var.sqrt();
    if sigma == 0.0 {
        return Err(Error::invalid("log-normal fit is degenerate: all values equal (sigma = 0)"));
    }
    let mut fit = FitResult {
        params: FitParams::LogNormal { mu, sigma },
        log_likelihood: 0.0,
        n_used: v.len(),
        support_min: v[0],
    };
    fit.log_likelihood = v.iter().map(|&x| fit.log_pdf(x)).sum();
    Ok(fit)
}

/// Normalized log-likelihood ratio. Positive `r` favors the first fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrtResult {
    pub r: f64,
    pub p_value: f64,
    pub first: &'static str,
    pub second: &'static str,
}

impl LrtResult {
    pub const SIGN_CONVENTION: &'static str = "r > 0 favors the first family";

    pub fn favored(&self) -> &'static str {
        if self.r >= 0.0 {
            self.first
        } else {
            self.second
        }
    }
}

/// Vuong test on the per-point log-likelihood differences, with a two-sided
/// normal p-value `erfc(|r| / sqrt 2)`.
pub fn likelihood_ratio_test(s: &EmpiricalSample, first: &FitResult, second: &FitResult) -> Result<LrtResult> {
    if first.support_min != second.support_min || first.n_used != second.n_used {
        return Err(Error::invalid(format!(
            "fits cover different data ({} values >= {} vs {} values >= {})",
            first.n_used, first.support_min, second.n_used, second.support_min
        )));
    }
    let diffs: Vec<f64> = s
        .values()
        .iter()
        .filter(|&&x| x >= first.support_min)
        .map(|&x| first.log_pdf(x) - second.log_pdf(x))
        .collect();
    let m = diffs.len() as f64;
    let label = (first.family(), second.family());
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(LrtResult { r: 0.0, p_value: 1.0, first: label.0, second: label.1 });
    }
    let sum: f64 = diffs.iter().sum();
    let mean = sum / m;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / m;
    if var == 0.0 {
        return Err(Error::UndefinedTest("log-likelihood differences have zero variance".into()));
    }
    let r = sum / (m.sqrt() * var.sqrt());
    Ok(LrtResult {
        r,
        p_value: erfc(r.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0),
        first: label.0,
        second: label.1,
    })
}
