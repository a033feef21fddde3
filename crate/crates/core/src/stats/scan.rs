use rayon::prelude::*;

use super::{ks_two_sample, EmpiricalSample, KsResult};
use crate::crmodel::{generate_cr, CrParams};
use crate::error::{Error, Result};
use crate::winprob::exact_uniform_win_probs;

pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanStep {
    pub upset: f64,
    pub ks: KsResult,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub steps: Vec<ScanStep>,
    pub threshold: f64,
    pub min_accepted: Option<f64>,
    pub max_accepted: Option<f64>,
    /// Upset probability with the smallest KS distance (first on ties).
    pub best: f64,
    /// Average upset probability of the data the reference came from.
    pub average_upset: Option<f64>,
}

/// Upset probabilities `step, 2*step, ...` up to 0.5.
pub fn upset_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::invalid(format!("step {step} outside (0, 0.5]")));
    }
    let count = (0.5 / step + 1e-9).floor() as usize;
    Ok((1..=count).map(|k| ((k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// KS-tests `reference` against the exact uniform-draw win-probability
/// vector of every Condorcet Random instance on the grid, accepting an
/// upset probability when `p >= threshold`.
pub fn scan_cr(
    reference: &EmpiricalSample,
    n: usize,
    step: f64,
    threshold: f64,
    average_upset: Option<f64>,
) -> Result<ScanResult> {
    if reference.len() != n {
        return Err(Error::invalid(format!(
            "reference has {} values but the scan is over {n} players",
            reference.len()
        )));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::invalid(format!("threshold {threshold} outside [0, 1]")));
    }
    let steps: Vec<ScanStep> = upset_grid(step)?
        .into_par_iter()
        .map(|upset| {
            let t = generate_cr(CrParams::new(n, upset)?)?;
            let probs = exact_uniform_win_probs(&t)?.probs;
            let sample = EmpiricalSample::new(probs, format!("CR({upset})"))?;
            let ks = ks_two_sample(reference, &sample)?;
            Ok(ScanStep { upset, ks, accepted: ks.p_value >= threshold })
        })
        .collect::<Result<_>>()?;
    let accepted = steps.iter().filter(|s| s.accepted).map(|s| s.upset);
    let min_accepted = accepted.clone().reduce(f64::min);
    let max_accepted = accepted.reduce(f64::max);
    let best = steps
        .iter()
        .fold(None::<&ScanStep>, |b, s| match b {
            Some(b) if b.ks.d <= s.ks.d => Some(b),
            _ => Some(s),
        })
        .map(|s| s.upset)
        .expect("grid is non-empty");
    Ok(ScanResult { steps, threshold, min_accepted, max_accepted, best, average_upset })
}
