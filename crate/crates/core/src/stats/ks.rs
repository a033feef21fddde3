use std::f64::consts::PI;

use super::EmpiricalSample;
use crate::error::Result;

/// Largest pooled size for which [`ks_two_sample`] defaults to the exact
/// permutation p-value.
pub const EXACT_POOLED_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsMethod {
    /// Kolmogorov limiting distribution at effective size `na*nb/(na+nb)`.
    /// Approximate for small samples.
    Asymptotic,
    /// Exact distribution of the statistic over all equally likely
    /// assignments of the pooled values to the two samples (ties kept).
    ExactPermutation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub d: f64,
    pub p_value: f64,
    pub method: KsMethod,
}

/// `sup |F_a - F_b|` as an integer numerator over `na * nb`, plus the sizes.
fn statistic_scaled(a: &[f64], b: &[f64]) -> u64 {
    let (na, nb) = (a.len() as i64, b.len() as i64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0i64;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as i64 * nb - j as i64 * na).abs());
    }
    best as u64
}

/// Two-sample KS distance `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_statistic(a: &EmpiricalSample, b: &EmpiricalSample) -> Result<f64> {
    a.require_nonempty()?;
    b.require_nonempty()?;
    Ok(statistic_scaled(a.values(), b.values()) as f64 / (a.len() * b.len()) as f64)
}

/// Exact test when the pooled size is at most [`EXACT_POOLED_LIMIT`],
/// asymptotic otherwise.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> Result<KsResult> {
    let method = if a.len() + b.len() <= EXACT_POOLED_LIMIT {
        KsMethod::ExactPermutation
    } else {
        KsMethod::Asymptotic
    };
    ks_two_sample_with(a, b, method)
}

pub fn ks_two_sample_with(a: &EmpiricalSample, b: &EmpiricalSample, method: KsMethod) -> Result<KsResult> {
    let d = ks_statistic(a, b)?;
    let (na, nb) = (a.len(), b.len());
    let p_value = match method {
        KsMethod::Asymptotic => {
            let effective = (na * nb) as f64 / (na + nb) as f64;
            kolmogorov_survival(effective.sqrt() * d)
        }
        KsMethod::ExactPermutation => {
            let scaled = statistic_scaled(a.values(), b.values());
            permutation_p_value(a.values(), b.values(), scaled)
        }
    };
    Ok(KsResult { d, p_value, method })
}

/// Probability that a uniformly random split of the pooled values into
/// groups of sizes `na`, `nb` has a statistic at least `scaled / (na*nb)`.
///
/// Walks the lattice of (taken from a, taken from b) along the sorted pooled
/// values, checking the CDF gap only where the pooled value changes so ties
/// are handled as in direct enumeration. Path mass is carried as
/// probability, each step drawing without replacement.
fn permutation_p_value(a: &[f64], b: &[f64], scaled: u64) -> f64 {
    if scaled == 0 {
        return 1.0;
    }
    let (na, nb) = (a.len(), b.len());
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let total = na + nb;
    // mass[x]: probability of having taken x values for `a` so far without
    // ever reaching the observed gap.
    let mut mass = vec![0.0; na + 1];
    mass[0] = 1.0;
    for k in 0..total {
        let mut next = vec![0.0; na + 1];
        let lo = k.saturating_sub(nb);
        for x in lo..=k.min(na) {
            let m = mass[x];
            if m == 0.0 {
                continue;
            }
            let y = k - x;
            let left = (total - k) as f64;
            if x < na {
                next[x + 1] += m * (na - x) as f64 / left;
            }
            if y < nb {
                next[x] += m * (nb - y) as f64 / left;
            }
        }
        let step = k + 1;
        if step == total || pooled[step] != pooled[k] {
            for (x, m) in next.iter_mut().enumerate() {
                if x > step || step - x > nb {
                    continue;
                }
                let gap = (x as i64 * nb as i64 - (step - x) as i64 * na as i64).unsigned_abs();
                if gap >= scaled {
                    *m = 0.0;
                }
            }
        }
        mass = next;
    }
    let survive: f64 = mass.iter().sum();
    (1.0 - survive).clamp(0.0, 1.0)
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi theta form converges fast for small lambda.
        let c = -PI * PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=20)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (c * odd * odd).exp()
            })
            .sum();
        (1.0 - (2.0 * PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * kf * kf * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}
