//! Probability of each player winning when the draw is chosen uniformly at
//! random, computed exactly or estimated by sampling draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::draw::{bracket_probabilities, random_draw};
use crate::error::{Error, Result};
use crate::subset_dp;
use crate::tournament::ProbabilisticTournament;

/// Default number of sampled draws.
pub const DEFAULT_SAMPLES: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Average the exact win probabilities of each sampled draw.
    PerDrawExact,
    /// Play every match of each sampled draw as a Bernoulli trial.
    FullSimulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Sampled { samples: u64, mode: SampleMode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinProbVector {
    /// Indexed by player id.
    pub probs: Vec<f64>,
    pub method: Method,
}

/// Exact uniform-draw win probabilities by subset DP (at most 16 players).
///
/// Entries are kept as averages over draws of each sub-bracket, so no count
/// larger than the number of splits at one level is ever formed.
pub fn exact_uniform_win_probs(t: &ProbabilisticTournament) -> Result<WinProbVector> {
    let table = subset_dp::run(t.len(), 0.0, 1.0, |i, j| t.p(i, j), |v, splits| v / splits as f64)?;
    Ok(WinProbVector { probs: table.full(), method: Method::Exact })
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Generator for one worker. Draw selection and match outcomes use separate
/// streams so both modes see the same draws for a given seed.
fn worker_rng(seed: u64, worker: usize, outcomes: bool) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * worker as u64 + u64::from(outcomes));
    rng
}

/// Monte Carlo estimate over `samples` uniformly drawn brackets.
///
/// Samples are split into `workers` contiguous chunks, each with its own
/// generator derived from `seed`; chunk sums are combined in worker order.
/// The result is reproducible for a fixed `(seed, workers)`; changing the
/// worker count changes which random numbers are used.
pub fn sample_uniform_win_probs(
    t: &ProbabilisticTournament,
    samples: u64,
    seed: u64,
    mode: SampleMode,
    workers: usize,
) -> Result<WinProbVector> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    if workers == 0 {
        return Err(Error::invalid("at least one worker is required"));
    }
    let n = t.len();
    if !crate::draw::is_power_of_two(n) {
        return Err(Error::invalid(format!("{n} players is not a power of two")));
    }
    let chunk = |w: u64| samples * w / workers as u64;
    let partial: Vec<Vec<CompensatedSum>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut draws = worker_rng(seed, w, false);
            let mut outcomes = worker_rng(seed, w, true);
            let mut acc = vec![CompensatedSum::default(); n];
            let mut buf = vec![0.0; n];
            for _ in chunk(w as u64)..chunk(w as u64 + 1) {
                let draw = random_draw(n, &mut draws).expect("power of two checked");
                match mode {
                    SampleMode::PerDrawExact => {
                        bracket_probabilities(draw.leaves(), t, &mut buf);
                        for (a, &p) in acc.iter_mut().zip(&buf) {
                            a.add(p);
                        }
                    }
                    SampleMode::FullSimulation => {
                        let winner = play_out(draw.leaves(), t, &mut outcomes);
                        acc[winner].add(1.0);
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![CompensatedSum::default(); n];
    for acc in &partial {
        for (tot, a) in total.iter_mut().zip(acc) {
            tot.add(a.sum);
            tot.add(a.carry);
        }
    }
    Ok(WinProbVector {
        probs: total.iter().map(|s| s.value() / samples as f64).collect(),
        method: Method::Sampled { samples, mode },
    })
}

fn play_out<R: Rng + ?Sized>(leaves: &[usize], t: &ProbabilisticTournament, rng: &mut R) -> usize {
    let mut alive = leaves.to_vec();
    while alive.len() > 1 {
        alive = alive
            .chunks(2)
            .map(|m| if rng.gen::<f64>() < t.p(m[0], m[1]) { m[0] } else { m[1] })
            .collect();
    }
    alive[0]
}
