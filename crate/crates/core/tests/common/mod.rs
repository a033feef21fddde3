//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the subset DP or the search; draws come from canonicalizing every
//! permutation of the players.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use itertools::Itertools;
use knockout::{canonicalize, draw_win_probabilities, simulate, DeterministicTournament, Draw, PlayerTable, ProbabilisticTournament};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Every distinct draw over `n` players, found by canonicalizing all `n!`
/// leaf orders. Only practical for n <= 8.
pub fn all_draws(n: usize) -> Vec<Draw> {
    let set: BTreeSet<Draw> = (0..n)
        .permutations(n)
        .map(|p| canonicalize(&p).unwrap())
        .collect();
    set.into_iter().collect()
}

pub fn brute_counts(t: &DeterministicTournament, draws: &[Draw]) -> Vec<u64> {
    let mut counts = vec![0u64; t.len()];
    for d in draws {
        counts[simulate(d, t).unwrap()] += 1;
    }
    counts
}

pub fn brute_win_probs(t: &ProbabilisticTournament, draws: &[Draw]) -> Vec<f64> {
    let mut acc = vec![0.0; t.len()];
    for d in draws {
        for (a, p) in acc.iter_mut().zip(draw_win_probabilities(d, t).unwrap()) {
            *a += p;
        }
    }
    acc.iter().map(|a| a / draws.len() as f64).collect()
}

pub fn random_tournament(n: usize, seed: u64) -> DeterministicTournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DeterministicTournament::from_pairs(PlayerTable::generic(n), |_, _| rng.gen_bool(0.5)).unwrap()
}

pub fn random_matrix(n: usize, seed: u64) -> ProbabilisticTournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ProbabilisticTournament::from_pairs(PlayerTable::generic(n), |_, _| rng.gen_range(0.01..0.99)).unwrap()
}

/// 0>1, 1>2, 2>0 and everyone beats 3.
pub fn cycle4() -> DeterministicTournament {
    DeterministicTournament::from_pairs(PlayerTable::generic(4), |i, j| {
        matches!((i, j), (0, 1) | (1, 2) | (0, 3) | (1, 3) | (2, 3))
    })
    .unwrap()
}

/// Winner of every draw over `set`, one entry per draw. A draw is split into
/// the half holding the smallest id and the other half, each drawn
/// independently, so no draw is listed twice.
pub fn winners_of_all_draws(t: &DeterministicTournament, set: &[usize]) -> Vec<usize> {
    if set.len() == 1 {
        return vec![set[0]];
    }
    let mut out = Vec::new();
    for (a, b) in half_splits(set) {
        let wa = winners_of_all_draws(t, &a);
        let wb = winners_of_all_draws(t, &b);
        for &x in &wa {
            for &y in &wb {
                out.push(if t.beats(x, y) { x } else { y });
            }
        }
    }
    out
}

pub fn half_splits(set: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let (first, rest) = sorted.split_first().unwrap();
    rest.iter()
        .copied()
        .combinations(set.len() / 2 - 1)
        .map(|mate| {
            let mut a = vec![*first];
            a.extend(&mate);
            let b = rest.iter().copied().filter(|x| !mate.contains(x)).collect();
            (a, b)
        })
        .collect()
}

/// Winning-draw counts by visiting every draw. The top split is expanded
/// inline so a 16-player run keeps only 8-player winner lists in memory.
pub fn brute_counts_by_splits(t: &DeterministicTournament) -> Vec<u64> {
    let all: Vec<usize> = (0..t.len()).collect();
    let mut counts = vec![0u64; t.len()];
    if t.len() == 1 {
        counts[0] = 1;
        return counts;
    }
    for (a, b) in half_splits(&all) {
        let wa = winners_of_all_draws(t, &a);
        let wb = winners_of_all_draws(t, &b);
        for &x in &wa {
            for &y in &wb {
                counts[if t.beats(x, y) { x } else { y }] += 1;
            }
        }
    }
    counts
}
