//! Balanced brackets ("draws") and what happens when one is played out.
//!
//! A draw over `n = 2^c` players is stored as its leaf sequence in canonical
//! form: at every internal node the subtree holding the smallest player id
//! sits on the left. Each unordered bracket has exactly one canonical leaf
//! sequence, and each canonical sequence stands for `2^(n-1)` orderings.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tournament::{DeterministicTournament, PlayerTable, ProbabilisticTournament};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Draw {
    leaves: Vec<usize>,
}

impl Draw {
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Joins two canonical sub-draws over disjoint players, putting the one
    /// with the smaller minimum on the left.
    pub(crate) fn join(a: &[usize], b: &[usize]) -> Draw {
        let (first, second) = if min_of(a) < min_of(b) { (a, b) } else { (b, a) };
        let mut leaves = Vec::with_capacity(a.len() + b.len());
        leaves.extend_from_slice(first);
        leaves.extend_from_slice(second);
        Draw { leaves }
    }

    pub(crate) fn from_canonical_unchecked(leaves: Vec<usize>) -> Draw {
        Draw { leaves }
    }

    /// Nested bracket text such as `((p0,p3),(p1,p2))`.
    pub fn bracket_string(&self, players: &PlayerTable) -> String {
        fn go(out: &mut String, leaves: &[usize], players: &PlayerTable) {
            if leaves.len() == 1 {
                out.push_str(players.name(leaves[0]));
                return;
            }
            let (l, r) = leaves.split_at(leaves.len() / 2);
            out.push('(');
            go(out, l, players);
            out.push(',');
            go(out, r, players);
            out.push(')');
        }
        let mut out = String::new();
        go(&mut out, &self.leaves, players);
        out
    }

    /// Round-by-round pairings, first round first.
    pub fn rounds_string(&self, players: &PlayerTable) -> String {
        let mut out = String::new();
        let mut width = 2;
        while width <= self.len() {
            let groups: Vec<String> = self
                .leaves
                .chunks(width)
                .map(|c| {
                    c.iter()
                        .map(|&i| players.name(i))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            let _ = writeln!(out, "[{}]", groups.join(" | "));
            width *= 2;
        }
        out
    }
}

fn min_of(s: &[usize]) -> usize {
    *s.iter().min().expect("non-empty sub-draw")
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

fn require_power_of_two(n: usize) -> Result<()> {
    if is_power_of_two(n) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{n} players is not a power of two")))
    }
}

/// Number of distinct unordered balanced draws over `n` players, `n!/2^(n-1)`.
pub fn num_draws(n: usize) -> Result<BigUint> {
    require_power_of_two(n)?;
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    Ok(acc >> (n - 1))
}

/// [`num_draws`] as a `u64`, for sizes where it fits (n <= 16).
pub fn num_draws_u64(n: usize) -> Result<u64> {
    num_draws(n)?
        .to_u64()
        .ok_or_else(|| Error::ResourceLimit(format!("draw count for {n} players exceeds u64")))
}

/// Canonical form of any ordered leaf assignment.
pub fn canonicalize(leaf_sequence: &[usize]) -> Result<Draw> {
    let n = leaf_sequence.len();
    require_power_of_two(n)?;
    let mut seen = vec![false; n];
    for &p in leaf_sequence {
        if p >= n || seen[p] {
            return Err(Error::invalid("leaf sequence is not a permutation of 0..n"));
        }
        seen[p] = true;
    }
    let mut leaves = leaf_sequence.to_vec();
    canonicalize_in_place(&mut leaves);
    Ok(Draw { leaves })
}

/// Returns the minimum of the slice after reordering it canonically.
fn canonicalize_in_place(leaves: &mut [usize]) -> usize {
    if leaves.len() == 1 {
        return leaves[0];
    }
    let half = leaves.len() / 2;
    let (l, r) = leaves.split_at_mut(half);
    let ml = canonicalize_in_place(l);
    let mr = canonicalize_in_place(r);
    if mr < ml {
        l.swap_with_slice(r);
        mr
    } else {
        ml
    }
}

/// Uniform sample from the `n!/2^(n-1)` draws.
pub fn random_draw<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Draw> {
    require_power_of_two(n)?;
    let mut leaves: Vec<usize> = (0..n).collect();
    leaves.shuffle(rng);
    canonicalize_in_place(&mut leaves);
    Ok(Draw { leaves })
}

fn check_cover(draw: &Draw, n: usize) -> Result<()> {
    if draw.len() != n {
        return Err(Error::invalid(format!(
            "draw has {} leaves but the tournament has {n} players",
            draw.len()
        )));
    }
    Ok(())
}

/// Plays the bracket out and returns the champion.
pub fn simulate(draw: &Draw, t: &DeterministicTournament) -> Result<usize> {
    check_cover(draw, t.len())?;
    let mut alive = draw.leaves.clone();
    while alive.len() > 1 {
        alive = alive
            .chunks(2)
            .map(|m| if t.beats(m[0], m[1]) { m[0] } else { m[1] })
            .collect();
    }
    Ok(alive[0])
}

/// Exact probability of each player (indexed by id) winning this fixed draw.
pub fn draw_win_probabilities(draw: &Draw, t: &ProbabilisticTournament) -> Result<Vec<f64>> {
    check_cover(draw, t.len())?;
    let mut out = vec![0.0; t.len()];
    bracket_probabilities(&draw.leaves, t, &mut out);
    Ok(out)
}

/// Writes per-player win probabilities for `leaves` into `out` (indexed by
/// player id). Entries for players not in `leaves` are left untouched.
pub(crate) fn bracket_probabilities(leaves: &[usize], t: &ProbabilisticTournament, out: &mut [f64]) {
    // survive[k]: probability the player at leaf k is still alive.
    let n = leaves.len();
    let mut survive = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            let (left, right) = (block..block + half, block + half..block + 2 * half);
            for k in left.clone() {
                let row = t.row(leaves[k]);
                let s: f64 = right.clone().map(|m| survive[m] * row[leaves[m]]).sum();
                next[k] = survive[k] * s;
            }
            for k in right {
                let row = t.row(leaves[k]);
                let s: f64 = left.clone().map(|m| survive[m] * row[leaves[m]]).sum();
                next[k] = survive[k] * s;
            }
        }
        std::mem::swap(&mut survive, &mut next);
        half *= 2;
    }
    for (k, &p) in leaves.iter().enumerate() {
        out[p] = survive[k];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle4() -> DeterministicTournament {
        // 0>1, 1>2, 2>0; everyone beats 3.
        DeterministicTournament::from_pairs(PlayerTable::generic(4), |i, j| {
            matches!((i, j), (0, 1) | (1, 2) | (0, 3) | (1, 3) | (2, 3))
        })
        .unwrap()
    }

    #[test]
    fn draw_counts() {
        assert_eq!(num_draws(1).unwrap(), BigUint::from(1u32));
        assert_eq!(num_draws(2).unwrap(), BigUint::from(1u32));
        assert_eq!(num_draws(4).unwrap(), BigUint::from(3u32));
        assert_eq!(num_draws(8).unwrap(), BigUint::from(315u32));
        assert_eq!(num_draws_u64(16).unwrap(), 638_512_875);
        assert!(num_draws(6).is_err());
        assert!(num_draws(0).is_err());
        // 32!/2^31
        let expected: BigUint = "122529844256906551386796875".parse().unwrap();
        assert_eq!(num_draws(32).unwrap(), expected);
        assert!(num_draws_u64(32).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&[1, 0]).unwrap().leaves(), &[0, 1]);
        assert_eq!(canonicalize(&[2, 3, 1, 0]).unwrap().leaves(), &[0, 1, 2, 3]);
        assert_eq!(canonicalize(&[0, 1, 2, 3]).unwrap().leaves(), &[0, 1, 2, 3]);
        assert_eq!(canonicalize(&[3, 1, 0, 2]).unwrap().leaves(), &[0, 2, 1, 3]);
        assert!(canonicalize(&[0, 0]).is_err());
        assert!(canonicalize(&[0, 1, 2]).is_err());
        assert!(canonicalize(&[0, 5]).is_err());
    }

    #[test]
    fn random_draw_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_draw(2, &mut rng).unwrap().leaves(), &[0, 1]);
        for _ in 0..50 {
            let d = random_draw(16, &mut rng).unwrap();
            assert_eq!(canonicalize(d.leaves()).unwrap(), d);
        }
    }

    #[test]
    fn simulate_cycle() {
        let t = cycle4();
        let two = DeterministicTournament::from_pairs(PlayerTable::generic(2), |_, _| true).unwrap();
        assert_eq!(simulate(&canonicalize(&[0, 1]).unwrap(), &two).unwrap(), 0);
        assert_eq!(simulate(&canonicalize(&[0, 3, 1, 2]).unwrap(), &t).unwrap(), 0);
        assert_eq!(simulate(&canonicalize(&[0, 1, 2, 3]).unwrap(), &t).unwrap(), 2);
        assert!(simulate(&canonicalize(&[0, 1]).unwrap(), &t).is_err());
    }

    #[test]
    fn fixed_draw_probabilities() {
        let players = PlayerTable::generic(2);
        let t = ProbabilisticTournament::from_pairs(players, |_, _| 0.7).unwrap();
        let p = draw_win_probabilities(&canonicalize(&[0, 1]).unwrap(), &t).unwrap();
        assert!((p[0] - 0.7).abs() < 1e-15 && (p[1] - 0.3).abs() < 1e-15);

        let half = ProbabilisticTournament::from_pairs(PlayerTable::generic(4), |_, _| 0.5).unwrap();
        let p = draw_win_probabilities(&canonicalize(&[0, 1, 2, 3]).unwrap(), &half).unwrap();
        assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));

        let cyc = ProbabilisticTournament::from_deterministic(&cycle4());
        let p = draw_win_probabilities(&canonicalize(&[0, 1, 2, 3]).unwrap(), &cyc).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn bracket_text() {
        let d = canonicalize(&[1, 2, 3, 0]).unwrap();
        assert_eq!(d.bracket_string(&PlayerTable::generic(4)), "((p0,p3),(p1,p2))");
        assert_eq!(d.rounds_string(&PlayerTable::generic(4)), "[p0 p3 | p1 p2]\n[p0 p3 p1 p2]\n");
    }
}
