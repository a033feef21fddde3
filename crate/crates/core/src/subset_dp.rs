//! Bottom-up dynamic programming over power-of-two-sized player subsets.
//!
//! For a subset `S` with `|S| = 2k`, every unordered split into halves is
//! visited once by forcing `min(S)` into the first half `A`. The value for
//! player `i` in `A` accumulates `V(A, i) * sum_{j in B} V(B, j) * w(i, j)`,
//! and symmetrically for `i` in `B`.

use std::ops::{Add, Mul};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Player-count bound for the dense subset table (`2^n * n` entries).
pub const MAX_DP_PLAYERS: usize = 16;

/// Iterates all `k`-element subsets of the bits in `mask`, in increasing
/// order of their position pattern.
pub(crate) fn k_subsets(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    let bits: Vec<u64> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| 1u64 << b).collect();
    let m = bits.len();
    let mut next = if k <= m { Some(if k == 0 { 0u64 } else { (1u64 << k) - 1 }) } else { None };
    std::iter::from_fn(move || {
        let c = next?;
        next = if k == 0 {
            None
        } else {
            // Gosper's hack on the index pattern.
            let lowest = c & c.wrapping_neg();
            let ripple = c + lowest;
            let n = (((ripple ^ c) >> 2) / lowest) | ripple;
            if n >> m != 0 {
                None
            } else {
                Some(n)
            }
        };
        let mut out = 0;
        let mut pattern = c;
        while pattern != 0 {
            out |= bits[pattern.trailing_zeros() as usize];
            pattern &= pattern - 1;
        }
        Some(out)
    })
}

/// Splits of `s` into two equal halves `(a, b)` with the lowest member in `a`.
pub(crate) fn halvings(s: u64) -> impl Iterator<Item = (u64, u64)> {
    let low = s & s.wrapping_neg();
    let rest = s & !low;
    let k = s.count_ones() as usize / 2;
    k_subsets(rest, k.saturating_sub(1)).map(move |a| (a | low, s & !(a | low)))
}

pub(crate) fn members(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

pub(crate) struct Table<T> {
    n: usize,
    values: Vec<T>,
    pub halvings: u64,
}

impl<T: Copy> Table<T> {
    pub fn get(&self, set: u64, player: usize) -> T {
        self.values[set as usize * self.n + player]
    }

    pub fn full(&self) -> Vec<T> {
        let all = (1u64 << self.n) - 1;
        (0..self.n).map(|i| self.get(all, i)).collect()
    }
}

/// Fills the table for every subset whose size is a power of two, up to all
/// `n` players. `finish(value, halvings)` post-processes each accumulated
/// entry (e.g. dividing by the number of splits to keep averages).
pub(crate) fn run<T, W, F>(n: usize, zero: T, one: T, weight: W, finish: F) -> Result<Table<T>>
where
    T: Copy + Send + Sync + Add<Output = T> + Mul<Output = T>,
    W: Fn(usize, usize) -> T + Sync,
    F: Fn(T, u64) -> T + Sync,
{
    if n > MAX_DP_PLAYERS {
        return Err(Error::ResourceLimit(format!(
            "subset dynamic programming supports at most {MAX_DP_PLAYERS} players, got {n}"
        )));
    }
    if !crate::draw::is_power_of_two(n) {
        return Err(Error::invalid(format!("{n} players is not a power of two")));
    }
    let all = (1u64 << n) - 1;
    let mut values = vec![zero; (1usize << n) * n];
    for i in 0..n {
        values[(1usize << i) * n + i] = one;
    }
    let mut table = Table { n, values, halvings: 0 };
    let mut size = 2;
    while size <= n {
        let sets: Vec<u64> = k_subsets(all, size).collect();
        let rows: Vec<(u64, Vec<T>, u64)> = sets
            .par_iter()
            .map(|&s| {
                let mut acc = vec![zero; n];
                let mut splits = 0u64;
                for (a, b) in halvings(s) {
                    splits += 1;
                    accumulate(&table, a, b, &weight, &mut acc, zero);
                    accumulate(&table, b, a, &weight, &mut acc, zero);
                }
                (s, acc, splits)
            })
            .collect();
        for (s, acc, splits) in rows {
            table.halvings += splits;
            for i in members(s) {
                table.values[s as usize * n + i] = finish(acc[i], splits);
            }
        }
        size *= 2;
    }
    Ok(table)
}

fn accumulate<T, W>(table: &Table<T>, winners: u64, losers: u64, weight: &W, acc: &mut [T], zero: T)
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
    W: Fn(usize, usize) -> T,
{
    for i in members(winners) {
        let here = table.get(winners, i);
        let mut beat = zero;
        for j in members(losers) {
            beat = beat + table.get(losers, j) * weight(i, j);
        }
        acc[i] = acc[i] + here * beat;
    }
}
