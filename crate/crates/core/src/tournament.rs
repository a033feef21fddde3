//! Players and pairwise relations.
//!
//! A [`DeterministicTournament`] is a complete, antisymmetric "beats"
//! relation. A [`ProbabilisticTournament`] holds pairwise win probabilities
//! with `p[i][j] + p[j][i] == 1`.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Largest player count a [`DeterministicTournament`] can hold (one `u64`
/// bitmask row per player).
pub const MAX_PLAYERS: usize = 64;

/// Tolerance on `p[i][j] + p[j][i] = 1`.
pub const COMPLEMENT_TOLERANCE: f64 = 1e-12;

/// Player ids are `0..n`; each has a display name and a unique rank (1 = best).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerTable {
    names: Vec<String>,
    ranks: Vec<u32>,
}

impl PlayerTable {
    pub fn new(names: Vec<String>, ranks: Vec<u32>) -> Result<Self> {
        if names.len() != ranks.len() {
            return Err(Error::invalid(format!(
                "{} names but {} ranks",
                names.len(),
                ranks.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::invalid("empty player name"));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("duplicate player name {name:?}")));
            }
        }
        let n = ranks.len();
        let mut hit = vec![false; n];
        for &r in &ranks {
            let r = r as usize;
            if r == 0 || r > n || hit[r - 1] {
                return Err(Error::invalid(format!(
                    "ranks must be a permutation of 1..={n}"
                )));
            }
            hit[r - 1] = true;
        }
        Ok(Self { names, ranks })
    }

    /// Names in rank order: id 0 is rank 1.
    pub fn ranked(names: Vec<String>) -> Result<Self> {
        let ranks = (1..=names.len() as u32).collect();
        Self::new(names, ranks)
    }

    /// Players named `p0, p1, ...` ranked in id order.
    pub fn generic(n: usize) -> Self {
        Self {
            names: (0..n).map(|i| format!("p{i}")).collect(),
            ranks: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self, id: usize) -> u32 {
        self.ranks[id]
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// True when `i` is ranked better than `j`.
    pub fn outranks(&self, i: usize, j: usize) -> bool {
        self.ranks[i] < self.ranks[j]
    }

    /// Ids sorted best rank first.
    pub fn by_rank(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.len()).collect();
        ids.sort_by_key(|&i| self.ranks[i]);
        ids
    }

    /// Removes `id`, shifting later ids down and compacting the ranks so they
    /// stay a permutation of `1..n-1` in the same relative order.
    fn without(&self, id: usize) -> Self {
        let removed = self.ranks[id];
        let mut names = self.names.clone();
        let mut ranks = self.ranks.clone();
        names.remove(id);
        ranks.remove(id);
        for r in &mut ranks {
            if *r > removed {
                *r -= 1;
            }
        }
        Self { names, ranks }
    }
}

/// Complete antisymmetric beats relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicTournament {
    players: PlayerTable,
    rows: Vec<u64>,
}

impl DeterministicTournament {
    /// Builds the relation from `i_beats_j(i, j)` evaluated for `i < j` only.
    pub fn from_pairs(players: PlayerTable, mut i_beats_j: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let n = players.len();
        check_size(n)?;
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if i_beats_j(i, j) {
                    rows[i] |= 1 << j;
                } else {
                    rows[j] |= 1 << i;
                }
            }
        }
        Ok(Self { players, rows })
    }

    /// Builds from a full boolean matrix, rejecting relations that are not
    /// irreflexive, complete and antisymmetric.
    pub fn from_matrix(players: PlayerTable, beats: &[Vec<bool>]) -> Result<Self> {
        let n = players.len();
        check_size(n)?;
        if beats.len() != n || beats.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("beats matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if beats[i][i] {
                return Err(Error::invalid(format!("player {i} beats itself")));
            }
            for j in i + 1..n {
                if beats[i][j] == beats[j][i] {
                    return Err(Error::invalid(format!(
                        "pair ({i}, {j}) must have exactly one winner"
                    )));
                }
            }
        }
        Self::from_pairs(players, |i, j| beats[i][j])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn players(&self) -> &PlayerTable {
        &self.players
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Bitmask of the players `i` beats.
    pub fn beaten_by(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Bitmask with one bit per player.
    pub fn all_mask(&self) -> u64 {
        full_mask(self.len())
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.beats(i, j)).collect())
            .collect()
    }

    /// Removes a player and reindexes; relations among the rest are kept.
    pub fn drop_player(&self, id: usize) -> Result<Self> {
        check_drop(self.len(), id)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&k| k != id).collect();
        Self::from_pairs(self.players.without(id), |i, j| self.beats(keep[i], keep[j]))
    }
}

/// Pairwise win-probability matrix. The diagonal is stored as 0.5 and never read.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticTournament {
    players: PlayerTable,
    p: Vec<f64>,
}

impl ProbabilisticTournament {
    /// Builds from `p(i, j)` evaluated for `i < j`; the lower triangle is the
    /// complement.
    pub fn from_pairs(players: PlayerTable, mut prob: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = players.len();
        let mut p = vec![0.5; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = prob(i, j);
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::invalid(format!(
                        "p[{i}][{j}] = {v} is not a probability"
                    )));
                }
                p[i * n + j] = v;
                p[j * n + i] = 1.0 - v;
            }
        }
        Ok(Self { players, p })
    }

    /// Builds from a full matrix, checking `p[i][j] + p[j][i] = 1` within
    /// [`COMPLEMENT_TOLERANCE`]. The diagonal is ignored.
    pub fn from_matrix(players: PlayerTable, matrix: &[Vec<f64>]) -> Result<Self> {
        let n = players.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("probability matrix must be {n}x{n}")));
        }
        let mut p = vec![0.5; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = matrix[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::invalid(format!(
                        "p[{i}][{j}] = {v} is not a probability"
                    )));
                }
                if (v + matrix[j][i] - 1.0).abs() > COMPLEMENT_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "p[{i}][{j}] + p[{j}][{i}] = {} (expected 1)",
                        v + matrix[j][i]
                    )));
                }
                p[i * n + j] = v;
            }
        }
        Ok(Self { players, p })
    }

    /// The 0/1 matrix of a deterministic tournament.
    pub fn from_deterministic(t: &DeterministicTournament) -> Self {
        Self::from_pairs(t.players().clone(), |i, j| if t.beats(i, j) { 1.0 } else { 0.0 })
            .expect("0/1 entries are probabilities")
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn players(&self) -> &PlayerTable {
        &self.players
    }

    /// Probability that `i` beats `j`.
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.p[i * n..(i + 1) * n]
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rounds to a deterministic relation: `i` beats `j` when `p[i][j] > 0.5`;
    /// exact ties go to the better-ranked player.
    pub fn round(&self) -> Result<DeterministicTournament> {
        DeterministicTournament::from_pairs(self.players.clone(), |i, j| {
            let v = self.p(i, j);
            v > 0.5 || (v == 0.5 && self.players.outranks(i, j))
        })
    }

    pub fn drop_player(&self, id: usize) -> Result<Self> {
        check_drop(self.len(), id)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&k| k != id).collect();
        Self::from_pairs(self.players.without(id), |i, j| self.p(keep[i], keep[j]))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_PLAYERS {
        return Err(Error::ResourceLimit(format!(
            "{n} players exceeds the {MAX_PLAYERS}-player limit"
        )));
    }
    Ok(())
}

fn check_drop(n: usize, id: usize) -> Result<()> {
    if id >= n {
        return Err(Error::invalid(format!("no player {id} among {n}")));
    }
    if n - 1 < 2 {
        return Err(Error::invalid("dropping would leave fewer than 2 players"));
    }
    Ok(())
}
