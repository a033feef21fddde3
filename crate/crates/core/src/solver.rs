//! Tournament fixing: which draws make a given player champion.
//!
//! Two independent routes are provided. [`count_winning_draws`] runs the
//! bottom-up subset DP over every power-of-two-sized subset. The search
//! functions ([`find_winning_draw`], [`enumerate_winning_draws`],
//! [`count_by_search`]) work top-down from the target: at each sub-bracket
//! they branch on which players share the target's half, then on which
//! opponent wins the other half, pruning with memoized feasible-winner sets.
//!
//! A choice point is one alternative tried at a branching node: one
//! candidate half, or one candidate opponent for the final of a sub-bracket.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::ops::ControlFlow;
use std::time::Instant;

use crate::draw::{is_power_of_two, num_draws_u64, Draw};
use crate::error::{Error, Result};
use crate::subset_dp::{self, k_subsets, members};
use crate::tournament::DeterministicTournament;

/// Search-tree instrumentation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchStats {
    pub choice_points: u64,
    pub solutions_found: u64,
    /// Wall time in seconds.
    pub elapsed: f64,
}

/// Cost of a memoized counting search. Sub-bracket counts are multiplied
/// rather than enumerated, so `choice_points` can be far below the count.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CountSearchStats {
    pub count: u64,
    pub choice_points: u64,
    /// Distinct (sub-bracket, winner) states evaluated.
    pub states: u64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlayerSearch {
    pub first: SearchStats,
    pub all: CountSearchStats,
}

/// Per-player winning-draw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct WinCountReport {
    /// Indexed by player id.
    pub counts: Vec<u64>,
    /// `num_draws(n)`.
    pub total: u64,
    /// Number of subset splits the DP evaluated.
    pub dp_halvings: u64,
    pub dp_elapsed: f64,
    /// Per-player search statistics, filled by [`WinCountReport::with_search_stats`].
    pub search: Option<Vec<PlayerSearch>>,
}

impl WinCountReport {
    pub fn share(&self, player: usize) -> f64 {
        self.counts[player] as f64 / self.total as f64
    }

    pub fn shares(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.share(i)).collect()
    }

    /// Runs the first-solution search and the memoized counting search for
    /// every player, checking both against the DP counts.
    pub fn with_search_stats(mut self, t: &DeterministicTournament) -> Result<Self> {
        let mut rows = Vec::with_capacity(t.len());
        for target in 0..t.len() {
            let (found, first) = find_winning_draw(t, target)?;
            let all = count_by_search(t, target)?;
            debug_assert_eq!(found.is_some(), self.counts[target] > 0);
            if all.count != self.counts[target] {
                return Err(Error::invalid(format!(
                    "search count {} disagrees with subset count {} for player {target}",
                    all.count, self.counts[target]
                )));
            }
            rows.push(PlayerSearch { first, all });
        }
        self.search = Some(rows);
        Ok(self)
    }
}

fn check_bracket(t: &DeterministicTournament, target: Option<usize>) -> Result<()> {
    if !is_power_of_two(t.len()) {
        return Err(Error::invalid(format!("{} players is not a power of two", t.len())));
    }
    if let Some(target) = target {
        if target >= t.len() {
            return Err(Error::invalid(format!("no player {target} among {}", t.len())));
        }
    }
    Ok(())
}

/// Exact winning-draw count for every player via the subset DP.
pub fn count_winning_draws(t: &DeterministicTournament) -> Result<WinCountReport> {
    check_bracket(t, None)?;
    let start = Instant::now();
    let table = subset_dp::run(
        t.len(),
        0u64,
        1u64,
        |i, j| u64::from(t.beats(i, j)),
        |v, _| v,
    )?;
    Ok(WinCountReport {
        counts: table.full(),
        total: num_draws_u64(t.len())?,
        dp_halvings: table.halvings,
        dp_elapsed: start.elapsed().as_secs_f64(),
        search: None,
    })
}

/// Shared state for the top-down searches.
struct Search<'a> {
    t: &'a DeterministicTournament,
    feasible: RefCell<HashMap<u64, u64>>,
    choice_points: Cell<u64>,
}

impl<'a> Search<'a> {
    fn new(t: &'a DeterministicTournament) -> Self {
        Self { t, feasible: RefCell::new(HashMap::new()), choice_points: Cell::new(0) }
    }

    fn tick(&self) {
        self.choice_points.set(self.choice_points.get() + 1);
    }

    /// Players who win at least one draw of the sub-bracket `s`.
    fn feasible(&self, s: u64) -> u64 {
        if s.count_ones() == 1 {
            return s;
        }
        if let Some(&w) = self.feasible.borrow().get(&s) {
            return w;
        }
        let mut winners = 0;
        for (a, b) in subset_dp::halvings(s) {
            let (fa, fb) = (self.feasible(a), self.feasible(b));
            for i in members(fa & !winners) {
                if self.t.beaten_by(i) & fb != 0 {
                    winners |= 1 << i;
                }
            }
            for j in members(fb & !winners) {
                if self.t.beaten_by(j) & fa != 0 {
                    winners |= 1 << j;
                }
            }
            if winners == s {
                break;
            }
        }
        self.feasible.borrow_mut().insert(s, winners);
        winners
    }

    /// Branches of `s` won by `w`: candidate halves containing `w`, each with
    /// the opponents who can win the other half and lose to `w`.
    fn branches(&self, s: u64, w: usize) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        let k = s.count_ones() as usize / 2;
        let rest = s & !(1 << w);
        k_subsets(rest, k - 1).filter_map(move |others| {
            self.tick();
            let a = others | 1 << w;
            let b = s & !a;
            if self.feasible(a) >> w & 1 == 0 {
                return None;
            }
            let opponents = self.feasible(b) & self.t.beaten_by(w);
            (opponents != 0).then_some((a, b, opponents))
        })
    }

    fn find(&self, s: u64, w: usize) -> Option<Vec<usize>> {
        if s.count_ones() == 1 {
            return Some(vec![w]);
        }
        for (a, b, opponents) in self.branches(s, w) {
            for j in members(opponents) {
                self.tick();
                let left = self.find(a, w);
                let right = self.find(b, j);
                if let (Some(l), Some(r)) = (left, right) {
                    return Some(Draw::join(&l, &r).leaves().to_vec());
                }
            }
        }
        None
    }

    fn enumerate(&self, s: u64, w: usize, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if s.count_ones() == 1 {
            return visit(&[w]);
        }
        let branches: Vec<_> = self.branches(s, w).collect();
        for (a, b, opponents) in branches {
            for j in members(opponents) {
                self.tick();
                self.enumerate(a, w, &mut |left| {
                    self.enumerate(b, j, &mut |right| visit(Draw::join(left, right).leaves()))
                })?;
            }
        }
        ControlFlow::Continue(())
    }

    fn count(&self, s: u64, w: usize, memo: &mut HashMap<(u64, usize), u64>) -> u64 {
        if s.count_ones() == 1 {
            return 1;
        }
        if let Some(&c) = memo.get(&(s, w)) {
            return c;
        }
        let branches: Vec<_> = self.branches(s, w).collect();
        let mut total = 0;
        for (a, b, opponents) in branches {
            let mut beaten = 0;
            for j in members(opponents) {
                self.tick();
                beaten += self.count(b, j, memo);
            }
            total += self.count(a, w, memo) * beaten;
        }
        memo.insert((s, w), total);
        total
    }
}

/// Some draw won by `target`, or `None` when no draw is.
pub fn find_winning_draw(t: &DeterministicTournament, target: usize) -> Result<(Option<Draw>, SearchStats)> {
    check_bracket(t, Some(target))?;
    let start = Instant::now();
    let search = Search::new(t);
    let found = search.find(t.all_mask(), target).map(Draw::from_canonical_unchecked);
    let stats = SearchStats {
        choice_points: search.choice_points.get().max(u64::from(t.len() == 1)),
        solutions_found: u64::from(found.is_some()),
        elapsed: start.elapsed().as_secs_f64(),
    };
    Ok((found, stats))
}

/// Streams distinct canonical draws won by `target` to `visit` until it
/// breaks or `limit` draws have been produced. Draws arrive in a fixed
/// order for a given tournament.
pub fn for_each_winning_draw(
    t: &DeterministicTournament,
    target: usize,
    limit: Option<u64>,
    mut visit: impl FnMut(&Draw) -> ControlFlow<()>,
) -> Result<SearchStats> {
    check_bracket(t, Some(target))?;
    let start = Instant::now();
    let mut produced = 0u64;
    if limit != Some(0) {
        let search = Search::new(t);
        let _ = search.enumerate(t.all_mask(), target, &mut |leaves| {
            produced += 1;
            let flow = visit(&Draw::from_canonical_unchecked(leaves.to_vec()));
            if flow.is_break() || limit.is_some_and(|l| produced >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        return Ok(SearchStats {
            choice_points: search.choice_points.get().max(u64::from(t.len() == 1)),
            solutions_found: produced,
            elapsed: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SearchStats { elapsed: start.elapsed().as_secs_f64(), ..SearchStats::default() })
}

/// Collects up to `limit` winning draws for `target`.
pub fn enumerate_winning_draws(
    t: &DeterministicTournament,
    target: usize,
    limit: Option<u64>,
) -> Result<(Vec<Draw>, SearchStats)> {
    let mut out = Vec::new();
    let stats = for_each_winning_draw(t, target, limit, |d| {
        out.push(d.clone());
        ControlFlow::Continue(())
    })?;
    Ok((out, stats))
}

/// Counts `target`'s winning draws by top-down search with memoized
/// sub-bracket counts.
pub fn count_by_search(t: &DeterministicTournament, target: usize) -> Result<CountSearchStats> {
    check_bracket(t, Some(target))?;
    let start = Instant::now();
    let search = Search::new(t);
    let mut memo = HashMap::new();
    let count = search.count(t.all_mask(), target, &mut memo);
    Ok(CountSearchStats {
        count,
        choice_points: search.choice_points.get(),
        states: memo.len() as u64,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Players who beat every other player directly or through one intermediary.
pub fn kings(t: &DeterministicTournament) -> Vec<usize> {
    let all = t.all_mask();
    (0..t.len())
        .filter(|&i| {
            let direct = t.beaten_by(i);
            let two_step = members(direct).fold(direct, |acc, k| acc | t.beaten_by(k));
            (two_step | 1 << i) & all == all
        })
        .collect()
}

pub fn condorcet_winner(t: &DeterministicTournament) -> Option<usize> {
    let all = t.all_mask();
    (0..t.len()).find(|&i| t.beaten_by(i) | 1 << i == all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::draw::simulate;
    use crate::tournament::PlayerTable;

    fn cycle4() -> DeterministicTournament {
        DeterministicTournament::from_pairs(PlayerTable::generic(4), |i, j| {
            matches!((i, j), (0, 1) | (1, 2) | (0, 3) | (1, 3) | (2, 3))
        })
        .unwrap()
    }

    #[test]
    fn cycle_counts() {
        let r = count_winning_draws(&cycle4()).unwrap();
        assert_eq!(r.counts, vec![1, 1, 1, 0]);
        assert_eq!(r.total, 3);
        let two = DeterministicTournament::from_pairs(PlayerTable::generic(2), |_, _| true).unwrap();
        assert_eq!(count_winning_draws(&two).unwrap().counts, vec![1, 0]);
    }

    #[test]
    fn cycle_find() {
        let t = cycle4();
        let (d, stats) = find_winning_draw(&t, 0).unwrap();
        let d = d.unwrap();
        assert_eq!(d.leaves(), &[0, 3, 1, 2]);
        assert_eq!(simulate(&d, &t).unwrap(), 0);
        assert!(stats.choice_points >= stats.solutions_found);
        assert!(find_winning_draw(&t, 3).unwrap().0.is_none());
        assert!(find_winning_draw(&t, 4).is_err());
    }

    #[test]
    fn enumeration_limits() {
        let t = cycle4();
        assert_eq!(enumerate_winning_draws(&t, 0, None).unwrap().0.len(), 1);
        assert!(enumerate_winning_draws(&t, 0, Some(0)).unwrap().0.is_empty());
        assert!(enumerate_winning_draws(&t, 3, None).unwrap().0.is_empty());
    }

    #[test]
    fn count_search_matches_dp() {
        let t = cycle4();
        for p in 0..4 {
            assert_eq!(count_by_search(&t, p).unwrap().count, [1, 1, 1, 0][p]);
        }
    }

    #[test]
    fn kings_and_condorcet() {
        let t = cycle4();
        assert_eq!(kings(&t), vec![0, 1, 2]);
        assert_eq!(condorcet_winner(&t), None);
        let top = DeterministicTournament::from_pairs(PlayerTable::generic(4), |i, _| i == 0).unwrap();
        assert_eq!(condorcet_winner(&top), Some(0));
        assert!(kings(&top).contains(&0));
        assert_eq!(count_winning_draws(&top).unwrap().counts[0], 3);
        let two = DeterministicTournament::from_pairs(PlayerTable::generic(2), |_, _| false).unwrap();
        assert_eq!(kings(&two), vec![1]);
    }

    #[test]
    fn too_many_players_for_dp() {
        let t = DeterministicTournament::from_pairs(PlayerTable::generic(32), |i, j| (i * 7 + j) % 3 == 0).unwrap();
        assert!(matches!(count_winning_draws(&t), Err(Error::ResourceLimit(_))));
    }
}
