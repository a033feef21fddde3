mod common;

use std::collections::HashSet;

use knockout::solver::{condorcet_winner, count_by_search, count_winning_draws, enumerate_winning_draws, find_winning_draw, kings};
use knockout::{canonicalize, num_draws_u64, simulate, DeterministicTournament, PlayerTable};
use proptest::prelude::*;

use common::{all_draws, brute_counts, random_tournament};

#[test]
fn dp_matches_brute_force() {
    for n in [2usize, 4, 8] {
        let draws = all_draws(n);
        for seed in 0..100 {
            let t = random_tournament(n, seed);
            let report = count_winning_draws(&t).unwrap();
            assert_eq!(report.counts, brute_counts(&t, &draws), "n={n} seed={seed}");
            assert_eq!(report.counts.iter().sum::<u64>(), num_draws_u64(n).unwrap());
        }
    }
}

#[test]
fn enumeration_matches_brute_force_sets() {
    let draws = all_draws(8);
    for seed in 100..130 {
        let t = random_tournament(8, seed);
        for target in 0..8 {
            let expected: HashSet<_> = draws
                .iter()
                .filter(|d| simulate(d, &t).unwrap() == target)
                .cloned()
                .collect();
            let (got, stats) = enumerate_winning_draws(&t, target, None).unwrap();
            let got_set: HashSet<_> = got.iter().cloned().collect();
            assert_eq!(got.len(), got_set.len(), "duplicates for seed {seed} target {target}");
            assert_eq!(got_set, expected);
            assert_eq!(stats.solutions_found, expected.len() as u64);
            assert!(stats.choice_points >= stats.solutions_found);
            for d in &got {
                assert_eq!(&canonicalize(d.leaves()).unwrap(), d);
            }
        }
    }
}

#[test]
fn limit_caps_enumeration() {
    let t = random_tournament(8, 5);
    let counts = count_winning_draws(&t).unwrap().counts;
    let target = (0..8).max_by_key(|&i| counts[i]).unwrap();
    assert!(counts[target] > 3);
    let (got, stats) = enumerate_winning_draws(&t, target, Some(3)).unwrap();
    assert_eq!(got.len(), 3);
    assert_eq!(stats.solutions_found, 3);
}

#[test]
fn sixteen_players_sum_to_all_draws() {
    for seed in 0..5 {
        let t = random_tournament(16, seed);
        let report = count_winning_draws(&t).unwrap();
        assert_eq!(report.counts.iter().sum::<u64>(), 638_512_875);
        assert!((report.shares().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn search_statistics_agree_with_dp_at_sixteen() {
    let t = random_tournament(16, 77);
    let report = count_winning_draws(&t).unwrap().with_search_stats(&t).unwrap();
    let rows = report.search.as_ref().unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.all.count, report.counts[i]);
        assert_eq!(row.first.solutions_found, u64::from(report.counts[i] > 0));
    }
}

#[test]
fn condorcet_extremes() {
    // Player 5 beats everyone, player 2 loses to everyone.
    let t = DeterministicTournament::from_pairs(PlayerTable::generic(16), |i, j| {
        if i == 5 || j == 5 {
            i == 5
        } else if i == 2 || j == 2 {
            j == 2
        } else {
            (i * 31 + j * 17) % 7 < 3
        }
    })
    .unwrap();
    assert_eq!(condorcet_winner(&t), Some(5));
    assert_eq!(kings(&t), vec![5]);
    let counts = count_winning_draws(&t).unwrap().counts;
    assert_eq!(counts[5], 638_512_875);
    assert_eq!(counts[2], 0);
    assert!(find_winning_draw(&t, 2).unwrap().0.is_none());

    // Without the Condorcet winner nobody is forced.
    let rest = t.drop_player(5).unwrap().drop_player(2).unwrap();
    assert_eq!(rest.len(), 14);
    assert_eq!(condorcet_winner(&rest), None);
}

fn brute_kings(t: &DeterministicTournament) -> Vec<usize> {
    let n = t.len();
    (0..n)
        .filter(|&i| (0..n).all(|j| j == i || t.beats(i, j) || (0..n).any(|k| t.beats(i, k) && t.beats(k, j))))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn find_agrees_with_count(seed in any::<u64>()) {
        let t = random_tournament(8, seed);
        let counts = count_winning_draws(&t).unwrap().counts;
        for target in 0..8 {
            let (found, stats) = find_winning_draw(&t, target).unwrap();
            prop_assert_eq!(found.is_some(), counts[target] > 0);
            if let Some(d) = found {
                prop_assert_eq!(simulate(&d, &t).unwrap(), target);
            }
            prop_assert!(stats.choice_points >= stats.solutions_found);
            prop_assert_eq!(count_by_search(&t, target).unwrap().count, counts[target]);
        }
    }

    #[test]
    fn kings_match_definition(seed in any::<u64>(), n in 2usize..20) {
        let t = random_tournament(n, seed);
        prop_assert_eq!(kings(&t), brute_kings(&t));
        if let Some(w) = condorcet_winner(&t) {
            prop_assert!(kings(&t).contains(&w));
        }
    }
}
