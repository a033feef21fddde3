//! Condorcet Random instances: every lower-ranked player upsets every
//! higher-ranked one with the same probability.

use rand::Rng;

use crate::error::{Error, Result};
use crate::tournament::{DeterministicTournament, PlayerTable, ProbabilisticTournament};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrParams {
    pub n: usize,
    pub upset: f64,
}

impl CrParams {
    /// `upset` must lie in `(0, 0.5]`.
    pub fn new(n: usize, upset: f64) -> Result<Self> {
        if !(upset > 0.0 && upset <= 0.5) {
            return Err(Error::invalid(format!("upset probability {upset} outside (0, 0.5]")));
        }
        Ok(Self { n, upset })
    }
}

/// Probability matrix with ranks `1..=n` in id order; the better-ranked
/// player of each pair wins with probability `1 - upset`.
pub fn generate_cr(params: CrParams) -> Result<ProbabilisticTournament> {
    let params = CrParams::new(params.n, params.upset)?;
    ProbabilisticTournament::from_pairs(PlayerTable::generic(params.n), |_, _| 1.0 - params.upset)
}

/// One realization of match outcomes: `i` beats `j` with probability
/// `p[i][j]`, independently per pair.
pub fn sample_deterministic<R: Rng + ?Sized>(t: &ProbabilisticTournament, rng: &mut R) -> Result<DeterministicTournament> {
    DeterministicTournament::from_pairs(t.players().clone(), |i, j| rng.gen::<f64>() < t.p(i, j))
}

/// Mean over unordered pairs of the probability that the worse-ranked player wins.
pub fn average_upset_probability(t: &ProbabilisticTournament) -> f64 {
    let n = t.len();
    let players = t.players();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let (better, worse) = if players.outranks(i, j) { (i, j) } else { (j, i) };
            sum += t.p(worse, better);
            pairs += 1;
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum / pairs as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_and_biased_instances() {
        let t = generate_cr(CrParams { n: 4, upset: 0.5 }).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| t.p(i, j) == 0.5)));
        let t = generate_cr(CrParams { n: 16, upset: 0.30 }).unwrap();
        for i in 0..16 {
            for j in i + 1..16 {
                assert_eq!(t.p(i, j), 0.7);
                assert!((t.p(j, i) - 0.3).abs() < 1e-15);
            }
        }
        let t = generate_cr(CrParams { n: 8, upset: 1e-9 }).unwrap();
        assert!((1..8).all(|j| t.p(0, j) > 1.0 - 1e-8));
    }

    #[test]
    fn upset_range_enforced() {
        assert!(CrParams::new(4, 0.0).is_err());
        assert!(CrParams::new(4, 0.51).is_err());
        assert!(CrParams::new(4, f64::NAN).is_err());
        assert!(generate_cr(CrParams { n: 4, upset: -0.1 }).is_err());
        assert!(CrParams::new(4, 0.5).is_ok());
    }

    #[test]
    fn average_upset_examples() {
        let t = generate_cr(CrParams { n: 16, upset: 0.30 }).unwrap();
        assert!((average_upset_probability(&t) - 0.30).abs() < 1e-12);

        let t = ProbabilisticTournament::from_pairs(PlayerTable::generic(2), |_, _| 1.0 - 0.37401).unwrap();
        assert!((average_upset_probability(&t) - 0.37401).abs() < 1e-12);

        // Upsets listed for pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
        let upsets = [[0.0, 0.1, 0.2, 0.3], [0.0, 0.0, 0.4, 0.2], [0.0, 0.0, 0.0, 0.2]];
        let t = ProbabilisticTournament::from_pairs(PlayerTable::generic(4), |i, j| 1.0 - upsets[i][j]).unwrap();
        assert!((average_upset_probability(&t) - 1.4 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_degenerate_and_seeded() {
        let t = ProbabilisticTournament::from_pairs(PlayerTable::generic(5), |i, j| if (i + j) % 2 == 0 { 1.0 } else { 0.0 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = sample_deterministic(&t, &mut rng).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(d.beats(i, j), (i + j) % 2 == 0);
            }
        }
        let half = generate_cr(CrParams { n: 8, upset: 0.5 }).unwrap();
        let a = sample_deterministic(&half, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_deterministic(&half, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
