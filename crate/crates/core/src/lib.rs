//! Analysis of balanced knockout tournaments.
//!
//! - [`draw`]: canonical brackets, counting, sampling and playing them out.
//! - [`solver`]: which draws a player can win (tournament fixing), kings and
//!   Condorcet winners.
//! - [`crmodel`]: Condorcet Random probability matrices.
//! - [`winprob`]: win probabilities under a uniformly random draw.
//! - [`stats`]: ECDFs, two-sample KS tests, heavy-tail fits and the upset
//!   probability scan.
//! - [`ingest`]: CSV match data and the rules that turn it into tournaments.

pub mod crmodel;
pub mod draw;
pub mod error;
pub mod ingest;
pub mod solver;
pub mod stats;
mod subset_dp;
pub mod tournament;
pub mod winprob;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use draw::{canonicalize, draw_win_probabilities, num_draws, num_draws_u64, random_draw, simulate, Draw};
pub use error::{Error, Result};
pub use subset_dp::MAX_DP_PLAYERS;
pub use tournament::{DeterministicTournament, PlayerTable, ProbabilisticTournament};
