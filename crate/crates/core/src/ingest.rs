//! Match-data files and the rules that turn them into tournaments.
//!
//! File formats (UTF-8 CSV, header row required, names quoted when needed):
//!
//! | file        | header                                    |
//! |-------------|-------------------------------------------|
//! | matches.csv | `season,home,away,home_goals,away_goals`  |
//! | h2h.csv     | `player_a,player_b,a_wins,b_wins`         |
//! | ranks.csv   | `rank,name` (rank 1 = best)               |
//! | matrix.csv  | `player,<name 1>,...,<name n>`            |
//!
//! Any other header is rejected.

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::tournament::{DeterministicTournament, PlayerTable, ProbabilisticTournament};

pub const MATCHES_HEADER: [&str; 5] = ["season", "home", "away", "home_goals", "away_goals"];
pub const H2H_HEADER: [&str; 4] = ["player_a", "player_b", "a_wins", "b_wins"];
pub const RANKS_HEADER: [&str; 2] = ["rank", "name"];
pub const MATRIX_FIRST_COLUMN: &str = "player";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub season: String,
    pub home: String,
    pub away: String,
    pub home_goals: u32,
    pub away_goals: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadToHeadRecord {
    pub player_a: String,
    pub player_b: String,
    pub a_wins: u32,
    pub b_wins: u32,
}

/// Names best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingTable {
    names: Vec<String>,
}

impl RankingTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        // PlayerTable enforces non-empty unique names.
        PlayerTable::ranked(names.clone())?;
        Ok(Self { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn players(&self) -> PlayerTable {
        PlayerTable::ranked(self.names.clone()).expect("validated on construction")
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
    }
}

/// Both views of one data set, plus the pairs whose probability was set to
/// 0.5 for lack of a decisive record (never met, or level).
#[derive(Debug, Clone, PartialEq)]
pub struct Tournaments {
    pub deterministic: DeterministicTournament,
    pub probabilistic: ProbabilisticTournament,
    /// Pairs (better-ranked first) decided by rank in the deterministic view.
    pub rank_decided: Vec<(usize, usize)>,
    /// Pairs with no games (or no goals) between them.
    pub no_data: Vec<(usize, usize)>,
}

impl Tournaments {
    pub fn drop_player(&self, id: usize) -> Result<Self> {
        let remap = |pairs: &[(usize, usize)]| {
            pairs
                .iter()
                .filter(|&&(a, b)| a != id && b != id)
                .map(|&(a, b)| (a - usize::from(a > id), b - usize::from(b > id)))
                .collect()
        };
        Ok(Self {
            deterministic: self.deterministic.drop_player(id)?,
            probabilistic: self.probabilistic.drop_player(id)?,
            rank_decided: remap(&self.rank_decided),
            no_data: remap(&self.no_data),
        })
    }
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(r)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str], file: &str) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::invalid(format!(
            "{file}: expected header `{}`, found `{}`",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn count_field(record: &csv::StringRecord, idx: usize, file: &str) -> Result<u32> {
    let raw = &record[idx];
    let line = record.position().map_or(0, |p| p.line());
    if !raw.bytes().all(|b| b.is_ascii_digit()) || raw.is_empty() {
        return Err(Error::invalid(format!("{file} line {line}: `{raw}` is not a non-negative base-10 integer")));
    }
    raw.parse()
        .map_err(|_| Error::invalid(format!("{file} line {line}: `{raw}` is out of range")))
}

fn name_field(record: &csv::StringRecord, idx: usize, file: &str) -> Result<String> {
    let raw = &record[idx];
    if raw.is_empty() {
        let line = record.position().map_or(0, |p| p.line());
        return Err(Error::invalid(format!("{file} line {line}: empty name")));
    }
    Ok(raw.to_string())
}

pub fn read_matches(r: impl Read) -> Result<Vec<MatchRecord>> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &MATCHES_HEADER, "matches.csv")?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let m = MatchRecord {
                season: rec[0].to_string(),
                home: name_field(&rec, 1, "matches.csv")?,
                away: name_field(&rec, 2, "matches.csv")?,
                home_goals: count_field(&rec, 3, "matches.csv")?,
                away_goals: count_field(&rec, 4, "matches.csv")?,
            };
            if m.home == m.away {
                return Err(Error::invalid(format!("{} plays itself", m.home)));
            }
            Ok(m)
        })
        .collect()
}

pub fn write_matches(w: impl Write, matches: &[MatchRecord]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(MATCHES_HEADER)?;
    for m in matches {
        wtr.write_record([
            m.season.as_str(),
            &m.home,
            &m.away,
            &m.home_goals.to_string(),
            &m.away_goals.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_h2h(r: impl Read) -> Result<Vec<HeadToHeadRecord>> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &H2H_HEADER, "h2h.csv")?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let h = HeadToHeadRecord {
                player_a: name_field(&rec, 0, "h2h.csv")?,
                player_b: name_field(&rec, 1, "h2h.csv")?,
                a_wins: count_field(&rec, 2, "h2h.csv")?,
                b_wins: count_field(&rec, 3, "h2h.csv")?,
            };
            if h.player_a == h.player_b {
                return Err(Error::invalid(format!("{} is listed against itself", h.player_a)));
            }
            Ok(h)
        })
        .collect()
}

pub fn write_h2h(w: impl Write, records: &[HeadToHeadRecord]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(H2H_HEADER)?;
    for h in records {
        wtr.write_record([
            h.player_a.as_str(),
            &h.player_b,
            &h.a_wins.to_string(),
            &h.b_wins.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_ranks(r: impl Read) -> Result<RankingTable> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &RANKS_HEADER, "ranks.csv")?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push((count_field(&rec, 0, "ranks.csv")?, name_field(&rec, 1, "ranks.csv")?));
    }
    rows.sort_by_key(|(r, _)| *r);
    if rows.iter().enumerate().any(|(k, (r, _))| *r as usize != k + 1) {
        return Err(Error::invalid(format!("ranks.csv: ranks must be 1..={} without gaps", rows.len())));
    }
    RankingTable::new(rows.into_iter().map(|(_, n)| n).collect())
}

pub fn write_ranks(w: impl Write, ranks: &RankingTable) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(RANKS_HEADER)?;
    for (k, name) in ranks.names().iter().enumerate() {
        wtr.write_record([(k + 1).to_string().as_str(), name])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a square probability matrix. Rows must appear in header order;
/// players are ranked in that order.
pub fn read_matrix(r: impl Read) -> Result<ProbabilisticTournament> {
    let mut rdr = reader(r);
    let header = rdr.headers()?.clone();
    if header.get(0) != Some(MATRIX_FIRST_COLUMN) {
        return Err(Error::invalid(format!(
            "matrix.csv: header must start with `{MATRIX_FIRST_COLUMN}`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let players = PlayerTable::ranked(names.clone())?;
    let mut matrix = Vec::with_capacity(names.len());
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if k >= names.len() || rec[0] != names[k] {
            return Err(Error::invalid(format!(
                "matrix.csv: row {} is `{}` but rows must follow the header order",
                k + 1,
                &rec[0]
            )));
        }
        let row = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("matrix.csv: `{v}` in row {} is not a number", k + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        matrix.push(row);
    }
    if matrix.len() != names.len() {
        return Err(Error::invalid(format!("matrix.csv: {} rows for {} players", matrix.len(), names.len())));
    }
    ProbabilisticTournament::from_matrix(players, &matrix)
}

/// Writes the matrix with players in rank order and the diagonal as 0.5.
/// Values use the shortest representation that reads back identically.
pub fn write_matrix(w: impl Write, t: &ProbabilisticTournament) -> Result<()> {
    let order = t.players().by_rank();
    let mut wtr = writer(w);
    let mut header = vec![MATRIX_FIRST_COLUMN.to_string()];
    header.extend(order.iter().map(|&i| t.players().name(i).to_string()));
    wtr.write_record(&header)?;
    for &i in &order {
        let mut row = vec![t.players().name(i).to_string()];
        row.extend(order.iter().map(|&j| format!("{}", t.p(i, j))));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Deterministic and probabilistic tournaments from a home-and-away season.
///
/// The pair winner has more aggregate goals over both legs; then more away
/// goals; then the better rank. The probability is each side's share of
/// the aggregate goals, 0.5 when neither scored.
pub fn soccer_to_tournaments(matches: &[MatchRecord], ranks: &RankingTable, season: Option<&str>) -> Result<Tournaments> {
    let season = match season {
        Some(s) => s.to_string(),
        None => {
            let seasons: BTreeSet<&str> = matches.iter().map(|m| m.season.as_str()).collect();
            match seasons.len() {
                1 => seasons.into_iter().next().unwrap().to_string(),
                0 => return Err(Error::invalid("no matches")),
                _ => {
                    return Err(Error::invalid(format!(
                        "several seasons present ({}); select one",
                        seasons.into_iter().collect::<Vec<_>>().join(", ")
                    )))
                }
            }
        }
    };
    let index = ranks.index();
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::invalid(format!("team {name:?} is not in the ranking")))
    };
    // (home, away) -> (home goals, away goals)
    let mut legs: HashMap<(usize, usize), (u32, u32)> = HashMap::new();
    for m in matches.iter().filter(|m| m.season == season) {
        let (h, a) = (lookup(&m.home)?, lookup(&m.away)?);
        if legs.insert((h, a), (m.home_goals, m.away_goals)).is_some() {
            return Err(Error::invalid(format!(
                "{} v {} appears twice in season {season}",
                m.home, m.away
            )));
        }
    }
    let n = ranks.len();
    let names = ranks.names();
    let mut missing = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !legs.contains_key(&(i, j)) {
                missing.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::IncompleteData(missing));
    }

    struct Pair {
        i_wins: bool,
        p: f64,
        by_rank: bool,
        no_goals: bool,
    }
    let decide = |i: usize, j: usize| {
        let (ij_home, ij_away) = legs[&(i, j)];
        let (ji_home, ji_away) = legs[&(j, i)];
        let (goals_i, goals_j) = (ij_home + ji_away, ij_away + ji_home);
        let (away_i, away_j) = (ji_away, ij_away);
        let total = goals_i + goals_j;
        let (i_wins, by_rank) = if goals_i != goals_j {
            (goals_i > goals_j, false)
        } else if away_i != away_j {
            (away_i > away_j, false)
        } else {
            (i < j, true)
        };
        let p = if total == 0 { 0.5 } else { goals_i as f64 / total as f64 };
        Pair { i_wins, p, by_rank, no_goals: total == 0 }
    };
    let mut pairs = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.insert((i, j), decide(i, j));
        }
    }
    let players = ranks.players();
    Ok(Tournaments {
        deterministic: DeterministicTournament::from_pairs(players.clone(), |i, j| pairs[&(i, j)].i_wins)?,
        probabilistic: ProbabilisticTournament::from_pairs(players, |i, j| pairs[&(i, j)].p)?,
        rank_decided: sorted_pairs(pairs.iter().filter(|(_, p)| p.by_rank).map(|(k, _)| *k)),
        no_data: sorted_pairs(pairs.iter().filter(|(_, p)| p.no_goals).map(|(k, _)| *k)),
    })
}

/// Deterministic and probabilistic tournaments from lifetime head-to-head
/// records. A player beats another with a winning record above 50%; level
/// records and pairs that never met go to the better rank and get
/// probability 0.5.
pub fn tennis_to_tournaments(records: &[HeadToHeadRecord], ranks: &RankingTable) -> Result<Tournaments> {
    let index = ranks.index();
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::invalid(format!("player {name:?} is not in the ranking")))
    };
    // (lower id, higher id) -> (wins of lower id, wins of higher id)
    let mut wins: HashMap<(usize, usize), (u32, u32)> = HashMap::new();
    for r in records {
        let (a, b) = (lookup(&r.player_a)?, lookup(&r.player_b)?);
        let key = (a.min(b), a.max(b));
        let value = if a < b { (r.a_wins, r.b_wins) } else { (r.b_wins, r.a_wins) };
        if wins.insert(key, value).is_some() {
            return Err(Error::invalid(format!(
                "{} v {} appears more than once",
                r.player_a, r.player_b
            )));
        }
    }
    let n = ranks.len();
    let mut rank_decided = Vec::new();
    let mut no_data = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (wi, wj) = wins.get(&(i, j)).copied().unwrap_or((0, 0));
            if wi == wj {
                rank_decided.push((i, j));
            }
            if wi + wj == 0 {
                no_data.push((i, j));
            }
        }
    }
    let record = |i: usize, j: usize| wins.get(&(i, j)).copied().unwrap_or((0, 0));
    let players = ranks.players();
    Ok(Tournaments {
        // Ids follow rank, so i < j means i is better ranked.
        deterministic: DeterministicTournament::from_pairs(players.clone(), |i, j| {
            let (wi, wj) = record(i, j);
            wi >= wj
        })?,
        probabilistic: ProbabilisticTournament::from_pairs(players, |i, j| {
            let (wi, wj) = record(i, j);
            if wi + wj == 0 {
                0.5
            } else {
                wi as f64 / (wi + wj) as f64
            }
        })?,
        rank_decided,
        no_data,
    })
}

fn sorted_pairs(it: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = it.collect();
    v.sort_unstable();
    v
}
