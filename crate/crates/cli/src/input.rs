//! Loading tournaments and samples from the supported CSV files.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use knockout::ingest::{self, Tournaments, H2H_HEADER, MATCHES_HEADER, MATRIX_FIRST_COLUMN};
use knockout::stats::EmpiricalSample;
use knockout::{DeterministicTournament, ProbabilisticTournament};
use serde::Serialize;

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// matches.csv, h2h.csv or a probability matrix file.
    #[arg(long)]
    pub input: PathBuf,
    /// ranks.csv; required for matches and head-to-head input.
    #[arg(long)]
    pub ranks: Option<PathBuf>,
    /// Season to use when matches.csv holds several.
    #[arg(long)]
    pub season: Option<String>,
    /// Remove a player by name before analysis (repeatable).
    #[arg(long = "drop")]
    pub drop: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Matches,
    HeadToHead,
    Matrix,
    /// One `value` column, or the `rank,name,probability` rows `winprob` writes.
    Sample,
}

pub fn detect(path: &Path) -> Result<FileKind> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut first = String::new();
    BufReader::new(file).read_line(&mut first)?;
    let header: Vec<String> = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(first.as_bytes())
        .records()
        .next()
        .transpose()?
        .map(|r| r.iter().map(str::to_string).collect())
        .unwrap_or_default();
    let is = |expected: &[&str]| header.iter().map(String::as_str).eq(expected.iter().copied());
    Ok(if is(&MATCHES_HEADER) {
        FileKind::Matches
    } else if is(&H2H_HEADER) {
        FileKind::HeadToHead
    } else if header.first().map(String::as_str) == Some(MATRIX_FIRST_COLUMN) {
        FileKind::Matrix
    } else if is(&["value"]) || is(&["rank", "name", "probability"]) {
        FileKind::Sample
    } else {
        bail!("{}: unrecognized header `{}`", path.display(), header.join(","))
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

/// Tournament data after rounding and any `--drop`s.
pub struct Loaded {
    pub tournaments: Tournaments,
}

impl Loaded {
    pub fn deterministic(&self) -> &DeterministicTournament {
        &self.tournaments.deterministic
    }

    pub fn probabilistic(&self) -> &ProbabilisticTournament {
        &self.tournaments.probabilistic
    }
}

pub fn load_tournament(args: &InputArgs) -> Result<Loaded> {
    let kind = detect(&args.input)?;
    let ranks = || -> Result<ingest::RankingTable> {
        let path = args.ranks.as_ref().context("--ranks is required for this input")?;
        Ok(ingest::read_ranks(open(path)?)?)
    };
    let mut tournaments = match kind {
        FileKind::Matches => {
            let matches = ingest::read_matches(open(&args.input)?)?;
            ingest::soccer_to_tournaments(&matches, &ranks()?, args.season.as_deref())?
        }
        FileKind::HeadToHead => {
            let records = ingest::read_h2h(open(&args.input)?)?;
            ingest::tennis_to_tournaments(&records, &ranks()?)?
        }
        FileKind::Matrix => {
            let probabilistic = ingest::read_matrix(open(&args.input)?)?;
            Tournaments {
                deterministic: probabilistic.round()?,
                rank_decided: Vec::new(),
                no_data: Vec::new(),
                probabilistic,
            }
        }
        FileKind::Sample => bail!("{} holds a sample, not a tournament", args.input.display()),
    };
    for name in &args.drop {
        let id = tournaments
            .deterministic
            .players()
            .id_of(name)
            .with_context(|| format!("--drop: no player named {name:?}"))?;
        tournaments = tournaments.drop_player(id)?;
    }
    Ok(Loaded { tournaments })
}

pub fn load_sample(path: &Path) -> Result<EmpiricalSample> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let column = rdr.headers()?.len() - 1;
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let raw = &rec[column];
        values.push(raw.parse::<f64>().with_context(|| format!("{}: `{raw}` is not a number", path.display()))?);
    }
    Ok(EmpiricalSample::new(values, path.display().to_string())?)
}
