use std::fs::File;
use std::io::BufWriter;

use anyhow::{bail, Context, Result};
use knockout::crmodel::{average_upset_probability, generate_cr, CrParams};
use knockout::ingest::write_matrix;
use knockout::solver::{count_winning_draws, enumerate_winning_draws, find_winning_draw, kings, SearchStats};
use knockout::stats::{
    ccdf_points, fit_lognormal, fit_power_law, likelihood_ratio_test, scan_cr, EmpiricalSample, FitParams, FitResult,
    KsMethod, LrtResult, XminMode,
};
use knockout::winprob::{exact_uniform_win_probs, sample_uniform_win_probs, SampleMode};
use knockout::{DeterministicTournament, PlayerTable};
use serde_json::{json, Value};

use crate::input::{detect, load_sample, load_tournament, FileKind, InputArgs};
use crate::output::{Cell, Report, Table};
use crate::{Cli, Command, Mode, Outcome, WinprobMethod};

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Fix { input, target } => fix(cli, input, target),
        Command::Enumerate { input, target, limit } => enumerate(cli, input, target, *limit),
        Command::Count { input, no_search } => count(cli, input, !*no_search),
        Command::Kings { input } => cmd_kings(cli, input),
        Command::Winprob { input, method, samples, mode } => winprob(cli, input, *method, *samples, *mode),
        Command::GenCr { players, upset } => gen_cr(cli, *players, *upset),
        Command::Scan { input, step, threshold } => scan(cli, input, *step, *threshold),
        Command::Fit { input, xmin, xmin_scan } => fit(cli, input, *xmin, *xmin_scan),
    }
}

fn emit(cli: &Cli, command: &str, result: Value, table: Table) -> Result<()> {
    if let Some(path) = &cli.output {
        Report { command, seed: cli.seed, config: cli, result, table }.write(path, cli.format)?;
    }
    Ok(())
}

fn target_id(t: &DeterministicTournament, name: &str) -> Result<usize> {
    t.players().id_of(name).with_context(|| format!("--target: no player named {name:?}"))
}

fn stats_json(cli: &Cli, s: &SearchStats) -> Value {
    let mut v = json!({ "choice_points": s.choice_points, "solutions_found": s.solutions_found });
    if cli.timings {
        v["elapsed_s"] = json!(s.elapsed);
    }
    v
}

fn print_stats(s: &SearchStats) {
    println!("choice points: {}", group(s.choice_points));
    println!("solutions found: {}", group(s.solutions_found));
    println!("time: {:.4} s", s.elapsed);
}

/// `1234567` as `1,234,567`.
fn group(v: u64) -> String {
    let s = v.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn fix(cli: &Cli, input: &InputArgs, target: &str) -> Result<Outcome> {
    let loaded = load_tournament(input)?;
    let t = loaded.deterministic();
    let id = target_id(t, target)?;
    let (draw, stats) = find_winning_draw(t, id)?;
    let players = t.players();
    match &draw {
        Some(d) => println!("{}", d.bracket_string(players)),
        None => println!("no winning seeding for {target}"),
    }
    print_stats(&stats);
    let bracket = draw.as_ref().map(|d| d.bracket_string(players));
    let result = json!({
        "target": target,
        "found": draw.is_some(),
        "bracket": bracket,
        "leaves": draw.as_ref().map(|d| d.leaves().iter().map(|&i| players.name(i)).collect::<Vec<_>>()),
        "stats": stats_json(cli, &stats),
    });
    let table = Table {
        header: vec!["target", "found", "bracket", "choice_points", "solutions_found"],
        rows: vec![vec![
            Cell::Text(target.to_string()),
            Cell::Text(draw.is_some().to_string()),
            bracket.map_or(Cell::Empty, Cell::Text),
            Cell::Int(stats.choice_points),
            Cell::Int(stats.solutions_found),
        ]],
    };
    emit(cli, "fix", result, table)?;
    Ok(if draw.is_some() { Outcome::Ok } else { Outcome::Negative })
}

fn enumerate(cli: &Cli, input: &InputArgs, target: &str, limit: Option<u64>) -> Result<Outcome> {
    let loaded = load_tournament(input)?;
    let t = loaded.deterministic();
    let id = target_id(t, target)?;
    let (draws, stats) = enumerate_winning_draws(t, id, limit)?;
    let players = t.players();
    let brackets: Vec<String> = draws.iter().map(|d| d.bracket_string(players)).collect();
    for b in &brackets {
        println!("{b}");
    }
    if draws.is_empty() {
        println!("no winning seeding for {target}");
    }
    print_stats(&stats);
    let result = json!({
        "target": target,
        "limit": limit,
        "draws": brackets,
        "stats": stats_json(cli, &stats),
    });
    let table = Table {
        header: vec!["index", "bracket"],
        rows: brackets.iter().enumerate().map(|(i, b)| vec![Cell::Int(i as u64), Cell::Text(b.clone())]).collect(),
    };
    emit(cli, "enumerate", result, table)?;
    Ok(if draws.is_empty() { Outcome::Negative } else { Outcome::Ok })
}

fn count(cli: &Cli, input: &InputArgs, search: bool) -> Result<Outcome> {
    let loaded = load_tournament(input)?;
    let t = loaded.deterministic();
    let mut report = count_winning_draws(t)?;
    if search {
        report = report.with_search_stats(t)?;
    }
    let players = t.players();
    let king_set = kings(t);
    let order = players.by_rank();

    println!(
        "{:>4}  {:<28} {:>16} {:>12} {:>12} {:>14} {:>10}",
        "Rank", "Name", "Seedings Won", "% Total", "Nodes First", "Nodes All", "Time (s)"
    );
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &i in &order {
        let pct = 100.0 * report.share(i);
        let s = report.search.as_ref().map(|s| &s[i]);
        let name = if king_set.contains(&i) { format!("{} *", players.name(i)) } else { players.name(i).to_string() };
        println!(
            "{:>4}  {:<28} {:>16} {:>12} {:>12} {:>14} {:>10}",
            players.rank(i),
            name,
            group(report.counts[i]),
            format!("{pct:.6}"),
            s.map_or("-".into(), |s| group(s.first.choice_points)),
            s.map_or("-".into(), |s| group(s.all.choice_points)),
            s.map_or("-".into(), |s| format!("{:.3}", s.first.elapsed + s.all.elapsed)),
        );
        let mut row = vec![
            Cell::Int(players.rank(i) as u64),
            Cell::Text(players.name(i).to_string()),
            Cell::Int(report.counts[i]),
            Cell::Fixed6(pct),
            Cell::Text(king_set.contains(&i).to_string()),
            s.map_or(Cell::Empty, |s| Cell::Int(s.first.choice_points)),
            s.map_or(Cell::Empty, |s| Cell::Int(s.all.choice_points)),
        ];
        let mut jr = json!({
            "rank": players.rank(i),
            "name": players.name(i),
            "count": report.counts[i],
            "percent": format!("{pct:.6}"),
            "king": king_set.contains(&i),
            "nodes_first": s.map(|s| s.first.choice_points),
            "nodes_all": s.map(|s| s.all.choice_points),
        });
        if cli.timings {
            let time = s.map(|s| s.first.elapsed + s.all.elapsed);
            row.push(time.map_or(Cell::Empty, Cell::Float));
            jr["time_s"] = json!(time);
        }
        rows.push(row);
        json_rows.push(jr);
    }
    println!("total draws: {}  (* = king)", group(report.total));
    if !loaded.tournaments.rank_decided.is_empty() || !loaded.tournaments.no_data.is_empty() {
        println!(
            "pairs decided by rank: {}  pairs without data: {}",
            loaded.tournaments.rank_decided.len(),
            loaded.tournaments.no_data.len()
        );
    }
    let mut header = vec!["rank", "name", "count", "percent", "king", "nodes_first", "nodes_all"];
    if cli.timings {
        header.push("time_s");
    }
    let mut result = json!({ "total": report.total, "rows": json_rows });
    if cli.timings {
        result["dp_elapsed_s"] = json!(report.dp_elapsed);
    }
    emit(cli, "count", result, Table { header, rows })?;
    Ok(Outcome::Ok)
}

fn cmd_kings(cli: &Cli, input: &InputArgs) -> Result<Outcome> {
    let loaded = load_tournament(input)?;
    let t = loaded.deterministic();
    let players = t.players();
    let ks = kings(t);
    let condorcet = knockout::solver::condorcet_winner(t);
    for &k in &ks {
        println!("{:>4}  {}", players.rank(k), players.name(k));
    }
    if let Some(w) = condorcet {
        println!("condorcet winner: {}", players.name(w));
    }
    let result = json!({
        "kings": ks.iter().map(|&k| players.name(k)).collect::<Vec<_>>(),
        "condorcet_winner": condorcet.map(|w| players.name(w)),
    });
    let table = Table {
        header: vec!["rank", "name", "condorcet_winner"],
        rows: ks
            .iter()
            .map(|&k| {
                vec![
                    Cell::Int(players.rank(k) as u64),
                    Cell::Text(players.name(k).to_string()),
                    Cell::Text((condorcet == Some(k)).to_string()),
                ]
            })
            .collect(),
    };
    emit(cli, "kings", result, table)?;
    Ok(Outcome::Ok)
}

fn probability_table(players: &PlayerTable, probs: &[f64]) -> (Value, Table) {
    let order = players.by_rank();
    let rows = order
        .iter()
        .map(|&i| vec![Cell::Int(players.rank(i) as u64), Cell::Text(players.name(i).to_string()), Cell::Float(probs[i])])
        .collect();
    let json_rows: Vec<Value> = order
        .iter()
        .map(|&i| json!({ "rank": players.rank(i), "name": players.name(i), "probability": probs[i] }))
        .collect();
    (Value::Array(json_rows), Table { header: vec!["rank", "name", "probability"], rows })
}

fn winprob(cli: &Cli, input: &InputArgs, method: WinprobMethod, samples: u64, mode: Mode) -> Result<Outcome> {
    let loaded = load_tournament(input)?;
    let t = loaded.probabilistic();
    let v = match method {
        WinprobMethod::Exact => exact_uniform_win_probs(t)?,
        WinprobMethod::Sampled => {
            let mode = match mode {
                Mode::PerDrawExact => SampleMode::PerDrawExact,
                Mode::FullSimulation => SampleMode::FullSimulation,
            };
            sample_uniform_win_probs(t, samples, cli.seed, mode, cli.workers.max(1))?
        }
    };
    let players = t.players();
    for &i in &players.by_rank() {
        println!("{:>4}  {:<28} {:.6}", players.rank(i), players.name(i), v.probs[i]);
    }
    let (rows, table) = probability_table(players, &v.probs);
    let result = json!({
        "method": method,
        "samples": (method == WinprobMethod::Sampled).then_some(samples),
        "mode": (method == WinprobMethod::Sampled).then_some(mode),
        "players": rows,
    });
    emit(cli, "winprob", result, table)?;
    Ok(Outcome::Ok)
}

fn gen_cr(cli: &Cli, players: usize, upset: f64) -> Result<Outcome> {
    let t = generate_cr(CrParams::new(players, upset)?)?;
    let path = cli.output.as_ref().context("gen-cr needs --output for the matrix file")?;
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_matrix(BufWriter::new(file), &t)?;
    println!("wrote {players}-player matrix with upset probability {upset} to {}", path.display());
    Ok(Outcome::Ok)
}

/// Reference sample and, for tournament input, its average upset probability.
fn reference(input: &InputArgs) -> Result<(EmpiricalSample, Option<f64>)> {
    if detect(&input.input)? == FileKind::Sample {
        return Ok((load_sample(&input.input)?, None));
    }
    let loaded = load_tournament(input)?;
    let t = loaded.probabilistic();
    let v = exact_uniform_win_probs(t)?;
    let sample = EmpiricalSample::new(v.probs, input.input.display().to_string())?;
    Ok((sample, Some(average_upset_probability(t))))
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.2}"))
}

fn scan(cli: &Cli, input: &InputArgs, step: f64, threshold: f64) -> Result<Outcome> {
    let (sample, avg) = reference(input)?;
    let r = scan_cr(&sample, sample.len(), step, threshold, avg)?;
    println!("{:>8} {:>8} {:>8} {:>8}", "Min", "Max", "Best", "Average");
    println!("{:>8} {:>8} {:>8} {:>8}", opt(r.min_accepted), opt(r.max_accepted), format!("{:.2}", r.best), opt(r.average_upset));
    let accepted = r.steps.iter().filter(|s| s.accepted).count();
    println!("accepted {accepted} of {} grid points at p >= {threshold}", r.steps.len());

    let method = |m: KsMethod| match m {
        KsMethod::Asymptotic => "asymptotic",
        KsMethod::ExactPermutation => "exact-permutation",
    };
    let result = json!({
        "n": sample.len(),
        "threshold": r.threshold,
        "min_accepted": r.min_accepted,
        "max_accepted": r.max_accepted,
        "best": r.best,
        "average_upset": r.average_upset,
        "steps": r.steps.iter().map(|s| json!({
            "upset": s.upset,
            "d": s.ks.d,
            "p_value": s.ks.p_value,
            "method": method(s.ks.method),
            "accepted": s.accepted,
        })).collect::<Vec<_>>(),
    });
    let table = Table {
        header: vec!["upset", "d", "p_value", "method", "accepted"],
        rows: r
            .steps
            .iter()
            .map(|s| {
                vec![
                    Cell::Float(s.upset),
                    Cell::Float(s.ks.d),
                    Cell::Float(s.ks.p_value),
                    Cell::Text(method(s.ks.method).into()),
                    Cell::Text(s.accepted.to_string()),
                ]
            })
            .collect(),
    };
    emit(cli, "scan", result, table)?;
    Ok(Outcome::Ok)
}

fn fit_json(f: &FitResult) -> Value {
    let params = match f.params {
        FitParams::PowerLaw { alpha, xmin } => json!({ "alpha": alpha, "xmin": xmin }),
        FitParams::LogNormal { mu, sigma } => json!({ "mu": mu, "sigma": sigma }),
    };
    json!({
        "family": f.family(),
        "params": params,
        "log_likelihood": f.log_likelihood,
        "n_used": f.n_used,
        "support_min": f.support_min,
    })
}

fn fit(cli: &Cli, input: &InputArgs, xmin: Option<f64>, xmin_scan: bool) -> Result<Outcome> {
    let (full, _) = reference(input)?;
    // Players who never win have probability 0, outside both supports.
    let positive: Vec<f64> = full.values().iter().copied().filter(|&x| x > 0.0).collect();
    let dropped = full.len() - positive.len();
    if positive.len() < 2 {
        bail!("fewer than two positive values to fit");
    }
    let sample = EmpiricalSample::new(positive, full.label())?;
    let mode = match (xmin, xmin_scan) {
        (Some(x), _) => XminMode::Fixed(x),
        (None, true) => XminMode::Scan,
        (None, false) => XminMode::SampleMin,
    };
    let ln = fit_lognormal(&sample)?;
    let pl = fit_power_law(&sample, mode)?;
    // The likelihood ratio compares both families on the power-law tail.
    let tail: Vec<f64> = sample.values().iter().copied().filter(|&x| x >= pl.support_min).collect();
    let tail = EmpiricalSample::new(tail, sample.label())?;
    let ln_tail = if tail.len() == sample.len() { ln } else { fit_lognormal(&tail)? };
    let ln_tail = FitResult { support_min: pl.support_min, ..ln_tail };
    let lrt = likelihood_ratio_test(&tail, &ln_tail, &pl)?;

    if let FitParams::LogNormal { mu, sigma } = ln.params {
        println!("log-normal: mu = {mu:.4}, sigma = {sigma:.4}, log-likelihood = {:.4} (n = {})", ln.log_likelihood, ln.n_used);
    }
    if let FitParams::PowerLaw { alpha, xmin } = pl.params {
        println!("power-law:  alpha = {alpha:.4}, xmin = {xmin:.6}, log-likelihood = {:.4} (n = {})", pl.log_likelihood, pl.n_used);
    }
    if dropped > 0 {
        println!("{dropped} zero values left out of both fits");
    }
    println!(
        "likelihood ratio: R = {:.4}, p = {:.4}, favors {} ({})",
        lrt.r,
        lrt.p_value,
        lrt.favored(),
        LrtResult::SIGN_CONVENTION
    );

    let ccdf = ccdf_points(&sample)?;
    let result = json!({
        "n": full.len(),
        "zeros_dropped": dropped,
        "lognormal": fit_json(&ln),
        "power_law": fit_json(&pl),
        "lrt": {
            "r": lrt.r,
            "p_value": lrt.p_value,
            "first": lrt.first,
            "second": lrt.second,
            "favored": lrt.favored(),
            "sign_convention": LrtResult::SIGN_CONVENTION,
            "n_used": pl.n_used,
        },
        "ccdf": {
            "convention": ccdf.convention,
            "points": ccdf.points.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
        },
    });
    let table = Table {
        header: vec!["x", "ccdf", "lognormal_log_pdf", "power_law_log_pdf"],
        rows: ccdf
            .points
            .iter()
            .map(|&(x, y)| {
                let pl_pdf = if x >= pl.support_min { Cell::Float(pl.log_pdf(x)) } else { Cell::Empty };
                vec![Cell::Float(x), Cell::Float(y), Cell::Float(ln.log_pdf(x)), pl_pdf]
            })
            .collect(),
    };
    emit(cli, "fit", result, table)?;
    Ok(Outcome::Ok)
}
