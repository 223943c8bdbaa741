use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use epinash::epistemic::{build_epistemic_with, to_dot, BuildOptions, EpistemicGame};
use epinash::game_model::{fmt_rational, game_to_json, parse_game, Game, PayoffVector};
use epinash::mp_engine::{check_mp, decide_mp_with, MpOptions, MpVerdict};
use epinash::ne_search::{decide_boolean_with, synthesize_profile, Query};
use epinash::oracle::{check_profile_absorbing, verify_lemma3, DepthBudget};
use epinash::random::{random_game, RandomParams, RandomPayoff};
use epinash::witness::{check_boolean, witness_from_json, witness_to_json};

const EXISTS: u8 = 0;
const ABSENT: u8 = 1;
const ERROR: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "epinash", version, about = "Nash equilibria of concurrent games with public signals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Bound on the number of epistemic states.
    #[arg(long, global = true)]
    cap_states: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PayoffArg {
    Buchi,
    Parity,
    Mp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the epistemic game and report its size.
    Build {
        game: PathBuf,
        /// Write the abstraction in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide whether an equilibrium with payoff between the bounds exists.
    Solve {
        game: PathBuf,
        /// Lower bounds, comma-separated per player ("inf", "-inf", "p/q").
        #[arg(long, allow_hyphen_values = true)]
        lower: Option<String>,
        /// Upper bounds, comma-separated per player.
        #[arg(long, allow_hyphen_values = true)]
        upper: Option<String>,
        /// Write the witness here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Verify a witness against a game.
    Check {
        game: PathBuf,
        witness: PathBuf,
        /// Also check the induced profile by exhaustive deviation search,
        /// for games absorbed within this many steps.
        #[arg(long)]
        absorbing_depth: Option<usize>,
    },
    /// Print a random game.
    RandomGame {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PayoffArg::Buchi)]
        payoff: PayoffArg,
    },
    /// Check that epistemic histories capture indistinguishability.
    Lemma3 {
        /// Game file; a random game from `--seed` when absent.
        game: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(u8, Value, String), Failure>;

fn load(path: &Path) -> Result<Game, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(parse_game(&text)?)
}

fn build_opts(cli: &Cli) -> BuildOptions {
    let mut o = BuildOptions::default();
    if let Some(c) = cli.cap_states {
        o.cap_states = c;
    }
    o
}

fn rats(v: &[num_rational::BigRational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn stats(g: &Game, e: &EpistemicGame) -> Value {
    let hist: serde_json::Map<String, Value> = e
        .suspect_histogram()
        .into_iter()
        .map(|(set, k)| {
            let names: Vec<&str> = set.iter().map(|p| g.players[p].as_str()).collect();
            (format!("{{{}}}", names.join(",")), json!(k))
        })
        .collect();
    json!({ "eve_states": e.eve.len(), "adam_states": e.adam.len(), "suspect_histogram": hist })
}

fn cmd_build(cli: &Cli, path: &Path, dot: Option<&Path>) -> Outcome {
    let g = load(path)?;
    let e = build_epistemic_with(&g, build_opts(cli))?;
    if let Some(d) = dot {
        std::fs::write(d, to_dot(&g, &e)).map_err(|err| Failure(format!("{}: {err}", d.display())))?;
    }
    let st = stats(&g, &e);
    let mut text = format!("eve states: {}\nadam states: {}\nsuspect sets:\n", e.eve.len(), e.adam.len());
    for (k, v) in st["suspect_histogram"].as_object().unwrap() {
        text.push_str(&format!("  {k}: {v}\n"));
    }
    Ok((EXISTS, st, text))
}

fn query(g: &Game, lower: Option<&str>, upper: Option<&str>) -> Result<Query, Failure> {
    let n = g.n_players();
    let t = Query::trivial(n);
    let lo = lower.map(|s| PayoffVector::parse(s, n)).transpose().map_err(Failure)?.unwrap_or(t.lower);
    let hi = upper.map(|s| PayoffVector::parse(s, n)).transpose().map_err(Failure)?.unwrap_or(t.upper);
    Query::new(lo, hi).map_err(Failure)
}

fn cmd_solve(cli: &Cli, path: &Path, lower: Option<&str>, upper: Option<&str>, out: Option<&Path>) -> Outcome {
    let g = load(path)?;
    let q = query(&g, lower, upper)?;
    let opts = build_opts(cli);
    let e = build_epistemic_with(&g, opts)?;
    let verdict = if g.is_boolean() {
        decide_boolean_with(&g, &q, opts)?.map_or(MpVerdict::None, MpVerdict::Exists)
    } else if g.is_mean_payoff() {
        decide_mp_with(&g, &q, &MpOptions { build: opts, ..MpOptions::default() })?
    } else {
        return Err(Failure("payoffs must be all Boolean or all mean payoff".into()));
    };
    let mut doc = json!({ "statistics": stats(&g, &e) });
    match verdict {
        MpVerdict::Exists(w) => {
            let wj = witness_to_json(&g, &e, &w);
            if let Some(p) = out {
                let body = serde_json::to_string_pretty(&wj)? + "\n";
                std::fs::write(p, body).map_err(|err| Failure(format!("{}: {err}", p.display())))?;
                doc["witness_file"] = json!(p.display().to_string());
            }
            doc["verdict"] = json!("exists");
            doc["payoff"] = json!(rats(&w.payoff));
            doc["witness"] = wj;
            Ok((EXISTS, doc, format!("exists\npayoff: ({})\n", rats(&w.payoff).join(", "))))
        }
        MpVerdict::None => {
            doc["verdict"] = json!("none");
            Ok((ABSENT, doc, "none\n".into()))
        }
        MpVerdict::Inconclusive(why) => {
            doc["verdict"] = json!("inconclusive");
            doc["reason"] = json!(why);
            Ok((INCONCLUSIVE, doc, format!("inconclusive: {why}\n")))
        }
    }
}

fn cmd_check(cli: &Cli, path: &Path, wpath: &Path, depth: Option<usize>) -> Outcome {
    let g = load(path)?;
    let e = build_epistemic_with(&g, build_opts(cli))?;
    let text = std::fs::read_to_string(wpath).map_err(|err| Failure(format!("{}: {err}", wpath.display())))?;
    let reject = |why: String| Ok((ABSENT, json!({ "valid": false, "reason": why }), format!("invalid: {why}\n")));
    let w = match serde_json::from_str::<Value>(&text)
        .map_err(|err| err.to_string())
        .and_then(|v| witness_from_json(&g, &e, &v))
    {
        Ok(w) => w,
        Err(why) => return reject(why),
    };
    let checked = if w.mp.is_some() {
        check_mp(&g, &e, &w, epinash::mp_engine::DEFAULT_STRATEGY_BUDGET)
    } else {
        check_boolean(&g, &e, &w)
    };
    if let Err(f) = checked {
        return reject(f.to_string());
    }
    if let Some(d) = depth {
        if w.mp.is_some() {
            return Err(Failure("profile checks apply to Boolean witnesses".into()));
        }
        let prof = synthesize_profile(&g, &e, &w);
        let v = check_profile_absorbing(&g, &|p, h| prof.action(&g, p, h), &DepthBudget::new(d))?;
        if !v.is_equilibrium() {
            return reject(format!("profile: {v:?}"));
        }
    }
    Ok((EXISTS, json!({ "valid": true, "payoff": rats(&w.payoff) }), "valid\n".into()))
}

fn cmd_random(seed: u64, payoff: PayoffArg) -> Outcome {
    let payoff = match payoff {
        PayoffArg::Buchi => RandomPayoff::Buchi,
        PayoffArg::Parity => RandomPayoff::Parity,
        PayoffArg::Mp => RandomPayoff::MeanPayoff,
    };
    let g = random_game(seed, &RandomParams { payoff, ..RandomParams::default() });
    let j = game_to_json(&g);
    let text = serde_json::to_string_pretty(&j)? + "\n";
    Ok((EXISTS, j, text))
}

fn cmd_lemma3(path: Option<&Path>, seed: u64, depth: usize) -> Outcome {
    let g = match path {
        Some(p) => load(p)?,
        None => random_game(seed, &RandomParams::default()),
    };
    match verify_lemma3(&g, &DepthBudget::new(depth))? {
        None => Ok((EXISTS, json!({ "holds": true, "depth": depth }), format!("holds up to depth {depth}\n"))),
        Some(c) => {
            let msg = format!("{c:?}");
            Ok((ABSENT, json!({ "holds": false, "counterexample": msg }), format!("counterexample: {msg}\n")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Build { game, dot } => cmd_build(&cli, game, dot.as_deref()),
        Cmd::Solve { game, lower, upper, witness } => {
            cmd_solve(&cli, game, lower.as_deref(), upper.as_deref(), witness.as_deref())
        }
        Cmd::Check { game, witness, absorbing_depth } => cmd_check(&cli, game, witness, *absorbing_depth),
        Cmd::RandomGame { seed, payoff } => cmd_random(*seed, *payoff),
        Cmd::Lemma3 { game, seed, depth } => cmd_lemma3(game.as_deref(), *seed, *depth),
    };
    let mut out = std::io::stdout().lock();
    match res {
        Ok((code, doc, text)) => {
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")),
                Format::Text => write!(out, "{text}"),
            }
            .ok();
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            match cli.format {
                Format::Json => writeln!(out, "{}", json!({ "error": msg })).unwrap_or(()),
                Format::Text => eprintln!("error: {msg}"),
            }
            ExitCode::from(ERROR)
        }
    }
}
