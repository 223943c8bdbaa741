use std::collections::BTreeSet;
use std::path::PathBuf;

use epinash::epistemic::build_epistemic;
use epinash::game_model::{game_to_json, parse_game, Game};
use epinash::mp_engine::{check_mp, decide_mp, MpVerdict, DEFAULT_STRATEGY_BUDGET};
use epinash::ne_search::{bool_payoff, decide_boolean, synthesize_profile, Query};
use epinash::oracle::{check_profile_absorbing, enumerate_ne_payoffs_absorbing, DepthBudget};
use epinash::random::{random_absorbing_mp, random_game, RandomParams, RandomPayoff};
use epinash::witness::{check_boolean, witness_from_json, witness_to_json};

fn load(name: &str) -> Game {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games").join(name);
    parse_game(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Every step by names, with each player's payoff data on its signal.
fn named_steps(g: &Game) -> BTreeSet<(String, Vec<usize>, String, String, Vec<(u32, i64)>)> {
    let mut out = BTreeSet::new();
    for v in 0..g.n_vertices() {
        for st in g.steps(v) {
            let pay = g
                .payoffs
                .iter()
                .map(|p| {
                    (p.priority.get(st.signal).copied().unwrap_or(0), p.weight.get(st.signal).copied().unwrap_or(0))
                })
                .collect();
            out.insert((
                g.vertices[v].clone(),
                st.mv.0.clone(),
                g.vertices[st.target].clone(),
                g.signals[st.signal].clone(),
                pay,
            ));
        }
    }
    out
}

#[test]
fn shipped_games_reparse() {
    for name in ["example_orange.json", "example_buchi.json", "example_mp.json"] {
        let g = load(name);
        let again = parse_game(&game_to_json(&g).to_string()).unwrap();
        assert_eq!((&again.players, &again.vertices, again.initial), (&g.players, &g.vertices, g.initial), "{name}");
        assert_eq!(named_steps(&again), named_steps(&g), "{name}");
    }
}

#[test]
fn boolean_witnesses_survive_serialization() {
    let g = load("example_buchi.json");
    let e = build_epistemic(&g).unwrap();
    let w = decide_boolean(&g, &Query::exact(&bool_payoff(&[true, true, false]))).unwrap().unwrap();
    let back = witness_from_json(&g, &e, &witness_to_json(&g, &e, &w)).unwrap();
    check_boolean(&g, &e, &back).unwrap();
    let prof = synthesize_profile(&g, &e, &back);
    let v = check_profile_absorbing(&g, &|p, h| prof.action(&g, p, h), &DepthBudget::new(4)).unwrap();
    assert!(v.is_equilibrium(), "{v:?}");
}

#[test]
fn random_parity_witnesses_check() {
    let p = RandomParams { payoff: RandomPayoff::Parity, ..RandomParams::default() };
    for seed in 0..40 {
        let g = random_game(seed, &p);
        let e = build_epistemic(&g).unwrap();
        if let Some(w) = decide_boolean(&g, &Query::trivial(g.n_players())).unwrap() {
            let back = witness_from_json(&g, &e, &witness_to_json(&g, &e, &w)).unwrap();
            check_boolean(&g, &e, &back).unwrap_or_else(|f| panic!("seed {seed}: {f}"));
        }
    }
}

#[test]
fn mean_payoff_equilibria_of_absorbing_games() {
    for seed in 0..25 {
        let g = random_absorbing_mp(seed, 2);
        let e = build_epistemic(&g).unwrap();
        let ne = enumerate_ne_payoffs_absorbing(&g, &DepthBudget::new(3)).unwrap();
        for p in &ne {
            match decide_mp(&g, &Query::exact(p)).unwrap() {
                MpVerdict::Exists(w) => check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap(),
                other => panic!("seed {seed}: {p:?} gave {other:?}"),
            }
        }
    }
}
