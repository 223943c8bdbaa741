#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use epinash::epistemic::{adam_signals, build_epistemic, eve_moves, successor, successors, EveState, Suggestion};
use epinash::game_model::Game;
use epinash::oracle::{brute_adam_signals, brute_eve_moves, brute_successor, OState, OSuggestion};

pub fn ostate(s: &EveState) -> OState {
    OState { bot: s.bot.into_iter().collect(), comp: s.comp.iter().map(|c| c.iter().collect()).collect() }
}

pub fn osuggestion(g: &Game, s: &EveState, m: &Suggestion) -> OSuggestion {
    let mut out = BTreeMap::new();
    for (st, mv) in m.moves(g, s) {
        out.insert((st.owner, st.v), mv.clone());
    }
    out
}

/// Compares Allow′, the signal sets and Tab′ with the brute-force definitions
/// on every reachable state and every suggestion; returns the number of
/// suggestions checked.
pub fn allow_tab_agree(g: &Game) -> usize {
    let e = build_epistemic(g).unwrap();
    let mut checked = 0;
    for s in &e.eve {
        let os = ostate(s);
        let full = eve_moves(g, s);
        let mine: BTreeSet<_> = full.iter().map(|m| osuggestion(g, s, m)).collect();
        let brute: BTreeSet<_> = brute_eve_moves(g, &os, false).into_iter().collect();
        assert_eq!(mine, brute, "Allow′ differs at {}", s.fmt_with(g));
        for m in &full {
            let om = osuggestion(g, s, m);
            let sig: BTreeSet<_> = adam_signals(g, s, m).into_iter().collect();
            assert_eq!(sig, brute_adam_signals(g, &os, &om));
            for (beta, t) in successors(g, s, m) {
                assert_eq!(ostate(&t), brute_successor(g, &os, &om, beta));
                assert_eq!(successor(g, s, m, beta).unwrap(), t);
            }
            checked += 1;
        }
    }
    checked
}
