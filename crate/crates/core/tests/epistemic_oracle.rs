mod common;

use common::allow_tab_agree;
use epinash::epistemic::{build_epistemic, eve_moves, eve_moves_reduced, successors};
use epinash::fixtures;
use epinash::oracle::{brute_eve_moves, verify_lemma3, DepthBudget};
use epinash::random::{random_game, RandomParams, RandomPayoff};

#[test]
fn allow_tab_on_example() {
    assert!(allow_tab_agree(&fixtures::example_orange()) > 0);
    allow_tab_agree(&fixtures::example_buchi());
}

#[test]
fn allow_tab_on_random_games() {
    let p = RandomParams::default();
    for seed in 0..80 {
        allow_tab_agree(&random_game(seed, &p));
    }
}

#[test]
fn reduced_suggestions_match_the_quotiented_oracle() {
    let p = RandomParams { payoff: RandomPayoff::Parity, ..RandomParams::default() };
    for seed in 0..40 {
        let g = random_game(seed, &p);
        let e = build_epistemic(&g).unwrap();
        for s in &e.eve {
            let os = common::ostate(s);
            let mine: Vec<_> = eve_moves_reduced(&g, s).iter().map(|m| common::osuggestion(&g, s, m)).collect();
            let mut brute = brute_eve_moves(&g, &os, true);
            brute.sort();
            let mut sorted = mine.clone();
            sorted.sort();
            assert_eq!(sorted, brute, "seed {seed}");
            // Own actions never change the outcome.
            let full = eve_moves(&g, s);
            let outs: std::collections::BTreeSet<_> = full.iter().map(|m| successors(&g, s, m)).collect();
            let reduced: std::collections::BTreeSet<_> =
                eve_moves_reduced(&g, s).iter().map(|m| successors(&g, s, m)).collect();
            assert_eq!(outs, reduced, "seed {seed}");
        }
    }
}

#[test]
fn lemma3_on_random_games() {
    let p = RandomParams::default();
    for seed in 0..60 {
        let r = verify_lemma3(&random_game(seed, &p), &DepthBudget::new(3)).unwrap();
        assert!(r.is_none(), "seed {seed}: {r:?}");
    }
}

#[test]
fn lemma3_on_example() {
    for g in [fixtures::example_orange(), fixtures::example_buchi(), fixtures::example_mp()] {
        assert!(verify_lemma3(&g, &DepthBudget::new(3)).unwrap().is_none());
    }
}
