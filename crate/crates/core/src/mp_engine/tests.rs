use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::epistemic::{build_epistemic, lift_payoff, EpiHistory};
use crate::fixtures;
use crate::game_model::{parse_game, PayoffVector};
use crate::ne_search::Query;
use crate::oracle::{brute_mp_value, enumerate_ne_payoffs_absorbing, DepthBudget, OMpArena};
use crate::random::{random_absorbing_mp, random_game, RandomParams, RandomPayoff};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arena(eve: &[bool], succ: &[&[(usize, &[i64])]], kinds: &[MpKind]) -> MpArena {
    MpArena {
        eve: eve.to_vec(),
        succ: succ.iter().map(|o| o.iter().map(|&(t, w)| (t, w.to_vec())).collect()).collect(),
        kinds: kinds.to_vec(),
    }
}

fn wins(a: &MpArena, u: &[BigRational]) -> bool {
    solve_threshold(a, u, DEFAULT_STRATEGY_BUDGET).unwrap().win[0]
}

#[test]
fn single_cycle() {
    for k in [MpKind::Liminf, MpKind::Limsup] {
        let a = arena(&[true], &[&[(0, &[2])]], &[k]);
        assert!(wins(&a, &[q(2, 1)]));
        assert!(!wins(&a, &[q(5, 2)]));
    }
}

#[test]
fn adam_fork() {
    for k in [MpKind::Liminf, MpKind::Limsup] {
        let a = arena(&[false, true, true], &[&[(1, &[0]), (2, &[0])], &[(1, &[2])], &[(2, &[-2])]], &[k]);
        let sol = solve_threshold(&a, &[q(0, 1)], DEFAULT_STRATEGY_BUDGET).unwrap();
        assert!(!sol.win[0]);
        assert!(wins(&a, &[q(-2, 1)]));
    }
}

#[test]
fn eve_alternation_reaches_hull_point() {
    let both = [MpKind::Liminf, MpKind::Liminf];
    let a = arena(&[true], &[&[(0, &[2, 0]), (0, &[0, 2])]], &both);
    assert!(wins(&a, &[q(1, 1), q(1, 1)]));
    assert!(!wins(&a, &[q(3, 2), q(1, 1)]));
    let sup = [MpKind::Limsup, MpKind::Limsup];
    let a2 = arena(&[true], &[&[(0, &[2, 0]), (0, &[0, 2])]], &sup);
    assert!(wins(&a2, &[q(2, 1), q(2, 1)]));
    let mixed = [MpKind::Liminf, MpKind::Limsup];
    let a3 = arena(&[true], &[&[(0, &[2, 0]), (0, &[0, 2])]], &mixed);
    assert!(wins(&a3, &[q(1, 1), q(1, 1)]));
    assert!(!wins(&a3, &[q(1, 1), q(2, 1)]));
    assert!(wins(&a3, &[q(0, 1), q(2, 1)]));
}

#[test]
fn dead_ends_and_budget() {
    let a = arena(&[true, false], &[&[(1, &[0])], &[]], &[MpKind::Liminf]);
    assert!(wins(&a, &[q(100, 1)]));
    let b = arena(&[false, true], &[&[(1, &[0])], &[]], &[MpKind::Liminf]);
    assert!(!wins(&b, &[q(-100, 1)]));
    let fork = arena(
        &[false, false, true],
        &[&[(1, &[0]), (2, &[0])], &[(0, &[0]), (2, &[1])], &[(0, &[0])]],
        &[MpKind::Liminf],
    );
    assert_eq!(solve_threshold_with(&fork, &[q(0, 1)], 2, false), Err(MpError::Budget(2)));
}

fn random_arena(seed: u64) -> (MpArena, OMpArena) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=6);
    let eve: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let succ: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=2);
            (0..k).map(|_| (rng.random_range(0..n), rng.random_range(-3..=3))).collect()
        })
        .collect();
    let kind = if rng.random_bool(0.5) { MpKind::Liminf } else { MpKind::Limsup };
    let a = MpArena {
        eve: eve.clone(),
        succ: succ.iter().map(|o| o.iter().map(|&(t, w)| (t, vec![w])).collect()).collect(),
        kinds: vec![kind],
    };
    (a, OMpArena { eve, succ })
}

#[test]
fn one_dimension_matches_memoryless_values() {
    for seed in 0..150 {
        let (a, o) = random_arena(seed);
        for s in 0..a.len() {
            let v = brute_mp_value(&o, s, 1 << 16).unwrap();
            for u in [v.clone(), &v + q(1, 7), &v - q(1, 7)] {
                for specialize in [true, false] {
                    let sol = solve_threshold_with(&a, &[u.clone()], DEFAULT_STRATEGY_BUDGET, specialize).unwrap();
                    assert_eq!(sol.win[s], v >= u, "seed {seed} node {s} value {v} threshold {u} {specialize}");
                }
            }
        }
    }
}

fn random_multi_arena(seed: u64) -> MpArena {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=9);
    let dims = rng.random_range(2..=3);
    MpArena {
        eve: (0..n).map(|_| rng.random_bool(0.5)).collect(),
        succ: (0..n)
            .map(|_| {
                let k = rng.random_range(1..=3);
                (0..k)
                    .map(|_| (rng.random_range(0..n), (0..dims).map(|_| rng.random_range(-2..=2)).collect()))
                    .collect()
            })
            .collect(),
        kinds: (0..dims).map(|_| if rng.random_bool(0.5) { MpKind::Liminf } else { MpKind::Limsup }).collect(),
    }
}

#[test]
fn pruning_agrees_with_plain_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..300 {
        let a = random_multi_arena(seed);
        for _ in 0..3 {
            let u: Vec<BigRational> =
                (0..a.dims()).map(|_| q(rng.random_range(-4..=4), rng.random_range(1..=3))).collect();
            let fast = solve_threshold_with(&a, &u, DEFAULT_STRATEGY_BUDGET, true).unwrap();
            let slow = solve_threshold_with(&a, &u, DEFAULT_STRATEGY_BUDGET, false).unwrap();
            assert_eq!(fast.win, slow.win, "seed {seed} thresholds {u:?}");
        }
    }
}

proptest::proptest! {
    #[test]
    fn antitone_in_thresholds(seed in 0u64..400, a in -4i64..=4, b in 0i64..=4) {
        let (ar, _) = random_arena(seed);
        let hi = solve_threshold(&ar, &[q(a, 2)], DEFAULT_STRATEGY_BUDGET).unwrap();
        let lo = solve_threshold(&ar, &[q(a - b, 2)], DEFAULT_STRATEGY_BUDGET).unwrap();
        for s in 0..ar.len() {
            proptest::prop_assert!(!hi.win[s] || lo.win[s]);
        }
    }
}

fn mp_params() -> RandomParams {
    RandomParams { payoff: RandomPayoff::MeanPayoff, ..RandomParams::default() }
}

#[test]
fn transform_desk_values() {
    let g = fixtures::example_mp();
    let e = build_epistemic(&g).unwrap();
    let t = transform_weights(&g, &e).unwrap();
    assert_eq!(t.w_max, 3);
    let n = 3;
    let mut saw_dev = false;
    let mut saw_bot = false;
    for (a, st) in e.adam.iter().enumerate() {
        let sus = e.eve[st.eve].suspects();
        for (k, &(beta, target)) in st.succ.iter().enumerate() {
            let w = &t.adam[a][k];
            for i in 0..n {
                let wb = g.payoffs[i].weight[beta];
                if !e.eve[target].is_bot() && !sus.contains(i) {
                    assert_eq!((w[i], w[n + i], w[2 * n + i]), (6, 6, 6));
                    saw_dev = true;
                }
                if e.eve[target].is_bot() && wb == 1 {
                    assert_eq!((w[i], w[n + i], w[2 * n + i]), (2, -2, -2));
                    saw_bot = true;
                }
            }
        }
    }
    assert!(saw_dev && saw_bot);
    let zero = parse_game(
        r#"{"players":["A"],"vertices":["v"],"initial":"v","actions":["a"],
            "allowed":{"v":{"A":["a"]}},
            "transitions":[{"from":"v","move":{"A":"a"},"to":"v"}],
            "signals":[{"move":{"A":"a"},"to":"v","label":"s"}],
            "payoffs":{"A":{"kind":"mp-liminf","weights":{"s":0}}}}"#,
    )
    .unwrap();
    let ez = build_epistemic(&zero).unwrap();
    let tz = transform_weights(&zero, &ez).unwrap();
    assert!(tz.adam.iter().flatten().all(|w| w.iter().all(|&x| x == 0)));
    assert_eq!(
        transform_weights(&fixtures::example_buchi(), &build_epistemic(&fixtures::example_buchi()).unwrap()),
        Err(MpError::NotMeanPayoff)
    );
}

#[test]
fn transform_invariants_on_random_games() {
    for seed in 0..100 {
        let g = random_game(seed, &mp_params());
        let e = build_epistemic(&g).unwrap();
        let t = transform_weights(&g, &e).unwrap();
        let (n, w) = (g.n_players(), g.max_abs_weight());
        let ar = t.arena(&e);
        for s in 0..e.eve.len() {
            assert!(ar.succ[s].iter().all(|(_, x)| x.iter().all(|&v| v == 0)));
        }
        for (a, st) in e.adam.iter().enumerate() {
            let sus = e.eve[st.eve].suspects();
            for (k, &(beta, target)) in st.succ.iter().enumerate() {
                let x = &t.adam[a][k];
                for i in 0..n {
                    let wb = g.payoffs[i].weight[beta];
                    if e.eve[target].is_bot() {
                        assert_eq!(x[i] + x[n + i], 0);
                        assert_eq!(x[n + i], x[2 * n + i]);
                        assert_eq!(x[i], 2 * wb);
                    } else {
                        assert_eq!((x[i], x[n + i]), (2 * w, 2 * w));
                        assert_eq!(x[2 * n + i], if sus.contains(i) { -2 * wb } else { 2 * w });
                    }
                }
            }
        }
    }
}

/// Random ⊥-lasso: walk along ⊥-successors until a state repeats.
fn random_bot_lasso(e: &EpistemicGame, rng: &mut ChaCha8Rng) -> EpiLasso {
    let mut states = vec![e.initial()];
    let mut steps = Vec::new();
    loop {
        let s = *states.last().unwrap();
        let offers: Vec<usize> = e.eve_succ[s].iter().copied().filter(|&a| e.bot_succ(a).is_some()).collect();
        let a = offers[rng.random_range(0..offers.len())];
        let (beta, t) = e.bot_succ(a).unwrap();
        steps.push((a, beta));
        if let Some(i) = states.iter().position(|&x| x == t) {
            let cycle = steps.split_off(i);
            return EpiLasso { prefix: EpiHistory { start: e.initial(), steps }, cycle };
        }
        states.push(t);
    }
}

#[test]
fn lasso_identity_on_random_bot_lassos() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for seed in 0..100 {
        let g = random_game(seed, &mp_params());
        let e = build_epistemic(&g).unwrap();
        let t = transform_weights(&g, &e).unwrap();
        let n = g.n_players();
        for _ in 0..10 {
            let l = random_bot_lasso(&e, &mut rng);
            let lifted = lift_payoff(&g, &l);
            let vals = t.lasso_values(&e, &l);
            for i in 0..n {
                assert_eq!(lifted[i], vals[i]);
                assert_eq!(lifted[i], -vals[n + i].clone());
                assert_eq!(vals[n + i], vals[2 * n + i]);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

fn exact(g: &Game, p: &str) -> Query {
    let v = PayoffVector::parse(p, g.n_players()).unwrap();
    Query::new(v.clone(), v).unwrap()
}

fn single_play() -> Game {
    parse_game(
        r#"{"players":["A"],"vertices":["v"],"initial":"v","actions":["a"],
            "allowed":{"v":{"A":["a"]}},
            "transitions":[{"from":"v","move":{"A":"a"},"to":"v"}],
            "signals":[{"move":{"A":"a"},"to":"v","label":"s"}],
            "payoffs":{"A":{"kind":"mp-liminf","weights":{"s":2}}}}"#,
    )
    .unwrap()
}

#[test]
fn single_play_query() {
    let g = single_play();
    let e = build_epistemic(&g).unwrap();
    match decide_mp(&g, &exact(&g, "2")).unwrap() {
        MpVerdict::Exists(w) => {
            assert_eq!(w.payoff, vec![q(2, 1)]);
            assert_eq!(w.mp.as_ref().unwrap().u, vec![q(2, 1), q(-2, 1), q(-2, 1)]);
            check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap();
        }
        v => panic!("{v:?}"),
    }
    assert_eq!(decide_mp(&g, &exact(&g, "1")).unwrap(), MpVerdict::None);
    let above = Query::new(PayoffVector::parse("5/2", 1).unwrap(), PayoffVector::parse("inf", 1).unwrap()).unwrap();
    assert_eq!(decide_mp(&g, &above).unwrap(), MpVerdict::None);
}

fn example_expected() -> std::collections::BTreeSet<Vec<BigRational>> {
    enumerate_ne_payoffs_absorbing(&fixtures::example_mp(), &DepthBudget::new(3)).unwrap()
}

#[test]
fn example_mirror_queries_agree_with_enumeration() {
    let g = fixtures::example_mp();
    let e = build_epistemic(&g).unwrap();
    let expected = example_expected();
    assert!(expected.contains(&vec![q(1, 1), q(1, 1), q(0, 1)]));
    match decide_mp(&g, &exact(&g, "1,1,0")).unwrap() {
        MpVerdict::Exists(w) => {
            assert_eq!(w.payoff, vec![q(1, 1), q(1, 1), q(0, 1)]);
            check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap();
        }
        v => panic!("{v:?}"),
    }
    let tight =
        Query::new(PayoffVector::parse("2,-inf,-inf", 3).unwrap(), PayoffVector::parse("inf,inf,inf", 3).unwrap())
            .unwrap();
    let any = expected.iter().any(|p| p[0] >= q(2, 1));
    match decide_mp(&g, &tight).unwrap() {
        MpVerdict::Exists(w) => {
            assert!(any);
            assert!(expected.contains(&w.payoff), "{:?}", w.payoff);
        }
        MpVerdict::None => assert!(!any),
        v => panic!("{v:?}"),
    }
}

#[test]
fn absorbing_games_agree_with_enumeration() {
    let (mut yes, mut no) = (0, 0);
    for seed in 0..40 {
        let g = random_absorbing_mp(seed, 2);
        let expected = enumerate_ne_payoffs_absorbing(&g, &DepthBudget::new(3)).unwrap();
        let e = build_epistemic(&g).unwrap();
        let mut leaves: Vec<Vec<BigRational>> = Vec::new();
        for v in 0..g.n_vertices() {
            let steps = g.steps(v);
            if steps.iter().all(|s| s.target == v) {
                leaves.push(g.payoffs.iter().map(|p| p.value_of_cycle(&[steps[0].signal])).collect());
            }
        }
        for p in leaves {
            let query = Query::exact(&p);
            match decide_mp(&g, &query).unwrap() {
                MpVerdict::Exists(w) => {
                    assert!(expected.contains(&p), "seed {seed} p {p:?}");
                    check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap();
                    yes += 1;
                }
                MpVerdict::None => {
                    assert!(!expected.contains(&p), "seed {seed} p {p:?}");
                    no += 1;
                }
                MpVerdict::Inconclusive(why) => panic!("seed {seed}: {why}"),
            }
        }
    }
    assert!(yes > 10 && no > 10, "{yes} {no}");
}

#[test]
fn corrupted_witness_is_rejected() {
    let g = fixtures::example_mp();
    let e = build_epistemic(&g).unwrap();
    let MpVerdict::Exists(mut w) = decide_mp(&g, &exact(&g, "1,1,0")).unwrap() else { panic!() };
    w.payoff[2] = q(1, 1);
    assert!(check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).is_err());
}
