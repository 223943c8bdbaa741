//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use epinash::bits::Bits;
use epinash::epistemic::{
    adam_signals, build_epistemic, concretize, eve_moves, lift_payoff, successors, EpiHistory, EpiLasso, EpistemicGame,
    EveState, Suggestion, VSet,
};
use epinash::fixtures;
use epinash::game_model::{parse_game, Game, History, PayoffVector};
use epinash::mp_engine::{
    check_mp, decide_mp, solve_threshold, transform_weights, MpArena, MpKind, MpVerdict, DEFAULT_STRATEGY_BUDGET,
};
use epinash::ne_search::{boolean_candidates, decide_boolean, synthesize_profile, Query};
use epinash::oracle::{
    brute_adam_signals, brute_eve_moves, brute_successors, check_profile_absorbing, dual_adam_region,
    enumerate_histories, naive_winning_fixpoint, verify_lemma3, DepthBudget, OParityArena, OState, OSuggestion,
    ProfileVerdict,
};
use epinash::parity_solver::{solve_cobuchi_union, solve_conj_parity, ConjParityGame};
use epinash::random::{random_absorbing_mp, random_conj_parity, random_game, RandomParams, RandomPayoff};
use epinash::witness::{check_boolean, witness_from_json};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games")
}

fn cli(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_epinash")).args(args).output().expect("binary runs");
    out.status.code().expect("exit code")
}

fn exact(g: &Game, p: &str) -> Query {
    let v = PayoffVector::parse(p, g.n_players()).unwrap();
    Query::new(v.clone(), v).unwrap()
}

fn state(g: &Game, bot: Option<&str>, comps: &[(&str, &[&str])]) -> EveState {
    let mut s =
        EveState { bot: bot.map(|v| g.vertex_id(v).unwrap()), comp: vec![VSet::empty(g.n_vertices()); g.n_players()] };
    for (p, vs) in comps {
        for v in *vs {
            s.comp[g.player_id(p).unwrap()].insert(g.vertex_id(v).unwrap());
        }
    }
    s
}

fn golden_initial_successors() {
    let g = fixtures::example_orange();
    let e = build_epistemic(&g).unwrap();
    let s0 = state(&g, Some("v0"), &[]);
    let s1 = state(&g, Some("v2"), &[("A2", &["v1"])]);
    let s2 = state(&g, None, &[("A1", &["v4"]), ("A3", &["v5"])]);
    assert_eq!(e.eve[e.initial()], s0);
    let aba = g.mv(&["a", "b", "a"]);
    let a = e.eve_succ[e.initial()]
        .iter()
        .copied()
        .find(|&a| e.adam[a].suggestion.moves(&g, &s0)[0].1 == &aba)
        .expect("suggestion ⟨a,b,a⟩ offered");
    let got: BTreeMap<String, EveState> =
        e.adam[a].succ.iter().map(|&(beta, t)| (g.signals[beta].clone(), e.eve[t].clone())).collect();
    let want = BTreeMap::from([("yellow".to_string(), s1), ("green".to_string(), s2)]);
    assert_eq!(got, want);
}

fn lemma3_suite() {
    for g in [fixtures::example_orange(), fixtures::example_buchi()] {
        assert!(verify_lemma3(&g, &DepthBudget::new(3)).unwrap().is_none());
    }
    let p = RandomParams::default();
    for seed in 0..500 {
        let r = verify_lemma3(&random_game(seed, &p), &DepthBudget::new(4)).unwrap();
        assert!(r.is_none(), "seed {seed}: {r:?}");
    }
}

fn ostate(s: &EveState) -> OState {
    OState { bot: s.bot.into_iter().collect(), comp: s.comp.iter().map(|c| c.iter().collect()).collect() }
}

fn same_state(s: &EveState, o: &OState) -> bool {
    s.bot.iter().eq(o.bot.iter()) && s.comp.iter().zip(&o.comp).all(|(c, d)| c.iter().eq(d.iter().copied()))
}

fn osuggestion(g: &Game, s: &EveState, m: &Suggestion) -> OSuggestion {
    m.moves(g, s).into_iter().map(|(st, mv)| ((st.owner, st.v), mv.clone())).collect()
}

fn allow_tab_definitions() {
    let p = RandomParams::default();
    for seed in 0..500 {
        let g = random_game(seed, &p);
        let e = build_epistemic(&g).unwrap();
        for s in &e.eve {
            let os = ostate(s);
            let full: Vec<(Suggestion, OSuggestion)> = eve_moves(&g, s)
                .into_iter()
                .map(|m| {
                    let om = osuggestion(&g, s, &m);
                    (m, om)
                })
                .collect();
            let mine: BTreeSet<&OSuggestion> = full.iter().map(|(_, om)| om).collect();
            let brute = brute_eve_moves(&g, &os, false);
            assert_eq!(mine, brute.iter().collect(), "seed {seed}: Allow′ at {}", s.fmt_with(&g));
            for (m, om) in &full {
                let sig: BTreeSet<usize> = adam_signals(&g, s, m).into_iter().collect();
                assert_eq!(sig, brute_adam_signals(&g, &os, om), "seed {seed}");
                let mut next = brute_successors(&g, &os, om);
                for (beta, t) in successors(&g, s, m) {
                    let o = next.remove(&beta).expect("signal offered by both");
                    assert!(same_state(&t, &o), "seed {seed}");
                }
                assert!(next.is_empty(), "seed {seed}");
            }
        }
    }
}

fn boolean_vs_naive() {
    let p = RandomParams { payoff: RandomPayoff::Buchi, ..RandomParams::default() };
    for seed in 0..300 {
        let g = random_game(seed, &p);
        let e = build_epistemic(&g).unwrap();
        for cand in boolean_candidates(&Query::trivial(g.n_players())) {
            let bits: Vec<&str> = cand.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let found = decide_boolean(&g, &exact(&g, &bits.join(","))).unwrap();
            let naive = naive_winning_fixpoint(&g, &e, &cand, usize::MAX).unwrap();
            assert_eq!(found.is_some(), naive, "seed {seed} payoff {cand:?}");
            if let Some(w) = found {
                check_boolean(&g, &e, &w).unwrap();
            }
        }
    }
}

fn example_end_to_end() {
    let dir = std::env::temp_dir().join(format!("epinash-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game = games_dir().join("example_buchi.json");
    let gp = game.to_str().unwrap();
    let wfile = dir.join("w110.json");
    let wp = wfile.to_str().unwrap();
    assert_eq!(cli(&["solve", gp, "--lower", "1,1,0", "--upper", "1,1,0", "--witness", wp]), 0);
    assert_eq!(cli(&["check", gp, wp]), 0);
    let g = parse_game(&std::fs::read_to_string(&game).unwrap()).unwrap();
    let e = build_epistemic(&g).unwrap();
    let doc = serde_json::from_str(&std::fs::read_to_string(&wfile).unwrap()).unwrap();
    let w = witness_from_json(&g, &e, &doc).unwrap();
    let profile = synthesize_profile(&g, &e, &w);
    let verdict = check_profile_absorbing(&g, &|p, h| profile.action(&g, p, h), &DepthBudget::new(4)).unwrap();
    assert_eq!(verdict, ProfileVerdict::Equilibrium { payoff: vec![q(1, 1), q(1, 1), q(0, 1)] });
    assert_eq!(cli(&["solve", gp, "--lower", "3,3,3", "--upper", "3,3,3"]), 1);
    assert_eq!(cli(&["solve", gp, "--lower", "3,3,3"]), 1);
    // Requiring 1 for everyone is met at l333.
    let w = decide_boolean(&g, &exact(&g, "1,1,1")).unwrap().expect("(1,1,1) is an equilibrium payoff");
    let mut h = w.lasso.prefix.clone();
    h.steps.extend(w.lasso.cycle.iter().copied());
    assert_eq!(g.vertices[concretize(&g, &e, &h).bot.unwrap().last()], "l333");
    std::fs::remove_dir_all(&dir).ok();
}

fn to_oracle(g: &ConjParityGame) -> OParityArena {
    OParityArena {
        eve: g.arena.eve.clone(),
        succ: g.arena.succ.clone(),
        sink: g.arena.sink.clone(),
        prio: (0..g.arena.len()).map(|v| g.prio.iter().map(|p| p[v]).collect()).collect(),
    }
}

fn parity_duality() {
    for seed in 0..200 {
        let g = random_conj_parity(seed, 10);
        let n = g.arena.len();
        let eve = solve_conj_parity(&g).unwrap().win;
        let adam = dual_adam_region(&to_oracle(&g), 1 << 22).unwrap();
        for v in 0..n {
            assert_ne!(eve.get(v), adam[v], "seed {seed} node {v}");
        }
        let bad: Vec<Bits> = g.prio.iter().map(|p| Bits::from_fn(n, |v| p[v] % 2 == 1)).collect();
        let prio = bad.iter().map(|b| (0..n).map(|v| if b.get(v) { 1 } else { 2 }).collect()).collect();
        let co = ConjParityGame { arena: g.arena.clone(), prio };
        assert_eq!(solve_cobuchi_union(&co.arena, &bad).unwrap(), solve_conj_parity(&co).unwrap().win, "seed {seed}");
    }
}

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

fn mp_transform() {
    let p = RandomParams { payoff: RandomPayoff::MeanPayoff, ..RandomParams::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut lassos = 0;
    for seed in 0..100 {
        let g = random_game(seed, &p);
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
                        assert_eq!((x[i], x[n + i], x[2 * n + i]), (2 * wb, -2 * wb, -2 * wb));
                    } else {
                        assert_eq!((x[i], x[n + i]), (2 * w, 2 * w));
                        assert_eq!(x[2 * n + i], if sus.contains(i) { -2 * wb } else { 2 * w });
                    }
                }
            }
        }
        for _ in 0..10 {
            let l = random_bot_lasso(&e, &mut rng);
            let lifted = lift_payoff(&g, &l);
            let vals = t.lasso_values(&e, &l);
            for i in 0..n {
                assert_eq!(lifted[i], vals[i]);
                assert_eq!(lifted[i], -vals[n + i].clone());
            }
            lassos += 1;
        }
    }
    assert_eq!(lassos, 1000);
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

fn mp_end_to_end() {
    let one = [MpKind::Liminf];
    assert!(wins(&arena(&[true], &[&[(0, &[2])]], &one), &[q(2, 1)]));
    let fork = arena(&[false, true, true], &[&[(1, &[0]), (2, &[0])], &[(1, &[2])], &[(2, &[-2])]], &one);
    assert!(!wins(&fork, &[q(0, 1)]));
    assert!(wins(&fork, &[q(-2, 1)]));
    let two = [MpKind::Liminf, MpKind::Liminf];
    let alt = arena(&[true], &[&[(0, &[2, 0]), (0, &[0, 2])]], &two);
    assert!(wins(&alt, &[q(1, 1), q(1, 1)]));
    assert!(!wins(&alt, &[q(3, 2), q(1, 1)]));

    let g = parse_game(
        r#"{"players":["A"],"vertices":["v"],"initial":"v","actions":["a"],
            "allowed":{"v":{"A":["a"]}},
            "transitions":[{"from":"v","move":{"A":"a"},"to":"v"}],
            "signals":[{"move":{"A":"a"},"to":"v","label":"s"}],
            "payoffs":{"A":{"kind":"mp-liminf","weights":{"s":2}}}}"#,
    )
    .unwrap();
    let e = build_epistemic(&g).unwrap();
    let MpVerdict::Exists(w) = decide_mp(&g, &Query::trivial(1)).unwrap() else { panic!("single play") };
    assert_eq!(w.mp.as_ref().unwrap().u, vec![q(2, 1), q(-2, 1), q(-2, 1)]);
    check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap();
    assert_eq!(decide_mp(&g, &exact(&g, "1")).unwrap(), MpVerdict::None);

    let g = fixtures::example_mp();
    let e = build_epistemic(&g).unwrap();
    let MpVerdict::Exists(w) = decide_mp(&g, &exact(&g, "1,1,0")).unwrap() else { panic!("(1,1,0)") };
    assert_eq!(w.mp.as_ref().unwrap().u, [1, 1, 0, -1, -1, 0, -1, -1, 0].map(|x| q(x, 1)).to_vec());
    check_mp(&g, &e, &w, DEFAULT_STRATEGY_BUDGET).unwrap();
}

fn semantics_regression() {
    let p = RandomParams::default();
    let mut pairs = 0;
    for seed in 0..100 {
        let g = random_game(seed, &p);
        let hs = enumerate_histories(&g, &DepthBudget::new(3)).unwrap();
        for h in &hs {
            for pl in 0..g.n_players() {
                for k in 0..h.len() {
                    let (m, v) = &h.steps[k];
                    for &a in g.allowed(h.vertex(k), pl) {
                        let m2 = m.with(pl, a);
                        if a == m.of(pl) || g.step(h.vertex(k), &m2).ok() != Some(*v) {
                            continue;
                        }
                        let mut h2 = h.clone();
                        h2.steps[k].0 = m2;
                        assert!(!g.indistinguishable(h, &h2, pl), "seed {seed}");
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 1000);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut flagged, mut clean) = (0, 0);
    for seed in 0..60 {
        let g = random_absorbing_mp(seed, 3);
        let d = DepthBudget::new(3);
        let hs = enumerate_histories(&g, &d).unwrap();
        let by_projection = rng.random_bool(0.5);
        let mut table: HashMap<(usize, String), usize> = HashMap::new();
        for h in &hs {
            for pl in 0..g.n_players() {
                let key = if by_projection { format!("{:?}", g.project(h, pl)) } else { format!("{h:?}") };
                let allowed = g.allowed(h.last(), pl);
                table.entry((pl, key)).or_insert_with(|| allowed[rng.random_range(0..allowed.len())]);
            }
        }
        let act = |pl: usize, h: &History| {
            let key = if by_projection { format!("{:?}", g.project(h, pl)) } else { format!("{h:?}") };
            table[&(pl, key)]
        };
        let mut truth = false;
        for (i, h1) in hs.iter().enumerate() {
            for h2 in &hs[i + 1..] {
                for pl in 0..g.n_players() {
                    truth |= g.indistinguishable(h1, h2, pl) && act(pl, h1) != act(pl, h2);
                }
            }
        }
        match check_profile_absorbing(&g, &act, &d).unwrap() {
            ProfileVerdict::InfoIncompatible { player, h1, h2 } => {
                assert!(truth, "seed {seed}");
                assert!(g.indistinguishable(&h1, &h2, player) && act(player, &h1) != act(player, &h2));
                flagged += 1;
            }
            _ => {
                assert!(!truth, "seed {seed}");
                clean += 1;
            }
        }
    }
    assert!(flagged > 0 && clean > 0, "{flagged} {clean}");
}

fn main() {
    let criteria: [(&str, u64, fn()); 9] = [
        ("golden initial states and yellow/green edges of the example", 1, golden_initial_successors),
        ("epistemic histories vs indistinguishability, example and 500 random games", 120, lemma3_suite),
        ("Allow′/Tab′ against the set definitions on 500 random games", 120, allow_tab_definitions),
        ("Boolean search vs naive fixpoint on 300 random Büchi games", 300, boolean_vs_naive),
        ("example equilibrium end to end through the binary", 5, example_end_to_end),
        ("parity duality and co-Büchi specialization on 200 arenas", 60, parity_duality),
        ("mean-payoff transformation invariants and lasso identity", 60, mp_transform),
        ("mean-payoff desk examples with exact thresholds", 10, mp_end_to_end),
        ("indistinguishability and info-compatibility semantics", 60, semantics_regression),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let el = t.elapsed();
        let verdict = match &res {
            Ok(()) if el <= Duration::from_secs(limit) => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {limit} s limit)"),
            Err(e) => {
                let msg =
                    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                format!("FAIL ({})", msg.unwrap_or_default())
            }
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {verdict} [{:.2} s / {limit} s] {name}", i + 1, el.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
