//! Seeded generator of small games.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game_model::{Game, Move, PayoffSpec};
use crate::parity_solver::{Arena, ConjParityGame};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomPayoff {
    Buchi,
    Parity,
    MeanPayoff,
}

#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    pub max_vertices: usize,
    pub max_players: usize,
    pub n_actions: usize,
    pub max_signals: usize,
    pub payoff: RandomPayoff,
    pub max_weight: i64,
    pub max_priority: u32,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_vertices: 4,
            max_players: 3,
            n_actions: 2,
            max_signals: 4,
            payoff: RandomPayoff::Buchi,
            max_weight: 3,
            max_priority: 3,
        }
    }
}

/// Allowed action sets depend on the player only, so suggestions always
/// exist.
pub fn random_game(seed: u64, params: &RandomParams) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.random_range(1..=params.max_vertices);
    let np = rng.random_range(1..=params.max_players);
    let ns = rng.random_range(1..=params.max_signals);
    let na = params.n_actions.max(1);
    let per_player: Vec<Vec<usize>> = (0..np)
        .map(|_| loop {
            let acts: Vec<usize> = (0..na).filter(|_| rng.random_bool(0.75)).collect();
            if !acts.is_empty() {
                break acts;
            }
        })
        .collect();
    let allowed = vec![per_player; nv];
    let mut targets: HashMap<(usize, Move), usize> = HashMap::new();
    let mut labels: HashMap<(Move, usize), usize> = HashMap::new();
    for (v, row) in allowed.iter().enumerate() {
        for t in crate::game_model::cartesian(row) {
            let m = Move(t);
            let to = rng.random_range(0..nv);
            targets.insert((v, m.clone()), to);
            if let std::collections::hash_map::Entry::Vacant(e) = labels.entry((m, to)) {
                e.insert(rng.random_range(0..ns));
            }
        }
    }
    let payoffs = (0..np)
        .map(|_| match params.payoff {
            RandomPayoff::Buchi => {
                let acc: Vec<usize> = (0..ns).filter(|_| rng.random_bool(0.5)).collect();
                PayoffSpec::buchi(ns, &acc)
            }
            RandomPayoff::Parity => {
                PayoffSpec::parity((0..ns).map(|_| rng.random_range(0..=params.max_priority)).collect())
            }
            RandomPayoff::MeanPayoff => {
                let w = (0..ns).map(|_| rng.random_range(-params.max_weight..=params.max_weight)).collect();
                if rng.random_bool(0.5) {
                    PayoffSpec::mp_liminf(w)
                } else {
                    PayoffSpec::mp_limsup(w)
                }
            }
        })
        .collect();
    let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    Game::from_parts(
        names("P", np),
        names("v", nv),
        names("a", na),
        names("s", ns),
        0,
        allowed,
        |v, m| {
            let to = targets[&(v, m.clone())];
            Some((to, labels[&(m.clone(), to)]))
        },
        payoffs,
    )
    .expect("generated game is valid")
}

/// Random two-stage mean-payoff game: the root leads to inner vertices or
/// leaves, inner vertices lead to leaves, and every leaf loops on its own
/// signal. Inner signals weigh nothing and may be shared.
pub fn random_absorbing_mp(seed: u64, max_players: usize) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = rng.random_range(1..=max_players.max(1));
    let n_inner = rng.random_range(0..=2);
    let n_leaves = rng.random_range(2..=4);
    let nv = 1 + n_inner + n_leaves;
    let leaf0 = 1 + n_inner;
    let n_inner_signals = 2;
    let ns = n_inner_signals + n_leaves;
    let allowed: Vec<Vec<Vec<usize>>> =
        (0..nv).map(|v| (0..np).map(|_| if v >= leaf0 { vec![0] } else { vec![0, 1] }).collect()).collect();
    let mut targets: HashMap<(usize, Move), usize> = HashMap::new();
    let mut labels: HashMap<(Move, usize), usize> = HashMap::new();
    for (v, row) in allowed.iter().enumerate().take(leaf0) {
        for t in crate::game_model::cartesian(row) {
            let m = Move(t);
            let to = if v == 0 { rng.random_range(1..nv) } else { rng.random_range(leaf0..nv) };
            targets.insert((v, m.clone()), to);
            let sig = if to >= leaf0 { n_inner_signals + to - leaf0 } else { rng.random_range(0..n_inner_signals) };
            labels.entry((m, to)).or_insert(sig);
        }
    }
    let payoffs = (0..np)
        .map(|_| {
            let mut w = vec![0i64; ns];
            for x in w.iter_mut().skip(n_inner_signals) {
                *x = rng.random_range(-2..=2);
            }
            if rng.random_bool(0.5) {
                PayoffSpec::mp_liminf(w)
            } else {
                PayoffSpec::mp_limsup(w)
            }
        })
        .collect();
    let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    Game::from_parts(
        names("P", np),
        names("v", nv),
        names("a", 2),
        names("s", ns),
        0,
        allowed,
        |v, m| {
            if v >= leaf0 {
                return Some((v, n_inner_signals + v - leaf0));
            }
            let to = targets[&(v, m.clone())];
            Some((to, labels[&(m.clone(), to)]))
        },
        payoffs,
    )
    .expect("generated game is valid")
}

/// Random generalized parity arena with up to `max_nodes` nodes, up to
/// three dimensions and priorities in `0..=4`. Some nodes are sinks.
pub fn random_conj_parity(seed: u64, max_nodes: usize) -> ConjParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_nodes.max(1));
    let dims = rng.random_range(1..=3);
    let mut arena = Arena { eve: Vec::new(), succ: Vec::new(), sink: Vec::new() };
    for _ in 0..n {
        arena.eve.push(rng.random_bool(0.5));
        let sink = if rng.random_bool(0.1) { Some(rng.random_bool(0.5)) } else { None };
        arena.sink.push(sink);
        let deg = if sink.is_some() || rng.random_bool(0.05) { 0 } else { rng.random_range(1..=3) };
        let mut out: Vec<usize> = (0..deg).map(|_| rng.random_range(0..n)).collect();
        out.sort_unstable();
        out.dedup();
        arena.succ.push(out);
    }
    let prio = (0..dims).map(|_| (0..n).map(|_| rng.random_range(0..=4)).collect()).collect();
    ConjParityGame { arena, prio }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let p = RandomParams::default();
        for seed in 0..20 {
            let (a, b) = (random_game(seed, &p), random_game(seed, &p));
            assert_eq!(crate::game_model::game_to_json(&a), crate::game_model::game_to_json(&b));
            assert!(a.n_vertices() <= 4 && a.n_players() <= 3 && a.n_signals() <= 4);
        }
    }
}
