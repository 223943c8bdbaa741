use std::collections::HashMap;

use super::allow::{brute_adam_signals, brute_eve_moves, brute_successor, OState, OSuggestion};
use super::{DepthBudget, OracleError};
use crate::game_model::{Action, Game, History, Player, Signal};

/// A pair of concretizations of one epistemic history violating the
/// characterization of `∼_A`.
#[derive(Clone, Debug)]
pub struct Lemma3Counterexample {
    pub depth: usize,
    pub player: Player,
    pub h1: History,
    pub h2: History,
    pub indistinguishable: bool,
}

struct Classes {
    bot: Option<History>,
    dev: Vec<Vec<History>>,
}

fn projection(g: &Game, h: &History, p: Player) -> Vec<(Action, Signal)> {
    h.steps.iter().map(|(m, v)| (m.0[p], g.signal_of(m, *v).unwrap())).collect()
}

fn agrees_except(m: &[usize], other: &[usize], p: Player) -> bool {
    (0..m.len()).all(|q| q == p || m[q] == other[q])
}

fn extend(g: &Game, c: &Classes, next: &OState, sug: &OSuggestion, beta: Signal) -> Classes {
    let n = g.n_players();
    let mut dev: Vec<Vec<History>> = vec![Vec::new(); n];
    let mut bot = None;
    if let Some(h) = &c.bot {
        let v = h.last();
        let m = &sug[&(None, v)];
        for st in g.steps(v) {
            if st.signal != beta {
                continue;
            }
            if st.mv == *m {
                bot = Some(h.extended(st.mv.clone(), st.target));
            }
            for (a, class) in dev.iter_mut().enumerate() {
                if st.mv.0[a] != m.0[a] && agrees_except(&st.mv.0, &m.0, a) && !next.bot.contains(&st.target) {
                    class.push(h.extended(st.mv.clone(), st.target));
                }
            }
        }
    }
    for (a, class) in c.dev.iter().enumerate() {
        for h in class {
            let v = h.last();
            let Some(m) = sug.get(&(Some(a), v)) else { continue };
            for st in g.steps(v) {
                if st.signal == beta && agrees_except(&st.mv.0, &m.0, a) {
                    dev[a].push(h.extended(st.mv.clone(), st.target));
                }
            }
        }
    }
    Classes { bot, dev }
}

fn check(g: &Game, c: &Classes, depth: usize) -> Option<Lemma3Counterexample> {
    let n = g.n_players();
    let mut all: Vec<(&History, Option<Player>)> = c.bot.iter().map(|h| (h, None)).collect();
    for (a, class) in c.dev.iter().enumerate() {
        all.extend(class.iter().map(|h| (h, Some(a))));
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let ((h1, o1), (h2, o2)) = (all[i], all[j]);
            if h1 == h2 {
                continue;
            }
            for p in 0..n {
                let same = projection(g, h1, p) == projection(g, h2, p);
                let outside = o1 != Some(p) && o2 != Some(p);
                if same != outside {
                    return Some(Lemma3Counterexample {
                        depth,
                        player: p,
                        h1: h1.clone(),
                        h2: h2.clone(),
                        indistinguishable: same,
                    });
                }
            }
        }
    }
    None
}

/// Checks `h_1 ∼_A h_2 ⇔ h_1, h_2 ∉ concrete_A(H)` on every epistemic
/// history of length at most `d.max_depth`. Suggestions are taken up to the
/// actions players take at their own situations.
pub fn verify_lemma3(g: &Game, d: &DepthBudget) -> Result<Option<Lemma3Counterexample>, OracleError> {
    let mut moves_cache: HashMap<OState, Vec<OSuggestion>> = HashMap::new();
    let mut visited = 0usize;
    let root = Classes { bot: Some(History::new(g.initial)), dev: vec![Vec::new(); g.n_players()] };
    let mut stack: Vec<(OState, Classes, usize)> = vec![(OState::initial(g), root, 0)];
    while let Some((s, c, depth)) = stack.pop() {
        visited += 1;
        if visited > d.max_nodes {
            return Err(OracleError::BudgetExceeded);
        }
        if let Some(cx) = check(g, &c, depth) {
            return Ok(Some(cx));
        }
        if depth == d.max_depth {
            continue;
        }
        let moves = moves_cache.entry(s.clone()).or_insert_with(|| brute_eve_moves(g, &s, true)).clone();
        for sug in &moves {
            for beta in brute_adam_signals(g, &s, sug) {
                let next = brute_successor(g, &s, sug, beta);
                let nc = extend(g, &c, &next, sug, beta);
                stack.push((next, nc, depth + 1));
            }
        }
    }
    Ok(None)
}
