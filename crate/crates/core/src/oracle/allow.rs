use std::collections::{BTreeMap, BTreeSet};

use crate::game_model::{cartesian, Game, Move, Player, Signal, Vertex};

/// Epistemic state as plain sets; `bot` has at most one element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OState {
    pub bot: BTreeSet<Vertex>,
    pub comp: Vec<BTreeSet<Vertex>>,
}

/// `(owner, vertex)`, `None` for ⊥.
pub type OSit = (Option<Player>, Vertex);
pub type OSuggestion = BTreeMap<OSit, Move>;

impl OState {
    pub fn initial(g: &Game) -> Self {
        OState { bot: BTreeSet::from([g.initial]), comp: vec![BTreeSet::new(); g.n_players()] }
    }

    pub fn sits(&self) -> Vec<OSit> {
        let mut out: Vec<OSit> = self.bot.iter().map(|&v| (None, v)).collect();
        for (p, c) in self.comp.iter().enumerate() {
            out.extend(c.iter().map(|&v| (Some(p), v)));
        }
        out
    }
}

fn all_moves(g: &Game, v: Vertex) -> Vec<Move> {
    let lists: Vec<Vec<usize>> = (0..g.n_players()).map(|p| g.allowed(v, p).to_vec()).collect();
    cartesian(&lists).into_iter().map(Move).collect()
}

fn compatible(a: &(OSit, Move), b: &(OSit, Move), n: usize) -> bool {
    (0..n).all(|p| Some(p) == a.0 .0 || Some(p) == b.0 .0 || a.1 .0[p] == b.1 .0[p])
}

/// The Allow′(s) filter applied to the product of allowed moves, by
/// backtracking. With `quotient`, a player's action at its own situations
/// is restricted to its smallest allowed action.
pub fn brute_eve_moves(g: &Game, s: &OState, quotient: bool) -> Vec<OSuggestion> {
    let sits = s.sits();
    let n = g.n_players();
    let options: Vec<Vec<Move>> = sits
        .iter()
        .map(|&(o, v)| {
            all_moves(g, v)
                .into_iter()
                .filter(|m| match o {
                    Some(p) if quotient => m.0[p] == g.allowed(v, p)[0],
                    _ => true,
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(OSit, Move)> = Vec::new();
    fn rec(
        i: usize,
        sits: &[OSit],
        options: &[Vec<Move>],
        chosen: &mut Vec<(OSit, Move)>,
        n: usize,
        out: &mut Vec<OSuggestion>,
    ) {
        if i == sits.len() {
            out.push(chosen.iter().cloned().collect());
            return;
        }
        for m in &options[i] {
            let cand = (sits[i], m.clone());
            if chosen.iter().all(|c| compatible(c, &cand, n)) {
                chosen.push(cand);
                rec(i + 1, sits, options, chosen, n, out);
                chosen.pop();
            }
        }
    }
    rec(0, &sits, &options, &mut chosen, n, &mut out);
    out
}

fn agrees_except(m: &Move, other: &Move, p: Player) -> bool {
    (0..m.0.len()).all(|q| q == p || m.0[q] == other.0[q])
}

/// Literal union of the two displayed sets of signals.
pub fn brute_adam_signals(g: &Game, _s: &OState, sug: &OSuggestion) -> BTreeSet<Signal> {
    let mut out = BTreeSet::new();
    for (&(o, v), mv) in sug {
        for st in g.steps(v) {
            let hit = match o {
                Some(a) => agrees_except(&st.mv, mv, a),
                None => (0..g.n_players()).any(|a| agrees_except(&st.mv, mv, a)),
            };
            if hit {
                out.insert(st.signal);
            }
        }
    }
    out
}

/// Tab′ by the set definitions, tracking only deviations from the ⊥
/// situation whose outcome is not the ⊥ outcome.
pub fn brute_successor(g: &Game, s: &OState, sug: &OSuggestion, beta: Signal) -> OState {
    brute_successors(g, s, sug)
        .remove(&beta)
        .unwrap_or_else(|| OState { bot: BTreeSet::new(), comp: vec![BTreeSet::new(); g.n_players()] })
}

/// [`brute_successor`] for every signal at once; signals leading to the
/// empty state are absent.
pub fn brute_successors(g: &Game, s: &OState, sug: &OSuggestion) -> BTreeMap<Signal, OState> {
    let n = g.n_players();
    let mut next: BTreeMap<Signal, OState> = BTreeMap::new();
    fn at(next: &mut BTreeMap<Signal, OState>, beta: Signal, n: usize) -> &mut OState {
        next.entry(beta).or_insert_with(|| OState { bot: BTreeSet::new(), comp: vec![BTreeSet::new(); n] })
    }
    let mut bot_out = BTreeSet::new();
    for &v in &s.bot {
        let m = &sug[&(None, v)];
        let t = g.step(v, m).unwrap();
        let beta = g.signal_of(m, t).unwrap();
        at(&mut next, beta, n).bot.insert(t);
        bot_out.insert((beta, t));
    }
    for a in 0..n {
        for &v in &s.comp[a] {
            let mv = &sug[&(Some(a), v)];
            for st in g.steps(v) {
                if agrees_except(&st.mv, mv, a) {
                    at(&mut next, st.signal, n).comp[a].insert(st.target);
                }
            }
        }
        for &v in &s.bot {
            let mv = &sug[&(None, v)];
            for st in g.steps(v) {
                if agrees_except(&st.mv, mv, a) && st.mv.0[a] != mv.0[a] && !bot_out.contains(&(st.signal, st.target)) {
                    at(&mut next, st.signal, n).comp[a].insert(st.target);
                }
            }
        }
    }
    next
}
