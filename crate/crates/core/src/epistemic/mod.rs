//! The epistemic game: Eve suggests moves for every situation, Adam answers
//! with a public signal, states track where each possible deviator may be.

mod concretize;
mod dot;
mod sets;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::game_model::{Game, Move, Player, Signal, Vertex};

pub use concretize::{concretize, lift_payoff, Concretization, EpiHistory, EpiLasso};
pub use dot::to_dot;
pub use sets::{PlayerSet, VSet};

/// `s: Agt ∪ {⊥} → 2^V` with `|s(⊥)| ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EveState {
    pub bot: Option<Vertex>,
    pub comp: Vec<VSet>,
}

/// `None` is ⊥.
pub type Owner = Option<Player>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Situation {
    pub v: Vertex,
    pub owner: Owner,
}

/// One move id (index into `Game::steps(v)`) per situation, in
/// `EveState::situations` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Suggestion(pub Vec<u32>);

impl EveState {
    pub fn initial(g: &Game) -> Self {
        EveState { bot: Some(g.initial), comp: vec![VSet::empty(g.n_vertices()); g.n_players()] }
    }

    pub fn is_bot(&self) -> bool {
        self.bot.is_some()
    }

    /// ⊥ first, then players in order, vertices ascending.
    pub fn situations(&self) -> Vec<Situation> {
        let mut out = Vec::new();
        if let Some(v) = self.bot {
            out.push(Situation { v, owner: None });
        }
        for (p, c) in self.comp.iter().enumerate() {
            out.extend(c.iter().map(|v| Situation { v, owner: Some(p) }));
        }
        out
    }

    pub fn suspects(&self) -> PlayerSet {
        let mut s = PlayerSet::EMPTY;
        for (p, c) in self.comp.iter().enumerate() {
            if !c.is_empty() {
                s = s.with(p);
            }
        }
        s
    }

    pub fn fmt_with(&self, g: &Game) -> String {
        let set = |vs: Vec<Vertex>| -> String {
            let names: Vec<&str> = vs.iter().map(|&v| g.vertices[v].as_str()).collect();
            format!("{{{}}}", names.join(","))
        };
        let mut parts = vec![format!("⊥:{}", set(self.bot.into_iter().collect()))];
        for (p, c) in self.comp.iter().enumerate() {
            parts.push(format!("{}:{}", g.players[p], set(c.iter().collect())));
        }
        parts.join(" ")
    }
}

pub fn suspects(s: &EveState) -> PlayerSet {
    s.suspects()
}

impl Suggestion {
    pub fn moves<'a>(&'a self, g: &'a Game, s: &EveState) -> Vec<(Situation, &'a Move)> {
        s.situations().into_iter().zip(&self.0).map(|(st, &k)| (st, &g.steps(st.v)[k as usize].mv)).collect()
    }

    pub fn fmt_with(&self, g: &Game, s: &EveState) -> String {
        let parts: Vec<String> = self
            .moves(g, s)
            .into_iter()
            .map(|(st, m)| {
                let o = st.owner.map(|p| g.players[p].as_str()).unwrap_or("⊥");
                format!("({},{}):{}", g.vertices[st.v], o, g.fmt_move(m))
            })
            .collect();
        parts.join(" ")
    }
}

fn suggestions(g: &Game, s: &EveState, reduced: bool) -> Vec<Suggestion> {
    let sits = s.situations();
    let n = g.n_players();
    // Shared action of each player at situations it does not own.
    let mut shared: Vec<Vec<usize>> = Vec::with_capacity(n);
    for a in 0..n {
        let mut common: Option<Vec<usize>> = None;
        for st in sits.iter().filter(|st| st.owner != Some(a)) {
            let acts = g.allowed(st.v, a);
            common = Some(match common {
                None => acts.to_vec(),
                Some(c) => c.into_iter().filter(|x| acts.contains(x)).collect(),
            });
        }
        shared.push(common.unwrap_or_else(|| vec![usize::MAX]));
    }
    let mut out = Vec::new();
    for c in crate::game_model::cartesian(&shared) {
        let per_sit: Vec<Vec<u32>> = sits
            .iter()
            .map(|st| {
                let own: Vec<usize> = match st.owner {
                    None => vec![usize::MAX],
                    Some(a) if reduced => vec![g.allowed(st.v, a)[0]],
                    Some(a) => g.allowed(st.v, a).to_vec(),
                };
                own.into_iter()
                    .map(|x| {
                        let mut m = c.clone();
                        if let Some(a) = st.owner {
                            m[a] = x;
                        }
                        g.move_id(st.v, &Move(m)).expect("suggested move is allowed") as u32
                    })
                    .collect()
            })
            .collect();
        let lists: Vec<Vec<usize>> = per_sit.iter().map(|l| l.iter().map(|&x| x as usize).collect()).collect();
        for t in crate::game_model::cartesian(&lists) {
            out.push(Suggestion(t.into_iter().map(|x| x as u32).collect()));
        }
    }
    out.sort();
    out
}

/// `Allow′(s)`: every suggestion satisfying per-situation allowedness and
/// `M(v_B,B)(A) = M(v_C,C)(A)` for `A ∉ {B, C}`.
pub fn eve_moves(g: &Game, s: &EveState) -> Vec<Suggestion> {
    suggestions(g, s, false)
}

/// `Allow′(s)` up to the actions players take at their own situations,
/// which influence neither signals nor successors. Own actions are fixed to
/// the smallest allowed one.
pub fn eve_moves_reduced(g: &Game, s: &EveState) -> Vec<Suggestion> {
    suggestions(g, s, true)
}

/// Calls `f(β, owner, target)` for every outcome of `m` in `s`, the ⊥
/// outcome first.
fn outcomes(g: &Game, s: &EveState, m: &Suggestion, mut f: impl FnMut(Signal, Owner, Vertex)) {
    let n = g.n_players();
    let mut ids = m.0.iter();
    if let Some(v) = s.bot {
        let steps = g.steps(v);
        let sug = &steps[*ids.next().expect("one move per situation") as usize];
        f(sug.signal, None, sug.target);
        for step in steps {
            if step.signal == sug.signal && step.target == sug.target {
                continue;
            }
            for a in 0..n {
                if step.mv.of(a) != sug.mv.of(a) && step.mv.same_except(&sug.mv, a) {
                    f(step.signal, Some(a), step.target);
                }
            }
        }
    }
    for (a, c) in s.comp.iter().enumerate() {
        for v in c.iter() {
            let steps = g.steps(v);
            let sug = &steps[*ids.next().expect("one move per situation") as usize];
            for step in steps.iter().filter(|x| x.mv.same_except(&sug.mv, a)) {
                f(step.signal, Some(a), step.target);
            }
        }
    }
}

/// `Tab′((s, M), β)` for every `β ∈ Allow′(s, M)`, sorted by signal.
pub fn successors(g: &Game, s: &EveState, m: &Suggestion) -> Vec<(Signal, EveState)> {
    let nv = g.n_vertices();
    let mut out: Vec<(Signal, EveState)> = Vec::new();
    outcomes(g, s, m, |beta, owner, t| {
        let i = match out.iter().position(|x| x.0 == beta) {
            Some(i) => i,
            None => {
                out.push((beta, EveState { bot: None, comp: vec![VSet::empty(nv); g.n_players()] }));
                out.len() - 1
            }
        };
        match owner {
            None => out[i].1.bot = Some(t),
            Some(a) => out[i].1.comp[a].insert(t),
        }
    });
    out.sort_by_key(|x| x.0);
    out
}

/// `Allow′(s, M)`.
pub fn adam_signals(g: &Game, s: &EveState, m: &Suggestion) -> Vec<Signal> {
    let mut out = Vec::new();
    outcomes(g, s, m, |beta, _, _| {
        if !out.contains(&beta) {
            out.push(beta);
        }
    });
    out.sort_unstable();
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EpistemicError {
    #[error("signal {0} is not allowed after this suggestion")]
    SignalNotAllowed(String),
    #[error("epistemic game exceeds the cap of {0} states")]
    CapExceeded(usize),
}

pub fn successor(g: &Game, s: &EveState, m: &Suggestion, beta: Signal) -> Result<EveState, EpistemicError> {
    successors(g, s, m)
        .into_iter()
        .find(|x| x.0 == beta)
        .map(|x| x.1)
        .ok_or_else(|| EpistemicError::SignalNotAllowed(g.signals[beta].clone()))
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Bound on Eve plus Adam states.
    pub cap_states: usize,
    /// Keep one suggestion per class of suggestions differing only in the
    /// actions players take at their own situations.
    pub reduced: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cap_states: 1_000_000, reduced: true }
    }
}

#[derive(Clone, Debug)]
pub struct AdamState {
    pub eve: usize,
    pub suggestion: Suggestion,
    /// `(β, successor Eve state)`, sorted by signal.
    pub succ: Vec<(Signal, usize)>,
}

/// Reachable part of the epistemic game. Eve state 0 is `s_init`.
#[derive(Clone, Debug)]
pub struct EpistemicGame {
    pub eve: Vec<EveState>,
    pub adam: Vec<AdamState>,
    /// Adam states offered at each Eve state.
    pub eve_succ: Vec<Vec<usize>>,
    index: HashMap<EveState, usize>,
}

impl EpistemicGame {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn eve_id(&self, s: &EveState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn n_states(&self) -> usize {
        self.eve.len() + self.adam.len()
    }

    /// The Eve successor through `β` of Adam state `a`.
    pub fn next(&self, a: usize, beta: Signal) -> Option<usize> {
        self.adam[a].succ.iter().find(|x| x.0 == beta).map(|x| x.1)
    }

    /// The successor of `a` with nonempty ⊥-component, if any.
    pub fn bot_succ(&self, a: usize) -> Option<(Signal, usize)> {
        self.adam[a].succ.iter().copied().find(|&(_, t)| self.eve[t].is_bot())
    }

    /// Number of reachable Eve states per suspect set.
    pub fn suspect_histogram(&self) -> BTreeMap<PlayerSet, usize> {
        let mut h = BTreeMap::new();
        for s in &self.eve {
            *h.entry(s.suspects()).or_insert(0) += 1;
        }
        h
    }
}

pub fn build_epistemic(g: &Game) -> Result<EpistemicGame, EpistemicError> {
    build_epistemic_with(g, BuildOptions::default())
}

/// Breadth-first closure of `s_init`; states numbered in discovery order.
pub fn build_epistemic_with(g: &Game, opts: BuildOptions) -> Result<EpistemicGame, EpistemicError> {
    let init = EveState::initial(g);
    let mut e =
        EpistemicGame { eve: vec![init.clone()], adam: Vec::new(), eve_succ: Vec::new(), index: HashMap::new() };
    e.index.insert(init, 0);
    let mut i = 0;
    while i < e.eve.len() {
        let s = e.eve[i].clone();
        let ms = if opts.reduced { eve_moves_reduced(g, &s) } else { eve_moves(g, &s) };
        let mut offered = Vec::with_capacity(ms.len());
        for m in ms {
            let mut succ = Vec::new();
            for (beta, t) in successors(g, &s, &m) {
                let id = match e.index.get(&t) {
                    Some(&id) => id,
                    None => {
                        e.eve.push(t.clone());
                        e.index.insert(t, e.eve.len() - 1);
                        e.eve.len() - 1
                    }
                };
                succ.push((beta, id));
            }
            offered.push(e.adam.len());
            e.adam.push(AdamState { eve: i, suggestion: m, succ });
            if e.n_states() > opts.cap_states {
                return Err(EpistemicError::CapExceeded(opts.cap_states));
            }
        }
        e.eve_succ.push(offered);
        i += 1;
    }
    Ok(e)
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.owner {
            None => write!(f, "({},⊥)", self.v),
            Some(p) => write!(f, "({},{})", self.v, p),
        }
    }
}
