//! Core games by suspect set and Boolean value sets.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::Bits;
use crate::epistemic::{EpistemicGame, PlayerSet};
use crate::game_model::{Game, Signal};
use crate::parity_solver::{
    solve_cobuchi_union, solve_conj_parity, Arena, ConjParityGame, ParityError, ParitySolution,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("core {core} failed: {source}")]
    Core { core: PlayerSet, source: ParityError },
    #[error("value sets need Boolean payoffs")]
    NotBoolean,
}

/// Sub-arena of the non-⊥ part with constant suspect set. Node layout:
/// core Eve states, then output Eve states, then Adam states, then one split
/// node per Adam→Eve edge carrying the edge's signal.
#[derive(Clone, Debug)]
pub struct CoreGame {
    pub suspects: PlayerSet,
    pub states: Vec<usize>,
    pub outputs: Vec<usize>,
    pub adam: Vec<usize>,
    pub arena: Arena,
    /// Signal of each split node.
    pub split: Vec<Option<Signal>>,
    node: HashMap<usize, usize>,
    adam_node: HashMap<usize, usize>,
}

impl CoreGame {
    /// Arena node of Eve state `s`, if `s` belongs to the core or its outputs.
    pub fn node_of(&self, s: usize) -> Option<usize> {
        self.node.get(&s).copied()
    }

    pub fn adam_node_of(&self, a: usize) -> Option<usize> {
        self.adam_node.get(&a).copied()
    }

    /// Eve state or Adam state behind an arena node.
    pub fn eve_state(&self, node: usize) -> Option<usize> {
        let k = self.states.len() + self.outputs.len();
        (node < k).then(|| {
            if node < self.states.len() {
                self.states[node]
            } else {
                self.outputs[node - self.states.len()]
            }
        })
    }

    pub fn adam_state(&self, node: usize) -> Option<usize> {
        let k = self.states.len() + self.outputs.len();
        (node >= k && node < k + self.adam.len()).then(|| self.adam[node - k])
    }

    /// Generalized parity instance asking for `∩_{A ∈ sub} Ω_A^c` unless an
    /// output with `out_ok` is reached. Dimensions follow `sub` in player
    /// order.
    pub fn instance(&self, g: &Game, sub: PlayerSet, out_ok: impl Fn(usize) -> bool) -> ConjParityGame {
        let mut arena = self.arena.clone();
        for (i, &o) in self.outputs.iter().enumerate() {
            arena.sink[self.states.len() + i] = Some(out_ok(o));
        }
        let shifted: Vec<Vec<Option<u32>>> =
            sub.iter().map(|p| self.split.iter().map(|b| b.map(|b| g.payoffs[p].priority[b] + 1)).collect()).collect();
        let top = shifted.iter().flatten().flatten().copied().max().unwrap_or(0);
        let neutral = top + top % 2;
        let prio = shifted.into_iter().map(|d| d.into_iter().map(|x| x.unwrap_or(neutral)).collect()).collect();
        ConjParityGame { arena, prio }
    }
}

/// One core per suspect set realized outside the ⊥-part, smaller sets first.
pub fn decompose_cores(e: &EpistemicGame) -> Vec<CoreGame> {
    let mut by_set: HashMap<PlayerSet, Vec<usize>> = HashMap::new();
    for (i, s) in e.eve.iter().enumerate() {
        if !s.is_bot() {
            by_set.entry(s.suspects()).or_default().push(i);
        }
    }
    let mut sets: Vec<PlayerSet> = by_set.keys().copied().collect();
    sets.sort_by_key(|s| (s.len(), s.0));
    sets.into_iter().map(|set| build_core(e, set, &by_set[&set])).collect()
}

fn build_core(e: &EpistemicGame, set: PlayerSet, states: &[usize]) -> CoreGame {
    let mut node: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let adam: Vec<usize> = states.iter().flat_map(|&s| e.eve_succ[s].iter().copied()).collect();
    let mut outputs = Vec::new();
    for &a in &adam {
        for &(_, t) in &e.adam[a].succ {
            if !node.contains_key(&t) {
                node.insert(t, states.len() + outputs.len());
                outputs.push(t);
            }
        }
    }
    let k = states.len() + outputs.len();
    let adam_node: HashMap<usize, usize> = adam.iter().enumerate().map(|(i, &a)| (a, k + i)).collect();
    let mut arena = Arena::default();
    let mut split = Vec::new();
    for &s in states {
        arena.eve.push(true);
        arena.succ.push(e.eve_succ[s].iter().map(|a| adam_node[a]).collect());
        arena.sink.push(None);
        split.push(None);
    }
    for _ in &outputs {
        arena.eve.push(true);
        arena.succ.push(Vec::new());
        arena.sink.push(Some(false));
        split.push(None);
    }
    let mut edges = Vec::new();
    for &a in &adam {
        let mut out = Vec::new();
        for &(beta, t) in &e.adam[a].succ {
            out.push(k + adam.len() + edges.len());
            edges.push((beta, node[&t]));
        }
        arena.eve.push(false);
        arena.succ.push(out);
        arena.sink.push(None);
        split.push(None);
    }
    for (beta, t) in edges {
        arena.eve.push(false);
        arena.succ.push(vec![t]);
        arena.sink.push(None);
        split.push(Some(beta));
    }
    CoreGame { suspects: set, states: states.to_vec(), outputs, adam, arena, split, node, adam_node }
}

/// Pluggable solver for condition (1) on a core instance.
pub trait SolverOracle {
    fn region(&self, g: &ConjParityGame) -> Result<Bits, ParityError>;
}

/// The general recursive generalized parity solver.
pub struct GeneralParity;

impl SolverOracle for GeneralParity {
    fn region(&self, g: &ConjParityGame) -> Result<Bits, ParityError> {
        solve_conj_parity(g).map(|s| s.win)
    }
}

/// Co-Büchi specialization; every priority must be 1 or 2.
pub struct CoBuchiUnion;

impl SolverOracle for CoBuchiUnion {
    fn region(&self, g: &ConjParityGame) -> Result<Bits, ParityError> {
        if g.prio.iter().flatten().any(|&p| p != 1 && p != 2) {
            return Err(ParityError::Malformed("not a co-Büchi instance".into()));
        }
        let n = g.arena.len();
        let bad: Vec<Bits> = g.prio.iter().map(|p| Bits::from_fn(n, |v| p[v] == 1)).collect();
        solve_cobuchi_union(&g.arena, &bad)
    }
}

/// Co-Büchi specialization when applicable, the general solver otherwise.
pub struct AutoSolver;

impl SolverOracle for AutoSolver {
    fn region(&self, g: &ConjParityGame) -> Result<Bits, ParityError> {
        if g.prio.iter().flatten().all(|&p| p == 1 || p == 2) {
            CoBuchiUnion.region(g)
        } else {
            GeneralParity.region(g)
        }
    }
}

/// Achievable `S′ ⊆ S`: the vector giving 0 to `S′` and 1 to the rest of
/// the suspects can be enforced. Stored as the antichain of maximal sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    pub suspects: PlayerSet,
    pub maximal: Vec<PlayerSet>,
}

impl ValueSet {
    pub fn from_family(suspects: PlayerSet, achievable: &[PlayerSet]) -> Self {
        let mut maximal: Vec<PlayerSet> =
            achievable.iter().copied().filter(|a| !achievable.iter().any(|b| b != a && a.is_subset(*b))).collect();
        maximal.sort();
        maximal.dedup();
        ValueSet { suspects, maximal }
    }

    pub fn contains(&self, sub: PlayerSet) -> bool {
        let sub = sub.inter(self.suspects);
        self.maximal.iter().any(|m| sub.is_subset(*m))
    }

    /// Whether the Boolean vector `p` lies in the value set.
    pub fn admits(&self, p: &[bool]) -> bool {
        let zeros = self.suspects.iter().filter(|&a| !p[a]).fold(PlayerSet::EMPTY, PlayerSet::with);
        self.contains(zeros)
    }
}

/// Value sets of all non-⊥ Eve states, plus the cores they came from.
#[derive(Clone, Debug)]
pub struct Values {
    pub cores: Vec<CoreGame>,
    pub sets: Vec<Option<ValueSet>>,
}

impl Values {
    /// `p ∈ Value(s)`; ⊥-states are never marked.
    pub fn marked(&self, s: usize, p: &[bool]) -> bool {
        self.sets[s].as_ref().is_some_and(|v| v.admits(p))
    }

    pub fn core_of(&self, set: PlayerSet) -> Option<&CoreGame> {
        self.cores.iter().find(|c| c.suspects == set)
    }

    /// Eve's winning strategy in the core of `set` for the zero set `sub`.
    pub fn core_strategy(&self, g: &Game, set: PlayerSet, sub: PlayerSet) -> Result<ParitySolution, ValueError> {
        let core = self.core_of(set).expect("core exists");
        let inst = core.instance(g, sub, |o| self.sets[o].as_ref().is_some_and(|v| v.contains(sub)));
        solve_conj_parity(&inst).map_err(|source| ValueError::Core { core: set, source })
    }

    /// One line per non-⊥ state: id, component map, maximal sets.
    pub fn dump(&self, g: &Game, e: &EpistemicGame) -> String {
        let mut out = String::new();
        for (i, v) in self.sets.iter().enumerate() {
            if let Some(v) = v {
                let sets: Vec<String> = v
                    .maximal
                    .iter()
                    .map(|m| {
                        let names: Vec<&str> = m.iter().map(|p| g.players[p].as_str()).collect();
                        format!("{{{}}}", names.join(","))
                    })
                    .collect();
                let _ = writeln!(out, "{i} [{}] {}", e.eve[i].fmt_with(g), sets.join(" "));
            }
        }
        out
    }
}

pub fn compute_values(g: &Game, e: &EpistemicGame, oracle: &dyn SolverOracle) -> Result<Values, ValueError> {
    if !g.payoffs.iter().all(|p| p.kind.is_boolean()) {
        return Err(ValueError::NotBoolean);
    }
    let cores = decompose_cores(e);
    let mut sets: Vec<Option<ValueSet>> = vec![None; e.eve.len()];
    for core in &cores {
        let mut family: Vec<Vec<PlayerSet>> = vec![Vec::new(); core.states.len()];
        for sub in core.suspects.subsets() {
            let inst = core.instance(g, sub, |o| sets[o].as_ref().is_some_and(|v| v.contains(sub)));
            let win = oracle.region(&inst).map_err(|source| ValueError::Core { core: core.suspects, source })?;
            for (i, fam) in family.iter_mut().enumerate() {
                if win.get(i) {
                    fam.push(sub);
                }
            }
        }
        for (i, &s) in core.states.iter().enumerate() {
            sets[s] = Some(ValueSet::from_family(core.suspects, &family[i]));
        }
    }
    Ok(Values { cores, sets })
}
