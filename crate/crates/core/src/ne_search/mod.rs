//! Constrained existence of Nash equilibria for Boolean payoffs.

mod lasso;
mod profile;

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::epistemic::{build_epistemic_with, BuildOptions, EpiLasso, EpistemicError, EpistemicGame, PlayerSet};
use crate::game_model::{ExtRat, Game, PayoffVector};
use crate::parity_solver::{Mem, ParitySolution};
use crate::value_engine::{compute_values, AutoSolver, ValueError, Values};
use crate::witness::{StrategyGraph, StrategyNode, Witness};

pub use lasso::find_bot_lasso;
pub use profile::{synthesize_profile, Profile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Build(#[from] EpistemicError),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("payoffs must all be Boolean")]
    NotBoolean,
    #[error("invalid thresholds: {0}")]
    Query(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// Thresholds `ν ≤ payoff ≤ ν′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub lower: PayoffVector,
    pub upper: PayoffVector,
}

impl Query {
    pub fn new(lower: PayoffVector, upper: PayoffVector) -> Result<Self, String> {
        if lower.len() != upper.len() {
            return Err("threshold vectors differ in length".into());
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err("lower threshold exceeds upper threshold".into());
        }
        Ok(Query { lower, upper })
    }

    pub fn trivial(n: usize) -> Self {
        Query { lower: PayoffVector::constant(n, ExtRat::NegInf), upper: PayoffVector::constant(n, ExtRat::PosInf) }
    }

    pub fn exact(p: &[BigRational]) -> Self {
        Query { lower: PayoffVector::from_rationals(p), upper: PayoffVector::from_rationals(p) }
    }

    pub fn admits(&self, i: usize, x: &BigRational) -> bool {
        self.lower.0[i].le_rat(x) && self.upper.0[i].ge_rat(x)
    }
}

/// Candidate Boolean vectors within the thresholds, lexicographic with 1
/// before 0.
pub fn boolean_candidates(q: &Query) -> Vec<Vec<bool>> {
    let n = q.lower.len();
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let vals: Vec<bool> = [true, false]
            .into_iter()
            .filter(|&b| q.admits(i, &if b { BigRational::one() } else { BigRational::zero() }))
            .collect();
        out = out.into_iter().flat_map(|pre| vals.iter().map(move |&b| [pre.clone(), vec![b]].concat())).collect();
    }
    out
}

pub fn bool_payoff(p: &[bool]) -> Vec<BigRational> {
    p.iter().map(|&b| if b { BigRational::one() } else { BigRational::zero() }).collect()
}

fn zero_set(p: &[bool]) -> PlayerSet {
    (0..p.len()).filter(|&a| !p[a]).fold(PlayerSet::EMPTY, PlayerSet::with)
}

/// Builds the abstraction, computes value sets and returns the first
/// witness among the candidates.
pub fn decide_boolean(g: &Game, q: &Query) -> Result<Option<Witness>, SearchError> {
    decide_boolean_with(g, q, BuildOptions::default())
}

pub fn decide_boolean_with(g: &Game, q: &Query, opts: BuildOptions) -> Result<Option<Witness>, SearchError> {
    if !g.is_boolean() {
        return Err(SearchError::NotBoolean);
    }
    if q.lower.len() != g.n_players() {
        return Err(SearchError::Query(format!("expected {} thresholds", g.n_players())));
    }
    let e = build_epistemic_with(g, opts)?;
    let values = compute_values(g, &e, &AutoSolver)?;
    for p in boolean_candidates(q) {
        if let Some(w) = witness_for(g, &e, &values, &p)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Every `p ∈ {0,1}^Agt` for which Eve wins, in candidate order.
pub fn achievable_payoffs(g: &Game, e: &EpistemicGame, values: &Values) -> Vec<Vec<bool>> {
    boolean_candidates(&Query::trivial(g.n_players()))
        .into_iter()
        .filter(|p| find_bot_lasso(g, e, p, &|s| values.marked(s, p)).is_some())
        .collect()
}

/// Witness for the payoff `p`, if a compliant ⊥-lasso exists.
pub fn witness_for(g: &Game, e: &EpistemicGame, values: &Values, p: &[bool]) -> Result<Option<Witness>, SearchError> {
    let Some(lasso) = find_bot_lasso(g, e, p, &|s| values.marked(s, p)) else {
        return Ok(None);
    };
    let strategy = strategy_graph(g, e, values, p, &lasso)?;
    Ok(Some(Witness { payoff: bool_payoff(p), lasso, strategy, mp: None }))
}

type CoreKey = (PlayerSet, usize, Mem);

struct GraphBuilder<'a> {
    g: &'a Game,
    e: &'a EpistemicGame,
    values: &'a Values,
    zeros: PlayerSet,
    nodes: Vec<StrategyNode>,
    strategies: HashMap<PlayerSet, Rc<ParitySolution>>,
    index: HashMap<CoreKey, usize>,
    queue: VecDeque<CoreKey>,
}

impl GraphBuilder<'_> {
    fn node(&mut self, key: CoreKey, eve: usize) -> usize {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        self.nodes.push(StrategyNode { eve, adam: usize::MAX, next: Vec::new() });
        let id = self.nodes.len() - 1;
        self.index.insert(key.clone(), id);
        self.queue.push_back(key);
        id
    }

    /// Node for arriving at the non-⊥ state `s` from another core.
    fn enter_core(&mut self, s: usize) -> Result<usize, SearchError> {
        let set = self.e.eve[s].suspects();
        let core = self.values.core_of(set).ok_or_else(|| SearchError::Internal("missing core".into()))?;
        if !self.strategies.contains_key(&set) {
            let sol = self.values.core_strategy(self.g, set, self.zeros.inter(set))?;
            self.strategies.insert(set, Rc::new(sol));
        }
        let n = core.node_of(s).unwrap();
        let sol = &self.strategies[&set];
        if !sol.wins(n) {
            return Err(SearchError::Internal(format!("state {s} is marked but not winning")));
        }
        let mem = sol.strategy.enter(None, n);
        Ok(self.node((set, n, mem), s))
    }

    fn expand(&mut self, key: CoreKey) -> Result<(), SearchError> {
        let id = self.index[&key];
        let (set, n, mem) = key;
        let core = self.values.core_of(set).unwrap();
        let sol = Rc::clone(&self.strategies[&set]);
        let strat = &sol.strategy;
        let an = strat.choose(&mem, n).ok_or_else(|| SearchError::Internal(format!("no choice at core node {n}")))?;
        let a = core.adam_state(an).ok_or_else(|| SearchError::Internal("choice is not an Adam state".into()))?;
        let m2 = strat.enter(Some(&mem), an);
        let mut next = Vec::new();
        for &sp in &core.arena.succ[an] {
            let beta = core.split[sp].unwrap();
            let m3 = strat.enter(Some(&m2), sp);
            let tn = core.arena.succ[sp][0];
            let t = core.eve_state(tn).unwrap();
            let target = if tn >= core.states.len() {
                self.enter_core(t)?
            } else {
                let m4 = strat.enter(Some(&m3), tn);
                self.node((set, tn, m4), t)
            };
            next.push((beta, target));
        }
        self.nodes[id].adam = a;
        self.nodes[id].next = next;
        Ok(())
    }
}

/// Eve's strategy as an explicit graph: the lasso positions first, then the
/// punishment play inside the cores.
pub fn strategy_graph(
    g: &Game,
    e: &EpistemicGame,
    values: &Values,
    p: &[bool],
    lasso: &EpiLasso,
) -> Result<StrategyGraph, SearchError> {
    let main: Vec<usize> = lasso.prefix.steps.iter().chain(&lasso.cycle).map(|x| x.0).collect();
    let loop_start = lasso.prefix.steps.len();
    let mut b = GraphBuilder {
        g,
        e,
        values,
        zeros: zero_set(p),
        nodes: main.iter().map(|&a| StrategyNode { eve: e.adam[a].eve, adam: a, next: Vec::new() }).collect(),
        strategies: HashMap::new(),
        index: HashMap::new(),
        queue: VecDeque::new(),
    };
    for (i, &a) in main.iter().enumerate() {
        let mut next = Vec::new();
        for &(beta, t) in &e.adam[a].succ {
            if e.eve[t].is_bot() {
                next.push((beta, if i + 1 == main.len() { loop_start } else { i + 1 }));
            } else {
                next.push((beta, b.enter_core(t)?));
            }
        }
        b.nodes[i].next = next;
    }
    while let Some(key) = b.queue.pop_front() {
        b.expand(key)?;
    }
    Ok(StrategyGraph { nodes: b.nodes })
}
