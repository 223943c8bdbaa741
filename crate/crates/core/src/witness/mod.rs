//! Equilibrium witnesses: data, serialization and replay checks.

mod doc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::epistemic::{lift_payoff, EpiLasso, EpistemicGame};
use crate::game_model::{Game, Signal};

pub use doc::{witness_from_json, witness_to_json};

/// One Eve decision: at Eve state `eve` offer Adam state `adam`; `next`
/// gives the node reached for each signal Adam may answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyNode {
    pub eve: usize,
    pub adam: usize,
    pub next: Vec<(Signal, usize)>,
}

/// Finite-memory Eve strategy unrolled into its reachable graph; node 0 is
/// the start.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrategyGraph {
    pub nodes: Vec<StrategyNode>,
}

/// Mean-payoff certificate: the threshold vector over all transformed
/// dimensions and the values the lasso reaches on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpCertificate {
    pub u: Vec<BigRational>,
    pub lasso_values: Vec<BigRational>,
    pub adam_strategies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub payoff: Vec<BigRational>,
    pub lasso: EpiLasso,
    pub strategy: StrategyGraph,
    pub mp: Option<MpCertificate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessFault {
    #[error("malformed witness: {0}")]
    Shape(String),
    #[error("lasso payoff {found:?} differs from the claimed payoff")]
    Payoff { found: Vec<String> },
    #[error("player {player} can profit from a deviation ending in node {node}")]
    Deviation { player: usize, node: usize },
    #[error("threshold check failed: {0}")]
    Threshold(String),
}

fn shape(msg: impl Into<String>) -> WitnessFault {
    WitnessFault::Shape(msg.into())
}

/// Lasso steps are ⊥-steps from the initial state and the cycle closes.
pub fn check_lasso(e: &EpistemicGame, l: &EpiLasso) -> Result<(), WitnessFault> {
    if l.prefix.start != e.initial() || l.cycle.is_empty() {
        return Err(shape("lasso must start at the initial state and have a cycle"));
    }
    let mut cur = l.prefix.start;
    let mut at_cycle = cur;
    for (i, &(a, beta)) in l.prefix.steps.iter().chain(&l.cycle).enumerate() {
        if i == l.prefix.steps.len() {
            at_cycle = cur;
        }
        if a >= e.adam.len() || e.adam[a].eve != cur {
            return Err(shape(format!("lasso step {i} is not offered")));
        }
        match e.bot_succ(a) {
            Some((b, t)) if b == beta => cur = t,
            _ => return Err(shape(format!("lasso step {i} leaves the ⊥-part"))),
        }
    }
    if cur != at_cycle {
        return Err(shape("lasso cycle does not close"));
    }
    Ok(())
}

fn check_graph(e: &EpistemicGame, s: &StrategyGraph) -> Result<(), WitnessFault> {
    let n = s.nodes.len();
    if n == 0 || s.nodes[0].eve != e.initial() {
        return Err(shape("strategy must start at the initial state"));
    }
    for (i, node) in s.nodes.iter().enumerate() {
        if node.eve >= e.eve.len() || node.adam >= e.adam.len() || e.adam[node.adam].eve != node.eve {
            return Err(shape(format!("node {i} offers a suggestion outside Allow′")));
        }
        let succ = &e.adam[node.adam].succ;
        if succ.len() != node.next.len() {
            return Err(shape(format!("node {i} does not answer every signal")));
        }
        for (&(beta, t), &(b, j)) in succ.iter().zip(&node.next) {
            if beta != b || j >= n || s.nodes[j].eve != t {
                return Err(shape(format!("node {i} moves inconsistently on signal {beta}")));
            }
        }
    }
    Ok(())
}

/// The ⊥-path of the graph follows the lasso: prefix, then the cycle twice.
fn check_main_path(e: &EpistemicGame, w: &Witness) -> Result<(), WitnessFault> {
    let expect = w.lasso.prefix.steps.iter().chain(&w.lasso.cycle).chain(&w.lasso.cycle);
    let mut node = 0;
    for (i, &(a, beta)) in expect.enumerate() {
        let nd = &w.strategy.nodes[node];
        if nd.adam != a {
            return Err(shape(format!("main play departs from the lasso at step {i}")));
        }
        node = nd.next.iter().find(|x| x.0 == beta).map(|x| x.1).ok_or_else(|| shape("lasso signal missing"))?;
        if !e.eve[w.strategy.nodes[node].eve].is_bot() {
            return Err(shape("lasso leaves the ⊥-part"));
        }
    }
    Ok(())
}

/// Replays a Boolean witness: graph consistency, the main lasso, its payoff
/// and, for each player with payoff 0, absence of a reachable punishment
/// cycle the player wins while still suspected.
pub fn check_boolean(g: &Game, e: &EpistemicGame, w: &Witness) -> Result<(), WitnessFault> {
    let np = g.n_players();
    if w.payoff.len() != np || w.payoff.iter().any(|x| !x.is_zero() && !x.is_one()) {
        return Err(shape("payoff must be a 0/1 vector per player"));
    }
    check_graph(e, &w.strategy)?;
    check_lasso(e, &w.lasso)?;
    check_main_path(e, w)?;
    let lifted = lift_payoff(g, &w.lasso);
    if lifted != w.payoff {
        return Err(WitnessFault::Payoff { found: lifted.iter().map(|q| q.to_string()).collect() });
    }
    let nodes = &w.strategy.nodes;
    for a in (0..np).filter(|&a| w.payoff[a].is_zero()) {
        let keep = |i: usize| {
            let s = &e.eve[nodes[i].eve];
            !s.is_bot() && s.suspects().contains(a)
        };
        let mut edges: Vec<(usize, usize, u32)> = Vec::new();
        for (i, nd) in nodes.iter().enumerate() {
            for &(beta, j) in &nd.next {
                if keep(i) && keep(j) {
                    edges.push((i, j, g.payoffs[a].priority[beta]));
                }
            }
        }
        let mut evens: Vec<u32> = edges.iter().map(|x| x.2).filter(|p| p % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        for q in evens {
            let mut graph = DiGraph::<(), ()>::with_capacity(nodes.len(), edges.len());
            for _ in 0..nodes.len() {
                graph.add_node(());
            }
            for &(i, j, p) in &edges {
                if p >= q {
                    graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
                }
            }
            let mut comp = vec![0usize; nodes.len()];
            for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
                for v in scc {
                    comp[v.index()] = c;
                }
            }
            if let Some(&(i, _, _)) = edges.iter().find(|&&(i, j, p)| p == q && comp[i] == comp[j]) {
                return Err(WitnessFault::Deviation { player: a, node: i });
            }
        }
    }
    Ok(())
}
