//! Generalized (conjunctive) parity games with absorbing sinks.
//!
//! Priorities live on nodes and follow the min-even convention: an infinite
//! play is won by Eve iff in every dimension the least priority seen
//! infinitely often is even.

mod cobuchi;
mod strategy;

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::Bits;

pub use cobuchi::solve_cobuchi_union;
pub use strategy::{check_strategy, Mem, Strat};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error("malformed arena: {0}")]
    Malformed(String),
    #[error("solver budget of {0} recursive calls exceeded")]
    Budget(usize),
}

/// Turn-based arena. A node with `sink = Some(b)` is absorbing and worth `b`
/// to Eve; a node without successors is a sink lost by its owner.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    pub eve: Vec<bool>,
    pub succ: Vec<Vec<usize>>,
    pub sink: Vec<Option<bool>>,
}

impl Arena {
    pub fn len(&self) -> usize {
        self.eve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eve.is_empty()
    }

    pub fn sink_value(&self, v: usize) -> Option<bool> {
        self.sink[v].or_else(|| self.succ[v].is_empty().then_some(!self.eve[v]))
    }

    pub fn validate(&self) -> Result<(), ParityError> {
        let n = self.len();
        if self.succ.len() != n || self.sink.len() != n {
            return Err(ParityError::Malformed("length mismatch".into()));
        }
        if self.succ.iter().flatten().any(|&w| w >= n) {
            return Err(ParityError::Malformed("successor out of range".into()));
        }
        Ok(())
    }

    pub(crate) fn preds(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for v in 0..self.len() {
            if self.sink[v].is_some() {
                continue;
            }
            for &w in &self.succ[v] {
                pred[w].push(v);
            }
        }
        pred
    }

    /// Live successors of `v`; sinks have none.
    pub(crate) fn moves(&self, v: usize) -> &[usize] {
        if self.sink[v].is_some() {
            &[]
        } else {
            &self.succ[v]
        }
    }

    /// Attractor of `target` within `alive` for Eve (`for_eve`) or Adam.
    /// Eve's attracting choices are recorded in `moves`, and Eve nodes of
    /// the target get their first live successor.
    pub(crate) fn attractor(
        &self,
        pred: &[Vec<usize>],
        alive: &Bits,
        target: &Bits,
        for_eve: bool,
        mut moves: Option<&mut HashMap<usize, usize>>,
    ) -> Bits {
        let mut inside = target.inter(alive);
        let mut count: HashMap<usize, usize> = HashMap::new();
        let mut queue: Vec<usize> = inside.iter().collect();
        if let Some(m) = moves.as_deref_mut() {
            for v in inside.iter() {
                if self.eve[v] {
                    if let Some(&w) = self.moves(v).iter().find(|&&w| alive.get(w)) {
                        m.insert(v, w);
                    }
                }
            }
        }
        while let Some(w) = queue.pop() {
            for &v in &pred[w] {
                if !alive.get(v) || inside.get(v) {
                    continue;
                }
                let take = if self.eve[v] == for_eve {
                    true
                } else {
                    let c = count.entry(v).or_insert_with(|| self.moves(v).iter().filter(|&&x| alive.get(x)).count());
                    *c -= 1;
                    *c == 0
                };
                if take {
                    if for_eve && self.eve[v] {
                        if let Some(m) = moves.as_deref_mut() {
                            let pick = *self.moves(v).iter().find(|&&x| inside.get(x)).unwrap();
                            m.insert(v, pick);
                        }
                    }
                    inside.set(v);
                    queue.push(v);
                }
            }
        }
        inside
    }
}

/// Arena plus one node priority function per dimension, indexed
/// `prio[dim][node]`.
#[derive(Clone, Debug, Default)]
pub struct ConjParityGame {
    pub arena: Arena,
    pub prio: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct ParitySolution {
    pub win: Bits,
    pub strategy: Strat,
}

impl ParitySolution {
    pub fn wins(&self, v: usize) -> bool {
        self.win.get(v)
    }
}

pub const DEFAULT_BUDGET: usize = 10_000_000;

struct Solver<'a> {
    g: &'a ConjParityGame,
    pred: Vec<Vec<usize>>,
    calls: usize,
    budget: usize,
}

impl Solver<'_> {
    fn nodes_with(&self, alive: &Bits, dim: usize, p: u32) -> Bits {
        Bits::from_fn(alive.capacity(), |v| alive.get(v) && self.g.prio[dim][v] == p)
    }

    fn first_moves(&self, alive: &Bits) -> HashMap<usize, usize> {
        alive
            .iter()
            .filter(|&v| self.g.arena.eve[v])
            .filter_map(|v| self.g.arena.moves(v).iter().find(|&&w| alive.get(w)).map(|&w| (v, w)))
            .collect()
    }

    fn rec(&mut self, alive: &Bits) -> Result<ParitySolution, ParityError> {
        self.calls += 1;
        if self.calls > self.budget {
            return Err(ParityError::Budget(self.budget));
        }
        let n = alive.capacity();
        if alive.is_empty() {
            return Ok(ParitySolution { win: Bits::empty(n), strategy: Strat::Memoryless(HashMap::new()) });
        }
        let mins: Vec<u32> = self.g.prio.iter().map(|pr| alive.iter().map(|v| pr[v]).min().unwrap()).collect();
        let relevant: Vec<usize> =
            (0..self.g.prio.len()).filter(|&d| alive.iter().any(|v| self.g.prio[d][v] % 2 == 1)).collect();
        if relevant.is_empty() {
            return Ok(ParitySolution { win: alive.clone(), strategy: Strat::Memoryless(self.first_moves(alive)) });
        }
        let arena = &self.g.arena;
        if let Some(&d) = relevant.iter().find(|&&d| mins[d] % 2 == 1) {
            let p = self.nodes_with(alive, d, mins[d]);
            let a = arena.attractor(&self.pred, alive, &p, false, None);
            let sub = self.rec(&alive.minus(&a))?;
            if sub.win.is_empty() {
                return Ok(ParitySolution { win: Bits::empty(n), strategy: Strat::Memoryless(HashMap::new()) });
            }
            let mut attr_moves = HashMap::new();
            let b = arena.attractor(&self.pred, alive, &sub.win, true, Some(&mut attr_moves));
            let rest = self.rec(&alive.minus(&b))?;
            let win = b.union(&rest.win);
            let ring = b.minus(&sub.win);
            let strategy = Strat::Regions(vec![
                (sub.win, sub.strategy),
                (ring, Strat::Memoryless(attr_moves)),
                (rest.win, rest.strategy),
            ]);
            return Ok(ParitySolution { win, strategy });
        }
        let mut targets = Vec::new();
        let mut attrs = Vec::new();
        let mut attr_moves = Vec::new();
        let mut subs = Vec::new();
        for &d in &relevant {
            let p = self.nodes_with(alive, d, mins[d]);
            let mut moves = HashMap::new();
            let a = arena.attractor(&self.pred, alive, &p, true, Some(&mut moves));
            let dom = alive.minus(&a);
            let sub = self.rec(&dom)?;
            let lost = dom.minus(&sub.win);
            if !lost.is_empty() {
                let r = arena.attractor(&self.pred, alive, &lost, false, None);
                return self.rec(&alive.minus(&r));
            }
            targets.push(p);
            attrs.push(a);
            attr_moves.push(moves);
            subs.push(sub.strategy);
        }
        Ok(ParitySolution { win: alive.clone(), strategy: Strat::Phases { targets, attr: attrs, attr_moves, subs } })
    }
}

/// Solves the generalized parity game: Eve wins by reaching a winning sink or
/// by meeting every parity dimension while avoiding losing sinks.
pub fn solve_conj_parity(g: &ConjParityGame) -> Result<ParitySolution, ParityError> {
    solve_conj_parity_with(g, DEFAULT_BUDGET)
}

pub fn solve_conj_parity_with(g: &ConjParityGame, budget: usize) -> Result<ParitySolution, ParityError> {
    let arena = &g.arena;
    arena.validate()?;
    if g.prio.iter().any(|p| p.len() != arena.len()) {
        return Err(ParityError::Malformed("priority map length mismatch".into()));
    }
    let n = arena.len();
    let all = Bits::full(n);
    let mut solver = Solver { g, pred: arena.preds(), calls: 0, budget };
    let good = Bits::from_fn(n, |v| arena.sink_value(v) == Some(true));
    let bad = Bits::from_fn(n, |v| arena.sink_value(v) == Some(false));
    let mut w0_moves = HashMap::new();
    let w0 = arena.attractor(&solver.pred, &all, &good, true, Some(&mut w0_moves));
    let rem = all.minus(&w0);
    let lost = arena.attractor(&solver.pred, &rem, &bad, false, None);
    let inner = solver.rec(&rem.minus(&lost))?;
    let win = w0.union(&inner.win);
    let strategy = Strat::Regions(vec![(w0, Strat::Memoryless(w0_moves)), (inner.win, inner.strategy)]);
    Ok(ParitySolution { win, strategy })
}
