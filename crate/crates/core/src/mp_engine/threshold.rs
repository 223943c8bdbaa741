use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::MpError;
use crate::lp::{Cmp, Lp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MpKind {
    Liminf,
    Limsup,
}

/// Two-player arena with integer weight vectors on edges. A node without
/// successors is lost by its owner.
#[derive(Clone, Debug, Default)]
pub struct MpArena {
    pub eve: Vec<bool>,
    pub succ: Vec<Vec<(usize, Vec<i64>)>>,
    pub kinds: Vec<MpKind>,
}

impl MpArena {
    pub fn len(&self) -> usize {
        self.eve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eve.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.kinds.len()
    }

    pub fn validate(&self) -> Result<(), MpError> {
        let n = self.len();
        if self.succ.len() != n {
            return Err(MpError::Malformed("successor table size".into()));
        }
        for out in &self.succ {
            for (t, w) in out {
                if *t >= n || w.len() != self.dims() {
                    return Err(MpError::Malformed("edge out of range or of wrong dimension".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSolution {
    pub win: Vec<bool>,
    pub adam_strategies: usize,
}

pub const DEFAULT_STRATEGY_BUDGET: usize = 100_000;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
enum Status {
    Fixed(bool),
    Open(Vec<usize>),
}

/// Eve-to-Eve step of a one-player graph: an Eve edge followed by Adam's
/// forced moves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Macro {
    from: usize,
    to: usize,
    weight: Vec<i64>,
    len: i64,
}

/// Whether Eve, alone in the strongly connected one-player graph `ms` over
/// its nodes, can meet `u`: every liminf dimension by one frequency vector,
/// and each limsup dimension by a frequency vector that also keeps the
/// liminf dimensions.
fn flows_meet(ms: &[Macro], nodes: &[usize], kinds: &[MpKind], u: &[BigRational]) -> bool {
    let dims = kinds.len();
    let relevant: Vec<usize> =
        (0..dims).filter(|&d| ms.iter().any(|m| rat(m.weight[d]) < &u[d] * rat(m.len))).collect();
    if relevant.iter().any(|&d| ms.iter().all(|m| rat(m.weight[d]) < &u[d] * rat(m.len))) {
        return false;
    }
    let liminf: Vec<usize> = relevant.iter().copied().filter(|&d| kinds[d] == MpKind::Liminf).collect();
    let limsup: Vec<usize> = relevant.iter().copied().filter(|&d| kinds[d] == MpKind::Limsup).collect();
    let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let base = || {
        let mut lp = Lp::new(ms.len());
        lp.add(ms.iter().enumerate().map(|(j, m)| (j, rat(m.len))), Cmp::Eq, BigRational::one());
        let mut bal: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); nodes.len()];
        for (j, m) in ms.iter().enumerate() {
            if m.from != m.to {
                bal[index[&m.from]].push((j, BigRational::one()));
                bal[index[&m.to]].push((j, -BigRational::one()));
            }
        }
        for row in bal.into_iter().filter(|r| !r.is_empty()) {
            lp.add(row, Cmp::Eq, BigRational::zero());
        }
        for &d in &liminf {
            lp.add(ms.iter().enumerate().map(|(j, m)| (j, rat(m.weight[d]))), Cmp::Ge, u[d].clone());
        }
        lp
    };
    if limsup.is_empty() {
        return base().feasible_point().is_some();
    }
    limsup.iter().all(|&d| {
        let mut lp = base();
        lp.add(ms.iter().enumerate().map(|(j, m)| (j, rat(m.weight[d]))), Cmp::Ge, u[d].clone());
        lp.feasible_point().is_some()
    })
}

struct Component<'a> {
    arena: &'a MpArena,
    nodes: Vec<usize>,
    local: HashMap<usize, usize>,
    status: Vec<Status>,
}

impl Component<'_> {
    /// Eve's winning nodes in the one-player graph fixed by `tau`
    /// (choice index per local Adam node).
    fn one_player(&self, tau: &[usize], u: &[BigRational], cache: &mut HashMap<Vec<Macro>, bool>) -> Vec<bool> {
        let k = self.nodes.len();
        let arena = self.arena;
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
        for i in 0..k {
            if let Status::Open(ch) = &self.status[i] {
                let v = self.nodes[i];
                let picks: Vec<usize> = if arena.eve[v] { ch.clone() } else { vec![ch[tau[i]]] };
                out[i] = picks.iter().map(|&e| self.local[&arena.succ[v][e].0]).collect();
            }
        }
        let mut target: Vec<bool> = self.status.iter().map(|s| matches!(s, Status::Fixed(true))).collect();
        let open = |i: usize| matches!(self.status[i], Status::Open(_));
        let mut graph = DiGraph::<(), ()>::with_capacity(k, 0);
        for _ in 0..k {
            graph.add_node(());
        }
        for (i, o) in out.iter().enumerate() {
            for &j in o {
                if open(i) && open(j) {
                    graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
                }
            }
        }
        for scc in tarjan_scc(&graph) {
            let d: Vec<usize> = scc.iter().map(|x| x.index()).collect();
            let mut inside = vec![false; k];
            for &i in &d {
                inside[i] = true;
            }
            if !d.iter().any(|&i| out[i].iter().any(|&j| inside[j])) {
                continue;
            }
            if self.good(&d, &inside, tau, u, cache) {
                for &i in &d {
                    target[i] = true;
                }
            }
        }
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, o) in out.iter().enumerate() {
            for &j in o {
                pred[j].push(i);
            }
        }
        let mut stack: Vec<usize> = (0..k).filter(|&i| target[i]).collect();
        while let Some(j) = stack.pop() {
            for &i in &pred[j] {
                if !target[i] {
                    target[i] = true;
                    stack.push(i);
                }
            }
        }
        target
    }

    fn good(
        &self,
        d: &[usize],
        inside: &[bool],
        tau: &[usize],
        u: &[BigRational],
        cache: &mut HashMap<Vec<Macro>, bool>,
    ) -> bool {
        let arena = self.arena;
        let dims = arena.dims();
        let step = |i: usize, e: usize| -> (usize, &Vec<i64>) {
            let (t, w) = &arena.succ[self.nodes[i]][e];
            (self.local[t], w)
        };
        let choices = |i: usize| -> Vec<usize> {
            match &self.status[i] {
                Status::Open(ch) if arena.eve[self.nodes[i]] => ch.clone(),
                Status::Open(ch) => vec![ch[tau[i]]],
                Status::Fixed(_) => Vec::new(),
            }
        };
        let eves: Vec<usize> = d.iter().copied().filter(|&i| arena.eve[self.nodes[i]]).collect();
        let mut ms = Vec::new();
        if eves.is_empty() {
            // A cycle of forced moves.
            let mut weight = vec![0i64; dims];
            for &i in d {
                let (_, w) = step(i, choices(i)[0]);
                for (a, b) in weight.iter_mut().zip(w) {
                    *a += b;
                }
            }
            ms.push(Macro { from: d[0], to: d[0], weight, len: d.len() as i64 });
        } else {
            for &i in &eves {
                for e in choices(i) {
                    let (mut cur, w) = step(i, e);
                    if !inside[cur] {
                        continue;
                    }
                    let mut weight = w.clone();
                    let mut len = 1;
                    while !arena.eve[self.nodes[cur]] {
                        let (nxt, w) = step(cur, choices(cur)[0]);
                        for (a, b) in weight.iter_mut().zip(w) {
                            *a += b;
                        }
                        len += 1;
                        cur = nxt;
                    }
                    if inside[cur] {
                        ms.push(Macro { from: self.nodes[i], to: self.nodes[cur], weight, len });
                    }
                }
            }
        }
        ms.sort();
        ms.dedup();
        if let Some(&known) = cache.get(&ms) {
            return known;
        }
        let mut eve_nodes: Vec<usize> = ms.iter().flat_map(|m| [m.from, m.to]).collect();
        eve_nodes.sort_unstable();
        eve_nodes.dedup();
        let ok = flows_meet(&ms, &eve_nodes, &arena.kinds, u);
        cache.insert(ms, ok);
        ok
    }
}

impl Component<'_> {
    fn open_edges(&self) -> impl Iterator<Item = (usize, usize, &Vec<i64>)> + '_ {
        self.status.iter().enumerate().flat_map(move |(i, st)| {
            let ch: &[usize] = match st {
                Status::Open(ch) => ch,
                Status::Fixed(_) => &[],
            };
            let v = self.nodes[i];
            ch.iter().map(move |&e| {
                let (t, w) = &self.arena.succ[v][e];
                (i, self.local[t], w)
            })
        })
    }

    /// Fixes as lost the nodes where Eve already loses a single relevant
    /// dimension, then closes under the attractor, until stable.
    /// Also fixes as won the nodes secured by an Eve strategy of one of
    /// these games or of the game on the summed dimensions.
    fn prune(&mut self, rel: &[usize], u: &[BigRational]) {
        let lcm = rel.iter().fold(BigInt::one(), |a, &d| num_integer::Integer::lcm(&a, u[d].denom()));
        let scaled: Option<Vec<(usize, i64, i64)>> = rel
            .iter()
            .map(|&d| {
                let f = (&lcm / u[d].denom()).to_i64()?;
                Some((d, lcm.to_i64()?, (u[d].numer() * f).to_i64()?))
            })
            .collect();
        loop {
            let mut fixed = Vec::new();
            let mut sigmas = Vec::new();
            for &d in rel {
                let (Some(num), Some(den)) = (u[d].numer().to_i64(), u[d].denom().to_i64()) else { continue };
                if let Some((w, sigma)) = self.energy_on(&|w| w[d].checked_mul(den)?.checked_sub(num)) {
                    fixed.extend(
                        (0..w.len())
                            .filter(|&i| !w[i] && matches!(self.status[i], Status::Open(_)))
                            .map(|i| (i, false)),
                    );
                    sigmas.push(sigma);
                }
            }
            if fixed.is_empty() {
                if let Some(sc) = &scaled {
                    let sum = |w: &[i64]| {
                        sc.iter().try_fold(0i64, |a, &(d, l, n)| a.checked_add(w[d].checked_mul(l)?.checked_sub(n)?))
                    };
                    if let Some((_, sigma)) = self.energy_on(&sum) {
                        sigmas.push(sigma);
                    }
                }
                for sigma in &sigmas {
                    let ok = self.secured_by(sigma, rel, u);
                    fixed.extend((0..ok.len()).filter(|&i| ok[i]).map(|i| (i, true)));
                }
                fixed.sort_unstable();
                fixed.dedup();
            }
            if fixed.is_empty() {
                return;
            }
            for (i, b) in fixed {
                self.status[i] = Status::Fixed(b);
            }
            self.settle();
        }
    }

    /// Drops choices into fixed nodes and fixes the nodes this decides.
    fn settle(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                let Status::Open(ch) = &self.status[i] else { continue };
                let v = self.nodes[i];
                let eve = self.arena.eve[v];
                let fixed = |e: &usize| match self.status[self.local[&self.arena.succ[v][*e].0]] {
                    Status::Fixed(b) => Some(b),
                    Status::Open(_) => None,
                };
                let new = if ch.iter().any(|e| fixed(e) == Some(eve)) {
                    Status::Fixed(eve)
                } else {
                    let rest: Vec<usize> = ch.iter().copied().filter(|e| fixed(e).is_none()).collect();
                    if rest.len() == ch.len() {
                        continue;
                    }
                    if rest.is_empty() {
                        Status::Fixed(!eve)
                    } else {
                        Status::Open(rest)
                    }
                };
                self.status[i] = new;
                changed = true;
            }
            if !changed {
                return;
            }
        }
    }

    /// Dimensions in which some internal cycle averages below the
    /// threshold (Bellman-Ford on `den·w − num`).
    fn relevant(&self, u: &[BigRational]) -> Vec<usize> {
        (0..self.arena.dims()).filter(|&d| self.has_short_cycle(d, u)).collect()
    }

    fn has_short_cycle(&self, d: usize, u: &[BigRational]) -> bool {
        let (Some(num), Some(den)) = (u[d].numer().to_i128(), u[d].denom().to_i128()) else {
            return true;
        };
        let edges: Vec<(usize, usize, i128)> =
            self.open_edges().map(|(i, j, w)| (i, j, i128::from(w[d]) * den - num)).collect();
        if edges.iter().all(|e| e.2 >= 0) {
            return false;
        }
        let mut dist = vec![0i128; self.nodes.len()];
        for _ in 0..=self.nodes.len() {
            let mut changed = false;
            for &(i, j, c) in &edges {
                if dist[i] + c < dist[j] {
                    dist[j] = dist[i] + c;
                    changed = true;
                }
            }
            if !changed {
                return false;
            }
        }
        true
    }

    /// Single relevant dimension `d` (or none): the threshold game is the
    /// energy game on `den·w − num`, decided by the least progress measure.
    /// `None` when scaled weights overflow.
    fn energy(&self, d: Option<usize>, u: &[BigRational]) -> Option<Vec<bool>> {
        let Some(d) = d else {
            return self.energy_on(&|_| Some(0)).map(|x| x.0);
        };
        let (num, den) = (u[d].numer().to_i64()?, u[d].denom().to_i64()?);
        self.energy_on(&|w| w[d].checked_mul(den)?.checked_sub(num)).map(|x| x.0)
    }

    /// Least progress measure for the energy game with edge weights
    /// `scaled(w)`: Eve's winning nodes and, at Eve nodes, a successor
    /// realising the measure.
    fn energy_on(&self, scaled: &dyn Fn(&[i64]) -> Option<i64>) -> Option<(Vec<bool>, Vec<Option<usize>>)> {
        let k = self.nodes.len();
        let mut succ: Vec<Vec<(usize, i64)>> = vec![Vec::new(); k];
        for (i, j, w) in self.open_edges() {
            succ[i].push((j, scaled(w)?));
        }
        let worst = succ.iter().flatten().map(|&(_, w)| (-w).max(0)).max().unwrap_or(0);
        let cap = worst.checked_mul(k as i64)?;
        const TOP: i64 = i64::MAX;
        let mut f: Vec<i64> =
            self.status.iter().map(|s| if matches!(s, Status::Fixed(false)) { TOP } else { 0 }).collect();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, out) in succ.iter().enumerate() {
            for &(j, _) in out {
                pred[j].push(i);
            }
        }
        let lift = |x: i64, w: i64| {
            if x == TOP {
                TOP
            } else {
                let y = (x - w).max(0);
                if y > cap {
                    TOP
                } else {
                    y
                }
            }
        };
        let mut queued: Vec<bool> = (0..k).map(|i| matches!(self.status[i], Status::Open(_))).collect();
        let mut queue: std::collections::VecDeque<usize> = (0..k).filter(|&i| queued[i]).collect();
        while let Some(i) = queue.pop_front() {
            queued[i] = false;
            let vals = succ[i].iter().map(|&(j, w)| lift(f[j], w));
            let new = if self.arena.eve[self.nodes[i]] { vals.min() } else { vals.max() }.unwrap_or(TOP);
            if new > f[i] {
                f[i] = new;
                for &p in &pred[i] {
                    if !queued[p] && matches!(self.status[p], Status::Open(_)) {
                        queued[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        let sigma = (0..k)
            .map(|i| {
                if !self.arena.eve[self.nodes[i]] {
                    return None;
                }
                succ[i].iter().min_by_key(|&&(j, w)| lift(f[j], w)).map(|&(j, _)| j)
            })
            .collect();
        Some((f.iter().map(|&x| x != TOP).collect(), sigma))
    }

    /// Nodes where the Eve choice `sigma` alone secures every dimension in
    /// `rel`: Adam can neither reach a lost node nor a cycle averaging
    /// below the threshold.
    fn secured_by(&self, sigma: &[Option<usize>], rel: &[usize], u: &[BigRational]) -> Vec<bool> {
        let k = self.nodes.len();
        let edges: Vec<(usize, usize, &Vec<i64>)> =
            self.open_edges().filter(|&(i, j, _)| !self.arena.eve[self.nodes[i]] || sigma[i] == Some(j)).collect();
        let mut bad: Vec<bool> = self.status.iter().map(|s| matches!(s, Status::Fixed(false))).collect();
        for &d in rel {
            let (Some(num), Some(den)) = (u[d].numer().to_i128(), u[d].denom().to_i128()) else {
                return vec![false; k];
            };
            let mut dist = vec![0i128; k];
            for round in 0..2 * k + 1 {
                let mut changed = false;
                for &(i, j, w) in &edges {
                    let c = dist[j] + i128::from(w[d]) * den - num;
                    if c < dist[i] {
                        dist[i] = c;
                        changed = true;
                        if round > k {
                            bad[i] = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &(i, j, _) in &edges {
            pred[j].push(i);
        }
        let mut stack: Vec<usize> = (0..k).filter(|&i| bad[i]).collect();
        while let Some(j) = stack.pop() {
            for &i in &pred[j] {
                if !bad[i] {
                    bad[i] = true;
                    stack.push(i);
                }
            }
        }
        (0..k).map(|i| !bad[i] && matches!(self.status[i], Status::Open(_))).collect()
    }
}

/// Nodes from which Eve ensures, for every dimension `d`, that the mean
/// payoff of kind `kinds[d]` is at least `u[d]`. Solved bottom-up over
/// strongly connected components. A component where at most one dimension
/// can fail is an energy game; otherwise Adam's memoryless strategies are
/// enumerated and Eve's one-player problems are decided by exact
/// edge-frequency programs.
pub fn solve_threshold(arena: &MpArena, u: &[BigRational], budget: usize) -> Result<ThresholdSolution, MpError> {
    solve_threshold_with(arena, u, budget, true)
}

/// `specialize = false` enumerates Adam strategies in every component.
pub fn solve_threshold_with(
    arena: &MpArena,
    u: &[BigRational],
    budget: usize,
    specialize: bool,
) -> Result<ThresholdSolution, MpError> {
    arena.validate()?;
    if u.len() != arena.dims() {
        return Err(MpError::Malformed("threshold vector of wrong dimension".into()));
    }
    let n = arena.len();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    for _ in 0..n {
        graph.add_node(());
    }
    for (v, out) in arena.succ.iter().enumerate() {
        for (t, _) in out {
            graph.add_edge(NodeIndex::new(v), NodeIndex::new(*t), ());
        }
    }
    let mut win = vec![false; n];
    let mut total = 0usize;
    let mut cache = HashMap::new();
    for scc in tarjan_scc(&graph) {
        let mut nodes: Vec<usize> = scc.iter().map(|x| x.index()).collect();
        nodes.sort_unstable();
        let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let status: Vec<Status> = nodes
            .iter()
            .map(|&v| {
                let inside: Vec<usize> =
                    (0..arena.succ[v].len()).filter(|&e| local.contains_key(&arena.succ[v][e].0)).collect();
                let exits = arena.succ[v].iter().filter(|(t, _)| !local.contains_key(t));
                let mut exit_wins = exits.map(|(t, _)| win[*t]);
                if arena.eve[v] {
                    if exit_wins.any(|w| w) {
                        Status::Fixed(true)
                    } else if inside.is_empty() {
                        Status::Fixed(false)
                    } else {
                        Status::Open(inside)
                    }
                } else if exit_wins.any(|w| !w) {
                    Status::Fixed(false)
                } else if inside.is_empty() {
                    Status::Fixed(true)
                } else {
                    Status::Open(inside)
                }
            })
            .collect();
        let mut comp = Component { arena, nodes, local, status };
        if specialize {
            let rel = comp.relevant(u);
            if rel.len() <= 1 {
                if let Some(w) = comp.energy(rel.first().copied(), u) {
                    for (i, &v) in comp.nodes.iter().enumerate() {
                        win[v] = w[i];
                    }
                    continue;
                }
            }
            comp.prune(&rel, u);
        }
        let radix: Vec<usize> = comp
            .nodes
            .iter()
            .zip(&comp.status)
            .map(|(&v, s)| match s {
                Status::Open(ch) if !arena.eve[v] => ch.len(),
                _ => 1,
            })
            .collect();
        let count = radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
        match count {
            Some(c) if total.saturating_add(c) <= budget => {}
            _ => return Err(MpError::Budget(budget)),
        }
        let mut region: Vec<bool> = vec![true; comp.nodes.len()];
        let mut tau = vec![0usize; comp.nodes.len()];
        loop {
            total += 1;
            let w = comp.one_player(&tau, u, &mut cache);
            for (r, x) in region.iter_mut().zip(&w) {
                *r &= *x;
            }
            if region.iter().all(|r| !r) {
                break;
            }
            let mut i = 0;
            while i < tau.len() {
                tau[i] += 1;
                if tau[i] < radix[i] {
                    break;
                }
                tau[i] = 0;
                i += 1;
            }
            if i == tau.len() {
                break;
            }
        }
        for (i, &v) in comp.nodes.iter().enumerate() {
            win[v] = region[i];
        }
    }
    Ok(ThresholdSolution { win, adam_strategies: total })
}
