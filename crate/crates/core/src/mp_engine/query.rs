use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{solve_threshold, transform_weights, MpError, MpTransform, DEFAULT_STRATEGY_BUDGET};
use crate::epistemic::{build_epistemic_with, lift_payoff, BuildOptions, EpiHistory, EpiLasso, EpistemicGame};
use crate::game_model::Game;
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::ne_search::Query;
use crate::witness::{check_lasso, MpCertificate, StrategyGraph, Witness, WitnessFault};

#[derive(Clone, Copy, Debug)]
pub struct MpOptions {
    pub build: BuildOptions,
    pub strategy_budget: usize,
    pub candidate_budget: usize,
}

impl Default for MpOptions {
    fn default() -> Self {
        MpOptions { build: BuildOptions::default(), strategy_budget: DEFAULT_STRATEGY_BUDGET, candidate_budget: 2_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryOutcome {
    Found { u: Vec<BigRational>, lasso: EpiLasso, adam_strategies: usize },
    None,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MpVerdict {
    Exists(Witness),
    None,
    Inconclusive(String),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Edge of the ⊥-part between Eve states, through Adam state `adam`;
/// `weight` holds the original per-player weights of the signal.
#[derive(Clone, Debug)]
struct BotEdge {
    from: usize,
    to: usize,
    adam: usize,
    signal: usize,
    weight: Vec<i64>,
}

/// ⊥-edges reachable from the initial state through Adam states passing
/// `safe`; parallel edges with equal weights are merged.
fn bot_edges(g: &Game, e: &EpistemicGame, safe: &dyn Fn(usize) -> bool) -> Vec<BotEdge> {
    let mut seen = HashSet::from([e.initial()]);
    let mut queue = VecDeque::from([e.initial()]);
    let mut out = Vec::new();
    let mut keys = HashSet::new();
    while let Some(s) = queue.pop_front() {
        for &a in &e.eve_succ[s] {
            let Some((beta, t)) = e.bot_succ(a) else { continue };
            if !safe(a) {
                continue;
            }
            let weight: Vec<i64> = g.payoffs.iter().map(|p| p.weight[beta]).collect();
            if keys.insert((s, t, weight.clone())) {
                out.push(BotEdge { from: s, to: t, adam: a, signal: beta, weight });
            }
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    out
}

/// Strongly connected edge sets with at least one internal edge, as edge
/// indices, in a deterministic order.
fn edge_sccs(edges: &[BotEdge]) -> Vec<Vec<usize>> {
    let mut ids: Vec<usize> = edges.iter().flat_map(|x| [x.from, x.to]).collect();
    ids.sort_unstable();
    ids.dedup();
    let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut graph = DiGraph::<(), ()>::with_capacity(ids.len(), edges.len());
    for _ in &ids {
        graph.add_node(());
    }
    for x in edges {
        graph.add_edge(NodeIndex::new(local[&x.from]), NodeIndex::new(local[&x.to]), ());
    }
    let mut comp = vec![0usize; ids.len()];
    let sccs = tarjan_scc(&graph);
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    for (j, x) in edges.iter().enumerate() {
        let (a, b) = (comp[local[&x.from]], comp[local[&x.to]]);
        if a == b {
            out[a].push(j);
        }
    }
    out.retain(|c| !c.is_empty());
    out.sort();
    out
}

/// Frequency program over the edges `c`: nonnegative, summing to one,
/// balanced at every node. Variable `k` is edge `c[k]`.
fn flow_lp(edges: &[BotEdge], c: &[usize]) -> Lp {
    let mut lp = Lp::new(c.len());
    lp.add((0..c.len()).map(|k| (k, BigRational::one())), Cmp::Eq, BigRational::one());
    let mut bal: HashMap<usize, Vec<(usize, BigRational)>> = HashMap::new();
    for (k, &j) in c.iter().enumerate() {
        let x = &edges[j];
        if x.from != x.to {
            bal.entry(x.from).or_default().push((k, BigRational::one()));
            bal.entry(x.to).or_default().push((k, -BigRational::one()));
        }
    }
    let mut rows: Vec<_> = bal.into_iter().collect();
    rows.sort_by_key(|r| r.0);
    for (_, row) in rows {
        lp.add(row, Cmp::Eq, BigRational::zero());
    }
    lp
}

fn value_row(edges: &[BotEdge], c: &[usize], i: usize) -> Vec<(usize, BigRational)> {
    c.iter().enumerate().map(|(k, &j)| (k, rat(edges[j].weight[i]))).collect()
}

fn values_of(edges: &[BotEdge], c: &[usize], x: &[BigRational], n: usize) -> Vec<BigRational> {
    (0..n).map(|i| c.iter().zip(x).map(|(&j, xk)| rat(edges[j].weight[i]) * xk).sum()).collect()
}

/// Thresholds clipped to `[-W, W]`; `None` when some interval is empty.
fn clipped_box(q: &Query, w: i64) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let (lo_w, hi_w) = (rat(-w), rat(w));
    let lo: Vec<BigRational> = q.lower.0.iter().map(|x| x.clip(&lo_w, &hi_w)).collect();
    let hi: Vec<BigRational> = q.upper.0.iter().map(|x| x.clip(&lo_w, &hi_w)).collect();
    let ok = (0..lo.len()).all(|i| q.admits(i, &lo[i]) && q.admits(i, &hi[i]) && lo[i] <= hi[i]);
    ok.then_some((lo, hi))
}

/// Every limit point of the frequencies of a ⊥-play with payoff in the box
/// keeps liminf players at least `lo` and limsup players at most `hi`.
fn limit_lp(edges: &[BotEdge], c: &[usize], t: &MpTransform, lo: &[BigRational], hi: &[BigRational]) -> Lp {
    let mut lp = flow_lp(edges, c);
    for i in 0..t.n_players {
        if t.iota[i] < 0 {
            lp.add(value_row(edges, c, i), Cmp::Ge, lo[i].clone());
        } else {
            lp.add(value_row(edges, c, i), Cmp::Le, hi[i].clone());
        }
    }
    lp
}

/// Necessary condition for a ⊥-play eventually inside `c` with payoff in
/// the box: for each player, some limit point also meets that player's
/// other bound.
fn box_reachable(edges: &[BotEdge], c: &[usize], t: &MpTransform, lo: &[BigRational], hi: &[BigRational]) -> bool {
    (0..t.n_players).all(|i| {
        let mut lp = limit_lp(edges, c, t, lo, hi);
        if t.iota[i] < 0 {
            lp.add(value_row(edges, c, i), Cmp::Le, hi[i].clone());
        } else {
            lp.add(value_row(edges, c, i), Cmp::Ge, lo[i].clone());
        }
        lp.feasible_point().is_some()
    })
}

/// Componentwise largest payoff of a ⊥-play that eventually stays in one
/// of the components admitted by `box_reachable`; `None` when there is no
/// such component.
fn payoff_ceiling(
    edges: &[BotEdge],
    t: &MpTransform,
    lo: &[BigRational],
    hi: &[BigRational],
) -> Option<Vec<BigRational>> {
    let n = t.n_players;
    let mut top: Option<Vec<BigRational>> = None;
    for c in edge_sccs(edges) {
        if !box_reachable(edges, &c, t, lo, hi) {
            continue;
        }
        let lp = limit_lp(edges, &c, t, lo, hi);
        let best: Vec<BigRational> = (0..n)
            .map(|i| {
                let obj: Vec<BigRational> = c.iter().map(|&j| rat(edges[j].weight[i])).collect();
                match lp.maximize(&obj) {
                    LpOutcome::Optimal { value, .. } => value,
                    _ => hi[i].clone(),
                }
            })
            .collect();
        top = Some(match top {
            None => best,
            Some(cur) => cur.into_iter().zip(best).map(|(a, b)| a.max(b)).collect(),
        });
    }
    top
}

struct Candidates {
    list: Vec<Vec<BigRational>>,
    seen: HashSet<Vec<BigRational>>,
    cap: usize,
    truncated: bool,
}

impl Candidates {
    fn push(&mut self, p: Vec<BigRational>, q: &Query) -> bool {
        if self.list.len() >= self.cap {
            self.truncated = true;
            return false;
        }
        if (0..p.len()).all(|i| q.admits(i, &p[i])) && self.seen.insert(p.clone()) {
            self.list.push(p);
        }
        true
    }
}

/// Average weight vectors of the simple cycles of the ⊥-part, each cycle
/// listed once from its smallest state.
fn cycle_averages(edges: &[BotEdge], n: usize, cands: &mut Candidates, q: &Query) {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, x) in edges.iter().enumerate() {
        adj.entry(x.from).or_default().push(j);
    }
    let mut starts: Vec<usize> = adj.keys().copied().collect();
    starts.sort_unstable();
    let mut visits = 0usize;
    let limit = 50 * cands.cap;
    for &s in &starts {
        let mut on_path = HashSet::from([s]);
        let mut path: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        while let Some((v, k)) = stack.pop() {
            let out = adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            if k >= out.len() {
                on_path.remove(&v);
                if v != s {
                    path.pop();
                }
                continue;
            }
            stack.push((v, k + 1));
            visits += 1;
            if visits > limit {
                cands.truncated = true;
                return;
            }
            let j = out[k];
            let t = edges[j].to;
            if t == s {
                path.push(j);
                let len = BigInt::from(path.len());
                let p = (0..n)
                    .map(|i| {
                        BigRational::new(path.iter().map(|&j| edges[j].weight[i]).sum::<i64>().into(), len.clone())
                    })
                    .collect();
                path.pop();
                if !cands.push(p, q) {
                    return;
                }
            } else if t > s && !on_path.contains(&t) {
                on_path.insert(t);
                path.push(j);
                stack.push((t, 0));
            }
        }
    }
}

/// Optimal vertices of the frequency polytopes intersected with the box,
/// along each axis and the diagonal.
fn polytope_vertices(
    edges: &[BotEdge],
    n: usize,
    lo: &[BigRational],
    hi: &[BigRational],
    cands: &mut Candidates,
    q: &Query,
) {
    for c in edge_sccs(edges) {
        let mut lp = flow_lp(edges, &c);
        for i in 0..n {
            lp.add(value_row(edges, &c, i), Cmp::Ge, lo[i].clone());
            lp.add(value_row(edges, &c, i), Cmp::Le, hi[i].clone());
        }
        let mut dirs: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            for s in [1, -1] {
                let mut d = vec![0; n];
                d[i] = s;
                dirs.push(d);
            }
        }
        dirs.push(vec![1; n]);
        dirs.push(vec![-1; n]);
        for d in dirs {
            let obj: Vec<BigRational> =
                c.iter().map(|&j| rat((0..n).map(|i| d[i] * edges[j].weight[i]).sum())).collect();
            match lp.maximize(&obj) {
                LpOutcome::Optimal { x, .. } => {
                    if !cands.push(values_of(edges, &c, &x, n), q) {
                        return;
                    }
                }
                _ => break,
            }
        }
    }
}

fn corners(lo: &[BigRational], hi: &[BigRational], cands: &mut Candidates, q: &Query) {
    let n = lo.len();
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let mut vals = vec![hi[i].clone()];
        if lo[i] != hi[i] {
            vals.push(lo[i].clone());
        }
        out = out
            .into_iter()
            .flat_map(|pre: Vec<BigRational>| vals.iter().map(move |v| [pre.clone(), vec![v.clone()]].concat()))
            .collect();
    }
    for p in out {
        cands.push(p, q);
    }
}

/// Closed walk through the edges `c` realizing the integer multiplicities
/// `mult`; `None` when the support is disconnected.
fn euler(edges: &[BotEdge], c: &[usize], mult: &[u64]) -> Option<Vec<usize>> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut left: Vec<u64> = mult.to_vec();
    for (k, &j) in c.iter().enumerate() {
        if mult[k] > 0 {
            adj.entry(edges[j].from).or_default().push(k);
        }
    }
    let start = c.iter().zip(mult).filter(|x| *x.1 > 0).map(|x| edges[*x.0].from).min()?;
    let mut ptr: HashMap<usize, usize> = HashMap::new();
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut walk = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let out = adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let p = ptr.entry(v).or_insert(0);
        while *p < out.len() && left[out[*p]] == 0 {
            *p += 1;
        }
        if *p < out.len() {
            let k = out[*p];
            left[k] -= 1;
            stack.push((edges[c[k]].to, Some(k)));
        } else {
            let (_, via) = stack.pop().unwrap();
            if let Some(k) = via {
                walk.push(c[k]);
            }
        }
    }
    walk.reverse();
    (left.iter().all(|&l| l == 0) && !walk.is_empty()).then_some(walk)
}

const MAX_CYCLE: u64 = 1_000_000;

/// A ⊥-lasso through the given edges whose cycle averages exactly `p`.
fn exact_lasso(e: &EpistemicGame, edges: &[BotEdge], p: &[BigRational]) -> Option<EpiLasso> {
    for c in edge_sccs(edges) {
        let mut lp = flow_lp(edges, &c);
        for (i, pi) in p.iter().enumerate() {
            lp.add(value_row(edges, &c, i), Cmp::Eq, pi.clone());
        }
        let Some(x0) = lp.feasible_point() else { continue };
        // Widen the support until it is connected, averaging with
        // solutions that use further edges.
        let mut pool = vec![x0];
        let mut walk = None;
        for k in 0..=c.len() {
            let sum: Vec<BigRational> = (0..c.len())
                .map(|j| pool.iter().map(|x| &x[j]).sum::<BigRational>() / BigRational::from_integer(pool.len().into()))
                .collect();
            let lcm = sum.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mult: Option<Vec<u64>> =
                sum.iter().map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer().to_u64()).collect();
            if let Some(mult) = mult.filter(|m| m.iter().sum::<u64>() <= MAX_CYCLE) {
                if let Some(w) = euler(edges, &c, &mult) {
                    walk = Some(w);
                    break;
                }
            }
            let Some(j) = (k..c.len()).find(|&j| pool.iter().all(|x| x[j].is_zero())) else { break };
            let mut obj = vec![BigRational::zero(); c.len()];
            obj[j] = BigRational::one();
            if let LpOutcome::Optimal { x, value } = lp.maximize(&obj) {
                if value.is_positive() {
                    pool.push(x);
                }
            }
        }
        let Some(walk) = walk else { continue };
        let start = edges[walk[0]].from;
        let prefix = bot_path(e, edges, start)?;
        return Some(EpiLasso {
            prefix: EpiHistory {
                start: e.initial(),
                steps: prefix.iter().map(|&j| (edges[j].adam, edges[j].signal)).collect(),
            },
            cycle: walk.iter().map(|&j| (edges[j].adam, edges[j].signal)).collect(),
        });
    }
    None
}

fn bot_path(e: &EpistemicGame, edges: &[BotEdge], to: usize) -> Option<Vec<usize>> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([e.initial()]);
    let mut seen = HashSet::from([e.initial()]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut out = Vec::new();
            let mut cur = v;
            while let Some(&j) = parent.get(&cur) {
                out.push(j);
                cur = edges[j].from;
            }
            out.reverse();
            return Some(out);
        }
        for (j, x) in edges.iter().enumerate() {
            if x.from == v && seen.insert(x.to) {
                parent.insert(x.to, j);
                queue.push_back(x.to);
            }
        }
    }
    None
}

fn full_u(p: &[BigRational]) -> Vec<BigRational> {
    let neg: Vec<BigRational> = p.iter().map(|x| -x).collect();
    [p.to_vec(), neg.clone(), neg].concat()
}

/// Adam states whose non-⊥ successors are all winning.
fn safe_under<'a>(e: &'a EpistemicGame, win: &'a [bool]) -> impl Fn(usize) -> bool + 'a {
    move |a| e.adam[a].succ.iter().all(|&(_, t)| e.eve[t].is_bot() || win[t])
}

/// Searches a threshold vector `u = (p, −p, −p)` with `ν ≤ p ≤ ν′` that
/// Eve can enforce. `None` is reported only when no ⊥-play with a payoff
/// inside the thresholds survives even the most lenient punishment
/// requirement; an exhausted candidate family is inconclusive.
pub fn polyhedron_query(
    g: &Game,
    e: &EpistemicGame,
    t: &MpTransform,
    q: &Query,
    opts: &MpOptions,
) -> Result<QueryOutcome, MpError> {
    let n = t.n_players;
    if q.lower.len() != n || q.upper.len() != n {
        return Err(MpError::Query(format!("expected {n} thresholds")));
    }
    let Some((lo, hi)) = clipped_box(q, t.w_max) else { return Ok(QueryOutcome::None) };
    let arena = t.arena(e);
    let solve = |p: &[BigRational]| solve_threshold(&arena, &full_u(p), opts.strategy_budget);
    // Enforceable thresholds only grow with p, so every answer stays below
    // the best ⊥-payoffs available where `hi` is enforceable.
    let mut hi = hi;
    let edges = loop {
        let lenient = match solve(&hi) {
            Ok(s) => s,
            Err(MpError::Budget(b)) => return Ok(QueryOutcome::Inconclusive(format!("more than {b} Adam strategies"))),
            Err(err) => return Err(err),
        };
        let edges = bot_edges(g, e, &safe_under(e, &lenient.win));
        let Some(top) = payoff_ceiling(&edges, t, &lo, &hi) else { return Ok(QueryOutcome::None) };
        let next: Vec<BigRational> = hi.iter().zip(top).map(|(h, c)| h.clone().min(c)).collect();
        if lo.iter().zip(&next).any(|(l, h)| l > h) {
            return Ok(QueryOutcome::None);
        }
        if next == hi {
            break edges;
        }
        hi = next;
    };
    let mut cands = Candidates { list: Vec::new(), seen: HashSet::new(), cap: opts.candidate_budget, truncated: false };
    cands.push(hi.clone(), q);
    cycle_averages(&edges, n, &mut cands, q);
    polytope_vertices(&edges, n, &lo, &hi, &mut cands, q);
    corners(&lo, &hi, &mut cands, q);
    let mut unwitnessed = 0;
    for p in &cands.list {
        let sol = match solve(p) {
            Ok(s) => s,
            Err(MpError::Budget(b)) => return Ok(QueryOutcome::Inconclusive(format!("more than {b} Adam strategies"))),
            Err(err) => return Err(err),
        };
        if !sol.win[e.initial()] {
            continue;
        }
        let safe = bot_edges(g, e, &safe_under(e, &sol.win));
        match exact_lasso(e, &safe, p) {
            Some(lasso) => {
                return Ok(QueryOutcome::Found { u: full_u(p), lasso, adam_strategies: sol.adam_strategies })
            }
            None => unwitnessed += 1,
        }
    }
    let mut why = format!("{} candidate threshold vectors exhausted", cands.list.len());
    if cands.truncated {
        why.push_str(" (candidate budget reached)");
    }
    if unwitnessed > 0 {
        why.push_str(&format!("; {unwitnessed} enforceable without a lasso witness"));
    }
    Ok(QueryOutcome::Inconclusive(why))
}

pub fn decide_mp(g: &Game, q: &Query) -> Result<MpVerdict, MpError> {
    decide_mp_with(g, q, &MpOptions::default())
}

pub fn decide_mp_with(g: &Game, q: &Query, opts: &MpOptions) -> Result<MpVerdict, MpError> {
    if !g.is_mean_payoff() {
        return Err(MpError::NotMeanPayoff);
    }
    let e = build_epistemic_with(g, opts.build)?;
    let t = transform_weights(g, &e)?;
    Ok(match polyhedron_query(g, &e, &t, q, opts)? {
        QueryOutcome::Found { u, lasso, adam_strategies } => {
            let lasso_values = t.lasso_values(&e, &lasso);
            MpVerdict::Exists(Witness {
                payoff: u[..t.n_players].to_vec(),
                lasso,
                strategy: StrategyGraph::default(),
                mp: Some(MpCertificate { u, lasso_values, adam_strategies }),
            })
        }
        QueryOutcome::None => MpVerdict::None,
        QueryOutcome::Inconclusive(why) => MpVerdict::Inconclusive(why),
    })
}

/// Replays a mean-payoff witness: the lasso and its payoff, the threshold
/// vector's shape, the lasso's transformed values, and that every deviation
/// from the lasso enters a state where Eve enforces the thresholds.
pub fn check_mp(g: &Game, e: &EpistemicGame, w: &Witness, strategy_budget: usize) -> Result<(), WitnessFault> {
    let fault = |m: String| WitnessFault::Threshold(m);
    let cert = w.mp.as_ref().ok_or_else(|| WitnessFault::Shape("missing mean-payoff certificate".into()))?;
    let t = transform_weights(g, e).map_err(|err| fault(err.to_string()))?;
    let n = t.n_players;
    if w.payoff.len() != n || cert.u.len() != 3 * n || cert.lasso_values.len() != 3 * n {
        return Err(WitnessFault::Shape("vector lengths do not match the players".into()));
    }
    check_lasso(e, &w.lasso)?;
    let lifted = lift_payoff(g, &w.lasso);
    if lifted != w.payoff {
        return Err(WitnessFault::Payoff { found: lifted.iter().map(|q| q.to_string()).collect() });
    }
    if cert.u != full_u(&w.payoff) {
        return Err(fault("u is not (p, −p, −p)".into()));
    }
    let values = t.lasso_values(e, &w.lasso);
    if values != cert.lasso_values {
        return Err(fault("recorded lasso values differ".into()));
    }
    if let Some(d) = (0..3 * n).find(|&d| values[d] < cert.u[d]) {
        return Err(fault(format!("lasso misses the threshold in dimension {d}")));
    }
    let sol = solve_threshold(&t.arena(e), &cert.u, strategy_budget).map_err(|err| fault(err.to_string()))?;
    let safe = safe_under(e, &sol.win);
    for &(a, _) in w.lasso.prefix.steps.iter().chain(&w.lasso.cycle) {
        if !safe(a) {
            return Err(fault(format!("a deviation from Adam state {a} escapes punishment")));
        }
    }
    Ok(())
}
