use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::NodeFiltered;

use crate::epistemic::{EpiHistory, EpiLasso, EpistemicGame};
use crate::game_model::{Game, Signal};

/// Safe ⊥-subgraph over Adam states: an Adam state of a ⊥-state is safe when
/// every successor leaving the ⊥-part is marked. Edges follow the ⊥-successor.
struct BotGraph {
    adam: Vec<usize>,
    signal: Vec<Signal>,
    succ: Vec<Vec<usize>>,
    init: Vec<usize>,
}

fn bot_graph(e: &EpistemicGame, marked: &dyn Fn(usize) -> bool) -> BotGraph {
    let safe = |a: usize| e.adam[a].succ.iter().all(|&(_, t)| e.eve[t].is_bot() || marked(t));
    let mut local = vec![usize::MAX; e.adam.len()];
    let mut g = BotGraph { adam: Vec::new(), signal: Vec::new(), succ: Vec::new(), init: Vec::new() };
    let mut queue = VecDeque::new();
    let mut visit = |a: usize, g: &mut BotGraph, queue: &mut VecDeque<usize>| -> Option<usize> {
        if !safe(a) {
            return None;
        }
        if local[a] == usize::MAX {
            local[a] = g.adam.len();
            g.adam.push(a);
            g.signal.push(e.bot_succ(a).expect("the suggested move keeps ⊥").0);
            g.succ.push(Vec::new());
            queue.push_back(local[a]);
        }
        Some(local[a])
    };
    for &a in &e.eve_succ[e.initial()] {
        if let Some(i) = visit(a, &mut g, &mut queue) {
            g.init.push(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (_, t) = e.bot_succ(g.adam[i]).unwrap();
        let out: Vec<usize> = e.eve_succ[t].iter().filter_map(|&b| visit(b, &mut g, &mut queue)).collect();
        g.succ[i] = out;
    }
    g
}

/// A strongly connected set inside `alive` with an internal edge whose least
/// priority is even in every dimension.
fn good_component(graph: &DiGraph<(), ()>, prio: &[Vec<u32>], alive: &[bool]) -> Option<Vec<usize>> {
    let view = NodeFiltered::from_fn(graph, |n: NodeIndex| alive[n.index()]);
    for comp in tarjan_scc(&view) {
        let nodes: Vec<usize> = comp.iter().map(|n| n.index()).collect();
        let mut member = vec![false; alive.len()];
        for &v in &nodes {
            member[v] = true;
        }
        let inside = |x: usize| member[x];
        let cyclic = nodes.iter().any(|&v| graph.neighbors(NodeIndex::new(v)).any(|w| inside(w.index())));
        if !cyclic {
            continue;
        }
        let dims = prio[nodes[0]].len();
        let odd = (0..dims).find_map(|d| {
            let m = nodes.iter().map(|&v| prio[v][d]).min().unwrap();
            (m % 2 == 1).then_some((d, m))
        });
        match odd {
            None => return Some(nodes),
            Some((d, m)) => {
                let sub: Vec<bool> = (0..alive.len()).map(|v| inside(v) && prio[v][d] != m).collect();
                if let Some(found) = good_component(graph, prio, &sub) {
                    return Some(found);
                }
            }
        }
    }
    None
}

/// Shortest path from any of `from` to `to` inside `within`, both ends
/// included.
fn path(succ: &[Vec<usize>], from: &[usize], to: usize, within: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; succ.len()];
    let mut seen = vec![false; succ.len()];
    let mut queue = VecDeque::new();
    for &f in from {
        if within(f) && !seen[f] {
            seen[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut out = vec![v];
            let mut cur = v;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                out.push(cur);
            }
            out.reverse();
            return Some(out);
        }
        for &w in &succ[v] {
            if within(w) && !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// A ⊥-lasso through safe Adam states whose cycle satisfies player `A`'s
/// parity condition when `p_A = 1` and its complement when `p_A = 0`.
pub fn find_bot_lasso(g: &Game, e: &EpistemicGame, p: &[bool], marked: &dyn Fn(usize) -> bool) -> Option<EpiLasso> {
    let bg = bot_graph(e, marked);
    let n = bg.adam.len();
    let prio: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..p.len()).map(|a| g.payoffs[a].priority[bg.signal[i]] + u32::from(!p[a])).collect())
        .collect();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    for _ in 0..n {
        graph.add_node(());
    }
    for (v, out) in bg.succ.iter().enumerate() {
        for &w in out {
            graph.add_edge(NodeIndex::new(v), NodeIndex::new(w), ());
        }
    }
    let comp = good_component(&graph, &prio, &vec![true; n])?;
    let mut member = vec![false; n];
    for &v in &comp {
        member[v] = true;
    }
    let inside = |x: usize| member[x];
    let dims = p.len();
    let mut required: Vec<usize> = (0..dims)
        .map(|d| {
            let m = comp.iter().map(|&v| prio[v][d]).min().unwrap();
            *comp.iter().find(|&&v| prio[v][d] == m).unwrap()
        })
        .collect();
    let start = *comp.iter().min().unwrap();
    required.push(start);
    let mut cycle = vec![start];
    let mut cur = start;
    for &r in &required {
        if r == cur && r != start {
            continue;
        }
        cycle.extend(path(&bg.succ, &bg.succ[cur], r, &inside)?);
        cur = r;
    }
    cycle.pop();
    let prefix = path(&bg.succ, &bg.init, start, &|_| true)?;
    let step = |i: usize| (bg.adam[i], bg.signal[i]);
    Some(EpiLasso {
        prefix: EpiHistory { start: e.initial(), steps: prefix[..prefix.len() - 1].iter().map(|&i| step(i)).collect() },
        cycle: cycle.into_iter().map(step).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        for _ in 0..n {
            g.add_node(());
        }
        for &(a, b) in edges {
            g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
        }
        g
    }

    #[test]
    fn good_component_peels_odd_minima() {
        // 0 ⇄ 1 ⇄ 2; node 0 has the odd minimum in dimension 0.
        let g = graph(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        let prio = vec![vec![1, 2], vec![2, 2], vec![4, 0]];
        let found = good_component(&g, &prio, &[true; 3]).unwrap();
        assert_eq!(found.iter().copied().collect::<std::collections::BTreeSet<_>>(), [1, 2].into());
        let prio = vec![vec![1, 2], vec![3, 2], vec![4, 1]];
        assert!(good_component(&g, &prio, &[true; 3]).is_none());
    }

    #[test]
    fn self_loop_counts_as_cycle() {
        let g = graph(2, &[(0, 1), (1, 1)]);
        assert_eq!(good_component(&g, &[vec![0], vec![2]], &[true, true]), Some(vec![1]));
        let g = graph(2, &[(0, 1)]);
        assert_eq!(good_component(&g, &[vec![0], vec![2]], &[true, true]), None);
    }
}
