use std::collections::HashMap;

use crate::bits::Bits;

/// Finite-memory Eve strategy on a solver arena.
#[derive(Clone, Debug)]
pub enum Strat {
    Memoryless(HashMap<usize, usize>),
    /// The first region containing the current node is in charge; memory
    /// restarts whenever the region changes.
    Regions(Vec<(Bits, Strat)>),
    /// Cycles through targets: in phase `i`, attract to `targets[i]` from
    /// `attr[i]`, otherwise play `subs[i]` on the rest.
    Phases {
        targets: Vec<Bits>,
        attr: Vec<Bits>,
        attr_moves: Vec<HashMap<usize, usize>>,
        subs: Vec<Strat>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mem {
    Empty,
    Region(usize, Box<Mem>),
    Phase(usize, Option<Box<Mem>>),
}

impl Strat {
    pub fn memoryless(moves: HashMap<usize, usize>) -> Strat {
        Strat::Memoryless(moves)
    }

    /// Memory after arriving at `node`.
    pub fn enter(&self, prev: Option<&Mem>, node: usize) -> Mem {
        match self {
            Strat::Memoryless(_) => Mem::Empty,
            Strat::Regions(rs) => match rs.iter().position(|r| r.0.get(node)) {
                None => Mem::Empty,
                Some(r) => {
                    let inner = match prev {
                        Some(Mem::Region(pr, inner)) if *pr == r => Some(inner.as_ref()),
                        _ => None,
                    };
                    Mem::Region(r, Box::new(rs[r].1.enter(inner, node)))
                }
            },
            Strat::Phases { targets, attr, subs, .. } => {
                let k = targets.len();
                let (mut i, mut sub) = match prev {
                    Some(Mem::Phase(i, s)) => (*i, s.as_deref()),
                    _ => (0, None),
                };
                let mut steps = 0;
                while targets[i].get(node) && steps < k {
                    i = (i + 1) % k;
                    sub = None;
                    steps += 1;
                }
                if attr[i].get(node) {
                    Mem::Phase(i, None)
                } else {
                    Mem::Phase(i, Some(Box::new(subs[i].enter(sub, node))))
                }
            }
        }
    }

    /// Eve's choice at `node` under memory `mem`.
    pub fn choose(&self, mem: &Mem, node: usize) -> Option<usize> {
        match (self, mem) {
            (Strat::Memoryless(m), _) => m.get(&node).copied(),
            (Strat::Regions(rs), Mem::Region(r, inner)) => rs.get(*r)?.1.choose(inner, node),
            (Strat::Phases { attr, attr_moves, subs, .. }, Mem::Phase(i, sub)) => {
                if attr[*i].get(node) {
                    attr_moves[*i].get(&node).copied()
                } else {
                    subs[*i].choose(sub.as_deref()?, node)
                }
            }
            _ => None,
        }
    }
}

/// Replays `strat` from `start` against every Adam behaviour on the
/// (node, memory) product and reports the first losing pattern found: a
/// missing or illegal Eve choice, a reachable losing sink, or a reachable
/// cycle whose least priority is odd in some dimension.
pub fn check_strategy(g: &super::ConjParityGame, strat: &Strat, start: usize, max_nodes: usize) -> Result<(), String> {
    use std::collections::HashMap as Map;
    let a = &g.arena;
    let mut index: Map<(usize, Mem), usize> = Map::new();
    let mut nodes: Vec<(usize, Mem)> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let first = (start, strat.enter(None, start));
    index.insert(first.clone(), 0);
    nodes.push(first);
    let mut i = 0;
    while i < nodes.len() {
        if nodes.len() > max_nodes {
            return Err("product too large".into());
        }
        let (v, m) = nodes[i].clone();
        let mut out = Vec::new();
        match a.sink_value(v) {
            Some(true) => {}
            Some(false) => return Err(format!("losing sink {v} reachable")),
            None => {
                let targets: Vec<usize> = if a.eve[v] {
                    match strat.choose(&m, v) {
                        Some(w) if a.succ[v].contains(&w) => vec![w],
                        other => return Err(format!("bad choice {other:?} at {v}")),
                    }
                } else {
                    a.succ[v].clone()
                };
                for w in targets {
                    let key = (w, strat.enter(Some(&m), w));
                    let next = nodes.len();
                    let id = *index.entry(key.clone()).or_insert(next);
                    if id == next {
                        nodes.push(key);
                    }
                    out.push(id);
                }
            }
        }
        succ.push(out);
        i += 1;
    }
    let n = nodes.len();
    for (d, pr) in g.prio.iter().enumerate() {
        for x in 0..n {
            let p = pr[nodes[x].0];
            if p % 2 == 0 {
                continue;
            }
            let mut seen = vec![false; n];
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                for &z in &succ[y] {
                    if z == x {
                        return Err(format!("odd cycle through node {} in dimension {d}", nodes[x].0));
                    }
                    if !seen[z] && pr[nodes[z].0] >= p {
                        seen[z] = true;
                        stack.push(z);
                    }
                }
            }
        }
    }
    Ok(())
}
