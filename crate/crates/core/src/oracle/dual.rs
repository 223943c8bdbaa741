use super::OracleError;

/// Small generalized parity arena, `prio[node][dim]`, min-even.
#[derive(Clone, Debug)]
pub struct OParityArena {
    pub eve: Vec<bool>,
    pub succ: Vec<Vec<usize>>,
    pub sink: Vec<Option<bool>>,
    pub prio: Vec<Vec<u32>>,
}

impl OParityArena {
    fn edges(&self, v: usize) -> &[usize] {
        if self.sink[v].is_some() {
            &[]
        } else {
            &self.succ[v]
        }
    }

    fn winning_sink(&self, v: usize) -> bool {
        match self.sink[v] {
            Some(b) => b,
            None => self.succ[v].is_empty() && !self.eve[v],
        }
    }
}

fn reach(graph: &[Vec<usize>], from: usize, within: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for &w in &graph[v] {
            if within[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Nodes lying on some cycle inside `within` whose least priority is even in
/// every dimension.
fn good_cycle_nodes(graph: &[Vec<usize>], prio: &[Vec<u32>], within: &[bool]) -> Vec<bool> {
    let n = graph.len();
    let mut out = vec![false; n];
    let mut done = vec![false; n];
    for v in 0..n {
        if !within[v] || done[v] {
            continue;
        }
        let fwd = reach(graph, v, within);
        let comp: Vec<usize> = (0..n).filter(|&w| fwd[w] && reach(graph, w, within)[v]).collect();
        for &w in &comp {
            done[w] = true;
        }
        let inside: Vec<bool> = (0..n).map(|w| comp.contains(&w)).collect();
        let cyclic = comp.iter().any(|&w| graph[w].iter().any(|&x| inside[x]));
        if !cyclic {
            continue;
        }
        let dims = prio[v].len();
        let bad = (0..dims).find_map(|d| {
            let m = comp.iter().map(|&w| prio[w][d]).min().unwrap();
            (m % 2 == 1).then_some((d, m))
        });
        match bad {
            None => {
                for &w in &comp {
                    out[w] = true;
                }
            }
            Some((d, m)) => {
                let sub: Vec<bool> = (0..n).map(|w| inside[w] && prio[w][d] != m).collect();
                let found = good_cycle_nodes(graph, prio, &sub);
                for w in 0..n {
                    out[w] |= found[w];
                }
            }
        }
    }
    out
}

/// Adam's winning region, found by enumerating Adam's memoryless strategies
/// and solving each remaining one-player game by a good-cycle search.
pub fn dual_adam_region(g: &OParityArena, max_strategies: usize) -> Result<Vec<bool>, OracleError> {
    let n = g.eve.len();
    let adam: Vec<usize> = (0..n).filter(|&v| !g.eve[v] && !g.edges(v).is_empty()).collect();
    let total = adam.iter().try_fold(1usize, |acc, &v| acc.checked_mul(g.edges(v).len()));
    if total.is_none_or(|t| t > max_strategies) {
        return Err(OracleError::BudgetExceeded);
    }
    let mut region = vec![false; n];
    let mut pick = vec![0usize; adam.len()];
    let all = vec![true; n];
    loop {
        let mut graph: Vec<Vec<usize>> = (0..n).map(|v| g.edges(v).to_vec()).collect();
        for (i, &v) in adam.iter().enumerate() {
            graph[v] = vec![g.edges(v)[pick[i]]];
        }
        let good = good_cycle_nodes(&graph, &g.prio, &all);
        for v in 0..n {
            let r = reach(&graph, v, &all);
            if !(0..n).any(|w| r[w] && (good[w] || g.winning_sink(w))) {
                region[v] = true;
            }
        }
        let mut i = 0;
        loop {
            if i == adam.len() {
                return Ok(region);
            }
            pick[i] += 1;
            if pick[i] < g.edges(adam[i]).len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
