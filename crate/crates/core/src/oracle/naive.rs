use std::collections::HashMap;

use super::OracleError;
use crate::epistemic::EpistemicGame;
use crate::game_model::Game;

/// Monolithic turn-based arena; colors are priority vectors, `NEUTRAL` on
/// state nodes.
struct Arena {
    eve: Vec<bool>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    color: Vec<usize>,
    palette: Vec<Vec<u32>>,
}

const NEUTRAL: usize = usize::MAX;

impl Arena {
    /// Colors whose every dimension has an even minimum.
    fn good(&self, colors: &[usize]) -> bool {
        let dims = self.palette.first().map(|c| c.len()).unwrap_or(0);
        (0..dims).all(|d| colors.iter().map(|&c| self.palette[c][d]).min().is_none_or(|m| m % 2 == 0))
    }

    fn attract(&self, alive: &[bool], target: &[usize], for_eve: bool) -> Vec<bool> {
        let n = self.eve.len();
        let mut inside = vec![false; n];
        let mut count: Vec<usize> =
            (0..n).map(|v| if alive[v] { self.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
        let mut queue: Vec<usize> = Vec::new();
        for &t in target {
            if alive[t] && !inside[t] {
                inside[t] = true;
                queue.push(t);
            }
        }
        while let Some(w) = queue.pop() {
            for &v in &self.pred[w] {
                if !alive[v] || inside[v] {
                    continue;
                }
                let take = if self.eve[v] == for_eve {
                    true
                } else {
                    count[v] -= 1;
                    count[v] == 0
                };
                if take {
                    inside[v] = true;
                    queue.push(v);
                }
            }
        }
        inside
    }
}

fn pack(v: &[bool]) -> Vec<u64> {
    v.chunks(64).map(|c| c.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))).collect()
}

fn unpack(w: &[u64], n: usize) -> Vec<bool> {
    (0..n).map(|i| w[i / 64] >> (i % 64) & 1 == 1).collect()
}

/// Children of `colors` in the Zielonka tree: the maximal subsets won by the
/// other player. A good set loses one dimension by dropping everything below
/// its least odd value there; a bad set has a single maximal good subset.
fn children(a: &Arena, colors: &[usize]) -> Vec<Vec<usize>> {
    let dims = a.palette.first().map(|c| c.len()).unwrap_or(0);
    if a.good(colors) {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for d in 0..dims {
            let Some(k) = colors.iter().map(|&c| a.palette[c][d]).filter(|x| x % 2 == 1).min() else { continue };
            let sub: Vec<usize> = colors.iter().copied().filter(|&c| a.palette[c][d] >= k).collect();
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
        out
    } else {
        let mut sub = colors.to_vec();
        while let Some((d, m)) = (0..dims)
            .filter_map(|d| sub.iter().map(|&c| a.palette[c][d]).min().map(|m| (d, m)))
            .find(|&(_, m)| m % 2 == 1)
        {
            sub.retain(|&c| a.palette[c][d] != m);
        }
        if sub.is_empty() {
            Vec::new()
        } else {
            vec![sub]
        }
    }
}

/// Winner of the Muller condition with Zielonka's recursion; returns the
/// Eve-winning nodes among `alive`.
fn zielonka(a: &Arena, alive: Vec<bool>, memo: &mut HashMap<Vec<u64>, Vec<u64>>) -> Vec<bool> {
    let n = alive.len();
    let key = pack(&alive);
    if let Some(r) = memo.get(&key) {
        return unpack(r, n);
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if nodes.is_empty() {
        return vec![false; n];
    }
    let mut colors: Vec<usize> = nodes.iter().map(|&v| a.color[v]).filter(|&c| c != NEUTRAL).collect();
    colors.sort_unstable();
    colors.dedup();
    let sigma_eve = a.good(&colors);
    let mut result = None;
    for d in children(a, &colors) {
        let target: Vec<usize> =
            nodes.iter().copied().filter(|&v| a.color[v] != NEUTRAL && !d.contains(&a.color[v])).collect();
        let attr = a.attract(&alive, &target, sigma_eve);
        let sub_alive: Vec<bool> = (0..n).map(|v| alive[v] && !attr[v]).collect();
        let sub_eve = zielonka(a, sub_alive.clone(), memo);
        let opp: Vec<usize> = (0..n).filter(|&v| sub_alive[v] && sub_eve[v] != sigma_eve).collect();
        if opp.is_empty() {
            continue;
        }
        let b = a.attract(&alive, &opp, !sigma_eve);
        let rest_alive: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let rest_eve = zielonka(a, rest_alive.clone(), memo);
        let won: Vec<bool> = (0..n).map(|v| if b[v] { !sigma_eve } else { rest_alive[v] && rest_eve[v] }).collect();
        result = Some(won);
        break;
    }
    let won = result.unwrap_or_else(|| (0..n).map(|v| alive[v] && sigma_eve).collect());
    memo.insert(key, pack(&won));
    won
}

/// Decides the winning condition of the epistemic game for the Boolean
/// payoff `p` directly on the whole arena: along the ⊥-play every player gets
/// exactly `p_A`; on any other play every suspect `A` with `p_A = 0` loses.
pub fn naive_winning_fixpoint(g: &Game, e: &EpistemicGame, p: &[bool], max_nodes: usize) -> Result<bool, OracleError> {
    Ok(naive_eve_region(g, e, p, max_nodes)?[e.initial()])
}

/// The same winning condition evaluated from every Eve state.
pub fn naive_eve_region(g: &Game, e: &EpistemicGame, p: &[bool], max_nodes: usize) -> Result<Vec<bool>, OracleError> {
    let ne = e.eve.len();
    let na = e.adam.len();
    let n_edges: usize = e.adam.iter().map(|a| a.succ.len()).sum();
    let total = ne + na + n_edges;
    if total > max_nodes {
        return Err(OracleError::BudgetExceeded);
    }
    let np = g.n_players();
    let mut arena = Arena {
        eve: vec![false; total],
        succ: vec![Vec::new(); total],
        pred: vec![Vec::new(); total],
        color: vec![NEUTRAL; total],
        palette: Vec::new(),
    };
    let mut palette_ix: HashMap<Vec<u32>, usize> = HashMap::new();
    for (s, offered) in e.eve_succ.iter().enumerate() {
        arena.eve[s] = true;
        for &a in offered {
            arena.succ[s].push(ne + a);
        }
    }
    let mut next = ne + na;
    for (a, ad) in e.adam.iter().enumerate() {
        let src = &e.eve[ad.eve];
        let src_suspects: Vec<bool> = (0..np).map(|q| !src.comp[q].is_empty()).collect();
        for &(beta, t) in &ad.succ {
            let bot_edge = src.bot.is_some() && e.eve[t].bot.is_some();
            let vec: Vec<u32> = (0..np)
                .map(|q| {
                    let pr = g.payoffs[q].priority[beta];
                    if bot_edge {
                        if p[q] {
                            pr
                        } else {
                            pr + 1
                        }
                    } else if src_suspects[q] && !p[q] {
                        pr + 1
                    } else {
                        0
                    }
                })
                .collect();
            let len = palette_ix.len();
            let c = *palette_ix.entry(vec.clone()).or_insert(len);
            if c == arena.palette.len() {
                arena.palette.push(vec);
            }
            arena.color[next] = c;
            arena.succ[ne + a].push(next);
            arena.succ[next].push(t);
            next += 1;
        }
    }
    for v in 0..total {
        for i in 0..arena.succ[v].len() {
            let w = arena.succ[v][i];
            arena.pred[w].push(v);
        }
    }
    let alive = vec![true; total];
    let dead: Vec<usize> = (0..total).filter(|&v| arena.eve[v] && arena.succ[v].is_empty()).collect();
    let lost = arena.attract(&alive, &dead, false);
    let rest: Vec<bool> = (0..total).map(|v| !lost[v]).collect();
    let mut memo = HashMap::new();
    let won = zielonka(&arena, rest, &mut memo);
    Ok(won[..ne].to_vec())
}
