use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{MpCertificate, StrategyGraph, StrategyNode, Witness};
use crate::epistemic::{EpiHistory, EpiLasso, EpistemicGame, Suggestion};
use crate::game_model::{fmt_rational, parse_rational, Game, Move};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    state: usize,
    adam: usize,
    signal: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LassoDoc {
    prefix: Vec<StepDoc>,
    cycle: Vec<StepDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    vertex: String,
    owner: Option<String>,
    #[serde(rename = "move")]
    mv: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    node: usize,
    state: usize,
    suggestion: Vec<RowDoc>,
    next: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MpDoc {
    u: Vec<String>,
    lasso_values: Vec<String>,
    adam_strategies: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDoc {
    payoff: Vec<String>,
    lasso: LassoDoc,
    strategy: Vec<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mean_payoff: Option<MpDoc>,
}

fn rats(v: &[num_rational::BigRational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<num_rational::BigRational>, String> {
    v.iter().map(|s| parse_rational(s).ok_or_else(|| format!("bad rational {s:?}"))).collect()
}

/// Machine-readable witness. State ids refer to the deterministic build of
/// the abstraction; suggestions are spelled out per situation.
pub fn witness_to_json(g: &Game, e: &EpistemicGame, w: &Witness) -> Value {
    let step = |&(a, beta): &(usize, usize)| StepDoc { state: e.adam[a].eve, adam: a, signal: g.signals[beta].clone() };
    let strategy = w
        .strategy
        .nodes
        .iter()
        .enumerate()
        .map(|(i, nd)| NodeDoc {
            node: i,
            state: nd.eve,
            suggestion: e.adam[nd.adam]
                .suggestion
                .moves(g, &e.eve[nd.eve])
                .into_iter()
                .map(|(st, m)| RowDoc {
                    vertex: g.vertices[st.v].clone(),
                    owner: st.owner.map(|p| g.players[p].clone()),
                    mv: m.0.iter().map(|&a| g.actions[a].clone()).collect(),
                })
                .collect(),
            next: nd.next.iter().map(|&(b, j)| (g.signals[b].clone(), j)).collect(),
        })
        .collect();
    let doc = WitnessDoc {
        payoff: rats(&w.payoff),
        lasso: LassoDoc {
            prefix: w.lasso.prefix.steps.iter().map(step).collect(),
            cycle: w.lasso.cycle.iter().map(step).collect(),
        },
        strategy,
        mean_payoff: w.mp.as_ref().map(|c| MpDoc {
            u: rats(&c.u),
            lasso_values: rats(&c.lasso_values),
            adam_strategies: c.adam_strategies,
        }),
    };
    serde_json::to_value(doc).expect("witness serializes")
}

fn signal(g: &Game, name: &str) -> Result<usize, String> {
    g.signal_id(name).ok_or_else(|| format!("unknown signal {name:?}"))
}

fn suggestion(g: &Game, e: &EpistemicGame, state: usize, rows: &[RowDoc]) -> Result<usize, String> {
    let s = e.eve.get(state).ok_or_else(|| format!("unknown state {state}"))?;
    let sits = s.situations();
    if sits.len() != rows.len() {
        return Err(format!("state {state} has {} situations", sits.len()));
    }
    let mut ids = Vec::new();
    for (st, row) in sits.iter().zip(rows) {
        let owner = row.owner.as_deref().map(|o| g.player_id(o).ok_or_else(|| format!("unknown player {o:?}")));
        let owner = owner.transpose()?;
        if g.vertex_id(&row.vertex) != Some(st.v) || owner != st.owner {
            return Err(format!("situation ({}, {:?}) does not match state {state}", row.vertex, row.owner));
        }
        let acts: Vec<usize> = row
            .mv
            .iter()
            .map(|a| g.action_id(a).ok_or_else(|| format!("unknown action {a:?}")))
            .collect::<Result<_, _>>()?;
        let id = g.move_id(st.v, &Move(acts)).ok_or_else(|| format!("move not allowed at {}", row.vertex))?;
        ids.push(id as u32);
    }
    let sug = Suggestion(ids);
    e.eve_succ[state]
        .iter()
        .copied()
        .find(|&a| e.adam[a].suggestion == sug)
        .ok_or_else(|| format!("suggestion at state {state} is not offered"))
}

/// Parses a witness document against the abstraction of `g`.
pub fn witness_from_json(g: &Game, e: &EpistemicGame, v: &Value) -> Result<Witness, String> {
    let doc: WitnessDoc = serde_json::from_value(v.clone()).map_err(|err| err.to_string())?;
    let steps = |xs: &[StepDoc]| -> Result<Vec<(usize, usize)>, String> {
        xs.iter().map(|s| Ok((s.adam, signal(g, &s.signal)?))).collect()
    };
    let mut nodes = Vec::new();
    for (i, nd) in doc.strategy.iter().enumerate() {
        if nd.node != i {
            return Err(format!("strategy rows out of order at {i}"));
        }
        let adam = suggestion(g, e, nd.state, &nd.suggestion)?;
        let mut next: Vec<(usize, usize)> =
            nd.next.iter().map(|(b, &j)| Ok((signal(g, b)?, j))).collect::<Result<_, String>>()?;
        next.sort_unstable();
        nodes.push(StrategyNode { eve: nd.state, adam, next });
    }
    let mp = match &doc.mean_payoff {
        None => None,
        Some(m) => Some(MpCertificate {
            u: parse_rats(&m.u)?,
            lasso_values: parse_rats(&m.lasso_values)?,
            adam_strategies: m.adam_strategies,
        }),
    };
    Ok(Witness {
        payoff: parse_rats(&doc.payoff)?,
        lasso: EpiLasso {
            prefix: EpiHistory { start: e.initial(), steps: steps(&doc.lasso.prefix)? },
            cycle: steps(&doc.lasso.cycle)?,
        },
        strategy: StrategyGraph { nodes },
        mp,
    })
}
