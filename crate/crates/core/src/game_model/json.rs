use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{Game, GameError, Move, PayoffKind, PayoffSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    players: Vec<String>,
    vertices: Vec<String>,
    initial: String,
    actions: Vec<String>,
    allowed: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    transitions: Vec<TransitionDoc>,
    signals: Vec<SignalDoc>,
    payoffs: BTreeMap<String, PayoffDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    #[serde(rename = "move")]
    mv: BTreeMap<String, String>,
    to: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalDoc {
    #[serde(rename = "move")]
    mv: BTreeMap<String, String>,
    to: String,
    label: String,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PayoffDoc {
    Buchi {
        accepting: Vec<String>,
    },
    #[serde(rename = "cobuchi")]
    CoBuchi {
        rejecting: Vec<String>,
    },
    Parity {
        priorities: BTreeMap<String, u32>,
    },
    MpLiminf {
        weights: BTreeMap<String, i64>,
    },
    MpLimsup {
        weights: BTreeMap<String, i64>,
    },
}

/// `None` stands for the wildcard.
type Pattern = Vec<Option<usize>>;

fn err<T>(msg: impl Into<String>) -> Result<T, GameError> {
    Err(GameError::Semantic(msg.into()))
}

fn lookup(names: &[String], name: &str, what: &str) -> Result<usize, GameError> {
    names.iter().position(|n| n == name).ok_or_else(|| GameError::Semantic(format!("unknown {what} {name:?}")))
}

fn unique(names: &[String], what: &str) -> Result<(), GameError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return err(format!("duplicate {what} {n:?}"));
        }
    }
    Ok(())
}

fn pattern(doc: &BTreeMap<String, String>, players: &[String], actions: &[String]) -> Result<Pattern, GameError> {
    let mut pat = vec![None; players.len()];
    let mut named = vec![false; players.len()];
    for (p, a) in doc {
        let pi = lookup(players, p, "player")?;
        named[pi] = true;
        if a != "*" {
            pat[pi] = Some(lookup(actions, a, "action")?);
        }
    }
    if let Some(pi) = named.iter().position(|n| !n) {
        return err(format!("move does not name player {:?}", players[pi]));
    }
    Ok(pat)
}

fn matches(pat: &Pattern, m: &Move) -> bool {
    pat.iter().zip(&m.0).all(|(p, a)| p.is_none_or(|x| x == *a))
}

fn wildcards(pat: &Pattern) -> usize {
    pat.iter().filter(|p| p.is_none()).count()
}

/// Most specific matching entry; equally specific entries must agree.
fn resolve<'a, T: PartialEq>(
    cands: impl Iterator<Item = (usize, &'a Pattern, T)>,
    used: &mut [bool],
) -> Result<Option<T>, String> {
    let mut best: Option<(usize, T)> = None;
    let mut best_ix: Vec<usize> = Vec::new();
    for (ix, pat, val) in cands {
        let w = wildcards(pat);
        match &best {
            Some((bw, _)) if w > *bw => continue,
            Some((bw, bv)) if w == *bw => {
                if *bv != val {
                    return Err("conflicting entries of equal specificity".into());
                }
                best_ix.push(ix);
            }
            _ => {
                best = Some((w, val));
                best_ix = vec![ix];
            }
        }
    }
    for ix in best_ix {
        used[ix] = true;
    }
    Ok(best.map(|b| b.1))
}

fn map_err(e: serde_json::Error) -> GameError {
    match e.classify() {
        serde_json::error::Category::Data => GameError::Semantic(e.to_string()),
        _ => GameError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() },
    }
}

/// Parses and validates a game document.
pub fn parse_game(text: &str) -> Result<Game, GameError> {
    let doc: GameDoc = serde_json::from_str(text).map_err(map_err)?;
    unique(&doc.players, "player")?;
    unique(&doc.vertices, "vertex")?;
    unique(&doc.actions, "action")?;
    let (players, vertices, actions) = (&doc.players, &doc.vertices, &doc.actions);
    let initial = lookup(vertices, &doc.initial, "vertex")?;

    for v in doc.allowed.keys() {
        if v != "*" {
            lookup(vertices, v, "vertex")?;
        }
    }
    let mut allowed = Vec::with_capacity(vertices.len());
    for v in vertices {
        let Some(row) = doc.allowed.get(v).or_else(|| doc.allowed.get("*")) else {
            return err(format!("no allowed actions given for vertex {v:?}"));
        };
        let mut per = vec![None; players.len()];
        for (p, acts) in row {
            let pi = lookup(players, p, "player")?;
            let ids = acts.iter().map(|a| lookup(actions, a, "action")).collect::<Result<Vec<_>, _>>()?;
            if ids.is_empty() {
                return err(format!("empty allowed set for {p:?} at {v:?}"));
            }
            per[pi] = Some(ids);
        }
        let mut out = Vec::with_capacity(players.len());
        for (pi, a) in per.into_iter().enumerate() {
            match a {
                Some(a) => out.push(a),
                None => return err(format!("no allowed actions for {:?} at {v:?}", players[pi])),
            }
        }
        allowed.push(out);
    }

    let mut trans: Vec<(usize, Pattern, usize)> = Vec::new();
    for t in &doc.transitions {
        trans.push((
            lookup(vertices, &t.from, "vertex")?,
            pattern(&t.mv, players, actions)?,
            lookup(vertices, &t.to, "vertex")?,
        ));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut sigs: Vec<(Pattern, usize, usize)> = Vec::new();
    for s in &doc.signals {
        let l = match labels.iter().position(|x| x == &s.label) {
            Some(i) => i,
            None => {
                labels.push(s.label.clone());
                labels.len() - 1
            }
        };
        sigs.push((pattern(&s.mv, players, actions)?, lookup(vertices, &s.to, "vertex")?, l));
    }

    let mut trans_used = vec![false; trans.len()];
    let mut sig_used = vec![false; sigs.len()];
    let mut targets: HashMap<(usize, Move), usize> = HashMap::new();
    let mut table: HashMap<(usize, Move), (usize, usize)> = HashMap::new();
    for (v, row) in allowed.iter().enumerate() {
        for t in super::cartesian(row) {
            let m = Move(t);
            let target = resolve(
                trans
                    .iter()
                    .enumerate()
                    .filter(|(_, (f, p, _))| *f == v && matches(p, &m))
                    .map(|(i, (_, p, to))| (i, p, *to)),
                &mut trans_used,
            )
            .map_err(|e| GameError::Semantic(format!("transition from {:?}: {e}", vertices[v])))?;
            let Some(target) = target else {
                let names: Vec<&str> = m.0.iter().map(|&a| actions[a].as_str()).collect();
                return err(format!("missing transition from {:?} on <{}>", vertices[v], names.join(",")));
            };
            targets.insert((v, m.clone()), target);
            let label = resolve(
                sigs.iter()
                    .enumerate()
                    .filter(|(_, (p, to, _))| *to == target && matches(p, &m))
                    .map(|(i, (p, _, l))| (i, p, *l)),
                &mut sig_used,
            )
            .map_err(|e| GameError::Semantic(format!("signal into {:?}: {e}", vertices[target])))?;
            let Some(label) = label else {
                let names: Vec<&str> = m.0.iter().map(|&a| actions[a].as_str()).collect();
                return err(format!("missing signal for <{}> into {:?}", names.join(","), vertices[target]));
            };
            table.insert((v, m), (target, label));
        }
    }
    if let Some(i) = trans_used.iter().position(|u| !u) {
        let t = &doc.transitions[i];
        return err(format!("transition entry from {:?} to {:?} matches no allowed move", t.from, t.to));
    }
    if let Some(i) = sig_used.iter().position(|u| !u) {
        let s = &doc.signals[i];
        return err(format!("signal entry {:?} into {:?} is never used", s.label, s.to));
    }

    for p in doc.payoffs.keys() {
        lookup(players, p, "player")?;
    }
    let sig_of = |name: &str| lookup(&labels, name, "signal");
    let total = |m: &BTreeMap<String, i64>, what: &str| -> Result<Vec<i64>, GameError> {
        let mut out = vec![None; labels.len()];
        for (k, x) in m {
            out[sig_of(k)?] = Some(*x);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| GameError::Semantic(format!("{what} map misses signal {:?}", labels[i]))))
            .collect()
    };
    let mut payoffs = Vec::with_capacity(players.len());
    for p in players {
        let Some(pd) = doc.payoffs.get(p) else {
            return err(format!("no payoff for player {p:?}"));
        };
        let spec = match pd {
            PayoffDoc::Buchi { accepting } => {
                PayoffSpec::buchi(labels.len(), &accepting.iter().map(|s| sig_of(s)).collect::<Result<Vec<_>, _>>()?)
            }
            PayoffDoc::CoBuchi { rejecting } => {
                PayoffSpec::cobuchi(labels.len(), &rejecting.iter().map(|s| sig_of(s)).collect::<Result<Vec<_>, _>>()?)
            }
            PayoffDoc::Parity { priorities } => {
                let m: BTreeMap<String, i64> = priorities.iter().map(|(k, v)| (k.clone(), *v as i64)).collect();
                PayoffSpec::parity(total(&m, "priority")?.into_iter().map(|x| x as u32).collect())
            }
            PayoffDoc::MpLiminf { weights } => PayoffSpec::mp_liminf(total(weights, "weight")?),
            PayoffDoc::MpLimsup { weights } => PayoffSpec::mp_limsup(total(weights, "weight")?),
        };
        payoffs.push(spec);
    }

    Game::from_parts(
        players.clone(),
        vertices.clone(),
        actions.clone(),
        labels,
        initial,
        allowed,
        |v, m| table.get(&(v, m.clone())).copied(),
        payoffs,
    )
}

/// Explicit, wildcard-free document for `g`.
pub fn game_to_json(g: &Game) -> Value {
    let mv_obj = |m: &Move| -> Value {
        let mut o = Map::new();
        for (p, &a) in m.0.iter().enumerate() {
            o.insert(g.players[p].clone(), Value::String(g.actions[a].clone()));
        }
        Value::Object(o)
    };
    let mut allowed = Map::new();
    for v in 0..g.n_vertices() {
        let mut row = Map::new();
        for p in 0..g.n_players() {
            row.insert(g.players[p].clone(), json!(g.allowed(v, p).iter().map(|&a| &g.actions[a]).collect::<Vec<_>>()));
        }
        allowed.insert(g.vertices[v].clone(), Value::Object(row));
    }
    let mut transitions = Vec::new();
    let mut signals = Vec::new();
    let mut seen = HashSet::new();
    for v in 0..g.n_vertices() {
        for s in g.steps(v) {
            transitions.push(json!({"from": g.vertices[v], "move": mv_obj(&s.mv), "to": g.vertices[s.target]}));
            if seen.insert((s.mv.clone(), s.target)) {
                signals.push(json!({"move": mv_obj(&s.mv), "to": g.vertices[s.target], "label": g.signals[s.signal]}));
            }
        }
    }
    // Only signals some transition emits are declared.
    let used: HashSet<usize> = (0..g.n_vertices()).flat_map(|v| g.steps(v).iter().map(|s| s.signal)).collect();
    let sig_map = |xs: &[i64]| -> Value {
        let mut o = Map::new();
        for (i, x) in xs.iter().enumerate().filter(|(i, _)| used.contains(i)) {
            o.insert(g.signals[i].clone(), json!(x));
        }
        Value::Object(o)
    };
    let mut payoffs = Map::new();
    for (p, spec) in g.payoffs.iter().enumerate() {
        let sel = |want: u32| -> Vec<&String> {
            spec.priority
                .iter()
                .enumerate()
                .filter(|&(i, &x)| x == want && used.contains(&i))
                .map(|(i, _)| &g.signals[i])
                .collect()
        };
        let doc = match spec.kind {
            PayoffKind::Buchi => json!({"kind": "buchi", "accepting": sel(0)}),
            PayoffKind::CoBuchi => json!({"kind": "cobuchi", "rejecting": sel(1)}),
            PayoffKind::Parity => {
                let pr: Vec<i64> = spec.priority.iter().map(|&x| x as i64).collect();
                json!({"kind": "parity", "priorities": sig_map(&pr)})
            }
            PayoffKind::MpLiminf => json!({"kind": "mp-liminf", "weights": sig_map(&spec.weight)}),
            PayoffKind::MpLimsup => json!({"kind": "mp-limsup", "weights": sig_map(&spec.weight)}),
        };
        payoffs.insert(g.players[p].clone(), doc);
    }
    json!({
        "players": g.players,
        "vertices": g.vertices,
        "initial": g.vertices[g.initial],
        "actions": g.actions,
        "allowed": allowed,
        "transitions": transitions,
        "signals": signals,
        "payoffs": payoffs,
    })
}
