use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;

use super::histories::enumerate_histories;
use super::{DepthBudget, OracleError};
use crate::game_model::{Action, Game, History, Move, Player, Signal, Vertex};

/// Outcome of the exact equilibrium check on an absorbing game.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileVerdict {
    Equilibrium { payoff: Vec<BigRational> },
    InfoIncompatible { player: Player, h1: History, h2: History },
    Disallowed { player: Player, history: History },
    ProfitableDeviation { player: Player, history: History, payoff: BigRational },
}

impl ProfileVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, ProfileVerdict::Equilibrium { .. })
    }
}

fn absorbing(g: &Game, v: Vertex) -> Option<Signal> {
    let steps = g.steps(v);
    let sig = steps[0].signal;
    steps.iter().all(|s| s.target == v && s.signal == sig).then_some(sig)
}

fn leaf_payoff(g: &Game, v: Vertex) -> Option<Vec<BigRational>> {
    absorbing(g, v).map(|sig| g.payoffs.iter().map(|spec| spec.value_of_cycle(&[sig])).collect())
}

type Proj = (Vertex, Vec<(Action, Signal)>);

fn proj(g: &Game, h: &History, p: Player) -> Proj {
    (h.start, h.steps.iter().map(|(m, v)| (m.0[p], g.signal_of(m, *v).unwrap())).collect())
}

/// Payoff of the play where `dev` (if any) chooses freely; returns the best
/// payoff for `dev` and a history reaching it.
fn best_outcome(
    g: &Game,
    profile: &dyn Fn(Player, &History) -> Action,
    h: &History,
    dev: Option<Player>,
    left: usize,
) -> Result<(Vec<BigRational>, History), OracleError> {
    let v = h.last();
    if let Some(pay) = leaf_payoff(g, v) {
        return Ok((pay, h.clone()));
    }
    if left == 0 {
        return Err(OracleError::NotAbsorbing);
    }
    let base: Vec<Action> = (0..g.n_players()).map(|p| profile(p, h)).collect();
    let choices: Vec<Action> = match dev {
        Some(d) => g.allowed(v, d).to_vec(),
        None => vec![base[0]],
    };
    let mut best: Option<(Vec<BigRational>, History)> = None;
    for c in choices {
        let mut m = base.clone();
        if let Some(d) = dev {
            m[d] = c;
        }
        let m = Move(m);
        let t = g.step(v, &m).map_err(|_| OracleError::Disallowed)?;
        let r = best_outcome(g, profile, &h.extended(m, t), dev, left - 1)?;
        let better = match (&best, dev) {
            (None, _) => true,
            (Some(b), Some(d)) => r.0[d] > b.0[d],
            (Some(_), None) => false,
        };
        if better {
            best = Some(r);
        }
    }
    Ok(best.unwrap())
}

/// Exact Nash equilibrium check for games whose plays are absorbed within
/// `d.max_depth` steps: information compatibility over all histories, then
/// every deviation of every player. Deviations need not be compatible.
pub fn check_profile_absorbing(
    g: &Game,
    profile: &dyn Fn(Player, &History) -> Action,
    d: &DepthBudget,
) -> Result<ProfileVerdict, OracleError> {
    let hs = enumerate_histories(g, d)?;
    let mut seen: HashMap<(Player, Proj), (Action, &History)> = HashMap::new();
    for h in &hs {
        for p in 0..g.n_players() {
            let a = profile(p, h);
            if !g.allowed(h.last(), p).contains(&a) {
                return Ok(ProfileVerdict::Disallowed { player: p, history: h.clone() });
            }
            match seen.get(&(p, proj(g, h, p))) {
                Some((b, h2)) if *b != a => {
                    return Ok(ProfileVerdict::InfoIncompatible { player: p, h1: (*h2).clone(), h2: h.clone() })
                }
                Some(_) => {}
                None => {
                    seen.insert((p, proj(g, h, p)), (a, h));
                }
            }
        }
    }
    let root = History::new(g.initial);
    let (main, _) = best_outcome(g, profile, &root, None, d.max_depth)?;
    for p in 0..g.n_players() {
        let (best, h) = best_outcome(g, profile, &root, Some(p), d.max_depth)?;
        if best[p] > main[p] {
            return Ok(ProfileVerdict::ProfitableDeviation { player: p, history: h, payoff: best[p].clone() });
        }
    }
    Ok(ProfileVerdict::Equilibrium { payoff: main })
}

/// Payoffs of all pure Nash equilibria of an absorbing game, by enumerating
/// every information-compatible profile on histories shorter than
/// `d.max_depth`.
pub fn enumerate_ne_payoffs_absorbing(g: &Game, d: &DepthBudget) -> Result<BTreeSet<Vec<BigRational>>, OracleError> {
    let shorter = DepthBudget { max_depth: d.max_depth.saturating_sub(1), max_nodes: d.max_nodes };
    let hs = enumerate_histories(g, &shorter)?;
    let mut infosets: Vec<(Player, Proj)> = Vec::new();
    let mut choices: Vec<Vec<Action>> = Vec::new();
    let mut index: HashMap<(Player, Proj), usize> = HashMap::new();
    for h in &hs {
        if absorbing(g, h.last()).is_some() {
            continue;
        }
        for p in 0..g.n_players() {
            let key = (p, proj(g, h, p));
            let allowed = g.allowed(h.last(), p);
            match index.get(&key) {
                Some(&i) => choices[i].retain(|a| allowed.contains(a)),
                None => {
                    index.insert(key.clone(), infosets.len());
                    infosets.push(key);
                    choices.push(allowed.to_vec());
                }
            }
        }
    }
    let total: usize =
        choices.iter().map(|c| c.len()).try_fold(1usize, |acc, n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if total > d.max_nodes.saturating_mul(64) {
        return Err(OracleError::BudgetExceeded);
    }
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(BTreeSet::new());
    }
    let mut pick = vec![0usize; choices.len()];
    let mut out = BTreeSet::new();
    loop {
        let table: &Vec<usize> = &pick;
        let profile = |p: Player, h: &History| -> Action {
            match index.get(&(p, proj(g, h, p))) {
                Some(&i) => choices[i][table[i]],
                None => g.allowed(h.last(), p)[0],
            }
        };
        let root = History::new(g.initial);
        let (main, _) = best_outcome(g, &profile, &root, None, d.max_depth)?;
        let mut ok = true;
        for p in 0..g.n_players() {
            if best_outcome(g, &profile, &root, Some(p), d.max_depth)?.0[p] > main[p] {
                ok = false;
                break;
            }
        }
        if ok {
            out.insert(main);
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
