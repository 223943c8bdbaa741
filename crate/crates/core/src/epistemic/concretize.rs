use num_rational::BigRational;

use super::{EpistemicGame, Owner, Situation};
use crate::game_model::{Game, History, Move, Signal};

/// `s_0 · (s_0, M_0) · β_0 · s_1 …`, stored as Adam states and signals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpiHistory {
    pub start: usize,
    pub steps: Vec<(usize, Signal)>,
}

impl EpiHistory {
    pub fn new(start: usize) -> Self {
        EpiHistory { start, steps: Vec::new() }
    }

    /// Eve states `s_0 … s_k`.
    pub fn states(&self, e: &EpistemicGame) -> Vec<usize> {
        let mut out = vec![self.start];
        for &(a, beta) in &self.steps {
            out.push(e.next(a, beta).expect("signal allowed"));
        }
        out
    }

    pub fn last(&self, e: &EpistemicGame) -> usize {
        *self.states(e).last().unwrap()
    }

    pub fn validate(&self, e: &EpistemicGame) -> bool {
        let mut cur = self.start;
        for &(a, beta) in &self.steps {
            if !e.eve_succ[cur].contains(&a) {
                return false;
            }
            match e.next(a, beta) {
                Some(t) => cur = t,
                None => return false,
            }
        }
        true
    }
}

/// Epistemic play `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpiLasso {
    pub prefix: EpiHistory,
    pub cycle: Vec<(usize, Signal)>,
}

/// `concrete(H)` split into the ⊥-class and one class per player. Entries of
/// a player class carry their deviation index `i_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concretization {
    pub bot: Option<History>,
    pub classes: Vec<Vec<(History, usize)>>,
}

impl Concretization {
    pub fn all(&self) -> Vec<&History> {
        let mut out: Vec<&History> = self.bot.iter().collect();
        for c in &self.classes {
            out.extend(c.iter().map(|x| &x.0));
        }
        out
    }
}

fn suggested<'a>(g: &'a Game, e: &EpistemicGame, a: usize, sit: Situation) -> Option<&'a Move> {
    let ad = &e.adam[a];
    let s = &e.eve[ad.eve];
    s.situations().iter().position(|x| *x == sit).map(|i| &g.steps(sit.v)[ad.suggestion.0[i] as usize].mv)
}

/// Forward enumeration of the concretizations of `h`.
pub fn concretize(g: &Game, e: &EpistemicGame, h: &EpiHistory) -> Concretization {
    let n = g.n_players();
    let mut bot: Option<History> = (e.eve[h.start].bot == Some(g.initial)).then(|| History::new(g.initial));
    let mut classes: Vec<Vec<(History, usize)>> = vec![Vec::new(); n];
    for (i, &(a, beta)) in h.steps.iter().enumerate() {
        let mut next_classes: Vec<Vec<(History, usize)>> = vec![Vec::new(); n];
        for (p, class) in classes.iter().enumerate() {
            for (hist, i0) in class {
                let v = hist.last();
                let Some(sug) = suggested(g, e, a, Situation { v, owner: Some(p) }) else { continue };
                for st in g.steps(v) {
                    if st.signal == beta && st.mv.same_except(sug, p) {
                        next_classes[p].push((hist.extended(st.mv.clone(), st.target), *i0));
                    }
                }
            }
        }
        let mut next_bot = None;
        if let Some(hist) = &bot {
            let v = hist.last();
            let owner: Owner = None;
            if let Some(sug) = suggested(g, e, a, Situation { v, owner }) {
                let mid = g.move_id(v, sug).unwrap();
                let main = &g.steps(v)[mid];
                if main.signal == beta {
                    next_bot = Some(hist.extended(main.mv.clone(), main.target));
                }
                for st in g.steps(v) {
                    if st.signal != beta || (st.signal == main.signal && st.target == main.target) {
                        continue;
                    }
                    for p in 0..n {
                        if st.mv.of(p) != sug.of(p) && st.mv.same_except(sug, p) {
                            next_classes[p].push((hist.extended(st.mv.clone(), st.target), i));
                        }
                    }
                }
            }
        }
        bot = next_bot;
        classes = next_classes;
    }
    Concretization { bot, classes }
}

/// `payoff′(R)`: the payoff of any concretization, read off the cycle's
/// signals.
pub fn lift_payoff(g: &Game, r: &EpiLasso) -> Vec<BigRational> {
    let sigs: Vec<Signal> = r.cycle.iter().map(|x| x.1).collect();
    g.payoffs.iter().map(|spec| spec.value_of_cycle(&sigs)).collect()
}
