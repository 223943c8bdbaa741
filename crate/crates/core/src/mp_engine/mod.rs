//! Constrained existence of Nash equilibria for mean-payoff objectives,
//! reduced to a multi-dimensional mean-payoff game on the epistemic game.

mod query;
mod threshold;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::epistemic::{EpiLasso, EpistemicError, EpistemicGame};
use crate::game_model::{Game, PayoffKind};

pub use query::{check_mp, decide_mp, decide_mp_with, polyhedron_query, MpOptions, MpVerdict, QueryOutcome};
pub use threshold::{
    solve_threshold, solve_threshold_with, MpArena, MpKind, ThresholdSolution, DEFAULT_STRATEGY_BUDGET,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MpError {
    #[error(transparent)]
    Build(#[from] EpistemicError),
    #[error("payoffs must all be mean payoffs")]
    NotMeanPayoff,
    #[error("more than {0} Adam strategies to enumerate")]
    Budget(usize),
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("invalid thresholds: {0}")]
    Query(String),
}

/// Weights on the epistemic game: `3n` dimensions for `n` players. Eve's
/// edges weigh zero; `adam[a][k]` weighs the `k`-th successor of Adam
/// state `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpTransform {
    pub n_players: usize,
    pub iota: Vec<i8>,
    pub kinds: Vec<MpKind>,
    pub w_max: i64,
    pub adam: Vec<Vec<Vec<i64>>>,
}

impl MpTransform {
    pub fn dims(&self) -> usize {
        3 * self.n_players
    }

    pub fn arena(&self, e: &EpistemicGame) -> MpArena {
        let ne = e.eve.len();
        let zero = vec![0; self.dims()];
        let mut succ: Vec<Vec<(usize, Vec<i64>)>> =
            e.eve_succ.iter().map(|out| out.iter().map(|&a| (ne + a, zero.clone())).collect()).collect();
        for (a, st) in e.adam.iter().enumerate() {
            succ.push(st.succ.iter().zip(&self.adam[a]).map(|(&(_, t), w)| (t, w.clone())).collect());
        }
        let mut eve = vec![true; ne];
        eve.resize(ne + e.adam.len(), false);
        MpArena { eve, succ, kinds: self.kinds.clone() }
    }

    pub fn weight(&self, e: &EpistemicGame, a: usize, beta: usize) -> &[i64] {
        let k = e.adam[a].succ.iter().position(|x| x.0 == beta).expect("signal offered by the Adam state");
        &self.adam[a][k]
    }

    /// Mean payoff of a lasso in every dimension; each step of the lasso
    /// is an Eve edge followed by an Adam edge.
    pub fn lasso_values(&self, e: &EpistemicGame, l: &EpiLasso) -> Vec<BigRational> {
        let mut sum = vec![0i64; self.dims()];
        for &(a, beta) in &l.cycle {
            for (s, w) in sum.iter_mut().zip(self.weight(e, a, beta)) {
                *s += w;
            }
        }
        let len = BigInt::from(2 * l.cycle.len());
        sum.into_iter().map(|s| BigRational::new(s.into(), len.clone())).collect()
    }
}

/// The three weight functions per player.
pub fn transform_weights(g: &Game, e: &EpistemicGame) -> Result<MpTransform, MpError> {
    if !g.is_mean_payoff() {
        return Err(MpError::NotMeanPayoff);
    }
    let n = g.n_players();
    let iota: Vec<i8> = g.payoffs.iter().map(|s| if s.kind == PayoffKind::MpLimsup { 1 } else { -1 }).collect();
    let kind = |i: i8| if i > 0 { MpKind::Limsup } else { MpKind::Liminf };
    let mut kinds: Vec<MpKind> = iota.iter().map(|&i| kind(i)).collect();
    kinds.extend(iota.iter().map(|&i| kind(-i)));
    kinds.extend(iota.iter().map(|&i| kind(-i)));
    let w = g.max_abs_weight();
    let adam = e
        .adam
        .iter()
        .map(|st| {
            let suspects = e.eve[st.eve].suspects();
            st.succ
                .iter()
                .map(|&(beta, t)| {
                    let mut v = vec![0i64; 3 * n];
                    for i in 0..n {
                        let wb = g.payoffs[i].weight[beta];
                        if e.eve[t].is_bot() {
                            v[i] = 2 * wb;
                            v[n + i] = -2 * wb;
                            v[2 * n + i] = -2 * wb;
                        } else {
                            v[i] = 2 * w;
                            v[n + i] = 2 * w;
                            v[2 * n + i] = if suspects.contains(i) { -2 * wb } else { 2 * w };
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    Ok(MpTransform { n_players: n, iota, kinds, w_max: w, adam })
}

/// Whether Eve ensures every transformed mean payoff reaches `u` from the
/// initial state.
pub fn threshold_game(e: &EpistemicGame, t: &MpTransform, u: &[BigRational]) -> Result<bool, MpError> {
    Ok(solve_threshold(&t.arena(e), u, DEFAULT_STRATEGY_BUDGET)?.win[e.initial()])
}

#[cfg(test)]
mod tests;
