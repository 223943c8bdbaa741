//! Brute-force reference implementations for cross-checks. Nothing here
//! calls the production solvers.

mod allow;
mod dual;
mod histories;
mod lemma3;
mod mp;
mod naive;
mod profile;

pub use allow::{brute_adam_signals, brute_eve_moves, brute_successor, brute_successors, OSit, OState, OSuggestion};
pub use dual::{dual_adam_region, OParityArena};
pub use histories::enumerate_histories;
pub use lemma3::{verify_lemma3, Lemma3Counterexample};
pub use mp::{brute_mp_value, OMpArena};
pub use naive::{naive_eve_region, naive_winning_fixpoint};
pub use profile::{check_profile_absorbing, enumerate_ne_payoffs_absorbing, ProfileVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthBudget {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl DepthBudget {
    pub fn new(max_depth: usize) -> Self {
        DepthBudget { max_depth, max_nodes: 5_000_000 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exceeded")]
    BudgetExceeded,
    #[error("game is not absorbing within the depth budget")]
    NotAbsorbing,
    #[error("profile plays a disallowed move")]
    Disallowed,
}
