//! Nash equilibria of concurrent games with public signals, decided on the
//! epistemic game abstraction.

pub mod bits;
pub mod epistemic;
pub mod fixtures;
pub mod game_model;
pub mod lp;
pub mod mp_engine;
pub mod ne_search;
pub mod oracle;
pub mod parity_solver;
pub mod random;
pub mod value_engine;
pub mod witness;
