use super::{DepthBudget, OracleError};
use crate::game_model::{Game, History};

/// Every history of length at most `d.max_depth` from the initial vertex,
/// shortest first.
pub fn enumerate_histories(g: &Game, d: &DepthBudget) -> Result<Vec<History>, OracleError> {
    let mut out = vec![History::new(g.initial)];
    let mut frontier = vec![History::new(g.initial)];
    for _ in 0..d.max_depth {
        let mut next = Vec::new();
        for h in &frontier {
            let v = h.last();
            for st in g.steps(v) {
                next.push(h.extended(st.mv.clone(), st.target));
            }
        }
        if out.len() + next.len() > d.max_nodes {
            return Err(OracleError::BudgetExceeded);
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}
