use num_bigint::BigInt;
use num_rational::BigRational;

use super::OracleError;

/// One-dimensional mean-payoff arena without dead ends.
#[derive(Clone, Debug)]
pub struct OMpArena {
    pub eve: Vec<bool>,
    pub succ: Vec<Vec<(usize, i64)>>,
}

fn strategies(g: &OMpArena, owner: bool) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for v in 0..g.eve.len() {
        let k = if g.eve[v] == owner { g.succ[v].len() } else { 1 };
        out = out.into_iter().flat_map(|pre| (0..k).map(move |c| [pre.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Mean payoff of the lasso followed from `s` when each node takes
/// successor `pick[v]`.
fn play_value(g: &OMpArena, s: usize, pick: &dyn Fn(usize) -> usize) -> BigRational {
    let mut at = vec![usize::MAX; g.eve.len()];
    let mut ws = Vec::new();
    let mut v = s;
    while at[v] == usize::MAX {
        at[v] = ws.len();
        let (t, w) = g.succ[v][pick(v)];
        ws.push(w);
        v = t;
    }
    let cyc = &ws[at[v]..];
    BigRational::new(BigInt::from(cyc.iter().sum::<i64>()), BigInt::from(cyc.len()))
}

/// Value of `s`: the best Eve memoryless strategy against the worst Adam
/// memoryless reply, both enumerated.
pub fn brute_mp_value(g: &OMpArena, s: usize, max_profiles: usize) -> Result<BigRational, OracleError> {
    if g.succ.iter().any(|o| o.is_empty()) {
        return Err(OracleError::NotAbsorbing);
    }
    let (es, as_) = (strategies(g, true), strategies(g, false));
    if es.len().saturating_mul(as_.len()) > max_profiles {
        return Err(OracleError::BudgetExceeded);
    }
    let value = es
        .iter()
        .map(|se| as_.iter().map(|sa| play_value(g, s, &|v| if g.eve[v] { se[v] } else { sa[v] })).min().unwrap())
        .max()
        .unwrap();
    Ok(value)
}
