use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Game, Lasso, Signal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PayoffKind {
    Buchi,
    #[serde(rename = "cobuchi")]
    CoBuchi,
    Parity,
    MpLiminf,
    MpLimsup,
}

impl PayoffKind {
    pub fn is_boolean(self) -> bool {
        matches!(self, PayoffKind::Buchi | PayoffKind::CoBuchi | PayoffKind::Parity)
    }
}

/// A payoff that reads only the public signal sequence.
///
/// Boolean kinds are stored as parity priorities, smallest priority seen
/// infinitely often wins when even. Büchi uses {0, 1}, co-Büchi {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffSpec {
    pub kind: PayoffKind,
    pub priority: Vec<u32>,
    pub weight: Vec<i64>,
}

impl PayoffSpec {
    pub fn buchi(n_signals: usize, accepting: &[Signal]) -> Self {
        let mut priority = vec![1; n_signals];
        for &s in accepting {
            priority[s] = 0;
        }
        PayoffSpec { kind: PayoffKind::Buchi, priority, weight: Vec::new() }
    }

    pub fn cobuchi(n_signals: usize, rejecting: &[Signal]) -> Self {
        let mut priority = vec![2; n_signals];
        for &s in rejecting {
            priority[s] = 1;
        }
        PayoffSpec { kind: PayoffKind::CoBuchi, priority, weight: Vec::new() }
    }

    pub fn parity(priority: Vec<u32>) -> Self {
        PayoffSpec { kind: PayoffKind::Parity, priority, weight: Vec::new() }
    }

    pub fn mp_liminf(weight: Vec<i64>) -> Self {
        PayoffSpec { kind: PayoffKind::MpLiminf, priority: Vec::new(), weight }
    }

    pub fn mp_limsup(weight: Vec<i64>) -> Self {
        PayoffSpec { kind: PayoffKind::MpLimsup, priority: Vec::new(), weight }
    }

    pub(crate) fn validate(&self, n_signals: usize) -> Result<(), String> {
        if self.kind.is_boolean() {
            if self.priority.len() != n_signals {
                return Err("priority map is not total on the signals".into());
            }
        } else if self.weight.len() != n_signals {
            return Err("weight map is not total on the signals".into());
        }
        Ok(())
    }

    /// Payoff of a play whose signals are eventually `cycle^ω`.
    pub fn value_of_cycle(&self, cycle: &[Signal]) -> BigRational {
        assert!(!cycle.is_empty(), "empty cycle");
        if self.kind.is_boolean() {
            let min = cycle.iter().map(|&s| self.priority[s]).min().unwrap();
            if min % 2 == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        } else {
            let sum: i64 = cycle.iter().map(|&s| self.weight[s]).sum();
            BigRational::new(BigInt::from(sum), BigInt::from(cycle.len()))
        }
    }
}

/// On a lasso liminf and limsup averages coincide with the cycle average.
pub fn payoff_of_lasso(spec: &PayoffSpec, lasso: &Lasso, g: &Game) -> BigRational {
    spec.value_of_cycle(&lasso.cycle_signals(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn mean_payoff_is_cycle_average() {
        let s = PayoffSpec::mp_liminf(vec![2, 0]);
        assert_eq!(s.value_of_cycle(&[0, 1]), r(1, 1));
        assert_eq!(PayoffSpec::mp_limsup(vec![1, 0]).value_of_cycle(&[0, 1, 1]), r(1, 3));
    }

    #[test]
    fn parity_minimum_decides() {
        let s = PayoffSpec::parity(vec![1, 2]);
        assert_eq!(s.value_of_cycle(&[0, 1]), r(0, 1));
        assert_eq!(s.value_of_cycle(&[1]), r(1, 1));
    }

    #[test]
    fn buchi_and_cobuchi() {
        let b = PayoffSpec::buchi(2, &[0]);
        assert_eq!(b.value_of_cycle(&[1]), r(0, 1));
        assert_eq!(b.value_of_cycle(&[1, 0]), r(1, 1));
        let c = PayoffSpec::cobuchi(2, &[0]);
        assert_eq!(c.value_of_cycle(&[1]), r(1, 1));
        assert_eq!(c.value_of_cycle(&[1, 0]), r(0, 1));
    }
}
