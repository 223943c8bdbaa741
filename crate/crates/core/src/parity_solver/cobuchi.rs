use super::{Arena, ParityError};
use crate::bits::Bits;

/// Eve's region for "reach a winning sink, or eventually avoid every bad
/// node" while avoiding losing sinks. The bad sets of all dimensions are
/// merged into one.
pub fn solve_cobuchi_union(arena: &Arena, bad: &[Bits]) -> Result<Bits, ParityError> {
    arena.validate()?;
    let n = arena.len();
    if bad.iter().any(|b| b.capacity() != n) {
        return Err(ParityError::Malformed("bad set capacity mismatch".into()));
    }
    let all = Bits::full(n);
    let pred = arena.preds();
    let bad = bad.iter().fold(Bits::empty(n), |acc, b| acc.union(b));
    let sinks = Bits::from_fn(n, |v| arena.sink_value(v).is_some());
    let mut x = Bits::from_fn(n, |v| arena.sink_value(v) == Some(true));
    loop {
        x = arena.attractor(&pred, &all, &x, true, None);
        let mut y = all.minus(&bad).minus(&sinks).minus(&x);
        loop {
            let ok = y.union(&x);
            let next = Bits::from_fn(n, |v| {
                y.get(v) && {
                    let mv = arena.moves(v);
                    if arena.eve[v] {
                        mv.iter().any(|&w| ok.get(w))
                    } else {
                        mv.iter().all(|&w| ok.get(w))
                    }
                }
            });
            if next == y {
                break;
            }
            y = next;
        }
        let grown = arena.attractor(&pred, &all, &x.union(&y), true, None);
        if grown == x {
            return Ok(x);
        }
        x = grown;
    }
}
