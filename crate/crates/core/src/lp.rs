//! Exact linear programming over the rationals: two-phase simplex with
//! Bland's rule on a dense tableau, variables implicitly nonnegative.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

#[derive(Clone, Debug, Default)]
pub struct Lp {
    n: usize,
    rows: Vec<(Vec<(usize, BigRational)>, Cmp, BigRational)>,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    z: Vec<BigRational>,
    banned: Vec<bool>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.z.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let nz: Vec<usize> = (0..self.z.len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            self.rows[r][j] *= &inv;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<BigRational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.z);
        self.basis[r] = c;
    }

    /// Maximizes the objective encoded in `z`; false when unbounded.
    fn run(&mut self) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..rhs).find(|&j| !self.banned[j] && self.z[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((b, q)) => ratio < *q || (ratio == *q && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn set_objective(&mut self, c: &[BigRational]) {
        self.z = c.to_vec();
        self.z.push(BigRational::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (zj, rj) in self.z.iter_mut().zip(row) {
                *zj -= cb * rj;
            }
        }
    }
}

impl Lp {
    pub fn new(n: usize) -> Self {
        Lp { n, rows: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, terms: impl IntoIterator<Item = (usize, BigRational)>, cmp: Cmp, rhs: BigRational) {
        let terms: Vec<_> = terms.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        assert!(terms.iter().all(|&(j, _)| j < self.n), "variable out of range");
        self.rows.push((terms, cmp, rhs));
    }

    /// Whether `x` satisfies every constraint and sign condition.
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.n
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(terms, cmp, b)| {
                let lhs: BigRational = terms.iter().map(|(j, a)| a * &x[*j]).sum();
                match cmp {
                    Cmp::Le => lhs <= *b,
                    Cmp::Ge => lhs >= *b,
                    Cmp::Eq => lhs == *b,
                }
            })
    }

    /// Phase one. Returns the tableau with artificial columns banned, or
    /// `None` when infeasible.
    fn phase_one(&self) -> Option<(Tableau, usize)> {
        let m = self.rows.len();
        let mut slack = 0;
        let mut art = 0;
        for (_, cmp, b) in &self.rows {
            let flip = b.is_negative();
            match (cmp, flip) {
                (Cmp::Eq, _) => art += 1,
                (Cmp::Le, false) | (Cmp::Ge, true) => slack += 1,
                _ => {
                    slack += 1;
                    art += 1;
                }
            }
        }
        let width = self.n + slack + art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut si, mut ai) = (self.n, self.n + slack);
        for (terms, cmp, b) in &self.rows {
            let flip = b.is_negative();
            let sign = if flip { -BigRational::one() } else { BigRational::one() };
            let mut row = vec![BigRational::zero(); width + 1];
            for (j, a) in terms {
                row[*j] += &sign * a;
            }
            row[width] = &sign * b;
            let cmp = match (cmp, flip) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => *c,
            };
            match cmp {
                Cmp::Le => {
                    row[si] = BigRational::one();
                    basis.push(si);
                    si += 1;
                }
                Cmp::Ge => {
                    row[si] = -BigRational::one();
                    si += 1;
                    row[ai] = BigRational::one();
                    basis.push(ai);
                    ai += 1;
                }
                Cmp::Eq => {
                    row[ai] = BigRational::one();
                    basis.push(ai);
                    ai += 1;
                }
            }
            rows.push(row);
        }
        let first_art = self.n + slack;
        let mut t = Tableau { rows, basis, z: Vec::new(), banned: vec![false; width] };
        let c: Vec<BigRational> =
            (0..width).map(|j| if j >= first_art { -BigRational::one() } else { BigRational::zero() }).collect();
        t.set_objective(&c);
        t.run();
        if !t.z[width].is_zero() {
            return None;
        }
        for j in first_art..width {
            t.banned[j] = true;
        }
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Some((t, width))
    }

    fn extract(&self, t: &Tableau) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); self.n];
        let rhs = t.rhs();
        for (i, &b) in t.basis.iter().enumerate() {
            if b < self.n {
                x[b] = t.rows[i][rhs].clone();
            }
        }
        x
    }

    /// A basic feasible solution, if any.
    pub fn feasible_point(&self) -> Option<Vec<BigRational>> {
        self.phase_one().map(|(t, _)| self.extract(&t))
    }

    pub fn maximize(&self, c: &[BigRational]) -> LpOutcome {
        assert_eq!(c.len(), self.n);
        let Some((mut t, width)) = self.phase_one() else {
            return LpOutcome::Infeasible;
        };
        let mut full = c.to_vec();
        full.resize(width, BigRational::zero());
        t.set_objective(&full);
        if !t.run() {
            return LpOutcome::Unbounded;
        }
        let x = self.extract(&t);
        let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn lp2(rows: &[(i64, i64, Cmp, i64)]) -> Lp {
        let mut lp = Lp::new(2);
        for &(a, b, c, r) in rows {
            lp.add([(0, q(a)), (1, q(b))], c, q(r));
        }
        lp
    }

    #[test]
    fn small_optimum() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6.
        let lp = lp2(&[(1, 2, Cmp::Le, 4), (3, 1, Cmp::Le, 6)]);
        match lp.maximize(&[q(1), q(1)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![BigRational::new(8.into(), 5.into()), BigRational::new(6.into(), 5.into())]);
                assert_eq!(value, BigRational::new(14.into(), 5.into()));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(lp2(&[(1, 1, Cmp::Le, 1), (1, 1, Cmp::Ge, 2)]).maximize(&[q(0), q(0)]), LpOutcome::Infeasible);
        assert_eq!(lp2(&[(1, -1, Cmp::Le, 1)]).maximize(&[q(1), q(0)]), LpOutcome::Unbounded);
        assert!(lp2(&[(1, 0, Cmp::Ge, -3)]).feasible_point().is_some());
    }

    #[test]
    fn equalities_and_redundant_rows() {
        let lp = lp2(&[(1, 1, Cmp::Eq, 1), (2, 2, Cmp::Eq, 2), (1, -1, Cmp::Eq, 0)]);
        let x = lp.feasible_point().unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into()); 2]);
    }

    /// Brute force for two variables: a nonempty region inside the
    /// nonnegative quadrant has a vertex, found among pairwise line
    /// intersections.
    fn vertices(rows: &[(i64, i64, Cmp, i64)]) -> Vec<Vec<BigRational>> {
        let mut lines: Vec<(i64, i64, i64)> = rows.iter().map(|&(a, b, _, r)| (a, b, r)).collect();
        lines.push((1, 0, 0));
        lines.push((0, 1, 0));
        let mut out = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let x = BigRational::new((c1 * b2 - c2 * b1).into(), det.into());
                let y = BigRational::new((a1 * c2 - a2 * c1).into(), det.into());
                out.push(vec![x, y]);
            }
        }
        out
    }

    fn cmp_strategy() -> impl Strategy<Value = Cmp> {
        prop_oneof![Just(Cmp::Le), Just(Cmp::Ge), Just(Cmp::Eq)]
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            rows in prop::collection::vec((-3i64..=3, -3i64..=3, cmp_strategy(), -4i64..=4), 1..5),
            c in (-3i64..=3, -3i64..=3),
        ) {
            let mut rows = rows;
            rows.push((1, 0, Cmp::Le, 5));
            rows.push((0, 1, Cmp::Le, 5));
            let lp = lp2(&rows);
            let feasible: Vec<Vec<BigRational>> =
                vertices(&rows).into_iter().filter(|x| lp.satisfied_by(x)).collect();
            let cv = [q(c.0), q(c.1)];
            match lp.maximize(&cv) {
                LpOutcome::Infeasible => prop_assert!(feasible.is_empty()),
                LpOutcome::Unbounded => prop_assert!(false, "box makes the program bounded"),
                LpOutcome::Optimal { x, value } => {
                    prop_assert!(lp.satisfied_by(&x));
                    let best = feasible.iter().map(|v| &cv[0] * &v[0] + &cv[1] * &v[1]).max().unwrap();
                    prop_assert_eq!(value, best);
                }
            }
        }
    }
}
