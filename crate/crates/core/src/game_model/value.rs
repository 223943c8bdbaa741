use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A rational extended with ±∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    NegInf,
    Fin(BigRational),
    PosInf,
}

impl ExtRat {
    pub fn int(n: i64) -> Self {
        ExtRat::Fin(BigRational::from_integer(n.into()))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRat::Fin(q) => Some(q),
            _ => None,
        }
    }

    /// Clamps into `[lo, hi]`, always finite.
    pub fn clip(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        match self {
            ExtRat::NegInf => lo.clone(),
            ExtRat::PosInf => hi.clone(),
            ExtRat::Fin(q) if q < lo => lo.clone(),
            ExtRat::Fin(q) if q > hi => hi.clone(),
            ExtRat::Fin(q) => q.clone(),
        }
    }

    pub fn le_rat(&self, q: &BigRational) -> bool {
        match self {
            ExtRat::NegInf => true,
            ExtRat::Fin(x) => x <= q,
            ExtRat::PosInf => false,
        }
    }

    pub fn ge_rat(&self, q: &BigRational) -> bool {
        match self {
            ExtRat::NegInf => false,
            ExtRat::Fin(x) => x >= q,
            ExtRat::PosInf => true,
        }
    }
}

impl From<BigRational> for ExtRat {
    fn from(q: BigRational) -> Self {
        ExtRat::Fin(q)
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRat::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = i.starts_with('-');
        let whole: BigInt = if i.is_empty() || i == "-" || i == "+" { BigInt::zero() } else { i.parse().ok()? };
        let scale = BigInt::from(10u32).pow(f.len() as u32);
        let frac: BigInt = f.parse().ok()?;
        let frac = if neg { -frac } else { frac };
        return Some(BigRational::new(whole * &scale + frac, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl FromStr for ExtRat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtRat::PosInf),
            "-inf" => Ok(ExtRat::NegInf),
            t => parse_rational(t).map(ExtRat::Fin).ok_or_else(|| format!("not an extended rational: {s:?}")),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => write!(f, "-inf"),
            ExtRat::PosInf => write!(f, "inf"),
            ExtRat::Fin(q) => write!(f, "{}", fmt_rational(q)),
        }
    }
}

/// One extended rational per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PayoffVector(pub Vec<ExtRat>);

impl PayoffVector {
    pub fn parse(s: &str, n: usize) -> Result<Self, String> {
        let v: Vec<ExtRat> = s.split(',').map(str::parse).collect::<Result<_, _>>()?;
        if v.len() != n {
            return Err(format!("expected {n} values, got {}", v.len()));
        }
        Ok(PayoffVector(v))
    }

    pub fn constant(n: usize, x: ExtRat) -> Self {
        PayoffVector(vec![x; n])
    }

    pub fn from_rationals(v: &[BigRational]) -> Self {
        PayoffVector(v.iter().cloned().map(ExtRat::Fin).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
