use std::fmt;

use crate::game_model::{Player, Vertex};

/// Bitset of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VSet(Vec<u64>);

impl VSet {
    pub fn empty(n: usize) -> Self {
        VSet(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.get(v / 64).is_some_and(|w| w & (1 << (v % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| i * 64 + b))
    }
}

/// Set of players as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlayerSet(pub u32);

impl PlayerSet {
    pub const EMPTY: PlayerSet = PlayerSet(0);

    pub fn all(n: usize) -> Self {
        PlayerSet(((1u64 << n) - 1) as u32)
    }

    pub fn single(p: Player) -> Self {
        PlayerSet(1 << p)
    }

    pub fn contains(self, p: Player) -> bool {
        self.0 & (1 << p) != 0
    }

    pub fn with(self, p: Player) -> Self {
        PlayerSet(self.0 | (1 << p))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: PlayerSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn inter(self, other: PlayerSet) -> Self {
        PlayerSet(self.0 & other.0)
    }

    pub fn minus(self, other: PlayerSet) -> Self {
        PlayerSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Player> {
        (0..32).filter(move |p| self.0 & (1 << p) != 0)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = PlayerSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur | !full).wrapping_add(1) & full) };
            Some(PlayerSet(cur))
        })
    }
}

impl fmt::Display for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vset_basics() {
        let mut s = VSet::empty(70);
        assert!(s.is_empty());
        s.insert(3);
        s.insert(65);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 65]);
        assert_eq!(s.len(), 2);
        assert!(s.contains(65) && !s.contains(64));
    }

    #[test]
    fn subsets_enumerate_powerset() {
        let s = PlayerSet(0b101);
        let subs: Vec<u32> = s.subsets().map(|x| x.0).collect();
        assert_eq!(subs, vec![0, 1, 4, 5]);
        assert_eq!(PlayerSet::EMPTY.subsets().count(), 1);
        assert_eq!(PlayerSet::all(3).subsets().count(), 8);
    }
}
