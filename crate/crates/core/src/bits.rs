//! Dense node sets.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    n: usize,
}

impl Bits {
    pub fn empty(n: usize) -> Self {
        Bits { words: vec![0; n.div_ceil(64)], n }
    }

    pub fn full(n: usize) -> Self {
        let mut b = Bits { words: vec![!0; n.div_ceil(64)], n };
        b.trim();
        b
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut b = Bits::empty(n);
        for i in 0..n {
            if f(i) {
                b.set(i);
            }
        }
        b
    }

    fn trim(&mut self) {
        if self.n % 64 != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << (self.n % 64)) - 1;
            }
        }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn unset(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn union(&self, o: &Bits) -> Bits {
        Bits { words: self.words.iter().zip(&o.words).map(|(a, b)| a | b).collect(), n: self.n }
    }

    pub fn inter(&self, o: &Bits) -> Bits {
        Bits { words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect(), n: self.n }
    }

    pub fn minus(&self, o: &Bits) -> Bits {
        Bits { words: self.words.iter().zip(&o.words).map(|(a, b)| a & !b).collect(), n: self.n }
    }

    pub fn is_subset(&self, o: &Bits) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }
}
