use super::{Action, Game, GameError, Move, Player, Signal, Vertex};

/// `v_0 · m_0 · v_1 … m_{k-1} · v_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct History {
    pub start: Vertex,
    pub steps: Vec<(Move, Vertex)>,
}

impl History {
    pub fn new(start: Vertex) -> Self {
        History { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Vertex {
        self.steps.last().map(|s| s.1).unwrap_or(self.start)
    }

    /// Vertex after `i` steps.
    pub fn vertex(&self, i: usize) -> Vertex {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].1
        }
    }

    pub fn push(&mut self, m: Move, v: Vertex) {
        self.steps.push((m, v));
    }

    pub fn extended(&self, m: Move, v: Vertex) -> Self {
        let mut h = self.clone();
        h.push(m, v);
        h
    }

    pub fn validate(&self, g: &Game) -> Result<(), GameError> {
        let mut cur = self.start;
        if cur >= g.n_vertices() {
            return Err(GameError::Semantic("history starts outside the game".into()));
        }
        for (m, v) in &self.steps {
            let t = g.step(cur, m)?;
            if t != *v {
                return Err(GameError::Semantic(format!(
                    "history step {} from {} does not lead to {}",
                    g.fmt_move(m),
                    g.vertices[cur],
                    g.vertices[*v]
                )));
            }
            cur = t;
        }
        Ok(())
    }

    pub fn signals(&self, g: &Game) -> Vec<Signal> {
        self.steps.iter().map(|(m, v)| g.signal_of(m, *v).expect("history step")).collect()
    }

    pub fn own_actions(&self, p: Player) -> Vec<Action> {
        self.steps.iter().map(|(m, _)| m.of(p)).collect()
    }
}

/// `π_A(h) = v_0 · (m_0(A), ℓ(m_0, v_1)) · …`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Projection {
    pub start: Vertex,
    pub obs: Vec<(Action, Signal)>,
}

/// The play `prefix · cycle^ω`. The cycle starts and ends at `prefix.last()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: History,
    pub cycle: Vec<(Move, Vertex)>,
}

impl Lasso {
    pub fn validate(&self, g: &Game) -> Result<(), GameError> {
        self.prefix.validate(g)?;
        if self.cycle.is_empty() {
            return Err(GameError::Semantic("lasso cycle is empty".into()));
        }
        let mut h = History::new(self.prefix.last());
        h.steps = self.cycle.clone();
        h.validate(g)?;
        if h.last() != self.prefix.last() {
            return Err(GameError::Semantic("lasso cycle is not closed".into()));
        }
        Ok(())
    }

    pub fn cycle_signals(&self, g: &Game) -> Vec<Signal> {
        self.cycle.iter().map(|(m, v)| g.signal_of(m, *v).expect("lasso step")).collect()
    }

    /// Same play with the cycle started one step later.
    pub fn rotated(&self) -> Lasso {
        let mut prefix = self.prefix.clone();
        let first = self.cycle[0].clone();
        prefix.push(first.0.clone(), first.1);
        let mut cycle = self.cycle[1..].to_vec();
        cycle.push(first);
        Lasso { prefix, cycle }
    }

    pub fn unrolled(&self, k: usize) -> Lasso {
        let mut cycle = Vec::with_capacity(self.cycle.len() * k);
        for _ in 0..k {
            cycle.extend(self.cycle.iter().cloned());
        }
        Lasso { prefix: self.prefix.clone(), cycle }
    }
}
