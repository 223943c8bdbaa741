//! Concurrent games with a public signal.

mod history;
mod json;
mod payoff;
mod value;

use std::collections::HashMap;
use std::fmt;

pub use history::{History, Lasso, Projection};
pub use json::{game_to_json, parse_game};
pub use payoff::{payoff_of_lasso, PayoffKind, PayoffSpec};
pub use value::{fmt_rational, parse_rational, ExtRat, PayoffVector};

pub type Vertex = usize;
pub type Player = usize;
pub type Action = usize;
pub type Signal = usize;

/// One action per player, indexed by player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move(pub Vec<Action>);

impl Move {
    pub fn of(&self, p: Player) -> Action {
        self.0[p]
    }

    /// `m(-p) = other(-p)`.
    pub fn same_except(&self, other: &Move, p: Player) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).enumerate().all(|(q, (a, b))| q == p || a == b)
    }

    pub fn with(&self, p: Player, a: Action) -> Move {
        let mut m = self.clone();
        m.0[p] = a;
        m
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GameError {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("move {mv} is not allowed at vertex {vertex}")]
    Disallowed { vertex: String, mv: String },
    #[error("no allowed step plays {mv} into {target}")]
    NoSuchStep { mv: String, target: String },
}

fn semantic<T>(msg: impl Into<String>) -> Result<T, GameError> {
    Err(GameError::Semantic(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub mv: Move,
    pub target: Vertex,
    pub signal: Signal,
}

#[derive(Clone, Debug)]
pub struct Game {
    pub players: Vec<String>,
    pub vertices: Vec<String>,
    pub actions: Vec<String>,
    pub signals: Vec<String>,
    pub initial: Vertex,
    pub payoffs: Vec<PayoffSpec>,
    allowed: Vec<Vec<Vec<Action>>>,
    steps: Vec<Vec<Step>>,
    index: Vec<HashMap<Move, usize>>,
}

/// All tuples picking one entry from each list, first list most significant.
pub fn cartesian(lists: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for &x in l {
                let mut t = prefix.clone();
                t.push(x);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

impl Game {
    /// Builds a game from explicit tables. `table(v, m)` gives the target and
    /// signal of every allowed move.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        players: Vec<String>,
        vertices: Vec<String>,
        actions: Vec<String>,
        signals: Vec<String>,
        initial: Vertex,
        mut allowed: Vec<Vec<Vec<Action>>>,
        mut table: impl FnMut(Vertex, &Move) -> Option<(Vertex, Signal)>,
        payoffs: Vec<PayoffSpec>,
    ) -> Result<Game, GameError> {
        let (nv, np) = (vertices.len(), players.len());
        if np == 0 {
            return semantic("game has no players");
        }
        if nv == 0 {
            return semantic("game has no vertices");
        }
        if initial >= nv {
            return semantic("initial vertex out of range");
        }
        if allowed.len() != nv {
            return semantic("allowed table does not cover every vertex");
        }
        if payoffs.len() != np {
            return semantic("one payoff specification per player is required");
        }
        for (v, row) in allowed.iter_mut().enumerate() {
            if row.len() != np {
                return semantic(format!("allowed actions at {} do not list every player", vertices[v]));
            }
            for (p, acts) in row.iter_mut().enumerate() {
                acts.sort_unstable();
                acts.dedup();
                if acts.is_empty() {
                    return semantic(format!("empty allowed set for {} at {}", players[p], vertices[v]));
                }
                if acts.iter().any(|&a| a >= actions.len()) {
                    return semantic("allowed action out of range");
                }
            }
        }
        for (p, spec) in payoffs.iter().enumerate() {
            spec.validate(signals.len()).map_err(|e| GameError::Semantic(format!("payoff of {}: {e}", players[p])))?;
        }
        let mut steps = Vec::with_capacity(nv);
        let mut index = Vec::with_capacity(nv);
        let mut labels: HashMap<(Move, Vertex), Signal> = HashMap::new();
        for v in 0..nv {
            let mut vs = Vec::new();
            let mut vi = HashMap::new();
            for t in cartesian(&allowed[v]) {
                let mv = Move(t);
                let Some((target, signal)) = table(v, &mv) else {
                    return semantic(format!("missing transition from {} on {}", vertices[v], fmt_move(&actions, &mv)));
                };
                if target >= nv || signal >= signals.len() {
                    return semantic("transition target or signal out of range");
                }
                if let Some(&prev) = labels.get(&(mv.clone(), target)) {
                    if prev != signal {
                        return semantic(format!(
                            "signal of {} into {} is not a function of the move and target",
                            fmt_move(&actions, &mv),
                            vertices[target]
                        ));
                    }
                }
                labels.insert((mv.clone(), target), signal);
                vi.insert(mv.clone(), vs.len());
                vs.push(Step { mv, target, signal });
            }
            steps.push(vs);
            index.push(vi);
        }
        Ok(Game { players, vertices, actions, signals, initial, payoffs, allowed, steps, index })
    }

    pub fn n_players(&self) -> usize {
        self.players.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn allowed(&self, v: Vertex, p: Player) -> &[Action] {
        &self.allowed[v][p]
    }

    pub fn is_allowed(&self, v: Vertex, m: &Move) -> bool {
        self.index[v].contains_key(m)
    }

    /// Allowed steps at `v` in lexicographic move order.
    pub fn steps(&self, v: Vertex) -> &[Step] {
        &self.steps[v]
    }

    pub fn move_id(&self, v: Vertex, m: &Move) -> Option<usize> {
        self.index[v].get(m).copied()
    }

    pub fn step(&self, v: Vertex, m: &Move) -> Result<Vertex, GameError> {
        match self.move_id(v, m) {
            Some(i) => Ok(self.steps[v][i].target),
            None => Err(GameError::Disallowed { vertex: self.vertices[v].clone(), mv: self.fmt_move(m) }),
        }
    }

    /// The public signal `ℓ(m, target)`.
    pub fn signal_of(&self, m: &Move, target: Vertex) -> Result<Signal, GameError> {
        for v in 0..self.n_vertices() {
            if let Some(i) = self.move_id(v, m) {
                let s = &self.steps[v][i];
                if s.target == target {
                    return Ok(s.signal);
                }
            }
        }
        Err(GameError::NoSuchStep {
            mv: self.fmt_move(m),
            target: self.vertices.get(target).cloned().unwrap_or_else(|| target.to_string()),
        })
    }

    pub fn project(&self, h: &History, p: Player) -> Projection {
        Projection {
            start: h.start,
            obs: h.steps.iter().map(|(m, v)| (m.of(p), self.signal_of(m, *v).expect("history step"))).collect(),
        }
    }

    /// `h ∼_p h2`.
    pub fn indistinguishable(&self, h: &History, h2: &History, p: Player) -> bool {
        self.project(h, p) == self.project(h2, p)
    }

    pub fn is_boolean(&self) -> bool {
        self.payoffs.iter().all(|s| s.kind.is_boolean())
    }

    pub fn is_mean_payoff(&self) -> bool {
        self.payoffs.iter().all(|s| !s.kind.is_boolean())
    }

    /// Largest absolute signal weight over all players.
    pub fn max_abs_weight(&self) -> i64 {
        self.payoffs.iter().flat_map(|s| s.weight.iter()).map(|w| w.abs()).max().unwrap_or(0)
    }

    pub fn vertex_id(&self, name: &str) -> Option<Vertex> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn player_id(&self, name: &str) -> Option<Player> {
        self.players.iter().position(|v| v == name)
    }

    pub fn action_id(&self, name: &str) -> Option<Action> {
        self.actions.iter().position(|v| v == name)
    }

    pub fn signal_id(&self, name: &str) -> Option<Signal> {
        self.signals.iter().position(|v| v == name)
    }

    /// Builds a move from action names given in player order.
    pub fn mv(&self, names: &[&str]) -> Move {
        Move(names.iter().map(|n| self.action_id(n).expect("unknown action")).collect())
    }

    pub fn fmt_move(&self, m: &Move) -> String {
        fmt_move(&self.actions, m)
    }
}

fn fmt_move(actions: &[String], m: &Move) -> String {
    let parts: Vec<&str> = m.0.iter().map(|&a| actions.get(a).map(|s| s.as_str()).unwrap_or("?")).collect();
    format!("<{}>", parts.join(","))
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}
