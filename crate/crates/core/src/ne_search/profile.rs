use crate::epistemic::EpistemicGame;
use crate::game_model::{Action, Game, History, Player};
use crate::witness::{StrategyGraph, Witness};

/// Finite-memory strategies read off Eve's strategy graph. Every player
/// tracks the graph node through the public signals; `actions[A][node]` is
/// `A`'s action in the suggestion at that node.
#[derive(Clone, Debug)]
pub struct Profile {
    pub graph: StrategyGraph,
    pub actions: Vec<Vec<Action>>,
}

impl Profile {
    /// Graph node reached after the signals of `h`, if the signals stay
    /// within the graph.
    pub fn track(&self, g: &Game, h: &History) -> Option<usize> {
        let mut node = 0;
        for (m, v) in &h.steps {
            let beta = g.signal_of(m, *v).ok()?;
            node = self.graph.nodes[node].next.iter().find(|x| x.0 == beta)?.1;
        }
        Some(node)
    }

    pub fn action(&self, g: &Game, p: Player, h: &History) -> Action {
        match self.track(g, h) {
            Some(node) => self.actions[p][node],
            None => g.allowed(h.last(), p)[0],
        }
    }
}

/// Player `A` plays what the suggestion prescribes for `A` at situations it
/// does not own; these agree by construction of the suggestions.
pub fn synthesize_profile(g: &Game, e: &EpistemicGame, w: &Witness) -> Profile {
    let actions = (0..g.n_players())
        .map(|p| {
            w.strategy
                .nodes
                .iter()
                .map(|node| {
                    let moves = e.adam[node.adam].suggestion.moves(g, &e.eve[node.eve]);
                    let pick = moves.iter().find(|(st, _)| st.owner != Some(p)).unwrap_or(&moves[0]);
                    pick.1.of(p)
                })
                .collect()
        })
        .collect();
    Profile { graph: w.strategy.clone(), actions }
}
