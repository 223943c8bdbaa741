//! Bundled example games.

use crate::game_model::{parse_game, Game};

pub const EXAMPLE_ORANGE: &str = include_str!("../../../games/example_orange.json");
pub const EXAMPLE_BUCHI: &str = include_str!("../../../games/example_buchi.json");
pub const EXAMPLE_MP: &str = include_str!("../../../games/example_mp.json");

/// Three-player example whose leaves all emit the same signal.
pub fn example_orange() -> Game {
    parse_game(EXAMPLE_ORANGE).expect("bundled game")
}

/// Same arena with leaf-identifying signals and Büchi objectives accepting
/// the leaves where a player's payoff is positive.
pub fn example_buchi() -> Game {
    parse_game(EXAMPLE_BUCHI).expect("bundled game")
}

/// Same arena with leaf weights equal to the leaf payoff vectors.
pub fn example_mp() -> Game {
    parse_game(EXAMPLE_MP).expect("bundled game")
}
