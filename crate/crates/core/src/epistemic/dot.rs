use std::fmt::Write;

use sha2::{Digest, Sha256};

use super::EpistemicGame;
use crate::game_model::Game;

fn node_id(prefix: char, canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    let mut id = String::from(prefix);
    for b in &digest[..8] {
        let _ = write!(id, "{b:02x}");
    }
    id
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Eve states as rounded boxes, Adam states as plain boxes, Adam edges
/// labelled by their signal.
pub fn to_dot(g: &Game, e: &EpistemicGame) -> String {
    let eve_ids: Vec<String> = e.eve.iter().map(|s| node_id('e', &s.fmt_with(g))).collect();
    let mut out = String::from("digraph epistemic {\n");
    for (i, s) in e.eve.iter().enumerate() {
        let _ = writeln!(out, "  {} [shape=box, style=rounded, label=\"{}\"];", eve_ids[i], escape(&s.fmt_with(g)));
    }
    for a in &e.adam {
        let s = &e.eve[a.eve];
        let label = a.suggestion.fmt_with(g, s);
        let id = node_id('a', &format!("{}|{}", s.fmt_with(g), label));
        let _ = writeln!(out, "  {id} [shape=box, label=\"{}\"];", escape(&label));
        let _ = writeln!(out, "  {} -> {id};", eve_ids[a.eve]);
        for &(beta, t) in &a.succ {
            let _ = writeln!(out, "  {id} -> {} [label=\"{}\"];", eve_ids[t], escape(&g.signals[beta]));
        }
    }
    out.push_str("}\n");
    out
}
