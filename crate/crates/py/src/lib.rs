//! Python bindings: games, the epistemic abstraction, equilibrium search and
//! witness checks.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use epinash::epistemic::{build_epistemic_with, to_dot, BuildOptions, EpistemicGame};
use epinash::game_model::{fmt_rational, game_to_json, parse_game, PayoffVector};
use epinash::mp_engine::{check_mp, decide_mp_with, MpOptions, MpVerdict, DEFAULT_STRATEGY_BUDGET};
use epinash::ne_search::{decide_boolean_with, Query};
use epinash::oracle::{verify_lemma3, DepthBudget};
use epinash::random::{random_game, RandomParams, RandomPayoff};
use epinash::witness::{check_boolean, witness_from_json, witness_to_json};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl ToString) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn opts(cap_states: Option<usize>) -> BuildOptions {
    let mut o = BuildOptions::default();
    if let Some(c) = cap_states {
        o.cap_states = c;
    }
    o
}

/// A concurrent game with public signals.
#[pyclass(name = "Game", frozen)]
struct PyGame {
    inner: epinash::game_model::Game,
}

#[pymethods]
impl PyGame {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGame { inner: parse_game(text).map_err(value_err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(value_err)?;
        Self::from_json(&text)
    }

    /// Random game; `payoff` is "buchi", "parity" or "mp".
    #[staticmethod]
    #[pyo3(signature = (seed, payoff = "buchi"))]
    fn random(seed: u64, payoff: &str) -> PyResult<Self> {
        let payoff = match payoff {
            "buchi" => RandomPayoff::Buchi,
            "parity" => RandomPayoff::Parity,
            "mp" => RandomPayoff::MeanPayoff,
            other => return Err(value_err(format!("unknown payoff kind {other:?}"))),
        };
        Ok(PyGame { inner: random_game(seed, &RandomParams { payoff, ..RandomParams::default() }) })
    }

    fn to_json(&self) -> String {
        game_to_json(&self.inner).to_string()
    }

    #[getter]
    fn players(&self) -> Vec<String> {
        self.inner.players.clone()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn signals(&self) -> Vec<String> {
        self.inner.signals.clone()
    }

    fn is_boolean(&self) -> bool {
        self.inner.is_boolean()
    }

    fn is_mean_payoff(&self) -> bool {
        self.inner.is_mean_payoff()
    }

    #[pyo3(signature = (cap_states = None))]
    fn epistemic(&self, cap_states: Option<usize>) -> PyResult<PyEpistemic> {
        let e = build_epistemic_with(&self.inner, opts(cap_states)).map_err(runtime_err)?;
        Ok(PyEpistemic { game: self.inner.clone(), inner: e })
    }

    fn __repr__(&self) -> String {
        format!("Game(players={}, vertices={})", self.inner.n_players(), self.inner.n_vertices())
    }
}

/// The reachable epistemic game.
#[pyclass(name = "EpistemicGame", frozen)]
struct PyEpistemic {
    game: epinash::game_model::Game,
    inner: EpistemicGame,
}

#[pymethods]
impl PyEpistemic {
    #[getter]
    fn eve_states(&self) -> usize {
        self.inner.eve.len()
    }

    #[getter]
    fn adam_states(&self) -> usize {
        self.inner.adam.len()
    }

    /// Eve states per suspect set, keyed like `"{A1,A2}"`.
    fn suspect_histogram(&self) -> BTreeMap<String, usize> {
        self.inner
            .suspect_histogram()
            .into_iter()
            .map(|(set, k)| {
                let names: Vec<&str> = set.iter().map(|p| self.game.players[p].as_str()).collect();
                (format!("{{{}}}", names.join(",")), k)
            })
            .collect()
    }

    fn state(&self, i: usize) -> PyResult<String> {
        let s = self.inner.eve.get(i).ok_or_else(|| value_err(format!("no state {i}")))?;
        Ok(s.fmt_with(&self.game))
    }

    fn to_dot(&self) -> String {
        to_dot(&self.game, &self.inner)
    }
}

/// Outcome of an equilibrium search.
#[pyclass(name = "Verdict", frozen, get_all)]
struct PyVerdict {
    /// "exists", "none" or "inconclusive".
    status: String,
    payoff: Option<Vec<String>>,
    witness: Option<String>,
    reason: Option<String>,
}

#[pymethods]
impl PyVerdict {
    fn __repr__(&self) -> String {
        format!("Verdict({}, payoff={:?})", self.status, self.payoff)
    }
}

/// Searches an equilibrium with `lower ≤ payoff ≤ upper`; bounds are
/// comma-separated per player and default to unbounded.
#[pyfunction]
#[pyo3(signature = (game, lower = None, upper = None, cap_states = None))]
fn solve(game: &PyGame, lower: Option<&str>, upper: Option<&str>, cap_states: Option<usize>) -> PyResult<PyVerdict> {
    let g = &game.inner;
    let n = g.n_players();
    let t = Query::trivial(n);
    let lo = lower.map(|s| PayoffVector::parse(s, n)).transpose().map_err(value_err)?.unwrap_or(t.lower);
    let hi = upper.map(|s| PayoffVector::parse(s, n)).transpose().map_err(value_err)?.unwrap_or(t.upper);
    let q = Query::new(lo, hi).map_err(value_err)?;
    let o = opts(cap_states);
    let verdict = if g.is_boolean() {
        decide_boolean_with(g, &q, o).map_err(runtime_err)?.map_or(MpVerdict::None, MpVerdict::Exists)
    } else if g.is_mean_payoff() {
        decide_mp_with(g, &q, &MpOptions { build: o, ..MpOptions::default() }).map_err(runtime_err)?
    } else {
        return Err(value_err("payoffs must be all Boolean or all mean payoff"));
    };
    Ok(match verdict {
        MpVerdict::Exists(w) => {
            let e = build_epistemic_with(g, o).map_err(runtime_err)?;
            PyVerdict {
                status: "exists".into(),
                payoff: Some(w.payoff.iter().map(fmt_rational).collect()),
                witness: Some(witness_to_json(g, &e, &w).to_string()),
                reason: None,
            }
        }
        MpVerdict::None => PyVerdict { status: "none".into(), payoff: None, witness: None, reason: None },
        MpVerdict::Inconclusive(why) => {
            PyVerdict { status: "inconclusive".into(), payoff: None, witness: None, reason: Some(why) }
        }
    })
}

/// Checks a witness document; returns `(valid, reason)`.
#[pyfunction]
#[pyo3(signature = (game, witness, cap_states = None))]
fn check(game: &PyGame, witness: &str, cap_states: Option<usize>) -> PyResult<(bool, Option<String>)> {
    let g = &game.inner;
    let e = build_epistemic_with(g, opts(cap_states)).map_err(runtime_err)?;
    let parsed =
        serde_json::from_str(witness).map_err(|err| err.to_string()).and_then(|v| witness_from_json(g, &e, &v));
    let w = match parsed {
        Ok(w) => w,
        Err(why) => return Ok((false, Some(why))),
    };
    let res = if w.mp.is_some() { check_mp(g, &e, &w, DEFAULT_STRATEGY_BUDGET) } else { check_boolean(g, &e, &w) };
    Ok(match res {
        Ok(()) => (true, None),
        Err(f) => (false, Some(f.to_string())),
    })
}

/// Whether epistemic histories up to `depth` characterize
/// indistinguishability of their concretizations.
#[pyfunction]
#[pyo3(signature = (game, depth = 3))]
fn lemma3(game: &PyGame, depth: usize) -> PyResult<bool> {
    Ok(verify_lemma3(&game.inner, &DepthBudget::new(depth)).map_err(runtime_err)?.is_none())
}

#[pymodule]
fn epinash_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyEpistemic>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3, m)?)?;
    Ok(())
}
