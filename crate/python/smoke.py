"""Smoke test for the Python bindings: python python/smoke.py"""

import json
import pathlib

import epinash_py as ep

GAMES = pathlib.Path(__file__).resolve().parent.parent / "games"


def main():
    g = ep.Game.load(str(GAMES / "example_buchi.json"))
    assert g.players == ["A1", "A2", "A3"]
    e = g.epistemic()
    assert e.eve_states > 0 and e.adam_states > 0
    assert sum(e.suspect_histogram().values()) == e.eve_states
    assert e.state(0).startswith("⊥")
    assert e.to_dot().startswith("digraph")

    v = ep.solve(g, lower="1,1,0", upper="1,1,0")
    assert v.status == "exists", v
    assert v.payoff == ["1", "1", "0"]
    ok, why = ep.check(g, v.witness)
    assert ok, why

    doc = json.loads(v.witness)
    doc["payoff"] = ["1", "1", "1"]
    ok, why = ep.check(g, json.dumps(doc))
    assert not ok and why

    assert ep.solve(g, lower="3,3,3").status == "none"

    m = ep.Game.load(str(GAMES / "example_mp.json"))
    assert m.is_mean_payoff()
    v = ep.solve(m, lower="1,1,0", upper="1,1,0")
    assert v.status == "exists" and ep.check(m, v.witness)[0]

    r = ep.Game.random(3, "parity")
    assert ep.Game.from_json(r.to_json()).to_json() == ep.Game.from_json(r.to_json()).to_json()
    assert ep.solve(r).status in ("exists", "none")
    assert ep.lemma3(r, 3)

    try:
        ep.Game.from_json("{")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed game accepted")
    print("smoke ok")


if __name__ == "__main__":
    main()
