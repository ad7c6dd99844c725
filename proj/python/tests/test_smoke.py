import pytest

import microasp

PI1 = """
a(1) :- not b(1).
b(1) :- not a(1).
%@deferred
:- a(X), b(X).
c(1) :- not d(1).
d(1) :- not c(1).
%@deferred
:- a(X), not b(X).
"""


def test_ground_worked_example():
    text = microasp.ground(PI1, include_deferred=True)
    assert text.splitlines() == [
        ":- a(1), b(1).",
        ":- a(1), not b(1).",
        "a(1) :- not b(1).",
        "b(1) :- not a(1).",
        "c(1) :- not d(1).",
        "d(1) :- not c(1).",
    ]


@pytest.mark.parametrize("strategy", ["full", "lazy", "eager", "post"])
def test_strategies_match_oracle(strategy):
    expected = sorted(microasp.oracle_models(PI1))
    models, status = microasp.enumerate_models(PI1, strategy)
    assert status == "UNSATISFIABLE"
    assert sorted(models) == expected == [["b(1)", "c(1)"], ["b(1)", "d(1)"]]


def test_solve_report():
    r = microasp.solve(PI1, strategy="lazy", seed=3)
    assert r["status"] == "SATISFIABLE"
    assert r["model"] in (["b(1)", "c(1)"], ["b(1)", "d(1)"])
    assert microasp.solve_json(PI1, "lazy", 3) == microasp.solve_json(PI1, "lazy", 3)


def test_conflict_budget_timeout():
    text = microasp.gen_3sat(40, 4.25, 2)
    assert microasp.solve(text, conflicts=0)["status"] in ("TIMEOUT", "SATISFIABLE", "UNSATISFIABLE")


def test_generators():
    m = microasp.gen_marriage(3, 50, 1)
    assert "%@meta family=marriage" in m
    assert microasp.solve(m, strategy="eager")["status"] == "SATISFIABLE"
    assert microasp.solve(microasp.gen_packing(1, 1, [2]))["status"] == "UNSATISFIABLE"
    with pytest.raises(ValueError):
        microasp.gen_packing(0, 1, [1])


def test_errors():
    with pytest.raises(microasp.ParseError):
        microasp.normalize("p(X) :- not q(X).")
    with pytest.raises(ValueError):
        microasp.solve("p.", strategy="fastest")
