from fractions import Fraction

from refit.rank import rerank
from refit.typemodel import CorpusEntry, MethodSignature, Prim, Void, parse_type

from conftest import INT, VOID, sig


def _entry(entry_id, signature, unresolvable=False) -> CorpusEntry:
    return CorpusEntry(
        id=entry_id,
        signature=signature,
        doc="",
        class_refs=(),
        builtin_key="noop",
        unresolvable=unresolvable,
    )


def _by_id(entries):
    return {e.id: e for e in entries}


def test_exact_match_ranks_first(point_env):
    query = sig("want", [("a", INT), ("b", INT)], INT)
    exact = _entry("exact", sig("have", [("x", INT), ("y", INT)], INT))
    near = _entry("near", sig("have2", [("x", INT), ("y", Prim("long"))], INT))
    ranked = rerank(query, ["near", "exact"], _by_id([exact, near]), point_env)
    assert ranked[0].entry_id == "exact"
    assert ranked[0].align_cost == 0
    assert ranked[0].final_rank == 1
    assert ranked[1].align_cost > 0


def test_equal_cost_preserves_keyword_order(point_env):
    query = sig("want", [("a", INT)], VOID)
    first = _entry("first", sig("f", [("x", INT)], VOID))
    second = _entry("second", sig("g", [("x", INT)], VOID))
    ranked = rerank(query, ["first", "second"], _by_id([first, second]), point_env)
    assert [c.entry_id for c in ranked] == ["first", "second"]
    ranked2 = rerank(query, ["second", "first"], _by_id([first, second]), point_env)
    assert [c.entry_id for c in ranked2] == ["second", "first"]


def test_infeasible_candidates_sink(point_env):
    query = sig("want", [("a", INT)], VOID)
    feasible = _entry("ok", sig("f", [("x", Prim("long"))], VOID))
    mismatched = _entry("bad", sig("g", [("xs", parse_type("List<Integer>"))], VOID))
    ranked = rerank(query, ["bad", "ok"], _by_id([feasible, mismatched]), point_env)
    assert [c.entry_id for c in ranked] == ["ok", "bad"]
    assert ranked[1].align_cost is None
    assert ranked[1].final_rank == 2


def test_unresolvable_sinks_below_infeasible(point_env):
    query = sig("want", [("a", INT)], VOID)
    entries = [
        _entry("ok", sig("f", [("x", INT)], VOID)),
        _entry("bad", sig("g", [("xs", parse_type("List<Integer>"))], VOID)),
        _entry("deep", sig("h", [("x", INT)], VOID), unresolvable=True),
    ]
    ranked = rerank(query, ["deep", "bad", "ok"], _by_id(entries), point_env)
    assert [c.entry_id for c in ranked] == ["ok", "bad", "deep"]
    assert ranked[2].unresolvable


def test_idempotent(point_env):
    query = sig("want", [("a", INT), ("b", Prim("double"))], VOID)
    entries = [
        _entry("e1", sig("f", [("x", INT), ("y", Prim("double"))], VOID)),
        _entry("e2", sig("g", [("x", Prim("long")), ("y", Prim("double"))], VOID)),
        _entry("e3", sig("h", [("x", INT)], VOID)),
    ]
    first = rerank(query, ["e1", "e2", "e3"], _by_id(entries), point_env)
    order = [c.entry_id for c in first]
    second = rerank(query, order, _by_id(entries), point_env)
    assert [c.entry_id for c in second] == order


def test_cost_ascending_equals_inverse_score_descending(point_env):
    query = sig("want", [("a", INT)], VOID)
    entries = [
        _entry("far", sig("f", [("x", parse_type("Point", point_env))], VOID)),
        _entry("close", sig("g", [("x", Prim("long"))], VOID)),
    ]
    ranked = rerank(query, ["far", "close"], _by_id(entries), point_env)
    costs = [c.align_cost for c in ranked]
    assert costs == sorted(costs)
    scores = [Fraction(1) / c if c else None for c in costs]
    finite = [s for s in scores if s is not None]
    assert finite == sorted(finite, reverse=True)
