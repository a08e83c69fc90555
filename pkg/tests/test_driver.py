import pytest

from refit.builtins import standard_corpus_path, standard_registry
from refit.driver import (
    ReuseConfig,
    ReuseQuery,
    code_reuse,
    compute_type_distance_matrix,
    query_from_json,
)
from refit.runtime import BuiltinRegistry, TestCase, run_tests, vint
from refit.typemodel import (
    CorpusEntry,
    Ref,
    SchemaError,
    TypeEnv,
    load_corpus,
    parse_type,
)
from fractions import Fraction

from conftest import INT, VOID, sig


@pytest.fixture(scope="module")
def std_corpus():
    return load_corpus(standard_corpus_path())


@pytest.fixture(scope="module")
def registry():
    return standard_registry()


def _entry(entry_id, signature, doc, key) -> CorpusEntry:
    return CorpusEntry(
        id=entry_id, signature=signature, doc=doc, class_refs=(), builtin_key=key
    )


def test_exact_corpus_match_passes_through(std_corpus, registry):
    # a query identical in shape and behavior to a corpus entry
    query = ReuseQuery(
        sig("sortThem", [("values", parse_type("int[]"))], parse_type("int[]")),
        "sort integers ascending counting sort",
        [TestCase(args=[_arr([3, 1, 2])], expect_return=_arr([1, 2, 3]))],
    )
    result = code_reuse(query, std_corpus, registry)
    assert result.success
    assert result.adaptee_id == "countingSort"
    assert result.alignment.cost == 0
    assert result.attempts.candidates == 1
    assert result.attempts.plans == 1


def _arr(xs):
    from refit.runtime import VArr

    return VArr(INT, [vint(x) for x in xs])


def test_failure_is_a_value_not_an_error(std_corpus, registry):
    query = ReuseQuery(
        sig("impossible", [("values", parse_type("int[]"))], parse_type("int[]")),
        "sort integers ascending",
        # no corpus method returns [42] on this input
        [TestCase(args=[_arr([3])], expect_return=_arr([42]))],
    )
    result = code_reuse(query, std_corpus, registry)
    assert not result.success
    assert result.attempts.plans > 0
    assert result.diagnostics


def test_candidate_backtracking_order(point_env):
    # Two candidates match the keywords; the cheaper-aligned one is tried
    # first but cannot pass, so the driver moves to the next candidate.
    wrong = _entry(
        "wrong", sig("pickFirst", [("a", INT)], INT), "choose the value", "first_wrong"
    )
    right = _entry(
        "right", sig("pickTwice", [("a", INT), ("b", INT)], INT), "choose the value", "double_right"
    )
    registry = BuiltinRegistry()
    registry.register("first_wrong", lambda args: args[0])
    registry.register("double_right", lambda args: vint(args[0].value * 2))
    query = ReuseQuery(
        sig("want", [("n", INT)], INT),
        "choose the value",
        [TestCase(args=[vint(21)], expect_return=vint(42))],
    )
    result = code_reuse(query, (point_env, [wrong, right]), registry)
    assert result.success
    assert result.adaptee_id == "right"
    # the exact-arity candidate ranked (and failed) first
    assert result.attempts.candidates == 2


def test_success_reverifies(std_corpus, registry):
    from refit.bench import drawline_query

    query = drawline_query()
    result = code_reuse(query, std_corpus, registry)
    assert result.success
    report = run_tests(result.plan, query.tests, registry, result.env)
    assert report.passed


def test_determinism_including_counters(std_corpus, registry):
    from refit.bench import drawline_query

    first = code_reuse(drawline_query(), std_corpus, registry)
    second = code_reuse(drawline_query(), std_corpus, registry)
    assert first.success and second.success
    assert first.plan == second.plan
    assert vars(first.attempts) == vars(second.attempts)
    assert first.adaptee_id == second.adaptee_id


def test_bounded_work(std_corpus, registry):
    config = ReuseConfig(top_k=3, max_alignments_per_candidate=2, max_plans_per_alignment=4)
    query = ReuseQuery(
        sig("impossible", [("values", parse_type("int[]"))], parse_type("int[]")),
        "sort remove duplicates prime matrix line",
        [TestCase(args=[_arr([3])], expect_return=_arr([42]))],
    )
    result = code_reuse(query, std_corpus, registry, config)
    assert not result.success
    assert result.attempts.plans <= 3 * 2 * 4


def test_candidate_visitation_matches_rerank_order(std_corpus, registry):
    # audit via per-candidate diagnostics: failures appear in rank order
    query = ReuseQuery(
        sig("impossible", [("values", parse_type("int[]"))], parse_type("int[]")),
        "integers ascending sort counting",
        [TestCase(args=[_arr([3])], expect_return=_arr([42]))],
    )
    result = code_reuse(query, std_corpus, registry)
    exhausted = [d.split(":")[0] for d in result.diagnostics if "exhausted" in d]
    assert exhausted[0] == "countingSort"  # cost-0 candidate visited first


def test_distance_matrix_covers_all_pairs(std_corpus):
    env, entries = std_corpus
    query = sig("f", [("values", parse_type("int[]")), ("n", INT)], VOID)
    cache = compute_type_distance_matrix(query, entries, env)
    assert cache.delta(parse_type("int[]"), parse_type("int[]")) == 0
    assert cache.delta(INT, Ref("Point")) == Fraction(3, 7)
    assert len(cache) > 0


def test_arity_mismatch_rejected():
    with pytest.raises(SchemaError):
        ReuseQuery(
            sig("f", [("a", INT)], VOID),
            "",
            [TestCase(args=[vint(1), vint(2)])],
        )


def test_no_keyword_hits_is_failure(std_corpus, registry):
    query = ReuseQuery(
        sig("f", [("a", INT)], VOID),
        "zebra quantum marmalade",
        [TestCase(args=[vint(1)])],
    )
    result = code_reuse(query, std_corpus, registry)
    assert not result.success
    assert result.attempts.candidates == 0


def test_query_from_json(std_corpus):
    env, _ = std_corpus
    obj = {
        "name": "drawLine",
        "params": [["pt", "MyPoint"], ["res", "Vector<MyPoint>"]],
        "returns": "void",
        "description": "draw a line",
        "classes": [
            {"name": "MyPoint", "fields": [["x", "int"], ["y", "int"]],
             "constructible": True, "gettable": True}
        ],
        "tests": [
            {"args": [{"t": "obj", "class": "MyPoint",
                       "fields": {"x": {"t": "int", "v": 5}, "y": {"t": "int", "v": 3}}},
                      {"t": "vec", "elem": "MyPoint", "items": []}],
             "expectParamStates": {"2": {"t": "vec", "elem": "MyPoint", "items": []}}}
        ],
    }
    query = query_from_json(obj, env)
    assert query.signature.name == "drawLine"
    assert query.class_defs[0].name == "MyPoint"
    assert len(query.tests) == 1
    assert 2 in query.tests[0].expect_param_states
