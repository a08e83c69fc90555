"""Built-in benchmark: ten reuse tasks over the standard corpus.

Every task's desired signature is deliberately mismatched against the
corpus entry that implements it (vectors vs. arrays, out-parameters vs.
returns, objects vs. integer pairs), so success requires a full
search-align-synthesize-test run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .builtins import standard_corpus_path, standard_registry
from .driver import ReuseConfig, ReuseQuery, ReuseResult, code_reuse
from .runtime import TestCase, VColl, VObj, vdouble, vint, make_collection
from .typemodel import (
    ClassDef,
    Collection,
    MethodSignature,
    Prim,
    Ref,
    TypeEnv,
    Void,
    load_corpus,
    parse_signature,
    parse_type,
)

_INT = Prim("int")
_DOUBLE = Prim("double")
VOID = Void()


def _vec(elem, items) -> VColl:
    return make_collection("Vector", (elem,), items)


def _list(elem, items) -> VColl:
    return make_collection("List", (elem,), items)


def _int_vec(xs) -> VColl:
    return _vec(_INT, [vint(x) for x in xs])


def _int_list(xs) -> VColl:
    return _list(_INT, [vint(x) for x in xs])


def _double_vec(xs) -> VColl:
    return _vec(_DOUBLE, [vdouble(x) for x in xs])


def _int_vec_matrix(rows) -> VColl:
    inner = Collection("Vector", (_INT,))
    return _vec(inner, [_int_vec(r) for r in rows])


def _double_vec_matrix(rows) -> VColl:
    inner = Collection("Vector", (_DOUBLE,))
    return _vec(inner, [_double_vec(r) for r in rows])


def _my_point(x, y) -> VObj:
    return VObj("MyPoint", {"x": vint(x), "y": vint(y)})


@dataclass
class BenchTask:
    name: str
    expected_adaptee: str
    query: ReuseQuery


def drawline_query() -> ReuseQuery:
    """The line-drawing task: desired interface takes a destination point
    object and an output vector; the corpus method takes four ints and
    returns an array."""
    my_point = ClassDef("MyPoint", (("x", _INT), ("y", _INT)))
    env = TypeEnv({"MyPoint": my_point})
    sig = MethodSignature(
        "drawLine",
        (("pt", Ref("MyPoint")), ("res", parse_type("Vector<MyPoint>", env))),
        VOID,
    )
    expected = _vec(
        Ref("MyPoint"),
        [_my_point(0, 0), _my_point(1, 1), _my_point(2, 1),
         _my_point(3, 2), _my_point(4, 2), _my_point(5, 3)],
    )
    test = TestCase(
        args=[_my_point(5, 3), _vec(Ref("MyPoint"), [])],
        expect_param_states={2: expected},
    )
    return ReuseQuery(
        sig,
        "Draw a line between the origin and specified point using Bresenham's algorithm",
        [test],
        [my_point],
    )


def _simple_query(sig_text: str, description: str, tests: list[TestCase]) -> ReuseQuery:
    return ReuseQuery(parse_signature(sig_text, TypeEnv()), description, tests, [])


def benchmark_tasks() -> list[BenchTask]:
    tasks = [BenchTask("BresenhamLine", "bresenham", drawline_query())]

    a = [[1.0, 2.0], [3.0, 4.0]]
    b = [[5.0, 6.0], [7.0, 8.0]]
    prod = [[19.0, 22.0], [43.0, 50.0]]
    tasks.append(BenchTask(
        "MatrixMultiplication", "multiplyMatrices",
        _simple_query(
            "multiply(first: Vector<Vector<Double>>, second: Vector<Vector<Double>>, res: Vector<Vector<Double>>) -> void",
            "Multiply two double matrices",
            [TestCase(
                args=[_double_vec_matrix(a), _double_vec_matrix(b), _double_vec_matrix([])],
                expect_param_states={
                    1: _double_vec_matrix(a),
                    2: _double_vec_matrix(b),
                    3: _double_vec_matrix(prod),
                },
            )],
        ),
    ))

    m = [[1, 2, 3], [4, 5, 6]]
    mt = [[1, 4], [2, 5], [3, 6]]
    tasks.append(BenchTask(
        "TransposeMatrix", "transposeMatrix",
        _simple_query(
            "transpose(m: Vector<Vector<Integer>>, out: Vector<Vector<Integer>>) -> void",
            "Transpose a matrix swapping rows and columns",
            [TestCase(
                args=[_int_vec_matrix(m), _int_vec_matrix([])],
                expect_param_states={1: _int_vec_matrix(m), 2: _int_vec_matrix(mt)},
            )],
        ),
    ))

    tasks.append(BenchTask(
        "MatrixAddition", "addMatrices",
        _simple_query(
            "add(first: Vector<Vector<Integer>>, second: Vector<Vector<Integer>>, out: Vector<Vector<Integer>>) -> void",
            "Add two integer matrices element by element",
            [TestCase(
                args=[_int_vec_matrix([[1, 2], [3, 4]]),
                      _int_vec_matrix([[10, 20], [30, 40]]),
                      _int_vec_matrix([])],
                expect_param_states={
                    1: _int_vec_matrix([[1, 2], [3, 4]]),
                    2: _int_vec_matrix([[10, 20], [30, 40]]),
                    3: _int_vec_matrix([[11, 22], [33, 44]]),
                },
            )],
        ),
    ))

    tasks.append(BenchTask(
        "DotProduct", "dotProduct",
        _simple_query(
            "dot(a: Vector<Double>, b: Vector<Double>) -> double",
            "Compute the dot product of two vectors",
            [TestCase(
                args=[_double_vec([1.0, 2.0, 3.0]), _double_vec([4.0, 5.0, 6.0])],
                expect_return=vdouble(32.0),
                expect_param_states={
                    1: _double_vec([1.0, 2.0, 3.0]),
                    2: _double_vec([4.0, 5.0, 6.0]),
                },
            )],
        ),
    ))

    tasks.append(BenchTask(
        "LcsInteger", "longestCommonSubsequence",
        _simple_query(
            "lcs(first: Vector<Integer>, second: Vector<Integer>, out: Vector<Integer>) -> void",
            "Integer longest common subsequence of two sequences",
            [TestCase(
                args=[_int_vec([1, 3, 5, 7, 9]), _int_vec([3, 4, 5, 9]), _int_vec([])],
                expect_param_states={
                    1: _int_vec([1, 3, 5, 7, 9]),
                    2: _int_vec([3, 4, 5, 9]),
                    3: _int_vec([3, 5, 9]),
                },
            )],
        ),
    ))

    tasks.append(BenchTask(
        "CountingSort", "countingSort",
        _simple_query(
            "sortAscending(values: List<Integer>) -> List<Integer>",
            "Sort integers ascending using counting sort",
            [TestCase(
                args=[_int_list([5, 3, 8, 3, 1])],
                expect_return=_int_list([1, 3, 3, 5, 8]),
                expect_param_states={1: _int_list([5, 3, 8, 3, 1])},
            )],
        ),
    ))

    tasks.append(BenchTask(
        "RemoveDuplicates", "removeDuplicates",
        _simple_query(
            "dedupe(values: Vector<Integer>, out: Vector<Integer>) -> void",
            "Remove duplicate values from a list keeping order",
            [TestCase(
                args=[_int_vec([4, 2, 4, 1, 2]), _int_vec([])],
                expect_param_states={1: _int_vec([4, 2, 4, 1, 2]), 2: _int_vec([4, 2, 1])},
            )],
        ),
    ))

    tasks.append(BenchTask(
        "ListAverage", "mean",
        _simple_query(
            "average(values: List<Double>) -> double",
            "Compute the average mean of a list of values",
            [TestCase(
                args=[_list(_DOUBLE, [vdouble(1.0), vdouble(2.0), vdouble(6.0)])],
                expect_return=vdouble(3.0),
                expect_param_states={1: _list(_DOUBLE, [vdouble(1.0), vdouble(2.0), vdouble(6.0)])},
            )],
        ),
    ))

    tasks.append(BenchTask(
        "PrimeSieve", "sievePrimes",
        _simple_query(
            "primesUpTo(limit: int, out: Vector<Integer>) -> void",
            "Generate prime numbers up to a limit with a sieve",
            [TestCase(
                args=[vint(20), _int_vec([])],
                expect_param_states={2: _int_vec([2, 3, 5, 7, 11, 13, 17, 19])},
            )],
        ),
    ))
    return tasks


@dataclass
class BenchOutcome:
    task: str
    success: bool
    adaptee: str | None
    expected_adaptee: str
    seconds: float
    attempts_plans: int


def run_benchmark(config: ReuseConfig | None = None) -> list[BenchOutcome]:
    corpus = load_corpus(standard_corpus_path())
    registry = standard_registry()
    outcomes = []
    for task in benchmark_tasks():
        t0 = time.perf_counter()
        result: ReuseResult = code_reuse(task.query, corpus, registry, config)
        outcomes.append(BenchOutcome(
            task=task.name,
            success=result.success,
            adaptee=result.adaptee_id,
            expected_adaptee=task.expected_adaptee,
            seconds=time.perf_counter() - t0,
            attempts_plans=result.attempts.plans,
        ))
    return outcomes


def render_benchmark(outcomes: list[BenchOutcome]) -> str:
    lines = [f"{'task':<22} {'result':<7} {'adaptee':<26} {'plans':>5} {'time':>8}"]
    for o in outcomes:
        status = "ok" if o.success else "FAIL"
        lines.append(
            f"{o.task:<22} {status:<7} {o.adaptee or '-':<26} "
            f"{o.attempts_plans:>5} {o.seconds:>7.2f}s"
        )
    solved = sum(o.success for o in outcomes)
    lines.append(f"solved {solved}/{len(outcomes)}")
    return "\n".join(lines)
