"""Reference implementations behind the standard corpus.

Each function stands in for an existing library method; signatures in the
corpus file are deliberately awkward (integer-pair endpoints, array
returns, out-of-place results) so that reuse always needs an adapter.
All functions are deterministic and total: malformed shapes (e.g. ragged
matrices) yield an empty result rather than an error.
"""

from __future__ import annotations

from importlib import resources

from .runtime import BuiltinRegistry, VArr, VBool, VNum, VObj, VStr, vint, vdouble
from .typemodel import Array, Prim, Ref

_INT = Prim("int")
_DOUBLE = Prim("double")
_POINT = Ref("Point")


def standard_corpus_path() -> str:
    return str(resources.files("refit").joinpath("data/standard_corpus.jsonl"))


def _point(x: int, y: int) -> VObj:
    return VObj("Point", {"x": vint(x), "y": vint(y)})


def _nums(arr) -> list:
    return [v.value for v in arr.items]


def _int_array(xs) -> VArr:
    return VArr(_INT, [vint(x) for x in xs])


def _double_array(xs) -> VArr:
    return VArr(_DOUBLE, [vdouble(x) for x in xs])


def _matrix(arr) -> list[list] | None:
    rows = [_nums(row) for row in arr.items]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        return None
    return rows


def _int_matrix(rows: list[list]) -> VArr:
    return VArr(Array(_INT), [_int_array(r) for r in rows])


def _double_matrix(rows: list[list]) -> VArr:
    return VArr(Array(_DOUBLE), [_double_array(r) for r in rows])


def bresenham_line(args) -> VArr:
    """Integer raster points of the segment (x0, y0) -> (x1, y1)."""
    x0, y0, x1, y1 = (int(a.value) for a in args)
    points = []
    dx, dy = abs(x1 - x0), abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    while True:
        points.append(_point(x0, y0))
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x0 += sx
        if e2 < dx:
            err += dx
            y0 += sy
    return VArr(_POINT, points)


def matrix_multiply(args) -> VArr:
    a, b = _matrix(args[0]), _matrix(args[1])
    if a is None or b is None or not a or not b or len(a[0]) != len(b):
        return _double_matrix([])
    product = [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]
    return _double_matrix(product)


def matrix_transpose(args) -> VArr:
    m = _matrix(args[0])
    if m is None or not m:
        return _int_matrix([])
    return _int_matrix([[m[i][j] for i in range(len(m))] for j in range(len(m[0]))])


def matrix_add(args) -> VArr:
    a, b = _matrix(args[0]), _matrix(args[1])
    if a is None or b is None or len(a) != len(b):
        return _int_matrix([])
    if a and len(a[0]) != len(b[0]):
        return _int_matrix([])
    return _int_matrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def lcs_ints(args) -> VArr:
    """Longest common subsequence of two integer sequences."""
    a, b = _nums(args[0]), _nums(args[1])
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                table[i][j] = 1 + table[i + 1][j + 1]
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])
    out, i, j = [], 0, 0
    while i < n and j < m:
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return _int_array(out)


def counting_sort(args) -> VArr:
    xs = [int(x) for x in _nums(args[0])]
    if not xs:
        return _int_array([])
    lo = min(xs)
    counts = [0] * (max(xs) - lo + 1)
    for x in xs:
        counts[x - lo] += 1
    out = []
    for offset, n in enumerate(counts):
        out.extend([lo + offset] * n)
    return _int_array(out)


def dot_product(args) -> VNum:
    a, b = _nums(args[0]), _nums(args[1])
    return vdouble(sum(x * y for x, y in zip(a, b)))


def mean_of(args) -> VNum:
    xs = _nums(args[0])
    return vdouble(sum(xs) / len(xs) if xs else 0.0)


def prime_sieve(args) -> VArr:
    limit = int(args[0].value)
    if limit < 2:
        return _int_array([])
    composite = [False] * (limit + 1)
    primes = []
    for n in range(2, limit + 1):
        if not composite[n]:
            primes.append(n)
            for k in range(n * n, limit + 1, n):
                composite[k] = True
    return _int_array(primes)


def remove_duplicates(args) -> VArr:
    seen, out = set(), []
    for x in _nums(args[0]):
        if x not in seen:
            seen.add(x)
            out.append(x)
    return _int_array(out)


def is_anagram(args) -> VBool:
    a, b = args[0], args[1]
    if not isinstance(a, VStr) or not isinstance(b, VStr):
        return VBool(False)
    return VBool(sorted(a.value) == sorted(b.value))


def standard_registry() -> BuiltinRegistry:
    """Registry backing the standard corpus."""
    registry = BuiltinRegistry()
    registry.register("bresenham_line", bresenham_line)
    registry.register("matrix_multiply", matrix_multiply)
    registry.register("matrix_transpose", matrix_transpose)
    registry.register("matrix_add", matrix_add)
    registry.register("lcs_ints", lcs_ints)
    registry.register("counting_sort", counting_sort)
    registry.register("dot_product", dot_product)
    registry.register("mean_of", mean_of)
    registry.register("prime_sieve", prime_sieve)
    registry.register("remove_duplicates", remove_duplicates)
    registry.register("is_anagram", is_anagram)
    return registry
