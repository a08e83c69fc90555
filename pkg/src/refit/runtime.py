"""Dynamic value model, builtin registry, plan interpreter, and test runner.

Corpus methods execute as host functions registered under a builtin key;
the interpreter evaluates an adapter plan's conversions, invokes the
builtin once, and applies the result routing.  Values are treated as
immutable: "mutation" of an adapter parameter (appending the routed
result, or a builtin's declared out-parameters) surfaces as a fresh value
in the returned parameter states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import synth
from .typemodel import (
    Array,
    Collection,
    NUMERIC_NAMES,
    Prim,
    Ref,
    RefitError,
    Type,
    TypeEnv,
    Void,
    category,
    parse_type,
    print_type,
)


class TypeFault(RefitError):
    """A plan and a runtime value disagree — a planner bug, not a test failure."""


class MissingBuiltinError(RefitError):
    """No host implementation registered under the entry's builtin key."""


# ---------------------------------------------------------------------------
# Values

_INT_BITS = {"byte": 8, "short": 16, "int": 32, "long": 64}


@dataclass(frozen=True)
class VNum:
    kind: str  # byte | short | int | long | float | double
    value: int | float


@dataclass(frozen=True)
class VBool:
    value: bool


@dataclass(frozen=True)
class VChar:
    value: str


@dataclass(frozen=True)
class VStr:
    value: str


@dataclass(frozen=True)
class VNull:
    pass


NULL = VNull()


@dataclass
class VArr:
    elem: Type
    items: list

    def __eq__(self, other):
        return isinstance(other, VArr) and self.items == other.items


@dataclass
class VColl:
    """A built-in collection value.  Set items are deduplicated on build and
    compare order-insensitively; Map items are (key, value) pairs compared by
    key set and per-key value; Vector/List compare in order.  Element types
    are carried for conversion but, like erasure, do not affect equality."""

    category: str  # Vector | List | Set | Map
    elem_types: tuple[Type, ...]
    items: list

    def __eq__(self, other):
        if not isinstance(other, VColl) or self.category != other.category:
            return False
        if self.category == "Set":
            return _set_equal(self.items, other.items)
        if self.category == "Map":
            return _map_equal(self.items, other.items)
        return self.items == other.items


@dataclass
class VObj:
    class_name: str
    fields: dict


Value = VNum | VBool | VChar | VStr | VNull | VArr | VColl | VObj


def _set_equal(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    return all(any(x == y for y in b) for x in a)


def _map_equal(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    for k, v in a:
        matches = [w for k2, w in b if k2 == k]
        if len(matches) != 1 or matches[0] != v:
            return False
    return True


def deep_equal(a, b) -> bool:
    return a == b


def _dedup_items(items: list) -> list:
    out = []
    for item in items:
        if not any(item == x for x in out):
            out.append(item)
    return out


def make_collection(cat: str, elem_types: tuple[Type, ...], items: list) -> VColl:
    if cat == "Set":
        items = _dedup_items(items)
    return VColl(cat, elem_types, items)


def vint(x: int) -> VNum:
    return VNum("int", x)


def vlong(x: int) -> VNum:
    return VNum("long", x)


def vdouble(x: float) -> VNum:
    return VNum("double", float(x))


def java_cast(v: VNum, dst: str) -> VNum:
    """Numeric conversion with Java semantics: integral narrowing wraps in
    two's complement; floating-to-integral truncates toward zero and
    saturates at the target bounds."""
    if not isinstance(v, VNum):
        raise TypeFault(f"numeric cast applied to {v!r}")
    if dst in ("float", "double"):
        return VNum(dst, float(v.value))
    bits = _INT_BITS[dst]
    lo, hi = -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    if v.kind in ("float", "double"):
        n = int(v.value)  # truncation toward zero
        return VNum(dst, max(lo, min(hi, n)))
    n = int(v.value)
    n &= (1 << bits) - 1
    if n > hi:
        n -= 1 << bits
    return VNum(dst, n)


def deep_diff(actual, expected, path: str = "") -> str | None:
    """First path at which two values differ, or None when deep-equal."""
    where = path or "value"
    if type(actual) is not type(expected):
        return f"{where}: {summarize(actual)} != {summarize(expected)}"
    if isinstance(actual, (VArr, VColl)):
        if isinstance(actual, VColl):
            if actual.category != expected.category:
                return f"{where}: {actual.category} != {expected.category}"
            if actual.category in ("Set", "Map"):
                if actual == expected:
                    return None
                return f"{where}: {summarize(actual)} != {summarize(expected)}"
        if len(actual.items) != len(expected.items):
            return f"{where}: length {len(actual.items)} != {len(expected.items)}"
        for i, (x, y) in enumerate(zip(actual.items, expected.items)):
            got = deep_diff(x, y, f"{where}[{i}]")
            if got:
                return got
        return None
    if isinstance(actual, VObj):
        if actual.class_name != expected.class_name:
            return f"{where}: {actual.class_name} != {expected.class_name}"
        for fname, x in actual.fields.items():
            got = deep_diff(x, expected.fields.get(fname), f"{where}.{fname}")
            if got:
                return got
        return None
    if actual != expected:
        return f"{where}: {summarize(actual)} != {summarize(expected)}"
    return None


def summarize(v) -> str:
    if isinstance(v, VNum):
        return f"{v.kind}({v.value})"
    if isinstance(v, (VBool, VChar, VStr)):
        return repr(v.value)
    if isinstance(v, VNull):
        return "null"
    if isinstance(v, VArr):
        return f"array[{len(v.items)}]"
    if isinstance(v, VColl):
        return f"{v.category}[{len(v.items)}]"
    if isinstance(v, VObj):
        return v.class_name
    return repr(v)


# ---------------------------------------------------------------------------
# Tagged JSON encoding of values

_NUM_TAGS = {"byte", "short", "int", "long", "float", "double"}
_SEQ_TAGS = {"vec": "Vector", "list": "List", "set": "Set"}
_CAT_TO_TAG = {"Vector": "vec", "List": "list", "Set": "set"}


def value_to_json(v: Value) -> dict:
    if isinstance(v, VNum):
        return {"t": v.kind, "v": v.value}
    if isinstance(v, VBool):
        return {"t": "bool", "v": v.value}
    if isinstance(v, VChar):
        return {"t": "char", "v": v.value}
    if isinstance(v, VStr):
        return {"t": "str", "v": v.value}
    if isinstance(v, VNull):
        return {"t": "null"}
    if isinstance(v, VArr):
        return {
            "t": "arr",
            "elem": print_type(v.elem),
            "items": [value_to_json(x) for x in v.items],
        }
    if isinstance(v, VColl):
        if v.category == "Map":
            return {
                "t": "map",
                "key": print_type(v.elem_types[0]),
                "val": print_type(v.elem_types[1]),
                "items": [[value_to_json(k), value_to_json(w)] for k, w in v.items],
            }
        return {
            "t": _CAT_TO_TAG[v.category],
            "elem": print_type(v.elem_types[0]),
            "items": [value_to_json(x) for x in v.items],
        }
    if isinstance(v, VObj):
        return {
            "t": "obj",
            "class": v.class_name,
            "fields": {n: value_to_json(x) for n, x in v.fields.items()},
        }
    raise TypeError(f"not a value: {v!r}")


def value_from_json(obj: dict, env: TypeEnv) -> Value:
    tag = obj["t"]
    if tag in _NUM_TAGS:
        raw = obj["v"]
        return VNum(tag, float(raw) if tag in ("float", "double") else int(raw))
    if tag == "bool":
        return VBool(bool(obj["v"]))
    if tag == "char":
        return VChar(obj["v"])
    if tag == "str":
        return VStr(obj["v"])
    if tag == "null":
        return NULL
    if tag == "arr":
        elem = parse_type(obj["elem"], env)
        return VArr(elem, [value_from_json(x, env) for x in obj.get("items", [])])
    if tag in _SEQ_TAGS:
        elem = parse_type(obj["elem"], env)
        items = [value_from_json(x, env) for x in obj.get("items", [])]
        return make_collection(_SEQ_TAGS[tag], (elem,), items)
    if tag == "map":
        kt = parse_type(obj["key"], env)
        vt = parse_type(obj["val"], env)
        items = [
            (value_from_json(k, env), value_from_json(w, env))
            for k, w in obj.get("items", [])
        ]
        return make_collection("Map", (kt, vt), items)
    if tag == "obj":
        return VObj(
            obj["class"],
            {n: value_from_json(x, env) for n, x in obj.get("fields", {}).items()},
        )
    raise ValueError(f"unknown value tag: {tag}")


# ---------------------------------------------------------------------------
# Builtin registry


class BuiltinRegistry:
    """Host-native implementations standing in for executable corpus code.

    A builtin takes the adaptee's argument values and returns either the
    return value alone, or (return value, {1-based param index: new value})
    when it mutates declared out-parameters.  Builtins must be
    deterministic and total on type-correct inputs.
    """

    def __init__(self):
        self._fns: dict[str, object] = {}

    def register(self, key: str, fn) -> None:
        if key in self._fns:
            raise RefitError(f"builtin {key} registered twice")
        self._fns[key] = fn

    def get(self, key: str):
        try:
            return self._fns[key]
        except KeyError:
            raise MissingBuiltinError(f"no builtin registered for {key!r}") from None

    def __contains__(self, key: str) -> bool:
        return key in self._fns


def _call_builtin(fn, args: list) -> tuple[Value | None, dict[int, Value]]:
    result = fn(args)
    if isinstance(result, tuple):
        ret, outs = result
        return ret, dict(outs)
    return result, {}


# ---------------------------------------------------------------------------
# Plan interpretation


def _value_kind_ok(v: Value, t: Type) -> bool:
    if isinstance(t, Prim):
        if t.name in NUMERIC_NAMES:
            return isinstance(v, VNum) and v.kind == t.name
        if t.name == "boolean":
            return isinstance(v, VBool)
        if t.name == "char":
            return isinstance(v, VChar)
        return isinstance(v, VStr)
    if isinstance(t, Array):
        return isinstance(v, VArr)
    if isinstance(t, Collection):
        return isinstance(v, VColl) and v.category == category(t)
    if isinstance(t, Ref):
        return isinstance(v, VNull) or (isinstance(v, VObj) and v.class_name == t.class_name)
    return True  # wildcard / type-param slots accept anything


def eval_conversion(plan: synth.Plan, sources: list[Value], env: TypeEnv) -> Value:
    if isinstance(plan, synth.Identity):
        return sources[0]
    if isinstance(plan, synth.NumericCast):
        return java_cast(sources[0], plan.dst)
    if isinstance(plan, synth.ConstLiteral):
        return _literal_value(plan.type, plan.value, env)
    if isinstance(plan, synth.Deconstruct):
        src = sources[0]
        if not isinstance(src, VObj) or src.class_name != plan.class_name:
            raise TypeFault(f"cannot read field {plan.field} of {summarize(src)}")
        value = src.fields[plan.field]
        if plan.then is None:
            return value
        return eval_conversion(plan.then, [value], env)
    if isinstance(plan, synth.ConstructRef):
        cls = env.resolve(plan.class_name)
        fields = {}
        for (si, sub), (fname, _) in zip(plan.field_plans, cls.fields):
            fields[fname] = eval_conversion(sub, [sources[si]], env)
        return VObj(plan.class_name, fields)
    if isinstance(plan, synth.ElementwiseCollection):
        src = sources[0]
        if not isinstance(src, (VArr, VColl)):
            raise TypeFault(f"elementwise conversion of {summarize(src)}")
        converted = [eval_conversion(plan.element_plan, [x], env) for x in src.items]
        return _build_sequence(plan.to_type, converted)
    if isinstance(plan, synth.MapEntrywise):
        src = sources[0]
        if not isinstance(src, VColl) or src.category != "Map":
            raise TypeFault(f"entrywise conversion of {summarize(src)}")
        to = plan.to_type
        items = [
            (
                eval_conversion(plan.key_plan, [k], env),
                eval_conversion(plan.value_plan, [w], env),
            )
            for k, w in src.items
        ]
        return make_collection("Map", (to.args[0], to.args[1]), items)
    raise TypeFault(f"unknown plan node: {plan!r}")


def _build_sequence(t: Type, items: list) -> Value:
    shape = synth.seq_shape(t)
    if shape is None:
        raise TypeFault(f"not a sequence type: {print_type(t)}")
    kind, elem = shape
    if kind == "Array":
        return VArr(elem, items)
    return make_collection(kind, (elem,), items)


def _literal_value(t: Type, raw, env: TypeEnv) -> Value:
    if isinstance(t, Prim):
        if t.name in NUMERIC_NAMES:
            return VNum(t.name, float(raw) if t.name in ("float", "double") else int(raw))
        if t.name == "boolean":
            return VBool(bool(raw))
        if t.name == "char":
            return VChar(str(raw))
        return VStr(str(raw))
    if isinstance(t, Ref):
        if raw is None:
            return NULL
        raise TypeFault(f"reference literal must be null, got {raw!r}")
    if isinstance(t, (Collection, Array)):
        if raw == ():
            if isinstance(t, Array):
                return VArr(t.elem, [])
            return make_collection(category(t), t.args, [])
        raise TypeFault(f"collection literal must be empty, got {raw!r}")
    raise TypeFault(f"no literal for type {print_type(t)}")


def eval_plan(
    plan: synth.AdapterPlan,
    args: list[Value],
    registry: BuiltinRegistry,
    env: TypeEnv,
) -> tuple[Value | None, list[Value]]:
    """Run an adapter: convert arguments, invoke the builtin once, route the
    result.  Returns the adapter's return value (None for void) and the
    post-call states of its parameters."""
    sig = plan.adapter_signature
    if len(args) != len(sig.params):
        raise TypeFault(f"expected {len(sig.params)} arguments, got {len(args)}")
    for v, (pname, ptype) in zip(args, sig.params):
        if not _value_kind_ok(v, ptype):
            raise TypeFault(f"argument {pname}: {summarize(v)} is not {print_type(ptype)}")

    adaptee_args = []
    for ap in plan.argument_plans:
        sources = [args[i] for i in ap.source_positions]
        adaptee_args.append(eval_conversion(ap.plan, sources, env))

    fn = registry.get(plan.builtin_key)
    ret, outs = _call_builtin(fn, adaptee_args)

    param_states = list(args)
    # A builtin-mutated adaptee argument is visible through the adapter
    # parameter only when the argument was passed through unconverted.
    for j in sorted(plan.out_params):
        if j in outs and 1 <= j <= len(plan.argument_plans):
            ap = plan.argument_plans[j - 1]
            if isinstance(ap.plan, synth.Identity) and len(ap.source_positions) == 1:
                param_states[ap.source_positions[0]] = outs[j]

    routing = plan.result_routing
    if isinstance(routing, synth.ReturnConverted):
        if ret is None:
            raise TypeFault("builtin returned nothing but a return conversion exists")
        return eval_conversion(routing.plan, [ret], env), param_states
    if isinstance(routing, synth.AppendIntoParam):
        if not isinstance(ret, (VArr, VColl)):
            raise TypeFault(f"cannot append non-sequence result {summarize(ret)}")
        pos = routing.param_index - 1
        target = param_states[pos]
        if not isinstance(target, (VArr, VColl)):
            raise TypeFault(f"append target is {summarize(target)}")
        converted = [eval_conversion(routing.element_plan, [x], env) for x in ret.items]
        if isinstance(target, VArr):
            param_states[pos] = VArr(target.elem, target.items + converted)
        else:
            param_states[pos] = make_collection(
                target.category, target.elem_types, target.items + converted
            )
        return None, param_states
    return (None, param_states)


# ---------------------------------------------------------------------------
# Test cases and the test runner


@dataclass
class TestCase:
    """One behavioral check: call the adapter with args, expect the given
    return value (iff non-void) and the given post-call parameter states
    (keyed by 1-based parameter index)."""

    __test__ = False  # data carrier, not a pytest class

    args: list
    expect_return: Value | None = None
    expect_param_states: dict[int, Value] = field(default_factory=dict)


@dataclass
class TestResult:
    index: int
    passed: bool
    detail: str | None = None


@dataclass
class TestReport:
    results: list[TestResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        lines = []
        for r in self.results:
            status = "pass" if r.passed else f"FAIL ({r.detail})"
            lines.append(f"test[{r.index}]: {status}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "results": [
                {"index": r.index, "passed": r.passed, "detail": r.detail}
                for r in self.results
            ],
        }


def run_tests(
    plan: synth.AdapterPlan,
    tests: list[TestCase],
    registry: BuiltinRegistry,
    env: TypeEnv,
) -> TestReport:
    """Run every test; faults count as failures so the caller can backtrack."""
    results = []
    void_adapter = isinstance(plan.adapter_signature.return_type, Void)
    for i, test in enumerate(tests):
        try:
            ret, states = eval_plan(plan, test.args, registry, env)
        except (TypeFault, MissingBuiltinError) as exc:
            results.append(TestResult(i, False, f"fault: {exc}"))
            continue
        detail = None
        if not void_adapter:
            detail = deep_diff(ret, test.expect_return, "return")
        for idx in sorted(test.expect_param_states):
            if detail:
                break
            detail = deep_diff(
                states[idx - 1], test.expect_param_states[idx], f"param[{idx}]"
            )
        results.append(TestResult(i, detail is None, detail))
    return TestReport(results)


def tests_from_json(data, env: TypeEnv) -> list[TestCase]:
    """Decode a JSON array of test cases in the tagged value encoding."""
    if isinstance(data, str):
        data = json.loads(data)
    out = []
    for obj in data:
        expect = obj.get("expectReturn")
        out.append(
            TestCase(
                args=[value_from_json(a, env) for a in obj.get("args", [])],
                expect_return=None if expect is None else value_from_json(expect, env),
                expect_param_states={
                    int(k): value_from_json(v, env)
                    for k, v in obj.get("expectParamStates", {}).items()
                },
            )
        )
    return out


def tests_to_json(tests: list[TestCase]) -> list:
    out = []
    for t in tests:
        obj: dict = {"args": [value_to_json(a) for a in t.args]}
        if t.expect_return is not None:
            obj["expectReturn"] = value_to_json(t.expect_return)
        if t.expect_param_states:
            obj["expectParamStates"] = {
                str(k): value_to_json(v) for k, v in t.expect_param_states.items()
            }
        out.append(obj)
    return out
