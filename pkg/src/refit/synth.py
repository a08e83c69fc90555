"""Adapter synthesis: conversion planning, default constants, plan assembly.

Given an alignment, each adaptee argument gets a conversion plan rooted at
its adapter source slot(s); unmapped adaptee arguments get default
constants; the adaptee's return value is routed to the adapter's return
or appended into a collection parameter.  Conversions come from a closed
template library: identity, numeric casts, getter deconstruction,
constructor application, elementwise collection reshaping, and entrywise
map conversion.  Plans chain statically, so an assembled adapter always
type-checks; whether it is the right adapter is for the tests to decide.

Alternative plans for one alignment are indexed like an odometer over the
per-slot alternatives (the last axis turns fastest), capped at 100.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .align import Alignment
from .distance import delta
from .typemodel import (
    Array,
    Collection,
    CorpusEntry,
    MethodSignature,
    NUMERIC_NAMES,
    ParamSlot,
    Prim,
    Ref,
    RefitError,
    Type,
    TypeEnv,
    TypeParam,
    Void,
    Wildcard,
    category,
    param_slots,
    print_type,
)

PLAN_CAP = 100  # alternatives tried per alignment before backtracking


class NoConversionError(RefitError):
    """No conversion template chain reaches the target within the depth cap."""


class IndexExhaustedError(RefitError):
    """plan_index is past the last available alternative for this alignment."""


# ---------------------------------------------------------------------------
# Conversion plan tree


class Plan:
    __slots__ = ()


@dataclass(frozen=True)
class Identity(Plan):
    type: Type


@dataclass(frozen=True)
class NumericCast(Plan):
    src: str
    dst: str


@dataclass(frozen=True)
class ConstLiteral(Plan):
    """A synthesized constant; value () denotes the empty collection."""

    type: Type
    value: object


@dataclass(frozen=True)
class Deconstruct(Plan):
    """Apply a getter; `then` converts the extracted field further (None = done)."""

    class_name: str
    field: str
    then: Plan | None = None


@dataclass(frozen=True)
class ConstructRef(Plan):
    """Invoke the all-fields constructor.

    field_plans holds, per field in declaration order, the index of the
    source slot feeding it and the plan converting that source's value.
    """

    class_name: str
    field_plans: tuple[tuple[int, Plan], ...]


@dataclass(frozen=True)
class ElementwiseCollection(Plan):
    from_type: Type
    to_type: Type
    element_plan: Plan


@dataclass(frozen=True)
class MapEntrywise(Plan):
    from_type: Type
    to_type: Type
    key_plan: Plan
    value_plan: Plan


def plan_steps(p: Plan) -> int:
    if isinstance(p, (Identity, NumericCast, ConstLiteral)):
        return 1
    if isinstance(p, Deconstruct):
        return 1 + (plan_steps(p.then) if p.then else 0)
    if isinstance(p, ConstructRef):
        return 1 + sum(plan_steps(sub) for _, sub in p.field_plans)
    if isinstance(p, ElementwiseCollection):
        return 1 + plan_steps(p.element_plan)
    if isinstance(p, MapEntrywise):
        return 1 + plan_steps(p.key_plan) + plan_steps(p.value_plan)
    raise TypeError(f"not a plan: {p!r}")


# ---------------------------------------------------------------------------
# Type shape helpers


def canon(t: Type) -> tuple:
    """Runtime shape of a type: collections collapse to their category, so
    e.g. ArrayList<int> and LinkedList<int> are the same shape."""
    if isinstance(t, Prim):
        return ("prim", t.name)
    if isinstance(t, Collection):
        return ("coll", category(t), tuple(canon(a) for a in t.args))
    if isinstance(t, Array):
        return ("array", canon(t.elem))
    if isinstance(t, Ref):
        return ("ref", t.class_name)
    if isinstance(t, TypeParam):
        return ("typeparam", t.name)
    if isinstance(t, Wildcard):
        return ("wildcard",)
    if isinstance(t, Void):
        return ("void",)
    raise TypeError(f"unshapeable: {t!r}")


def canon_eq(a: Type, b: Type) -> bool:
    return canon(a) == canon(b)


def seq_shape(t: Type) -> tuple[str, Type] | None:
    """(shape kind, element type) for reshapeable sequences: arrays and
    single-argument Vector/List/Set collections."""
    if isinstance(t, Array):
        return ("Array", t.elem)
    if isinstance(t, Collection) and len(t.args) == 1 and category(t) != "Map":
        return (category(t), t.args[0])
    return None


def _is_numeric_prim(t: Type) -> bool:
    return isinstance(t, Prim) and t.name in NUMERIC_NAMES


# ---------------------------------------------------------------------------
# Conversion planning


def _plan_single(src: Type, tgt: Type, env: TypeEnv, depth: int) -> list[Plan]:
    if canon_eq(src, tgt):
        return [Identity(tgt)]
    plans: list[Plan] = []
    if _is_numeric_prim(src) and _is_numeric_prim(tgt):
        plans.append(NumericCast(src.name, tgt.name))
        return plans
    if depth <= 0:
        return plans

    src_shape, tgt_shape = seq_shape(src), seq_shape(tgt)
    if src_shape and tgt_shape:
        for ep in _plan_single(src_shape[1], tgt_shape[1], env, depth - 1):
            plans.append(ElementwiseCollection(src, tgt, ep))

    if (
        isinstance(src, Collection)
        and isinstance(tgt, Collection)
        and category(src) == "Map"
        and category(tgt) == "Map"
        and len(src.args) == 2
        and len(tgt.args) == 2
    ):
        key_plans = _plan_single(src.args[0], tgt.args[0], env, depth - 1)
        val_plans = _plan_single(src.args[1], tgt.args[1], env, depth - 1)
        for kp, vp in itertools.islice(itertools.product(key_plans, val_plans), PLAN_CAP):
            plans.append(MapEntrywise(src, tgt, kp, vp))

    if isinstance(src, Ref):
        cls = env.resolve(src.class_name)
        if cls.gettable:
            for fname, ftype in cls.fields:
                if canon_eq(ftype, tgt):
                    plans.append(Deconstruct(cls.name, fname))
                else:
                    for sub in _plan_single(ftype, tgt, env, depth - 1):
                        plans.append(Deconstruct(cls.name, fname, sub))

    if isinstance(tgt, Ref):
        cls = env.resolve(tgt.class_name)
        if cls.constructible and cls.fields:
            per_field = [
                _plan_single(src, ftype, env, depth - 1) for _, ftype in cls.fields
            ]
            if all(per_field):
                for combo in itertools.islice(itertools.product(*per_field), PLAN_CAP):
                    plans.append(
                        ConstructRef(cls.name, tuple((0, sub) for sub in combo))
                    )

    plans.sort(key=plan_steps)  # stable: equal-step plans keep template order
    return _dedup(plans)[:PLAN_CAP]


def _plan_multi(sources: list[Type], tgt: Type, env: TypeEnv, depth: int) -> list[Plan]:
    """Construct a reference target from several sources.

    Every source must feed at least one constructor field (the alignment
    promised all of them get used).  Field-to-source assignments are
    ordered by total type distance, ties by the assignment itself, so the
    greedy best-fit assignment comes first.
    """
    if not isinstance(tgt, Ref):
        return []
    cls = env.resolve(tgt.class_name)
    if not cls.constructible or len(cls.fields) < len(sources):
        return []
    assignments = []
    for assign in itertools.product(range(len(sources)), repeat=len(cls.fields)):
        if set(assign) != set(range(len(sources))):
            continue  # must use every source
        score = sum(
            (delta(ftype, sources[si], env) for (_, ftype), si in zip(cls.fields, assign)),
            Fraction(0),
        )
        assignments.append((score, assign))
    assignments.sort()
    plans: list[Plan] = []
    for _, assign in assignments:
        per_field = [
            _plan_single(sources[si], ftype, env, depth - 1)
            for (_, ftype), si in zip(cls.fields, assign)
        ]
        if not all(per_field):
            continue
        for combo in itertools.product(*per_field):
            plans.append(
                ConstructRef(cls.name, tuple(zip(assign, combo)))
            )
            if len(plans) >= PLAN_CAP:
                return plans
    return plans


def _dedup(plans: list[Plan]) -> list[Plan]:
    seen: set[Plan] = set()
    out = []
    for p in plans:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def plan_conversion(
    sources: list[Type], target: Type, env: TypeEnv, depth: int = 3
) -> list[Plan]:
    """All conversion plans from the source types to the target, shortest
    first, at most PLAN_CAP of them.  Raises NoConversionError when the
    template library cannot bridge the types within the depth budget."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not sources:
        raise ValueError("at least one source type required")
    if len(sources) == 1:
        plans = _plan_single(sources[0], target, env, depth)
    else:
        plans = _plan_multi(sources, target, env, depth)
    if not plans:
        src_text = ", ".join(print_type(s) for s in sources)
        raise NoConversionError(f"no conversion from ({src_text}) to {print_type(target)}")
    return plans


def defaults_for(t: Type) -> list[ConstLiteral]:
    """Default constants to try for an adaptee parameter nothing maps to."""
    if _is_numeric_prim(t):
        zero, one = (0.0, 1.0) if t.name in ("float", "double") else (0, 1)
        return [ConstLiteral(t, zero), ConstLiteral(t, one)]
    if isinstance(t, Prim):
        if t.name == "boolean":
            return [ConstLiteral(t, True), ConstLiteral(t, False)]
        if t.name == "String":
            return [ConstLiteral(t, "")]
        if t.name == "char":
            return [ConstLiteral(t, "a")]
    if isinstance(t, Ref):
        return [ConstLiteral(t, None)]
    if isinstance(t, (Collection, Array)):
        return [ConstLiteral(t, ())]
    return []


# ---------------------------------------------------------------------------
# Adapter plans


class Routing:
    __slots__ = ()


@dataclass(frozen=True)
class RoutingNone(Routing):
    pass


@dataclass(frozen=True)
class ReturnConverted(Routing):
    plan: Plan


@dataclass(frozen=True)
class AppendIntoParam(Routing):
    """Convert each element of the adaptee's returned sequence and append it
    into the given adapter parameter (1-based index), never clearing it."""

    param_index: int
    element_plan: Plan


@dataclass(frozen=True)
class ArgumentPlan:
    slot: ParamSlot  # adaptee input slot this plan feeds
    source_positions: tuple[int, ...]  # adapter input positions consumed (empty = constant)
    plan: Plan


@dataclass(frozen=True)
class AdapterPlan:
    adapter_signature: MethodSignature
    adaptee_id: str
    adaptee_signature: MethodSignature
    builtin_key: str
    argument_plans: tuple[ArgumentPlan, ...]  # one per adaptee input, declaration order
    result_routing: Routing
    out_params: frozenset[int] = frozenset()


def _routing_options(
    m: Alignment,
    adapter_slots: list[ParamSlot],
    adaptee_slots: list[ParamSlot],
    env: TypeEnv,
    depth: int,
) -> list[Routing]:
    ret_slots = [s for s in adaptee_slots if s.kind == "return"]
    if not ret_slots:
        return [RoutingNone()]
    e0 = ret_slots[0]
    targets = m.mapped_targets(e0)
    if not targets:
        return [RoutingNone()]
    if len(targets) > 1:
        raise NoConversionError("return value cannot be routed to several slots")
    r = targets[0]
    if r.kind == "return":
        plans = _plan_single(e0.type, r.type, env, depth)
        if not plans:
            raise NoConversionError(f"no conversion for returned {e0.name} -> {r.name}")
        return [ReturnConverted(p) for p in plans]
    src_shape, dst_shape = seq_shape(e0.type), seq_shape(r.type)
    if src_shape is None or dst_shape is None:
        # Includes the reference-parameter case: no defined way to pour a
        # result into a plain object, so the caller backtracks.
        raise NoConversionError(f"cannot route return value into {r.name}")
    elem_plans = _plan_single(src_shape[1], dst_shape[1], env, depth)
    if not elem_plans:
        raise NoConversionError(f"no element conversion for {e0.name} -> {r.name}")
    return [AppendIntoParam(r.index, ep) for ep in elem_plans]


def generate_adapter(
    m: Alignment,
    adapter: MethodSignature,
    adaptee: CorpusEntry,
    env: TypeEnv,
    plan_index: int,
    depth: int = 3,
) -> AdapterPlan:
    """Assemble the plan_index-th adapter for this alignment.

    Mapped adaptee inputs convert from their adapter sources; unmapped ones
    take default constants; the return value is routed per the alignment.
    plan_index walks the odometer over all per-slot alternatives, last slot
    fastest, capped at PLAN_CAP combinations.
    """
    adapter_slots = param_slots(adapter)
    adaptee_slots = param_slots(adaptee.signature)
    position_of = {slot: i for i, slot in enumerate(adapter_slots)}

    axes: list[list] = []
    input_slots = [s for s in adaptee_slots if s.kind == "input"]
    for e in input_slots:
        targets = m.mapped_targets(e)
        if targets:
            positions = tuple(position_of[r] for r in targets)
            plans = plan_conversion([r.type for r in targets], e.type, env, depth)
            axes.append([ArgumentPlan(e, positions, p) for p in plans])
        else:
            consts = defaults_for(e.type)
            if not consts:
                raise NoConversionError(f"no default constant for {e.name}")
            axes.append([ArgumentPlan(e, (), c) for c in consts])
    axes.append(_routing_options(m, adapter_slots, adaptee_slots, env, depth))

    total = 1
    for axis in axes:
        total *= len(axis)
    total = min(total, PLAN_CAP)
    if plan_index >= total:
        raise IndexExhaustedError(f"plan_index {plan_index} >= {total}")

    picks, rem = [], plan_index
    for axis in reversed(axes):
        rem, i = divmod(rem, len(axis))
        picks.append(axis[i])
    picks.reverse()

    plan = AdapterPlan(
        adapter_signature=adapter,
        adaptee_id=adaptee.id,
        adaptee_signature=adaptee.signature,
        builtin_key=adaptee.builtin_key,
        argument_plans=tuple(picks[:-1]),
        result_routing=picks[-1],
        out_params=adaptee.out_params,
    )
    _check_coverage(plan)
    return plan


def _check_coverage(plan: AdapterPlan) -> None:
    """Every adapter input must feed an argument or receive the result."""
    used = set()
    for ap in plan.argument_plans:
        used.update(ap.source_positions)
    n_inputs = len(plan.adapter_signature.params)
    if isinstance(plan.result_routing, AppendIntoParam):
        used.add(plan.result_routing.param_index - 1)
    missing = set(range(n_inputs)) - used
    if missing:
        names = [plan.adapter_signature.params[i][0] for i in sorted(missing)]
        raise RefitError(f"adapter inputs unused by plan: {', '.join(names)}")


# ---------------------------------------------------------------------------
# Static checking


def check_conversion(plan: Plan, sources: list[Type], target: Type, env: TypeEnv) -> bool:
    """Do the steps chain correctly from the source types to the target?"""
    if isinstance(plan, Identity):
        return len(sources) == 1 and canon_eq(sources[0], target) and canon_eq(plan.type, target)
    if isinstance(plan, NumericCast):
        return (
            len(sources) == 1
            and canon(sources[0]) == ("prim", plan.src)
            and canon(target) == ("prim", plan.dst)
        )
    if isinstance(plan, ConstLiteral):
        return canon_eq(plan.type, target)
    if isinstance(plan, Deconstruct):
        if len(sources) != 1 or canon(sources[0]) != ("ref", plan.class_name):
            return False
        cls = env.resolve(plan.class_name)
        if not cls.gettable:
            return False
        ftype = cls.field_type(plan.field)
        if plan.then is None:
            return canon_eq(ftype, target)
        return check_conversion(plan.then, [ftype], target, env)
    if isinstance(plan, ConstructRef):
        if canon(target) != ("ref", plan.class_name):
            return False
        cls = env.resolve(plan.class_name)
        if not cls.constructible or len(plan.field_plans) != len(cls.fields):
            return False
        for (si, sub), (_, ftype) in zip(plan.field_plans, cls.fields):
            if si >= len(sources) or not check_conversion(sub, [sources[si]], ftype, env):
                return False
        return True
    if isinstance(plan, ElementwiseCollection):
        if len(sources) != 1 or not canon_eq(sources[0], plan.from_type):
            return False
        if not canon_eq(plan.to_type, target):
            return False
        fs, ts = seq_shape(plan.from_type), seq_shape(plan.to_type)
        if fs is None or ts is None:
            return False
        return check_conversion(plan.element_plan, [fs[1]], ts[1], env)
    if isinstance(plan, MapEntrywise):
        if len(sources) != 1 or not canon_eq(sources[0], plan.from_type):
            return False
        if not canon_eq(plan.to_type, target):
            return False
        f, t = plan.from_type, plan.to_type
        if not (isinstance(f, Collection) and isinstance(t, Collection)):
            return False
        if len(f.args) != 2 or len(t.args) != 2:
            return False
        return check_conversion(plan.key_plan, [f.args[0]], t.args[0], env) and (
            check_conversion(plan.value_plan, [f.args[1]], t.args[1], env)
        )
    return False


def check_adapter_plan(plan: AdapterPlan, env: TypeEnv) -> bool:
    """Static type check of the whole adapter, coverage included."""
    adapter_slots = param_slots(plan.adapter_signature)
    for ap in plan.argument_plans:
        sources = [adapter_slots[i].type for i in ap.source_positions]
        if not ap.source_positions:
            if not isinstance(ap.plan, ConstLiteral):
                return False
            if not canon_eq(ap.plan.type, ap.slot.type):
                return False
        elif not check_conversion(ap.plan, sources, ap.slot.type, env):
            return False
    ret = plan.adaptee_signature.return_type
    routing = plan.result_routing
    if isinstance(routing, ReturnConverted):
        if not check_conversion(routing.plan, [ret], plan.adapter_signature.return_type, env):
            return False
    elif isinstance(routing, AppendIntoParam):
        pname, ptype = plan.adapter_signature.params[routing.param_index - 1]
        fs, ts = seq_shape(ret), seq_shape(ptype)
        if fs is None or ts is None:
            return False
        if not check_conversion(routing.element_plan, [fs[1]], ts[1], env):
            return False
    try:
        _check_coverage(plan)
    except RefitError:
        return False
    return True


# ---------------------------------------------------------------------------
# Pseudo-source rendering


class _Emitter:
    def __init__(self):
        self.lines: list[str] = []
        self.indent = 0
        self.counter = 0

    def temp(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    def line(self, text: str):
        self.lines.append("    " * self.indent + text)

    def literal(self, t: Type, value) -> str:
        if value is None:
            return "null"
        if value == () and isinstance(t, (Collection, Array)):
            return self.empty_ctor(t)
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(t, Prim) and t.name == "char":
            return f"'{value}'"
        if isinstance(value, str):
            return '"' + value.replace('"', '\\"') + '"'
        if isinstance(value, float):
            return repr(value)
        return str(value)

    def empty_ctor(self, t: Type) -> str:
        if isinstance(t, Array):
            return f"new {print_type(t.elem)}[]{{}}"
        return f"new {print_type(t)}()"

    def add_op(self, t: Type) -> str:
        return "append" if isinstance(t, Array) else ("put" if category(t) == "Map" else "add")

    def expr(self, plan: Plan, src_exprs: list[str], env: TypeEnv) -> str:
        if isinstance(plan, Identity):
            return src_exprs[0]
        if isinstance(plan, NumericCast):
            return f"({plan.dst}) {src_exprs[0]}"
        if isinstance(plan, ConstLiteral):
            return self.literal(plan.type, plan.value)
        if isinstance(plan, Deconstruct):
            cls = env.resolve(plan.class_name)
            ftype = cls.field_type(plan.field)
            v = self.temp()
            self.line(f"{print_type(ftype)} {v} = {src_exprs[0]}.{cls.getter_name(plan.field)}();")
            if plan.then is None:
                return v
            return self.expr(plan.then, [v], env)
        if isinstance(plan, ConstructRef):
            cls = env.resolve(plan.class_name)
            parts = [
                self.expr(sub, [src_exprs[si]], env) for si, sub in plan.field_plans
            ]
            v = self.temp()
            self.line(f"{cls.name} {v} = new {cls.name}({', '.join(parts)});")
            return v
        if isinstance(plan, ElementwiseCollection):
            out = self.temp()
            self.line(f"{print_type(plan.to_type)} {out} = {self.empty_ctor(plan.to_type)};")
            from_elem = seq_shape(plan.from_type)[1]
            item = self.temp()
            self.line(f"for ({print_type(from_elem)} {item} : {src_exprs[0]}) {{")
            self.indent += 1
            converted = self.expr(plan.element_plan, [item], env)
            self.line(f"{out}.{self.add_op(plan.to_type)}({converted});")
            self.indent -= 1
            self.line("}")
            return out
        if isinstance(plan, MapEntrywise):
            out = self.temp()
            self.line(f"{print_type(plan.to_type)} {out} = {self.empty_ctor(plan.to_type)};")
            key_t = plan.from_type.args[0]
            entry = self.temp()
            self.line(f"for ({print_type(key_t)} {entry} : {src_exprs[0]}.keySet()) {{")
            self.indent += 1
            k = self.expr(plan.key_plan, [entry], env)
            v = self.expr(plan.value_plan, [f"{src_exprs[0]}.get({entry})"], env)
            self.line(f"{out}.put({k}, {v});")
            self.indent -= 1
            self.line("}")
            return out
        raise TypeError(f"not a plan: {plan!r}")


def emit_pseudo_source(plan: AdapterPlan, env: TypeEnv) -> str:
    """Deterministic Java-like rendering of an adapter plan."""
    em = _Emitter()
    sig = plan.adapter_signature
    params = ", ".join(f"{print_type(t)} {n}" for n, t in sig.params)
    em.line(f"{print_type(sig.return_type)} {sig.name}({params}) {{")
    em.indent += 1

    adapter_slots = param_slots(sig)
    arg_exprs = []
    for ap in plan.argument_plans:
        srcs = [adapter_slots[i].name for i in ap.source_positions]
        arg_exprs.append(em.expr(ap.plan, srcs, env))

    call = f"external.{plan.adaptee_signature.name}({', '.join(arg_exprs)})"
    ret_t = plan.adaptee_signature.return_type
    ret_var = None
    if isinstance(ret_t, Void):
        em.line(call + ";")
    else:
        ret_var = em.temp()
        em.line(f"{print_type(ret_t)} {ret_var} = {call};")

    routing = plan.result_routing
    if isinstance(routing, ReturnConverted):
        em.line(f"return {em.expr(routing.plan, [ret_var], env)};")
    elif isinstance(routing, AppendIntoParam):
        pname, ptype = sig.params[routing.param_index - 1]
        ret_elem = seq_shape(ret_t)[1]
        item = em.temp()
        em.line(f"for ({print_type(ret_elem)} {item} : {ret_var}) {{")
        em.indent += 1
        converted = em.expr(routing.element_plan, [item], env)
        em.line(f"{pname}.{em.add_op(ptype)}({converted});")
        em.indent -= 1
        em.line("}")

    em.indent -= 1
    em.line("}")
    return "\n".join(em.lines) + "\n"


# ---------------------------------------------------------------------------
# JSON serialization of plans


def plan_to_json(plan: Plan) -> dict:
    if isinstance(plan, Identity):
        return {"kind": "identity", "type": print_type(plan.type)}
    if isinstance(plan, NumericCast):
        return {"kind": "cast", "from": plan.src, "to": plan.dst}
    if isinstance(plan, ConstLiteral):
        value = None if plan.value == () and isinstance(plan.type, (Collection, Array)) else plan.value
        return {"kind": "const", "type": print_type(plan.type), "value": value}
    if isinstance(plan, Deconstruct):
        return {
            "kind": "deconstruct",
            "class": plan.class_name,
            "field": plan.field,
            "then": plan_to_json(plan.then) if plan.then else None,
        }
    if isinstance(plan, ConstructRef):
        return {
            "kind": "construct",
            "class": plan.class_name,
            "fields": [[si, plan_to_json(sub)] for si, sub in plan.field_plans],
        }
    if isinstance(plan, ElementwiseCollection):
        return {
            "kind": "elementwise",
            "from": print_type(plan.from_type),
            "to": print_type(plan.to_type),
            "element": plan_to_json(plan.element_plan),
        }
    if isinstance(plan, MapEntrywise):
        return {
            "kind": "entrywise",
            "from": print_type(plan.from_type),
            "to": print_type(plan.to_type),
            "key": plan_to_json(plan.key_plan),
            "value": plan_to_json(plan.value_plan),
        }
    raise TypeError(f"not a plan: {plan!r}")


def plan_from_json(obj: dict, env: TypeEnv) -> Plan:
    from .typemodel import parse_type

    kind = obj["kind"]
    if kind == "identity":
        return Identity(parse_type(obj["type"], env))
    if kind == "cast":
        return NumericCast(obj["from"], obj["to"])
    if kind == "const":
        t = parse_type(obj["type"], env)
        value = obj["value"]
        if value is None and isinstance(t, (Collection, Array)):
            value = ()
        return ConstLiteral(t, value)
    if kind == "deconstruct":
        then = plan_from_json(obj["then"], env) if obj.get("then") else None
        return Deconstruct(obj["class"], obj["field"], then)
    if kind == "construct":
        return ConstructRef(
            obj["class"],
            tuple((si, plan_from_json(sub, env)) for si, sub in obj["fields"]),
        )
    if kind == "elementwise":
        return ElementwiseCollection(
            parse_type(obj["from"], env),
            parse_type(obj["to"], env),
            plan_from_json(obj["element"], env),
        )
    if kind == "entrywise":
        return MapEntrywise(
            parse_type(obj["from"], env),
            parse_type(obj["to"], env),
            plan_from_json(obj["key"], env),
            plan_from_json(obj["value"], env),
        )
    raise ValueError(f"unknown plan kind: {kind}")


def adapter_plan_to_json(plan: AdapterPlan) -> dict:
    def sig_json(sig: MethodSignature) -> dict:
        return {
            "name": sig.name,
            "params": [[n, print_type(t)] for n, t in sig.params],
            "returns": print_type(sig.return_type),
        }

    routing = plan.result_routing
    if isinstance(routing, ReturnConverted):
        routing_json = {"kind": "return", "plan": plan_to_json(routing.plan)}
    elif isinstance(routing, AppendIntoParam):
        routing_json = {
            "kind": "append",
            "param": routing.param_index,
            "element": plan_to_json(routing.element_plan),
        }
    else:
        routing_json = {"kind": "none"}
    return {
        "adapter": sig_json(plan.adapter_signature),
        "adapteeId": plan.adaptee_id,
        "adaptee": sig_json(plan.adaptee_signature),
        "builtin": plan.builtin_key,
        "arguments": [
            {
                "param": ap.slot.name,
                "sources": list(ap.source_positions),
                "plan": plan_to_json(ap.plan),
            }
            for ap in plan.argument_plans
        ],
        "routing": routing_json,
        "outParams": sorted(plan.out_params),
    }


def adapter_plan_from_json(obj: dict, env: TypeEnv) -> AdapterPlan:
    from .typemodel import parse_type

    def sig_from(o: dict) -> MethodSignature:
        return MethodSignature(
            o["name"],
            tuple((n, parse_type(t, env)) for n, t in o["params"]),
            parse_type(o["returns"], env),
        )

    adaptee_sig = sig_from(obj["adaptee"])
    adaptee_inputs = [s for s in param_slots(adaptee_sig) if s.kind == "input"]
    by_name = {s.name: s for s in adaptee_inputs}
    args = tuple(
        ArgumentPlan(
            by_name[a["param"]],
            tuple(a["sources"]),
            plan_from_json(a["plan"], env),
        )
        for a in obj["arguments"]
    )
    r = obj["routing"]
    routing: Routing
    if r["kind"] == "return":
        routing = ReturnConverted(plan_from_json(r["plan"], env))
    elif r["kind"] == "append":
        routing = AppendIntoParam(r["param"], plan_from_json(r["element"], env))
    else:
        routing = RoutingNone()
    return AdapterPlan(
        adapter_signature=sig_from(obj["adapter"]),
        adaptee_id=obj["adapteeId"],
        adaptee_signature=adaptee_sig,
        builtin_key=obj["builtin"],
        argument_plans=args,
        result_routing=routing,
        out_params=frozenset(obj.get("outParams", [])),
    )
