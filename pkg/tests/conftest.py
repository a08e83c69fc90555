"""Shared fixtures: class environments, signature builders, random generators."""

from __future__ import annotations

import random

import pytest

from refit.align import build_variables
from refit.typemodel import (
    Array,
    ClassDef,
    Collection,
    MethodSignature,
    Prim,
    Ref,
    TypeEnv,
    Void,
)

VOID = Void()
INT = Prim("int")
LONG = Prim("long")
DOUBLE = Prim("double")
BOOL = Prim("boolean")
STRING = Prim("String")


@pytest.fixture
def point_env() -> TypeEnv:
    env = TypeEnv()
    env.add(ClassDef("Point", (("x", INT), ("y", INT))))
    env.add(ClassDef("ListNode", (("key", INT), ("next", Ref("ListNode")))))
    return env


@pytest.fixture
def pair_problem(point_env):
    """Adapter (Point, long) -> void against adaptee (int, int, long) -> void:
    the ten-variable grouping workhorse used across the alignment tests."""
    adapter = MethodSignature("plot", (("p", Ref("Point")), ("t", LONG)), VOID)
    adaptee = MethodSignature(
        "mark", (("a", INT), ("b", INT), ("c", LONG)), VOID
    )
    return build_variables(adapter, adaptee, point_env, max_group=4)


def sig(name: str, params: list[tuple[str, object]], returns=VOID) -> MethodSignature:
    return MethodSignature(name, tuple(params), returns)


# ---------------------------------------------------------------------------
# Randomized inputs (seeded; deterministic across runs)

RANDOM_CLASSES = [
    ClassDef("Point", (("x", INT), ("y", INT))),
    ClassDef("Span", (("lo", LONG), ("hi", LONG))),
    ClassDef("Score", (("label", STRING), ("value", DOUBLE))),
]


def random_env() -> TypeEnv:
    env = TypeEnv()
    for cls in RANDOM_CLASSES:
        env.add(cls)
    return env


def random_type(rng: random.Random, depth: int = 2):
    """A type drawn across all three classes (primitive/collection/reference)."""
    pick = rng.random()
    if depth <= 0 or pick < 0.45:
        return rng.choice([INT, LONG, DOUBLE, BOOL, STRING])
    if pick < 0.75:
        elem = random_type(rng, depth - 1)
        raw = rng.choice(["Vector", "List", "ArrayList", "Set", "HashSet"])
        if rng.random() < 0.25:
            return Array(elem)
        return Collection(raw, (elem,))
    if pick < 0.85:
        return Collection("HashMap", (rng.choice([INT, STRING]), random_type(rng, 0)))
    return Ref(rng.choice(RANDOM_CLASSES).name)


def random_signature(rng: random.Random, name: str, max_params: int = 4) -> MethodSignature:
    n = rng.randint(0, max_params)
    params = tuple((f"{name}_{i}", random_type(rng)) for i in range(n))
    returns = VOID if rng.random() < 0.5 else random_type(rng)
    return MethodSignature(name, params, returns)


def _related(rng: random.Random, t):
    """A type in the same class band as t, so pairings stay admissible."""
    kind = type_class_of(t)
    if kind == "primitive":
        return rng.choice([INT, LONG, DOUBLE, BOOL, STRING, t])
    if kind == "collection":
        if rng.random() < 0.5:
            return t
        return rng.choice([Array(INT), Collection("Vector", (INT,)), Collection("List", (DOUBLE,))])
    return rng.choice([Ref(c.name) for c in RANDOM_CLASSES] + [t])


def type_class_of(t) -> str:
    from refit.typemodel import type_class

    return type_class(t)


def random_problem(rng: random.Random, env: TypeEnv, max_group: int = 3, max_vars: int = 14):
    """A random alignment problem small enough for the brute-force oracle;
    returns None when the draw has too many variables.

    Adaptee slot types are biased toward the adapter's (cloned, related, or
    fresh), so a healthy share of problems is feasible with several
    alignments rather than trivially infeasible.
    """
    adapter = random_signature(rng, "r", max_params=3)
    adapter_types = [t for _, t in adapter.params]
    n = rng.randint(1, 4)
    params = []
    for i in range(n):
        pick = rng.random()
        if adapter_types and pick < 0.4:
            params.append((f"e_{i}", rng.choice(adapter_types)))
        elif adapter_types and pick < 0.7:
            params.append((f"e_{i}", _related(rng, rng.choice(adapter_types))))
        else:
            params.append((f"e_{i}", random_type(rng)))
    if isinstance(adapter.return_type, Void) or rng.random() < 0.3:
        returns = VOID if rng.random() < 0.6 else random_type(rng)
    else:
        returns = _related(rng, adapter.return_type) if rng.random() < 0.7 else random_type(rng)
    adaptee = MethodSignature("e", tuple(params), returns)
    problem = build_variables(adapter, adaptee, env, max_group)
    if len(problem.variables) > max_vars:
        return None
    return problem
