"""Interface alignment as exact 0-1 integer linear programming.

An alignment maps adaptee parameter slots onto adapter slots such that
every adapter slot is used exactly once (surjectivity) and every adaptee
slot at most once, with no many-to-many groups.  Each admissible mapping
piece is a boolean variable whose objective coefficient is the type
distance it would cost to realize; the optimum is found by exact branch
and bound over the booleans, and next-best solutions are enumerated by
adding blocking constraints and re-solving.

Group variables (one adaptee slot built from several adapter slots, or
several adaptee slots carved out of one adapter slot) are only generated
around a reference-class pivot: constructing or deconstructing has no
sensible reading for primitives and built-in collections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .distance import DistanceCache, delta, delta_list
from .typemodel import (
    MethodSignature,
    ParamSlot,
    TypeEnv,
    UnclassifiableError,
    param_slots,
    type_class,
)


class TooLargeError(Exception):
    """Brute-force oracle refused: too many variables."""


@dataclass(frozen=True)
class AlignVariable:
    """One admissible mapping piece between adaptee and adapter slots.

    adaptee_positions/adapter_positions index into the problem's slot
    lists; they are what identify the variable and order ties.
    """

    adaptee_slots: tuple[ParamSlot, ...]
    adapter_slots: tuple[ParamSlot, ...]
    adaptee_positions: tuple[int, ...]
    adapter_positions: tuple[int, ...]
    cost: Fraction

    @property
    def kind(self) -> str:
        return "one_to_many" if len(self.adaptee_slots) == 1 else "many_to_one"

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.adapter_positions, self.adaptee_positions)

    @property
    def label(self) -> str:
        e = ",".join(s.name for s in self.adaptee_slots)
        r = ",".join(s.name for s in self.adapter_slots)
        return f"{e}->{r}"


@dataclass
class AlignProblem:
    adapter: MethodSignature
    adaptee: MethodSignature
    env: TypeEnv
    adapter_slots: list[ParamSlot]  # P(R), inputs then return
    adaptee_slots: list[ParamSlot]  # P(E)
    variables: list[AlignVariable]
    vars_by_r: dict[int, list[int]]  # adapter slot position -> variable indices
    vars_by_e: dict[int, list[int]]


@dataclass(frozen=True)
class Alignment:
    """A feasible choice of variables: each adapter slot covered exactly once."""

    chosen: tuple[AlignVariable, ...]  # sorted by variable key
    cost: Fraction
    # Every adaptee slot -> the adapter slots it maps to (empty if unmapped).
    mapping_view: tuple[tuple[ParamSlot, tuple[ParamSlot, ...]], ...]

    def mapped_targets(self, e_slot: ParamSlot) -> tuple[ParamSlot, ...]:
        for slot, targets in self.mapping_view:
            if slot == e_slot:
                return targets
        return ()

    @property
    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        # For each adapter slot position in order, the adaptee positions
        # mapped onto it; total order on alignments of one problem.
        per_r: dict[int, tuple[int, ...]] = {}
        for v in self.chosen:
            for rp in v.adapter_positions:
                per_r[rp] = v.adaptee_positions
        return tuple(per_r[rp] for rp in sorted(per_r))

    def describe(self) -> str:
        return ", ".join(v.label for v in self.chosen)


def _klass(slot: ParamSlot) -> str | None:
    try:
        return type_class(slot.type)
    except UnclassifiableError:
        return None  # wildcard/type-param slots align with nothing


_TABLE_OK = {
    ("primitive", "primitive"),
    ("primitive", "reference"),
    ("reference", "primitive"),
    ("reference", "reference"),
    ("collection", "collection"),
}


def _compatible(e: ParamSlot, r: ParamSlot) -> bool:
    """Type-table plus dataflow-direction admissibility of pairing e with r."""
    ke, kr = _klass(e), _klass(r)
    if ke is None or kr is None or (ke, kr) not in _TABLE_OK:
        return False
    if e.kind == "return":
        # The adaptee's result can become the adapter's return value, or be
        # routed into an adapter parameter that can receive it by mutation.
        return r.kind == "return" or kr in ("collection", "reference")
    # Adaptee inputs are built from adapter inputs, never from the return.
    return r.kind == "input"


def build_variables(
    adapter: MethodSignature,
    adaptee: MethodSignature,
    env: TypeEnv,
    max_group: int = 4,
    cache: DistanceCache | None = None,
) -> AlignProblem:
    """Generate all admissible mapping variables with their costs.

    One-to-one pairs for every compatible (e, r); one-to-many groups when
    the adaptee slot is a reference class; many-to-one groups when the
    adapter slot is a reference class.  Group size is capped at max_group,
    and groups only range over input slots.
    """
    if max_group < 2:
        raise ValueError("max_group must be >= 2")
    d = cache.delta if cache else (lambda a, b: delta(a, b, env))
    dl = cache.delta_list if cache else (lambda a, bs: delta_list(a, bs, env))

    p_r = param_slots(adapter)
    p_e = param_slots(adaptee)
    variables: list[AlignVariable] = []

    def add(e_pos: tuple[int, ...], r_pos: tuple[int, ...], cost: Fraction):
        variables.append(
            AlignVariable(
                adaptee_slots=tuple(p_e[i] for i in e_pos),
                adapter_slots=tuple(p_r[i] for i in r_pos),
                adaptee_positions=e_pos,
                adapter_positions=r_pos,
                cost=cost,
            )
        )

    for ei, e in enumerate(p_e):
        for ri, r in enumerate(p_r):
            if _compatible(e, r):
                add((ei,), (ri,), d(e.type, r.type))

    e_inputs = [i for i, s in enumerate(p_e) if s.kind == "input"]
    r_inputs = [i for i, s in enumerate(p_r) if s.kind == "input"]

    # One adaptee reference slot constructed from a group of adapter inputs.
    for ei in e_inputs:
        e = p_e[ei]
        if _klass(e) != "reference":
            continue
        pool = [ri for ri in r_inputs if _compatible(e, p_r[ri])]
        for size in range(2, min(max_group, len(pool)) + 1):
            for combo in itertools.combinations(pool, size):
                cost = dl(e.type, [p_r[ri].type for ri in combo])
                add((ei,), combo, cost)

    # Several adaptee inputs deconstructed out of one adapter reference slot.
    for ri in r_inputs:
        r = p_r[ri]
        if _klass(r) != "reference":
            continue
        pool = [ei for ei in e_inputs if _compatible(p_e[ei], r)]
        for size in range(2, min(max_group, len(pool)) + 1):
            for combo in itertools.combinations(pool, size):
                cost = dl(r.type, [p_e[ei].type for ei in combo])
                add(combo, (ri,), cost)

    variables.sort(key=lambda v: v.key)
    vars_by_r: dict[int, list[int]] = {ri: [] for ri in range(len(p_r))}
    vars_by_e: dict[int, list[int]] = {ei: [] for ei in range(len(p_e))}
    for vi, v in enumerate(variables):
        for rp in v.adapter_positions:
            vars_by_r[rp].append(vi)
        for ep in v.adaptee_positions:
            vars_by_e[ep].append(vi)
    return AlignProblem(adapter, adaptee, env, p_r, p_e, variables, vars_by_r, vars_by_e)


@dataclass(frozen=True)
class LinearConstraint:
    slot: ParamSlot
    relation: str  # "==" or "<="
    rhs: int
    variable_indices: tuple[int, ...]

    def render(self, problem: AlignProblem) -> str:
        terms = " + ".join(f"x[{problem.variables[i].label}]" for i in self.variable_indices)
        return f"{terms or '0'} {self.relation} {self.rhs}"


def build_constraints(problem: AlignProblem) -> list[LinearConstraint]:
    """The hard constraint system: per adapter slot an equality (exactly one
    chosen variable mentions it), per adaptee slot an inequality (at most one).
    """
    out: list[LinearConstraint] = []
    for ri, slot in enumerate(problem.adapter_slots):
        out.append(LinearConstraint(slot, "==", 1, tuple(problem.vars_by_r[ri])))
    for ei, slot in enumerate(problem.adaptee_slots):
        out.append(LinearConstraint(slot, "<=", 1, tuple(problem.vars_by_e[ei])))
    return out


def _make_alignment(problem: AlignProblem, chosen_indices: list[int]) -> Alignment:
    chosen = tuple(sorted((problem.variables[i] for i in chosen_indices), key=lambda v: v.key))
    cost = sum((v.cost for v in chosen), Fraction(0))
    mapped: dict[int, tuple[ParamSlot, ...]] = {}
    for v in chosen:
        for ep in v.adaptee_positions:
            mapped[ep] = v.adapter_slots
    view = tuple(
        (slot, mapped.get(ei, ())) for ei, slot in enumerate(problem.adaptee_slots)
    )
    return Alignment(chosen, cost, view)


def _branch_and_bound(
    problem: AlignProblem, blocked: set[frozenset[int]]
) -> list[int] | None:
    """Minimum-cost feasible choice of variables not in `blocked`.

    Exact search: branch on the uncovered adapter slot with the fewest
    usable variables, bound with the partial cost (all costs are >= 0, so
    a partial sum is an admissible lower bound).  Ties in cost resolve to
    the smallest alignment sort key, which makes enumeration deterministic.
    """
    n_r = len(problem.adapter_slots)
    variables = problem.variables
    best: tuple[Fraction, tuple, frozenset[int]] | None = None

    def align_key(chosen: list[int]) -> tuple:
        per_r: dict[int, tuple[int, ...]] = {}
        for i in chosen:
            v = variables[i]
            for rp in v.adapter_positions:
                per_r[rp] = v.adaptee_positions
        return tuple(per_r[rp] for rp in sorted(per_r))

    def usable(vi: int, covered: set[int], used_e: set[int]) -> bool:
        v = variables[vi]
        return not (
            any(rp in covered for rp in v.adapter_positions)
            or any(ep in used_e for ep in v.adaptee_positions)
        )

    def recurse(chosen: list[int], covered: set[int], used_e: set[int], cost: Fraction):
        nonlocal best
        if best is not None and cost > best[0]:
            return
        if len(covered) == n_r:
            key = frozenset(chosen)
            if key in blocked:
                return
            cand = (cost, align_key(chosen), key)
            if best is None or (cand[0], cand[1]) < (best[0], best[1]):
                best = cand
            return
        # Fail-first: the uncovered adapter slot with the fewest options.
        branch_r, options = -1, None
        for rp in range(n_r):
            if rp in covered:
                continue
            opts = [vi for vi in problem.vars_by_r[rp] if usable(vi, covered, used_e)]
            if options is None or len(opts) < len(options):
                branch_r, options = rp, opts
                if not opts:
                    return  # this slot can no longer be covered
        for vi in options:  # already in variable-key order
            v = variables[vi]
            chosen.append(vi)
            covered.update(v.adapter_positions)
            used_e.update(v.adaptee_positions)
            recurse(chosen, covered, used_e, cost + v.cost)
            chosen.pop()
            covered.difference_update(v.adapter_positions)
            used_e.difference_update(v.adaptee_positions)

    recurse([], set(), set(), Fraction(0))
    if best is None:
        return None
    return sorted(best[2])


def solve_optimal(problem: AlignProblem) -> Alignment | None:
    """Lowest-cost alignment, or None when the constraints are unsatisfiable."""
    chosen = _branch_and_bound(problem, set())
    if chosen is None:
        return None
    return _make_alignment(problem, chosen)


def enumerate_alignments(problem: AlignProblem, limit: int) -> list[Alignment]:
    """Distinct feasible alignments in nondecreasing cost order.

    After each solution the exact chosen set is blocked and the solver
    re-runs, until exhaustion or `limit` solutions.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out: list[Alignment] = []
    blocked: set[frozenset[int]] = set()
    while len(out) < limit:
        chosen = _branch_and_bound(problem, blocked)
        if chosen is None:
            break
        blocked.add(frozenset(chosen))
        out.append(_make_alignment(problem, chosen))
    return out


def brute_force_alignments(problem: AlignProblem) -> list[Alignment]:
    """Testing oracle: every feasible subset of variables, by exhaustion.

    Walks the full include/exclude tree over the variable list (subtrees
    whose partial choice already double-covers a slot cannot contain a
    feasible superset and are cut).  Results sort by (cost, sort_key),
    the same order the solver enumerates.
    """
    n = len(problem.variables)
    if n > 25:
        raise TooLargeError(f"{n} variables is beyond the brute-force cap")
    all_r = set(range(len(problem.adapter_slots)))
    found: list[Alignment] = []

    def walk(idx: int, chosen: list[int], covered: set[int], used_e: set[int]):
        if idx == n:
            if covered == all_r:
                found.append(_make_alignment(problem, chosen))
            return
        v = problem.variables[idx]
        if not (
            any(rp in covered for rp in v.adapter_positions)
            or any(ep in used_e for ep in v.adaptee_positions)
        ):
            chosen.append(idx)
            covered.update(v.adapter_positions)
            used_e.update(v.adaptee_positions)
            walk(idx + 1, chosen, covered, used_e)
            chosen.pop()
            covered.difference_update(v.adapter_positions)
            used_e.difference_update(v.adaptee_positions)
        walk(idx + 1, chosen, covered, used_e)

    walk(0, [], set(), set())
    found.sort(key=lambda a: (a.cost, a.sort_key))
    return found


def cost_of(m: Alignment, env: TypeEnv) -> Fraction:
    """Recompute an alignment's cost from its slots (not the cached
    per-variable costs): group pieces price the pivot against the list of
    its partners, one-to-one pieces price the plain pair."""
    total = Fraction(0)
    for v in m.chosen:
        if len(v.adapter_slots) > 1:
            total += delta_list(
                v.adaptee_slots[0].type, [s.type for s in v.adapter_slots], env
            )
        elif len(v.adaptee_slots) > 1:
            total += delta_list(
                v.adapter_slots[0].type, [s.type for s in v.adaptee_slots], env
            )
        else:
            total += delta(v.adaptee_slots[0].type, v.adapter_slots[0].type, env)
    return total
