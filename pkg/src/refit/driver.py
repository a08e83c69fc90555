"""The reuse loop: search, rank, align, synthesize, test, backtrack.

Candidates come back from keyword search, get re-ranked by best-alignment
cost, and are then tried in order.  For each candidate, alignments are
enumerated cheapest-first; for each alignment, alternative adapter plans
are tried in odometer order; the first plan that passes every test wins.
Work is bounded by the per-stage caps in ReuseConfig, so a run always
terminates, deterministically.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .align import build_variables, enumerate_alignments, Alignment
from .distance import DistanceCache
from .rank import rerank
from .runtime import BuiltinRegistry, TestCase, run_tests
from .search import build_index, keyword_search
from .synth import (
    AdapterPlan,
    IndexExhaustedError,
    NoConversionError,
    generate_adapter,
)
from .typemodel import (
    ClassDef,
    CorpusEntry,
    MethodSignature,
    SchemaError,
    TypeEnv,
    param_slots,
)


@dataclass
class ReuseQuery:
    signature: MethodSignature
    description: str
    tests: list[TestCase]
    class_defs: list[ClassDef] = field(default_factory=list)

    def __post_init__(self):
        for t in self.tests:
            if len(t.args) != len(self.signature.params):
                raise SchemaError(
                    f"test has {len(t.args)} args for {len(self.signature.params)} params"
                )


@dataclass
class ReuseConfig:
    top_k: int = 10
    max_alignments_per_candidate: int = 20
    max_plans_per_alignment: int = 100
    max_group: int = 4
    conversion_depth: int = 3
    dependency_cap: int = 10

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 1:
                raise ValueError(f"{name} must be positive")


@dataclass
class Attempts:
    candidates: int = 0
    alignments: int = 0
    plans: int = 0
    tests_run: int = 0


@dataclass
class ReuseResult:
    success: bool
    plan: AdapterPlan | None = None
    adaptee_id: str | None = None
    alignment: Alignment | None = None
    attempts: Attempts = field(default_factory=Attempts)
    diagnostics: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    env: TypeEnv | None = None


def compute_type_distance_matrix(
    query: MethodSignature, candidates: list[CorpusEntry], env: TypeEnv
) -> DistanceCache:
    """Distance table over every (query slot type, candidate slot type) pair.

    Later stages share the cache, so each pair is priced once; grouped
    slot lists encountered during variable building memoize lazily.
    """
    cache = DistanceCache(env)
    query_types = [s.type for s in param_slots(query)]
    for entry in candidates:
        if entry.unresolvable:
            continue
        for slot in param_slots(entry.signature):
            for qt in query_types:
                cache.delta(qt, slot.type)
    return cache


def code_reuse(
    query: ReuseQuery,
    corpus: tuple[TypeEnv, list[CorpusEntry]],
    registry: BuiltinRegistry,
    config: ReuseConfig | None = None,
) -> ReuseResult:
    """Find the first adapter over the corpus that passes all tests."""
    config = config or ReuseConfig()
    start = time.perf_counter()
    base_env, entries = corpus
    env = base_env.extended(query.class_defs)
    by_id = {e.id: e for e in entries}
    attempts = Attempts()
    diagnostics: list[str] = []

    index = build_index(entries)
    hits = keyword_search(index, query.description, config.top_k)
    if not hits:
        diagnostics.append("keyword search matched nothing")
        return ReuseResult(False, attempts=attempts, diagnostics=diagnostics,
                           elapsed=time.perf_counter() - start, env=env)

    candidate_ids = [entry_id for entry_id, _ in hits]
    cache = compute_type_distance_matrix(
        query.signature, [by_id[c] for c in candidate_ids], env
    )
    ranked = rerank(query.signature, candidate_ids, by_id, env, config.max_group, cache)

    for cand in ranked:
        entry = by_id[cand.entry_id]
        attempts.candidates += 1
        if cand.unresolvable:
            diagnostics.append(f"{entry.id}: dependencies unresolvable, skipped")
            continue
        if cand.align_cost is None:
            diagnostics.append(f"{entry.id}: no feasible alignment")
            continue
        problem = build_variables(
            query.signature, entry.signature, env, config.max_group, cache
        )
        alignments = enumerate_alignments(problem, config.max_alignments_per_candidate)
        for alignment in alignments:
            attempts.alignments += 1
            for plan_index in range(config.max_plans_per_alignment):
                try:
                    plan = generate_adapter(
                        alignment, query.signature, entry, env,
                        plan_index, config.conversion_depth,
                    )
                except IndexExhaustedError:
                    break
                except NoConversionError as exc:
                    diagnostics.append(f"{entry.id}: {exc}")
                    break  # unplannable for every index: next alignment
                attempts.plans += 1
                report = run_tests(plan, query.tests, registry, env)
                attempts.tests_run += len(report.results)
                if report.passed:
                    return ReuseResult(
                        True, plan, entry.id, alignment, attempts,
                        diagnostics, time.perf_counter() - start, env,
                    )
        diagnostics.append(f"{entry.id}: exhausted alignments without a passing plan")

    return ReuseResult(False, attempts=attempts, diagnostics=diagnostics,
                       elapsed=time.perf_counter() - start, env=env)


def query_from_json(obj: dict, env: TypeEnv) -> ReuseQuery:
    """Decode a query file: signature, description, tests, local classes."""
    from .runtime import tests_from_json
    from .typemodel import MethodSignature, class_from_json, parse_type

    scratch = TypeEnv(env.classes)
    class_defs = [class_from_json(c, scratch) for c in obj.get("classes", [])]
    params = tuple((n, parse_type(t, scratch)) for n, t in obj.get("params", []))
    sig = MethodSignature(obj["name"], params, parse_type(obj.get("returns", "void"), scratch))
    tests = tests_from_json(obj.get("tests", []), scratch)
    return ReuseQuery(sig, obj.get("description", ""), tests, class_defs)


def cost_as_float(cost: Fraction | None) -> float | None:
    return None if cost is None else float(cost)
