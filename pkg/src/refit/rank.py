"""Re-rank keyword search results by optimal-alignment cost.

The primary key is the cost of the best interface alignment between the
query signature and each candidate's signature (ascending: equivalent to
descending type-similarity score, the cost's multiplicative inverse, but
with no division-by-zero on perfect matches).  Candidates with no
feasible alignment sink below all feasible ones, and entries flagged
unresolvable sink below those; the original keyword order breaks ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .align import build_variables, solve_optimal
from .distance import DistanceCache
from .typemodel import CorpusEntry, MethodSignature, TypeEnv


@dataclass
class RankedCandidate:
    entry_id: str
    original_rank: int  # 1-based position in the keyword ranking
    align_cost: Fraction | None  # None when no feasible alignment exists
    unresolvable: bool = False
    final_rank: int = 0

    @property
    def order_key(self):
        if self.unresolvable:
            return (2, Fraction(0), self.original_rank)
        if self.align_cost is None:
            return (1, Fraction(0), self.original_rank)
        return (0, self.align_cost, self.original_rank)


def rerank(
    query: MethodSignature,
    candidate_ids: list[str],
    corpus: dict[str, CorpusEntry],
    env: TypeEnv,
    max_group: int = 4,
    cache: DistanceCache | None = None,
) -> list[RankedCandidate]:
    """Sort candidates by best-alignment cost, stably against keyword order.

    Alignment here uses the same group-size cap as synthesis, so the cost a
    candidate is ranked by is the cost the reuse loop will actually pursue.
    """
    ranked: list[RankedCandidate] = []
    for pos, entry_id in enumerate(candidate_ids, start=1):
        entry = corpus[entry_id]
        if entry.unresolvable:
            ranked.append(RankedCandidate(entry_id, pos, None, unresolvable=True))
            continue
        problem = build_variables(query, entry.signature, env, max_group, cache)
        best = solve_optimal(problem)
        ranked.append(
            RankedCandidate(entry_id, pos, None if best is None else best.cost)
        )
    ranked.sort(key=lambda c: c.order_key)
    for i, cand in enumerate(ranked, start=1):
        cand.final_rank = i
    return ranked
