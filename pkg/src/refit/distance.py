"""Normalized distance between types, computed on their feature multisets.

delta(a, b) is the size of the symmetric difference between the two
feature bags divided by the sum of their sizes — a rational in [0, 1]
that is 0 exactly when the bags coincide.  The denominator is additive
(|bag(a)| + |bag(b)|): that is the only normalization under which the
engine's golden values (0.25, 0.5, 3/7, 1/9, ...) all come out right,
whereas a max-multiplicity union would give e.g. 0.4 instead of 0.25.

All arithmetic is exact (fractions.Fraction); callers convert to float
only for presentation.
"""

from __future__ import annotations

from fractions import Fraction

from .featurize import psi, psi_field_list, symmetric_difference_size
from .typemodel import Type, TypeEnv, print_type


def delta(a: Type, b: Type, env: TypeEnv | None = None) -> Fraction:
    """Distance between two types; 0 when both feature bags are empty."""
    fa, fb = psi(a, env), psi(b, env)
    denom = fa.size + fb.size
    if denom == 0:
        return Fraction(0)
    return Fraction(symmetric_difference_size(fa, fb), denom)


def delta_list(single: Type, many: list[Type], env: TypeEnv | None = None) -> Fraction:
    """Distance between one type and an ordered list of types.

    The list side is featurized with the field-list rules, so this is the
    cost of constructing/deconstructing `single` from the group `many`.
    """
    fa = psi(single, env)
    fb = psi_field_list(many, env)
    denom = fa.size + fb.size
    if denom == 0:
        return Fraction(0)
    return Fraction(symmetric_difference_size(fa, fb), denom)


class DistanceCache:
    """Memo table for delta/delta_list keyed on printed type strings.

    Purely an optimization: results are identical with or without it.
    The driver builds one per query so each distinct type pair is
    computed once across re-ranking and alignment.
    """

    def __init__(self, env: TypeEnv):
        self.env = env
        self._pairs: dict[tuple[str, str], Fraction] = {}
        self._lists: dict[tuple[str, tuple[str, ...]], Fraction] = {}

    def delta(self, a: Type, b: Type) -> Fraction:
        ka, kb = print_type(a), print_type(b)
        key = (ka, kb) if ka <= kb else (kb, ka)  # delta is symmetric
        got = self._pairs.get(key)
        if got is None:
            got = delta(a, b, self.env)
            self._pairs[key] = got
        return got

    def delta_list(self, single: Type, many: list[Type]) -> Fraction:
        key = (print_type(single), tuple(print_type(t) for t in many))
        got = self._lists.get(key)
        if got is None:
            got = delta_list(single, many, self.env)
            self._lists[key] = got
        return got

    def __len__(self) -> int:
        return len(self._pairs) + len(self._lists)

    def pair_items(self) -> list[tuple[tuple[str, str], Fraction]]:
        return sorted(self._pairs.items())
