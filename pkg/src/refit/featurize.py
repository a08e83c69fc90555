"""Bag-of-features representation of types.

A type is summarized as a multiset of feature tokens: primitive names,
class names, collection categories, the "Array" marker, and the attribute
tags "numeric" and "collection".  Reference types unroll their fields one
level deep; fields that are themselves reference types contribute only
their class name, which keeps recursive classes finite.

Multisets combine additively: summing two bags adds per-token
multiplicities, and the sizes of both bags add in the distance
denominator.  (This is the only reading consistent with the worked
distance values; see the distance module.)
"""

from __future__ import annotations

from .typemodel import (
    Array,
    Collection,
    Prim,
    Ref,
    Type,
    TypeEnv,
    TypeParam,
    Void,
    Wildcard,
    category,
    is_numeric,
)


class FeatureMultiset:
    """Immutable multiset of feature tokens with additive combination."""

    __slots__ = ("counts", "_size")

    def __init__(self, counts: dict[str, int] | None = None):
        cleaned = {k: v for k, v in (counts or {}).items() if v > 0}
        object.__setattr__(self, "counts", cleaned)
        object.__setattr__(self, "_size", sum(cleaned.values()))

    @classmethod
    def of(cls, *tokens: str) -> "FeatureMultiset":
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        return cls(counts)

    @property
    def size(self) -> int:
        return self._size

    def __add__(self, other: "FeatureMultiset") -> "FeatureMultiset":
        counts = dict(self.counts)
        for tok, n in other.counts.items():
            counts[tok] = counts.get(tok, 0) + n
        return FeatureMultiset(counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureMultiset) and self.counts == other.counts

    def __hash__(self) -> int:
        return hash(frozenset(self.counts.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{t}:{n}" for t, n in sorted(self.counts.items()))
        return "{" + inner + "}"


EMPTY = FeatureMultiset()


def multiset_sum(a: FeatureMultiset, b: FeatureMultiset) -> FeatureMultiset:
    return a + b


def symmetric_difference_size(a: FeatureMultiset, b: FeatureMultiset) -> int:
    """Total multiplicity by which the two bags disagree, per token."""
    total = 0
    for tok in a.counts.keys() | b.counts.keys():
        total += abs(a.counts.get(tok, 0) - b.counts.get(tok, 0))
    return total


def psi(t: Type, env: TypeEnv | None = None) -> FeatureMultiset:
    """Feature multiset of a type.

    Numeric primitives contribute their name plus "numeric"; other
    primitives just their name.  Collections contribute their category
    plus "collection", summed with the features of each type argument.
    Arrays add {"Array", "collection"} on top of their element.
    Wildcards, type parameters, and void are empty.  A reference type
    contributes its class name plus its fields, unrolled one level.
    """
    env = env or TypeEnv()
    if isinstance(t, Prim):
        if is_numeric(t):
            return FeatureMultiset.of(t.name, "numeric")
        return FeatureMultiset.of(t.name)
    if isinstance(t, Collection):
        bag = FeatureMultiset.of(category(t), "collection")
        for arg in t.args:
            bag = bag + psi(arg, env)
        return bag
    if isinstance(t, Array):
        return psi(t.elem, env) + FeatureMultiset.of("Array", "collection")
    if isinstance(t, (Wildcard, TypeParam, Void)):
        return EMPTY
    if isinstance(t, Ref):
        cls = env.resolve(t.class_name)
        return FeatureMultiset.of(t.class_name) + psi_field_list(
            [ftype for _, ftype in cls.fields], env
        )
    raise TypeError(f"unfeaturizable: {t!r}")


def psi_field_list(types: list[Type], env: TypeEnv | None = None) -> FeatureMultiset:
    """Features of an ordered field (or parameter) list.

    Reference-typed entries contribute only their class name — this is the
    one-level unrolling that keeps recursive classes finite.
    """
    env = env or TypeEnv()
    bag = EMPTY
    for t in types:
        if isinstance(t, Ref):
            bag = bag + FeatureMultiset.of(t.class_name)
        else:
            bag = bag + psi(t, env)
    return bag
