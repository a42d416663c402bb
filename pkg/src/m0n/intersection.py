"""Closed-form intersection pairing via good multiplicity orientations.

A multiplicity orientation splits m(e)-1 over the two flags of each edge; it
is good when the flag sum at every vertex equals valency minus 3.  In top
degree at most one good orientation exists and it is forced:

    mult(f_S) = |S| - 2 - sum of m(T) over family sets T strictly inside S

with the partner flag taking the rest.  When it exists, the pairing of two
monomials of complementary degree is

    prod_v (-1)^{|v|-3} (|v|-3)! / prod_{f at v} mult(f)!^2
    * prod_e (m(e)-1)!

on the merged tree; otherwise the pairing vanishes.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import InputError
from .trees import (
    DivisorMonomial,
    MultiplicityTree,
    ROOT,
    StableTree,
    partition_profile,
)

#: Orientation maps are keyed by flags (vertex key, edge set); the vertex
#: key is the edge set of the lower vertex or ROOT, matching StableTree.
Flag = tuple


def orientation_candidate(tm: MultiplicityTree) -> dict[Flag, int]:
    """The forced orientation values, not yet checked for goodness."""
    tree, mult = tm.tree, tm.mult
    orient: dict[Flag, int] = {}
    for s in tree.sets:
        below = sum(m for t, m in mult.items() if t < s)
        inc = len(s) - 2 - below
        orient[(s, s)] = inc
        orient[(tree.parent(s), s)] = mult[s] - 1 - inc
    return orient


def is_good_orientation(tm: MultiplicityTree, orient: dict[Flag, int]) -> bool:
    """Check nonnegativity, the per-edge sum rule, and every vertex sum."""
    tree, mult = tm.tree, tm.mult
    if any(v < 0 for v in orient.values()):
        return False
    for s in tree.sets:
        if orient[(s, s)] + orient[(tree.parent(s), s)] != mult[s] - 1:
            return False
    for v in tree.vertices:
        total = sum(orient[(v, e)] for e in _incident(tree, v))
        if total != tree.valency(v) - 3:
            return False
    return True


def _incident(tree: StableTree, v):
    edges = list(tree.children(v))
    if v is not ROOT:
        edges.append(v)
    return edges


def good_orientation(tm: MultiplicityTree):
    """The unique good multiplicity orientation of a top-degree tree, or None."""
    if tm.degree != tm.n - 3:
        raise InputError(
            f"good orientations are defined in top degree {tm.n - 3}, got {tm.degree}"
        )
    orient = orientation_candidate(tm)
    return orient if is_good_orientation(tm, orient) else None


def _merge(m1: DivisorMonomial, m2: DivisorMonomial):
    items: dict = {}
    for s, e in m1.items + m2.items:
        items[s] = items.get(s, 0) + e
    return items


def pairing(m1: DivisorMonomial, m2: DivisorMonomial) -> Fraction:
    """Intersection number of two divisor monomials.

    Zero unless the degrees are complementary, the merged family is nice,
    and the merged multiplicity tree carries a good orientation.
    """
    if m1.n != m2.n:
        raise InputError("ambient n mismatch")
    n = m1.n
    if m1.degree + m2.degree != n - 3:
        return Fraction(0)
    merged = _merge(m1, m2)
    sets = list(merged)
    for idx, s in enumerate(sets):
        for t in sets[idx + 1:]:
            if partition_profile(s, t) == 4:
                return Fraction(0)
    tm = MultiplicityTree(StableTree(n, sets), merged)
    orient = good_orientation(tm)
    if orient is None:
        return Fraction(0)
    tree = tm.tree
    value = Fraction(1)
    for v in tree.vertices:
        deg = tree.valency(v) - 3
        denom = 1
        for e in _incident(tree, v):
            denom *= factorial(orient[(v, e)]) ** 2
        value *= Fraction((-1) ** deg * factorial(deg), denom)
    for s, m in tm.mult.items():
        value *= factorial(m - 1)
    assert value.denominator == 1, f"non-integral pairing {value}"
    return value


_BILINEAR_CACHE: dict = {}


def pairing_bilinear(e1, e2) -> Fraction:
    """Bilinear extension of the pairing to ring elements."""
    if e1.n != e2.n:
        raise InputError("ambient n mismatch")
    total = Fraction(0)
    for m1, c1 in e1.coeffs.items():
        for m2, c2 in e2.coeffs.items():
            key = (m1, m2) if (m1.items <= m2.items) else (m2, m1)
            if key not in _BILINEAR_CACHE:
                _BILINEAR_CACHE[key] = pairing(*key)
            total += c1 * c2 * _BILINEAR_CACHE[key]
    return total


def all_orientations(tm: MultiplicityTree):
    """Every orientation satisfying the per-edge sum rule (for searches)."""
    tree = tm.tree
    sets = list(tree.sets)

    def rec(idx, acc):
        if idx == len(sets):
            yield dict(acc)
            return
        s = sets[idx]
        for inc in range(tm.mult[s]):
            acc[(s, s)] = inc
            acc[(tree.parent(s), s)] = tm.mult[s] - 1 - inc
            yield from rec(idx + 1, acc)

    yield from rec(0, {})
