"""Brute-force arithmetic in the boundary-divisor presentation of H*.

The ring for n marked points is generated by classes D_S, S a subset of
{1..n-1} with 2 <= |S| <= n-2, modulo: products of profile-4 pairs vanish,
and for each choice i,j in S, k outside S (and not n) the square rewrites as

    D_S^2 = - sum_{ {i,j} <= T < S }        D_S D_T
            - sum_{ S < T <= {1..n-1}\\{k} } D_S D_T .

Repeated rewriting turns any element into a combination of good (square-free)
monomials; the degree-(n-3) coefficients give the integral functional.  This
module is the independent oracle against which the closed intersection
formula and the basis machinery are validated, so it deliberately shares no
code with them beyond the tree encodings.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import CapabilityError, InputError
from .trees import (
    DivisorMonomial,
    StableTree,
    ROOT,
    canonical_family,
    enumerate_nice_families,
    partition_profile,
    subset_key,
    unit_monomial,
    validate_subset,
)

GRADED_BOUND = 7  # full graded linear algebra is exercised up to here


class RingElement:
    """Sparse rational combination of divisor monomials with fixed ambient n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        self.n = n
        self.coeffs: dict[DivisorMonomial, Fraction] = {}
        if coeffs:
            for mono, c in dict(coeffs).items():
                self._add(mono, c)

    def _add(self, mono: DivisorMonomial, c) -> None:
        if mono.n != self.n:
            raise InputError("ambient n mismatch")
        c = Fraction(c)
        if c == 0:
            return
        new = self.coeffs.get(mono, Fraction(0)) + c
        if new == 0:
            self.coeffs.pop(mono, None)
        else:
            self.coeffs[mono] = new

    @classmethod
    def zero(cls, n: int) -> "RingElement":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "RingElement":
        return cls(n, {unit_monomial(n): Fraction(1)})

    @classmethod
    def generator(cls, n: int, s) -> "RingElement":
        return cls.from_monomial(DivisorMonomial.from_sets(n, [s]))

    @classmethod
    def from_monomial(cls, mono: DivisorMonomial, c=1) -> "RingElement":
        return cls(mono.n, {mono: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RingElement") -> "RingElement":
        if self.n != other.n:
            raise InputError("ambient n mismatch")
        out = RingElement(self.n, self.coeffs)
        for mono, c in other.coeffs.items():
            out._add(mono, c)
        return out

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(-1)

    def scale(self, c) -> "RingElement":
        c = Fraction(c)
        if c == 0:
            return RingElement.zero(self.n)
        return RingElement(self.n, {m: v * c for m, v in self.coeffs.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        if self.n != other.n:
            raise InputError("ambient n mismatch")
        out = RingElement.zero(self.n)
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                prod = m1 * m2
                if prod.is_nice:
                    out._add(prod, c1 * c2)
        return out

    def degrees(self) -> set[int]:
        return {m.degree for m in self.coeffs}

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [
            f"{c}*{m!r}"
            for m, c in sorted(self.coeffs.items(), key=lambda kv: repr(kv[0]))
        ]
        return " + ".join(parts)


def _square_targets(mono: DivisorMonomial, s, i, j, k):
    """Replacement sets T of the square rewriting rule for D_s^2 in mono.

    Yields monomials obtained by lowering the exponent of D_s and raising
    D_T, for T in the two index groups; profile-4 targets against the other
    factors of the monomial are dropped.
    """
    n = mono.n
    others = [t for t in mono.sets if t != s]
    base = [(t, e) for t, e in mono.items if t != s]
    base.append((s, mono.exponent(s) - 1))

    def emit(t):
        if all(partition_profile(t, u) != 4 for u in others):
            yield DivisorMonomial(n, base + [(t, 1)])

    inner_pool = sorted(s - {i, j})
    for size in range(len(inner_pool)):
        for extra in combinations(inner_pool, size):
            t = frozenset({i, j}) | frozenset(extra)
            if len(t) < len(s):
                yield from emit(t)
    outer_pool = sorted(frozenset(range(1, n)) - s - {k})
    for size in range(1, len(outer_pool) + 1):
        for extra in combinations(outer_pool, size):
            yield from emit(s | frozenset(extra))


def rewrite_square(elem: RingElement, s, choice) -> RingElement:
    """Apply the square rewriting for D_s with the explicit choice (i, j, k).

    Every monomial of elem carrying D_s with exponent >= 2 is replaced by
    the rule above; other monomials pass through unchanged.
    """
    s = frozenset(s)
    i, j, k = choice
    n = elem.n
    if i not in s or j not in s or i == j:
        raise InputError("need distinct i, j in S")
    if k in s or not 1 <= k <= n - 1:
        raise InputError("need k outside S within 1..n-1")
    out = RingElement.zero(n)
    for mono, c in elem.coeffs.items():
        if mono.exponent(s) >= 2:
            for target in _square_targets(mono, s, i, j, k):
                out._add(target, -c)
        else:
            out._add(mono, c)
    return out


def default_choice(mono: DivisorMonomial, s) -> tuple[int, int, int]:
    """Deterministic terminating choice for rewriting D_s^2 inside mono.

    i, j are the two smallest elements of s.  k is taken inside the minimal
    factor set strictly containing s when one exists; this blocks the
    rewriting from bumping that factor's exponent back up, which is what
    guarantees termination.  Without such a parent, k is the smallest
    element outside s.
    """
    elems = sorted(s)
    i, j = elems[0], elems[1]
    parents = [t for t in mono.sets if s < t]
    if parents:
        parent = min(parents, key=len)
        k = min(parent - s)
    else:
        k = min(frozenset(range(1, mono.n)) - s)
    return i, j, k


_NF_CACHE: dict[DivisorMonomial, dict] = {}


def _reduce_monomial(mono: DivisorMonomial, choice_fn) -> dict[DivisorMonomial, Fraction]:
    """Expansion of a nice monomial over good monomials (cached)."""
    use_cache = choice_fn is default_choice
    if use_cache and mono in _NF_CACHE:
        return _NF_CACHE[mono]
    squared = [t for t, e in mono.items if e >= 2]
    if not squared:
        result = {mono: Fraction(1)}
    else:
        s = squared[0]
        i, j, k = choice_fn(mono, s)
        result: dict[DivisorMonomial, Fraction] = {}
        for target in _square_targets(mono, s, i, j, k):
            for good, c in _reduce_monomial(target, choice_fn).items():
                new = result.get(good, Fraction(0)) - c
                if new == 0:
                    result.pop(good, None)
                else:
                    result[good] = new
    if use_cache:
        _NF_CACHE[mono] = result
    return result


def normal_form(elem: RingElement, choice_fn=default_choice) -> RingElement:
    """Equal element supported on good monomials only."""
    out = RingElement.zero(elem.n)
    for mono, c in elem.coeffs.items():
        for good, gc in _reduce_monomial(mono, choice_fn).items():
            out._add(good, c * gc)
    return out


def integral(elem: RingElement, choice_fn=default_choice) -> Fraction:
    """The degree-(n-3) functional: top good monomials count 1, rest 0."""
    if len(elem.degrees()) > 1:
        raise InputError("integral needs a homogeneous element")
    top = elem.n - 3
    if elem.degrees() != {top}:
        return Fraction(0)
    nf = normal_form(elem, choice_fn)
    return sum(nf.coeffs.values(), Fraction(0))


def oracle_pairing(m1: DivisorMonomial, m2: DivisorMonomial, choice_fn=default_choice) -> Fraction:
    """Pairing of two monomials by ring reduction; 0 on degree mismatch."""
    if m1.n != m2.n:
        raise InputError("ambient n mismatch")
    if m1.degree + m2.degree != m1.n - 3:
        return Fraction(0)
    prod = m1 * m2
    if not prod.is_nice:
        return Fraction(0)
    return integral(RingElement.from_monomial(prod), choice_fn)


# -- linear relations among good monomials ------------------------------


def _vertex_flags(tree: StableTree, v):
    """Flags at v as (content, is_up): children, own tails, upward flag.

    The upward flag is the incoming edge, or tail n at the root.  Contents
    are the label sets hanging below each flag.
    """
    flags = [(c, False) for c in tree.children(v)]
    labels = tree.labels_at(v)
    flags.extend((frozenset({l}), False) for l in sorted(labels - {tree.n}))
    if v is ROOT:
        flags.append((frozenset({tree.n}), True))
    else:
        flags.append((frozenset(range(1, tree.n)) - v, True))
    return flags


def _split_terms(tree, flags, pair_a, pair_b, rest):
    """Monomial families from all splits with pair_a, pair_b separated."""
    n = tree.n
    out = []
    for bits in range(1 << len(rest)):
        side_a = list(pair_a)
        side_b = list(pair_b)
        for idx, f in enumerate(rest):
            (side_a if bits >> idx & 1 else side_b).append(f)
        down = side_b if any(up for _, up in side_a) else side_a
        new_set = frozenset().union(*(content for content, _ in down))
        out.append(canonical_family(tree.sets + (new_set,)))
    return out


def relation_rows(n: int, d: int):
    """Sparse rows of the additive relations in degree d.

    Every stable tree with d-1 edges, vertex, and flag quadruple i, j, k, l
    contributes the relation equating the split sums over ij|kl, ik|jl and
    il|jk; rows are dicts over canonical degree-d families.
    """
    from .trees import enumerate_stable_trees

    for tree in enumerate_stable_trees(n, d - 1):
        for v in tree.vertices:
            flags = _vertex_flags(tree, v)
            if len(flags) < 4:
                continue
            for quad in combinations(flags, 4):
                f1, f2, f3, f4 = quad
                rest = [f for f in flags if f not in quad]
                pairings = [
                    ((f1, f2), (f3, f4)),
                    ((f1, f3), (f2, f4)),
                    ((f1, f4), (f2, f3)),
                ]
                sums = [
                    _split_terms(tree, flags, pa, pb, rest) for pa, pb in pairings
                ]
                for a, b in ((0, 1), (0, 2)):
                    row: dict[tuple, int] = {}
                    for fam in sums[a]:
                        row[fam] = row.get(fam, 0) + 1
                    for fam in sums[b]:
                        row[fam] = row.get(fam, 0) - 1
                    row = {k: c for k, c in row.items() if c}
                    if row:
                        yield row


def sparse_rank(rows) -> int:
    """Rank of sparse integer rows (columns keyed by hashables)."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row, key=_col_key)
            if lead not in pivots:
                g = gcd(*map(abs, row.values())) if len(row) > 1 else abs(row[lead])
                if g > 1:
                    row = {c: v // g for c, v in row.items()}
                pivots[lead] = row
                rank += 1
                break
            piv = pivots[lead]
            a, b = piv[lead], row[lead]
            new = {}
            for c, v in row.items():
                new[c] = v * a
            for c, v in piv.items():
                new[c] = new.get(c, 0) - v * b
            row = {c: v for c, v in new.items() if v}
            if row:
                g = gcd(*map(abs, row.values())) if len(row) > 1 else abs(min(row.values(), key=abs))
                if g > 1:
                    row = {c: v // g for c, v in row.items()}
    return rank


def _col_key(col):
    return tuple(subset_key(s) for s in col)


def graded_dimensions(n: int) -> list[int]:
    """Dimension of each graded piece, degree 0 through n-3."""
    if n < 3:
        raise InputError("need n >= 3")
    if n > GRADED_BOUND:
        raise CapabilityError(f"graded linear algebra is bounded at n <= {GRADED_BOUND}")
    dims = [1]
    for d in range(1, n - 2):
        count = len(enumerate_nice_families(n, d))
        dims.append(count - sparse_rank(relation_rows(n, d)))
    return dims


def clear_caches() -> None:
    _NF_CACHE.clear()
