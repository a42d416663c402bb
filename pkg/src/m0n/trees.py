"""Stable n-trees, nested subset families, and divisor monomials.

A stable tree with n labeled tails (every vertex of valency >= 3) is stored
in its canonical subset encoding: the family of edge sets.  Cutting an edge
splits the labels {1..n} into two parts; the edge is encoded by the part not
containing the distinguished label n, a subset S of {1..n-1} with
2 <= |S| <= n-2.  A family of such subsets is the edge family of a stable
tree exactly when its members are pairwise nested or disjoint, so trees,
enumeration and isomorphism testing all reduce to laminar-family
combinatorics.

Vertices are keyed by their incoming edge set (the subset below them); the
root, which carries tail n, is keyed by ROOT.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import InputError

Subset = frozenset

#: Vertex key of the root vertex (the vertex carrying tail n).
ROOT = None


def subset_key(s: Subset) -> tuple:
    """Canonical sort key for an edge subset: by size, then lexicographic."""
    return (len(s), tuple(sorted(s)))


def canonical_family(sets: Iterable[Subset]) -> tuple[Subset, ...]:
    return tuple(sorted((frozenset(s) for s in sets), key=subset_key))


def validate_subset(n: int, s: Subset) -> Subset:
    s = frozenset(s)
    if not all(isinstance(i, int) and 1 <= i <= n - 1 for i in s):
        raise InputError(f"subset {sorted(s)} not within 1..{n - 1}")
    if not 2 <= len(s) <= n - 2:
        raise InputError(
            f"subset {sorted(s)} has size {len(s)}, needs 2 <= size <= {n - 2}"
        )
    return s


def normalize_part(n: int, part: Iterable[int]) -> Subset:
    """Encode one part of a stable 2-partition of {1..n} as a subset.

    Returns the part not containing n, complementing if necessary.
    """
    part = frozenset(part)
    if n in part:
        part = frozenset(range(1, n + 1)) - part
    return validate_subset(n, part)


def partition_profile(s: Subset, t: Subset) -> int:
    """Number of nonempty pairwise distinct intersections of two 2-partitions.

    In the subset encoding (both sets omit the distinguished label) this is
    2 for equal sets, 3 for nested or disjoint sets, and 4 for sets that
    intersect without either containing the other.  Products of boundary
    divisors with profile 4 vanish.
    """
    s, t = frozenset(s), frozenset(t)
    if s == t:
        return 2
    inter = s & t
    if not inter or inter == s or inter == t:
        return 3
    return 4


def is_nice_family(sets: Iterable[Subset]) -> bool:
    """True when all pairs are nested or disjoint (no profile-4 pair)."""
    sets = list(sets)
    return all(
        partition_profile(a, b) != 4 for a, b in combinations(sets, 2)
    )


@dataclass(frozen=True)
class LabelSet:
    """The tail labels {1..n} with n as the distinguished (root) label."""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise InputError("need n >= 3")

    @property
    def encodable(self) -> range:
        """Labels that may appear inside edge subsets."""
        return range(1, self.n)


class StableTree:
    """A stable n-tree in canonical form: its nested family of edge sets.

    Immutable after construction.  Structural data (parents, children,
    labels at each vertex, valencies) is derived once in __init__.
    """

    __slots__ = ("n", "sets", "_parent", "_children", "_labels", "_valency")

    def __init__(self, n: int, sets: Iterable[Subset]):
        if n < 3:
            raise InputError("need n >= 3")
        family = canonical_family(validate_subset(n, s) for s in sets)
        if len(set(family)) != len(family):
            raise InputError("edge sets must be distinct")
        if not is_nice_family(family):
            raise InputError("edge sets must be pairwise nested or disjoint")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "sets", family)

        parent: dict[Subset, Optional[Subset]] = {}
        for s in family:
            supers = [t for t in family if s < t]
            parent[s] = min(supers, key=len) if supers else ROOT
        children: dict[Optional[Subset], list] = {ROOT: []}
        for s in family:
            children[s] = []
        for s in family:
            children[parent[s]].append(s)
        for v in children:
            children[v].sort(key=subset_key)

        labels: dict[Optional[Subset], frozenset] = {}
        for s in family:
            labels[s] = s - frozenset().union(*children[s]) if children[s] else s
        top = frozenset().union(*children[ROOT]) if children[ROOT] else frozenset()
        labels[ROOT] = (frozenset(range(1, n)) - top) | {n}

        valency = {
            v: len(children[v]) + len(labels[v]) + (0 if v is ROOT else 1)
            for v in children
        }
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "_children", {k: tuple(v) for k, v in children.items()})
        object.__setattr__(self, "_labels", labels)
        object.__setattr__(self, "_valency", valency)

    # -- structure -----------------------------------------------------

    @property
    def vertices(self) -> tuple:
        """All vertex keys: ROOT plus one key per edge set."""
        return (ROOT,) + self.sets

    def parent(self, s: Subset):
        return self._parent[frozenset(s)]

    def children(self, v) -> tuple:
        return self._children[v]

    def labels_at(self, v) -> frozenset:
        """Tail labels attached directly to the vertex v."""
        return self._labels[v]

    def valency(self, v) -> int:
        """Number of flags at v: tails plus incident edges."""
        return self._valency[v]

    def vertex_of_label(self, i: int):
        """Vertex carrying tail i: the smallest edge set containing i."""
        best = ROOT
        for s in self.sets:
            if i in s and (best is ROOT or s < best):
                best = s
        return best

    def depth(self, s: Subset) -> int:
        """Edge distance from the vertex below s to the root."""
        s = frozenset(s)
        if s not in self._parent:
            raise InputError(f"{sorted(s)} is not an edge set of this tree")
        return sum(1 for t in self.sets if s <= t)

    def omega(self, s: Subset) -> set:
        """Maximal proper subsets of s within the family (outgoing edges)."""
        s = frozenset(s)
        if s not in self._parent:
            raise InputError(f"{sorted(s)} is not an edge set of this tree")
        return set(self._children[s])

    # -- dunder --------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, StableTree)
            and self.n == other.n
            and self.sets == other.sets
        )

    def __hash__(self):
        return hash((self.n, self.sets))

    def __repr__(self):
        body = ",".join("{" + ",".join(map(str, sorted(s))) + "}" for s in self.sets)
        return f"StableTree(n={self.n}, sets=[{body}])"


def tree_from_family(n: int, sets: Iterable[Subset]):
    """Canonical stable tree for a family of subsets, or None for zero.

    Distinct subsets only (repeats collapse); returns None when some pair
    has profile 4, since the corresponding divisor product is the zero
    class.  Malformed subsets raise InputError.
    """
    family = [validate_subset(n, s) for s in sets]
    distinct = set(family)
    if not is_nice_family(distinct):
        return None
    return StableTree(n, distinct)


def family_from_tree(tree: StableTree) -> tuple[Subset, ...]:
    """Edge subsets of a tree; inverse of tree_from_family on nice families."""
    return tree.sets


def depth_and_omega(tree: StableTree, s: Subset) -> tuple[int, set]:
    return tree.depth(s), tree.omega(s)


def contract_edge(tree: StableTree, s: Subset) -> StableTree:
    """Contract the edge encoded by s, merging its endpoints."""
    s = frozenset(s)
    if s not in tree.sets:
        raise InputError(f"{sorted(s)} is not an edge set of this tree")
    return StableTree(tree.n, (t for t in tree.sets if t != s))


def _extend_families(n, family, start, subsets, remaining) -> Iterator[tuple]:
    if remaining == 0:
        yield family
        return
    for i in range(start, len(subsets) - remaining + 1):
        s = subsets[i]
        if all(partition_profile(s, t) == 3 for t in family):
            yield from _extend_families(n, family + (s,), i + 1, subsets, remaining - 1)


def all_subsets(n: int) -> list[Subset]:
    """All valid edge subsets of {1..n-1}, in canonical order."""
    out = []
    for size in range(2, n - 1):
        out.extend(frozenset(c) for c in combinations(range(1, n), size))
    return sorted(out, key=subset_key)


def enumerate_nice_families(n: int, r: int) -> list[tuple[Subset, ...]]:
    """All r-element nested-or-disjoint families, canonically ordered."""
    if not 0 <= r <= n - 3:
        raise InputError(f"need 0 <= r <= n-3, got r={r} for n={n}")
    return [canonical_family(f) for f in _extend_families(n, (), 0, all_subsets(n), r)]


def enumerate_stable_trees(n: int, r: int) -> list[StableTree]:
    """All isomorphism classes of stable n-trees with r edges, each once."""
    return [StableTree(n, f) for f in enumerate_nice_families(n, r)]


class DivisorMonomial:
    """A monomial in boundary divisors: subsets with positive exponents.

    Nice iff the subsets are pairwise nested or disjoint; good iff nice with
    all exponents 1.  Monomials that are not nice represent the zero class.
    """

    __slots__ = ("n", "items")

    def __init__(self, n: int, items: Iterable[tuple[Subset, int]]):
        merged: dict[Subset, int] = {}
        for s, e in items:
            s = validate_subset(n, s)
            if e < 1 or not isinstance(e, int):
                raise InputError(f"exponent {e} must be a positive integer")
            merged[s] = merged.get(s, 0) + e
        object.__setattr__(self, "n", n)
        object.__setattr__(
            self,
            "items",
            tuple(sorted(merged.items(), key=lambda kv: subset_key(kv[0]))),
        )

    @classmethod
    def from_sets(cls, n: int, sets, mults=None) -> "DivisorMonomial":
        sets = list(sets)
        if mults is None:
            mults = [1] * len(sets)
        if len(mults) != len(sets):
            raise InputError("mult list must align with sets list")
        return cls(n, zip(map(frozenset, sets), mults))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    @property
    def sets(self) -> tuple[Subset, ...]:
        return tuple(s for s, _ in self.items)

    @property
    def is_nice(self) -> bool:
        return is_nice_family(self.sets)

    @property
    def is_good(self) -> bool:
        return self.is_nice and all(e == 1 for _, e in self.items)

    def exponent(self, s: Subset) -> int:
        s = frozenset(s)
        for t, e in self.items:
            if t == s:
                return e
        return 0

    def __mul__(self, other: "DivisorMonomial") -> "DivisorMonomial":
        if self.n != other.n:
            raise InputError("ambient n mismatch")
        return DivisorMonomial(self.n, self.items + other.items)

    def __eq__(self, other):
        return (
            isinstance(other, DivisorMonomial)
            and self.n == other.n
            and self.items == other.items
        )

    def __hash__(self):
        return hash((self.n, self.items))

    def __repr__(self):
        if not self.items:
            return "1"
        return "*".join(
            "D{%s}%s" % (",".join(map(str, sorted(s))), f"^{e}" if e > 1 else "")
            for s, e in self.items
        )


UNIT = {}  # cache of empty monomials per n


def unit_monomial(n: int) -> DivisorMonomial:
    if n not in UNIT:
        UNIT[n] = DivisorMonomial(n, ())
    return UNIT[n]


class MultiplicityTree:
    """A stable tree together with a positive multiplicity on each edge."""

    __slots__ = ("tree", "mult")

    def __init__(self, tree: StableTree, mult: dict):
        mult = {frozenset(s): m for s, m in mult.items()}
        if set(mult) != set(tree.sets):
            raise InputError("multiplicity map must cover exactly the edge sets")
        if any(m < 1 or not isinstance(m, int) for m in mult.values()):
            raise InputError("multiplicities must be positive integers")
        self.tree = tree
        self.mult = mult

    @classmethod
    def from_monomial(cls, mono: DivisorMonomial) -> Optional["MultiplicityTree"]:
        """Tree with multiplicity of a nice monomial; None for the zero class."""
        tree = tree_from_family(mono.n, mono.sets)
        if tree is None:
            return None
        return cls(tree, dict(mono.items))

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def degree(self) -> int:
        return sum(self.mult.values())

    def monomial(self) -> DivisorMonomial:
        return DivisorMonomial(self.n, self.mult.items())

    def __repr__(self):
        return f"MultiplicityTree({self.monomial()!r} @ n={self.n})"
