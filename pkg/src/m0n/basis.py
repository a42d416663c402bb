"""The tree basis, its star involution, partial order, and Gram matrices.

A basis element is a nested family of proper subsets S_1..S_k together with
the full set {1..n-1}, each factor carrying an exponent: 0 <= m(S) <= |v_S|-4
for proper sets and 0 <= m(full) <= |v_root|-3 at the root.  Expanding each
exponent into a chain of nested sets writes the element as a sum of good
monomials, and the closed intersection formula then yields the Gram matrix.

Two routes compute the pairing-against-dual matrix T: bilinear evaluation of
the expansions, and a direct orientation formula on the merged family with
unsquared factorials.  They must agree; T is unipotent upper triangular in
any linear extension of the depth-wise partial order, which gives the Gram
inverse by a finite nilpotent series.

Sign conventions follow the printed small-n matrices: expansions carry plus
signs, and the star involution carries the sign (-1)^k where k is the number
of proper sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial

from .errors import CapabilityError, InputError
from .intersection import pairing_bilinear
from .keelring import RingElement, normal_form
from .linalg import identity, mat_eq, mat_mul, mat_inverse
from .trees import (
    DivisorMonomial,
    ROOT,
    StableTree,
    canonical_family,
    enumerate_nice_families,
    is_nice_family,
    subset_key,
)

GRAM_BOUND = 7


@dataclass(frozen=True)
class BasisElement:
    """Underlying nested family plus exponents; root_exp sits on {1..n-1}."""

    n: int
    fam: tuple
    exps: tuple
    root_exp: int

    def __post_init__(self):
        fam = canonical_family(self.fam)
        if len(set(fam)) != len(fam) or not is_nice_family(fam):
            raise InputError("family must be distinct and nested-or-disjoint")
        if len(self.exps) != len(fam):
            raise InputError("exponent tuple must align with the family")
        object.__setattr__(self, "fam", fam)
        object.__setattr__(self, "exps", tuple(self.exps))
        tree = StableTree(self.n, fam)
        for s, e in zip(fam, self.exps):
            bound = tree.valency(s) - 4
            if not 0 <= e <= bound:
                raise InputError(
                    f"exponent {e} on {sorted(s)} outside 0..{bound}"
                )
        root_bound = tree.valency(ROOT) - 3
        if not 0 <= self.root_exp <= root_bound:
            raise InputError(f"root exponent outside 0..{root_bound}")

    @property
    def tree(self) -> StableTree:
        return _tree_of(self.n, self.fam)

    @property
    def degree(self) -> int:
        return len(self.fam) + sum(self.exps) + self.root_exp

    def exponent(self, s) -> int:
        s = frozenset(s)
        for t, e in zip(self.fam, self.exps):
            if t == s:
                return e
        return 0

    def __repr__(self):
        bits = [
            "D{%s}x^%d" % (",".join(map(str, sorted(s))), e)
            for s, e in zip(self.fam, self.exps)
        ]
        bits.append(f"R^{self.root_exp}")
        return "B[" + " ".join(bits) + f" @n={self.n}]"


_TREES: dict = {}


def _tree_of(n: int, fam: tuple) -> StableTree:
    key = (n, fam)
    if key not in _TREES:
        _TREES[key] = StableTree(n, fam)
    return _TREES[key]


def star(mu: BasisElement) -> BasisElement:
    """Exponent-complement involution; the sign is tracked by star_sign."""
    tree = mu.tree
    exps = tuple(tree.valency(s) - 4 - e for s, e in zip(mu.fam, mu.exps))
    root_exp = tree.valency(ROOT) - 3 - mu.root_exp
    return BasisElement(mu.n, mu.fam, exps, root_exp)


def star_sign(mu: BasisElement) -> int:
    """Sign carried by the star involution: parity of the proper-set count."""
    return -1 if len(mu.fam) % 2 else 1


def enumerate_basis(n: int) -> list[BasisElement]:
    """All basis elements, in the total order used for the matrices."""
    if n < 3:
        raise InputError("need n >= 3")
    out = []
    for r in range(0, n - 2):
        for fam in enumerate_nice_families(n, r):
            tree = _tree_of(n, fam)
            bounds = [tree.valency(s) - 4 for s in fam]
            if any(b < 0 for b in bounds):
                continue
            root_bound = tree.valency(ROOT) - 3
            for exps in product(*(range(b + 1) for b in bounds)):
                for root_exp in range(root_bound + 1):
                    out.append(BasisElement(n, fam, exps, root_exp))
    out.sort(key=order_key)
    return out


# -- order -----------------------------------------------------------------


def _levels(mu: BasisElement):
    """Proper sets grouped by depth: list of canonical per-level tuples."""
    tree = mu.tree
    maxd = max((tree.depth(s) for s in mu.fam), default=0)
    return [
        tuple(sorted((s for s in mu.fam if tree.depth(s) == d), key=subset_key))
        for d in range(1, maxd + 1)
    ]


def order_key(mu: BasisElement):
    """Total-order key extending the depth-wise partial order.

    Per level the key compares exponents before the valencies of the level
    above, which is exactly the priority the partial order's conditions (a)
    and (b) impose; any difference the partial order cannot see falls back
    to canonical encodings.
    """
    tree = mu.tree
    blocks = [((mu.root_exp,), (tree.valency(ROOT),))]
    for level in _levels(mu):
        sets_enc = tuple(tuple(sorted(s)) for s in level)
        exps = tuple(mu.exponent(s) for s in level)
        vals = tuple(tree.valency(s) for s in level)
        blocks.append((sets_enc, exps, vals))
    return (mu.degree, tuple(blocks))


def precedes(mu: BasisElement, nu: BasisElement) -> bool:
    """The depth-wise partial order on equal-degree elements.

    Level 1 holds the root set, level d+1 the proper sets of depth d.  With
    k maximal so that the sets coincide through level k and the exponents
    through level k-1, mu precedes nu when at level k either the exponents
    are pointwise <= with one strict inequality, or they are equal and the
    valencies are pointwise <= with one strict inequality.
    """
    if mu.n != nu.n:
        raise InputError("ambient n mismatch")
    if mu.degree != nu.degree:
        raise InputError("the order compares equal degrees only")
    tree_m, tree_n = mu.tree, nu.tree
    lev_m, lev_n = _levels(mu), _levels(nu)
    total = max(len(lev_m), len(lev_n)) + 1
    lev_m += [()] * (total - 1 - len(lev_m))
    lev_n += [()] * (total - 1 - len(lev_n))

    def sets_at(lev, k):
        return ("full",) if k == 1 else lev[k - 2]

    def exps_at(mu_, lev, k):
        if k == 1:
            return (mu_.root_exp,)
        return tuple(mu_.exponent(s) for s in lev[k - 2])

    def vals_at(tree_, lev, k):
        if k == 1:
            return (tree_.valency(ROOT),)
        return tuple(tree_.valency(s) for s in lev[k - 2])

    k = 1
    while (
        k + 1 <= total
        and sets_at(lev_m, k + 1) == sets_at(lev_n, k + 1)
        and exps_at(mu, lev_m, k) == exps_at(nu, lev_n, k)
    ):
        k += 1
    em, en = exps_at(mu, lev_m, k), exps_at(nu, lev_n, k)
    if em != en:
        return all(a <= b for a, b in zip(em, en))
    vm = vals_at(tree_m, lev_m, k)
    vn = vals_at(tree_n, lev_n, k)
    return vm != vn and all(a <= b for a, b in zip(vm, vn))


# -- expansion into good monomials ------------------------------------------


def boundary_sum(n: int, s, i: int, j: int) -> RingElement:
    """The class x_s for the flag pair (i, j): sum of D_T over {i,j} <= T < s.

    Inserting one x_s power localizes one unit of multiplicity on the inner
    flag of the s-edge; as a class the sum is independent of the chosen
    pair, which is property-tested through pairings.
    """
    s = frozenset(s)
    if i not in s or j not in s or i == j:
        raise InputError("need distinct i, j inside s")
    out = RingElement.zero(n)
    pool = sorted(s - {i, j})
    for size in range(len(pool)):
        for extra in combinations(pool, size):
            t = frozenset({i, j}) | frozenset(extra)
            if len(t) < len(s):
                out._add(DivisorMonomial.from_sets(n, [t]), 1)
    return out


def _default_pair(s) -> tuple[int, int]:
    a, b = sorted(s)[:2]
    return a, b


_EXPANSION_CACHE: dict = {}


def tree_expansion(mu: BasisElement, pair_choice=_default_pair) -> RingElement:
    """The element as a canonical sum of good monomials.

    Each factor contributes its divisor times a power of the localized
    class x_S built on pair_choice(S); the root set contributes x powers
    only (its divisor is absorbed by the pushforward convention).  The
    product is reduced to good monomials by the deterministic rewriting,
    which reproduces the linear-chain patterns at small n.
    """
    default = pair_choice is _default_pair
    if default and mu in _EXPANSION_CACHE:
        return _EXPANSION_CACHE[mu]
    n = mu.n
    full = frozenset(range(1, n))
    elem = RingElement.one(n)
    for s, e in zip(mu.fam, mu.exps):
        elem = elem * RingElement.generator(n, s)
        x = boundary_sum(n, s, *pair_choice(s))
        for _ in range(e):
            elem = normal_form(elem * x)
    x = boundary_sum(n, full, *pair_choice(full))
    for _ in range(mu.root_exp):
        elem = normal_form(elem * x)
    out = normal_form(elem)
    if default:
        _EXPANSION_CACHE[mu] = out
    return out


# -- the T matrix ------------------------------------------------------------


def _orientation_value(edge_opts, root_in, tree):
    """Search the restricted orientations; return the vertex product or 0.

    edge_opts maps each proper set to its allowed (incoming, outgoing)
    splittings; the root edge is pinned to (root_in, 0).  At most one
    combination can satisfy the vertex sums (top-degree uniqueness).
    """
    branch = [s for s in edge_opts if len(edge_opts[s]) > 1]
    fixed = {s: edge_opts[s][0] for s in edge_opts if len(edge_opts[s]) == 1}
    found = None
    for bits in range(1 << len(branch)):
        assign = dict(fixed)
        for idx, s in enumerate(branch):
            assign[s] = edge_opts[s][bits >> idx & 1]
        ok = True
        for v in tree.vertices:
            inc = root_in if v is ROOT else assign[v][0]
            total = inc + sum(assign[c][1] for c in tree.children(v))
            if total != tree.valency(v) - 3:
                ok = False
                break
        if ok:
            assert found is None, "good multiplicity orientation not unique"
            found = assign
    if found is None:
        return Fraction(0)
    value = Fraction(1)
    for v in tree.vertices:
        deg = tree.valency(v) - 3
        inc = root_in if v is ROOT else found[v][0]
        denom = factorial(inc)
        for c in tree.children(v):
            denom *= factorial(found[c][1])
        value *= Fraction((-1) ** deg * factorial(deg), denom)
    return value


def t_entry(mu: BasisElement, nu: BasisElement) -> Fraction:
    """Entry of T: the integral of mu against the starred nu.

    Direct route: merge the families of mu and star(nu), with each edge
    carrying its divisor count plus accumulated chain exponents, and search
    the two admissible flag splittings per shared edge for the good
    orientation.  The value uses unsquared factorials and the downstairs
    vertex sign of nu's tree.
    """
    if mu.n != nu.n:
        raise InputError("ambient n mismatch")
    n = mu.n
    if mu.degree != nu.degree:
        return Fraction(0)
    nud = star(nu)
    fam = canonical_family(set(mu.fam) | set(nud.fam))
    if not is_nice_family(fam):
        return Fraction(0)
    tree = _tree_of(n, fam)
    edge_opts = {}
    for s in fam:
        eps = (s in mu.fam) + (s in nud.fam)
        mx = mu.exponent(s) + nud.exponent(s)
        if eps == 1:
            edge_opts[s] = [(mx, 0)]
        else:
            edge_opts[s] = [(mx + 1, 0), (mx, 1)]
    root_in = mu.root_exp + nud.root_exp
    value = _orientation_value(edge_opts, root_in, tree)
    prefactor = (-1) ** (n - 3 - len(nu.fam))
    return prefactor * value


def t_entry_bilinear(mu: BasisElement, nu: BasisElement) -> Fraction:
    """Cross-check route for T: expansions paired by the closed formula."""
    if mu.degree != nu.degree:
        return Fraction(0)
    dual = tree_expansion(star(nu))
    return star_sign(nu) * pairing_bilinear(tree_expansion(mu), dual)


# -- Gram matrices -----------------------------------------------------------


@dataclass(frozen=True)
class PairingMatrices:
    """Ordered basis with its T, P, Gram and inverse Gram matrices."""

    n: int
    order: tuple
    T: tuple
    P: tuple
    M: tuple
    Minv: tuple


def _series_inverse(T):
    """T^{-1} = sum (id - T)^j; finite because id - T is nilpotent."""
    size = len(T)
    N = tuple(
        tuple((1 if i == j else 0) - T[i][j] for j in range(size))
        for i in range(size)
    )
    total = identity(size)
    power = identity(size)
    while True:
        power = mat_mul(power, N)
        if all(all(x == 0 for x in row) for row in power):
            break
        total = tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(total, power)
        )
    return total


_GRAM_CACHE: dict[int, PairingMatrices] = {}


def gram(n: int) -> PairingMatrices:
    """Gram data for the basis; exact, cross-checked along both routes."""
    if n in _GRAM_CACHE:
        return _GRAM_CACHE[n]
    if n > GRAM_BOUND:
        raise CapabilityError(f"Gram machinery is bounded at n <= {GRAM_BOUND}")
    order = enumerate_basis(n)
    size = len(order)
    expansions = [tree_expansion(mu) for mu in order]
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            if order[i].degree + order[j].degree == n - 3:
                rows[i][j] = rows[j][i] = pairing_bilinear(expansions[i], expansions[j])
    M = tuple(tuple(row) for row in rows)
    T = tuple(tuple(t_entry(order[i], order[j]) for j in range(size)) for i in range(size))
    index = {mu: i for i, mu in enumerate(order)}
    P = tuple(
        tuple(
            Fraction(star_sign(order[i])) if index[star(order[i])] == j else Fraction(0)
            for j in range(size)
        )
        for i in range(size)
    )
    if not mat_eq(mat_mul(T, P), M):
        raise AssertionError("Gram factorization M = T P failed")
    Minv = mat_inverse(M)
    Minv_series = mat_mul(P, _series_inverse(T))
    if not mat_eq(Minv, Minv_series):
        raise AssertionError("nilpotent-series inverse disagrees with elimination")
    result = PairingMatrices(n, tuple(order), T, P, M, Minv)
    _GRAM_CACHE[n] = result
    return result


def dual_basis_coeffs(n: int) -> dict:
    """Dual basis elements as ring elements: rows of the inverse Gram."""
    data = gram(n)
    out = {}
    for i, mu in enumerate(data.order):
        acc = RingElement.zero(n)
        for j, nu in enumerate(data.order):
            c = data.Minv[i][j]
            if c:
                acc = acc + tree_expansion(nu).scale(c)
        out[mu] = acc
    return out
