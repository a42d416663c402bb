"""Verification suites: oracle equivalence, orientation uniqueness, matrices.

Each suite returns a list of (check name, passed, detail) triples; they back
the `verify` CLI subcommand and the acceptance tests.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .basis import enumerate_basis, gram, precedes, star, t_entry, t_entry_bilinear
from .errors import InputError
from .intersection import (
    all_orientations,
    good_orientation,
    is_good_orientation,
    orientation_candidate,
    pairing,
)
from .keelring import graded_dimensions, oracle_pairing
from .linalg import identity, mat_eq, mat_mul
from .trees import DivisorMonomial, MultiplicityTree, StableTree, enumerate_nice_families


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def nice_monomials(n: int, degree: int) -> list[DivisorMonomial]:
    """All nice monomials of the given degree, canonically ordered."""
    out = []
    for r in range(0, degree + 1):
        if r == 0:
            if degree == 0:
                out.append(DivisorMonomial(n, ()))
            continue
        for fam in enumerate_nice_families(n, r):
            for comp in _compositions(degree, r):
                out.append(DivisorMonomial(n, zip(fam, comp)))
    return out


def suite_oracle(n: int, samples: int = 500, seed: int = 20260810):
    """Closed-formula pairing against ring-reduction, complementary degrees.

    Exhaustive for n <= 6; a deterministic random sample beyond.
    """
    results = []
    top = n - 3
    if n <= 6:
        checked = 0
        bad = None
        by_degree = {d: nice_monomials(n, d) for d in range(top + 1)}
        for d1 in range(top + 1):
            for m1 in by_degree[d1]:
                for m2 in by_degree[top - d1]:
                    checked += 1
                    if pairing(m1, m2) != oracle_pairing(m1, m2):
                        bad = (m1, m2)
        results.append(
            (
                f"pairing == oracle on all {checked} complementary pairs (n={n})",
                bad is None,
                f"first mismatch {bad}" if bad else "",
            )
        )
    else:
        rng = random.Random(seed)
        by_degree = {d: nice_monomials(n, d) for d in range(top + 1)}
        bad = None
        for _ in range(samples):
            d1 = rng.randint(0, top)
            m1 = rng.choice(by_degree[d1])
            m2 = rng.choice(by_degree[top - d1])
            if pairing(m1, m2) != oracle_pairing(m1, m2):
                bad = (m1, m2)
        results.append(
            (
                f"pairing == oracle on {samples} random pairs (n={n})",
                bad is None,
                f"first mismatch {bad}" if bad else "",
            )
        )
    return results


def suite_orientation(n: int):
    """Uniqueness of good orientations on every top-degree multiplicity tree."""
    top = n - 3
    trees = 0
    bad = None
    for mono in nice_monomials(n, top):
        tm = MultiplicityTree.from_monomial(mono)
        trees += 1
        goods = [o for o in all_orientations(tm) if is_good_orientation(tm, o)]
        formula = good_orientation(tm)
        if len(goods) > 1:
            bad = (mono, "multiple good orientations")
        elif len(goods) == 1 and formula != goods[0]:
            bad = (mono, "formula disagrees with search")
        elif len(goods) == 0 and formula is not None:
            bad = (mono, "formula found a spurious orientation")
    return [
        (
            f"good orientation unique and equals the forced formula on {trees} trees (n={n})",
            bad is None,
            str(bad) if bad else "",
        )
    ]


def suite_unipotent(n: int):
    """T unipotent upper triangular; inverse checks on the Gram matrix."""
    data = gram(n)
    size = len(data.order)
    diag_ok = all(data.T[i][i] == 1 for i in range(size))
    key_order_ok = True
    triangular_ok = True
    for i in range(size):
        for j in range(size):
            if j < i and data.T[i][j] != 0:
                triangular_ok = False
            if i != j and data.T[i][j] != 0:
                mu, nu = data.order[i], data.order[j]
                if not precedes(mu, nu):
                    key_order_ok = False
    inv_ok = mat_eq(mat_mul(data.M, data.Minv), identity(size))
    return [
        (f"T diagonal is 1 on all {size} elements (n={n})", diag_ok, ""),
        (f"T strictly upper triangular in the basis order (n={n})", triangular_ok, ""),
        (f"nonzero off-diagonal T entries respect the partial order (n={n})", key_order_ok, ""),
        (f"M * Minv == identity (n={n})", inv_ok, ""),
    ]


def suite_t_diagonal(n: int):
    """The matrix T is the identity (holds for n <= 6)."""
    data = gram(n)
    size = len(data.order)
    iden = all(
        data.T[i][j] == (1 if i == j else 0) for i in range(size) for j in range(size)
    )
    values_ok = True
    index = {mu: i for i, mu in enumerate(data.order)}
    for i, mu in enumerate(data.order):
        dual = index[star(mu)]
        expected = Fraction((-1) ** len(mu.fam))
        for j in range(size):
            want = expected if j == dual else Fraction(0)
            if data.M[i][j] != want:
                values_ok = False
    return [
        (f"T is the identity matrix (n={n})", iden, ""),
        (f"M is supported on star-dual pairs with values (-1)^k (n={n})", values_ok, ""),
    ]


def suite_pd_failure(n: int):
    """Some off-diagonal T entry is nonzero (duality failure, n >= 7)."""
    order = enumerate_basis(n)
    witness = None
    for i, mu in enumerate(order):
        for j, nu in enumerate(order):
            if i != j and t_entry(mu, nu) != 0:
                witness = (mu, nu, t_entry(mu, nu))
                break
        if witness:
            break
    detail = ""
    cross_ok = True
    if witness:
        mu, nu, val = witness
        cross_ok = t_entry_bilinear(mu, nu) == val
        detail = f"t({mu}, {nu}) = {val}"
    return [
        (f"off-diagonal nonzero T entry exists (n={n})", witness is not None, detail),
        (f"witness agrees along both evaluation routes (n={n})", cross_ok, ""),
    ]


def suite_betti(n: int):
    """Basis size per degree equals the relation-rank dimensions."""
    dims = graded_dimensions(n)
    counts = [0] * (n - 2)
    for mu in enumerate_basis(n):
        counts[mu.degree] += 1
    return [
        (
            f"basis degree profile equals graded dimensions {dims} (n={n})",
            counts == dims,
            f"basis profile {counts}",
        )
    ]


SUITES = {
    "oracle": suite_oracle,
    "orientation": suite_orientation,
    "unipotent": suite_unipotent,
    "t-diagonal": suite_t_diagonal,
    "pd-failure": suite_pd_failure,
    "betti": suite_betti,
}


def run_suite(name: str, n: int):
    if name == "all":
        results = []
        results += suite_oracle(n)
        results += suite_orientation(n)
        results += suite_unipotent(n)
        results += suite_betti(n)
        if n == 6:
            results += suite_t_diagonal(n)
        if n >= 7:
            results += suite_pd_failure(n)
        return results
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](n)
