"""Formal Frobenius manifold engine: correlators, potentials, tensor products.

A theory is a finite-dimensional space with a nondegenerate exact-rational
metric and a symmetric correlator table per arity, truncated at an explicit
arity.  Correlators extend over stable trees by contracting one Casimir per
edge; the tensor product of two theories is computed by summing operadic
values of the dual basis against the Gram matrix, which is the explicit
Kunneth formula.  Everything is exact; nothing here is numeric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial

from .basis import gram, tree_expansion
from .errors import CapabilityError, InputError
from .linalg import mat_inverse, mat_vec
from .trees import ROOT, StableTree, tree_from_family

DEFAULT_TRUNCATION = 12


class FrobeniusData:
    """Metric plus symmetric correlator tables, exact and immutable."""

    def __init__(self, dim: int, metric, correlators, truncation: int = DEFAULT_TRUNCATION):
        if dim < 1:
            raise InputError("dimension must be positive")
        if truncation < 3:
            raise InputError("truncation arity below 3")
        self.dim = dim
        self.truncation = truncation
        metric = tuple(tuple(Fraction(x) for x in row) for row in metric)
        if len(metric) != dim or any(len(r) != dim for r in metric):
            raise InputError("metric must be dim x dim")
        if any(metric[i][j] != metric[j][i] for i in range(dim) for j in range(dim)):
            raise InputError("metric must be symmetric")
        self.metric = metric
        try:
            self.ginv = mat_inverse(metric)
        except InputError:
            raise InputError("metric must be nondegenerate") from None
        table: dict[int, dict[tuple, Fraction]] = {}
        for arity, entries in correlators.items():
            arity = int(arity)
            if arity < 3:
                raise InputError("correlator arities start at 3")
            if arity > truncation:
                raise InputError("correlator arity beyond the truncation")
            sub = {}
            for idx, val in entries.items():
                idx = tuple(sorted(idx))
                if len(idx) != arity or not all(0 <= a < dim for a in idx):
                    raise InputError(f"bad correlator index {idx}")
                val = Fraction(val)
                if val:
                    sub[idx] = val
            table[arity] = sub
        self.table = table
        self._tree_cache: dict = {}

    def correlator(self, idx) -> Fraction:
        """Y_n on basis indices (0-based); zero when absent from the table."""
        arity = len(idx)
        if arity > self.truncation:
            raise CapabilityError(
                f"arity {arity} beyond the truncation {self.truncation}"
            )
        if arity < 3:
            raise InputError("correlators need arity >= 3")
        return self.table.get(arity, {}).get(tuple(sorted(idx)), Fraction(0))

    def basis_vector(self, a: int):
        return tuple(Fraction(1 if i == a else 0) for i in range(self.dim))


def _y_on_vectors(F: FrobeniusData, vectors) -> Fraction:
    """Multilinear extension of the arity-len(vectors) correlator."""
    total = Fraction(0)
    dim = F.dim
    slots = [
        [(a, v[a]) for a in range(dim) if v[a]]
        for v in vectors
    ]
    for combo in product(*slots):
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        total += coeff * F.correlator(tuple(a for a, _ in combo))
    return total


def _half_casimir(F: FrobeniusData, vectors):
    """Vector w with w_b = sum_a Y(vectors..., D_a) g^{ab}."""
    raw = [_y_on_vectors(F, list(vectors) + [F.basis_vector(a)]) for a in range(F.dim)]
    return tuple(
        sum((raw[a] * F.ginv[a][b] for a in range(F.dim)), Fraction(0))
        for b in range(F.dim)
    )


def operadic_correlator(F: FrobeniusData, tree: StableTree, args) -> Fraction:
    """Y(tree): vertex correlators contracted with one Casimir per edge.

    args gives one basis index (0-based) per tail 1..n.
    """
    n = tree.n
    if len(args) != n:
        raise InputError(f"need {n} arguments, one per tail")
    for v in tree.vertices:
        if tree.valency(v) > F.truncation:
            raise CapabilityError(
                f"vertex arity {tree.valency(v)} beyond truncation {F.truncation}"
            )

    def value(v):
        vecs = [F.basis_vector(args[l - 1]) for l in sorted(tree.labels_at(v))]
        vecs.extend(_up(c) for c in tree.children(v))
        return _y_on_vectors(F, vecs)

    def _up(v):
        vecs = [F.basis_vector(args[l - 1]) for l in sorted(tree.labels_at(v))]
        vecs.extend(_up(c) for c in tree.children(v))
        return _half_casimir(F, vecs)

    return value(ROOT)


def operadic_on_element(F: FrobeniusData, elem, args) -> Fraction:
    """Linear extension of Y(tree) over a good-monomial combination."""
    key = (frozenset(elem.coeffs.items()), tuple(args))
    if key in F._tree_cache:
        return F._tree_cache[key]
    total = Fraction(0)
    for mono, c in elem.coeffs.items():
        tree = tree_from_family(mono.n, mono.sets)
        total += c * operadic_correlator(F, tree, args)
    F._tree_cache[key] = total
    return total


# -- potentials --------------------------------------------------------------


@dataclass(frozen=True)
class FormalPotential:
    """Truncated generating series: exponent tuple -> rational coefficient."""

    dim: int
    order: int
    coeffs: dict = field(compare=False)

    def coefficient(self, exps) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))


def _multiset_to_exps(dim: int, idx) -> tuple:
    exps = [0] * dim
    for a in idx:
        exps[a] += 1
    return tuple(exps)


def _exps_to_multiset(exps) -> tuple:
    out = []
    for a, e in enumerate(exps):
        out.extend([a] * e)
    return tuple(out)


def potential_from_correlators(F: FrobeniusData, order: int) -> FormalPotential:
    """Potential whose x^alpha coefficient is Y(alpha) / prod(alpha_a!)."""
    if order < 3:
        raise InputError("potential order below 3")
    if order > F.truncation:
        raise CapabilityError("order beyond the correlator truncation")
    coeffs = {}
    for arity in range(3, order + 1):
        for idx, val in F.table.get(arity, {}).items():
            exps = _multiset_to_exps(F.dim, idx)
            denom = 1
            for e in exps:
                denom *= factorial(e)
            coeffs[exps] = val / denom
    return FormalPotential(F.dim, order, coeffs)


def correlators_from_potential(pot: FormalPotential) -> dict:
    """Inverse of potential_from_correlators, exactly."""
    out: dict[int, dict[tuple, Fraction]] = {}
    for exps, c in pot.coeffs.items():
        if not c:
            continue
        arity = sum(exps)
        mult = 1
        for e in exps:
            mult *= factorial(e)
        out.setdefault(arity, {})[_exps_to_multiset(exps)] = c * mult
    return out


def _third_derivative(pot: FormalPotential, a: int, b: int, c: int) -> dict:
    """Series of d^3 Phi / dx_a dx_b dx_c as exponent -> coefficient."""
    out = {}
    for exps, coeff in pot.coeffs.items():
        exps = list(exps)
        factor = Fraction(1)
        ok = True
        for var in (a, b, c):
            if exps[var] == 0:
                ok = False
                break
            factor *= exps[var]
            exps[var] -= 1
        if ok:
            key = tuple(exps)
            out[key] = out.get(key, Fraction(0)) + coeff * factor
    return out


def _series_product(p: dict, q: dict, max_order: int) -> dict:
    out = {}
    for e1, c1 in p.items():
        d1 = sum(e1)
        for e2, c2 in q.items():
            if d1 + sum(e2) > max_order:
                continue
            key = tuple(x + y for x, y in zip(e1, e2))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return out


def wdvv_check(F: FrobeniusData, order: int):
    """Associativity of the potential up to total order.

    Returns (True, None) or (False, witness) where the witness records the
    first violated coefficient as (a, b, c, d, exponent tuple, lhs, rhs).
    """
    pot = potential_from_correlators(F, order)
    max_order = order - 3
    dim = F.dim
    thirds = {
        (a, b, c): _third_derivative(pot, a, b, c)
        for a in range(dim)
        for b in range(a, dim)
        for c in range(b, dim)
    }

    def third(a, b, c):
        return thirds[tuple(sorted((a, b, c)))]

    def contracted(a, b, c, d):
        total = {}
        for e in range(dim):
            for f in range(dim):
                g = F.ginv[e][f]
                if not g:
                    continue
                prod_ = _series_product(third(a, b, e), third(f, c, d), max_order)
                for key, val in prod_.items():
                    total[key] = total.get(key, Fraction(0)) + g * val
        return {k: v for k, v in total.items() if v}

    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                for d in range(dim):
                    lhs = contracted(a, b, c, d)
                    rhs = contracted(a, c, b, d)
                    keys = set(lhs) | set(rhs)
                    for key in sorted(keys):
                        lv = lhs.get(key, Fraction(0))
                        rv = rhs.get(key, Fraction(0))
                        if lv != rv:
                            return False, (a, b, c, d, key, lv, rv)
    return True, None


# -- tensor product ----------------------------------------------------------


def tensor_index(dim2: int, a1: int, a2: int) -> int:
    return a1 * dim2 + a2


def split_index(dim2: int, t: int) -> tuple[int, int]:
    return divmod(t, dim2)


def tensor_metric(F1: FrobeniusData, F2: FrobeniusData):
    dim = F1.dim * F2.dim
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for a1 in range(F1.dim):
        for a2 in range(F2.dim):
            for b1 in range(F1.dim):
                for b2 in range(F2.dim):
                    g[tensor_index(F2.dim, a1, a2)][tensor_index(F2.dim, b1, b2)] = (
                        F1.metric[a1][b1] * F2.metric[a2][b2]
                    )
    return tuple(tuple(row) for row in g)


def _dual_weights(data):
    """Rows of Minv against M: value = (Minv y') . M . (Minv y'')."""
    return data.Minv, data.M


def tensor_correlator_value(F1, F2, n: int, idx) -> Fraction:
    """One entry of the arity-n tensor correlator table.

    idx holds tensor indices; each splits into a prime and a double-prime
    argument tuple, evaluated through the dual basis and the Gram matrix.
    """
    data = gram(n)
    primes = tuple(split_index(F2.dim, t)[0] for t in idx)
    doubles = tuple(split_index(F2.dim, t)[1] for t in idx)
    y1 = [operadic_on_element(F1, tree_expansion(mu), primes) for mu in data.order]
    y2 = [operadic_on_element(F2, tree_expansion(mu), doubles) for mu in data.order]
    size = len(data.order)
    a = mat_vec(data.Minv, y1)
    b = mat_vec(data.Minv, y2)
    total = Fraction(0)
    for i in range(size):
        if not a[i]:
            continue
        for j in range(size):
            m = data.M[i][j]
            if m and b[j]:
                total += a[i] * m * b[j]
    return total


def tensor_correlators(F1: FrobeniusData, F2: FrobeniusData, n: int) -> dict:
    """Full symmetric arity-n correlator table of the tensor theory."""
    if n > F1.truncation or n > F2.truncation:
        raise CapabilityError("arity beyond a factor's truncation")
    dim = F1.dim * F2.dim
    out = {}
    for idx in combinations_with_replacement(range(dim), n):
        val = tensor_correlator_value(F1, F2, n, idx)
        if val:
            out[idx] = val
    return out


def tensor_frobenius(F1: FrobeniusData, F2: FrobeniusData, truncation: int) -> FrobeniusData:
    """The tensor theory with correlators computed for arities 3..truncation."""
    tables = {
        arity: tensor_correlators(F1, F2, arity) for arity in range(3, truncation + 1)
    }
    return FrobeniusData(
        F1.dim * F2.dim, tensor_metric(F1, F2), tables, truncation=truncation
    )


def kunneth_potential(F1: FrobeniusData, F2: FrobeniusData, order: int) -> FormalPotential:
    """Potential of the tensor theory with the 1/n! normalization."""
    return potential_from_correlators(tensor_frobenius(F1, F2, order), order)


# -- higher products ---------------------------------------------------------


def higher_product(F: FrobeniusData, vectors):
    """The n-ary product: metric dual of the arity-(n+1) correlator."""
    return _half_casimir(F, list(vectors))


def higher_product_indices(F: FrobeniusData, args):
    return higher_product(F, [F.basis_vector(a) for a in args])


def composition_tree(F: FrobeniusData, tree: StableTree, arg_vectors):
    """The parenthesized-word operation of a tree, evaluated bottom-up.

    arg_vectors holds one vector per tail 1..n-1; tail n is the output.
    """
    n = tree.n
    if len(arg_vectors) != n - 1:
        raise InputError(f"need {n - 1} argument vectors")

    def value(v):
        vecs = [arg_vectors[l - 1] for l in sorted(tree.labels_at(v) - {n})]
        vecs.extend(value(c) for c in tree.children(v))
        return higher_product(F, vecs)

    return value(ROOT)


def composition_on_element(F: FrobeniusData, elem, arg_vectors):
    """Linear extension of the tree composition over good monomials."""
    total = tuple(Fraction(0) for _ in range(F.dim))
    for mono, c in elem.coeffs.items():
        tree = tree_from_family(mono.n, mono.sets)
        part = composition_tree(F, tree, arg_vectors)
        total = tuple(t + c * p for t, p in zip(total, part))
    return total


def tensor_higher_product(F1, F2, vec_pairs):
    """The tensor-product n-ary multiplication on pure tensors.

    vec_pairs holds n pairs (prime vector, double vector); the result is a
    dim1 x dim2 matrix of coefficients over the tensor basis, computed via
    the dual basis of the (n+1)-pointed Gram data.
    """
    n = len(vec_pairs)
    data = gram(n + 1)
    order = data.order
    primes = [p for p, _ in vec_pairs]
    doubles = [q for _, q in vec_pairs]
    c1 = [composition_on_element(F1, tree_expansion(mu), primes) for mu in order]
    c2 = [composition_on_element(F2, tree_expansion(mu), doubles) for mu in order]
    size = len(order)
    d1 = [
        tuple(
            sum((data.Minv[i][j] * c1[j][x] for j in range(size)), Fraction(0))
            for x in range(F1.dim)
        )
        for i in range(size)
    ]
    d2 = [
        tuple(
            sum((data.Minv[i][j] * c2[j][x] for j in range(size)), Fraction(0))
            for x in range(F2.dim)
        )
        for i in range(size)
    ]
    out = [[Fraction(0)] * F2.dim for _ in range(F1.dim)]
    for i in range(size):
        for j in range(size):
            m = data.M[i][j]
            if not m:
                continue
            for x in range(F1.dim):
                if not d1[i][x]:
                    continue
                for y in range(F2.dim):
                    out[x][y] += m * d1[i][x] * d2[j][y]
    return tuple(tuple(row) for row in out)


# -- stock theories ----------------------------------------------------------


def point_theory(truncation: int = DEFAULT_TRUNCATION) -> FrobeniusData:
    """The one-dimensional theory: Y_3 = 1, everything higher vanishes."""
    return FrobeniusData(1, ((1,),), {3: {(0, 0, 0): Fraction(1)}}, truncation)


def cubic_theory(metric, triples, truncation: int = DEFAULT_TRUNCATION) -> FrobeniusData:
    """Theory of a Frobenius algebra: cubic correlators only.

    triples maps sorted index triples to Y_3 values; WDVV for such data is
    associativity of the induced product.
    """
    return FrobeniusData(len(metric), metric, {3: dict(triples)}, truncation)
