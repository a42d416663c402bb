"""Small exact-rational dense matrix helpers (tuples of tuples of Fraction)."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


def identity(size: int):
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(size)) for i in range(size)
    )


def mat_mul(a, b):
    size_k = len(b)
    cols = len(b[0]) if size_k else 0
    return tuple(
        tuple(sum((row[k] * b[k][j] for k in range(size_k)), Fraction(0)) for j in range(cols))
        for row in a
    )


def mat_vec(a, v):
    return tuple(sum((row[k] * v[k] for k in range(len(v))), Fraction(0)) for row in a)


def mat_eq(a, b) -> bool:
    return len(a) == len(b) and all(
        len(r1) == len(r2) and all(x == y for x, y in zip(r1, r2))
        for r1, r2 in zip(a, b)
    )


def mat_inverse(m):
    """Gauss-Jordan inverse over exact rationals; InputError when singular."""
    size = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(size)]
           for i, row in enumerate(m)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise InputError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)
