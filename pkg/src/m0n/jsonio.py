"""JSON encodings: monomials, Frobenius data, potentials, matrices.

Rationals travel as strings "p/q" (or "p"); sets as ascending integer
lists; correlator indices are 1-based in files and 0-based in memory.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .basis import BasisElement
from .cohft import FormalPotential, FrobeniusData
from .errors import InputError
from .trees import DivisorMonomial

def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def monomial_from_dict(data: dict) -> DivisorMonomial:
    try:
        n = int(data["n"])
        sets = data["sets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("monomial JSON needs 'n' and 'sets'") from exc
    mult = data.get("mult", [1] * len(sets))
    for s in sets:
        if list(s) != sorted(s):
            raise InputError(f"set {s} must be sorted ascending")
    if len(mult) != len(sets):
        raise InputError("'mult' must align with 'sets'")
    return DivisorMonomial.from_sets(n, sets, [int(m) for m in mult])


def monomial_to_dict(mono: DivisorMonomial) -> dict:
    return {
        "n": mono.n,
        "sets": [sorted(s) for s, _ in mono.items],
        "mult": [e for _, e in mono.items],
    }


def basis_element_to_dict(mu: BasisElement) -> dict:
    return {
        "sets": [sorted(s) for s in mu.fam],
        "exps": list(mu.exps),
        "root_exp": mu.root_exp,
    }


def matrix_to_strings(matrix):
    return [[format_rational(x) for x in row] for row in matrix]


def matrix_to_csv(matrix) -> str:
    lines = []
    for row in matrix:
        cells = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise InputError("csv output is restricted to integer matrices")
            cells.append(str(x.numerator))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def frobenius_from_dict(data: dict) -> FrobeniusData:
    try:
        dim = int(data["dim"])
        metric = [[parse_rational(x) for x in row] for row in data["metric"]]
        raw = data.get("correlators", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("frobenius JSON needs 'dim', 'metric', 'correlators'") from exc
    truncation = int(data.get("truncation", 12))
    tables = {}
    for arity, entries in raw.items():
        sub = {}
        for entry in entries:
            idx = tuple(int(i) - 1 for i in entry["idx"])
            if any(i < 0 for i in idx):
                raise InputError("correlator indices are 1-based")
            sub[tuple(sorted(idx))] = parse_rational(entry["val"])
        tables[int(arity)] = sub
    return FrobeniusData(dim, metric, tables, truncation=truncation)


def frobenius_to_dict(F: FrobeniusData) -> dict:
    correlators = {}
    for arity in sorted(F.table):
        entries = []
        for idx in sorted(F.table[arity]):
            entries.append(
                {
                    "idx": [i + 1 for i in idx],
                    "val": format_rational(F.table[arity][idx]),
                }
            )
        if entries:
            correlators[str(arity)] = entries
    return {
        "dim": F.dim,
        "metric": matrix_to_strings(F.metric),
        "correlators": correlators,
        "truncation": F.truncation,
    }


def potential_to_dict(pot: FormalPotential) -> dict:
    coeffs = {
        ",".join(map(str, exps)): format_rational(c)
        for exps, c in sorted(pot.coeffs.items())
        if c
    }
    return {"dim": pot.dim, "order": pot.order, "coeffs": coeffs}


def potential_from_dict(data: dict) -> FormalPotential:
    try:
        dim = int(data["dim"])
        order = int(data["order"])
        raw = data["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("potential JSON needs 'dim', 'order', 'coeffs'") from exc
    coeffs = {}
    for key, val in raw.items():
        exps = tuple(int(x) for x in key.split(","))
        if len(exps) != dim:
            raise InputError(f"exponent key {key!r} does not match dim {dim}")
        coeffs[exps] = parse_rational(val)
    return FormalPotential(dim, order, coeffs)


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"cannot read {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
