"""Command line interface.

Subcommands: trees, intersect, gram, basis, tensor, verify.  Output is
deterministic; exit codes are 0 (success), 2 (input error), 3 (capability
bound), 4 (verification failure).
"""

from __future__ import annotations

import argparse
import sys

from .basis import enumerate_basis, gram
from .cohft import kunneth_potential
from .errors import CapabilityError, InputError, VerificationError
from .intersection import pairing
from .jsonio import (
    basis_element_to_dict,
    dump,
    frobenius_from_dict,
    load_file,
    matrix_to_csv,
    matrix_to_strings,
    monomial_from_dict,
    potential_to_dict,
)
from .keelring import oracle_pairing
from .trees import enumerate_nice_families
from .verify import run_suite


def _write_output(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        if not args.quiet:
            print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)


def cmd_trees(args) -> int:
    families = enumerate_nice_families(args.n, args.edges)
    payload = {
        "n": args.n,
        "edges": args.edges,
        "count": len(families),
        "families": [[sorted(s) for s in fam] for fam in families],
    }
    _write_output(args, dump(payload))
    return 0


def cmd_intersect(args) -> int:
    m1 = monomial_from_dict(load_file(args.left))
    m2 = monomial_from_dict(load_file(args.right))
    if m1.n != m2.n:
        raise InputError("the two monomials live at different n")
    if m1.degree + m2.degree != m1.n - 3 and not args.quiet:
        print(
            f"warning: degrees {m1.degree}+{m2.degree} are not complementary "
            f"to {m1.n - 3}; the pairing is 0",
            file=sys.stderr,
        )
    value = pairing(m1, m2)
    payload = {"n": m1.n, "value": str(value)}
    if args.oracle:
        check = oracle_pairing(m1, m2)
        payload["oracle"] = str(check)
        payload["agree"] = check == value
    _write_output(args, dump(payload))
    if args.oracle and not payload["agree"]:
        raise VerificationError("pairing and oracle disagree")
    return 0


def cmd_gram(args) -> int:
    data = gram(args.n)
    if args.format == "csv":
        matrix = data.Minv if args.inverse else data.M
        _write_output(args, matrix_to_csv(matrix))
        return 0
    payload = {
        "n": args.n,
        "order": [basis_element_to_dict(mu) for mu in data.order],
        "M": matrix_to_strings(data.M),
    }
    if args.inverse:
        payload["Minv"] = matrix_to_strings(data.Minv)
    _write_output(args, dump(payload))
    return 0


def cmd_basis(args) -> int:
    order = enumerate_basis(args.n)
    payload = {
        "n": args.n,
        "count": len(order),
        "elements": [
            dict(basis_element_to_dict(mu), degree=mu.degree) for mu in order
        ],
    }
    _write_output(args, dump(payload))
    return 0


def cmd_tensor(args) -> int:
    left = frobenius_from_dict(load_file(args.left))
    right = frobenius_from_dict(load_file(args.right))
    pot = kunneth_potential(left, right, args.order)
    _write_output(args, dump(potential_to_dict(pot)))
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, args.n)
    failed = [r for r in results if not r[1]]
    if not args.quiet:
        for name, ok, detail in results:
            line = f"{'PASS' if ok else 'FAIL'}  {name}"
            if detail:
                line += f"  [{detail}]"
            print(line)
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        raise VerificationError(f"{len(failed)} checks failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="m0n",
        description="Boundary-divisor intersection theory and Kunneth products",
    )
    parser.add_argument("--output", help="write the result to this path")
    parser.add_argument("--quiet", action="store_true", help="suppress chatter")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help="enumerate stable trees by edge count")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("intersect", help="pair two divisor monomials")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--oracle", action="store_true", help="cross-check by ring reduction")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("gram", help="Gram matrix of the tree basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("basis", help="list the tree basis")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("tensor", help="Kunneth potential of two theories")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--order", type=int, default=5)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
