"""Command-line front end: ``kummer-orbits <subcommand> ...``.

Every invocation prints one JSON object {"ok", "result", "error"} with sorted
keys.  Exit code 0 on success, 1 on a domain error and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import divisors, kummer, verify
from .eichler import EichlerError, construct_isometry, inequivalence_reason
from .lattice_core import GramLattice, LatticeError


class InputError(Exception):
    """Malformed command-line input (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def parse_vector(text: str, rank: int | None = None) -> list[int]:
    try:
        v = [int(c) for c in text.replace(" ", "").split(",")]
    except ValueError:
        raise InputError(f"vector must be comma-separated integers, got {text!r}") from None
    if rank is not None and len(v) != rank:
        raise InputError(f"expected {rank} coordinates, got {len(v)}")
    return v


def _read_lattice(path: str) -> GramLattice:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read lattice file: {exc}") from None
    try:
        return GramLattice.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed lattice JSON: {exc}") from None


def cmd_normal_form(args) -> dict:
    return kummer.normal_form(args.n, parse_vector(args.vector, kummer.RANK), allow_n1=args.allow_n1).to_json()


def cmd_equivalent(args) -> dict:
    h1 = parse_vector(args.v1, kummer.RANK)
    h2 = parse_vector(args.v2, kummer.RANK)
    p1, p2 = kummer.normal_form(args.n, h1), kummer.normal_form(args.n, h2)
    return {"equivalent": p1 == p2, "normal_form_1": p1.to_json(), "normal_form_2": p2.to_json()}


def cmd_orbits(args) -> list:
    return [p.to_json() for p in kummer.orbit_enumerate(args.n, args.square)]


def cmd_divisors(args) -> list:
    ks = [args.k] if args.k is not None else range(1, args.n + 2)
    return [divisors.uniruled_divisor(args.n, k, args.pa, args.reduced).to_json() for k in ks]


def cmd_coverage(args) -> dict:
    return divisors.coverage(args.n, args.dmax)


def cmd_eichler_map(args) -> dict:
    L = _read_lattice(args.lattice)
    v, w = parse_vector(args.v, L.rank), parse_vector(args.w, L.rank)
    reason = inequivalence_reason(L, v, w)
    if reason:
        raise EichlerError(f"not Eichler equivalent: {reason}")
    return construct_isometry(L, v, w).to_json()


def cmd_disc_group(args) -> dict:
    if args.lattice is not None:
        L = _read_lattice(args.lattice)
    elif args.n is not None:
        L = kummer.kummer_lattice(args.n)
    else:
        raise InputError("disc-group needs --n or --lattice")
    return L.discriminant_group.to_json()


def cmd_verify(args) -> dict:
    s = args.suite
    kw: dict = {}
    if s in ("transvections", "roundtrip", "snf", "eichler", "faithfulness"):
        kw["seed"] = args.seed
    if s == "transvections":
        if args.n is not None:
            kw["n_values"] = [args.n]
        if args.count is not None:
            kw["count"] = args.count
    elif s == "eichler":
        if args.n is not None:
            kw["n"] = args.n
        if args.bound is not None:
            kw["bound"] = args.bound
    elif s == "faithfulness":
        if args.n is not None:
            kw["n_values"] = [args.n]
        if args.bound is not None:
            kw["bound"] = args.bound
    elif s == "coverage":
        if args.n is not None:
            kw["n_values"] = [args.n]
        if args.bound is not None:
            kw["d_max"] = args.bound
    elif s == "orbits":
        if args.n is not None:
            kw["n"] = args.n
        if args.bound is not None:
            kw["bound"] = args.bound
    elif s == "snf":
        if args.count is not None:
            kw["count"] = args.count
        if args.bound is not None:
            kw["entry_bound"] = args.bound
    elif s == "disc":
        if args.n is not None:
            kw["n_max"] = args.n
    elif s == "roundtrip":
        if args.n is not None:
            kw["n_max"] = args.n
        if args.bound is not None:
            kw["d_max"] = args.bound
        if args.count is not None:
            kw["words"] = args.count
    elif s == "calculus":
        if args.n is not None:
            kw["n_max"] = args.n
        if args.bound is not None:
            kw["pa_max"] = args.bound
    return verify.run_suite(s, **kw)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kummer-orbits", description="Monodromy orbits of polarizations on generalized Kummer lattices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("normal-form", help="polarization type of a class")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--vector", required=True, help="c1,...,c7 in the basis u1,f1,u2,f2,u3,f3,e")
    s.add_argument("--allow-n1", action="store_true", help="permit n = 1")
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("equivalent", help="do two classes lie in the same orbit")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--v1", required=True)
    s.add_argument("--v2", required=True)
    s.set_defaults(func=cmd_equivalent)

    s = sub.add_parser("orbits", help="all polarization types of a given square")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--square", type=int, required=True)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("divisors", help="uniruled divisor classes D_k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--reduced", action="store_true", help="use the reducible curve C_k")
    s.add_argument("--pa", type=int, help="arithmetic genus of H_A (default k + 2)")
    s.set_defaults(func=cmd_divisors)

    s = sub.add_parser("coverage", help="match polarization types with divisor classes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dmax", type=int, required=True)
    s.set_defaults(func=cmd_coverage)

    s = sub.add_parser("eichler-map", help="explicit isometry between Eichler-equivalent vectors")
    s.add_argument("--lattice", required=True, help="JSON file {\"rank\": r, \"gram\": [[...]]}")
    s.add_argument("--v", required=True)
    s.add_argument("--w", required=True)
    s.set_defaults(func=cmd_eichler_map)

    s = sub.add_parser("disc-group", help="discriminant group of a lattice")
    s.add_argument("--n", type=int)
    s.add_argument("--lattice")
    s.set_defaults(func=cmd_disc_group)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("--suite", required=True, choices=verify.SUITES)
    s.add_argument("--bound", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--count", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def _emit(ok: bool, result, error: str | None, out) -> None:
    out.write(json.dumps({"ok": ok, "result": result, "error": error}, sort_keys=True) + "\n")
    out.flush()


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except InputError as exc:
        _emit(False, None, str(exc), out)
        return 2
    except (LatticeError, RuntimeError) as exc:
        _emit(False, None, str(exc), out)
        return 1
    if isinstance(result, dict) and result.get("passed") is False:
        _emit(False, result, "verification failed", out)
        return 1
    _emit(True, result, None, out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
