"""Command line interface.

Exit codes: 0 for a definite answer, 2 for unknown, 1 for errors (and for
a result that fails verification).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import TelescoperError
from .field import max_variable_index
from .forms import DifferentialForm
from .frontend import (
    ProblemInstance,
    dumps_result,
    form_to_json,
    has_telescoper,
    load_instance,
    load_result,
    verify,
)
from .ore import OreOperator, ore_gcrd, ore_lclm, ore_rdiv, ore_transform
from .parsing import name_index
from .poincare import telescope_closed
from .separability import SeparabilityOptions, is_separable

EXIT_DEFINITE = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2


def _arity(*texts: str) -> int:
    return max(max_variable_index(t) for t in texts)


def _read_hints(path: str | None, n: int) -> list[OreOperator]:
    if not path:
        return []
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return [OreOperator.parse(ln, n) for ln in lines]


def _apply_flags(instance: ProblemInstance, args: argparse.Namespace) -> None:
    sep = instance.separability
    if args.bound is not None:
        sep.mixed_bound = args.bound
        sep.riccati_bound = args.bound
    if args.accept_bound_negatives:
        sep.accept_bound_negatives = True
    if args.hints:
        sep.hints = sep.hints + _read_hints(args.hints, instance.n)


def _emit(args: argparse.Namespace, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _form_lines(mu: DifferentialForm) -> list[str]:
    if mu.is_zero():
        return ["mu = 0"]
    out = []
    for idx, f in mu.terms.items():
        basis = "^".join(f"dx{i}" for i in idx) or "1"
        coords = [str(c) for c in f.coords]
        out.append(f"mu[{basis}] = " + (coords[0] if len(coords) == 1 else "[" + ", ".join(coords) + "]"))
    return out


def cmd_telescope(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    _apply_flags(instance, args)
    result = has_telescoper(instance)
    if args.json:
        print(dumps_result(result))
    else:
        lines = [result.status]
        if result.L is not None:
            lines.append(f"L = {result.L}")
        if result.mu is not None:
            lines.extend(_form_lines(result.mu))
        print("\n".join(lines))
    return EXIT_UNKNOWN if result.status == "unknown" else EXIT_DEFINITE


def cmd_separable(args: argparse.Namespace) -> int:
    n = _arity(args.operator)
    P = OreOperator.parse(args.operator, n)
    opts = SeparabilityOptions(accept_bound_negatives=args.accept_bound_negatives, hints=_read_hints(args.hints, n))
    if args.bound is not None:
        opts.mixed_bound = opts.riccati_bound = args.bound
    v = is_separable(P, opts)
    payload = {"status": v.status, "L": None if v.L is None else str(v.L), "provenance": v.provenance}
    lines = [v.status] + ([f"L = {v.L}"] if v.L is not None else [])
    _emit(args, payload, lines)
    return EXIT_UNKNOWN if v.status == "unknown" else EXIT_DEFINITE


def cmd_closed(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    n = instance.n
    s = n if args.level is None else args.level
    if args.V is not None:
        V = [g.strip() for g in args.V.split(",") if g.strip()]
    else:
        V = [f"Dx{j}" for j in range(s + 1, n + 1)]
    for g in V:
        name_index(g)
    cert = telescope_closed(instance.omega, s, V, instance.ansatz)
    payload = {
        "level": s,
        "V": list(V),
        "L": str(cert.L),
        "mu": form_to_json(cert.mu),
        "engine_calls": cert.stats.engine_calls,
        "max_depth": cert.stats.max_depth,
    }
    _emit(args, payload, [f"L = {cert.L}"] + _form_lines(cert.mu))
    return EXIT_DEFINITE


def cmd_ops(args: argparse.Namespace) -> int:
    n = _arity(args.A, args.B)
    A = OreOperator.parse(args.A, n)
    B = OreOperator.parse(args.B, n)
    if args.op == "mul":
        payload = {"result": str(A * B)}
    elif args.op == "rdiv":
        q, r = ore_rdiv(A, B)
        payload = {"quotient": str(q), "remainder": str(r)}
    elif args.op == "gcrd":
        payload = {"result": str(ore_gcrd(A, B))}
    elif args.op == "lclm":
        payload = {"result": str(ore_lclm(A, B))}
    else:
        payload = {"result": str(ore_transform(A, B))}
    lines = [payload["result"]] if "result" in payload else [f"quotient = {payload['quotient']}", f"remainder = {payload['remainder']}"]
    _emit(args, payload, lines)
    return EXIT_DEFINITE


def cmd_verify(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    result = load_result(args.result, instance)
    ok = verify(instance, result)
    _emit(args, {"verified": ok}, ["verified" if ok else "rejected"])
    return EXIT_DEFINITE if ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=None, help="degree bound for separability ansatzes")
    common.add_argument("--accept-bound-negatives", action="store_true", help="report bound-limited negatives as definite")
    common.add_argument("--hints", default=None, help="file with right-factor hints, one operator per line")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="telescoper", description="Telescopers for differential forms with D-finite coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("telescope", parents=[common], help="decide and construct a telescoper for an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_telescope)

    p = sub.add_parser("separable", parents=[common], help="decide (x,t)-separability of a monic operator in Dt")
    p.add_argument("operator")
    p.set_defaults(func=cmd_separable)

    p = sub.add_parser("closed", parents=[common], help="telescoper with certificate for a closed form")
    p.add_argument("instance")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--V", default=None, help="comma separated generators for indices above the level")
    p.set_defaults(func=cmd_closed)

    p = sub.add_parser("ops", parents=[common], help="operator arithmetic in K<Dt>")
    p.add_argument("op", choices=["mul", "rdiv", "gcrd", "lclm", "transform"])
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_ops)

    p = sub.add_parser("verify", parents=[common], help="check a result against its instance")
    p.add_argument("instance")
    p.add_argument("result")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TelescoperError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
