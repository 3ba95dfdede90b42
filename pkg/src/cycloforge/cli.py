"""Command-line entry point: ``cycloforge <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from . import bounds
from .constructions import corollary1_construct, corollary2_construct, theorem1_construct
from .core import BudgetError, CycloError, parse_sum
from .galois import conductor, stabilizer
from .length import DEFAULT_NODE_BUDGET, length_interval
from .vanishing import DEFAULT_WEIGHT_CAP, canonicalize, enumerate_mvs, is_minimal_vanishing, is_vanishing

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(CycloError):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_conductor(args) -> int:
    rep = conductor(parse_sum(args.sum))
    d = rep.to_dict()
    _emit(args, d, f"conductor {d['conductor']}\nindex {d['index']}\ndegree {d['degree']}")
    return EXIT_OK


def cmd_stabilizer(args) -> int:
    stab = stabilizer(parse_sum(args.sum), args.modulus)
    d = {"modulus": stab.modulus, "order": stab.order, "elements": list(stab.elements)}
    _emit(args, d, f"modulus {stab.modulus}\norder {stab.order}\nelements {', '.join(map(str, stab.elements))}")
    return EXIT_OK


def cmd_index(args) -> int:
    rep = conductor(parse_sum(args.sum))
    _emit(args, {"conductor": rep.conductor, "index": rep.index}, str(rep.index))
    return EXIT_OK


def cmd_mvs_enum(args) -> int:
    atlas = enumerate_mvs(args.weight, cap=args.cap, workers=args.threads)
    payload = atlas.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    lines = [f"{len(atlas)} classes"] + [" ".join(map(str, c.exponents)) for c in atlas.entries]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_mvs_check(args) -> int:
    s = parse_sum(args.sum)
    vanishing = is_vanishing(s)
    minimal = vanishing and is_minimal_vanishing(s)
    canon = canonicalize(s) if minimal and s.weight else None
    d = {
        "vanishing": vanishing,
        "minimal": minimal,
        "canonical": list(canon.exponents) if canon else None,
        "primorial": canon.ell if canon else None,
    }
    text = f"vanishing {vanishing}\nminimal {minimal}"
    if canon:
        text += f"\ncanonical {' '.join(map(str, canon.exponents))} (mod {canon.ell})"
    _emit(args, d, text)
    return EXIT_OK


def cmd_length(args) -> int:
    res = length_interval(parse_sum(args.sum), args.max_weight, args.order_bound, args.node_budget)
    d = res.to_dict()
    text = f"length in [{res.lower}, {res.upper}]" + (" (certified)" if res.certified else "")
    if res.witness is not None:
        text += f"\nwitness {res.witness}"
    _emit(args, d, text)
    return EXIT_OK


def _parse_params(text: str) -> dict[str, list[int]]:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(";"))):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        try:
            out[key.strip()] = [int(v) for v in value.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"bad parameter {item!r}") from exc
    return out


def cmd_construct(args) -> int:
    params = _parse_params(args.params)
    try:
        if args.family == "theorem1":
            rep = theorem1_construct(params["primes"], params["orders"], certify_length=args.certify_length)
        else:
            (k,) = params["k"]
            build = corollary1_construct if args.family == "corollary1" else corollary2_construct
            rep = build(k, certify_length=args.certify_length)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, CycloError):
            raise
        raise UsageError(f"missing or malformed parameters for {args.family}: {args.params!r}") from exc
    d = rep.to_dict()
    lines = [f"{key} {value}" for key, value in d.items()]
    _emit(args, d, "\n".join(lines))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .checks import run_checks

    results = run_checks(fast=args.fast, seed=args.seed, echo=None if args.json else print)
    if args.json:
        print(json.dumps([r.__dict__ for r in results], indent=2))
    else:
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def _table_range(text: str | None, k: int) -> range:
    if text is None:
        return range(k, k + 1)
    if text == "":
        return range(1, k + 1)
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(1, int(lo) + 1)
    except ValueError as exc:
        raise UsageError(f"bad table range {text!r}") from exc


def cmd_bound(args) -> int:
    if args.k is None and not args.table:
        raise UsageError("bound needs --k or --table")
    reports = [bounds.bound_report(k) for k in _table_range(args.table, args.k or 0)]
    if args.json:
        payload = [r.to_dict() for r in reports]
        print(json.dumps(payload[0] if args.table is None else payload, indent=2))
    else:
        for r in reports:
            print(f"k={r.k} log_upper={r.log_upper:.4f} lower_observed={r.lower_observed} consistent={r.consistent}")
    return EXIT_OK if all(r.consistent for r in reports) else EXIT_FAILED


_GLOBAL_DEFAULTS = {"json": False, "threads": 1, "seed": 0}


def _global_flags(parser: argparse.ArgumentParser):
    # accepted before or after the subcommand; SUPPRESS keeps a later parser from resetting them
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycloforge", description="Exact tools for sums of roots of unity.")
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p)
        p.set_defaults(func=func)
        return p

    for name, func, text in (
        ("conductor", cmd_conductor, "conductor, index and degree of a sum"),
        ("index", cmd_index, "index of Q(alpha) in its conductor field"),
        ("mvs-check", cmd_mvs_check, "vanishing/minimality test and canonical form"),
    ):
        add(name, func, text).add_argument("sum", help='e.g. "1/8, 7/8, 1/7, 2/7, 4/7"')

    p = add("stabilizer", cmd_stabilizer, "Galois stabilizer of a sum")
    p.add_argument("sum")
    p.add_argument("--modulus", type=int, default=None)

    p = add("mvs-enum", cmd_mvs_enum, "minimal vanishing sums of a weight, up to rotation")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--out", default=None, help="write the atlas as JSON")
    p.add_argument("--cap", type=int, default=DEFAULT_WEIGHT_CAP)

    p = add("length", cmd_length, "bounded search for the length of a sum")
    p.add_argument("sum")
    p.add_argument("--max-weight", type=int, required=True)
    p.add_argument("--order-bound", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)

    p = add("construct", cmd_construct, "build a counterexample family member")
    p.add_argument("--family", choices=("theorem1", "corollary1", "corollary2"), required=True)
    p.add_argument("--params", required=True, help='"k=6" or "primes=5,7;orders=2,3"')
    p.add_argument("--certify-length", action="store_true")

    p = add("verify-paper", cmd_verify_paper, "run the reproducibility checklist")
    p.add_argument("--fast", action="store_true", help="skip the weight-8 enumeration")

    p = add("bound", cmd_bound, "upper and observed lower bounds on d(k)")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--table", nargs="?", const="", default=None, metavar="A..B")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CycloError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
