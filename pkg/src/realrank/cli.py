"""Command-line interface: ``realrank <command> ...``.

stdout carries JSON (or CSV for ``census``); diagnostics go to stderr.
Exit codes: 0 decided, 1 undecided verdict, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .algebra.groebner import buchberger, shape_check
from .algebra.polynomial import VarOrder, parse_polynomial
from .census import CensusSpec, emit_report, run_census
from .eliminate import BACKENDS
from .engine import RankOptions, rank_auto
from .roots import RootError, UnivariatePoly, isolate_real_roots
from .systems import build_indscal_system, build_system
from .tensor import (Shape, Tensor3, TensorFormatError, classify, expected_degree,
                     indscal_expected_degree, indscal_regime, khovanskii_bound,
                     ordering_permutation, parse_tensor)

EXIT_OK, EXIT_UNDECIDED, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
SHAPE_RE = re.compile(r"^\s*\d+\s*[xX×]\s*\d+\s*[xX×]\s*\d+\s*$")


class InputError(Exception):
    pass


def _default_precision() -> int:
    env = os.environ.get("REALRANK_PRECISION")
    if not env:
        return 128
    try:
        bits = int(env)
    except ValueError:
        raise InputError(f"REALRANK_PRECISION must be an integer, got {env!r}") from None
    if bits < 53:
        raise InputError("REALRANK_PRECISION must be at least 53 bits")
    return bits


def _read_tensor(path: str) -> Tensor3:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_tensor(text)


def _order(text: Optional[str]) -> Optional[VarOrder]:
    if not text:
        return None
    names = [v.strip() for v in text.split(",") if v.strip()]
    if len(set(names)) != len(names):
        raise InputError(f"--order repeats a variable: {text}")
    return VarOrder(names)


def _check_order(order: Optional[VarOrder], variables) -> Optional[VarOrder]:
    if order is not None and sorted(order.names) != sorted(variables):
        raise InputError(f"--order must list exactly the variables {', '.join(variables)}")
    return order


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _options(args) -> RankOptions:
    return RankOptions(backend=args.backend, seed=args.seed, precision=args.precision,
                       tolerance=args.tolerance, embed=args.embed, order=_order(args.order))


def _shape_report(shape: Shape, mode: str) -> dict:
    out = {"shape": list(shape.as_tuple()), "mode": mode}
    perm = ordering_permutation(shape)
    if perm != (0, 1, 2):
        out["permutation"] = list(perm)
        dims = shape.as_tuple()
        shape = Shape(*(dims[a] for a in perm))
        out["ordered_shape"] = list(shape.as_tuple())
    if min(shape.as_tuple()) < 2:
        out["classification"] = None
        out["note"] = "a dimension equals 1: the rank is a matrix rank"
        return out
    cls = classify(shape)
    out["classification"] = cls.to_dict()
    if cls.regime == "minimal":
        out["expected_degree"] = expected_degree(shape)
    if mode == "indscal":
        out["indscal_regime"] = indscal_regime(shape.I, shape.J)
        if out["indscal_regime"] == "minimal":
            out["indscal_expected_degree"] = indscal_expected_degree(shape.J)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    if SHAPE_RE.match(args.input) and not os.path.exists(args.input):
        _emit(_shape_report(Shape.parse(args.input), args.mode or "general"))
    else:
        X = _read_tensor(args.input)
        _emit(_shape_report(X.shape, X.mode))
    return EXIT_OK


def cmd_rank(args) -> int:
    X = _read_tensor(args.input)
    r = rank_auto(X, _options(args))
    _emit(r.to_json(timings=args.timings))
    return EXIT_OK if r.decided else EXIT_UNDECIDED


def cmd_decompose(args) -> int:
    X = _read_tensor(args.input)
    r = rank_auto(X, _options(args))
    if r.certificate is None:
        print(f"no certificate: {r.verdict}", file=sys.stderr)
        _emit({"verdict": r.verdict, "certificate": None, "notes": r.notes})
        return EXIT_UNDECIDED
    out = {"verdict": r.verdict, "method": r.method, "shape": list(r.shape)}
    out.update(r.certificate.to_json())
    _emit(out)
    return EXIT_OK


def cmd_groebner(args) -> int:
    X = _read_tensor(args.input)
    if X.mode == "indscal":
        system = build_indscal_system(X)
    else:
        system = build_system(X)
    order = _check_order(_order(args.order), system.variables)
    if order is not None:
        system = (build_indscal_system(X, order) if X.mode == "indscal"
                  else build_system(X, order))
    G = buchberger(system.equations, system.order)
    rep = shape_check(G, system.order)
    _emit({
        "order": list(system.order.names),
        "normalization": system.normalization,
        "equations": len(system.equations),
        "basis": [g.to_str(system.order) for g in G],
        "size": len(G),
        "shape_position": rep.in_shape_position,
        "eliminant": rep.eliminant.to_str(system.order) if rep.eliminant is not None else None,
        "eliminant_variable": rep.eliminant_variable,
        "degree": rep.degree,
        "reason": rep.reason or None,
    })
    return EXIT_OK


def cmd_roots(args) -> int:
    try:
        p = parse_polynomial(args.input)
    except ValueError as e:
        raise InputError(str(e)) from None
    if len(p.free_symbols()) > 1:
        raise InputError(f"polynomial must be univariate, found {', '.join(p.free_symbols())}")
    u = UnivariatePoly.from_polynomial(p)
    if u.is_zero():
        raise InputError("zero polynomial has no isolated roots")
    iso = isolate_real_roots(u)
    eps = Fraction(args.tolerance).limit_denominator(10 ** 30) if args.tolerance else Fraction(1, 10 ** 12)
    out = {"variable": u.var, "degree": u.degree, "squarefree": iso.squarefree}
    out.update(iso.to_json(eps))
    _emit(out)
    return EXIT_OK


def cmd_census(args) -> int:
    if not args.shape:
        raise InputError("census needs --shape IxJxK")
    fmt = args.format or "json"
    spec = CensusSpec(Shape.parse(args.shape), args.trials, args.seed,
                      args.mode or "general", args.backend)
    try:
        spec.route()
    except ValueError as e:
        raise InputError(str(e)) from None
    h = run_census(spec, jobs=args.jobs, progress=True)
    sys.stdout.write(emit_report(h, fmt))
    return EXIT_OK


def cmd_degree(args) -> int:
    s = Shape.parse(args.input)
    if (args.mode or "general") == "indscal":
        if s.J != s.K or indscal_regime(s.I, s.J) != "minimal":
            raise InputError(f"{s} is not a minimal INDSCAL shape (I = 1 + J(J-1)/2, J = K)")
        _emit({"shape": list(s.as_tuple()), "mode": "indscal",
               "degree": indscal_expected_degree(s.J)})
        return EXIT_OK
    _emit({"shape": list(s.as_tuple()), "mode": "general", "degree": expected_degree(s),
           "khovanskii_bound": str(khovanskii_bound(s))})
    return EXIT_OK


COMMANDS = {
    "classify": (cmd_classify, "classify a tensor file or a shape literal IxJxK"),
    "rank": (cmd_rank, "decide the rank of a tensor"),
    "groebner": (cmd_groebner, "reduced lex Groebner basis of the rank-I system"),
    "roots": (cmd_roots, "isolate and refine the real roots of a univariate polynomial"),
    "decompose": (cmd_decompose, "rank-I certificate (A, B, C, S) when one exists"),
    "census": (cmd_census, "Monte-Carlo histogram of real-root counts"),
    "degree": (cmd_degree, "expected eliminant degree of a minimal shape"),
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return v


GLOBAL_DEFAULTS = {"seed": 0, "backend": "groebner", "precision": None, "format": None,
                   "order": None, "tolerance": None, "embed": False, "jobs": None,
                   "mode": None, "timings": False}


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults so that a flag
    # given before the command name is not overwritten
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    g.add_argument("--seed", type=_seed, **kw)
    g.add_argument("--backend", choices=BACKENDS, **kw)
    g.add_argument("--precision", type=int, **kw,
                   help="working precision in bits (default: $REALRANK_PRECISION or 128)")
    g.add_argument("--format", choices=("json", "csv"), **kw)
    g.add_argument("--order", **kw, help="comma-separated lex order, greatest variable first")
    g.add_argument("--tolerance", type=float, **kw)
    g.add_argument("--embed", action="store_true", **kw,
                   help="on 'rank > I', embed one row and decide I + 1")
    g.add_argument("--jobs", type=_positive, **kw)
    g.add_argument("--mode", choices=("general", "indscal"), **kw)
    g.add_argument("--timings", action="store_true", **kw, help="include wall-clock timings")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_options(suppress=True)
    parser = argparse.ArgumentParser(prog="realrank", description=__doc__.splitlines()[0],
                                     parents=[_global_options(suppress=False)])
    parser.set_defaults(**GLOBAL_DEFAULTS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        if name == "census":
            p.add_argument("--shape", required=False)
            p.add_argument("--trials", type=_positive, default=None)
        elif name == "roots":
            p.add_argument("input", help="polynomial text, e.g. 'x^2-2'")
        elif name == "degree":
            p.add_argument("input", metavar="SHAPE")
        else:
            p.add_argument("input", metavar="FILE", help="tensor JSON file or '-' for stdin")
    return parser


DEFAULT_TRIALS = {(3, 3, 2): 1000, (5, 3, 3): 200, (7, 4, 3): 50}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision is None:
            args.precision = _default_precision()
        if args.precision < 53:
            raise InputError("--precision must be at least 53 bits")
        if args.tolerance is not None and args.tolerance <= 0:
            raise InputError("--tolerance must be positive")
        if args.format == "csv" and args.command != "census":
            raise InputError("--format csv applies to census only")
        if args.command == "census" and args.trials is None:
            shape = Shape.parse(args.shape) if args.shape else None
            args.trials = DEFAULT_TRIALS.get(shape.as_tuple() if shape else None, 100)
        if args.jobs is None:
            args.jobs = os.cpu_count() or 1
        if args.command in ("rank", "decompose") and args.tolerance is None:
            args.tolerance = 1e-6
        func = COMMANDS[args.command][0]
        return func(args)
    except (InputError, TensorFormatError, RootError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
