"""
Command line front end.

Reports go to stdout, logs and ``--stats`` to stderr, so that identical
invocations produce identical reports.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import structlog

from .config import get_settings
from .core import SUITE_ALIASES, SUITES, HyperoperadEngine
from .exceptions import GraphParseError, HyperoperadError, VerificationFailure
from .formal_sum import FormalSum
from .models import CheckResult, DifferentialPart, Flavor
from .oracles import (
    bv_dims,
    bv_poincare,
    format_bracket,
    gr_t_dims,
    holie_corolla,
    holie_delta,
    holie_trees,
    ihx_quotient_dim,
    lyndon_words,
    standard_bracketing,
    witt_dim,
)
from .serialization import dump_sum, load_sum, serialize


logger = logging.getLogger(__name__)

PARTS = {
    "black": DifferentialPart.BLACK_SPLIT,
    "star": DifferentialPart.WHITE_STAR_SPLIT,
    "one": DifferentialPart.WHITE_ONE_EDGE,
    "two": DifferentialPart.WHITE_TWO_EDGE,
    "dbb": DifferentialPart.DBB,
    "dbw": DifferentialPart.DBW,
    "d1": DifferentialPart.D1,
    "d2": DifferentialPart.D2,
}


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


def configure_logging(debug: bool = False, log_format: str = "text") -> None:
    """Route the standard library loggers through a structlog renderer on stderr."""
    renderer = structlog.processors.JSONRenderer() if log_format == "json" else structlog.dev.ConsoleRenderer(colors=False)
    formatter = structlog.stdlib.ProcessorFormatter(
        processor=renderer,
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
        ],
    )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if debug else logging.INFO)


def _flavor(text: str) -> Flavor:
    try:
        return Flavor.from_tag(text)
    except (HyperoperadError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperoperad", description="Hypergraph operads and their graph complexes")
    parser.add_argument("--format", choices=("text", "json"), default="text", help="Report format")
    parser.add_argument("--stats", action="store_true", help="Print timings and counters to stderr")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes for matrix assembly")
    parser.add_argument("--cache", type=Path, default=None, help="Cache root directory")
    parser.add_argument("--no-cache", action="store_true", help="Do not read or write the cache")
    parser.add_argument("--debug", action="store_true", help="Debug logging")
    parser.add_argument("--log-format", choices=("text", "json"), default="text", help="Log rendering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="Graded basis of one piece")
    p.add_argument("--flavor", type=_flavor, required=True)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--degree", type=int, default=None)

    p = sub.add_parser("differential", help="Apply a differential to a formal sum")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--part", choices=sorted(PARTS), default=None)

    p = sub.add_parser("compose", help="Partial composition of two formal sums")
    p.add_argument("--left", type=Path, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--right", type=Path, required=True)
    p.add_argument("--j", type=int, required=True)

    p = sub.add_parser("cohomology", help="Cohomology dimensions over a weight window")
    p.add_argument("--flavor", type=_flavor, required=True)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--weight", type=int, default=None, help="A single weight")
    p.add_argument("--weight-min", type=int, default=None)

    p = sub.add_parser("verify", help="Run a verification suite")
    p.add_argument("--suite", choices=SUITES + tuple(SUITE_ALIASES) + ("all",), default="all")
    p.add_argument("--weight-min", type=int, default=-2)

    p = sub.add_parser("oracle", help="Reference dimensions")
    p.add_argument("which", choices=("bv", "witt", "gr-t", "holie"))
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--gens", type=int, default=2)
    p.add_argument("--len", dest="length", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--legs", type=int, default=4)
    p.add_argument("--d", type=int, default=2)

    p = sub.add_parser("ich", help="Checks on the internally connected part")
    p.add_argument("--check", choices=("h0", "relations"), required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--weights", type=int, nargs="+", default=[-1])
    return parser


def _read_sum(path: Path) -> FormalSum:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GraphParseError(f"cannot read {path}: {e}")
    return load_sum(text)


def _emit(args: argparse.Namespace, payload: Any, lines: Sequence[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for line in lines:
            sys.stdout.write(line + "\n")


def _emit_sum(args: argparse.Namespace, total: FormalSum) -> None:
    terms = [json.loads(line) for line in dump_sum(total).splitlines()]
    _emit(args, {"terms": terms}, dump_sum(total).splitlines() or ["0"])


def cmd_enumerate(engine: HyperoperadEngine, args) -> int:
    bases = engine.enumerate(args.flavor, args.arity, args.weight, args.degree)
    payload = []
    lines = []
    for basis in bases:
        graphs = [serialize(g) for g in basis.graphs()]
        payload.append({"degree": basis.degree, "size": len(basis), "graphs": [json.loads(t) for t in graphs]})
        lines.append(f"# degree {basis.degree}: {len(basis)}")
        lines.extend(graphs)
    _emit(args, {"flavor": args.flavor.tag, "arity": args.arity, "weight": args.weight, "pieces": payload}, lines)
    return 0


def cmd_differential(engine: HyperoperadEngine, args) -> int:
    part = PARTS[args.part] if args.part else None
    _emit_sum(args, engine.differential(_read_sum(args.input), part))
    return 0


def cmd_compose(engine: HyperoperadEngine, args) -> int:
    _emit_sum(args, engine.compose(_read_sum(args.left), args.i, _read_sum(args.right), args.j))
    return 0


def cmd_cohomology(engine: HyperoperadEngine, args) -> int:
    if args.weight is not None and args.weight_min is not None:
        raise UsageError("give either --weight or --weight-min")
    if args.weight is not None:
        low, high = args.weight, args.weight
    else:
        low, high = (args.weight_min if args.weight_min is not None else -2), 0
    results = engine.cohomology(args.flavor, args.arity, low, high)
    lines = [f"{'weight':>6} {'degree':>6} {'basis':>6} {'dim':>4}"]
    for dims in results:
        for k in sorted(dims.basis_sizes):
            lines.append(f"{dims.weight:>6} {k:>6} {dims.basis_sizes[k]:>6} {dims.dims.get(k, 0):>4}")
    _emit(args, [dims.model_dump() for dims in results], lines)
    return 0


def _result_line(result: CheckResult) -> str:
    line = f"{'PASS' if result.passed else 'FAIL'}  {result.name}"
    if result.passed:
        return line
    if result.detail:
        line += f"  [{result.detail}]"
    if result.expected is not None or result.computed is not None:
        line += f"\n      expected: {result.expected}\n      computed: {result.computed}"
    return line


def cmd_verify(engine: HyperoperadEngine, args) -> int:
    results = engine.verify(args.suite, args.weight_min)
    lines = [_result_line(r) for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    _emit(args, [r.model_dump() for r in results], lines)
    if failed:
        raise VerificationFailure(failed[0].name, failed[0].expected, failed[0].computed, failed[0].detail)
    return 0


def cmd_oracle(engine: HyperoperadEngine, args) -> int:
    payload: Dict[str, Any]
    lines: List[str]
    if args.which == "bv":
        dims, expected = bv_dims(args.arity), bv_poincare(args.arity)
        payload = {"arity": args.arity, "dims": dims, "poincare": expected}
        lines = [f"{k:>4} {dims.get(k, 0):>4} {expected.get(k, 0):>4}" for k in sorted(set(dims) | set(expected), reverse=True)]
    elif args.which == "witt":
        words = lyndon_words(args.gens, args.length)
        payload = {"gens": args.gens, "length": args.length, "dim": witt_dim(args.gens, args.length),
                   "basis": [format_bracket(standard_bracketing(w)) for w in words]}
        lines = [f"dim {payload['dim']}"] + payload["basis"]
    elif args.which == "gr-t":
        payload = {"n": args.n, "dims": {length: gr_t_dims(args.n, length) for length in range(1, args.length + 1)}}
        lines = [f"{length:>4} {dim:>6}" for length, dim in payload["dims"].items()]
    else:
        jacobi = holie_delta(holie_corolla(args.legs, args.d))
        payload = {
            "legs": args.legs,
            "d": args.d,
            "corolla_delta_terms": len(jacobi),
            "trees": len(holie_trees(args.legs, d=args.d)),
            "ihx_quotient": ihx_quotient_dim(args.legs, args.d),
        }
        lines = [f"{key} {value}" for key, value in payload.items()]
    _emit(args, payload, lines)
    return 0


def cmd_ich(engine: HyperoperadEngine, args) -> int:
    if args.check == "h0":
        rows = engine.h0_rows(args.n, args.weights)
        lines = [
            f"n={r.n} weight={r.weight} computed={r.dim_computed} oracle={r.dim_oracle} "
            f"with_center={r.conventions['with_center']} without_center={r.conventions['without_center']}"
            for r in rows
        ]
        _emit(args, [r.model_dump() for r in rows], lines)
        return 0 if all(r.match is not False for r in rows) else 1
    rows = engine.relation_report(args.n + 1)
    lines = [f"a={r['a']} c={r['c']} d={r['d']} terms={r['terms']} exact={r['exact']}" for r in rows]
    _emit(args, rows, lines)
    return 0 if all(r["exact"] for r in rows) else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "differential": cmd_differential,
    "compose": cmd_compose,
    "cohomology": cmd_cohomology,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "ich": cmd_ich,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0

    configure_logging(args.debug, args.log_format)
    settings = get_settings(
        workers=args.workers,
        cache=args.cache,
        use_cache=False if args.no_cache else None,
    )
    engine = HyperoperadEngine(settings)
    try:
        code = COMMANDS[args.command](engine, args)
    except UsageError as e:
        sys.stderr.write(f"hyperoperad: {e}\n")
        return 2
    except GraphParseError as e:
        sys.stderr.write(f"hyperoperad: {e}\n")
        return 2
    except VerificationFailure as e:
        logger.error("Verification failed: %s", e)
        return 1
    except HyperoperadError as e:
        sys.stderr.write(f"hyperoperad: {e}\n")
        return 1
    finally:
        if args.stats:
            sys.stderr.write(json.dumps(engine.summary(), sort_keys=True, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
