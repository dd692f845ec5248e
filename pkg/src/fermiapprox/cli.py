"""Command line interface.

Subcommands::

    gen      write a generated instance (optimality family or seeded random)
    approx   run the approximation pipeline, print the certificate summary,
             optionally write the solution file
    oracle   dense lambda_max of a small instance
    verify   re-check a solution file against its instance, dense oracle
             included when the instance is small enough
    report   approx + verify in one run (nothing written)

Exit codes: 0 success, 1 usage error, 2 validation error (malformed files,
infeasible generator specs, cap exceeded), 3 guarantee violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Tuple

from .conflict_graph import build_graph, edge_list_text
from .dense import (
    MODE_CAP_DEFAULT,
    GuaranteeViolation,
    ModeCapError,
    lambda_max,
    realize_hamiltonian,
    regime_denominator,
    verify,
)
from .hamiltonian import Hamiltonian, InstanceError, parse_instance, serialize_instance
from .instances import (
    KIND_GENERAL,
    KIND_MIXED24,
    KIND_OPTIMALITY,
    KIND_STRICT,
    GeneratorError,
    GeneratorSpec,
    generate,
)
from .pipeline import approximate
from .states import (
    ConstraintError,
    parse_solution,
    reconstruct_solution,
    serialize_solution,
)

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_USAGE = 1
_EXIT_VALIDATION = 2
_EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors instead of 2."""

    def error(self, message: str) -> None:  # pragma: no cover - format only
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(_EXIT_USAGE)


def _read_instance(path: str) -> Hamiltonian:
    with open(path, "r", encoding="ascii") as handle:
        return parse_instance(handle.read())


def _print_kv(pairs: List[Tuple[str, str]]) -> None:
    for key, value in pairs:
        print("%s %s" % (key, value))


def _print_text(pairs: List[Tuple[str, str]]) -> None:
    width = max(len(key) for key, _ in pairs)
    for key, value in pairs:
        print("%-*s = %s" % (width, key.replace("-", " "), value))


def _emit(pairs: List[Tuple[str, str]], fmt: str) -> None:
    if fmt == "kv":
        _print_kv(pairs)
    else:
        _print_text(pairs)


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        kind=args.family,
        modes=args.n,
        num_terms=args.terms,
        sparsity=args.k,
        locality=args.q,
        seed=args.seed,
    )
    h = generate(spec)
    text = serialize_instance(h)
    if args.output:
        with open(args.output, "w", encoding="ascii") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return _EXIT_OK


def _summary_pairs(result, num_colors: int) -> List[Tuple[str, str]]:
    h = result.h
    denominator = regime_denominator(result.regime, h.sparsity, h.max_locality)
    return [
        ("modes", str(h.modes)),
        ("terms", str(len(h.terms))),
        ("sparsity-k", str(h.sparsity)),
        ("locality-q", str(h.max_locality)),
        ("regime", result.regime),
        ("weight-m", repr(h.total_weight)),
        ("denominator", str(denominator)),
        ("bound", repr(h.total_weight / denominator)),
        ("colors", str(num_colors)),
        ("selected", str(len(result.selection.term_ids))),
        ("certified-energy", repr(result.stabilizer.certified_energy)),
        ("gaussian-energy", repr(result.gaussian.energy)),
    ]


def _cmd_approx(args: argparse.Namespace) -> int:
    h = _read_instance(args.input)
    result = approximate(h, args.regime)
    if args.dump_graph:
        with open(args.dump_graph, "w", encoding="ascii") as handle:
            handle.write(edge_list_text(result.graph))
    _emit(_summary_pairs(result, result.coloring.num_colors), args.format)
    if args.output:
        text = serialize_solution(
            h, result.regime, result.coloring.num_colors, result.stabilizer, result.gaussian
        )
        with open(args.output, "w", encoding="ascii") as handle:
            handle.write(text)
    return _EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    h = _read_instance(args.input)
    value = lambda_max(realize_hamiltonian(h, args.oracle_cap))
    _emit(
        [
            ("modes", str(h.modes)),
            ("terms", str(len(h.terms))),
            ("weight-m", repr(h.total_weight)),
            ("lambda-max", repr(value)),
        ],
        args.format,
    )
    return _EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    h = _read_instance(args.input)
    with open(args.solution, "r", encoding="ascii") as handle:
        sol = parse_solution(handle.read())
    regime, _colors, stabilizer, gaussian = reconstruct_solution(h, sol)
    try:
        report = verify(h, stabilizer, gaussian, regime, args.oracle_cap)
    except GuaranteeViolation as exc:
        sys.stdout.write(
            exc.report.to_kv() if args.format == "kv" else exc.report.to_text()
        )
        sys.stderr.write("error: guarantee violated: %s\n" % exc)
        return _EXIT_VIOLATION
    sys.stdout.write(report.to_kv() if args.format == "kv" else report.to_text())
    return _EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    h = _read_instance(args.input)
    result = approximate(h, args.regime)
    try:
        report = verify(h, result.stabilizer, result.gaussian, result.regime, args.oracle_cap)
    except GuaranteeViolation as exc:
        sys.stdout.write(
            exc.report.to_kv() if args.format == "kv" else exc.report.to_text()
        )
        sys.stderr.write("error: guarantee violated: %s\n" % exc)
        return _EXIT_VIOLATION
    sys.stdout.write(report.to_kv() if args.format == "kv" else report.to_text())
    return _EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="fermiapprox",
        description="Certified approximation of the largest eigenvalue of "
        "sparse fermionic Hamiltonians.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument(
        "--family",
        choices=(KIND_OPTIMALITY, KIND_STRICT, KIND_MIXED24, KIND_GENERAL),
        required=True,
    )
    gen.add_argument("--n", type=int, required=True, help="number of modes")
    gen.add_argument("--terms", type=int, default=0, help="term count (random kinds)")
    gen.add_argument("--k", type=int, default=2, help="sparsity bound (random kinds)")
    gen.add_argument("--q", type=int, default=2, help="locality (strictq kind)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", default=None, help="instance file (default stdout)")
    gen.set_defaults(func=_cmd_gen)

    approx = sub.add_parser("approx", help="run the approximation pipeline")
    approx.add_argument("--input", required=True)
    approx.add_argument("--output", default=None, help="solution file to write")
    approx.add_argument(
        "--regime",
        choices=("auto", "mixed24", "strictq", "general"),
        default="auto",
    )
    approx.add_argument("--format", choices=("text", "kv"), default="text")
    approx.add_argument("--dump-graph", default=None, help="edge list file to write")
    approx.set_defaults(func=_cmd_approx)

    oracle = sub.add_parser("oracle", help="dense lambda_max of a small instance")
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--oracle-cap", type=int, default=MODE_CAP_DEFAULT)
    oracle.add_argument("--format", choices=("text", "kv"), default="text")
    oracle.set_defaults(func=_cmd_oracle)

    ver = sub.add_parser("verify", help="re-check a solution file")
    ver.add_argument("--input", required=True)
    ver.add_argument("--solution", required=True)
    ver.add_argument("--oracle-cap", type=int, default=MODE_CAP_DEFAULT)
    ver.add_argument("--format", choices=("text", "kv"), default="text")
    ver.set_defaults(func=_cmd_verify)

    rep = sub.add_parser("report", help="approx + verify without writing files")
    rep.add_argument("--input", required=True)
    rep.add_argument(
        "--regime",
        choices=("auto", "mixed24", "strictq", "general"),
        default="auto",
    )
    rep.add_argument("--oracle-cap", type=int, default=MODE_CAP_DEFAULT)
    rep.add_argument("--format", choices=("text", "kv"), default="text")
    rep.set_defaults(func=_cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else _EXIT_OK
    try:
        return args.func(args)
    except (InstanceError, GeneratorError, ModeCapError, ConstraintError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return _EXIT_VALIDATION
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return _EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
