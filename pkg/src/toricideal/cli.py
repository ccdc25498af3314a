"""Command line interface.

Usage: toricideal <cmd> <file> [--t p/q] [--out path] [--box N]
                               [--format json|text]

Exit codes: 0 success, 1 usage or parse error, 2 mathematical precondition
failure (for example a non-Q-Cartier log divisor), 3 verification
disagreement. One problem file in, one document out (stdout or --out); no
environment variable affects any computation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .divisors import NotQCartierError
from .problems import (
    COMMANDS,
    MathError,
    ProblemError,
    VerificationError,
    parse_problem,
    render_document,
    run_command,
)

__all__ = ["main", "entrypoint"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricideal",
        description=(
            "Exact test-ideal and multiplier-ideal computations for monomial "
            "ideals on affine toric schemes."
        ),
        exit_on_error=False,
    )
    parser.add_argument("cmd", choices=COMMANDS, help="command to run")
    parser.add_argument("file", help="path to a JSON problem file")
    parser.add_argument("--t", dest="t", default=None, metavar="p/q",
                        help="override the exponent t from the file")
    parser.add_argument("--out", dest="out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")
    parser.add_argument("--box", dest="box", type=int, default=8, metavar="N",
                        help="truncation bound for the verification oracle")
    parser.add_argument("--format", dest="fmt", choices=("json", "text"),
                        default="json", help="output format")
    return parser


def _write_output(data, out: Optional[str]) -> None:
    if out is None:
        if isinstance(data, bytes):
            sys.stdout.write(data.decode("utf-8"))
        else:
            sys.stdout.write(data)
        return
    path = Path(out)
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data, encoding="utf-8")


def _run_plot(problem, t_override, out: Optional[str]) -> None:
    from .divisors import pair_weight
    from .newton import newton_polyhedron
    from .plotting import render_plot
    from .test_ideals import bcm_test_ideal_pair, bcm_test_ideal_triple

    if problem.rank != 2:
        raise ProblemError("plot requires a rank-2 problem")
    sigma = problem.cone()
    delta = problem.q_divisor()
    pw = pair_weight(sigma, delta)
    if problem.ideal is not None:
        t = t_override if t_override is not None else problem.t
        if t is None:
            raise ProblemError("plot of a triple needs `t` (file or --t)")
        ideal = problem.monomial_ideal()
        ans = bcm_test_ideal_triple(sigma, delta, ideal, t)
        newton = newton_polyhedron(ideal)
        body = newton.scale(Fraction(t))
        title = f"t = {Fraction(t)}"
    else:
        ans = bcm_test_ideal_pair(sigma, delta)
        newton = None
        from .newton import NewtonPolyhedron

        dual = sigma.dual()
        body = NewtonPolyhedron(
            vertices=(tuple(Fraction(0) for _ in range(2)),),
            facets=tuple((n, Fraction(0)) for n in dual.halfspaces()),
            recession=dual,
        )
        title = "pair"
    svg = render_plot(
        sigma,
        generators=ans.generators,
        body=body,
        shift=pw.w,
        newton=newton,
        title=title,
    )
    _write_output(svg, out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except (argparse.ArgumentError, SystemExit) as exc:
        if isinstance(exc, SystemExit):
            # argparse printed its own message (e.g. --help); translate code
            return 0 if exc.code in (0, None) else 1
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 1

    try:
        t_override = Fraction(args.t) if args.t is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: bad --t value {args.t!r}: {exc}", file=sys.stderr)
        return 1

    try:
        problem = parse_problem(text)
        for warning in problem.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        if args.cmd == "plot":
            _run_plot(problem, t_override, args.out)
            return 0
        doc = run_command(
            args.cmd, problem, t_override=t_override, box_bound=args.box
        )
        _write_output(render_document(doc, args.fmt), args.out)
        if args.cmd == "verify" and not doc.get("agreement", False):
            print("error: verification disagreement", file=sys.stderr)
            return 3
        return 0
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MathError, NotQCartierError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
