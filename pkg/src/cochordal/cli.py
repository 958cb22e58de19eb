"""Command-line front end.

Exit codes: ``recognize`` returns 0 (homogeneous), 1 (decomposable only) or
2 (neither); ``verify`` and ``witness`` return 0 when the hypotheses hold and
3 otherwise. Malformed input exits with 64, inconsistent input (dimension or
ordering mismatch) with 65, unreadable files with 66, and an unavailable
scheme or a non-homogeneous graph for ``hasse`` with 2.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import CochordalError, DimensionMismatch, NoSuchScheme, NotHomogeneous, OrderingMismatch, ParseError
from .formats import dumps, read_graph, read_matrix, read_ordering
from .matrix import FLOAT, KINDS, RATIONAL
from .preservation import check_factor, check_sigma, construct_L_witness, construct_sigma_witness, verify_theorem1
from .preservation import VerificationReport
from .structure import (
    build_hasse_forest,
    find_hasse_elimination_ordering,
    find_perfect_elimination_ordering,
    is_hasse_elimination_ordering,
    is_homogeneous,
    is_perfect_elimination_ordering,
)

EXIT_OK, EXIT_CHORDAL_ONLY, EXIT_NEITHER, EXIT_FAIL = 0, 1, 2, 3
EXIT_PARSE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66


def _braces(labels) -> str:
    return "{" + ",".join(labels) + "}"


def cmd_recognize(args) -> tuple[str, int]:
    g = read_graph(args.graph)
    sigma = find_perfect_elimination_ordering(g)
    homogeneous, quad = is_homogeneous(g)
    lines = [f"vertices: {len(g)}", f"edges: {len(g.edges())}"]
    if sigma is None:
        lines.append("decomposable: no")
    else:
        lines.append("decomposable: yes")
        lines.append("perfect elimination ordering: " + " ".join(f"{v}={i + 1}" for i, v in enumerate(sigma.inverse)))
    lines.append(f"homogeneous: {'yes' if homogeneous else 'no'}")
    if homogeneous:
        htbes = find_hasse_elimination_ordering(g)
        lines.append("hasse elimination ordering: " + " ".join(f"{v}={i + 1}" for i, v in enumerate(htbes.inverse)))
        verdict, code = "homogeneous", EXIT_OK
    else:
        lines.append(f"offending 4-subset: {_braces(quad)}")
        if sigma is not None:
            verdict, code = "decomposable, not homogeneous", EXIT_CHORDAL_ONLY
        else:
            verdict, code = "not decomposable", EXIT_NEITHER
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines) + "\n", code


def cmd_order(args) -> tuple[str, int]:
    g = read_graph(args.graph)
    if args.scheme == "pves":
        sigma = find_perfect_elimination_ordering(g)
        if sigma is None:
            raise NoSuchScheme("graph is not decomposable; no perfect elimination ordering exists")
        ok, _ = is_perfect_elimination_ordering(g, sigma)
    else:
        if not is_homogeneous(g)[0]:
            raise NoSuchScheme("graph is not homogeneous; no Hasse tree based elimination scheme exists")
        sigma = find_hasse_elimination_ordering(g)
        ok, _ = is_hasse_elimination_ordering(g, sigma)
    assert ok, "constructed ordering failed validation"
    return sigma.to_text(), EXIT_OK


def cmd_hasse(args) -> tuple[str, int]:
    return build_hasse_forest(read_graph(args.graph)).to_dot(), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    g = read_graph(args.graph)
    sigma = read_ordering(args.ordering)
    sigma.check_domain(g)
    if args.matrix is None:
        report = verify_theorem1(g, sigma, args.trials, args.seed, kind=args.mode, tol=args.tol)
        out = report.to_dict()
    else:
        m = read_matrix(args.matrix).astype(args.mode)
        if not m.is_square or m.n != len(g):
            raise DimensionMismatch(f"matrix is {m.shape[0]}x{m.shape[1]}, graph has {len(g)} vertices")
        if m.is_symmetric(args.tol):
            failures, role = check_sigma(m, g, sigma, tol=args.tol), "Sigma"
        elif m.is_unit_lower_triangular(args.tol):
            failures, role = check_factor(m, g, sigma, tol=args.tol), "L"
        else:
            raise DimensionMismatch("matrix is neither symmetric nor unit lower triangular")
        report = VerificationReport(g, sigma, trials=1, seed=None, failures=failures)
        out = report.to_dict()
        out["matrix_role"] = role
    return dumps(out), EXIT_OK if report.passed else EXIT_FAIL


def cmd_witness(args) -> tuple[str, int]:
    g = read_graph(args.graph)
    sigma = read_ordering(args.ordering)
    sigma.check_domain(g)
    witnesses = [w for w in (construct_L_witness(g, sigma), construct_sigma_witness(g, sigma)) if w]
    if not witnesses:
        return dumps({"message": "no witness: hypotheses hold", "witnesses": []}), EXIT_OK
    return dumps({"witnesses": [w.to_dict() for w in witnesses]}), EXIT_FAIL


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


GLOBAL_DEFAULTS = {"mode": RATIONAL, "tol": 1e-9, "seed": 0, "trials": 200, "out": None}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda k: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    p.add_argument("--mode", choices=KINDS, default=d("mode"), help="scalar field (default: rational)")
    p.add_argument("--tol", type=_positive_float, default=d("tol"), help="float zero tolerance (default: 1e-9)")
    p.add_argument("--seed", type=int, default=d("seed"), help="base seed for randomized checks (default: 0)")
    p.add_argument("--trials", type=_positive_int, default=d("trials"), help="random trials (default: 200)")
    p.add_argument("--out", type=Path, default=d("out"), help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cochordal",
        description="Homogeneous graph recognition and Cholesky zero-pattern verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", parents=[common], help="decomposable / homogeneous recognition")
    p.add_argument("graph")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("order", parents=[common], help="construct an elimination ordering")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=("pves", "htbes"), default="htbes")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("hasse", parents=[common], help="Hasse forest as DOT")
    p.add_argument("graph")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("verify", parents=[common], help="check pattern preservation and clique determinants")
    p.add_argument("graph")
    p.add_argument("ordering")
    p.add_argument("matrix", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", parents=[common], help="emit counterexamples when hypotheses fail")
    p.add_argument("graph")
    p.add_argument("ordering")
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NoSuchScheme, NotHomogeneous) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NEITHER
    except (DimensionMismatch, OrderingMismatch) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CochordalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
