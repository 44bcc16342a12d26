"""Command-line front end: ``klfactor <subcommand> [options]``.

Every report is a JSON object tagged ``{"schema": 1}``.  Exit status is 2
for unparseable input, 1 when a ``verify`` or ``sweep`` property check fails,
3 when ``verify`` or ``sweep`` ran out of its time budget, and 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from collections.abc import Sequence

import yaml

from . import checks
from .coxeter import Permutation
from .factorization import (
    Factorization,
    class_count,
    defect_polynomials,
    defect_polynomials_via_hecke,
    is_admissible,
    is_tight,
    is_tight_via_hecke,
    resolution_dimension,
)
from .heap import (
    build_heap,
    heap_is_minimal,
    heap_is_strong_bidescent,
    heap_is_strong_rdes,
    lattice_embedding,
)
from .hecke import kl_basis, kl_table
from .laurent import InexactDivisionError
from .patterns import (
    avoidance_class,
    directedness_profile,
    is_monotone,
    monotone_factorization,
    strong_rdes_intervals,
)

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TRUNCATED = 0, 1, 2, 3


class UsageError(ValueError):
    """Malformed command-line input (exit status 2)."""


# ---------------------------------------------------------------------------
# argument parsing


def parse_permutation(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from exc


def parse_blocks(text: str, n: int | None) -> Factorization:
    """Blocks as JSON (``[[2],[1,3],[2]]``) or as printed (``({2}, {1,3}, {2})``)."""
    s = text.strip()
    try:
        lists = json.loads(s)
        if not isinstance(lists, list) or not all(isinstance(b, list) for b in lists):
            raise UsageError(f"blocks must be a list of lists, got {text!r}")
    except json.JSONDecodeError:
        groups = re.findall(r"\{([^{}]*)\}", s)
        if not groups and s != "()":
            raise UsageError(f"cannot parse blocks {text!r}") from None
        try:
            lists = [[int(t) for t in re.split(r"[,\s]+", g.strip()) if t] for g in groups]
        except ValueError as exc:
            raise UsageError(f"cannot parse blocks {text!r}") from exc
    if not all(isinstance(g, int) and not isinstance(g, bool) for b in lists for g in b):
        raise UsageError(f"generators must be integers in {text!r}")
    if n is None:
        n = max((g for b in lists for g in b), default=0) + 1
    try:
        return Factorization.of(n, lists)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return k


def _factorization_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_positive, help="window size (default: largest generator + 1)")
    p.add_argument("--blocks", required=True, help='block sequence, e.g. "[[2],[1,3],[2]]"')
    p.add_argument(
        "--overlaps",
        choices=("general", "adjacent"),
        default="general",
        help="overlap subsets used for the mask quotient (default: general)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klfactor",
        description="Parabolic factorizations, defect polynomials and Kazhdan-Lusztig checks in S_n.",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json", help="report format")
    # --format is also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "kl", parents=[common], help="Kazhdan-Lusztig polynomials P_{x,w} and the basis element C'_w"
    )
    p.add_argument("--w", required=True, help='permutation in one-line notation, e.g. "3 4 1 2"')
    p.add_argument("--x", help="only report P_{x,w}")

    p = sub.add_parser("factorize", parents=[common], help="monotone factorization of a permutation")
    p.add_argument("--w", required=True)

    p = sub.add_parser(
        "defectpoly", parents=[common], help="defect polynomials by enumeration and via the Hecke algebra"
    )
    _factorization_args(p)

    p = sub.add_parser("tight", parents=[common], help="tightness with a violating mask class")
    _factorization_args(p)

    p = sub.add_parser(
        "heap", parents=[common], help="heap of components, descent verdicts and lattice embedding"
    )
    p.add_argument("--n", type=_positive)
    p.add_argument("--blocks", required=True)

    p = sub.add_parser(
        "patterns", parents=[common], help="pattern avoidance, descent intervals and directedness"
    )
    p.add_argument("--w", required=True)

    p = sub.add_parser("sweep", parents=[common], help="exhaustive property runs over S_n")
    p.add_argument("--n", type=_positive, default=6)
    p.add_argument("--max-blocks", type=_positive, default=3)
    p.add_argument("--max-block-size", type=_positive, help="largest block size (default: no limit)")
    p.add_argument("--budget", type=float, help="wall-clock budget in seconds")

    p = sub.add_parser("verify", parents=[common], help="the full cross-check suite")
    defaults = checks.Bounds()
    p.add_argument("--corpus-n", type=_positive, default=defaults.corpus_n)
    p.add_argument("--max-blocks", type=_positive, default=defaults.max_blocks)
    p.add_argument("--max-block-size", type=_positive, default=defaults.max_block_size)
    p.add_argument("--sweep-n", type=_positive, default=defaults.sweep_n)
    p.add_argument("--diamond-n", type=_positive, default=defaults.diamond_n)
    p.add_argument("--deodhar-n", type=_positive, default=defaults.deodhar_n)
    p.add_argument("--algorithm-n", type=_positive, default=defaults.algorithm_n)
    p.add_argument("--budget", type=float, help="wall-clock budget in seconds")
    p.add_argument("--timings", action="store_true", help="include per-suite timings (not reproducible)")
    return parser


# ---------------------------------------------------------------------------
# commands


def cmd_kl(args: argparse.Namespace) -> tuple[dict, int]:
    w = parse_permutation(args.w)
    table = kl_table(w.n)
    if args.x is not None:
        x = parse_permutation(args.x)
        if x.n != w.n:
            raise UsageError("x and w must have the same size")
        p = table.poly(x, w)
        return {"w": str(w), "x": str(x), "P": p.render("q"), "mu": table.mu(x, w)}, EXIT_OK
    col = table.column(w)
    polys = {str(x): col[x].render("q") for x in sorted(col, key=Permutation.sort_key)}
    return {"w": str(w), "length": w.length, "P": polys, "C": kl_basis(w).to_json()}, EXIT_OK


def cmd_factorize(args: argparse.Namespace) -> tuple[dict, int]:
    w = parse_permutation(args.w)
    return monotone_factorization(w).to_json(), EXIT_OK


def _family_or_error(f: Factorization, overlaps: str) -> dict:
    try:
        return {"family": defect_polynomials_via_hecke(f, overlaps).to_json()}
    except InexactDivisionError as exc:
        return {"family": None, "error": type(exc).__name__, "detail": str(exc)}


def cmd_defectpoly(args: argparse.Namespace) -> tuple[dict, int]:
    f = parse_blocks(args.blocks, args.n)
    fam = defect_polynomials(f, args.overlaps)
    via = _family_or_error(f, args.overlaps)
    return {
        "factorization": f.to_json(),
        "overlaps": args.overlaps,
        "classes": class_count(f, args.overlaps),
        "resolution_dimension": resolution_dimension(f, args.overlaps),
        "enumeration": fam.to_json(),
        "hecke": via,
        "agree": via["family"] == fam.to_json(),
    }, EXIT_OK


def cmd_tight(args: argparse.Namespace) -> tuple[dict, int]:
    f = parse_blocks(args.blocks, args.n)
    tight, witness = is_tight(f, args.overlaps)
    out: dict = {
        "factorization": f.to_json(),
        "overlaps": args.overlaps,
        "leading": str(f.leading),
        "tight": tight,
        "admissible": is_admissible(f, args.overlaps),
        "tight_via_hecke": is_tight_via_hecke(f, args.overlaps),
    }
    if witness is not None:
        out["witness"] = {
            "mask": [str(s) for s in witness.canonical.parts],
            "target": str(witness.target),
            "d_R": witness.d_R,
            "gap": f.leading.length - witness.target.length,
        }
    return out, EXIT_OK


def cmd_heap(args: argparse.Namespace) -> tuple[dict, int]:
    f = parse_blocks(args.blocks, args.n)
    h = build_heap(f)
    sb = heap_is_strong_bidescent(h)
    out: dict = {
        "factorization": f.to_json(),
        "heap": h.to_json(),
        "strong_rdes": heap_is_strong_rdes(h),
        "strong_bidescent": sb,
        "minimal": heap_is_minimal(h) if sb else None,
        "monotone": is_monotone(f),
    }
    if sb and heap_is_minimal(h):
        out["embedding"] = lattice_embedding(h).to_json(h)
    return out, EXIT_OK


def cmd_patterns(args: argparse.Namespace) -> tuple[dict, int]:
    w = parse_permutation(args.w)
    return {
        "w": str(w),
        **avoidance_class(w),
        "intervals": [iv.to_json() for iv in strong_rdes_intervals(w)],
        "profile": [p.to_json() for p in directedness_profile(w)],
    }, EXIT_OK


def _status(results: Sequence[checks.CheckResult]) -> int:
    if any(r.failed for r in results):
        return EXIT_FAIL
    if any(r.truncated for r in results):
        return EXIT_TRUNCATED
    return EXIT_OK


def _deadline(budget: float | None) -> float | None:
    return None if budget is None else time.monotonic() + budget


def cmd_sweep(args: argparse.Namespace) -> tuple[dict, int]:
    deadline = _deadline(args.budget)
    workers = checks.worker_count()
    results = [checks.sweep_permutations(args.n, workers, deadline)]
    results.append(
        checks.sweep_factorizations(args.n, args.max_blocks, args.max_block_size, workers, deadline)
    )
    status = _status(results)
    return {
        "bounds": {"n": args.n, "max_blocks": args.max_blocks, "max_block_size": args.max_block_size},
        "ok": status == EXIT_OK,
        "truncated": any(r.truncated for r in results),
        "checks": [r.to_json() for r in results],
    }, status


def cmd_verify(args: argparse.Namespace) -> tuple[dict, int]:
    bounds = checks.Bounds(
        corpus_n=args.corpus_n,
        max_blocks=args.max_blocks,
        max_block_size=args.max_block_size,
        sweep_n=args.sweep_n,
        diamond_n=args.diamond_n,
        deodhar_n=args.deodhar_n,
        algorithm_n=args.algorithm_n,
    )
    results = checks.verify_all(bounds, checks.worker_count(), deadline=_deadline(args.budget))
    status = _status(results)
    return {
        "bounds": bounds.to_json(),
        "ok": status == EXIT_OK,
        "truncated": any(r.truncated for r in results),
        "checks": [r.to_json(args.timings) for r in results],
    }, status


COMMANDS = {
    "kl": cmd_kl,
    "factorize": cmd_factorize,
    "defectpoly": cmd_defectpoly,
    "tight": cmd_tight,
    "heap": cmd_heap,
    "patterns": cmd_patterns,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# output


def render_text(report: dict) -> str:
    """The report as block-style YAML, keys in report order."""
    return yaml.safe_dump(report, sort_keys=False, default_flow_style=False, allow_unicode=True).rstrip()


def run(argv: Sequence[str] | None = None) -> tuple[dict, int, str]:
    """Parse ``argv`` and execute; returns ``(report, exit status, format)``.

    Raises :class:`UsageError` for malformed input and ``SystemExit(2)`` for
    argparse-level errors.
    """
    args = build_parser().parse_args(argv)
    report, status = COMMANDS[args.command](args)
    return {"schema": SCHEMA, "command": args.command, **report}, status, args.format


def main(argv: Sequence[str] | None = None) -> int:
    try:
        report, status, fmt = run(argv)
    except SystemExit as exc:
        # argparse reports its own errors (status 2) and handles --help (status 0)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    print(render_text(report) if fmt == "text" else json.dumps(report, indent=2))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
