"""Command-line entry point: build graphs, verify predictions, run surveys and the null model."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .arith import is_prime, primes_between
from .graph import build_fp_graph, build_full_graph, omega_analysis, spine
from .metrics import eccentricity_profile, mean_component_diameter
from .nullmodel import ModelParams, model_vertex_count, sample_center_size, tree_margin
from .oracle import verify

JOBS_ENV = "ISOSPINE_JOBS"

SURVEY_HEADER = [
    "p",
    "ell",
    "n_vertices",
    "n_fp_vertices",
    "radius",
    "diameter",
    "center_size",
    "center_fp_count",
    "mean_spine_component_diameter",
    "verdict",
]
MODEL_HEADER = ["p", "sampled_center_size", "tree_margin_scaled"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isospine", description="Supersingular isogeny graphs and their F_p spines.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="write one graph as text or DOT")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--ell", type=int, default=2)
    b.add_argument("--field", choices=["fp", "fpbar", "spine"], default="fpbar")
    b.add_argument("--format", choices=["text", "dot"], default="text")
    b.add_argument("--out")

    v = sub.add_parser("verify", help="compare computed spines with congruence predictions")
    v.add_argument("--ell", type=int, default=2)
    v.add_argument("--min", type=int, default=17)
    v.add_argument("--max", type=int, required=True)
    v.add_argument("--jobs", type=int, default=None)

    s = sub.add_parser("survey", help="per-prime CSV of center or diameter statistics")
    s.add_argument("mode", choices=["centers", "diameters"])
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--min", type=int, default=5)
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=None)

    m = sub.add_parser("model", help="sampled center sizes and tree margins")
    m.add_argument("--min", type=int, default=5)
    m.add_argument("--max", type=int, required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--mu-coeff", type=float, default=1.8)
    m.add_argument("--sigma", type=float, default=0.38)
    m.add_argument("--out")
    return parser


def _check_prime(parser, p: int) -> None:
    if p < 5 or not is_prime(p):
        parser.error(f"--p: p must be prime >= 5, got {p}")


def _check_ell(parser, ell: int) -> None:
    if ell not in (2, 3):
        parser.error(f"--ell: ell must be 2 or 3, got {ell}")


def _check_range(parser, lo: int, hi: int) -> None:
    if lo > hi:
        parser.error(f"--min: {lo} exceeds --max {hi}")


def _check_jobs(parser, jobs: Optional[int]) -> int:
    jobs = _default_jobs() if jobs is None else jobs
    if jobs < 1:
        parser.error("--jobs: must be at least 1")
    return jobs


def _map(func: Callable, items: list, jobs: int) -> list:
    """Apply func to items, in parallel when jobs > 1; results keep input order."""
    if jobs == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=1))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return f"{float(value):.6f}"
    return str(value)


def _csv_text(header: list[str], rows: Iterable[list]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_format_cell(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _write_output(text: str, out: Optional[str]) -> None:
    """Write atomically: a partial file never replaces the target."""
    if out is None:
        sys.stdout.write(text)
        return
    tmp = out + ".partial"
    try:
        with open(tmp, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


# ---------------------------------------------------------------------------
# commands


def cmd_build(args, parser) -> int:
    _check_prime(parser, args.p)
    _check_ell(parser, args.ell)
    if args.field == "fp":
        G = build_fp_graph(args.p, args.ell)
    else:
        G = build_full_graph(args.p, args.ell)
        if args.field == "spine":
            G = spine(G)
    text = G.to_dot() if args.format == "dot" else G.to_text()
    _write_output(text, args.out)
    return 0


def _verify_line(task: tuple[int, int]) -> tuple[str, str]:
    p, ell = task
    rep = verify(p, ell)
    return rep.status, rep.line()


def cmd_verify(args, parser) -> int:
    _check_ell(parser, args.ell)
    _check_range(parser, args.min, args.max)
    jobs = _check_jobs(parser, args.jobs)
    primes = [p for p in primes_between(max(args.min, 5), args.max) if p != args.ell]
    results = _map(_verify_line, [(p, args.ell) for p in primes], jobs)
    for _, line in results:
        print(line)
    fails = sum(1 for status, _ in results if status == "FAIL")
    print(f"# {len(results)} primes, {fails} FAIL")
    return 1 if fails else 0


def survey_row(task: tuple[int, int, str]) -> list:
    """One CSV row for prime p; mode is 'centers' or 'diameters'."""
    p, ell, mode = task
    full = build_full_graph(p, ell)
    rep = eccentricity_profile(full)
    n_fp = sum(1 for i in range(len(full)) if full.is_fp_vertex(i))
    sp = spine(full)
    mean_diam = mean_component_diameter(sp) if mode == "diameters" else None
    verdict = None
    if p >= 17:
        analysis = omega_analysis(build_fp_graph(p, ell), sp, ell)
        status = verify(p, ell, analysis).status
        verdict = None if status == "ROUTED" else status
    return [p, ell, len(full), n_fp, rep.radius, rep.diameter, rep.center_size, rep.center_fp_count, mean_diam, verdict]


def cmd_survey(args, parser) -> int:
    _check_ell(parser, args.ell)
    _check_range(parser, args.min, args.max)
    jobs = _check_jobs(parser, args.jobs)
    primes = [p for p in primes_between(max(args.min, 5), args.max) if p != args.ell]
    if args.mode == "diameters":
        primes = [p for p in primes if p % 8 == 7]
    rows = _map(survey_row, [(p, args.ell, args.mode) for p in primes], jobs)
    rows.sort(key=lambda r: r[0])
    _write_output(_csv_text(SURVEY_HEADER, rows), args.out)
    return 0


def model_row(p: int, params: ModelParams) -> list:
    n, _ = model_vertex_count(p)
    r = 0
    while tree_margin(n, r) < 0:
        r += 1
    return [p, sample_center_size(p, params, n), Fraction(tree_margin(n, r), 12)]


def cmd_model(args, parser) -> int:
    _check_range(parser, args.min, args.max)
    if not args.sigma > 0:
        parser.error(f"--sigma: must be positive, got {args.sigma}")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed: must be a 64-bit unsigned integer")
    params = ModelParams(mean_coeff=args.mu_coeff, sigma=args.sigma, seed=args.seed)
    rows = [model_row(p, params) for p in primes_between(max(args.min, 5), args.max)]
    _write_output(_csv_text(MODEL_HEADER, rows), args.out)
    return 0


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "survey": cmd_survey, "model": cmd_model}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, parser)
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
