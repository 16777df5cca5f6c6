"""Command-line frontend: solve, verify, render, bench.

Exit codes: 0 success, 1 input error, 2 algorithmic failure (a solve that
never converged, or a verification sweep with violations). Fixed-seed
verify/bench output on stdout is byte-identical across runs; wall-clock
timings go to stderr so they never perturb that.
"""

from __future__ import annotations

import argparse
import itertools
import re
import sys
import time

import numpy as np

from .basic_family import StopReason, fixed_point_member
from .cubic_solver import NoConvergenceError, solve
from .poly_core import Polynomial, cardano_oracle, evaluate, parse_polynomial
from .polynomiograph import (
    RenderConfig,
    RenderMethod,
    encode_image,
    measure_divergence_fraction,
    render,
)
from .voronoi import (
    SQRT3,
    Theorem2Case,
    canonical_from_w,
    classify,
    gauss_lucas_check,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILURE = 2


class CliInputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's default error() exits with status 2; route through our codes
    def error(self, message):  # noqa: D102 - argparse hook
        raise CliInputError(message)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # coefficient strings like "-8,0,0,1" must parse as positionals
        self._negative_number_matcher = re.compile(r"^-[\d.]")


def _parse_cubic(text: str) -> Polynomial:
    try:
        p = parse_polynomial(text)
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc
    if p.degree != 3:
        raise CliInputError(f"expected a degree-3 polynomial, got degree {p.degree}")
    return p


def _parse_pair(text: str, what: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliInputError(f"{what} must be two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise CliInputError(f"cannot parse {what} from {text!r}") from exc


def _parse_size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise CliInputError(f"size must look like 512x512, got {text!r}")
    try:
        w, h = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise CliInputError(f"cannot parse size from {text!r}") from exc
    if w < 1 or h < 1:
        raise CliInputError("size dimensions must be positive")
    return w, h


def _require_positive(value, name: str):
    if value <= 0:
        raise CliInputError(f"{name} must be positive, got {value}")
    return value


def run_solve(args) -> int:
    p = _parse_cubic(args.coefficients)
    _require_positive(args.tol, "--tol")
    if args.mcap < 3:
        raise CliInputError(f"--mcap must be at least 3, got {args.mcap}")
    try:
        report = solve(p, tol=args.tol, m_cap=args.mcap)
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(report.to_json())
    return EXIT_OK


def _sample_canonical_w(rng: np.random.Generator, amax: float, bmax: float) -> complex:
    """One canonical w = a+bi; a third of the draws pin a = 0 exactly.

    Excluded: b = 0 (collinear) and, for a = 0, the band |b - sqrt(3)| < 1e-6
    where the two critical points merge.
    """
    while True:
        a = 0.0 if rng.random() < (1.0 / 3.0) else float(rng.uniform(0.0, amax))
        b = float(rng.uniform(0.0, bmax))
        if b == 0.0:
            continue
        if a == 0.0 and abs(b - SQRT3) < 1e-6:
            continue
        return complex(a, b)


def run_verify(args) -> int:
    if args.at is not None:
        a, b = _parse_pair(args.at, "--at")
        if a < 0 or b <= 0:
            raise CliInputError("--at needs a >= 0 and b > 0")
        verdict = classify(canonical_from_w(complex(a, b)))
        print(verdict.to_record())
        return EXIT_OK
    if args.samples < 1:
        raise CliInputError(f"--samples must be at least 1, got {args.samples}")
    _require_positive(args.amax, "--amax")
    _require_positive(args.bmax, "--bmax")
    rng = np.random.default_rng(args.seed)
    print(
        f"# verify seed={args.seed} rng=PCG64 samples={args.samples} "
        f"amax={args.amax!r} bmax={args.bmax!r}"
    )
    counts = {case: 0 for case in Theorem2Case}
    th1_violations = 0
    th2_violations = 0
    gl_violations = 0
    t0 = time.perf_counter()
    for _ in range(args.samples):
        w = _sample_canonical_w(rng, args.amax, args.bmax)
        cub = canonical_from_w(w)
        verdict = classify(cub)
        counts[verdict.theorem2_case] += 1
        if args.samples <= 10:
            print(f"a={w.real!r} b={w.imag!r} {verdict.to_record()}")
        if verdict.theorem2_case in (
            Theorem2Case.EXCLUDED_B_SQRT3,
            Theorem2Case.EXCLUDED_COLLINEAR,
        ):
            continue
        if verdict.c1_cell is None and verdict.c2_cell is None:
            th1_violations += 1
        case = verdict.theorem2_case
        if case is Theorem2Case.A_POSITIVE and verdict.c2_cell != 0:
            th2_violations += 1
        elif case is Theorem2Case.A_ZERO_B_SMALL and (
            verdict.c2_cell != 0 or verdict.c1_cell != 1
        ):
            th2_violations += 1
        elif case is Theorem2Case.A_ZERO_B_LARGE and verdict.c1_cell != 2:
            th2_violations += 1
        if not gauss_lucas_check(Polynomial((w, -1.0, -w, 1.0))):
            gl_violations += 1
    elapsed = time.perf_counter() - t0
    for case in Theorem2Case:
        print(f"count {case.value}={counts[case]}")
    print(f"theorem1_violations={th1_violations}")
    print(f"theorem2_violations={th2_violations}")
    print(f"gauss_lucas_violations={gl_violations}")
    print(f"# verify wall_time_s={elapsed:.3f}", file=sys.stderr)
    violations = th1_violations + th2_violations + gl_violations
    return EXIT_OK if violations == 0 else EXIT_FAILURE


_METHODS = {
    "newton": RenderMethod.NEWTON,
    "halley": RenderMethod.HALLEY,
    "basic": RenderMethod.BASIC,
}


def run_render(args) -> int:
    p = _parse_cubic(args.coefficients)
    cre, cim = _parse_pair(args.center, "--center")
    _require_positive(args.half_width, "--half-width")
    _require_positive(args.tol, "--tol")
    w, h = _parse_size(args.size)
    if args.cap is not None and args.cap < 1:
        raise CliInputError(f"--cap must be at least 1, got {args.cap}")
    cfg = RenderConfig(
        center=complex(cre, cim),
        half_width=args.half_width,
        pixels_x=w,
        pixels_y=h,
        method=_METHODS[args.method],
        tol=args.tol,
        cap=args.cap,
    )
    t0 = time.perf_counter()
    try:
        graph = render(p, cfg)
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc
    data = encode_image(graph)
    try:
        with open(args.output, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        print(f"error: cannot write {args.output!r}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"divergence_fraction={measure_divergence_fraction(graph)!r}")
    print(f"# render wall_time_s={time.perf_counter() - t0:.3f}", file=sys.stderr)
    return EXIT_OK


def _matched_error(found: list[complex], reference: list[complex]) -> float:
    """Mean distance after optimal matching of two root triples."""
    best = None
    for perm in itertools.permutations(range(3)):
        err = sum(abs(found[i] - reference[perm[i]]) for i in range(3)) / 3.0
        if best is None or err < best:
            best = err
    return best


def _random_cubic(rng: np.random.Generator) -> Polynomial:
    coeffs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(3)]
    return Polynomial((*coeffs, 1.0))


def run_bench(args) -> int:
    if args.samples < 1:
        raise CliInputError(f"--samples must be at least 1, got {args.samples}")
    fixed = _parse_cubic(args.poly) if args.poly else None
    rng = np.random.default_rng(args.seed)
    print(f"# bench seed={args.seed} rng=PCG64 samples={args.samples}"
          + (f" poly={args.poly}" if args.poly else ""))

    polys = [fixed if fixed is not None else _random_cubic(rng) for _ in range(args.samples)]
    seeds = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(args.samples)]

    t0 = time.perf_counter()
    oracle_roots = [cardano_oracle(p) for p in polys]
    t_cardano = time.perf_counter() - t0
    cardano_res = [
        abs(evaluate(p.monic(), r)) for p, roots in zip(polys, oracle_roots) for r in roots
    ]

    solve_errors: list[float] = []
    solve_residuals: list[float] = []
    solve_terms: list[int] = []
    solve_failures = 0
    t0 = time.perf_counter()
    for p, reference in zip(polys, oracle_roots):
        try:
            rep = solve(p)
        except NoConvergenceError:
            solve_failures += 1
            continue
        solve_errors.append(_matched_error(list(rep.roots), reference))
        solve_residuals.extend(rep.residuals)
        solve_terms.append(rep.terms_used)
    t_solve = time.perf_counter() - t0

    newton_errors: list[float] = []
    newton_residuals: list[float] = []
    newton_iters: list[int] = []
    newton_failures = 0
    t0 = time.perf_counter()
    for p, reference, z0 in zip(polys, oracle_roots, seeds):
        rep = fixed_point_member(p, 2, z0, tol=1e-12, iter_cap=100)
        if rep.stop_reason is StopReason.SUCCESSIVE_DIFF:
            newton_errors.append(min(abs(rep.limit - r) for r in reference))
            newton_residuals.append(rep.residual)
            newton_iters.append(rep.terms_used)
        else:
            newton_failures += 1
    t_newton = time.perf_counter() - t0

    def _mean(xs):
        return sum(xs) / len(xs) if xs else float("nan")

    header = f"{'method':<22}{'mean_err_vs_oracle':<22}{'mean_residual':<18}{'mean_iters':<14}{'failures':<8}"
    print(header)
    print(
        f"{'basic-interlaced':<22}{_mean(solve_errors):<22.3e}"
        f"{_mean(solve_residuals):<18.3e}{_mean(solve_terms):<14.2f}{solve_failures:<8}"
    )
    print(
        f"{'cardano':<22}{0.0:<22.3e}{_mean(cardano_res):<18.3e}{0.0:<14.2f}{0:<8}"
    )
    print(
        f"{'newton-random-seed':<22}{_mean(newton_errors):<22.3e}"
        f"{_mean(newton_residuals):<18.3e}{_mean(newton_iters):<14.2f}{newton_failures:<8}"
    )
    print(
        f"# bench wall_time_s solve={t_solve:.3f} cardano={t_cardano:.3f} newton={t_newton:.3f}",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubiq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a cubic, print a JSON report")
    p_solve.add_argument("coefficients", help="comma-separated coefficients, constant first")
    p_solve.add_argument("--tol", type=float, default=1e-10)
    p_solve.add_argument("--mcap", type=int, default=500)
    p_solve.set_defaults(func=run_solve)

    p_verify = sub.add_parser(
        "verify", help="randomized sweep of the critical-point cell guarantees"
    )
    p_verify.add_argument("--samples", type=int, default=10000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--amax", type=float, default=10.0)
    p_verify.add_argument("--bmax", type=float, default=10.0)
    p_verify.add_argument(
        "--at", default=None, metavar="A,B", help="classify the single instance w = a+bi"
    )
    p_verify.set_defaults(func=run_verify)

    p_render = sub.add_parser("render", help="render root basins to a PPM file")
    p_render.add_argument("coefficients")
    p_render.add_argument("--method", choices=sorted(_METHODS), required=True)
    p_render.add_argument("--center", default="0,0", metavar="RE,IM")
    p_render.add_argument("--half-width", type=float, default=2.5)
    p_render.add_argument("--size", default="512x512", metavar="WxH")
    p_render.add_argument("--tol", type=float, default=1e-8)
    p_render.add_argument("--cap", type=int, default=None)
    p_render.add_argument("-o", "--output", required=True)
    p_render.set_defaults(func=run_render)

    p_bench = sub.add_parser("bench", help="accuracy/iteration table vs the closed-form oracle")
    p_bench.add_argument("--samples", type=int, default=1000)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--poly", default=None, help="bench this fixed cubic instead of random ones"
    )
    p_bench.set_defaults(func=run_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
