"""End-to-end cubic solving from the critical points.

The quadratic formula gives the two critical points; the basic sequences
seeded there are advanced in lockstep (interlaced), and at least one of the
two seeds is guaranteed to sit strictly inside some root's Voronoi cell, so
one sequence converges. That root is polished with a few Newton steps,
divided out, and the remaining quadratic is solved directly. A cubic whose
critical points coincide is, after depressing, of the form z^3 = const and
is solved by radicals outright.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from enum import Enum

from .basic_family import BasicSequenceState, d_step_cubic
from .poly_core import (
    Polynomial,
    RepeatedCriticalPointError,
    critical_points,
    deflate,
    evaluate,
    derivatives_up_to,
    solve_quadratic,
)

__all__ = [
    "FirstRootSource",
    "SolveReport",
    "NoConvergenceError",
    "solve",
    "polish",
]

_ONE_THIRD = 1.0 / 3.0
_OMEGA = complex(-0.5, 0.5 * 3.0 ** 0.5)

DEFAULT_TOL = 1e-10
DEFAULT_M_CAP = 500

POLISH_STEP_TOL = 1e-14
FIRST_ROOT_POLISH_ITERS = 5
DEFLATED_ROOT_POLISH_ITERS = 3


class FirstRootSource(str, Enum):
    CRITICAL_POINT_1 = "critical-point-1"
    CRITICAL_POINT_2 = "critical-point-2"
    PURE_RADICAL = "pure-radical"


class NoConvergenceError(RuntimeError):
    """Neither interlaced sequence settled within the term cap.

    Carries both partial histories for diagnosis; expected only for
    near-degenerate cubics whose critical points hug the cell boundaries.
    """

    def __init__(self, history_1: list[complex], history_2: list[complex], m_cap: int):
        super().__init__(f"neither basic sequence converged within m_cap={m_cap}")
        self.history_1 = history_1
        self.history_2 = history_2


@dataclass(frozen=True)
class SolveReport:
    """Roots with residuals and provenance of the first converged root.

    Roots are sorted by (real, imag) so output is deterministic; residuals
    are |p(root)| against the monic-normalized input, index-aligned with the
    roots. ``first_root`` is the polished value the winning sequence
    produced; ``tie`` marks the rare case where both sequences converged at
    the same term and the smaller residual was taken.
    """

    roots: tuple[complex, complex, complex]
    residuals: tuple[float, float, float]
    first_root_source: FirstRootSource
    terms_used: int
    polished_iters: int
    first_root: complex = 0j
    tie: bool = False

    def to_json_dict(self) -> dict:
        out = {
            "roots": [{"re": r.real, "im": r.imag} for r in self.roots],
            "residuals": list(self.residuals),
            "source": self.first_root_source.value,
            "terms_used": self.terms_used,
            "polished_iters": self.polished_iters,
        }
        if self.tie:
            out["tie"] = True
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _polish_steps(p: Polynomial, z0: complex, max_iters: int) -> tuple[complex, int]:
    """Newton-polish z0; returns (refined value, steps applied).

    Stops once the step is below POLISH_STEP_TOL relative to the iterate.
    A vanishing derivative keeps the pre-step value instead of raising.
    """
    z = complex(z0)
    for k in range(max_iters):
        pv, dv = derivatives_up_to(p, z, 1)
        if dv == 0:
            return z, k
        step = pv / dv
        znew = z - step
        if not cmath.isfinite(znew):
            return z, k
        z = znew
        if abs(step) < POLISH_STEP_TOL * (1.0 + abs(z)):
            return z, k + 1
    return z, max_iters


def polish(p: Polynomial, z0: complex, max_iters: int) -> complex:
    """A few Newton steps from z0; see _polish_steps for the stopping rule."""
    z, _ = _polish_steps(p, z0, max_iters)
    return z


def _solve_pure_radical(mon: Polynomial) -> SolveReport:
    """Depress to z^3 = const (the repeated-critical-point form) and take cube roots."""
    a2 = mon.coefficients[2]
    shift = -a2 * _ONE_THIRD
    q = evaluate(mon, shift)
    r0 = (-q) ** _ONE_THIRD if q != 0 else 0j
    roots = sorted(
        (shift + r0, shift + r0 * _OMEGA, shift + r0 * _OMEGA.conjugate()),
        key=lambda r: (r.real, r.imag),
    )
    residuals = tuple(abs(evaluate(mon, r)) for r in roots)
    return SolveReport(
        roots=(roots[0], roots[1], roots[2]),
        residuals=residuals,  # type: ignore[arg-type]
        first_root_source=FirstRootSource.PURE_RADICAL,
        terms_used=0,
        polished_iters=0,
        first_root=shift + r0,
    )


def solve(p: Polynomial, tol: float = DEFAULT_TOL, m_cap: int = DEFAULT_M_CAP) -> SolveReport:
    """Solve a cubic by interlacing the basic sequences at both critical points.

    Both sequences advance in lockstep; after each pair of updates, each is
    tested on the difference of its two latest terms. The first to settle
    gives the first root (simultaneous settling is broken by residual); the
    other two roots come from deflation plus the quadratic formula, all
    polished with a few Newton steps on the cubic itself.
    """
    if p.degree != 3:
        raise ValueError(f"solve needs degree 3, got degree {p.degree}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if m_cap < 3:
        raise ValueError("m_cap must be at least 3")
    mon = p.monic()
    try:
        cps = critical_points(mon)
    except RepeatedCriticalPointError:
        return _solve_pure_radical(mon)

    s1 = BasicSequenceState.initial(mon, cps.r1)
    s2 = BasicSequenceState.initial(mon, cps.r2)
    hist1: list[complex] = []
    hist2: list[complex] = []
    prev1: complex | None = None
    prev2: complex | None = None
    winner = 0
    tie = False
    first = 0j
    terms_used = 0
    while s1.m <= m_cap:
        b1 = s1.b_value()
        b2 = s2.b_value()
        if b1 is not None:
            hist1.append(b1)
        if b2 is not None:
            hist2.append(b2)
        ok1 = b1 is not None and prev1 is not None and abs(b1 - prev1) < tol
        ok2 = b2 is not None and prev2 is not None and abs(b2 - prev2) < tol
        if ok1 and ok2:
            res1 = abs(evaluate(mon, b1))
            res2 = abs(evaluate(mon, b2))
            winner, first = (1, b1) if res1 <= res2 else (2, b2)
            tie = True
        elif ok1:
            winner, first = 1, b1
        elif ok2:
            winner, first = 2, b2
        if winner:
            terms_used = s1.m
            break
        prev1, prev2 = b1, b2
        s1 = d_step_cubic(s1)
        s2 = d_step_cubic(s2)
    if not winner:
        raise NoConvergenceError(hist1, hist2, m_cap)

    first, n_first = _polish_steps(mon, first, FIRST_ROOT_POLISH_ITERS)
    quad, _remainder = deflate(mon, first)
    pair = solve_quadratic(quad)
    second, n_second = _polish_steps(mon, pair.r1, DEFLATED_ROOT_POLISH_ITERS)
    third, n_third = _polish_steps(mon, pair.r2, DEFLATED_ROOT_POLISH_ITERS)

    roots = sorted((first, second, third), key=lambda r: (r.real, r.imag))
    residuals = tuple(abs(evaluate(mon, r)) for r in roots)
    source = (
        FirstRootSource.CRITICAL_POINT_1 if winner == 1 else FirstRootSource.CRITICAL_POINT_2
    )
    return SolveReport(
        roots=(roots[0], roots[1], roots[2]),
        residuals=residuals,  # type: ignore[arg-type]
        first_root_source=source,
        terms_used=terms_used,
        polished_iters=n_first + n_second + n_third,
        first_root=first,
        tie=tie,
    )
