"""The basic family of iteration functions and its fixed-seed sequence form.

B_m(z) = z - p(z) * D_{m-2}(z) / D_{m-1}(z), where the D_m satisfy a linear
homogeneous recurrence driven by p's derivatives. B_2 is Newton's method and
B_3 is Halley's. Two usage modes:

* fixed m, iterate z -> B_m(z)  (``fixed_point_member``), and
* fixed seed, stream B_2, B_3, ...  (``basic_sequence``), which converges to
  the root whose Voronoi cell contains the seed; the error shrinks like r^m
  with r the ratio of the distances to the nearest and second-nearest root.

For a monic cubic the D recurrence collapses to three terms with constant
coefficients built from p, p', p'' at the seed:

    d_m = p'(xi) d_{m-1} - 0.5 p(xi) p''(xi) d_{m-2} + p(xi)^2 d_{m-3}

with d_0 = 1 and d_{-1} = d_{-2} = 0 (so d_1 = p'(xi)). Only the ratio
d_{m-2}/d_{m-1} matters, so the rolling window can be rescaled at will to
dodge overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

from .poly_core import Polynomial, derivatives_up_to, evaluate, format_complex

__all__ = [
    "RESCALE_THRESHOLD",
    "StopReason",
    "BasicSequenceState",
    "ConvergenceReport",
    "BoundaryTieError",
    "d_step_cubic",
    "general_D",
    "basic_sequence",
    "fixed_point_member",
    "rate_ratio",
]

# |d_m| grows roughly like (coefficient scale)^m; divide the window down
# once it passes this so the recurrence can run for thousands of terms.
RESCALE_THRESHOLD = 1e100

DEFAULT_M_CAP = 500


class StopReason(str, Enum):
    SUCCESSIVE_DIFF = "successive-diff-below-tol"
    M_CAP = "m-cap-reached"
    NON_FINITE = "non-finite-ratio"


class BoundaryTieError(ValueError):
    """The query point is (numerically) equidistant from its two nearest roots."""


@dataclass(frozen=True)
class BasicSequenceState:
    """Rolling window of the cubic recurrence at a fixed seed.

    ``window`` holds (d_{m-1}, d_{m-2}, d_{m-3}); ``m`` is the index of the
    next B_m that can be formed from it. ``log_scale`` accumulates the log of
    every normalization factor so the raw d values can be recovered exactly
    when comparing against the unrescaled recurrence.
    """

    xi: complex
    p0: complex
    p1: complex
    p2: complex
    window: tuple[complex, complex, complex]
    m: int
    rescale_count: int = 0
    log_scale: float = 0.0

    @classmethod
    def initial(cls, p: Polynomial, xi: complex) -> "BasicSequenceState":
        if p.degree != 3:
            raise ValueError(f"basic sequence state needs a cubic, got degree {p.degree}")
        # The three-term recurrence coefficients assume a monic cubic
        # (B_m itself is invariant under scaling p).
        mon = p.monic()
        p0, p1, p2 = derivatives_up_to(mon, xi, 2)
        return cls(xi=complex(xi), p0=p0, p1=p1, p2=p2, window=(p1, 1 + 0j, 0j), m=2)

    def b_value(self) -> complex | None:
        """B_m at this state, or None when the ratio is not finite."""
        head = self.window[0]
        if head == 0:
            return None
        b = self.xi - self.p0 * (self.window[1] / head)
        return b if cmath.isfinite(b) else None


def d_step_cubic(state: BasicSequenceState) -> BasicSequenceState:
    """Advance the window by one recurrence step, rescaling on overflow risk.

    Rescaling divides all three entries by their max magnitude; the
    recurrence is linear homogeneous, so every later B value is unchanged.
    """
    w0, w1, w2 = state.window
    d_next = state.p1 * w0 - 0.5 * state.p0 * state.p2 * w1 + state.p0 * state.p0 * w2
    window = (d_next, w0, w1)
    mag = max(abs(window[0]), abs(window[1]), abs(window[2]))
    rescale_count = state.rescale_count
    log_scale = state.log_scale
    if mag > RESCALE_THRESHOLD:
        window = (window[0] / mag, window[1] / mag, window[2] / mag)
        rescale_count += 1
        log_scale += math.log(mag)
    return replace(
        state,
        window=window,
        m=state.m + 1,
        rescale_count=rescale_count,
        log_scale=log_scale,
    )


def general_D(p: Polynomial, z: complex, m: int) -> complex:
    """D_m(z) for arbitrary degree, straight from the defining recurrence.

    D_m = sum_{i=1..n} (-1)^(i-1) p^(i-1) (p^(i)/i!) D_{m-i}, with D_0 = 1
    and D_k = 0 for k < 0. No rescaling: this is the small-m oracle the
    windowed cubic recurrence is checked against, not a production path.
    """
    if m < 0:
        return 0j
    if m == 0:
        return 1 + 0j
    n = p.degree
    derivs = derivatives_up_to(p, z, n)
    pz = derivs[0]
    coeffs = []
    fact = 1.0
    sign = 1.0
    p_pow = 1 + 0j
    for i in range(1, n + 1):
        fact *= i
        coeffs.append(sign * p_pow * derivs[i] / fact)
        sign = -sign
        p_pow *= pz
    values = [1 + 0j]  # values[k] = D_k
    for k in range(1, m + 1):
        acc = 0j
        for i in range(1, n + 1):
            j = k - i
            if j < 0:
                break
            acc += coeffs[i - 1] * values[j]
        values.append(acc)
    return values[m]


@dataclass
class ConvergenceReport:
    """Outcome of an iterative sequence: where it stopped and why."""

    converged: bool
    limit: complex
    terms_used: int
    history: list[complex]
    stop_reason: StopReason
    residual: float

    def to_record(self, max_history: int = 32) -> str:
        """Serialize as key=value lines; history truncated to the last terms."""
        tail = self.history[-max_history:] if max_history > 0 else []
        lines = [
            f"converged={'true' if self.converged else 'false'}",
            f"limit={format_complex(self.limit)}",
            f"terms_used={self.terms_used}",
            f"stop_reason={self.stop_reason.value}",
            f"residual={self.residual!r}",
            f"history={','.join(format_complex(b) for b in tail)}",
        ]
        return "\n".join(lines)


def _report(p_monic, converged, limit, terms, history, reason) -> ConvergenceReport:
    res = abs(evaluate(p_monic, limit)) if cmath.isfinite(limit) else math.inf
    return ConvergenceReport(
        converged=converged,
        limit=limit,
        terms_used=terms,
        history=history,
        stop_reason=reason,
        residual=res,
    )


def basic_sequence(
    p: Polynomial,
    xi: complex,
    tol: float,
    m_cap: int = DEFAULT_M_CAP,
) -> ConvergenceReport:
    """Stream B_2, B_3, ... at the fixed seed xi until the terms settle.

    Stops when two successive terms differ by less than ``tol``, when
    ``m_cap`` is reached, or when the recurrence dies (the whole window is
    zero, so every later term would be too; reported as non-finite-ratio,
    not raised). A zero window *head* alone is recoverable - it happens at
    m = 2 whenever the seed is exactly a critical point - so such terms are
    skipped and the difference test resumes once two consecutive terms are
    available again. The residual |p(limit)| is attached as a diagnostic;
    the stopping rule itself is the successive difference.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if m_cap < 3:
        raise ValueError("m_cap must be at least 3")
    mon = p.monic()
    state = BasicSequenceState.initial(mon, xi)
    history: list[complex] = []
    prev: complex | None = None
    while state.m <= m_cap:
        b = state.b_value()
        if b is None:
            if state.window == (0j, 0j, 0j):
                limit = prev if prev is not None else complex(xi)
                return _report(mon, False, limit, state.m, history, StopReason.NON_FINITE)
            prev = None
            state = d_step_cubic(state)
            continue
        history.append(b)
        if prev is not None and abs(b - prev) < tol:
            return _report(mon, True, b, state.m, history, StopReason.SUCCESSIVE_DIFF)
        prev = b
        state = d_step_cubic(state)
    limit = history[-1] if history else complex(xi)
    return _report(mon, False, limit, m_cap, history, StopReason.M_CAP)


def member_step(p: Polynomial, m: int, z: complex) -> complex | None:
    """One step of B_2 (Newton) or B_3 (Halley); None on a vanishing denominator."""
    if m == 2:
        pv, dv = derivatives_up_to(p, z, 1)
        if dv == 0:
            return None
        nxt = z - pv / dv
    elif m == 3:
        pv, dv, d2v = derivatives_up_to(p, z, 2)
        denom = 2.0 * dv * dv - pv * d2v
        if denom == 0:
            return None
        nxt = z - 2.0 * pv * dv / denom
    else:
        raise ValueError("only members m=2 (Newton) and m=3 (Halley) have closed forms here")
    return nxt if cmath.isfinite(nxt) else None


def fixed_point_member(
    p: Polynomial,
    m: int,
    z0: complex,
    tol: float,
    iter_cap: int,
) -> ConvergenceReport:
    """Iterate z -> B_m(z) for m in {2, 3} until successive steps settle.

    Used for polishing and for the Newton/Halley basin renders. A vanishing
    denominator is reported as non-finite-ratio rather than raised.
    """
    if m not in (2, 3):
        raise ValueError("only members m=2 (Newton) and m=3 (Halley) have closed forms here")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if iter_cap < 1:
        raise ValueError("iter_cap must be at least 1")
    mon = p.monic()
    history: list[complex] = []
    z = complex(z0)
    for _ in range(iter_cap):
        nxt = member_step(mon, m, z)
        if nxt is None:
            return _report(mon, False, z, len(history), history, StopReason.NON_FINITE)
        history.append(nxt)
        if abs(nxt - z) < tol:
            return _report(mon, True, nxt, len(history), history, StopReason.SUCCESSIVE_DIFF)
        z = nxt
    return _report(mon, False, z, len(history), history, StopReason.M_CAP)


def rate_ratio(roots: list[complex], w: complex) -> float:
    """Distance to the nearest root over distance to the second-nearest.

    This ratio governs how fast the basic sequence seeded at w converges; 0
    means w is a root, values near 1 mean w sits close to a cell boundary.
    A numerical tie between the two nearest roots raises BoundaryTieError.
    """
    if len(roots) != 3:
        raise ValueError("expected exactly 3 roots")
    rs = [complex(r) for r in roots]
    if rs[0] == rs[1] or rs[0] == rs[2] or rs[1] == rs[2]:
        raise ValueError("roots must be pairwise distinct")
    d1, d2, _ = sorted(abs(w - r) for r in rs)
    if d2 - d1 < 1e-12 * d2:
        raise BoundaryTieError(f"{w} is equidistant from its two nearest roots")
    return d1 / d2
