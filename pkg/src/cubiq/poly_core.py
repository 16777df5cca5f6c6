"""Complex polynomial arithmetic for the cubic solver.

Horner evaluation, simultaneous derivatives, a cancellation-free quadratic
formula, the real-decomposed complex square root, synthetic-division
deflation, and a closed-form cubic solver kept around as an independent
cross-check oracle.

Everything here is a pure function of its inputs; values are immutable and
safe to share between threads.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "Polynomial",
    "QuadraticRoots",
    "Deflation",
    "RepeatedCriticalPointError",
    "evaluate",
    "derivatives_up_to",
    "solve_quadratic",
    "critical_points",
    "complex_sqrt_decomposed",
    "deflate",
    "cardano_oracle",
    "parse_complex",
    "format_complex",
    "parse_polynomial",
    "format_polynomial",
]

# Two equal critical points collapse the seeding strategy; the threshold is
# on the derivative's discriminant, which scales like (coefficient scale)^2.
REPEATED_CRITICAL_TOL = 1e-14

_ONE_THIRD = 1.0 / 3.0
_SQRT3 = math.sqrt(3.0)
_OMEGA = complex(-0.5, 0.5 * _SQRT3)  # primitive cube root of unity


class RepeatedCriticalPointError(Exception):
    """Cubic whose two critical points coincide (within tolerance).

    Carries the repeated critical point so the solver can switch to the
    pure-radical path for depressed cubics with no linear term.
    """

    def __init__(self, critical_point: complex):
        super().__init__(f"repeated critical point near {critical_point}")
        self.critical_point = critical_point


@dataclass(frozen=True)
class Polynomial:
    """Complex-coefficient polynomial, constant term first.

    The leading coefficient must be nonzero so the degree is honest.
    """

    coefficients: tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def coefficient_scale(self) -> float:
        """Max coefficient magnitude; the reference for relative tolerances."""
        return max(abs(c) for c in self.coefficients)

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant would be the zero polynomial")
        return Polynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def monic(self) -> "Polynomial":
        lead = self.coefficients[-1]
        if lead == 1:
            return self
        return Polynomial(tuple(c / lead for c in self.coefficients))

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)


class QuadraticRoots(NamedTuple):
    r1: complex
    r2: complex
    discriminant: complex


class Deflation(NamedTuple):
    quotient: "Polynomial"
    remainder: complex


def evaluate(p: Polynomial, z: complex) -> complex:
    """Evaluate p(z) by Horner's scheme: one pass, degree multiplications."""
    acc = 0j
    for c in reversed(p.coefficients):
        acc = acc * z + c
    return acc


def derivatives_up_to(p: Polynomial, z: complex, k: int) -> list[complex]:
    """Return [p(z), p'(z), ..., p^(k)(z)] in one synthetic-division sweep.

    Entry i carries the true i-th derivative (factorial scaling applied at
    the end). Requesting k beyond the degree is an error rather than a run
    of silent zeros.
    """
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    if k > p.degree:
        raise ValueError(f"derivative order {k} exceeds degree {p.degree}")
    zc = complex(z)
    out = [0j] * (k + 1)
    out[0] = p.coefficients[-1]
    for idx in range(p.degree - 1, -1, -1):
        upper = min(k, p.degree - idx)
        for j in range(upper, 0, -1):
            out[j] = out[j] * zc + out[j - 1]
        out[0] = out[0] * zc + p.coefficients[idx]
    fact = 1.0
    for i in range(2, k + 1):
        fact *= i
        out[i] *= fact
    return out


def solve_quadratic(q: Polynomial) -> QuadraticRoots:
    """Both roots of a degree-2 polynomial, computed cancellation-free.

    The root where the linear coefficient and the discriminant's square root
    add constructively comes from the formula; the other from the product
    identity r1*r2 = c/a, so neither suffers subtraction of near-equal
    quantities.
    """
    if q.degree != 2:
        raise ValueError(f"solve_quadratic needs degree 2, got degree {q.degree}")
    c, b, a = q.coefficients
    disc = b * b - 4.0 * a * c
    s = cmath.sqrt(disc)
    if (b.conjugate() * s).real < 0.0:
        s = -s
    t = -0.5 * (b + s)
    r1 = t / a
    # t == 0 forces b == 0 and disc == 0, hence c == 0 and a double root at 0.
    r2 = c / t if t != 0 else 0j
    return QuadraticRoots(r1=r1, r2=r2, discriminant=disc)


def critical_points(p: Polynomial) -> QuadraticRoots:
    """Zeros of p' for a cubic p, ordered by descending (imag, real).

    r1 is the critical point with the larger imaginary part (ties broken by
    larger real part). A near-zero discriminant of p' means the two critical
    points coincide; that degenerate case raises RepeatedCriticalPointError
    instead of returning a meaningless pair.
    """
    if p.degree != 3:
        raise ValueError(f"critical_points needs degree 3, got degree {p.degree}")
    dp = p.derivative()
    qr = solve_quadratic(dp)
    scale = dp.coefficient_scale
    if abs(qr.discriminant) < REPEATED_CRITICAL_TOL * scale * scale:
        raise RepeatedCriticalPointError(0.5 * (qr.r1 + qr.r2))
    first, second = qr.r1, qr.r2
    if (second.imag, second.real) > (first.imag, first.real):
        first, second = second, first
    return QuadraticRoots(r1=first, r2=second, discriminant=qr.discriminant)


def complex_sqrt_decomposed(s: float, d: float) -> tuple[float, float]:
    """Real pair (A, B) with A, B >= 0 and (A + iB)^2 = s + id, for d >= 0.

    A = sqrt((hypot(s,d) + s)/2) and B = sqrt((hypot(s,d) - s)/2); whichever
    of the two is formed by cancellation is refit from A*B = d/2 so the
    round-trip stays accurate when |s| dominates d. Inputs with d < 0 must
    be conjugated by the caller first.
    """
    if d < 0.0:
        raise ValueError("imaginary part must be non-negative; conjugate the input first")
    h = math.hypot(s, d)
    a_part = math.sqrt(0.5 * (h + s))
    b_part = math.sqrt(0.5 * (h - s))
    if d > 0.0:
        if s > 0.0:
            b_part = 0.5 * d / a_part
        elif s < 0.0:
            a_part = 0.5 * d / b_part
    return a_part, b_part


def deflate(p: Polynomial, r: complex) -> Deflation:
    """Synthetic-division quotient q with p(z) ~= (z - r) q(z).

    The remainder (p evaluated at r) is returned as a residual diagnostic
    rather than silently discarded. The caller is responsible for r being
    close to a root; nothing is enforced here.
    """
    if p.degree < 1:
        raise ValueError("cannot deflate a constant polynomial")
    n = p.degree
    rc = complex(r)
    quot = [0j] * n
    quot[n - 1] = p.coefficients[n]
    for k in range(n - 1, 0, -1):
        quot[k - 1] = p.coefficients[k] + rc * quot[k]
    remainder = p.coefficients[0] + rc * quot[0]
    return Deflation(quotient=Polynomial(tuple(quot)), remainder=remainder)


def cardano_oracle(p: Polynomial) -> list[complex]:
    """All three roots of a cubic in closed form.

    Used as an independent cross-check for the iterative solver. Real
    coefficients take the trigonometric branch when all three roots are
    real and a hyperbolic branch otherwise; fully complex coefficients go
    through the radical form with the square-root branch chosen to avoid
    cancellation. Repeated roots come back with multiplicity.
    """
    if p.degree != 3:
        raise ValueError(f"cardano_oracle needs degree 3, got degree {p.degree}")
    mon = p.monic()
    a0, a1, a2, _ = mon.coefficients
    shift = -a2 * _ONE_THIRD
    # depressed form t^3 + pp*t + qq, z = t + shift
    pp = a1 - a2 * a2 * _ONE_THIRD
    qq = evaluate(mon, shift)
    if all(c.imag == 0.0 for c in mon.coefficients):
        roots_t = _depressed_real(pp.real, qq.real)
    else:
        roots_t = _depressed_complex(pp, qq)
    return [t + shift for t in roots_t]


def _depressed_real(p: float, q: float) -> list[complex]:
    """Roots of t^3 + p t + q with real p, q."""
    if p == 0.0 and q == 0.0:
        return [0j, 0j, 0j]
    if p == 0.0:
        r = math.copysign(abs(q) ** _ONE_THIRD, -q)
        rc = complex(r)
        return [rc, rc * _OMEGA, rc * _OMEGA.conjugate()]
    disc = -4.0 * p * p * p - 27.0 * q * q
    if disc >= 0.0:
        # three real roots; p < 0 here, radical form would cancel badly
        m = 2.0 * math.sqrt(-p * _ONE_THIRD)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) * _ONE_THIRD
        return [
            complex(m * math.cos(theta)),
            complex(m * math.cos(theta - 2.0 * math.pi / 3.0)),
            complex(m * math.cos(theta - 4.0 * math.pi / 3.0)),
        ]
    if p < 0.0:
        t0 = (
            -2.0
            * math.copysign(math.sqrt(-p * _ONE_THIRD), q)
            * math.cosh(math.acosh(-3.0 * abs(q) / (2.0 * p) * math.sqrt(-3.0 / p)) * _ONE_THIRD)
        )
    else:
        t0 = (
            -2.0
            * math.sqrt(p * _ONE_THIRD)
            * math.sinh(math.asinh(3.0 * q / (2.0 * p) * math.sqrt(3.0 / p)) * _ONE_THIRD)
        )
    pair = solve_quadratic(Polynomial((p + t0 * t0, t0, 1.0)))
    return [complex(t0), pair.r1, pair.r2]


def _depressed_complex(p: complex, q: complex) -> list[complex]:
    """Roots of t^3 + p t + q for complex p, q, via the radical form."""
    if p == 0:
        u = (-q) ** _ONE_THIRD
        return [u, u * _OMEGA, u * _OMEGA.conjugate()]
    s = cmath.sqrt(0.25 * q * q + p * p * p / 27.0)
    half_q = -0.5 * q
    if (half_q.conjugate() * s).real < 0.0:
        s = -s
    u3 = half_q + s
    if u3 == 0:
        u = (-q) ** _ONE_THIRD
        return [u, u * _OMEGA, u * _OMEGA.conjugate()]
    u = u3 ** _ONE_THIRD
    v = -p / (3.0 * u)
    return [
        u + v,
        u * _OMEGA + v * _OMEGA.conjugate(),
        u * _OMEGA.conjugate() + v * _OMEGA,
    ]


# --- text format -----------------------------------------------------------
#
# Comma-separated complex coefficients, constant term first. Each token is
# `re` or `re+imi`, e.g. "2,-2,0,1" encodes z^3 - 2z + 2.

_UFLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_COMPLEX_RE = re.compile(rf"^([-+]?{_UFLOAT})(?:([-+])({_UFLOAT})?i)?$")


def parse_complex(token: str) -> complex:
    text = token.strip().replace(" ", "")
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse complex number from {token!r}")
    re_part = float(m.group(1))
    if m.group(2) is None:
        return complex(re_part, 0.0)
    magnitude = float(m.group(3)) if m.group(3) is not None else 1.0
    im_part = magnitude if m.group(2) == "+" else -magnitude
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else ""
    return f"{z.real!r}{sign}{z.imag!r}i"


def parse_polynomial(text: str) -> Polynomial:
    tokens = text.split(",")
    coeffs = [parse_complex(tok) for tok in tokens]
    return Polynomial(tuple(coeffs))


def format_polynomial(p: Polynomial) -> str:
    return ",".join(format_complex(c) for c in p.coefficients)
