"""Voronoi-cell geometry of a cubic's three roots.

A similarity transform sends two roots to -1 and +1 and the third to
w = a + bi with a >= 0, b > 0; critical-point membership in the root cells
is then a function of (a, b) alone. This module builds that canonical form,
assigns each critical point to the cell of its strictly nearest root, and
carries the executable checks behind the guarantees the solver relies on:
at least one critical point always lands inside a cell, c2 lands in V(-1)
whenever a > 0, the a = 0 cases split at b = sqrt(3), and both critical
points stay inside the convex hull of the roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .poly_core import (
    Polynomial,
    cardano_oracle,
    complex_sqrt_decomposed,
    solve_quadratic,
)

__all__ = [
    "SQRT3",
    "Theorem2Case",
    "CollinearRootsError",
    "CanonicalTransform",
    "CanonicalCubic",
    "VoronoiVerdict",
    "nearest_root",
    "canonicalize",
    "canonical_from_w",
    "classify",
    "gauss_lucas_check",
    "theorem2_distance_gap",
]

SQRT3 = math.sqrt(3.0)

# Exact equalities in the theorems become tolerance bands in floats.
BOUNDARY_REL_TOL = 1e-12       # cell-assignment tie
COLLINEAR_TOL = 1e-12          # |b| below this: roots are collinear
B_SQRT3_TOL = 1e-9             # excluded line b = sqrt(3)
HULL_TOL = 1e-10               # barycentric slack for hull membership

_CELL_LABELS = ("-1", "+1", "w")


class Theorem2Case(str, Enum):
    A_POSITIVE = "a-positive"
    A_ZERO_B_SMALL = "a-zero-b-small"
    A_ZERO_B_LARGE = "a-zero-b-large"
    EXCLUDED_B_SQRT3 = "excluded-b-sqrt3"
    EXCLUDED_COLLINEAR = "excluded-collinear"


class CollinearRootsError(ValueError):
    """The three roots are (numerically) collinear; no canonical triangle."""


@dataclass(frozen=True)
class CanonicalTransform:
    """Similarity map from original to canonical coordinates.

    apply(z) = conj((z - shift) / scale) when ``conjugate`` is set, else
    (z - shift) / scale. Conjugation is needed because forcing the third
    root into the quadrant a >= 0, b >= 0 may require a reflection, which
    is not a complex-affine map.
    """

    scale: complex
    shift: complex
    conjugate: bool = False

    def apply(self, z: complex) -> complex:
        u = (z - self.shift) / self.scale
        return u.conjugate() if self.conjugate else u

    def invert(self, z: complex) -> complex:
        u = z.conjugate() if self.conjugate else complex(z)
        return u * self.scale + self.shift


@dataclass(frozen=True)
class CanonicalCubic:
    """Cubic normalized to roots {-1, 1, w}, w = a + bi, a >= 0, b > 0.

    c1 and c2 are the critical points in canonical coordinates, c1 the one
    with the larger imaginary part; they satisfy 3z^2 - 2wz - 1 = 0 and
    3*c1*c2 = -1. ``original_indices`` maps the canonical labels (-1, +1, w)
    back to the indices of the input roots.
    """

    w: complex
    a: float
    b: float
    c1: complex
    c2: complex
    transform: CanonicalTransform
    original_indices: tuple[int, int, int]

    @property
    def roots(self) -> tuple[complex, complex, complex]:
        return (-1 + 0j, 1 + 0j, self.w)


@dataclass(frozen=True)
class VoronoiVerdict:
    """Cell assignment for both critical points of one canonical cubic."""

    c1_cell: int | None
    c2_cell: int | None
    strong: bool
    theorem2_case: Theorem2Case

    def to_record(self) -> str:
        c1 = _CELL_LABELS[self.c1_cell] if self.c1_cell is not None else "boundary"
        c2 = _CELL_LABELS[self.c2_cell] if self.c2_cell is not None else "boundary"
        strong = "true" if self.strong else "false"
        return f"case={self.theorem2_case.value} c1->{c1} c2->{c2} strong={strong}"


def nearest_root(point: complex, roots: list[complex]) -> int | None:
    """Index of the strictly nearest root, or None on a numerical tie.

    The tie band is relative: the two smallest distances must differ by at
    least BOUNDARY_REL_TOL times their size for an assignment to be made.
    """
    dists = [abs(point - r) for r in roots]
    order = sorted(range(len(roots)), key=dists.__getitem__)
    d1, d2 = dists[order[0]], dists[order[1]]
    if d2 - d1 < BOUNDARY_REL_TOL * max(d1, d2):
        return None
    return order[0]


def _build_canonical(
    w: complex,
    transform: CanonicalTransform,
    original_indices: tuple[int, int, int],
) -> CanonicalCubic:
    a, b = w.real, w.imag
    # critical points of (z^2 - 1)(z - w): roots of 3z^2 - 2wz - 1, i.e.
    # (w +- sqrt(w^2 + 3))/3 with the square root split into real parts
    s = a * a - b * b + 3.0
    d = 2.0 * a * b
    big_a, big_b = complex_sqrt_decomposed(s, d)
    c1 = complex((a + big_a) / 3.0, (b + big_b) / 3.0)
    c2 = complex((a - big_a) / 3.0, (b - big_b) / 3.0)
    return CanonicalCubic(
        w=complex(a, b),
        a=a,
        b=b,
        c1=c1,
        c2=c2,
        transform=transform,
        original_indices=original_indices,
    )


def canonical_from_w(w: complex) -> CanonicalCubic:
    """Canonical cubic with roots {-1, 1, w} directly (identity transform)."""
    if w.real < 0 or w.imag <= 0:
        raise ValueError("canonical w needs a >= 0 and b > 0; reflect first")
    return _build_canonical(
        complex(w), CanonicalTransform(scale=1 + 0j, shift=0j), (0, 1, 2)
    )


def canonicalize(
    roots: list[complex],
    pairing: tuple[int, int] | None = None,
) -> CanonicalCubic:
    """Map three distinct roots onto {-1, 1, w} by a similarity transform.

    ``pairing`` picks which two roots go to -1 and +1; by default the two
    farthest apart are paired, which keeps the triangle best conditioned.
    The third root is reflected (negation and/or conjugation) into
    a >= 0, b >= 0; collinear triples (b below COLLINEAR_TOL) are refused
    since there is no triangle to classify.
    """
    rs = [complex(r) for r in roots]
    if len(rs) != 3:
        raise ValueError("expected exactly 3 roots")
    if rs[0] == rs[1] or rs[0] == rs[2] or rs[1] == rs[2]:
        raise ValueError("roots must be pairwise distinct")
    if pairing is None:
        pairs = [(0, 1), (0, 2), (1, 2)]
        pairing = max(pairs, key=lambda ij: abs(rs[ij[0]] - rs[ij[1]]))
    i, j = pairing
    if i == j or not (0 <= i < 3 and 0 <= j < 3):
        raise ValueError(f"invalid pairing {pairing!r}")
    k = 3 - i - j
    shift = 0.5 * (rs[i] + rs[j])
    scale = 0.5 * (rs[j] - rs[i])
    minus_idx, plus_idx = i, j
    w0 = (rs[k] - shift) / scale
    if w0.real < 0:
        scale = -scale
        w0 = -w0
        minus_idx, plus_idx = plus_idx, minus_idx
    conj = w0.imag < 0
    if conj:
        w0 = w0.conjugate()
    if w0.imag < COLLINEAR_TOL:
        raise CollinearRootsError(f"roots {roots!r} are collinear within tolerance")
    transform = CanonicalTransform(scale=scale, shift=shift, conjugate=conj)
    return _build_canonical(w0, transform, (minus_idx, plus_idx, k))


def classify(c: CanonicalCubic) -> VoronoiVerdict:
    """Assign both critical points to root cells and bucket the geometry.

    Buckets: a > 0; a = 0 with b below/above sqrt(3); and the excluded band
    around b = sqrt(3) where the critical points merge (at a = 0) and the
    distance identities degenerate. Exclusions are verdict flags, never
    errors.
    """
    roots = list(c.roots)
    c1_cell = nearest_root(c.c1, roots)
    c2_cell = nearest_root(c.c2, roots)
    if abs(c.b - SQRT3) < B_SQRT3_TOL:
        case = Theorem2Case.EXCLUDED_B_SQRT3
    elif c.a > 0:
        case = Theorem2Case.A_POSITIVE
    elif c.b < SQRT3:
        case = Theorem2Case.A_ZERO_B_SMALL
    else:
        case = Theorem2Case.A_ZERO_B_LARGE
    return VoronoiVerdict(
        c1_cell=c1_cell,
        c2_cell=c2_cell,
        strong=c1_cell is not None and c2_cell is not None,
        theorem2_case=case,
    )


def _in_hull(point: complex, tri: list[complex]) -> bool:
    """Point inside (or on, within tolerance) the triangle's convex hull."""
    r0, r1, r2 = tri
    u = r1 - r0
    v = r2 - r0
    denom = u.real * v.imag - u.imag * v.real
    span = max(abs(r0 - r1), abs(r0 - r2), abs(r1 - r2))
    if abs(denom) <= 1e-12 * span * span:
        # degenerate triangle: hull is the longest segment
        pairs = [(r0, r1), (r0, r2), (r1, r2)]
        a, b = max(pairs, key=lambda ab: abs(ab[0] - ab[1]))
        seg = b - a
        length = abs(seg)
        if length == 0:
            return abs(point - a) <= 1e-9
        t = ((point - a) * seg.conjugate()).real / (length * length)
        if t < -HULL_TOL or t > 1 + HULL_TOL:
            return False
        perp = abs(point - (a + t * seg))
        return perp <= 1e-9 * max(length, 1.0)
    q = point - r0
    lam1 = (q.real * v.imag - q.imag * v.real) / denom
    lam2 = (u.real * q.imag - u.imag * q.real) / denom
    lam0 = 1.0 - lam1 - lam2
    return lam0 >= -HULL_TOL and lam1 >= -HULL_TOL and lam2 >= -HULL_TOL


def gauss_lucas_check(p: Polynomial) -> bool:
    """True iff both critical points lie in the convex hull of the roots."""
    if p.degree != 3:
        raise ValueError(f"gauss_lucas_check needs degree 3, got degree {p.degree}")
    roots = cardano_oracle(p)
    crits = solve_quadratic(p.derivative())
    return _in_hull(crits.r1, roots) and _in_hull(crits.r2, roots)


def theorem2_distance_gap(c: CanonicalCubic) -> tuple[float, float]:
    """The two distances (|c2 - w|, |c2 + 1|) via their real decomposition.

    d1^2 = ((2a + A)^2 + (2b + B)^2)/9 and d2^2 = ((a - A + 3)^2 + (B - b)^2)/9
    with A + iB the decomposed square root of w^2 + 3. d1 > d2 away from the
    b = sqrt(3) line; inside that band the identities degenerate and the call
    is refused.
    """
    if abs(c.b - SQRT3) < B_SQRT3_TOL:
        raise ValueError("distance identities are excluded on the line b = sqrt(3)")
    s = c.a * c.a - c.b * c.b + 3.0
    d = 2.0 * c.a * c.b
    big_a, big_b = complex_sqrt_decomposed(s, d)
    d1 = math.sqrt((2.0 * c.a + big_a) ** 2 + (2.0 * c.b + big_b) ** 2) / 3.0
    d2 = math.sqrt((c.a - big_a + 3.0) ** 2 + (big_b - c.b) ** 2) / 3.0
    return d1, d2
