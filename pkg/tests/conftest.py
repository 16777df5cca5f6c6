"""Shared helpers: reference values and random-cubic sampling."""

from __future__ import annotations

import itertools
import math

import numpy as np

from cubiq import Polynomial

# Roots of z^3 - 2z + 2 at full double precision (from a 50-digit
# evaluation of the closed form), plus their 5-significant-digit roundings.
# The real part of the pair is often misquoted as .88456; Vieta's sum
# (the roots must add to 0) pins the correct 5-digit value at .88465.
REAL_ROOT = -1.7692923542386314
PAIR_RE = 0.8846461771193157
PAIR_IM = 0.5897428050222055
QUOTED_REAL = -1.7693
QUOTED_PAIR_RE = 0.88465
QUOTED_PAIR_IM = 0.58974

CRITICAL = math.sqrt(2.0 / 3.0)  # critical points of z^3 - 2z + 2 are +-this

# distance ratio from the seed -sqrt(2/3) to nearest/second-nearest root
RATE_AT_SEED = 0.5291935385218531

P_EXAMPLE = Polynomial((2.0, -2.0, 0.0, 1.0))  # z^3 - 2z + 2
EXAMPLE_ROOTS = [
    complex(REAL_ROOT, 0.0),
    complex(PAIR_RE, PAIR_IM),
    complex(PAIR_RE, -PAIR_IM),
]


def cubic_from_roots(r0: complex, r1: complex, r2: complex) -> Polynomial:
    """Monic cubic with the given roots, coefficients constant first."""
    return Polynomial(
        (
            -r0 * r1 * r2,
            r0 * r1 + r0 * r2 + r1 * r2,
            -(r0 + r1 + r2),
            1.0,
        )
    )


def random_cubic_with_roots(
    rng: np.random.Generator,
    min_separation: float = 1e-3,
    box: float = 2.0,
) -> tuple[Polynomial, list[complex]]:
    """Monic cubic with roots drawn uniformly from a box, separation-floored."""
    while True:
        rts = [complex(rng.uniform(-box, box), rng.uniform(-box, box)) for _ in range(3)]
        sep = min(abs(a - b) for a, b in itertools.combinations(rts, 2))
        if sep > min_separation:
            return cubic_from_roots(*rts), rts


def random_coefficient_cubic(rng: np.random.Generator) -> Polynomial:
    """Cubic with coefficients in the unit disk, scaled by 10^u, u in [-3, 3]."""
    scale = 10.0 ** rng.uniform(-3, 3)
    coeffs = []
    for _ in range(4):
        radius = math.sqrt(rng.uniform(0.0, 1.0))
        angle = rng.uniform(0.0, 2.0 * math.pi)
        coeffs.append(scale * radius * complex(math.cos(angle), math.sin(angle)))
    while abs(coeffs[3]) < 1e-3 * scale:
        radius = math.sqrt(rng.uniform(0.0, 1.0))
        angle = rng.uniform(0.0, 2.0 * math.pi)
        coeffs[3] = scale * radius * complex(math.cos(angle), math.sin(angle))
    return Polynomial(tuple(coeffs))


def matched_root_error(found, reference) -> float:
    """Max per-root distance under the best pairing of two root triples."""
    return min(
        max(abs(found[i] - reference[perm[i]]) for i in range(3))
        for perm in itertools.permutations(range(3))
    )
