"""Escape-time rendering of root basins over a pixel grid.

Each pixel's complex center seeds an iteration (Newton, Halley, or the
fixed-seed basic sequence); the pixel records which root the iteration
reached and in how many steps, or a diverged flag once the cap is hit.
Pixel records are a pure function of (polynomial, config, pixel index), so
renders are deterministic regardless of execution order, and the PPM
encoder uses integer arithmetic only, making output files bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .poly_core import Polynomial, cardano_oracle

__all__ = [
    "RenderMethod",
    "RenderConfig",
    "Polynomiograph",
    "DEFAULT_PALETTE",
    "pixel_centers",
    "pixel_index",
    "render",
    "measure_divergence_fraction",
    "encode_image",
]

Color = tuple[int, int, int]

# three base colors (one per root) plus the color for diverged pixels
DEFAULT_PALETTE: tuple[Color, Color, Color, Color] = (
    (255, 40, 40),
    (40, 255, 40),
    (40, 90, 255),
    (0, 0, 0),
)


class RenderMethod(str, Enum):
    NEWTON = "newton"
    HALLEY = "halley"
    BASIC = "basic-sequence"


@dataclass(frozen=True)
class RenderConfig:
    center: complex
    half_width: float
    pixels_x: int
    pixels_y: int
    method: RenderMethod
    tol: float = 1e-8
    cap: int | None = None  # defaults: 100 for newton/halley, 300 for basic
    palette: tuple[Color, Color, Color, Color] = DEFAULT_PALETTE

    def __post_init__(self) -> None:
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.pixels_x < 1 or self.pixels_y < 1:
            raise ValueError("pixel counts must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be at least 1")

    @property
    def resolved_cap(self) -> int:
        if self.cap is not None:
            return self.cap
        return 300 if self.method is RenderMethod.BASIC else 100

    @property
    def half_height(self) -> float:
        # the complex window keeps the pixel aspect ratio
        return self.half_width * self.pixels_y / self.pixels_x


@dataclass
class Polynomiograph:
    """Per-pixel (root index, step count, diverged) records plus context.

    root_index is -1 exactly where diverged is True; steps never exceeds
    the cap. Row 0 is the top of the image (highest imaginary part).
    """

    root_index: np.ndarray  # (H, W) int8, -1 for none
    steps: np.ndarray       # (H, W) int32
    diverged: np.ndarray    # (H, W) bool
    config: RenderConfig
    roots: tuple[complex, complex, complex]


def pixel_centers(cfg: RenderConfig) -> np.ndarray:
    """(H, W) complex grid of pixel-center seeds, imaginary axis up."""
    w, h = cfg.pixels_x, cfg.pixels_y
    dx = 2.0 * cfg.half_width / w
    dy = 2.0 * cfg.half_height / h
    re = cfg.center.real - cfg.half_width + (np.arange(w) + 0.5) * dx
    im = cfg.center.imag + cfg.half_height - (np.arange(h) + 0.5) * dy
    return re[None, :] + 1j * im[:, None]


def pixel_index(cfg: RenderConfig, z: complex) -> tuple[int, int]:
    """(row, col) of the pixel whose cell contains z (clipped to the grid)."""
    dx = 2.0 * cfg.half_width / cfg.pixels_x
    dy = 2.0 * cfg.half_height / cfg.pixels_y
    col = int((z.real - (cfg.center.real - cfg.half_width)) / dx)
    row = int(((cfg.center.imag + cfg.half_height) - z.imag) / dy)
    col = min(max(col, 0), cfg.pixels_x - 1)
    row = min(max(row, 0), cfg.pixels_y - 1)
    return row, col


def _poly_arrays(p: Polynomial) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficient arrays (ascending) for p, p', p'' as complex128."""
    c = np.array(p.coefficients, dtype=np.complex128)
    k = np.arange(len(c))
    dc = (c * k)[1:]
    d2c = (dc * np.arange(len(dc)))[1:]
    return c, dc, d2c


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def render(p: Polynomial, cfg: RenderConfig) -> Polynomiograph:
    """Render the basin structure of a cubic over the configured window."""
    if p.degree != 3:
        raise ValueError(f"render needs degree 3, got degree {p.degree}")
    mon = p.monic()
    roots = sorted(cardano_oracle(mon), key=lambda r: (r.real, r.imag))
    sep = min(
        abs(roots[0] - roots[1]), abs(roots[0] - roots[2]), abs(roots[1] - roots[2])
    )
    # the closed form resolves a double root only to ~sqrt(eps), so anything
    # below this is indistinguishable from a repeated root
    if sep < 1e-6 * (1.0 + max(abs(r) for r in roots)):
        raise ValueError("repeated roots: basin labels would be ambiguous")
    grid = pixel_centers(cfg)
    if cfg.method is RenderMethod.BASIC:
        root_index, steps = _iterate_basic(mon, grid, roots, cfg)
    else:
        root_index, steps = _iterate_member(mon, grid, roots, cfg)
    diverged = root_index < 0
    steps[diverged] = cfg.resolved_cap
    return Polynomiograph(
        root_index=root_index,
        steps=steps,
        diverged=diverged,
        config=cfg,
        roots=(roots[0], roots[1], roots[2]),
    )


def _assign(z: np.ndarray, roots_arr: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """(hit mask, nearest-root index) for points within tol of some root."""
    d2 = np.abs(z[:, None] - roots_arr[None, :]) ** 2
    nearest = np.argmin(d2, axis=1)
    hit = d2[np.arange(len(z)), nearest] <= tol * tol
    return hit, nearest.astype(np.int8)


def _iterate_member(
    mon: Polynomial, grid: np.ndarray, roots: list[complex], cfg: RenderConfig
) -> tuple[np.ndarray, np.ndarray]:
    shape = grid.shape
    cap = cfg.resolved_cap
    c, dc, d2c = _poly_arrays(mon)
    roots_arr = np.array(roots, dtype=np.complex128)
    root_index = np.full(shape, -1, dtype=np.int8).ravel()
    steps = np.zeros(shape, dtype=np.int32).ravel()
    alive = np.arange(grid.size)
    z = grid.ravel().copy()
    for it in range(cap + 1):
        zc = z[alive]
        hit, nearest = _assign(zc, roots_arr, cfg.tol)
        hit_idx = alive[hit]
        root_index[hit_idx] = nearest[hit]
        steps[hit_idx] = it
        alive = alive[~hit]
        if alive.size == 0 or it == cap:
            break
        zc = z[alive]
        with np.errstate(all="ignore"):
            pv = _horner(c, zc)
            dv = _horner(dc, zc)
            if cfg.method is RenderMethod.NEWTON:
                znew = zc - pv / dv
            else:
                d2v = _horner(d2c, zc)
                znew = zc - 2.0 * pv * dv / (2.0 * dv * dv - pv * d2v)
        finite = np.isfinite(znew)
        z[alive] = np.where(finite, znew, np.nan)
        alive = alive[finite]  # non-finite iterates can never re-enter
    return root_index.reshape(shape), steps.reshape(shape)


def _iterate_basic(
    mon: Polynomial, grid: np.ndarray, roots: list[complex], cfg: RenderConfig
) -> tuple[np.ndarray, np.ndarray]:
    shape = grid.shape
    cap = cfg.resolved_cap
    c, dc, d2c = _poly_arrays(mon)
    roots_arr = np.array(roots, dtype=np.complex128)
    root_index = np.full(shape, -1, dtype=np.int8).ravel()
    steps = np.zeros(shape, dtype=np.int32).ravel()
    alive = np.arange(grid.size)

    z = grid.ravel().copy()
    p0 = _horner(c, z)
    p1 = _horner(dc, z)
    p2 = _horner(d2c, z)
    half_p0p2 = 0.5 * p0 * p2
    p0sq = p0 * p0
    w0 = p1.copy()
    w1 = np.ones_like(z)
    w2 = np.zeros_like(z)
    b_prev = np.full_like(z, np.nan)

    for m in range(2, cap + 1):
        with np.errstate(all="ignore"):
            b = z - p0 * (w1 / w0)
            # non-finite terms (zero window head) are skipped, not fatal:
            # NaN never satisfies the comparison, which also resets the
            # difference test across the gap, mirroring the scalar path
            b = np.where(np.isfinite(b), b, np.nan)
            conv = np.abs(b - b_prev) < cfg.tol
        if conv.any():
            zc = b[conv]
            d2_ = np.abs(zc[:, None] - roots_arr[None, :]) ** 2
            root_index[alive[conv]] = np.argmin(d2_, axis=1).astype(np.int8)
            steps[alive[conv]] = m
        keep = ~conv
        if m == cap:
            break
        alive = alive[keep]
        if alive.size == 0:
            break
        z = z[keep]
        p0 = p0[keep]
        p1 = p1[keep]
        half_p0p2 = half_p0p2[keep]
        p0sq = p0sq[keep]
        w0 = w0[keep]
        w1 = w1[keep]
        w2 = w2[keep]
        b_prev = b[keep]
        with np.errstate(all="ignore"):
            d_next = p1 * w0 - half_p0p2 * w1 + p0sq * w2
        w2 = w1
        w1 = w0
        w0 = d_next
        mag = np.maximum(np.abs(w0), np.maximum(np.abs(w1), np.abs(w2)))
        big = mag > 1e100
        if big.any():
            div = np.where(big, mag, 1.0)
            w0 = w0 / div
            w1 = w1 / div
            w2 = w2 / div
    return root_index.reshape(shape), steps.reshape(shape)


def measure_divergence_fraction(g: Polynomiograph) -> float:
    """Fraction of pixels that never reached a root."""
    return float(np.mean(g.diverged))


def encode_image(g: Polynomiograph) -> bytes:
    """Binary PPM (P6): root color scaled by 1 - steps/cap, dark if diverged.

    Integer arithmetic throughout, so identical inputs give identical bytes.
    """
    cfg = g.config
    cap = cfg.resolved_cap
    base = np.array(cfg.palette[:3], dtype=np.int64)
    dark = np.array(cfg.palette[3], dtype=np.uint8)
    safe_idx = np.where(g.root_index >= 0, g.root_index, 0).astype(np.int64)
    weight = (cap - g.steps.astype(np.int64))[..., None]
    rgb = (base[safe_idx] * weight) // cap
    rgb = rgb.astype(np.uint8)
    rgb[g.diverged] = dark
    header = f"P6\n{cfg.pixels_x} {cfg.pixels_y}\n255\n".encode("ascii")
    return header + rgb.tobytes()
