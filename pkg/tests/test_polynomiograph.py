"""Grid geometry, basin rendering, PPM encoding, determinism."""

from __future__ import annotations

import hashlib
import math

import numpy as np
import pytest

from cubiq import (
    Polynomial,
    RenderConfig,
    RenderMethod,
    basic_sequence,
    encode_image,
    measure_divergence_fraction,
    nearest_root,
    pixel_centers,
    pixel_index,
    rate_ratio,
    render,
)
from cubiq.basic_family import member_step
from cubiq.polynomiograph import Polynomiograph
from conftest import P_EXAMPLE

# recorded once from the initial render of this configuration
GOLDEN_NEWTON_64_SHA256 = "84f005f793b97c641ef58534323e4aa1b5246b15bc4782f3c4da43730e55be90"

P_UNITY = Polynomial((-1.0, 0.0, 0.0, 1.0))  # z^3 - 1


def _cfg(method, n=64, center=0j, hw=2.5, **kw):
    return RenderConfig(
        center=center, half_width=hw, pixels_x=n, pixels_y=n, method=method, **kw
    )


class TestGridGeometry:
    def test_pixel_centers_2x2(self):
        cfg = RenderConfig(
            center=0j, half_width=1.0, pixels_x=2, pixels_y=2, method=RenderMethod.NEWTON
        )
        grid = pixel_centers(cfg)
        assert grid.shape == (2, 2)
        assert grid[0, 0] == complex(-0.5, 0.5)  # row 0 = top
        assert grid[0, 1] == complex(0.5, 0.5)
        assert grid[1, 0] == complex(-0.5, -0.5)

    def test_aspect_ratio_follows_pixels(self):
        cfg = RenderConfig(
            center=0j, half_width=2.0, pixels_x=4, pixels_y=2, method=RenderMethod.NEWTON
        )
        assert cfg.half_height == 1.0
        grid = pixel_centers(cfg)
        assert grid.shape == (2, 4)
        assert grid[0, 0] == complex(-1.5, 0.5)

    def test_pixel_index_inverts_centers(self):
        cfg = _cfg(RenderMethod.NEWTON, n=17, center=0.3 - 0.2j, hw=1.7)
        grid = pixel_centers(cfg)
        for row, col in ((0, 0), (5, 11), (16, 16)):
            assert pixel_index(cfg, grid[row, col]) == (row, col)

    def test_default_caps(self):
        assert _cfg(RenderMethod.NEWTON).resolved_cap == 100
        assert _cfg(RenderMethod.HALLEY).resolved_cap == 100
        assert _cfg(RenderMethod.BASIC).resolved_cap == 300
        assert _cfg(RenderMethod.BASIC, cap=42).resolved_cap == 42

    def test_config_validation(self):
        with pytest.raises(ValueError):
            _cfg(RenderMethod.NEWTON, hw=-1.0)
        with pytest.raises(ValueError):
            RenderConfig(0j, 1.0, 0, 4, RenderMethod.NEWTON)
        with pytest.raises(ValueError):
            _cfg(RenderMethod.NEWTON, tol=0.0)


class TestRender:
    def test_pixel_at_root_converges_in_zero_steps(self):
        cfg = RenderConfig(
            center=1 + 0j, half_width=0.01, pixels_x=1, pixels_y=1, method=RenderMethod.NEWTON
        )
        g = render(P_UNITY, cfg)
        assert not g.diverged[0, 0]
        assert g.steps[0, 0] == 0
        assert measure_divergence_fraction(g) == 0.0

    def test_newton_cycle_pixels_diverge(self):
        # 101 pixels over half-width 2.525 puts centers exactly on 0 and 1
        cfg = RenderConfig(
            center=0j, half_width=2.525, pixels_x=101, pixels_y=101, method=RenderMethod.NEWTON
        )
        g = render(P_EXAMPLE, cfg)
        for seed in (0j, 1 + 0j):
            row, col = pixel_index(cfg, seed)
            assert g.diverged[row, col]
            assert g.root_index[row, col] == -1
        assert measure_divergence_fraction(g) > 0.001

    def test_unity_newton_converges_almost_everywhere(self):
        g = render(P_UNITY, _cfg(RenderMethod.NEWTON, n=256))
        assert measure_divergence_fraction(g) < 0.01

    def test_steps_bounded_and_flags_consistent(self):
        for method in (RenderMethod.NEWTON, RenderMethod.HALLEY, RenderMethod.BASIC):
            g = render(P_EXAMPLE, _cfg(method, n=32))
            assert (g.steps <= g.config.resolved_cap).all()
            assert ((g.root_index == -1) == g.diverged).all()

    def test_repeated_roots_rejected(self):
        with pytest.raises(ValueError):
            render(Polynomial((-2.0, 5.0, -4.0, 1.0)), _cfg(RenderMethod.NEWTON))  # (z-1)^2(z-2)

    def test_roots_sorted_deterministically(self):
        g = render(P_EXAMPLE, _cfg(RenderMethod.NEWTON, n=8))
        assert g.roots[0].real < g.roots[1].real
        assert g.roots[1].imag < g.roots[2].imag

    def test_newton_basin_matches_nearest_root_of_final_iterate(self):
        cfg = _cfg(RenderMethod.NEWTON, n=33)
        g = render(P_EXAMPLE, cfg)
        grid = pixel_centers(cfg)
        rng = np.random.default_rng(3)
        mon = P_EXAMPLE.monic()
        rows, cols = np.nonzero(~g.diverged)
        pick = rng.choice(len(rows), size=60, replace=False)
        for k in pick:
            row, col = int(rows[k]), int(cols[k])
            z = complex(grid[row, col])
            for _ in range(int(g.steps[row, col])):
                z = member_step(mon, 2, z)
            assert nearest_root(z, list(g.roots)) == g.root_index[row, col]

    def test_basic_render_agrees_with_scalar_sequence(self):
        cfg = _cfg(RenderMethod.BASIC, n=17)
        g = render(P_EXAMPLE, cfg)
        grid = pixel_centers(cfg)
        for row in range(0, 17, 3):
            for col in range(0, 17, 3):
                rep = basic_sequence(P_EXAMPLE, complex(grid[row, col]), cfg.tol, cfg.resolved_cap)
                if g.diverged[row, col]:
                    assert not rep.converged
                else:
                    assert rep.converged
                    assert nearest_root(rep.limit, list(g.roots)) == g.root_index[row, col]
                    assert rep.terms_used == g.steps[row, col]

    def test_basic_render_cell_consistency(self):
        cfg = _cfg(RenderMethod.BASIC, n=64)
        g = render(P_EXAMPLE, cfg)
        grid = pixel_centers(cfg)
        roots = list(g.roots)
        agree = 0
        total = 0
        for row in range(64):
            for col in range(64):
                if g.diverged[row, col]:
                    continue
                seed = complex(grid[row, col])
                try:
                    if rate_ratio(roots, seed) >= 0.9:
                        continue
                except ValueError:
                    continue
                total += 1
                if nearest_root(seed, roots) == g.root_index[row, col]:
                    agree += 1
        assert total > 1000
        assert agree / total >= 0.999


class TestEncodeImage:
    def test_single_full_brightness_pixel(self):
        cfg = RenderConfig(
            center=0j, half_width=1.0, pixels_x=1, pixels_y=1, method=RenderMethod.NEWTON
        )
        g = Polynomiograph(
            root_index=np.array([[0]], dtype=np.int8),
            steps=np.array([[0]], dtype=np.int32),
            diverged=np.array([[False]]),
            config=cfg,
            roots=(-1 + 0j, 1 + 0j, 2j),
        )
        data = encode_image(g)
        assert data == b"P6\n1 1\n255\n" + bytes(cfg.palette[0])

    def test_all_diverged_grid_is_dark(self):
        cfg = RenderConfig(
            center=0j, half_width=1.0, pixels_x=2, pixels_y=2, method=RenderMethod.NEWTON
        )
        g = Polynomiograph(
            root_index=np.full((2, 2), -1, dtype=np.int8),
            steps=np.full((2, 2), 100, dtype=np.int32),
            diverged=np.ones((2, 2), dtype=bool),
            config=cfg,
            roots=(-1 + 0j, 1 + 0j, 2j),
        )
        data = encode_image(g)
        assert data == b"P6\n2 2\n255\n" + bytes(cfg.palette[3]) * 4

    def test_brightness_scales_with_steps(self):
        cfg = RenderConfig(
            center=0j, half_width=1.0, pixels_x=1, pixels_y=1, method=RenderMethod.NEWTON,
            palette=((200, 100, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)),
        )
        g = Polynomiograph(
            root_index=np.array([[0]], dtype=np.int8),
            steps=np.array([[50]], dtype=np.int32),
            diverged=np.array([[False]]),
            config=cfg,
            roots=(-1 + 0j, 1 + 0j, 2j),
        )
        body = encode_image(g)[len(b"P6\n1 1\n255\n"):]
        assert body == bytes((100, 50, 0))


class TestDeterminism:
    def test_renders_are_byte_identical(self):
        cfg = _cfg(RenderMethod.BASIC, n=32)
        a = encode_image(render(P_EXAMPLE, cfg))
        b = encode_image(render(P_EXAMPLE, cfg))
        assert a == b

    def test_golden_newton_hash(self):
        cfg = _cfg(RenderMethod.NEWTON, n=64)
        data = encode_image(render(P_EXAMPLE, cfg))
        assert hashlib.sha256(data).hexdigest() == GOLDEN_NEWTON_64_SHA256
