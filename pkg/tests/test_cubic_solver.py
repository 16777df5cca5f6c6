"""Interlaced solving, radical path, polishing, invariances."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

import cubiq.cubic_solver as cubic_solver
from cubiq import (
    FirstRootSource,
    NoConvergenceError,
    Polynomial,
    RepeatedCriticalPointError,
    cardano_oracle,
    critical_points,
    evaluate,
    polish,
    solve,
)
from conftest import (
    EXAMPLE_ROOTS,
    P_EXAMPLE,
    QUOTED_PAIR_IM,
    QUOTED_PAIR_RE,
    QUOTED_REAL,
    REAL_ROOT,
    cubic_from_roots,
    matched_root_error,
    random_cubic_with_roots,
)


class TestSolveExample:
    def test_roots_to_five_digits(self):
        rep = solve(P_EXAMPLE, tol=1e-10)
        quoted = [
            complex(QUOTED_REAL, 0),
            complex(QUOTED_PAIR_RE, QUOTED_PAIR_IM),
            complex(QUOTED_PAIR_RE, -QUOTED_PAIR_IM),
        ]
        assert matched_root_error(rep.roots, quoted) < 5e-5
        assert matched_root_error(rep.roots, EXAMPLE_ROOTS) < 1e-12

    def test_first_sequence_is_negative_critical_point(self):
        rep = solve(P_EXAMPLE)
        assert rep.first_root_source is FirstRootSource.CRITICAL_POINT_2
        # that seed lies in the real root's cell, so the first root is real
        assert abs(rep.first_root - REAL_ROOT) < 1e-9

    def test_residuals_small_and_sorted(self):
        rep = solve(P_EXAMPLE)
        scale = P_EXAMPLE.monic().coefficient_scale
        assert all(res < 1e-9 * scale for res in rep.residuals)
        assert list(rep.roots) == sorted(rep.roots, key=lambda r: (r.real, r.imag))

    def test_terms_within_cap(self):
        rep = solve(P_EXAMPLE, m_cap=500)
        assert 3 <= rep.terms_used <= 500


class TestRadicalPath:
    def test_plain_cube(self):
        rep = solve(Polynomial((-8.0, 0.0, 0.0, 1.0)))
        assert rep.first_root_source is FirstRootSource.PURE_RADICAL
        assert rep.terms_used == 0
        expected = [2, complex(-1, math.sqrt(3)), complex(-1, -math.sqrt(3))]
        assert matched_root_error(rep.roots, expected) < 1e-12

    def test_shifted_cube(self):
        # (z-1)^3 = 8, critical points coincide at 1
        p = Polynomial((-9.0, 3.0, -3.0, 1.0))
        with pytest.raises(RepeatedCriticalPointError):
            critical_points(p)
        rep = solve(p)
        assert rep.first_root_source is FirstRootSource.PURE_RADICAL
        omega = complex(-0.5, 0.5 * math.sqrt(3))
        expected = [3, 1 + 2 * omega, 1 + 2 * omega.conjugate()]
        assert matched_root_error(rep.roots, expected) < 1e-12

    def test_scaled_leading_coefficient(self):
        rep = solve(Polynomial((-16.0, 0.0, 0.0, 2.0)))
        assert rep.first_root_source is FirstRootSource.PURE_RADICAL
        assert min(abs(r - 2) for r in rep.roots) < 1e-12


class TestSolveProperties:
    def test_oracle_agreement(self):
        rng = np.random.default_rng(41)
        for _ in range(500):
            p, _ = random_cubic_with_roots(rng)
            rep = solve(p)
            assert matched_root_error(rep.roots, cardano_oracle(p)) < 1e-8
            scale = p.monic().coefficient_scale
            assert all(res < 1e-9 * scale for res in rep.residuals)

    def test_monic_invariance_binary_scale(self):
        # scaling by a power of two divides out exactly; identical output
        rep1 = solve(P_EXAMPLE)
        scaled = Polynomial(tuple(8.0 * c for c in P_EXAMPLE.coefficients))
        rep2 = solve(scaled)
        assert rep1.roots == rep2.roots
        assert rep1.residuals == rep2.residuals

    def test_monic_invariance_general_scale(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            p, _ = random_cubic_with_roots(rng)
            lam = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(lam) < 0.1:
                continue
            scaled = Polynomial(tuple(lam * c for c in p.coefficients))
            err = matched_root_error(solve(p).roots, list(solve(scaled).roots))
            assert err < 1e-10

    def test_translation_equivariance(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            p, rts = random_cubic_with_roots(rng)
            t = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            shifted = cubic_from_roots(*(r + t for r in rts))
            got = solve(shifted).roots
            expected = [r + t for r in solve(p).roots]
            assert matched_root_error(got, expected) < 1e-9

    def test_interlacing_lockstep(self, monkeypatch):
        calls = {"n": 0}
        original = cubic_solver.d_step_cubic

        def counting(state):
            calls["n"] += 1
            return original(state)

        monkeypatch.setattr(cubic_solver, "d_step_cubic", counting)
        rep = solve(P_EXAMPLE)
        # both sequences advance from m=2 to the winning m, in lockstep
        assert calls["n"] == 2 * (rep.terms_used - 2)

    def test_real_coefficients_complex_criticals_find_complex_root_first(self):
        rng = np.random.default_rng(53)
        checked = 0
        while checked < 100:
            coeffs = [float(rng.uniform(-3, 3)) for _ in range(3)]
            p = Polynomial((*coeffs, 1.0))
            try:
                cps = critical_points(p)
            except RepeatedCriticalPointError:
                continue
            try:
                rep = solve(p)
            except NoConvergenceError:
                continue
            if abs(cps.r1.imag) > 1e-12:
                assert abs(rep.first_root.imag) > 1e-9
            else:
                assert abs(rep.first_root.imag) < 1e-9
            checked += 1

    def test_conjugate_tie_is_flagged(self):
        # real coefficients with complex critical points: the two sequences
        # are exact conjugates and settle on the same term
        p = Polynomial((2.0, 2.0, 0.0, 1.0))  # z^3 + 2z + 2
        cps = critical_points(p)
        assert abs(cps.r1.imag) > 0
        rep = solve(p)
        assert rep.tie
        assert abs(rep.first_root.imag) > 1e-9

    def test_no_convergence_carries_histories(self):
        # both critical points sit near the centroid of a near-equilateral
        # triangle of roots, so neither sequence settles within the cap
        p = Polynomial((-1.0, -1e-6, 0.0, 1.0))
        with pytest.raises(NoConvergenceError) as err:
            solve(p)
        assert len(err.value.history_1) > 400
        assert len(err.value.history_2) > 400

    def test_validation(self):
        with pytest.raises(ValueError):
            solve(Polynomial((1.0, 1.0)))
        with pytest.raises(ValueError):
            solve(P_EXAMPLE, tol=0.0)
        with pytest.raises(ValueError):
            solve(P_EXAMPLE, m_cap=2)


class TestPolish:
    def test_root_is_fixed(self):
        assert polish(Polynomial((-1.0, 0.0, 0.0, 1.0)), 1.0, 5) == 1.0

    def test_refines_nearby_seed(self):
        got = polish(P_EXAMPLE, -1.77, 10)
        assert abs(got - REAL_ROOT) < 1e-14
        assert abs(evaluate(P_EXAMPLE, got)) < 1e-12

    def test_cycle_returns_after_cap_without_error(self):
        got = polish(P_EXAMPLE, 0.0, 2)
        assert got in (0.0, 1.0)

    def test_vanishing_derivative_keeps_iterate(self):
        assert polish(Polynomial((0.0, 0.0, 0.0, 1.0)), 0.0, 5) == 0.0


class TestReportSerialization:
    def test_json_schema(self):
        rep = solve(P_EXAMPLE)
        doc = json.loads(rep.to_json())
        assert set(doc) == {"roots", "residuals", "source", "terms_used", "polished_iters"}
        assert doc["source"] == "critical-point-2"
        assert len(doc["roots"]) == 3
        assert {"re", "im"} == set(doc["roots"][0])
        assert len(doc["residuals"]) == 3

    def test_tie_key_only_when_present(self):
        doc = json.loads(solve(Polynomial((2.0, 2.0, 0.0, 1.0))).to_json())
        assert doc.get("tie") is True
        doc2 = json.loads(solve(P_EXAMPLE).to_json())
        assert "tie" not in doc2
