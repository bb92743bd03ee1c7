from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from credalkit.lp import Infeasible, Unbounded, linprog_min


class TestSimplex:
    def test_textbook_problem(self):
        # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
        res = linprog_min([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
        np.testing.assert_allclose(res.x, [2, 6], atol=1e-9)
        assert res.value == pytest.approx(-36)

    def test_equality_and_negative_rhs(self):
        res = linprog_min([1, 1], [[-1, 0]], [-2], [[1, -1]], [1])
        np.testing.assert_allclose(res.x, [2, 1], atol=1e-9)

    def test_redundant_equalities(self):
        res = linprog_min([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
        np.testing.assert_allclose(res.x, [1, 0], atol=1e-9)

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            linprog_min([1, 1], A_eq=[[1, 1]], b_eq=[-1])

    def test_unbounded(self):
        with pytest.raises(Unbounded):
            linprog_min([-1, 0], [[0, 1]], [1])

    def test_degenerate_program_terminates(self):
        # many zero right-hand sides, the situation minimax programs produce
        A = np.array([[1, -1, -1], [-1, 1, -1], [0.5, 0.5, -1]])
        res = linprog_min([0, 0, 1], A, np.zeros(3), [[1, 1, 0]], [1])
        assert res.value == pytest.approx(0.5)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000), st.integers(1, 6), st.integers(1, 6))
    def test_agrees_with_scipy(self, seed, m, n):
        rng = np.random.default_rng(seed)
        A = rng.uniform(-1, 1, (m, n))
        b = rng.uniform(0, 1, m)
        c = rng.uniform(-1, 1, n)
        # box constraints keep the program bounded
        A = np.vstack([A, np.eye(n)])
        b = np.concatenate([b, np.full(n, 3.0)])
        ref = linprog(c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
        ours = linprog_min(c, A, b)
        assert ours.value == pytest.approx(ref.fun, abs=1e-8)
        assert (A @ ours.x <= b + 1e-8).all() and (ours.x >= -1e-12).all()
