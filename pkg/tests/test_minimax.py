from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from credalkit.credal import CredalSet, marginal_fixed_credal
from credalkit.decision import (
    DecisionRule,
    LossSpec,
    action_losses,
    expected_loss,
    mismatch_scaled_loss,
    observation_scaled_loss,
    zero_one_loss,
)
from credalkit.errors import DimensionMismatch
from credalkit.minimax import (
    MatrixGame,
    decompose_rule,
    deterministic_minimax,
    format_rule,
    global_minimax_rule,
    local_game,
    local_minimax_action,
    local_minimax_rule,
    solve_matrix_game,
    time_inconsistency_report,
    vertex_costs,
    worst_case_expected_loss,
)
from credalkit.probspace import FiniteDistribution, JointDistribution

from oracles import matrix_game_grid


def scipy_minimax_value(credal: CredalSet, loss: LossSpec) -> float:
    """min over behavioural rules of the max vertex loss, written directly."""
    V, mx, A = len(credal), credal.mx, loss.n_actions
    full = loss.full(mx)
    # variables: rule[x, a], t
    c = np.zeros(mx * A + 1)
    c[-1] = 1
    A_ub = []
    for v in credal.vertices:
        row = [sum(v.table[x, y] * full[x, y, a] for y in range(credal.my)) for x in range(mx) for a in range(A)]
        A_ub.append(row + [-1])
    A_eq = [[1.0 if i // A == x else 0.0 for i in range(mx * A)] + [0] for x in range(mx)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(V), A_eq=A_eq, b_eq=np.ones(mx),
                  bounds=[(0, None)] * (mx * A) + [(None, None)], method="highs")
    return float(res.fun)


def random_prior(rng, my):
    w = rng.uniform(0.05, 0.95, my)
    w /= w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return FiniteDistribution(w)


class TestGlobalMinimax:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.integers(1, 3), st.integers(2, 3), st.integers(1, 3))
    def test_equals_prior_bayes_value(self, seed, mx, my, na):
        # for the marginal-fixed family the observation is worthless
        rng = np.random.default_rng(seed)
        prior = random_prior(rng, my)
        loss = LossSpec(rng.uniform(0, 1, (my, na)))
        sol = global_minimax_rule(marginal_fixed_credal(prior, mx), loss)
        assert sol.value == pytest.approx(action_losses(prior, loss).min(), abs=1e-6)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_agrees_with_scipy_on_arbitrary_sets(self, seed):
        rng = np.random.default_rng(seed)
        vs = []
        for _ in range(rng.integers(1, 5)):
            t = rng.dirichlet(np.ones(6)).reshape(3, 2)
            t[-1, -1] = 1.0 - t.sum() + t[-1, -1]
            vs.append(JointDistribution(t))
        credal = CredalSet(vs)
        loss = LossSpec(rng.uniform(0, 1, (3, 2, 2)), observation_dependent=True)
        sol = global_minimax_rule(credal, loss)
        assert sol.value == pytest.approx(scipy_minimax_value(credal, loss), abs=1e-7)
        assert sol.lower_bound <= sol.value + 1e-9
        value, _ = worst_case_expected_loss(credal, sol.rule, loss)
        assert value == pytest.approx(sol.value, abs=1e-12)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7])
    def test_zero_one_value(self, p):
        sol = global_minimax_rule(marginal_fixed_credal(FiniteDistribution.binary(p), 2), zero_one_loss())
        assert sol.value == pytest.approx(min(p, 1 - p), abs=1e-9)

    @pytest.mark.parametrize("p", [0.2, 0.8])
    def test_loss_L_constant_rule(self, p):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        sol = global_minimax_rule(credal, observation_scaled_loss())
        a = 0 if p < 0.5 else 1
        np.testing.assert_allclose(sol.rule.rows, DecisionRule.constant(a, 2, 2).rows, atol=1e-6)
        assert sol.value == pytest.approx(2 * min(p, 1 - p), abs=1e-7)
        det_value, det_actions = deterministic_minimax(credal, observation_scaled_loss())
        assert det_value == pytest.approx(sol.value, abs=1e-7)
        assert det_actions == (a, a)

    @pytest.mark.parametrize("p", [0.4, 0.5, 0.6])
    def test_loss_Lprime_mixed_rule(self, p):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        sol = global_minimax_rule(credal, mismatch_scaled_loss())
        assert sol.value == pytest.approx(2 / 3, abs=1e-6)
        np.testing.assert_allclose(sol.rule.rows, [[1 / 3, 2 / 3], [2 / 3, 1 / 3]], atol=1e-6)
        assert format_rule(sol.rule) == "(1/3)δ01+(2/3)δ10"
        # randomization strictly helps here
        assert deterministic_minimax(credal, mismatch_scaled_loss())[0] > sol.value + 0.1

    def test_loss_Lprime_low_p(self):
        sol = global_minimax_rule(marginal_fixed_credal(FiniteDistribution.binary(0.2), 2), mismatch_scaled_loss())
        assert sol.value == pytest.approx(0.4, abs=1e-6)
        np.testing.assert_allclose(sol.rule.rows, [[1, 0], [1, 0]], atol=1e-6)
        assert format_rule(sol.rule) == "δ00"

    def test_infinite_loss_avoided(self):
        credal = marginal_fixed_credal(FiniteDistribution.binary(0.5), 2)
        loss = LossSpec([[0.0, np.inf], [1.0, 0.0]])
        sol = global_minimax_rule(credal, loss)
        assert sol.value == pytest.approx(0.5)
        np.testing.assert_allclose(sol.rule.rows[:, 1], 0.0)

    def test_vertex_costs_sum_to_expected_loss(self):
        credal = marginal_fixed_credal(FiniteDistribution.binary(0.3), 3)
        loss = zero_one_loss()
        rule = DecisionRule([[0.2, 0.8], [1.0, 0.0], [0.5, 0.5]])
        costs = vertex_costs(credal, loss)
        for v, vertex in enumerate(credal.vertices):
            assert (costs[v] * rule.rows).sum() == pytest.approx(expected_loss(vertex, rule, loss))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            vertex_costs(marginal_fixed_credal(FiniteDistribution.uniform(3), 2), zero_one_loss(2))


class TestMatrixGames:
    def test_matching_pennies(self):
        sol = solve_matrix_game(MatrixGame([[1, 0], [0, 1]]))
        assert sol.value == pytest.approx(0.5)
        np.testing.assert_allclose(sol.row_mixture.weights, [0.5, 0.5], atol=1e-9)

    def test_saddle_point(self):
        sol = solve_matrix_game(MatrixGame([[3, 2], [4, 5]]))
        assert sol.value == pytest.approx(3.0)
        np.testing.assert_allclose(sol.row_mixture.weights, [1, 0], atol=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_against_grid_search(self, seed):
        payoff = np.random.default_rng(seed).uniform(-1, 1, (3, 3))
        sol = solve_matrix_game(MatrixGame(payoff))
        grid = matrix_game_grid(payoff)
        assert sol.value <= grid + 1e-9
        assert grid - sol.value <= 1e-3
        # both mixtures certify the value
        assert (sol.row_mixture.weights @ payoff).max() == pytest.approx(sol.value, abs=1e-9)
        assert (payoff @ sol.column_mixture.weights).min() == pytest.approx(sol.value, abs=1e-9)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            MatrixGame([[np.inf, 0]])


class TestLocalAndConsistency:
    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7])
    def test_zero_one_local_mixture(self, p):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        for x in range(2):
            loc = local_minimax_action(credal, x, zero_one_loss())
            np.testing.assert_allclose(loc.mixture.weights, [0.5, 0.5], atol=1e-6)
            assert loc.value == pytest.approx(0.5, abs=1e-6)

    def test_local_game_shape(self):
        credal = marginal_fixed_credal(FiniteDistribution.binary(0.3), 2)
        assert local_game(credal, 0, zero_one_loss()).payoff.shape == (2, 3)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.7, 0.9])
    def test_zero_one_time_inconsistent(self, p):
        # the global rule is a constant action, which loses 1 against the worst
        # conditional; local play guarantees 1/2
        rep = time_inconsistency_report(marginal_fixed_credal(FiniteDistribution.binary(p), 2), zero_one_loss())
        assert rep.consistent is False
        assert rep.global_row_local_value == pytest.approx((1.0, 1.0))

    @pytest.mark.parametrize("p", [0.4, 0.5, 0.6])
    def test_Lprime_consistent_in_middle(self, p):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        rep = time_inconsistency_report(credal, mismatch_scaled_loss())
        assert rep.consistent
        for x, loc in enumerate(rep.local):
            assert loc.mixture[x] == pytest.approx(1 / 3, abs=1e-6)

    def test_local_rule_rows(self):
        credal = marginal_fixed_credal(FiniteDistribution.binary(0.5), 2)
        rule = local_minimax_rule(credal, mismatch_scaled_loss())
        np.testing.assert_allclose(rule.rows, [[1 / 3, 2 / 3], [2 / 3, 1 / 3]], atol=1e-6)

    def test_uncharged_observation_skipped(self):
        j = JointDistribution([[0.5, 0.5], [0.0, 0.0]])
        rep = time_inconsistency_report(CredalSet.singleton(j), zero_one_loss())
        assert rep.local[1] is None and rep.consistent


class TestDecomposition:
    def test_recomposes(self):
        rule = DecisionRule([[0.2, 0.8], [0.7, 0.3], [0.5, 0.5]])
        terms = decompose_rule(rule)
        total = sum(w * DecisionRule.deterministic(acts, 2).rows for w, acts in terms)
        np.testing.assert_allclose(total, rule.rows, atol=1e-12)
        assert sum(w for w, _ in terms) == pytest.approx(1.0)

    def test_format_irrational_weight(self):
        w = 1 / np.sqrt(2)
        assert format_rule(DecisionRule([[w, 1 - w]])) == "(0.7071)δ0+(0.2929)δ1"
