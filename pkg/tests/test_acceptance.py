"""Acceptance criteria 1-9.

Each test records one PASS/FAIL line (printed in the terminal summary) and
then asserts. Run directly with ``python tests/test_acceptance.py`` to get
only the summary lines.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from credalkit.bayes import (
    ContingencyCounts,
    beta_by_sequences,
    beta_probability,
    hierarchical_prior,
    integration_oracle,
    jeffreys_prior,
    predictive_odds,
    predictive_probability,
    uniform_predictive_odds,
    uniform_prior,
)
from credalkit.credal import detect_dilation, marginal_fixed_credal
from credalkit.decision import (
    DecisionRule,
    LossSpec,
    action_losses,
    asymmetric_loss,
    expected_loss,
    mismatch_scaled_loss,
    observation_scaled_loss,
    reliability_gap,
    zero_one_loss,
)
from credalkit.experiments import IGNORE, StrategyId, strategy_expected_loss
from credalkit.minimax import (
    MatrixGame,
    deterministic_minimax,
    global_minimax_rule,
    local_minimax_action,
    solve_matrix_game,
    time_inconsistency_report,
)
from credalkit.probspace import FiniteDistribution, JointDistribution, correlated_joint, independent_joint

from conftest import ACCEPTANCE
from oracles import matrix_game_grid


def record(number: int, failures: list[str], detail: str) -> None:
    passed = not failures
    ACCEPTANCE[number] = (passed, detail if passed else "; ".join(failures))
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {ACCEPTANCE[number][1]}")
    assert passed, "; ".join(failures)


def bounded_prior(rng: np.random.Generator, my: int) -> FiniteDistribution:
    while True:
        w = rng.dirichlet(np.ones(my))
        if ((w > 0.05) & (w < 0.95)).all():
            w[-1] = 1.0 - w[:-1].sum()
            return FiniteDistribution(w)


def test_criterion_1_observation_is_worthless():
    rng = np.random.default_rng(2024)
    failures, worst = [], 0.0
    for i in range(100):
        mx, my, na = (int(v) for v in rng.integers(1, 4, size=3))
        my = max(my, 2)
        prior = bounded_prior(rng, my)
        loss = LossSpec(rng.uniform(0, 1, (my, na)))
        value = global_minimax_rule(marginal_fixed_credal(prior, mx), loss).value
        err = abs(value - action_losses(prior, loss).min())
        worst = max(worst, err)
        if err > 1e-6:
            failures.append(f"instance {i}: error {err:.2e}")
    record(1, failures, f"100 instances, max error {worst:.1e}")


def test_criterion_2_zero_one_loss():
    failures = []
    for p in (0.1, 0.3, 0.5, 0.7):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        loss = zero_one_loss()
        g = global_minimax_rule(credal, loss)
        if abs(g.value - min(p, 1 - p)) > 1e-9:
            failures.append(f"p={p}: global value {g.value}")
        for x in range(2):
            loc = local_minimax_action(credal, x, loss)
            if np.abs(loc.mixture.weights - 0.5).max() > 1e-6 or abs(loc.value - 0.5) > 1e-6:
                failures.append(f"p={p}, x={x}: local {loc.mixture.weights}, {loc.value}")
        rep = detect_dilation(credal, [1])
        if not rep.dilated:
            failures.append(f"p={p}: no dilation")
        if p != 0.5 and time_inconsistency_report(credal, loss).consistent:
            failures.append(f"p={p}: reported time consistent")
    record(2, failures, "global min(p,1-p), local (1/2,1/2), dilation, inconsistency")


def test_criterion_3_single_observation_predictive():
    failures = []
    one = ContingencyCounts([[0, 0], [0, 1]])
    for p in (0.2, 0.5, 0.8):
        prior = uniform_prior(p, 2)
        closed = 4 * p / (p + 3)
        got = predictive_probability(prior, one, 1)
        if abs(got - closed) > 1e-12:
            failures.append(f"p={p}: {got} vs 4p/(p+3)={closed}")
        oracle = integration_oracle(prior, one, 1)
        if abs(oracle - closed) > 1e-3:
            failures.append(f"p={p}: oracle {oracle}")
        if predictive_probability(prior, ContingencyCounts.empty(2), 1) != pytest.approx(p, abs=0.0):
            failures.append(f"p={p}: empty-counts predictive is not p")
    record(3, failures, "4p/(p+3) exact and within 1e-3 of quadrature; empty counts give p")


def test_criterion_4_bayesian_misprediction():
    failures = []
    loss = asymmetric_loss(1.4)
    prior = uniform_prior(0.5, 2)
    beta = beta_probability(independent_joint([0.5, 0.5], [0.5, 0.5]), 4, loss, prior)
    assert beta.exact
    if not 0.33 <= beta.value <= 0.37:
        failures.append(f"beta = {beta.value:.6f} outside [0.33, 0.37]")
    rel = beta.value * (1.4 - 1) / 2 / 0.5
    if not 0.13 <= rel <= 0.15:
        failures.append(f"relative gap = {rel:.4%} outside [13%, 15%]")
    cor = correlated_joint(0.5)
    b = strategy_expected_loss(cor, StrategyId.parse("bayes(uniform)"), 4, loss).value
    i = strategy_expected_loss(cor, IGNORE, 4, loss).value
    if b != 0.0 or i != 0.5 or i - b != 0.5:
        failures.append(f"correlated: bayes {b}, ignore {i}")
    record(4, failures, f"beta = {beta.value:.6f}, relative gap {rel:.2%}, correlated gap 0.5")


def test_criterion_5_observation_dependent_losses():
    failures = []
    L, Lp = observation_scaled_loss(), mismatch_scaled_loss()
    for p in (0.2, 0.8):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        g = global_minimax_rule(credal, L)
        a = int(p > 0.5)
        if np.abs(g.rule.rows - DecisionRule.constant(a, 2, 2).rows).max() > 1e-6:
            failures.append(f"L, p={p}: rule {g.rule.rows.tolist()}")
        if abs(g.value - 2 * min(p, 1 - p)) > 1e-7:
            failures.append(f"L, p={p}: value {g.value}")
        if abs(deterministic_minimax(credal, L)[0] - g.value) > 1e-7:
            failures.append(f"L, p={p}: deterministic enumeration differs")
    for p in (0.4, 0.5, 0.6):
        credal = marginal_fixed_credal(FiniteDistribution.binary(p), 2)
        rep = time_inconsistency_report(credal, Lp)
        g = rep.global_solution
        if abs(g.value - 2 / 3) > 1e-6:
            failures.append(f"L', p={p}: value {g.value}")
        if np.abs(g.rule.rows - [[1 / 3, 2 / 3], [2 / 3, 1 / 3]]).max() > 1e-6:
            failures.append(f"L', p={p}: rule {g.rule.rows.tolist()}")
        for x, loc in enumerate(rep.local):
            if abs(loc.mixture[x] - 1 / 3) > 1e-6:
                failures.append(f"L', p={p}, x={x}: local weight {loc.mixture[x]}")
        if not rep.consistent:
            failures.append(f"L', p={p}: reported time inconsistent")
        if p != 0.5 and time_inconsistency_report(credal, zero_one_loss()).consistent:
            failures.append(f"0/1, p={p}: reported time consistent")
    g = global_minimax_rule(marginal_fixed_credal(FiniteDistribution.binary(0.2), 2), Lp)
    if abs(g.value - 0.4) > 1e-6 or np.abs(g.rule.rows - [[1, 0], [1, 0]]).max() > 1e-6:
        failures.append(f"L', p=0.2: value {g.value}, rule {g.rule.rows.tolist()}")
    record(5, failures, "L constant rule; L' mixture (1/3,2/3) at value 2/3; consistency flags")


def test_criterion_6_reliability():
    rng = np.random.default_rng(6)
    failures, worst = [], 0.0
    for i in range(50):
        mx, my, na = int(rng.integers(1, 4)), int(rng.integers(2, 4)), int(rng.integers(1, 4))
        prior = bounded_prior(rng, my)
        loss = LossSpec(rng.uniform(0, 1, (my, na)))
        gap = reliability_gap(marginal_fixed_credal(prior, mx), prior, loss)
        worst = max(worst, gap)
        if gap > 1e-12:
            failures.append(f"instance {i}: gap {gap:.2e}")
    record(6, failures, f"50 sets, max gap {worst:.1e}")


def test_criterion_7_prior_identities():
    failures = []
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = int(rng.integers(2, 5))
        p = float(rng.uniform(0.05, 0.95))
        counts = ContingencyCounts(rng.integers(0, 10, size=(m, 2)))
        k = int(rng.integers(0, m))
        a = uniform_predictive_odds(p, counts, k)
        b = predictive_odds(uniform_prior(p, m), counts, k)
        if abs(a - b) > 1e-12 * max(1.0, abs(b)):
            failures.append(f"shortcut {a} vs general {b}")
    for m in (2, 3, 5):
        j = jeffreys_prior(0.3, m)
        if set(j.a) | set(j.b) != {0.5}:
            failures.append(f"Jeffreys parameters {j.a}, {j.b}")
        for k in range(m):
            h = predictive_probability(hierarchical_prior(0.3, m), ContingencyCounts.empty(m), k)
            if abs(h - 0.3) > 1e-12:
                failures.append(f"hierarchical empty-counts predictive {h}")
    record(7, failures, "uniform shortcut = general odds; Jeffreys all 1/2; hierarchical(empty) = p")


def test_criterion_8_learning():
    failures = []
    joint = independent_joint([0.5, 0.5], [0.5, 0.5])
    loss, prior = asymmetric_loss(1.4), uniform_prior(0.5, 2)
    b4 = beta_probability(joint, 4, loss, prior)
    b64 = beta_probability(joint, 64, loss, prior)
    margin = 4 * (b4.stderr + b64.stderr)
    if not b64.value + 4 * b64.stderr < 0.1:
        failures.append(f"beta(64) = {b64.value:.4f} not below 0.1")
    if not b64.value + margin < b4.value:
        failures.append(f"beta(64) = {b64.value:.4f} not below beta(4) = {b4.value:.4f}")
    record(8, failures, f"beta(4) = {b4.value:.4f}, beta(64) = {b64.value:.4f} (exact)")


def test_criterion_9_oracles():
    failures = []
    rng = np.random.default_rng(9)
    for i in range(20):
        payoff = rng.uniform(-1, 1, (3, 3))
        v = solve_matrix_game(MatrixGame(payoff)).value
        g = matrix_game_grid(payoff)
        if abs(v - g) > 1e-3:
            failures.append(f"game {i}: {v} vs grid {g}")

    table = rng.dirichlet(np.ones(6)).reshape(3, 2)
    table[-1, -1] = 1.0 - table.sum() + table[-1, -1]
    joint = JointDistribution(table)
    rows = rng.dirichlet(np.ones(2), size=3)
    rows[:, 1] = 1.0 - rows[:, 0]
    loss = LossSpec(rng.uniform(0, 1, (3, 2, 2)), observation_dependent=True)
    exact = expected_loss(joint, DecisionRule(rows), loss)
    n = 200_000
    xs, ys = np.divmod(rng.choice(6, size=n, p=table.reshape(-1)), 2)
    acts = (rng.random(n) < rows[xs, 1]).astype(int)
    samples = loss.table[xs, ys, acts]
    se = samples.std(ddof=1) / math.sqrt(n)
    if abs(samples.mean() - exact) > 3 * se:
        failures.append(f"expected loss {exact} vs Monte Carlo {samples.mean()} (se {se:.1e})")

    ind = independent_joint([0.5, 0.5], [0.5, 0.5])
    skew = JointDistribution([[0.1, 0.3], [0.4, 0.2]])
    for j in (ind, skew):
        for n_ in range(5):
            for prior in (uniform_prior(0.5, 2), jeffreys_prior(0.5, 2)):
                a = beta_probability(j, n_, asymmetric_loss(1.4), prior).value
                b = beta_by_sequences(j, n_, asymmetric_loss(1.4), prior)
                if abs(a - b) > 1e-15:
                    failures.append(f"n={n_}: counts {a!r} vs sequences {b!r}")
    record(9, failures, "matrix games vs grid, expected loss vs Monte Carlo, counts vs sequences")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    status = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            status = 1
    sys.exit(status)
