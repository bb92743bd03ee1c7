"""
Worst-case expected loss and minimax decision making against credal sets.

Global minimax picks a whole decision rule before anything is observed;
local minimax picks an action mixture after observing ``x``, against the
conditional credal set. Both reduce to the same linear program over
per-observation action mixtures::

    minimize t
    s.t.     sum_{x,a} cost[v, x, a] * rule[x, a] <= t    for every vertex v
             sum_a rule[x, a] = 1                          for every x
             rule >= 0

where ``cost[v, x, a] = sum_y Pr_v(x, y) loss(x, y, a)``. ``E_Pr[L_rule]``
is linear in ``Pr``, so the supremum over the convex hull of the vertices
equals the maximum over the vertices themselves; only vertex constraints
are needed.

Every solution is certified by weak duality: the returned rule's worst case
(an upper bound) and the value guaranteed by the dual vertex mixture (a
lower bound) must agree to within the tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike, NDArray

from credalkit.credal import CredalSet, conditional_credal
from credalkit.decision import DecisionRule, LossSpec, expected_loss
from credalkit.errors import DimensionMismatch, EverywhereZeroMass, NumericalFailure
from credalkit.lp import linprog_min
from credalkit.probspace import FiniteDistribution

CERT_TOL = 1e-9


@dataclass(frozen=True)
class MatrixGame:
    """Zero-sum game; rows minimize, columns maximize, entries are losses."""

    payoff: NDArray[np.float64]

    def __init__(self, payoff: ArrayLike):
        arr = np.array(payoff, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionMismatch(f"payoff must be a non-empty matrix, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("payoff entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "payoff", arr)


@dataclass(frozen=True)
class GameSolution:
    row_mixture: FiniteDistribution
    column_mixture: FiniteDistribution
    value: float


@dataclass(frozen=True)
class MinimaxSolution:
    rule: DecisionRule
    value: float
    worst_case_vertices: tuple[int, ...]
    lower_bound: float = field(default=float("nan"))


@dataclass(frozen=True)
class LocalSolution:
    x: int
    mixture: FiniteDistribution
    value: float


@dataclass(frozen=True)
class TimeConsistencyReport:
    global_solution: MinimaxSolution
    local: tuple[LocalSolution | None, ...]
    global_row_local_value: tuple[float | None, ...]
    consistent: bool


def vertex_costs(credal: CredalSet, loss: LossSpec) -> NDArray[np.float64]:
    """``cost[v, x, a]``: expected loss contributed at ``x`` by action ``a`` under vertex ``v``."""
    if loss.my != credal.my:
        raise DimensionMismatch(f"loss has {loss.my} outcomes, credal set has {credal.my}")
    full = loss.full(credal.mx)
    tables = credal.tables()
    weights = tables[:, :, :, None]
    charged = np.broadcast_to(weights > 0, weights.shape[:3] + (loss.n_actions,))
    prod = np.where(charged, weights * np.where(charged, full[None], 0.0), 0.0)
    return prod.sum(axis=2)


def worst_case_expected_loss(
    credal: CredalSet, rule: DecisionRule, loss: LossSpec
) -> tuple[float, int]:
    """Maximum of ``E_Pr[L_rule]`` over the vertices; ties go to the lowest index."""
    values = [expected_loss(v, rule, loss) for v in credal.vertices]
    best = int(np.argmax(values))
    return float(values[best]), best


def _solve_lp(cost: NDArray[np.float64], perturb: NDArray[np.float64] | None = None):
    """Primal and dual minimax programs for ``cost[v, x, a]`` (all finite).

    Returns ``(rule_rows, vertex_weights)``.
    """
    V, mx, A = cost.shape
    shift = cost.min(axis=(0, 2))
    shifted = cost - shift[None, :, None]
    nvar = mx * A

    # primal: variables rule[x, a] then t
    c = np.zeros(nvar + 1)
    c[-1] = 1.0
    if perturb is not None:
        c[:nvar] += perturb
    A_ub = np.hstack([shifted.reshape(V, nvar), -np.ones((V, 1))])
    A_eq = np.zeros((mx, nvar + 1))
    for x in range(mx):
        A_eq[x, x * A : (x + 1) * A] = 1.0
    primal = linprog_min(c, A_ub, np.zeros(V), A_eq, np.ones(mx))
    rows = primal.x[:nvar].reshape(mx, A)

    # dual: variables q[v] then s[x]; maximize sum s
    c_d = np.concatenate([np.zeros(V), -np.ones(mx)])
    A_ub_d = np.zeros((mx * A, V + mx))
    for x in range(mx):
        for a in range(A):
            A_ub_d[x * A + a, :V] = -shifted[:, x, a]
            A_ub_d[x * A + a, V + x] = 1.0
    A_eq_d = np.concatenate([np.ones(V), np.zeros(mx)])[None, :]
    dual = linprog_min(c_d, A_ub_d, np.zeros(mx * A), A_eq_d, np.ones(1))
    q = dual.x[:V]
    return rows, q


def _clean(weights: NDArray[np.float64], axis: int = -1) -> NDArray[np.float64]:
    w = np.clip(weights, 0.0, None)
    w[w < 1e-15] = 0.0
    return w / w.sum(axis=axis, keepdims=True)


def _certify(cost: NDArray[np.float64], rows: NDArray[np.float64], q: NDArray[np.float64]):
    upper = float((cost * rows[None]).sum(axis=(1, 2)).max())
    lower = float(np.tensordot(q, cost, axes=1).min(axis=1).sum())
    return upper, lower


def _minimax_over_costs(cost: NDArray[np.float64], tol: float, seed: int = 0):
    """Solve and certify; one retry with a perturbed objective, then fail."""
    attempts = [None, np.random.default_rng(seed).uniform(0, 1e-10, cost.shape[1] * cost.shape[2])]
    for perturb in attempts:
        rows, q = _solve_lp(cost, perturb)
        rows, q = _clean(rows), _clean(q)
        upper, lower = _certify(cost, rows, q)
        if upper - lower <= tol * max(1.0, abs(upper)):
            return rows, q, upper, lower
    raise NumericalFailure(f"minimax certificate failed: upper {upper!r} vs lower {lower!r}")


def solve_matrix_game(game: MatrixGame, tolerance: float = CERT_TOL) -> GameSolution:
    """Optimal mixed strategies and value of a zero-sum game (row player minimizes)."""
    cost = game.payoff.T[:, None, :]  # [column, 1, row]
    rows, q, upper, lower = _minimax_over_costs(cost, tolerance)
    row_mix = rows[0]
    # certificate in the matrix-game form
    if (row_mix @ game.payoff).max() > upper + tolerance or (game.payoff @ q).min() < lower - tolerance:
        raise NumericalFailure("matrix game certificate failed")
    return GameSolution(FiniteDistribution(row_mix), FiniteDistribution(q), upper)


def global_minimax_rule(
    credal: CredalSet, loss: LossSpec, tolerance: float = CERT_TOL
) -> MinimaxSolution:
    """Decision rule minimizing the worst-case expected loss over ``credal``."""
    cost = vertex_costs(credal, loss)
    mx, A = cost.shape[1], cost.shape[2]
    # an action whose cost is infinite under some vertex is never worth playing
    allowed = np.isfinite(cost).all(axis=0)
    dead = ~allowed.any(axis=1)
    if dead.any():
        rule = DecisionRule.constant(0, mx, A)
        value, _ = worst_case_expected_loss(credal, rule, loss)
        return MinimaxSolution(rule, value, tuple(range(len(credal))), value)

    big = np.where(allowed[None], cost, 0.0)
    if not allowed.all():
        # exclude forbidden actions by pricing them above any finite alternative
        penalty = 1.0 + np.abs(big).sum() * 2
        big = np.where(allowed[None], cost, penalty)
    rows, q, upper, lower = _minimax_over_costs(big, tolerance)
    rows[~allowed] = 0.0
    rows = _clean(rows)
    rule = DecisionRule(rows)
    values = np.array([expected_loss(v, rule, loss) for v in credal.vertices])
    value = float(values.max())
    if value - lower > tolerance * max(1.0, abs(value)):
        raise NumericalFailure(f"global minimax certificate failed: {value!r} vs {lower!r}")
    worst = tuple(int(i) for i in np.flatnonzero(values >= value - 1e-9))
    return MinimaxSolution(rule, value, worst, lower)


def local_game(credal: CredalSet, x: int, loss: LossSpec) -> MatrixGame:
    """Rows are actions, columns are conditional vertices at ``x``."""
    conditionals = conditional_credal(credal, x)
    slice_ = loss.at(x)
    payoff = np.array([[d.expect(slice_[:, a]) for d in conditionals] for a in range(loss.n_actions)])
    return MatrixGame(payoff)


def local_minimax_action(
    credal: CredalSet, x: int, loss: LossSpec, tolerance: float = CERT_TOL
) -> LocalSolution:
    """Minimax action mixture against the conditional credal set at ``x``."""
    sol = solve_matrix_game(local_game(credal, x, loss), tolerance)
    return LocalSolution(x, sol.row_mixture, sol.value)


def local_minimax_rule(credal: CredalSet, loss: LossSpec) -> DecisionRule:
    """Rule that plays the local minimax mixture at each observation.

    Observations that no vertex charges get the first action.
    """
    rows = []
    for x in range(credal.mx):
        try:
            rows.append(local_minimax_action(credal, x, loss).mixture.weights)
        except EverywhereZeroMass:
            rows.append(np.eye(loss.n_actions)[0])
    return DecisionRule(np.vstack(rows))


def time_inconsistency_report(
    credal: CredalSet, loss: LossSpec, atol: float = 1e-6
) -> TimeConsistencyReport:
    """Compare the global minimax rule with local minimax play.

    Local optima need not be unique, so the global row at ``x`` counts as
    consistent when it attains the local minimax value at ``x``.
    Observations no vertex charges are skipped.
    """
    glob = global_minimax_rule(credal, loss)
    local: list[LocalSolution | None] = []
    achieved: list[float | None] = []
    consistent = True
    for x in range(credal.mx):
        try:
            game = local_game(credal, x, loss)
        except EverywhereZeroMass:
            local.append(None)
            achieved.append(None)
            continue
        sol = solve_matrix_game(game)
        local.append(LocalSolution(x, sol.row_mixture, sol.value))
        worst = float((glob.rule.rows[x] @ game.payoff).max())
        achieved.append(worst)
        if worst > sol.value + atol:
            consistent = False
    return TimeConsistencyReport(glob, tuple(local), tuple(achieved), consistent)


def deterministic_minimax(credal: CredalSet, loss: LossSpec, limit: int = 10**4):
    """Best worst case over deterministic rules only, by enumeration.

    Returns ``(value, actions)``; used as an independent check on the LP.
    """
    A, mx = loss.n_actions, credal.mx
    if A**mx > limit:
        raise ValueError(f"{A}**{mx} deterministic rules exceed limit {limit}")
    cost = vertex_costs(credal, loss)
    best, best_actions = np.inf, None
    for actions in itertools.product(range(A), repeat=mx):
        worst = cost[:, np.arange(mx), list(actions)].sum(axis=1).max()
        if worst < best:
            best, best_actions = float(worst), actions
    return best, best_actions


def decompose_rule(rule: DecisionRule, atol: float = 1e-9) -> list[tuple[float, tuple[int, ...]]]:
    """Write a randomized rule as a mixture of deterministic rules.

    Greedy: repeatedly take the deterministic rule whose smallest row
    probability is largest, with that weight. Terms come back sorted by the
    action tuple.
    """
    rows = np.array(rule.rows, dtype=float)
    terms: list[tuple[float, tuple[int, ...]]] = []
    remaining = 1.0
    while remaining > atol:
        actions = tuple(int(np.argmax(r)) for r in rows)
        weight = float(min(rows[x, a] for x, a in enumerate(actions)))
        if weight <= atol:
            break
        terms.append((weight, actions))
        for x, a in enumerate(actions):
            rows[x, a] -= weight
        remaining -= weight
    return sorted(terms, key=lambda t: t[1])


def format_rule(rule: DecisionRule) -> str:
    """Human readable mixture, e.g. ``(1/3)δ01+(2/3)δ10``."""
    parts = []
    for weight, actions in decompose_rule(rule):
        label = "δ" + "".join(str(a) for a in actions)
        frac = Fraction(weight).limit_denominator(1000)
        if abs(float(frac) - weight) < 1e-6:
            if frac == 1:
                parts.append(label)
                continue
            w = f"{frac.numerator}/{frac.denominator}"
        else:
            w = f"{weight:.4f}"
        parts.append(f"({w}){label}")
    return "+".join(parts)
