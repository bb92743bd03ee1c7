"""
Loss functions, randomized decision rules and expected loss.

Two loss layouts are supported:

* observation independent: ``table[y, a]`` (truth first, then action);
* observation dependent: ``table[x, y, a]``, so that fixing ``x`` gives an
  ordinary ``[y, a]`` slice.

Losses may be ``+inf``. In expectations ``0 * inf`` is taken to be ``0``:
an infinite cell only matters when it carries positive probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from credalkit.errors import DimensionMismatch, InvalidDistribution, MarginalMismatch
from credalkit.probspace import TOLERANCE, FiniteDistribution, JointDistribution, marginal_y

if TYPE_CHECKING:
    from credalkit.credal import CredalSet


@dataclass(frozen=True, eq=False)
class LossSpec:
    """Loss table, either ``[y, a]`` or ``[x, y, a]``."""

    table: NDArray[np.float64]
    observation_dependent: bool = False
    name: str = "custom"

    def __init__(self, table: ArrayLike, observation_dependent: bool = False, name: str = "custom"):
        arr = np.array(table, dtype=float)
        want = 3 if observation_dependent else 2
        if arr.ndim != want:
            raise DimensionMismatch(f"loss table must be {want}-d, got shape {arr.shape}")
        if arr.size == 0:
            raise DimensionMismatch("empty loss table")
        if np.isnan(arr).any():
            raise ValueError("NaN in loss table")
        if np.isneginf(arr).any():
            raise ValueError("-inf is not an allowed loss")
        arr.flags.writeable = False
        object.__setattr__(self, "table", arr)
        object.__setattr__(self, "observation_dependent", observation_dependent)
        object.__setattr__(self, "name", name)

    @property
    def n_actions(self) -> int:
        return self.table.shape[-1]

    @property
    def my(self) -> int:
        return self.table.shape[-2]

    def at(self, x: int) -> NDArray[np.float64]:
        """The ``[y, a]`` slice that applies when ``x`` is observed."""
        return self.table[x] if self.observation_dependent else self.table

    def full(self, mx: int) -> NDArray[np.float64]:
        """Loss broadcast to ``[x, y, a]``."""
        if self.observation_dependent:
            if self.table.shape[0] != mx:
                raise DimensionMismatch(
                    f"loss is defined for {self.table.shape[0]} observations, not {mx}"
                )
            return self.table
        return np.broadcast_to(self.table, (mx,) + self.table.shape)

    def scaled(self, c: float) -> LossSpec:
        return LossSpec(self.table * c, self.observation_dependent, f"{c}*{self.name}")

    def __repr__(self) -> str:
        kind = "dependent" if self.observation_dependent else "independent"
        return f"LossSpec({self.name}, {kind}, shape={self.table.shape})"


def zero_one_loss(m: int = 2) -> LossSpec:
    """Classification loss ``|y - a|`` style: 0 if right, 1 otherwise."""
    return LossSpec(1.0 - np.eye(m), name="zero-one")


def asymmetric_loss(alpha: float) -> LossSpec:
    """Binary prediction loss: predicting 1 when the truth is 0 costs ``alpha``,
    predicting 0 when the truth is 1 costs 1."""
    return LossSpec([[0.0, alpha], [1.0, 0.0]], name=f"L_alpha({alpha})")


def observation_scaled_loss() -> LossSpec:
    """``(x + 1) |a - y|``: mistakes after seeing ``x = 1`` cost double."""
    t = np.array([[[(x + 1) * abs(a - y) for a in (0, 1)] for y in (0, 1)] for x in (0, 1)])
    return LossSpec(t, observation_dependent=True, name="example-4.1-L")


def mismatch_scaled_loss() -> LossSpec:
    """``(|x - y| + 1) |a - y|``: mistakes cost double when ``x != y``."""
    t = np.array(
        [[[(abs(x - y) + 1) * abs(a - y) for a in (0, 1)] for y in (0, 1)] for x in (0, 1)]
    )
    return LossSpec(t, observation_dependent=True, name="example-4.1-Lprime")


@dataclass(frozen=True, eq=False)
class DecisionRule:
    """Randomized rule: ``rows[x, a]`` is the probability of action ``a`` after ``x``."""

    rows: NDArray[np.float64]

    def __init__(self, rows: ArrayLike):
        arr = np.array(rows, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionMismatch(f"rule must be a non-empty matrix, got shape {arr.shape}")
        if np.isnan(arr).any() or (arr < 0).any():
            raise InvalidDistribution("rule has negative or NaN entries")
        if (np.abs(arr.sum(axis=1) - 1.0) > TOLERANCE).any():
            raise InvalidDistribution(f"rule rows must sum to 1: {arr.sum(axis=1).tolist()}")
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)

    @classmethod
    def constant(cls, action: int, mx: int, n_actions: int) -> DecisionRule:
        rows = np.zeros((mx, n_actions))
        rows[:, action] = 1.0
        return cls(rows)

    @classmethod
    def deterministic(cls, actions: Sequence[int], n_actions: int) -> DecisionRule:
        rows = np.zeros((len(actions), n_actions))
        rows[np.arange(len(actions)), list(actions)] = 1.0
        return cls(rows)

    @classmethod
    def from_mixtures(cls, mixtures: Sequence[FiniteDistribution]) -> DecisionRule:
        return cls(np.vstack([m.weights for m in mixtures]))

    @property
    def mx(self) -> int:
        return self.rows.shape[0]

    @property
    def n_actions(self) -> int:
        return self.rows.shape[1]

    def row(self, x: int) -> FiniteDistribution:
        return FiniteDistribution(self.rows[x])

    def is_deterministic(self) -> bool:
        return bool(np.all((self.rows == 0.0) | (self.rows == 1.0)))

    def __repr__(self) -> str:
        return f"DecisionRule({self.rows.tolist()})"


def mix_rules(first: DecisionRule, second: DecisionRule, lam: float) -> DecisionRule:
    """Row-wise mixture ``lam * first + (1 - lam) * second``."""
    return DecisionRule(lam * first.rows + (1.0 - lam) * second.rows)


def _weighted_sum(weights: NDArray[np.float64], losses: NDArray[np.float64]) -> float:
    # 0 * inf := 0
    charged = weights > 0
    if not charged.any():
        return 0.0
    return float(np.sum(weights[charged] * losses[charged]))


def expected_loss(joint: JointDistribution, rule: DecisionRule, loss: LossSpec) -> float:
    """``sum_{x,y} Pr(x, y) sum_a rule(x)(a) loss(x, y, a)``."""
    if rule.mx != joint.mx:
        raise DimensionMismatch(f"rule has {rule.mx} rows, joint has {joint.mx} observations")
    if loss.my != joint.my or loss.n_actions != rule.n_actions:
        raise DimensionMismatch(
            f"loss shape {loss.table.shape} incompatible with joint {joint.shape} "
            f"and rule {rule.rows.shape}"
        )
    full = loss.full(joint.mx)
    weights = joint.table[:, :, None] * rule.rows[:, None, :]
    return _weighted_sum(weights, full)


def action_losses(prior_y: FiniteDistribution, loss: LossSpec) -> NDArray[np.float64]:
    """``E_{prior}[L_a]`` for every action ``a``."""
    _require_independent(loss)
    if loss.my != len(prior_y):
        raise DimensionMismatch(f"loss has {loss.my} outcomes, prior has {len(prior_y)}")
    return np.array(
        [_weighted_sum(prior_y.weights, loss.table[:, a]) for a in range(loss.n_actions)]
    )


def optimal_action(prior_y: FiniteDistribution, loss: LossSpec) -> tuple[int, float]:
    """Action of least expected loss under ``prior_y``; ties go to the lowest index."""
    values = action_losses(prior_y, loss)
    best = int(np.argmin(values))
    return best, float(values[best])


def ignore_rule(prior_y: FiniteDistribution, loss: LossSpec, mx: int) -> DecisionRule:
    """The rule that plays the prior-optimal action whatever is observed."""
    action, _ = optimal_action(prior_y, loss)
    return DecisionRule.constant(action, mx, loss.n_actions)


def reliability_gap(credal: CredalSet, prior_y: FiniteDistribution, loss: LossSpec) -> float:
    """Largest discrepancy between the self-assessed loss of the ignoring
    action and its true expected loss, over all vertices of ``credal``.

    Every vertex must have Y-marginal ``prior_y``; the result is then zero up
    to rounding.
    """
    _require_independent(loss)
    for i, vertex in enumerate(credal.vertices):
        if not marginal_y(vertex).allclose(prior_y, atol=1e-9):
            raise MarginalMismatch(f"vertex {i} has Y-marginal {marginal_y(vertex)!r}")
    action, assessed = optimal_action(prior_y, loss)
    rule = DecisionRule.constant(action, credal.mx, loss.n_actions)
    gaps = [abs(expected_loss(v, rule, loss) - assessed) for v in credal.vertices]
    gaps = [0.0 if np.isnan(g) else g for g in gaps]  # inf - inf
    return float(max(gaps))


def _require_independent(loss: LossSpec) -> None:
    if loss.observation_dependent:
        raise ValueError(f"{loss.name} depends on the observation; an L(y, a) table is required")
