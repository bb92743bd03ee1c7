"""
Finite probability spaces.

Outcomes are integer indexed ``0..M-1``. A joint distribution over
``X x Y`` is stored as a matrix ``table[x, y]``; rows are observations,
columns are values of the variable of interest.

Inputs are validated to a tolerance of ``1e-12`` and never renormalized
silently: a table that does not sum to one is rejected.

Examples
--------
>>> joint = make_joint(0.3, [0.2, 0.8], [0.8, 0.2])
>>> marginal_y(joint).weights.tolist()
[0.7, 0.3]
>>> round(condition_on_x(joint, 1)[1], 6)
0.631579
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from credalkit.errors import DegenerateMarginal, InvalidDistribution, ZeroMassEvent

TOLERANCE = 1e-12


def _frozen(values: ArrayLike, ndim: int) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidDistribution(f"expected a {ndim}-d array, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidDistribution("distribution has no outcomes")
    if np.isnan(arr).any():
        raise InvalidDistribution("NaN probability")
    if (arr < 0).any():
        raise InvalidDistribution(f"negative probability in {arr.tolist()}")
    total = arr.sum()
    if abs(total - 1.0) > TOLERANCE:
        raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """Distribution over ``{0, ..., M-1}``."""

    weights: NDArray[np.float64]

    def __init__(self, weights: ArrayLike):
        object.__setattr__(self, "weights", _frozen(weights, 1))

    @classmethod
    def point_mass(cls, outcome: int, size: int) -> FiniteDistribution:
        w = np.zeros(size)
        w[outcome] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, size: int) -> FiniteDistribution:
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def binary(cls, p: float) -> FiniteDistribution:
        """Two-point distribution with ``P(1) = p``."""
        return cls([1.0 - p, p])

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, outcome: int) -> float:
        return float(self.weights[outcome])

    def prob(self, event: Sequence[int]) -> float:
        """Probability of a set of outcomes."""
        return float(sum(self.weights[i] for i in set(event)))

    def expect(self, values: ArrayLike) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))

    def allclose(self, other: FiniteDistribution, atol: float = 1e-9) -> bool:
        return len(self) == len(other) and bool(
            np.allclose(self.weights, other.weights, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"FiniteDistribution({self.weights.tolist()})"


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint distribution over ``X x Y`` stored as ``table[x, y]``."""

    table: NDArray[np.float64]

    def __init__(self, table: ArrayLike):
        object.__setattr__(self, "table", _frozen(table, 2))

    @property
    def shape(self) -> tuple[int, int]:
        return self.table.shape  # type: ignore[return-value]

    @property
    def mx(self) -> int:
        return self.table.shape[0]

    @property
    def my(self) -> int:
        return self.table.shape[1]

    def __getitem__(self, xy: tuple[int, int]) -> float:
        return float(self.table[xy])

    def __repr__(self) -> str:
        return f"JointDistribution({self.table.tolist()})"


def marginal_y(joint: JointDistribution) -> FiniteDistribution:
    return FiniteDistribution(joint.table.sum(axis=0))


def marginal_x(joint: JointDistribution) -> FiniteDistribution:
    return FiniteDistribution(joint.table.sum(axis=1))


def condition_on_x(joint: JointDistribution, x: int) -> FiniteDistribution:
    """Conditional distribution of Y given ``X = x``.

    Raises :class:`ZeroMassEvent` when ``Pr(X = x) == 0``; callers building
    conditional credal sets use this to drop the vertex.
    """
    row = joint.table[x]
    mass = row.sum()
    if mass == 0.0:
        raise ZeroMassEvent(f"Pr(X={x}) = 0")
    return FiniteDistribution(row / mass)


def make_joint(p: float, alpha: ArrayLike, beta: ArrayLike) -> JointDistribution:
    """Joint with ``Pr(Y=1) = p``, ``Pr(X=j | Y=1) = alpha[j]``, ``Pr(X=j | Y=0) = beta[j]``."""
    check_open_probability(p)
    a = FiniteDistribution(alpha).weights
    b = FiniteDistribution(beta).weights
    if len(a) != len(b):
        raise InvalidDistribution("alpha and beta must have the same length")
    table = np.empty((len(a), 2))
    table[:, 1] = a * p
    table[:, 0] = b * (1.0 - p)
    return JointDistribution(table)


def independent_joint(x_marginal: ArrayLike, y_marginal: ArrayLike) -> JointDistribution:
    px = FiniteDistribution(x_marginal).weights
    py = FiniteDistribution(y_marginal).weights
    return JointDistribution(np.outer(px, py))


def correlated_joint(p: float) -> JointDistribution:
    """Binary joint with ``X = Y`` almost surely and ``Pr(Y=1) = p``."""
    return make_joint(p, [0.0, 1.0], [1.0, 0.0])


def check_open_probability(p: float) -> float:
    if not 0.0 <= p <= 1.0 or np.isnan(p):
        raise InvalidDistribution(f"p={p!r} is not a probability")
    if p in (0.0, 1.0):
        raise DegenerateMarginal(f"p={p!r}; need 0 < p < 1")
    return float(p)
