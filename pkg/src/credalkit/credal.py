"""
Credal sets in vertex representation, conditioning and dilation.

A :class:`CredalSet` is the convex hull of a finite list of joint
distributions. Event probabilities and expected losses are linear in the
measure, so their extrema over the hull are attained at vertices; every
routine here therefore works on the vertex list only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from credalkit.errors import (
    DegenerateMarginal,
    DimensionMismatch,
    EmptyList,
    EverywhereZeroMass,
    SizeOverflow,
)
from credalkit.probspace import (
    FiniteDistribution,
    JointDistribution,
    condition_on_x,
    marginal_y,
)

DEFAULT_VERTEX_CAP = 10**6


@dataclass(frozen=True)
class CredalSet:
    vertices: tuple[JointDistribution, ...]

    def __init__(self, vertices: Iterable[JointDistribution]):
        vs = tuple(vertices)
        if not vs:
            raise EmptyList("a credal set needs at least one vertex")
        shape = vs[0].shape
        for v in vs:
            if v.shape != shape:
                raise DimensionMismatch(f"vertex shapes differ: {shape} vs {v.shape}")
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def singleton(cls, joint: JointDistribution) -> CredalSet:
        return cls([joint])

    @property
    def mx(self) -> int:
        return self.vertices[0].mx

    @property
    def my(self) -> int:
        return self.vertices[0].my

    def __len__(self) -> int:
        return len(self.vertices)

    def tables(self) -> np.ndarray:
        """Vertex tables stacked as ``[v, x, y]``."""
        return np.stack([v.table for v in self.vertices])


@dataclass(frozen=True)
class ProbabilityInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(f"invalid probability interval [{self.lower}, {self.upper}]")

    def as_tuple(self) -> tuple[float, float]:
        return (self.lower, self.upper)


@dataclass(frozen=True)
class DilationReport:
    event: tuple[int, ...]
    prior: ProbabilityInterval
    per_x: tuple[ProbabilityInterval, ...]
    dilated: bool
    weak: bool = field(default=False)


def marginal_fixed_credal(
    prior_y: FiniteDistribution, mx: int, cap: int = DEFAULT_VERTEX_CAP
) -> CredalSet:
    """All joints on ``X x Y`` whose Y-marginal is ``prior_y``.

    The conditionals of X given each y range over a product of simplices, so
    the extreme points are the deterministic assignments ``f: Y -> X`` with
    ``Pr(x, y) = prior_y(y) [x == f(y)]``. There are ``mx ** my`` of them,
    enumerated with ``f`` in lexicographic order of ``(f(0), f(1), ...)``.
    """
    w = prior_y.weights
    if ((w == 0.0) | (w == 1.0)).any():
        raise DegenerateMarginal(f"prior {w.tolist()} has a weight of exactly 0 or 1")
    if mx < 1:
        raise ValueError("need at least one observation value")
    my = len(w)
    count = mx**my
    if count > cap:
        raise SizeOverflow(f"{mx}**{my} = {count} vertices exceeds cap {cap}")
    vertices = []
    for f in itertools.product(range(mx), repeat=my):
        table = np.zeros((mx, my))
        table[list(f), np.arange(my)] = w
        vertices.append(JointDistribution(table))
    return CredalSet(vertices)


def conditional_credal(credal: CredalSet, x: int) -> list[FiniteDistribution]:
    """Conditionals ``Pr(. | X = x)`` of every vertex that charges ``x``.

    Vertices with ``Pr(X = x) == 0`` (exact test: vertices are constructed,
    not estimated) are skipped.
    """
    out = []
    for v in credal.vertices:
        if v.table[x].sum() > 0.0:
            out.append(condition_on_x(v, x))
    if not out:
        raise EverywhereZeroMass(f"no vertex gives X={x} positive probability")
    return out


def lower_upper(dists: Sequence[FiniteDistribution], event: Iterable[int]) -> ProbabilityInterval:
    if not dists:
        raise EmptyList("lower/upper probability of an empty set of measures")
    event = tuple(event)
    probs = [min(1.0, max(0.0, d.prob(event))) for d in dists]
    return ProbabilityInterval(min(probs), max(probs))


def detect_dilation(credal: CredalSet, event: Iterable[int], weak: bool = False) -> DilationReport:
    """Check whether every observation strictly widens the interval of ``event``.

    With ``weak=True`` non-strict widening on both ends suffices (and at
    least one end must move for some x); the strict form is the default.
    """
    event = tuple(sorted(set(event)))
    prior = lower_upper([marginal_y(v) for v in credal.vertices], event)
    per_x = tuple(lower_upper(conditional_credal(credal, x), event) for x in range(credal.mx))
    if weak:
        dilated = all(c.lower <= prior.lower and c.upper >= prior.upper for c in per_x) and any(
            c.lower < prior.lower or c.upper > prior.upper for c in per_x
        )
    else:
        dilated = all(c.lower < prior.lower and c.upper > prior.upper for c in per_x)
    return DilationReport(event, prior, per_x, dilated, weak)


def parse_event(text: str, my: int = 2) -> tuple[int, ...]:
    """Parse ``"Y=1"`` or ``"Y in 0,2"`` into a tuple of outcome indices."""
    body = text.strip()
    if body.upper().startswith("Y"):
        body = body[1:].strip()
    if body.startswith("="):
        body = body[1:]
    elif body.lower().startswith("in"):
        body = body[2:]
    else:
        raise ValueError(f"cannot parse event {text!r}; use 'Y=1' or 'Y in 0,1'")
    items = tuple(sorted({int(tok) for tok in body.replace("{", "").replace("}", "").split(",")}))
    if not items or any(not 0 <= i < my for i in items):
        raise ValueError(f"event {text!r} is outside 0..{my - 1}")
    return items
