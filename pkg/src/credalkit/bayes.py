"""
Bayesian prediction with Dirichlet-product priors over the marginal-fixed family.

The family is parameterized by the conditionals of X given Y: ``alpha[j] =
Pr(X=j | Y=1)`` and ``beta[j] = Pr(X=j | Y=0)``, with ``Pr(Y=1) = p`` known.
A prior is a product ``Dir(a) x Dir(b)``. After counts ``n[j, k]`` (X=j, Y=k)
the predictive odds of ``Y=1`` against ``Y=0`` given ``X=k`` are::

    p/(1-p) * (n[k,1] + a[k]) / (n[k,0] + b[k]) * (n_0 + sum(b)) / (n_1 + sum(a))

The misprediction probability ``beta_probability`` is computed exactly by
enumerating contingency tables with multinomial weights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln

from credalkit.decision import LossSpec, action_losses
from credalkit.errors import DimensionMismatch, EnumerationTooLarge, OracleOutOfDomain
from credalkit.probspace import (
    JointDistribution,
    check_open_probability,
    condition_on_x,
    marginal_x,
)

DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_MC_SAMPLES = 10**5


@dataclass(frozen=True)
class DirichletProductPrior:
    p: float
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        check_open_probability(self.p)
        if len(self.a) != len(self.b) or not self.a:
            raise DimensionMismatch("a and b must be non-empty and of equal length")
        if any(v <= 0 for v in self.a + self.b):
            raise ValueError("Dirichlet parameters must be positive")
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))

    @property
    def m(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class ContingencyCounts:
    """``n[j, k]`` = number of sample pairs with ``X=j`` and ``Y=k``."""

    n_jk: NDArray[np.int64]

    def __init__(self, n_jk: ArrayLike):
        arr = np.array(n_jk, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DimensionMismatch(f"counts must be an M x 2 matrix, got {arr.shape}")
        if (arr < 0).any():
            raise ValueError("counts must be non-negative")
        arr.flags.writeable = False
        object.__setattr__(self, "n_jk", arr)

    @classmethod
    def empty(cls, m: int) -> ContingencyCounts:
        return cls(np.zeros((m, 2), dtype=np.int64))

    @classmethod
    def from_pairs(cls, pairs, m: int) -> ContingencyCounts:
        n = np.zeros((m, 2), dtype=np.int64)
        for x, y in pairs:
            n[x, y] += 1
        return cls(n)

    @property
    def m(self) -> int:
        return self.n_jk.shape[0]

    @property
    def n0(self) -> int:
        return int(self.n_jk[:, 0].sum())

    @property
    def n1(self) -> int:
        return int(self.n_jk[:, 1].sum())

    @property
    def n(self) -> int:
        return int(self.n_jk.sum())

    def add(self, x: int, y: int) -> ContingencyCounts:
        n = self.n_jk.copy()
        n[x, y] += 1
        return ContingencyCounts(n)


@dataclass(frozen=True)
class HierarchicalPrior:
    """Two-model mixture: the full Dirichlet-product model, and a model in
    which X is independent of Y with ``X ~ Dir(c)``."""

    full_model: DirichletProductPrior
    independence_model: tuple[float, ...]
    mixture_weight: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.mixture_weight <= 1.0:
            raise ValueError("mixture weight must lie in [0, 1]")
        if len(self.independence_model) != self.full_model.m:
            raise DimensionMismatch("independence-model parameters have the wrong length")
        if any(v <= 0 for v in self.independence_model):
            raise ValueError("Dirichlet parameters must be positive")

    @property
    def p(self) -> float:
        return self.full_model.p

    @property
    def m(self) -> int:
        return self.full_model.m


AnyPrior = Union[DirichletProductPrior, HierarchicalPrior]


def uniform_prior(p: float, m: int) -> DirichletProductPrior:
    return ess_prior(p, m, float(m))


def jeffreys_prior(p: float, m: int) -> DirichletProductPrior:
    return ess_prior(p, m, m / 2.0)


def ess_prior(p: float, m: int, s: float) -> DirichletProductPrior:
    """Equivalent-sample-size prior: every parameter equals ``s / m``."""
    if m < 1:
        raise ValueError("need at least one X value")
    if s <= 0:
        raise ValueError("equivalent sample size must be positive")
    return DirichletProductPrior(p, (s / m,) * m, (s / m,) * m)


def hierarchical_prior(p: float, m: int, weight: float = 0.5) -> HierarchicalPrior:
    """Uniform priors inside both models, ``weight`` on the independence model."""
    return HierarchicalPrior(uniform_prior(p, m), (1.0,) * m, weight)


def _check(prior_m: int, counts: ContingencyCounts, k: int) -> None:
    if counts.m != prior_m:
        raise DimensionMismatch(f"counts have {counts.m} X values, prior has {prior_m}")
    if not 0 <= k < prior_m:
        raise IndexError(f"X value {k} out of range 0..{prior_m - 1}")


def predictive_odds(prior: DirichletProductPrior, counts: ContingencyCounts, k: int) -> float:
    _check(prior.m, counts, k)
    n = counts.n_jk
    p = prior.p
    return (
        p
        / (1.0 - p)
        * (n[k, 1] + prior.a[k])
        / (n[k, 0] + prior.b[k])
        * (counts.n0 + sum(prior.b))
        / (counts.n1 + sum(prior.a))
    )


def uniform_predictive_odds(p: float, counts: ContingencyCounts, k: int) -> float:
    """Odds under the uniform prior, written with integer pseudo-counts."""
    m = counts.m
    n = counts.n_jk
    return p / (1.0 - p) * (n[k, 1] + 1) / (n[k, 0] + 1) * (counts.n0 + m) / (counts.n1 + m)


def odds_to_probability(odds: float) -> float:
    return odds / (1.0 + odds)


def predictive_probability(prior: AnyPrior, counts: ContingencyCounts, k: int) -> float:
    """``Pr(Y_{n+1} = 1 | X_{n+1} = k, data)`` under either prior type."""
    if isinstance(prior, HierarchicalPrior):
        return hierarchical_predictive(prior, counts, k)
    return odds_to_probability(predictive_odds(prior, counts, k))


def log_dirichlet_multinomial(counts: ArrayLike, params: ArrayLike) -> float:
    """Log probability of one particular sequence with the given category
    counts under a Dirichlet(params)-categorical model (no multinomial
    coefficient)."""
    c = np.asarray(counts, dtype=float)
    a = np.asarray(params, dtype=float)
    return float(
        gammaln(a.sum()) - gammaln(a.sum() + c.sum()) + np.sum(gammaln(a + c) - gammaln(a))
    )


def log_marginal_full(prior: DirichletProductPrior, counts: ContingencyCounts) -> float:
    n = counts.n_jk
    return (
        counts.n1 * math.log(prior.p)
        + counts.n0 * math.log1p(-prior.p)
        + log_dirichlet_multinomial(n[:, 1], prior.a)
        + log_dirichlet_multinomial(n[:, 0], prior.b)
    )


def log_marginal_independent(hp: HierarchicalPrior, counts: ContingencyCounts) -> float:
    return (
        counts.n1 * math.log(hp.p)
        + counts.n0 * math.log1p(-hp.p)
        + log_dirichlet_multinomial(counts.n_jk.sum(axis=1), hp.independence_model)
    )


def _log_weights(hp: HierarchicalPrior, counts: ContingencyCounts) -> tuple[float, float]:
    w = hp.mixture_weight
    lf = math.log(1.0 - w) + log_marginal_full(hp.full_model, counts) if w < 1 else -math.inf
    li = math.log(w) + log_marginal_independent(hp, counts) if w > 0 else -math.inf
    return lf, li


def posterior_full_model_weight(hp: HierarchicalPrior, counts: ContingencyCounts) -> float:
    """Posterior probability of the full (dependent) model given the counts."""
    lf, li = _log_weights(hp, counts)
    top = max(lf, li)
    ef, ei = math.exp(lf - top), math.exp(li - top)
    return ef / (ef + ei)


def hierarchical_predictive(hp: HierarchicalPrior, counts: ContingencyCounts, k: int) -> float:
    """Model-averaged predictive probability of ``Y=1`` given ``X=k``.

    Each model is weighted by its prior weight times the marginal likelihood
    of the data together with ``X_{n+1}=k``.
    """
    _check(hp.m, counts, k)
    terms_1, terms_all = [], []
    for y in (0, 1):
        lf, li = _log_weights(hp, counts.add(k, y))
        terms_all += [lf, li]
        if y == 1:
            terms_1 += [lf, li]
    top = max(terms_all)
    num = sum(math.exp(t - top) for t in terms_1)
    den = sum(math.exp(t - top) for t in terms_all)
    return num / den


def integration_oracle(
    prior: DirichletProductPrior, counts: ContingencyCounts, k: int, nodes: int = 800
) -> float:
    """Predictive probability by brute-force 2-D quadrature (test oracle, M=2 only).

    Integrates the data likelihood times both Dirichlet densities over
    ``(alpha_1, beta_1) in [0,1]^2`` with a tensorized midpoint rule in the
    angle variable ``alpha = sin^2(theta)``, which removes the endpoint
    singularities of Dirichlet parameters ``>= 1/2``.
    """
    if prior.m != 2:
        raise OracleOutOfDomain(f"oracle is defined for M = 2 only, got M = {prior.m}")
    _check(2, counts, k)
    theta = (np.arange(nodes) + 0.5) * (np.pi / 2) / nodes
    s = np.sin(theta) ** 2
    jac = 2.0 * np.sin(theta) * np.cos(theta)

    def density(params):
        # unnormalized Dir(params) density in the angle variable; 0 ** 0 = 1
        return s ** (params[1] - 1) * (1 - s) ** (params[0] - 1) * jac

    al = s[:, None]  # Pr(X=1 | Y=1)
    be = s[None, :]  # Pr(X=1 | Y=0)
    weight = density(prior.a)[:, None] * density(prior.b)[None, :]
    n = counts.n_jk
    p = prior.p
    like = (
        p ** counts.n1
        * (1 - p) ** counts.n0
        * al ** n[1, 1]
        * (1 - al) ** n[0, 1]
        * be ** n[1, 0]
        * (1 - be) ** n[0, 0]
    )
    x1_y1 = p * (al if k == 1 else 1 - al)
    x1_y0 = (1 - p) * (be if k == 1 else 1 - be)
    num = np.sum(like * x1_y1 * weight)
    den = num + np.sum(like * x1_y0 * weight)
    return float(num / den)


def bayes_predict(prior: AnyPrior, counts: ContingencyCounts, k: int, loss: LossSpec) -> int:
    """Action with the smaller posterior-predictive expected loss; ties go to 0."""
    if loss.observation_dependent or loss.table.shape != (2, 2):
        raise DimensionMismatch("Bayesian prediction needs a 2x2 observation-independent loss")
    q = predictive_probability(prior, counts, k)
    t = loss.table
    # 0 * inf := 0
    e0, e1 = (sum(w * t[y, a] for y, w in ((0, 1 - q), (1, q)) if w > 0) for a in (0, 1))
    return 1 if e1 < e0 else 0


def bayes_loss_gap(beta: float, alpha: float) -> float:
    """Extra expected loss of the Bayesian over ignoring, ``beta (alpha - 1) / 2``.

    Valid for the symmetric ``p = 1/2`` setting with the ``L_alpha`` loss.
    """
    return beta * (alpha - 1.0) / 2.0


def count_tables(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """All ways of placing ``n`` draws in ``2m`` cells (stars and bars)."""
    cells = 2 * m
    for bars in itertools.combinations(range(n + cells - 1), cells - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + cells - 1 - prev - 1)
        yield tuple(out)


def n_count_tables(n: int, m: int) -> int:
    return math.comb(n + 2 * m - 1, 2 * m - 1)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    exact: bool
    terms: int


def enumerate_outcomes(true_joint: JointDistribution, n: int):
    """Yield ``(probability, counts)`` for every reachable contingency table.

    Cells are flattened ``x``-major, i.e. cell ``2 * x + y``.
    """
    m = true_joint.mx
    flat = true_joint.table.reshape(-1)
    with np.errstate(divide="ignore"):
        logp = np.log(flat)
    log_nfact = math.lgamma(n + 1)
    for cells in count_tables(n, m):
        c = np.array(cells)
        if np.any((c > 0) & (flat == 0)):
            continue
        charged = c > 0
        lp = log_nfact - sum(math.lgamma(v + 1) for v in cells) + float(np.sum(c[charged] * logp[charged]))
        yield math.exp(lp), ContingencyCounts(c.reshape(m, 2))


def _require_binary(true_joint: JointDistribution, prior: AnyPrior) -> None:
    if true_joint.my != 2:
        raise DimensionMismatch("Bayesian analysis needs binary Y")
    if true_joint.mx != prior.m:
        raise DimensionMismatch(f"true joint has {true_joint.mx} X values, prior has {prior.m}")


def conditionally_optimal_actions(
    true_joint: JointDistribution, loss: LossSpec, atol: float = 1e-12
) -> list[frozenset[int]]:
    """For each ``x``, the actions minimizing expected loss under the true
    ``Pr(Y | X = x)``. Observations of probability zero get every action."""
    out = []
    for x in range(true_joint.mx):
        if true_joint.table[x].sum() == 0.0:
            out.append(frozenset(range(loss.n_actions)))
            continue
        values = action_losses(condition_on_x(true_joint, x), loss)
        out.append(frozenset(int(a) for a in np.flatnonzero(values <= values.min() + atol)))
    return out


def beta_probability(
    true_joint: JointDistribution,
    n: int,
    loss: LossSpec,
    prior: AnyPrior,
    cap: int = DEFAULT_ENUMERATION_CAP,
    seed: int = 0,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    allow_monte_carlo: bool = True,
) -> Estimate:
    """Probability that the Bayesian picks an action that is suboptimal under
    the true distribution, i.e. not optimal for ``Pr(Y | X = X_{n+1})``.

    The randomness is the sample of size ``n`` and ``X_{n+1}``, drawn from
    the true X-marginal. Exact when the number of weighted terms fits in
    ``cap``; otherwise a seeded Monte Carlo estimate with its standard error.
    """
    _require_binary(true_joint, prior)
    good = conditionally_optimal_actions(true_joint, loss)
    px = marginal_x(true_joint).weights
    m = true_joint.mx

    def wrong(counts: ContingencyCounts) -> float:
        return math.fsum(
            px[k] for k in range(m) if px[k] > 0 and bayes_predict(prior, counts, k, loss) not in good[k]
        )

    if n_count_tables(n, m) * m <= cap:
        terms = [w * wrong(c) for w, c in enumerate_outcomes(true_joint, n)]
        return Estimate(math.fsum(sorted(terms)), 0.0, True, len(terms) * m)

    if not allow_monte_carlo:
        raise EnumerationTooLarge(
            f"{n_count_tables(n, m) * m} terms exceed the enumeration cap {cap}"
        )
    # draw order: sample tables first, then X_{n+1}
    rng = np.random.default_rng(seed)
    flat = true_joint.table.reshape(-1)
    tables = rng.multinomial(n, flat, size=mc_samples)
    ks = rng.choice(m, size=mc_samples, p=px)
    hits = np.array(
        [
            bayes_predict(prior, ContingencyCounts(t.reshape(m, 2)), int(k), loss) not in good[k]
            for t, k in zip(tables, ks)
        ],
        dtype=float,
    )
    return Estimate(float(hits.mean()), float(hits.std(ddof=1) / math.sqrt(mc_samples)), False, mc_samples)


def beta_by_sequences(
    true_joint: JointDistribution, n: int, loss: LossSpec, prior: AnyPrior
) -> float:
    """Same quantity as :func:`beta_probability` by summing over all raw
    ``(x, y)`` sequences of length ``n``. Exponential; for checking only."""
    _require_binary(true_joint, prior)
    good = conditionally_optimal_actions(true_joint, loss)
    m = true_joint.mx
    px = marginal_x(true_joint).weights
    cells = [(x, y) for x in range(m) for y in range(2)]
    total = []
    for seq in itertools.product(cells, repeat=n):
        prob = math.prod(true_joint.table[c] for c in seq)
        if prob == 0.0:
            continue
        counts = ContingencyCounts.from_pairs(seq, m)
        for k in range(m):
            if px[k] > 0 and bayes_predict(prior, counts, k, loss) not in good[k]:
                total.append(prob * px[k])
    return math.fsum(total)
