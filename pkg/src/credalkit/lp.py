"""
Dense two-phase simplex for small linear programs.

Solves ``min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x = b_eq``,
``x >= 0``. Bland's smallest-index rule is used for both the entering and
the leaving variable, so the method cannot cycle on the heavily degenerate
programs that minimax problems produce (many right-hand sides are zero).

Problems handled here have at most a few hundred rows and columns; no
attempt is made at sparse or revised-simplex efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from credalkit.errors import NumericalFailure

PIVOT_TOL = 1e-9


class Infeasible(NumericalFailure):
    pass


class Unbounded(NumericalFailure):
    pass


@dataclass(frozen=True)
class LPResult:
    x: NDArray[np.float64]
    value: float
    iterations: int


def _pivot(T: NDArray[np.float64], basis: list[int], r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = c


def _run(T: NDArray[np.float64], basis: list[int], allowed: int, tol: float, max_iter: int) -> int:
    """Iterate Bland pivots on tableau ``T`` (cost row last). Only the first
    ``allowed`` columns may enter the basis."""
    m = T.shape[0] - 1
    for it in range(max_iter):
        cost = T[m, :allowed]
        entering = np.flatnonzero(cost < -tol)
        if entering.size == 0:
            return it
        c = int(entering[0])
        column = T[:m, c]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            raise Unbounded("linear program is unbounded")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, basis, r, c)
    raise NumericalFailure(f"simplex did not terminate in {max_iter} iterations")


def linprog_min(
    c: ArrayLike,
    A_ub: ArrayLike | None = None,
    b_ub: ArrayLike | None = None,
    A_eq: ArrayLike | None = None,
    b_eq: ArrayLike | None = None,
    tol: float = PIVOT_TOL,
    max_iter: int = 50_000,
) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    blocks, rhs = [], []
    n_ub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.asarray(A_ub, dtype=float).reshape(-1, n)
        n_ub = A_ub.shape[0]
        blocks.append(np.hstack([A_ub, np.eye(n_ub)]))
        rhs.append(np.asarray(b_ub, dtype=float))
    if A_eq is not None and len(A_eq):
        A_eq = np.asarray(A_eq, dtype=float).reshape(-1, n)
        blocks.append(np.hstack([A_eq, np.zeros((A_eq.shape[0], n_ub))]))
        rhs.append(np.asarray(b_eq, dtype=float))
    if not blocks:
        if (c < 0).any():
            raise Unbounded("unconstrained program with negative cost")
        return LPResult(np.zeros(n), 0.0, 0)

    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    m, width = A.shape

    # phase 1: one artificial per row
    T = np.zeros((m + 1, width + m + 1))
    T[:m, :width] = A
    T[:m, width : width + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :width] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(width, width + m))
    iters = _run(T, basis, width, tol, max_iter)
    scale = max(1.0, float(np.abs(b).max()))
    if -T[m, -1] > 1e-7 * scale:
        raise Infeasible(f"linear program is infeasible (phase-1 residual {-T[m, -1]:.3g})")

    # drive remaining artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= width:
            cand = np.flatnonzero(np.abs(T[r, :width]) > tol)
            if cand.size:
                _pivot(T, basis, r, int(cand[0]))
                keep.append(r)
        else:
            keep.append(r)
    T = np.vstack([T[keep], T[m : m + 1]])
    basis = [basis[r] for r in keep]
    m = len(keep)

    # phase 2
    full_c = np.zeros(width)
    full_c[:n] = c
    T[m, :] = 0.0
    T[m, :width] = full_c
    for r, j in enumerate(basis):
        T[m] -= full_c[j] * T[r]
    iters += _run(T, basis, width, tol, max_iter)

    x = np.zeros(width)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    x = x[:n]
    return LPResult(x, float(c @ x), iters)
