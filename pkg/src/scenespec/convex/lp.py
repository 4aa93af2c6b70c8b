"""Dense two-phase simplex for small inequality-form linear programs.

Solves ``min/max c.x  s.t.  A x <= b`` with ``x`` free. Problems here have a
few dozen rows at most, so a plain tableau with Bland's rule is enough.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-10


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    x: np.ndarray | None = None
    value: float | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


class _Unbounded(Exception):
    pass


def _pivot(T: np.ndarray, rhs: np.ndarray, basis: list[int], row: int, col: int) -> None:
    p = T[row, col]
    T[row] /= p
    rhs[row] /= p
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            f = T[i, col]
            T[i] -= f * T[row]
            rhs[i] -= f * rhs[row]
    basis[row] = col


def _run(T, rhs, basis, cost, allowed, max_iter):
    """Minimise ``cost`` over the canonical tableau in place (Bland's rule)."""
    for _ in range(max_iter):
        reduced = cost - cost[basis] @ T
        entering = -1
        for j in np.flatnonzero(allowed):
            if reduced[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return
        col = T[:, entering]
        best_row, best_ratio = -1, np.inf
        for i in range(T.shape[0]):
            if col[i] > PIVOT_TOL:
                ratio = max(rhs[i], 0.0) / col[i]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12 and basis[i] < basis[best_row]
                ):
                    best_row, best_ratio = i, ratio
        if best_row < 0:
            raise _Unbounded
        _pivot(T, rhs, basis, best_row, entering)
    raise RuntimeError("simplex iteration limit reached")


def linprog(c, A, b, maximize: bool = False) -> LPResult:
    """Optimise ``c.x`` subject to ``A x <= b`` over free ``x``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    m, d = A.shape
    if m == 0:
        raise ValueError("linear program needs at least one constraint")
    if b.shape[0] != m or c.shape[0] != d:
        raise ValueError("shape mismatch between c, A and b")

    # columns: x+ (d) | x- (d) | slack (m) | artificial (k)
    neg = b < 0
    art_rows = np.flatnonzero(neg)
    k = len(art_rows)
    n = 2 * d + m + k
    T = np.zeros((m, n))
    T[:, :d] = A
    T[:, d:2 * d] = -A
    T[:, 2 * d:2 * d + m] = np.eye(m)
    rhs = b.copy()
    T[neg] *= -1
    rhs[neg] *= -1
    basis = [2 * d + i for i in range(m)]
    for j, i in enumerate(art_rows):
        T[i, 2 * d + m + j] = 1.0
        basis[i] = 2 * d + m + j

    max_iter = 50 * (m + n) + 100
    allowed = np.ones(n, dtype=bool)

    if k:
        phase1 = np.zeros(n)
        phase1[2 * d + m:] = 1.0
        _run(T, rhs, basis, phase1, allowed, max_iter)
        infeas = float(phase1[basis] @ rhs)
        if infeas > 1e-9 * max(1.0, float(np.max(np.abs(b)))):
            return LPResult(LPStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(T.shape[0]):
            if basis[i] >= 2 * d + m:
                cols = np.flatnonzero(np.abs(T[i, :2 * d + m]) > PIVOT_TOL)
                if len(cols) == 0:
                    continue
                _pivot(T, rhs, basis, i, int(cols[0]))
            keep.append(i)
        T = T[keep]
        rhs = rhs[keep]
        basis = [basis[i] for i in keep]
        allowed[2 * d + m:] = False

    cost = np.zeros(n)
    sign = -1.0 if maximize else 1.0
    cost[:d] = sign * c
    cost[d:2 * d] = -sign * c
    try:
        _run(T, rhs, basis, cost, allowed, max_iter)
    except _Unbounded:
        return LPResult(LPStatus.UNBOUNDED)

    z = np.zeros(n)
    z[basis] = rhs
    x = z[:d] - z[d:2 * d]
    return LPResult(LPStatus.OPTIMAL, x, float(c @ x))
