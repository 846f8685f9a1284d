"""Brute-force cross-checks for the analytic solver.

Everything here is deliberately naive: trace words are enumerated one by
one, the spectral radius is recomputed with Karp's recurrence, and the
Pareto frontier is approximated by exhaustive search over a log-spaced grid
of rating vectors.  None of it reuses the polynomial expansion that the
production path relies on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import OrderLimitExceeded, ShapeError
from .polyfront import FrontierDescription
from .tropcore import DEFAULT_TOL, NEG_INF, TropMatrix, TropScalar

ORACLE_MAX_ORDER = 8
GRID_BUDGET = 2_000_000


def _mp(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return np.max(X[:, :, None] + Y[None, :, :], axis=1)


def _mpow(X: np.ndarray, p: int) -> np.ndarray:
    n = X.shape[0]
    R = np.full((n, n), NEG_INF)
    np.fill_diagonal(R, 0.0)
    for _ in range(p):
        R = _mp(R, X)
    return R


def _tr(X: np.ndarray) -> float:
    return float(np.max(np.diagonal(X)))


def _order(*mats: TropMatrix) -> int:
    n = mats[0].rows
    for M in mats:
        if M.shape != (n, n):
            raise ShapeError("oracle matrices must be square of one order")
    if n > ORACLE_MAX_ORDER:
        raise OrderLimitExceeded(f"oracle enumeration is capped at order {ORACLE_MAX_ORDER}")
    return n


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def _word_trace(blocks: list[tuple[int, np.ndarray]], Apows: dict[int, np.ndarray]) -> float:
    n = next(iter(Apows.values())).shape[0]
    P = np.full((n, n), NEG_INF)
    np.fill_diagonal(P, 0.0)
    for i, M in blocks:
        P = _mp(_mp(P, Apows[i]), M)
    return _tr(P)


def _powers(X: np.ndarray, upto: int) -> dict[int, np.ndarray]:
    return {p: _mpow(X, p) for p in range(upto + 1)}


def enum_sigma_theta(A: TropMatrix, C: TropMatrix) -> TropScalar:
    """``⊕ tr^{1/m}(A^{i_1} C ⋯ A^{i_k} C)`` over all weak compositions of ``m``.

    Pass ``B`` in place of ``A`` to obtain the companion scalar for the
    second criterion.
    """
    n = _order(A, C)
    Apows = _powers(A.logs, n)
    best = NEG_INF
    for k in range(1, n):
        for m in range(1, n - k + 1):
            for comp in weak_compositions(m, k):
                t = _word_trace([(i, C.logs) for i in comp], Apows)
                best = max(best, t / m)
    return TropScalar(best)


def enum_rklm(A: TropMatrix, B: TropMatrix, C: TropMatrix, k: int, l: int, m: int) -> TropScalar:
    """Max trace over words with ``k`` blocks, ``m`` copies of ``A`` and ``l`` of ``B``.

    Each block is ``A^{i} B`` or ``A^{i} C``; exactly ``l`` blocks end in ``B``.
    """
    n = _order(A, B, C)
    if not (1 <= k <= n - 1 and 1 <= l <= k and 1 <= m <= n - k):
        raise ValueError(f"index (k={k}, l={l}, m={m}) out of range for order {n}")
    Apows = _powers(A.logs, m)
    best = NEG_INF
    for comp in weak_compositions(m, k):
        for picks in itertools.combinations(range(k), l):
            tails = [B.logs if b in picks else C.logs for b in range(k)]
            best = max(best, _word_trace(list(zip(comp, tails)), Apows))
    return TropScalar(best)


def enum_mixed_coefficients(A: TropMatrix, B: TropMatrix, C: TropMatrix) -> dict[tuple[int, int], float]:
    """``{(m, l): log max_k r_{k,l,m}}`` for every index triple in range."""
    n = _order(A, B, C)
    out: dict[tuple[int, int], float] = {}
    for k in range(1, n):
        for m in range(1, n - k + 1):
            for l in range(1, k + 1):
                r = enum_rklm(A, B, C, k, l, m).logval
                out[(m, l)] = max(out.get((m, l), NEG_INF), r)
    return out


def _pure_coefficients(X: TropMatrix, C: TropMatrix, n: int) -> dict[int, float]:
    """``{m: log coeff}`` of the words built from ``m`` copies of ``X`` and any ``C``.

    ``tr X^m`` is the word without constraints; every other cyclic word is
    rotated to end in ``C`` and split into blocks ``X^{i} C``.
    """
    Xpows = _powers(X.logs, n)
    out = {m: _tr(Xpows[m]) for m in range(1, n + 1)}
    out[0] = max(_tr(_mpow(C.logs, k)) for k in range(1, n + 1))
    for k in range(1, n + 1):
        for m in range(0, n - k + 1):
            for comp in weak_compositions(m, k):
                t = _word_trace([(i, C.logs) for i in comp], Xpows)
                out[m] = max(out[m], t)
    return out


def enum_poly_coefficients(A: TropMatrix, B: TropMatrix, C: TropMatrix) -> dict[tuple[int, int], float]:
    """Every coefficient of ``Tr(α⁻¹A ⊕ β⁻¹B ⊕ C)`` by direct word enumeration.

    Zero coefficients are omitted, matching :class:`TropPoly2`.
    """
    n = _order(A, B, C)
    out = dict(enum_mixed_coefficients(A, B, C))
    for m, c in _pure_coefficients(A, C, n).items():
        out[(m, 0)] = c
    for l, c in _pure_coefficients(B, C, n).items():
        if l:
            out[(0, l)] = c
    return {k: v for k, v in out.items() if v > NEG_INF}


def _tr_det(X: np.ndarray) -> float:
    n = X.shape[0]
    P, best = X, _tr(X)
    for _ in range(1, n):
        P = _mp(P, X)
        best = max(best, _tr(P))
    return best


def trace_binomial_sides(A: TropMatrix, B: TropMatrix) -> tuple[float, float]:
    """Both sides of the binomial identity for ``Tr(A ⊕ B)``, in logs."""
    n = _order(A, B)
    lhs = _tr_det(np.maximum(A.logs, B.logs))
    Apows = _powers(A.logs, n)
    rhs = max(_tr_det(A.logs), _tr_det(B.logs))
    for k in range(1, n):
        for m in range(1, n - k + 1):
            for comp in weak_compositions(m, k):
                rhs = max(rhs, _word_trace([(i, B.logs) for i in comp], Apows))
    return lhs, rhs


def check_trace_binomial(A: TropMatrix, B: TropMatrix, tol: float = DEFAULT_TOL) -> bool:
    lhs, rhs = trace_binomial_sides(A, B)
    if lhs == NEG_INF or rhs == NEG_INF:
        return lhs == rhs
    return abs(lhs - rhs) <= tol


def karp_radius(A: TropMatrix) -> TropScalar:
    """Maximum geometric cycle mean by Karp's recurrence over walk lengths.

    Walks may start anywhere (``D_0 = 0`` at every node), so the graph need
    not be strongly connected.
    """
    if not A.is_square:
        raise ShapeError("square matrix required")
    W = A.logs
    n = W.shape[0]
    D = np.full((n + 1, n), NEG_INF)
    D[0] = 0.0
    for k in range(1, n + 1):
        D[k] = np.max(D[k - 1][:, None] + W, axis=0)
    best = NEG_INF
    for v in range(n):
        if D[n, v] == NEG_INF:
            continue
        worst = math.inf
        for k in range(n):
            if D[k, v] == NEG_INF:
                continue
            worst = min(worst, (D[n, v] - D[k, v]) / (n - k))
        best = max(best, worst)
    return TropScalar(best)


def simple_cycle_radius(A: TropMatrix) -> TropScalar:
    """Maximum mean weight over all simple cycles, by exhaustive enumeration."""
    W = A.logs
    n = W.shape[0]
    best = NEG_INF
    for length in range(1, n + 1):
        for nodes in itertools.permutations(range(n), length):
            if nodes[0] != min(nodes):
                continue
            cyc = nodes + (nodes[0],)
            w = sum(W[a, b] for a, b in zip(cyc, cyc[1:]))
            best = max(best, w / length)
    return TropScalar(best)


@dataclass(frozen=True)
class GridSpec:
    points_per_axis: int = 61
    log_range: float = 3.0
    fixed_first: bool = True

    def __post_init__(self):
        if self.points_per_axis < 3:
            raise ValueError("points_per_axis must be at least 3")
        if self.log_range <= 0:
            raise ValueError("log_range must be positive")

    @property
    def step(self) -> float:
        return 2 * self.log_range / (self.points_per_axis - 1)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.log_range, self.log_range, self.points_per_axis)


def _grid_points(n: int, grid: GridSpec) -> np.ndarray:
    free = n - 1 if grid.fixed_first else n
    count = grid.points_per_axis ** free
    if count > GRID_BUDGET:
        raise OrderLimitExceeded(f"grid of {count} points exceeds the budget of {GRID_BUDGET}")
    axes = [grid.axis()] * free
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, free)
    if grid.fixed_first:
        mesh = np.hstack([np.zeros((mesh.shape[0], 1)), mesh])
    return mesh


def grid_objectives(problem, grid: GridSpec = GridSpec(), tol: float = DEFAULT_TOL) -> np.ndarray:
    """Log objective pairs of every feasible grid vector, shape ``(N, 2)``."""
    X = _grid_points(problem.n, grid)
    A, B, C = problem.A.logs, problem.B.logs, problem.C.logs
    ratio = X[:, None, :] - X[:, :, None]  # x_j / x_i
    fa = np.max((A[None] + ratio).reshape(len(X), -1), axis=1)
    fb = np.max((B[None] + ratio).reshape(len(X), -1), axis=1)
    cx = np.max(C[None] + X[:, None, :], axis=2)
    feasible = np.all(cx <= X + tol, axis=1)
    return np.column_stack([fa[feasible], fb[feasible]])


def nondominated(points: np.ndarray) -> np.ndarray:
    """Minimal elements of a set of 2-D points under componentwise order."""
    if len(points) == 0:
        return points
    order = np.lexsort((points[:, 1], points[:, 0]))
    kept = []
    best_b = math.inf
    for a, b in points[order]:
        if b < best_b:
            kept.append((a, b))
            best_b = b
    return np.array(kept)


def grid_pareto(problem, grid: GridSpec = GridSpec(), tol: float = DEFAULT_TOL) -> list[tuple[TropScalar, TropScalar]]:
    """Nondominated objective pairs found by exhaustive grid search."""
    front = nondominated(grid_objectives(problem, grid, tol))
    return [(TropScalar(float(a)), TropScalar(float(b))) for a, b in front]


def dominates_frontier(front: FrontierDescription, a: float, b: float, band: float) -> bool:
    """Whether log point ``(a, b)`` beats some frontier point by more than ``band`` in both axes."""
    lo, hi = front.alpha_min.logval, front.alpha_max.logval
    u = a + band
    if u < lo:
        u = lo
    elif u >= hi:
        return False
    return b + band < front.beta(TropScalar(u)).logval


def frontier_distance(
    front: FrontierDescription, a: float, b: float, samples: int = 4001, extend: bool = False
) -> float:
    """Chebyshev distance in log coordinates from ``(a, b)`` to the frontier curve.

    With ``extend`` the curve is continued by the vertical ray above its left
    end and the horizontal ray right of its right end, i.e. the boundary of
    the attainable objective region.  Nondominated grid points can sit on
    those rays far from the curve itself.
    """
    pts = front.sample(samples)
    us = np.array([p[0].logval for p in pts])
    vs = np.array([p[1].logval for p in pts])
    d = float(np.min(np.maximum(np.abs(us - a), np.abs(vs - b))))
    if extend:
        lo, hi = front.alpha_min.logval, front.alpha_max.logval
        if b >= front.beta_at_alpha_min.logval:
            d = min(d, abs(a - lo))
        if a >= hi:
            d = min(d, abs(b - front.beta_at_alpha_max.logval))
    return d
