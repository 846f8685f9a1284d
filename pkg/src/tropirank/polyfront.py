"""Exact Pareto frontier of the constrained bi-objective max-ratio problem.

The existence condition ``Tr(α⁻¹A ⊕ β⁻¹B ⊕ C) <= 1`` is expanded into a
bivariate tropical polynomial in ``α⁻¹`` and ``β⁻¹``.  Pure-``α`` terms bound
``α`` from below, pure-``β`` terms bound ``β`` from below, and the mixed terms
define the decreasing envelope ``β = G(α)`` (with inverse ``H``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import (
    DegenerateObjective,
    InfeasibleConstraints,
    NoMixedTerms,
    NotOnFrontier,
    OrderLimitExceeded,
    ShapeError,
)
from .linsys import StarMatrix, kleene_star, spectral_radius, tr_det
from .tropcore import DEFAULT_TOL, NEG_INF, TropMatrix, TropScalar

MAX_ORDER = 24

POINT = "point"
SEGMENT = "segment"


class TropPoly2:
    """Tropical polynomial ``⊕ c · α^{-m} β^{-l}`` with log-domain coefficients.

    Monomials are keyed by the exponent pair ``(m, l)``; zero coefficients
    are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[tuple[int, int], float] | None = None):
        clean = {}
        for (m, l), c in (terms or {}).items():
            if m < 0 or l < 0:
                raise ValueError("exponents must be non-negative")
            if c == NEG_INF:
                continue
            key = (int(m), int(l))
            clean[key] = max(clean.get(key, NEG_INF), float(c))
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, m: int, l: int, coeff: TropScalar) -> "TropPoly2":
        return cls({(m, l): coeff.logval})

    @property
    def terms(self) -> dict[tuple[int, int], float]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[int, int, TropScalar]]:
        for (m, l), c in self._terms.items():
            yield m, l, TropScalar(c)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropPoly2):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def coeff(self, m: int, l: int) -> TropScalar:
        return TropScalar(self._terms.get((m, l), NEG_INF))

    @property
    def degree(self) -> int:
        return max((m + l for m, l in self._terms), default=0)

    def mixed(self) -> list[tuple[int, int, float]]:
        return [(m, l, c) for (m, l), c in self._terms.items() if m >= 1 and l >= 1]

    def __add__(self, other: "TropPoly2") -> "TropPoly2":
        merged = dict(self._terms)
        for key, c in other._terms.items():
            merged[key] = max(merged.get(key, NEG_INF), c)
        return TropPoly2(merged)

    def __mul__(self, other: "TropPoly2") -> "TropPoly2":
        out: dict[tuple[int, int], float] = {}
        for (m1, l1), c1 in self._terms.items():
            for (m2, l2), c2 in other._terms.items():
                key = (m1 + m2, l1 + l2)
                out[key] = max(out.get(key, NEG_INF), c1 + c2)
        return TropPoly2(out)

    def evaluate(self, alpha: TropScalar, beta: TropScalar) -> TropScalar:
        """Value of the polynomial at ``(α, β)``, both nonzero."""
        a, b = alpha.logval, beta.logval
        return TropScalar(
            max((c - m * a - l * b for (m, l), c in self._terms.items()), default=NEG_INF)
        )

    def __repr__(self) -> str:
        body = " ⊕ ".join(f"{math.exp(c):.6g}·a^-{m}·b^-{l}" for (m, l), c in self._terms.items())
        return f"TropPoly2({body or '0'})"


def _check_problem(A: TropMatrix, B: TropMatrix, C: TropMatrix, max_order: int) -> int:
    for name, M in (("A", A), ("B", B), ("C", C)):
        if not M.is_square:
            raise ShapeError(f"{name} must be square, got {M.shape}")
    if not (A.shape == B.shape == C.shape):
        raise ShapeError(f"A, B, C must share one order: {A.shape}, {B.shape}, {C.shape}")
    n = A.rows
    if n > max_order:
        raise OrderLimitExceeded(f"order {n} exceeds the supported maximum {max_order}")
    return n


def _poly_matrix_step(Q: np.ndarray, A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Multiply a polynomial matrix by ``α⁻¹A ⊕ β⁻¹B ⊕ C`` on the right.

    ``Q`` has shape ``(n, n, D, D)``; axis 2 indexes the ``α⁻¹`` exponent and
    axis 3 the ``β⁻¹`` exponent.  Terms pushed beyond ``D - 1`` are dropped.
    """

    def times(Qpart: np.ndarray, M: np.ndarray) -> np.ndarray:
        # max_k Qpart[i, k, ...] + M[k, j]
        return np.max(Qpart[:, :, None, :, :] + M[None, :, :, None, None], axis=1)

    out = times(Q, C)
    shifted = np.full_like(Q, NEG_INF)
    shifted[:, :, 1:, :] = Q[:, :, :-1, :]
    out = np.maximum(out, times(shifted, A))
    shifted = np.full_like(Q, NEG_INF)
    shifted[:, :, :, 1:] = Q[:, :, :, :-1]
    return np.maximum(out, times(shifted, B))


def expand_tr_poly(
    A: TropMatrix, B: TropMatrix, C: TropMatrix, max_order: int = MAX_ORDER
) -> TropPoly2:
    """Expand ``Tr(α⁻¹A ⊕ β⁻¹B ⊕ C)`` into a bivariate tropical polynomial.

    The symbolic matrix is raised to powers ``1..n`` over the polynomial
    semiring and the traces are accumulated.  The coefficient at ``(m, 0)``
    collects ``tr A^m`` together with every ``A``/``C`` word having ``m``
    copies of ``A``; ``(0, l)`` does the same for ``B``; mixed pairs collect
    all words containing both.
    """
    n = _check_problem(A, B, C, max_order)
    D = n + 1
    Q = np.full((n, n, D, D), NEG_INF)
    Q[:, :, 1, 0] = A.logs
    Q[:, :, 0, 1] = B.logs
    Q[:, :, 0, 0] = C.logs
    acc = np.full((D, D), NEG_INF)
    idx = np.arange(n)
    for p in range(1, n + 1):
        if p > 1:
            Q = _poly_matrix_step(Q, A.logs, B.logs, C.logs)
        acc = np.maximum(acc, Q[idx, idx].max(axis=0))
    terms = {
        (m, l): float(acc[m, l])
        for m in range(D)
        for l in range(D - m)
        if acc[m, l] > NEG_INF
    }
    return TropPoly2(terms)


def poly_bounds(p: TropPoly2) -> tuple[TropScalar, TropScalar]:
    """Lower bounds ``(λ⊕σ, μ⊕θ)`` read off the pure monomials."""
    ls = max((c / m for (m, l), c in p.terms.items() if m >= 1 and l == 0), default=NEG_INF)
    mt = max((c / l for (m, l), c in p.terms.items() if l >= 1 and m == 0), default=NEG_INF)
    return TropScalar(ls), TropScalar(mt)


def sigma_theta(A: TropMatrix, C: TropMatrix, max_order: int = MAX_ORDER) -> TropScalar:
    """Constraint-induced bound ``⊕ tr^{1/m}(A^{i_1} C ⋯ A^{i_k} C)``.

    Obtained as the mixed part of the expansion of ``Tr(α⁻¹A ⊕ γ⁻¹C)``:
    each mixed monomial ``(m, l)`` gathers the words with ``m`` copies of
    ``A`` and ``l`` of ``C``.  Pass ``B`` for ``A`` to get the second bound.
    """
    n = A.rows
    p = expand_tr_poly(A, C, TropMatrix.zeros(n), max_order)
    return TropScalar(max((c / m for m, _, c in p.mixed()), default=NEG_INF))


def _require_mixed(p: TropPoly2) -> list[tuple[int, int, float]]:
    mixed = p.mixed()
    if not mixed:
        raise NoMixedTerms("polynomial has no mixed monomials")
    return mixed


def eval_G(p: TropPoly2, s: TropScalar) -> TropScalar:
    """``G(s) = ⊕ c_{m,l}^{1/l} s^{-m/l}`` over the mixed monomials."""
    if s.is_zero:
        raise ValueError("G is defined for nonzero arguments only")
    mixed = _require_mixed(p)
    u = s.logval
    return TropScalar(max((c - m * u) / l for m, l, c in mixed))


def eval_H(p: TropPoly2, t: TropScalar) -> TropScalar:
    """``H(t) = ⊕ c_{m,l}^{1/m} t^{-l/m}``; the inverse function of ``G``."""
    if t.is_zero:
        raise ValueError("H is defined for nonzero arguments only")
    mixed = _require_mixed(p)
    v = t.logval
    return TropScalar(max((c - l * v) / m for m, l, c in mixed))


@dataclass(frozen=True)
class FrontierPiece:
    """One power-law arc ``β = coeff^{1/l} α^{-m/l}`` on ``[alpha_lo, alpha_hi]``."""

    alpha_lo: TropScalar
    alpha_hi: TropScalar
    m: int
    l: int
    coeff: TropScalar

    @property
    def exponent(self) -> Fraction:
        return Fraction(-self.m, self.l)

    def beta(self, alpha: TropScalar) -> TropScalar:
        return TropScalar((self.coeff.logval - self.m * alpha.logval) / self.l)


@dataclass(frozen=True)
class FrontierDescription:
    kind: str
    alpha_min: TropScalar
    alpha_max: TropScalar
    beta_at_alpha_max: TropScalar
    lambda_sigma: TropScalar
    mu_theta: TropScalar
    pieces: tuple[FrontierPiece, ...] = ()
    poly: TropPoly2 | None = field(default=None, compare=False, repr=False)

    @property
    def is_point(self) -> bool:
        return self.kind == POINT

    @property
    def beta_at_alpha_min(self) -> TropScalar:
        return self.beta(self.alpha_min)

    def contains_alpha(self, alpha: TropScalar, tol: float = DEFAULT_TOL) -> bool:
        a = alpha.logval
        return self.alpha_min.logval - tol <= a <= self.alpha_max.logval + tol

    def beta(self, alpha: TropScalar, tol: float = DEFAULT_TOL) -> TropScalar:
        """Frontier value of the second objective at ``alpha``.

        Raises
        ------
        NotOnFrontier
            If ``alpha`` lies outside ``[alpha_min, alpha_max]``.
        """
        if not self.contains_alpha(alpha, tol):
            raise NotOnFrontier(
                f"alpha must lie in [{self.alpha_min.value:.12g}, {self.alpha_max.value:.12g}]"
            )
        if self.is_point:
            return self.mu_theta
        return TropScalar(max(piece.beta(alpha).logval for piece in self.pieces))

    def on_frontier(self, alpha: TropScalar, beta: TropScalar, tol: float = DEFAULT_TOL) -> bool:
        if not self.contains_alpha(alpha, tol):
            return False
        return self.beta(alpha, tol).close(beta, tol)

    def geometric_midpoint(self) -> TropScalar:
        return TropScalar(0.5 * (self.alpha_min.logval + self.alpha_max.logval))

    def sample(self, count: int) -> list[tuple[TropScalar, TropScalar]]:
        """``count`` points with log-evenly spaced ``α`` along the frontier.

        A point frontier always yields its single point.
        """
        if count < 1:
            raise ValueError("sample count must be positive")
        if self.is_point:
            return [(self.alpha_min, self.mu_theta)]
        if count == 1:
            alphas = [self.alpha_min.logval]
        else:
            alphas = np.linspace(self.alpha_min.logval, self.alpha_max.logval, count)
        out = []
        for u in alphas:
            alpha = TropScalar(float(u))
            out.append((alpha, self.beta(alpha)))
        # pin the right end exactly to the documented endpoint value
        if count > 1:
            out[-1] = (self.alpha_max, self.beta_at_alpha_max)
        return out


def upper_envelope(
    mixed: list[tuple[int, int, float]], lo: float, hi: float, tol: float = DEFAULT_TOL
) -> list[tuple[float, float, int, int, float]]:
    """Upper envelope of the log-log lines ``v = (c - m u) / l`` on ``[lo, hi]``.

    Returns ``(u_lo, u_hi, m, l, c)`` tuples that tile ``[lo, hi]`` from left
    to right.  Slopes increase along the envelope; lines that only touch it
    at a single point are discarded.
    """
    best: dict[Fraction, tuple[float, int, int, float]] = {}
    for m, l, c in sorted(mixed):
        slope = Fraction(-m, l)
        icpt = c / l
        if slope not in best or icpt > best[slope][0]:
            best[slope] = (icpt, m, l, c)
    lines = [(float(s), *best[s]) for s in sorted(best)]

    def cross(a, b) -> float:
        return (a[1] - b[1]) / (b[0] - a[0])

    hull: list = []
    for line in lines:
        while len(hull) >= 2 and cross(hull[-2], line) <= cross(hull[-2], hull[-1]) + tol:
            hull.pop()
        hull.append(line)

    bounds = [-math.inf] + [cross(hull[i], hull[i + 1]) for i in range(len(hull) - 1)] + [math.inf]
    pieces = []
    for i, (_, _, m, l, c) in enumerate(hull):
        a, b = max(bounds[i], lo), min(bounds[i + 1], hi)
        if b - a > tol:
            pieces.append([a, b, m, l, c])
    if not pieces:
        # range narrower than the tolerance: use the line on top at the midpoint
        mid = 0.5 * (lo + hi)
        top = max(hull, key=lambda ln: ln[0] * mid + ln[1])
        pieces = [[lo, hi, top[2], top[3], top[4]]]
    pieces[0][0] = lo
    pieces[-1][1] = hi
    for prev, nxt in zip(pieces, pieces[1:]):
        nxt[0] = prev[1]
    return [tuple(p) for p in pieces]


def frontier(
    A: TropMatrix,
    B: TropMatrix,
    C: TropMatrix | None = None,
    tol: float = DEFAULT_TOL,
    max_order: int = MAX_ORDER,
) -> FrontierDescription:
    """Pareto frontier of ``minimize (x⁻Ax, x⁻Bx)`` subject to ``Cx <= x``.

    The frontier is the point ``(λ⊕σ, μ⊕θ)`` when ``H(μ⊕θ) <= λ⊕σ`` (ties
    within ``tol`` count as equal), and otherwise the curve ``β = G(α)`` for
    ``λ⊕σ <= α <= H(μ⊕θ)``.

    Raises
    ------
    InfeasibleConstraints
        If ``Tr(C) > 1``.
    DegenerateObjective
        If ``A`` or ``B`` has zero spectral radius.
    """
    if C is None:
        C = TropMatrix.zeros(A.rows)
    _check_problem(A, B, C, max_order)
    trc = tr_det(C)
    if trc.logval > tol:
        raise InfeasibleConstraints(f"Tr(C) = {trc.value:.12g} exceeds 1")
    for name, M in (("A", A), ("B", B)):
        if spectral_radius(M).is_zero:
            raise DegenerateObjective(f"spectral radius of {name} is zero")

    p = expand_tr_poly(A, B, C, max_order)
    ls, mt = poly_bounds(p)
    point = FrontierDescription(
        kind=POINT,
        alpha_min=ls,
        alpha_max=ls,
        beta_at_alpha_max=mt,
        lambda_sigma=ls,
        mu_theta=mt,
        poly=p,
    )
    if not p.mixed():
        return point
    h = eval_H(p, mt)
    if h.logval <= ls.logval + tol:
        return point
    pieces = tuple(
        FrontierPiece(TropScalar(a), TropScalar(b), m, l, TropScalar(c))
        for a, b, m, l, c in upper_envelope(p.mixed(), ls.logval, h.logval, tol)
    )
    return FrontierDescription(
        kind=SEGMENT,
        alpha_min=ls,
        alpha_max=h,
        beta_at_alpha_max=mt,
        lambda_sigma=ls,
        mu_theta=mt,
        pieces=pieces,
        poly=p,
    )


def frontier_unconstrained(
    A: TropMatrix, B: TropMatrix, tol: float = DEFAULT_TOL, max_order: int = MAX_ORDER
) -> FrontierDescription:
    """Frontier of the problem without rating constraints (``C = 0``)."""
    return frontier(A, B, TropMatrix.zeros(A.rows), tol=tol, max_order=max_order)


def parametric_matrix(
    A: TropMatrix, B: TropMatrix, C: TropMatrix, alpha: TropScalar, beta: TropScalar
) -> TropMatrix:
    """``α⁻¹A ⊕ β⁻¹B ⊕ C``."""
    return A.scale(alpha.inverse()) + B.scale(beta.inverse()) + C


def generator_matrix(
    A: TropMatrix,
    B: TropMatrix,
    C: TropMatrix,
    alpha: TropScalar,
    beta: TropScalar,
    front: FrontierDescription | None = None,
    tol: float = DEFAULT_TOL,
) -> StarMatrix:
    """Kleene star whose columns generate every Pareto-optimal ``x`` at ``(α, β)``.

    Raises
    ------
    NotOnFrontier
        If ``(alpha, beta)`` is not a frontier point.
    """
    if front is None:
        front = frontier(A, B, C, tol=tol)
    if not front.on_frontier(alpha, beta, tol):
        raise NotOnFrontier(
            f"({alpha.value:.12g}, {beta.value:.12g}) is not on the Pareto frontier"
        )
    return kleene_star(parametric_matrix(A, B, C, alpha, beta), tol)
