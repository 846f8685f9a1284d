"""Pairwise-comparison rating problems on top of the tropical solver.

A :class:`DecisionProblem` bundles two comparison matrices and a constraint
matrix ``C`` whose entry ``c_ij`` demands ``x_i >= c_ij x_j``.  Solving it
gives the Pareto frontier of the two log-Chebyshev errors together with a
factory that turns any frontier point into rating vectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InfeasibleConstraints, NotOnFrontier, ShapeError, ValidationError
from .linsys import kleene_star, tr_det
from .polyfront import (
    MAX_ORDER,
    FrontierDescription,
    expand_tr_poly,
    frontier,
    generator_matrix,
    poly_bounds,
)
from .tropcore import (
    DEFAULT_TOL,
    NEG_INF,
    TropMatrix,
    TropScalar,
    TropVector,
    as_matrix,
    collinear,
    quad_form,
)

RECIPROCITY_TOL = 1e-6


class NormalizePolicy(str, enum.Enum):
    MAX_ONE = "max"
    SUM_ONE = "sum"
    FIRST_ONE = "first"


@dataclass(frozen=True)
class Violation:
    """A single defect found while validating an input matrix.

    ``kind`` is one of ``"positivity"``, ``"diagonal"``, ``"reciprocity"`` or
    ``"constraint_cycle"``.  Indices are zero-based.
    """

    kind: str
    i: int
    j: int
    value: float
    matrix: str = ""
    cycle: tuple[int, ...] = ()

    def describe(self) -> str:
        where = f"{self.matrix}[{self.i + 1},{self.j + 1}]" if self.matrix else f"({self.i + 1},{self.j + 1})"
        if self.kind == "constraint_cycle":
            path = "->".join(str(k + 1) for k in self.cycle)
            return f"{self.matrix or 'C'}: Tr = {self.value:.12g} > 1 via cycle {path}"
        return f"{where}: {self.kind} violation, value {self.value:.12g}"


def validate_pairwise(M: TropMatrix, tol_rel: float = RECIPROCITY_TOL, name: str = "") -> list[Violation]:
    """Check that ``M`` is positive and symmetrically reciprocal.

    Reciprocity is reported once per unordered pair, at the upper-triangle
    position.  Returns an empty list for a valid matrix.
    """
    if not M.is_square:
        raise ShapeError(f"square matrix required, got {M.shape}")
    out = []
    vals = M.values()
    logs = M.logs
    n = M.rows
    log_tol = math.log1p(tol_rel)
    for i in range(n):
        for j in range(n):
            if logs[i, j] == NEG_INF:
                out.append(Violation("positivity", i, j, 0.0, name))
    for i in range(n):
        if logs[i, i] > NEG_INF and abs(logs[i, i]) > log_tol:
            out.append(Violation("diagonal", i, i, float(vals[i, i]), name))
        for j in range(i + 1, n):
            if logs[i, j] == NEG_INF or logs[j, i] == NEG_INF:
                continue
            if abs(logs[i, j] + logs[j, i]) > log_tol:
                out.append(Violation("reciprocity", i, j, float(vals[i, j] * vals[j, i]), name))
    return out


def _heaviest_closed_walk(C: TropMatrix) -> tuple[int, list[int]] | None:
    """Find a closed walk of length <= n with positive log weight.

    Returns ``(length, nodes)`` with ``nodes[0] == nodes[-1]``, or ``None``.
    """
    n = C.rows
    logs = C.logs
    # best[k][i, j]: heaviest walk of length k+1 from i to j; pred for backtracking
    best = [logs.copy()]
    preds = [None]
    for _ in range(1, n):
        prev = best[-1]
        cand = prev[:, :, None] + logs[None, :, :]
        preds.append(np.argmax(cand, axis=1))
        best.append(np.max(cand, axis=1))
    for k, W in enumerate(best):
        diag = np.diagonal(W)
        i = int(np.argmax(diag))
        if diag[i] > 0:
            nodes = [i]
            j = i
            for level in range(k, 0, -1):
                j = int(preds[level][i, j])
                nodes.append(j)
            nodes.append(i)
            nodes.reverse()
            return k + 1, nodes
    return None


def _positive_simple_cycle(C: TropMatrix, walk: list[int]) -> tuple[int, ...]:
    """Split a positive closed walk into simple cycles and return a positive one."""
    logs = C.logs
    stack: list[int] = []
    best_cycle, best_w = tuple(walk), -math.inf
    for v in walk:
        if v in stack:
            k = stack.index(v)
            cyc = stack[k:] + [v]
            w = sum(logs[a, b] for a, b in zip(cyc, cyc[1:]))
            if w > best_w:
                best_cycle, best_w = tuple(cyc), w
            del stack[k + 1 :]
        else:
            stack.append(v)
    return best_cycle


def validate_constraints(C: TropMatrix, tol: float = DEFAULT_TOL, name: str = "C") -> list[Violation]:
    """Report ``Tr(C) > 1`` together with a simple cycle of weight above one."""
    if not C.is_square:
        raise ShapeError(f"square matrix required, got {C.shape}")
    if np.any(np.isnan(C.logs)):
        raise ValueError("constraint entries must be non-negative")
    det = tr_det(C)
    if det.logval <= tol:
        return []
    found = _heaviest_closed_walk(C)
    cycle = _positive_simple_cycle(C, found[1]) if found else ()
    i = cycle[0] if cycle else 0
    j = cycle[1] if len(cycle) > 1 else i
    return [Violation("constraint_cycle", i, j, det.value, name, cycle)]


def symmetrize(M: TropMatrix) -> TropMatrix:
    """Nearest reciprocal matrix in the log domain: ``m_ij <- sqrt(m_ij / m_ji)``."""
    logs = M.logs
    if np.any(logs == NEG_INF):
        raise ValidationError("cannot symmetrize a matrix with zero entries")
    return TropMatrix(0.5 * (logs - logs.T))


@dataclass(frozen=True)
class DecisionProblem:
    """Validated input triple for the bi-criteria rating problem.

    Use :meth:`build` to construct one from raw entries; the constructor
    assumes the matrices have already been checked.
    """

    A: TropMatrix
    B: TropMatrix
    C: TropMatrix
    labels: tuple[str, ...]
    repaired: tuple[Violation, ...] = ()

    @property
    def n(self) -> int:
        return self.A.rows

    @classmethod
    def build(
        cls,
        A,
        B,
        C=None,
        labels: Sequence[str] | None = None,
        strict: bool = True,
        tol_rel: float = RECIPROCITY_TOL,
        tol: float = DEFAULT_TOL,
    ) -> "DecisionProblem":
        """Validate and assemble a problem.

        In strict mode any pairwise violation raises :class:`ValidationError`.
        In permissive mode reciprocity and diagonal defects are repaired with
        :func:`symmetrize`; positivity defects and infeasible constraints
        always raise.
        """
        A, B = as_matrix(A), as_matrix(B)
        if A.shape != B.shape or not A.is_square:
            raise ShapeError(f"A and B must be square of one order, got {A.shape} and {B.shape}")
        n = A.rows
        C = TropMatrix.zeros(n) if C is None else as_matrix(C)
        if C.shape != A.shape:
            raise ShapeError(f"C has shape {C.shape}, expected {A.shape}")
        if labels is None:
            labels = [f"A{i + 1}" for i in range(n)]
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise ShapeError(f"{len(labels)} labels for {n} alternatives")
        if len(set(labels)) != n:
            raise ValidationError("alternative labels must be unique")

        found = validate_pairwise(A, tol_rel, "A") + validate_pairwise(B, tol_rel, "B")
        if found:
            if strict or any(v.kind == "positivity" for v in found):
                raise ValidationError(
                    "; ".join(v.describe() for v in found), found
                )
            A, B = symmetrize(A), symmetrize(B)
        cviol = validate_constraints(C, tol)
        if cviol:
            raise InfeasibleConstraints(cviol[0].describe())
        return cls(A=A, B=B, C=C, labels=labels, repaired=tuple(found))


def chebyshev_error(M: TropMatrix, x: TropVector) -> TropScalar:
    """Max-ratio approximation error ``max_ij m_ij x_j / x_i``.

    Its natural log is the log-Chebyshev distance between ``M`` and the
    consistent matrix ``(x_i / x_j)``.
    """
    return quad_form(x, M)


def normalize(x: TropVector, policy: NormalizePolicy | str = NormalizePolicy.MAX_ONE) -> TropVector:
    policy = NormalizePolicy(policy)
    if not x.is_regular():
        raise ValueError("only regular vectors can be normalized")
    logs = x.logs
    if policy is NormalizePolicy.MAX_ONE:
        shift = logs.max()
    elif policy is NormalizePolicy.FIRST_ONE:
        shift = logs[0]
    else:
        shift = logs.max() + math.log(float(np.exp(logs - logs.max()).sum()))
    return TropVector(logs - shift)


def minimal_generators(S: TropMatrix, tol: float = DEFAULT_TOL) -> list[TropVector]:
    """Leftmost column of each collinearity class of ``S``, in column order."""
    if not S.is_column_regular():
        raise ValueError("generator matrix must be column-regular")
    kept: list[TropVector] = []
    for col in S.columns():
        if not any(collinear(k, col, tol) for k in kept):
            kept.append(col)
    return kept


@dataclass(frozen=True)
class RatingSolution:
    """Rating vectors attached to one frontier point ``(chosen_alpha, chosen_beta)``."""

    frontier: FrontierDescription
    chosen_alpha: TropScalar
    chosen_beta: TropScalar
    generators: tuple[TropVector, ...]
    ratings: TropVector
    star: TropMatrix
    alpha_defaulted: bool = False
    policy: NormalizePolicy = NormalizePolicy.MAX_ONE


@dataclass(frozen=True)
class RatingFactory:
    """Maps frontier points of a solved problem to :class:`RatingSolution` s."""

    problem: DecisionProblem
    frontier: FrontierDescription
    tol: float = DEFAULT_TOL

    def __call__(
        self,
        alpha: TropScalar | float | None = None,
        policy: NormalizePolicy | str = NormalizePolicy.MAX_ONE,
    ) -> RatingSolution:
        """Ratings at ``alpha``.

        When ``alpha`` is omitted the left end of a point frontier, or the
        geometric midpoint of a segment, is used.  The representative rating
        vector is the star applied to the all-ones parameter vector.
        """
        policy = NormalizePolicy(policy)
        front = self.frontier
        defaulted = alpha is None
        if alpha is None:
            alpha = front.alpha_min if front.is_point else front.geometric_midpoint()
        elif not isinstance(alpha, TropScalar):
            alpha = TropScalar.of(float(alpha))
        if not front.contains_alpha(alpha, self.tol):
            raise NotOnFrontier(
                f"alpha must lie in [{front.alpha_min.value:.12g}, {front.alpha_max.value:.12g}]"
            )
        # snap to the exact endpoint so the generator sees the frontier value
        if abs(alpha.logval - front.alpha_min.logval) <= self.tol:
            alpha = front.alpha_min
        elif abs(alpha.logval - front.alpha_max.logval) <= self.tol:
            alpha = front.alpha_max
        beta = front.beta(alpha, self.tol)
        p = self.problem
        S = generator_matrix(p.A, p.B, p.C, alpha, beta, front=front, tol=self.tol).star
        gens = tuple(normalize(g, policy) for g in minimal_generators(S, self.tol))
        ones = TropVector(np.zeros(p.n))
        ratings = normalize(S @ ones, policy)
        return RatingSolution(
            frontier=front,
            chosen_alpha=alpha,
            chosen_beta=beta,
            generators=gens,
            ratings=ratings,
            star=S,
            alpha_defaulted=defaulted,
            policy=policy,
        )


def solve(
    problem: DecisionProblem, tol: float = DEFAULT_TOL, max_order: int = MAX_ORDER
) -> tuple[FrontierDescription, RatingFactory]:
    front = frontier(problem.A, problem.B, problem.C, tol=tol, max_order=max_order)
    return front, RatingFactory(problem, front, tol)


def solve_single(
    A: TropMatrix, C: TropMatrix | None = None, tol: float = DEFAULT_TOL, max_order: int = MAX_ORDER
) -> tuple[TropScalar, list[TropVector]]:
    """Minimum max-ratio error of ``A`` under ``Cx <= x`` and its solution generators.

    Returns the least ``Δ`` with ``Tr(Δ⁻¹A ⊕ C) <= 1`` and the normalized
    minimal generators of ``(Δ⁻¹A ⊕ C)*``.
    """
    A = as_matrix(A)
    n = A.rows
    C = TropMatrix.zeros(n) if C is None else as_matrix(C)
    det = tr_det(C)
    if det.logval > tol:
        raise InfeasibleConstraints(f"Tr(C) = {det.value:.12g} exceeds 1")
    p = expand_tr_poly(A, TropMatrix.zeros(n), C, max_order)
    delta, _ = poly_bounds(p)
    if delta.is_zero:
        raise ValueError("criterion matrix has zero spectral radius")
    S = kleene_star(A.scale(delta.inverse()) + C, tol).star
    gens = [normalize(g) for g in minimal_generators(S, tol)]
    return delta, gens


__all__ = [
    "DecisionProblem",
    "NormalizePolicy",
    "RatingFactory",
    "RatingSolution",
    "Violation",
    "chebyshev_error",
    "minimal_generators",
    "normalize",
    "solve",
    "solve_single",
    "symmetrize",
    "validate_constraints",
    "validate_pairwise",
]
