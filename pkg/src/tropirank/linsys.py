"""Tropical linear inequalities, closures and spectral radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonRegularVector, NotColumnRegular, ShapeError, StarUndefined
from .tropcore import (
    DEFAULT_TOL,
    TropMatrix,
    TropScalar,
    TropVector,
    conj_transpose,
    matrix_powers,
    trace,
)


def _order(A: TropMatrix) -> int:
    if not A.is_square:
        raise ShapeError(f"square matrix required, got {A.shape}")
    return A.rows


def power_traces(A: TropMatrix) -> list[float]:
    """Log traces of ``A, A^2, ..., A^n``."""
    n = _order(A)
    return [trace(P).logval for P in matrix_powers(A, n)]


def tr_det(A: TropMatrix) -> TropScalar:
    """Tropical determinant analogue ``Tr(A) = tr A ⊕ ... ⊕ tr A^n``."""
    return TropScalar(max(power_traces(A)))


def spectral_radius(A: TropMatrix) -> TropScalar:
    """Spectral radius ``⊕_k tr^{1/k}(A^k)``.

    Evaluated straight from the power traces; the maximum cycle mean
    computed by :func:`tropirank.oracle.karp_radius` must agree.
    """
    traces = power_traces(A)
    return TropScalar(max(t / k for k, t in enumerate(traces, start=1)))


@dataclass(frozen=True)
class StarMatrix:
    """A matrix ``base`` together with its Kleene star ``I ⊕ base ⊕ ... ⊕ base^{n-1}``."""

    base: TropMatrix
    star: TropMatrix

    def generate(self, u: TropVector) -> TropVector:
        """Return ``star ⊗ u`` for a regular parameter vector ``u``."""
        if not u.is_regular():
            raise NonRegularVector("generator parameter must be regular")
        return self.star @ u


def kleene_star(A: TropMatrix, tol: float = DEFAULT_TOL) -> StarMatrix:
    """Kleene star of ``A``; requires ``Tr(A) <= 1`` within ``tol``.

    Raises
    ------
    StarUndefined
        If the tropical determinant exceeds one.
    """
    n = _order(A)
    det = tr_det(A)
    if det.logval > tol:
        raise StarUndefined(f"Tr(A) = {det.value:.12g} exceeds 1")
    acc = TropMatrix.identity(n).logs
    for P in matrix_powers(A, n - 1):
        acc = np.maximum(acc, P.logs)
    return StarMatrix(base=A, star=TropMatrix(acc))


def solve_upper(A: TropMatrix, d: TropVector) -> TropVector:
    """Maximal solution ``(d⁻A)⁻`` of ``Ax <= d``.

    Every ``x`` below the returned vector solves the inequality and no other
    vector does.
    """
    if A.rows != d.dim:
        raise ShapeError(f"matrix with {A.rows} rows against vector of length {d.dim}")
    if not A.is_column_regular():
        raise NotColumnRegular("matrix has a zero column")
    if not d.is_regular():
        raise NonRegularVector("right-hand side must be regular")
    dA = np.max(conj_transpose(d).logs[:, None] + A.logs, axis=0)
    return TropVector(-dA)


def regular_solutions_exist(A: TropMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``Ax <= x`` has regular solutions, i.e. ``Tr(A) <= 1``."""
    return tr_det(A).logval <= tol
