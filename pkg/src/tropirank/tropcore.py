"""Max-times semifield scalars, vectors and dense matrices.

All values are stored as natural logarithms, so the semifield operations
become ``max`` (addition) and ``+`` (multiplication).  The semifield zero is
represented by ``-inf``, which is absorbing under ``+`` exactly, so
``ZERO * x == ZERO`` holds without any rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import NonRegularVector, ShapeError, ZeroInverseError

DEFAULT_TOL = 1e-9
NEG_INF = -math.inf

Number = Union[int, float, str, Fraction]


def parse_entry(value: Number) -> float:
    """Convert a ratio-scale literal to its log-domain value.

    Accepts ints, floats, :class:`~fractions.Fraction` and strings such as
    ``"1/3"`` or ``"0.25"``.  String and integer inputs are parsed exactly and
    converted to a logarithm once.  Zero maps to ``-inf``.

    Raises
    ------
    ValueError
        For negative, non-finite or malformed inputs (including ``"1/0"``).
    """
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, float):
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"entries must be finite and non-negative, got {value!r}")
        return math.log(value) if value > 0 else NEG_INF
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational literal {value!r}") from exc
    elif isinstance(value, (int, Fraction)):
        frac = Fraction(value)
    else:
        raise ValueError(f"unsupported entry type {type(value).__name__}")
    if frac < 0:
        raise ValueError(f"entries must be non-negative, got {value!r}")
    if frac == 0:
        return NEG_INF
    return math.log(frac.numerator) - math.log(frac.denominator)


@dataclass(frozen=True, order=True)
class TropScalar:
    """An element of the max-times semifield, held as its natural log."""

    logval: float

    @classmethod
    def of(cls, value: Number) -> "TropScalar":
        return cls(parse_entry(value))

    @classmethod
    def zero(cls) -> "TropScalar":
        return cls(NEG_INF)

    @classmethod
    def one(cls) -> "TropScalar":
        return cls(0.0)

    @property
    def value(self) -> float:
        return math.exp(self.logval)

    @property
    def is_zero(self) -> bool:
        return self.logval == NEG_INF

    def oplus(self, other: "TropScalar") -> "TropScalar":
        return TropScalar(max(self.logval, other.logval))

    def otimes(self, other: "TropScalar") -> "TropScalar":
        return TropScalar(self.logval + other.logval)

    def inverse(self) -> "TropScalar":
        if self.is_zero:
            raise ZeroInverseError("the semifield zero has no inverse")
        return TropScalar(-self.logval)

    def power(self, r: float) -> "TropScalar":
        if self.is_zero:
            if r > 0:
                return self
            if r == 0:
                return TropScalar.one()
            raise ZeroInverseError("negative power of the semifield zero")
        if r == 0:
            return TropScalar.one()
        return TropScalar(self.logval * r)

    def __add__(self, other):
        if not isinstance(other, TropScalar):
            return NotImplemented
        return self.oplus(other)

    def __mul__(self, other):
        if not isinstance(other, TropScalar):
            return NotImplemented
        return self.otimes(other)

    def __truediv__(self, other: "TropScalar") -> "TropScalar":
        return self.otimes(other.inverse())

    def __pow__(self, r: float) -> "TropScalar":
        return self.power(r)

    def close(self, other: "TropScalar", tol: float = DEFAULT_TOL) -> bool:
        return log_close(self.logval, other.logval, tol)

    def le(self, other: "TropScalar", tol: float = DEFAULT_TOL) -> bool:
        return self.logval <= other.logval + tol

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"TropScalar({self.value:.12g})"


ZERO = TropScalar(NEG_INF)
ONE = TropScalar(0.0)


def log_close(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    if a == NEG_INF or b == NEG_INF:
        return a == b
    return abs(a - b) <= tol


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def maxplus_product(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Max-plus product of two log-domain arrays."""
    return np.max(X[:, :, None] + Y[None, :, :], axis=1)


class TropMatrix:
    """Dense immutable matrix over the max-times semifield.

    Parameters
    ----------
    logs : array_like
        2-D array of natural logs of the entries; ``-inf`` is the zero.
    """

    __slots__ = ("_logs",)

    def __init__(self, logs):
        arr = np.asarray(logs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ShapeError(f"expected a non-empty 2-D array, got shape {arr.shape}")
        if np.isnan(arr).any() or np.isposinf(arr).any():
            raise ValueError("log entries must be finite or -inf")
        self._logs = _readonly(arr)

    @classmethod
    def from_values(cls, rows: Iterable[Iterable[Number]]) -> "TropMatrix":
        """Build from ratio-scale entries (numbers or ``"p/q"`` strings)."""
        parsed = [[parse_entry(v) for v in row] for row in rows]
        widths = {len(r) for r in parsed}
        if len(widths) != 1:
            raise ShapeError("ragged matrix rows")
        return cls(parsed)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "TropMatrix":
        return cls(np.full((rows, rows if cols is None else cols), NEG_INF))

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        logs = np.full((n, n), NEG_INF)
        np.fill_diagonal(logs, 0.0)
        return cls(logs)

    @property
    def logs(self) -> np.ndarray:
        return self._logs

    @property
    def shape(self) -> tuple[int, int]:
        return self._logs.shape

    @property
    def rows(self) -> int:
        return self._logs.shape[0]

    @property
    def cols(self) -> int:
        return self._logs.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def values(self) -> np.ndarray:
        """Entries on the ratio scale (zero entries become ``0.0``)."""
        return np.exp(self._logs)

    def __getitem__(self, idx) -> TropScalar:
        i, j = idx
        return TropScalar(float(self._logs[i, j]))

    def column(self, j: int) -> "TropVector":
        return TropVector(self._logs[:, j])

    def columns(self) -> list["TropVector"]:
        return [self.column(j) for j in range(self.cols)]

    def is_column_regular(self) -> bool:
        return bool(np.all(np.any(self._logs > NEG_INF, axis=0)))

    def scale(self, c: TropScalar) -> "TropMatrix":
        return TropMatrix(self._logs + c.logval)

    def __add__(self, other: "TropMatrix") -> "TropMatrix":
        return mat_add(self, other)

    def __matmul__(self, other):
        if isinstance(other, TropVector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __rmul__(self, c: TropScalar) -> "TropMatrix":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._logs, other._logs))

    __hash__ = None

    def allclose(self, other: "TropMatrix", tol: float = DEFAULT_TOL) -> bool:
        return self.shape == other.shape and _logs_close(self._logs, other._logs, tol)

    def le(self, other: "TropMatrix", tol: float = DEFAULT_TOL) -> bool:
        """Entrywise ``self <= other`` within ``tol`` in the log domain."""
        _check_same_shape(self, other)
        return bool(np.all(self._logs <= other._logs + tol))

    def __repr__(self) -> str:
        return f"TropMatrix({np.array2string(self.values(), precision=6)})"


class TropVector:
    """Dense immutable column vector over the max-times semifield."""

    __slots__ = ("_logs",)

    def __init__(self, logs):
        arr = np.asarray(logs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ShapeError(f"expected a non-empty 1-D array, got shape {arr.shape}")
        if np.isnan(arr).any() or np.isposinf(arr).any():
            raise ValueError("log entries must be finite or -inf")
        self._logs = _readonly(arr)

    @classmethod
    def from_values(cls, values: Iterable[Number]) -> "TropVector":
        return cls([parse_entry(v) for v in values])

    @property
    def logs(self) -> np.ndarray:
        return self._logs

    @property
    def dim(self) -> int:
        return self._logs.size

    def __len__(self) -> int:
        return self._logs.size

    def values(self) -> np.ndarray:
        return np.exp(self._logs)

    def __getitem__(self, i: int) -> TropScalar:
        return TropScalar(float(self._logs[i]))

    def is_regular(self) -> bool:
        return bool(np.all(self._logs > NEG_INF))

    def is_zero(self) -> bool:
        return bool(np.all(self._logs == NEG_INF))

    def scale(self, c: TropScalar) -> "TropVector":
        return TropVector(self._logs + c.logval)

    def __rmul__(self, c: TropScalar) -> "TropVector":
        return self.scale(c)

    def __add__(self, other: "TropVector") -> "TropVector":
        if self.dim != other.dim:
            raise ShapeError("vector dimensions differ")
        return TropVector(np.maximum(self._logs, other._logs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropVector):
            return NotImplemented
        return bool(np.array_equal(self._logs, other._logs))

    __hash__ = None

    def allclose(self, other: "TropVector", tol: float = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and _logs_close(self._logs, other._logs, tol)

    def le(self, other: "TropVector", tol: float = DEFAULT_TOL) -> bool:
        return bool(np.all(self._logs <= other._logs + tol))

    def __repr__(self) -> str:
        return f"TropVector({np.array2string(self.values(), precision=6)})"


def _logs_close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    za, zb = a == NEG_INF, b == NEG_INF
    if not np.array_equal(za, zb):
        return False
    live = ~za
    return bool(np.all(np.abs(a[live] - b[live]) <= tol))


def _check_same_shape(X: TropMatrix, Y: TropMatrix) -> None:
    if X.shape != Y.shape:
        raise ShapeError(f"shape mismatch: {X.shape} vs {Y.shape}")


def _check_square(X: TropMatrix) -> int:
    if not X.is_square:
        raise ShapeError(f"square matrix required, got {X.shape}")
    return X.rows


def mat_add(X: TropMatrix, Y: TropMatrix) -> TropMatrix:
    """Entrywise maximum of two equally shaped matrices."""
    _check_same_shape(X, Y)
    return TropMatrix(np.maximum(X.logs, Y.logs))


def mat_mul(X: TropMatrix, Y: TropMatrix) -> TropMatrix:
    """Max-times product ``(XY)_ij = max_k x_ik y_kj``."""
    if X.cols != Y.rows:
        raise ShapeError(f"cannot multiply {X.shape} by {Y.shape}")
    return TropMatrix(maxplus_product(X.logs, Y.logs))


def mat_vec(X: TropMatrix, v: TropVector) -> TropVector:
    if X.cols != v.dim:
        raise ShapeError(f"cannot multiply {X.shape} by vector of length {v.dim}")
    return TropVector(np.max(X.logs + v.logs[None, :], axis=1))


def mat_pow(X: TropMatrix, p: int) -> TropMatrix:
    n = _check_square(X)
    if p < 0:
        raise ValueError("matrix power must be non-negative")
    result = TropMatrix.identity(n)
    for _ in range(p):
        result = mat_mul(result, X)
    return result


def matrix_powers(X: TropMatrix, count: int) -> list[TropMatrix]:
    """Return ``[X, X^2, ..., X^count]``."""
    _check_square(X)
    out = []
    current = X
    for _ in range(count):
        out.append(current)
        current = mat_mul(current, X)
    return out


def trace(X: TropMatrix) -> TropScalar:
    _check_square(X)
    return TropScalar(float(np.max(np.diagonal(X.logs))))


def conj_transpose(x: TropVector) -> TropVector:
    """Entrywise inverse of a nonzero vector, keeping zero entries at zero.

    The result carries row-vector semantics: ``x⁻ y`` is the max-times inner
    product ``max_j y_j / x_j`` over the nonzero entries of ``x``.
    """
    if x.is_zero():
        raise ZeroInverseError("conjugate transpose of the zero vector")
    logs = np.where(x.logs == NEG_INF, NEG_INF, -x.logs)
    return TropVector(logs)


def inner(row: TropVector, col: TropVector) -> TropScalar:
    if row.dim != col.dim:
        raise ShapeError("vector dimensions differ")
    return TropScalar(float(np.max(row.logs + col.logs)))


def quad_form(x: TropVector, M: TropMatrix) -> TropScalar:
    """Evaluate ``x⁻ M x = max_ij m_ij x_j / x_i`` for a regular ``x``."""
    n = _check_square(M)
    if x.dim != n:
        raise ShapeError(f"vector of length {x.dim} against matrix of order {n}")
    if not x.is_regular():
        raise NonRegularVector("quadratic form needs a vector without zero entries")
    return TropScalar(float(np.max(M.logs + x.logs[None, :] - x.logs[:, None])))


def collinear(x: TropVector, y: TropVector, tol: float = DEFAULT_TOL) -> bool:
    """True when ``y = c x`` for some positive ``c``, within ``tol`` (log domain)."""
    if x.dim != y.dim:
        raise ShapeError("vector dimensions differ")
    zx, zy = x.logs == NEG_INF, y.logs == NEG_INF
    if not np.array_equal(zx, zy):
        return False
    live = ~zx
    if not live.any():
        return True
    diff = y.logs[live] - x.logs[live]
    return bool(diff.max() - diff.min() <= tol)


def as_matrix(rows: Sequence[Sequence[Number]] | TropMatrix) -> TropMatrix:
    if isinstance(rows, TropMatrix):
        return rows
    return TropMatrix.from_values(rows)
