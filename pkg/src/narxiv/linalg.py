"""Interval vectors and matrices, interval matrix products, and verified
linear-system solving.

IntervalMatrix/IntervalVector store (lo, hi) float64 array pairs; arithmetic
goes through the kernel backend so every entry of a product encloses all
point products of member matrices, with deterministic left-to-right
accumulation inside each dot product.

solve_verified returns a box proven to contain the exact solution of every
member system of (A, b), or raises; it never returns an unverified answer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import (
    DimensionMismatchError,
    InvalidIntervalError,
    NonFiniteError,
    RankDeficientError,
    SingularMatrixError,
    VerificationFailedError,
)
from .interval import Interval

__all__ = [
    "IntervalVector",
    "IntervalMatrix",
    "mat_mul",
    "mat_vec",
    "solve_verified",
    "point_least_squares",
    "interval_least_squares",
    "SolverConfig",
    "save_interval_matrix_csv",
    "load_interval_matrix_csv",
    "save_interval_vector_csv",
    "load_interval_vector_csv",
]

RANK_TOLERANCE = 1e-10


def _prepare(lo, hi, ndim: int):
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if lo.ndim != ndim or hi.ndim != ndim:
        raise DimensionMismatchError(f"expected {ndim}-d endpoint arrays")
    if lo.shape != hi.shape:
        raise DimensionMismatchError(f"endpoint shapes differ: {lo.shape} vs {hi.shape}")
    if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
        raise NonFiniteError("non-finite interval endpoint")
    if np.any(lo > hi):
        raise InvalidIntervalError("lower endpoint above upper endpoint")
    lo.flags.writeable = False
    hi.flags.writeable = False
    return lo, hi


class IntervalVector:
    """1-d array of intervals, stored as immutable (lo, hi) pairs."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = _prepare(lo, hi, 1)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalVector is immutable")

    @classmethod
    def from_points(cls, values) -> "IntervalVector":
        values = np.asarray(values, dtype=np.float64)
        return cls(values, values.copy())

    @classmethod
    def from_intervals(cls, items) -> "IntervalVector":
        items = list(items)
        return cls([iv.lo for iv in items], [iv.hi for iv in items])

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, index) -> Interval:
        if isinstance(index, slice):
            return IntervalVector(self.lo[index], self.hi[index])
        return Interval(float(self.lo[index]), float(self.hi[index]))

    def __iter__(self):
        for a, b in zip(self.lo, self.hi):
            yield Interval(float(a), float(b))

    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def widths(self) -> np.ndarray:
        """Per-entry hi - lo, rounded upward."""
        w, _ = kernels.sub(self.hi, self.hi, self.lo, self.lo)
        return w

    def contains(self, points) -> bool:
        points = np.asarray(points, dtype=np.float64)
        return bool(np.all(self.lo <= points) and np.all(points <= self.hi))

    def encloses(self, other: "IntervalVector") -> bool:
        return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))

    def __add__(self, other: "IntervalVector") -> "IntervalVector":
        _same_len(self, other)
        return IntervalVector(*kernels.add(self.lo, self.hi, other.lo, other.hi))

    def __sub__(self, other: "IntervalVector") -> "IntervalVector":
        _same_len(self, other)
        return IntervalVector(*kernels.sub(self.lo, self.hi, other.lo, other.hi))

    def sum(self) -> Interval:
        """Interval sum of all entries, accumulated left to right."""
        lo, hi = kernels.accumulate(self.lo, self.hi)
        return Interval(lo, hi)

    def __repr__(self) -> str:
        return f"IntervalVector(len={len(self)})"


class IntervalMatrix:
    """Rectangular array of intervals, stored as immutable (lo, hi) pairs."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = _prepare(lo, hi, 2)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalMatrix is immutable")

    @classmethod
    def from_points(cls, values) -> "IntervalMatrix":
        values = np.asarray(values, dtype=np.float64)
        return cls(values, values.copy())

    @classmethod
    def identity(cls, n: int) -> "IntervalMatrix":
        eye = np.eye(n)
        return cls(eye, eye.copy())

    @property
    def shape(self) -> tuple[int, int]:
        return self.lo.shape

    def __getitem__(self, index) -> Interval:
        i, j = index
        return Interval(float(self.lo[i, j]), float(self.hi[i, j]))

    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def widths(self) -> np.ndarray:
        w, _ = kernels.sub(
            self.hi.ravel(), self.hi.ravel(), self.lo.ravel(), self.lo.ravel()
        )
        return w.reshape(self.shape)

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(self.lo.T.copy(), self.hi.T.copy())

    def contains(self, points) -> bool:
        points = np.asarray(points, dtype=np.float64)
        return bool(np.all(self.lo <= points) and np.all(points <= self.hi))

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} vs {other.shape}")
        lo, hi = kernels.add(
            self.lo.ravel(), self.hi.ravel(), other.lo.ravel(), other.hi.ravel()
        )
        return IntervalMatrix(lo.reshape(self.shape), hi.reshape(self.shape))

    def __sub__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} vs {other.shape}")
        lo, hi = kernels.sub(
            self.lo.ravel(), self.hi.ravel(), other.lo.ravel(), other.hi.ravel()
        )
        return IntervalMatrix(lo.reshape(self.shape), hi.reshape(self.shape))

    def __repr__(self) -> str:
        return f"IntervalMatrix(shape={self.shape})"


def _same_len(a: IntervalVector, b: IntervalVector) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(f"length {len(a)} vs {len(b)}")


def mat_mul(a: IntervalMatrix, b: IntervalMatrix) -> IntervalMatrix:
    """Interval matrix product; encloses every point product of members."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    lo, hi = kernels.matmul(a.lo, a.hi, b.lo, b.hi)
    return IntervalMatrix(lo, hi)


def mat_vec(a: IntervalMatrix, x: IntervalVector) -> IntervalVector:
    """Interval matrix-vector product."""
    if a.shape[1] != len(x):
        raise DimensionMismatchError(f"cannot apply {a.shape} to length {len(x)}")
    lo, hi = kernels.matmul(a.lo, a.hi, x.lo.reshape(-1, 1), x.hi.reshape(-1, 1))
    return IntervalVector(lo.ravel(), hi.ravel())


@dataclass(frozen=True)
class SolverConfig:
    """Verification-iteration knobs for solve_verified."""

    max_iterations: int = 15
    inflate_abs: float = 1e-12
    inflate_rel: float = 1e-8


def solve_verified(
    a: IntervalMatrix, b: IntervalVector, config: SolverConfig = SolverConfig()
) -> IntervalVector:
    """Guaranteed enclosure of the solution set of the square system A x = b.

    Preconditions the system with the approximate inverse of the midpoint
    matrix and runs a residual fixed-point iteration with epsilon inflation.
    Success requires the iterate to land in the interior of its own inflated
    candidate, which certifies (Brouwer) that every member system A~ x = b~
    with A~ in A, b~ in b has its exact solution inside the returned box.

    Raises SingularMatrixError when no preconditioner can be formed and
    VerificationFailedError when certification does not succeed within the
    iteration budget; a wrong box is never returned silently.
    """
    n, m = a.shape
    if n != m:
        raise DimensionMismatchError(f"matrix is {a.shape}, not square")
    if len(b) != n:
        raise DimensionMismatchError(f"vector length {len(b)} for {a.shape} system")

    a_mid = a.mid()
    b_mid = b.mid()
    try:
        precond = np.linalg.inv(a_mid)
        x_approx = np.linalg.solve(a_mid, b_mid)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"midpoint matrix is singular: {exc}") from exc
    if not (np.isfinite(precond).all() and np.isfinite(x_approx).all()):
        raise SingularMatrixError("midpoint matrix is numerically singular")

    r_mat = IntervalMatrix.from_points(precond)
    x0 = IntervalVector.from_points(x_approx)

    # z = R (b - A x0), c = I - R A, both rigorous interval quantities
    residual = b - mat_vec(a, x0)
    z = mat_vec(r_mat, residual)
    c = IntervalMatrix.identity(n) - mat_mul(r_mat, a)

    err = z
    for _ in range(config.max_iterations):
        pad = config.inflate_abs + config.inflate_rel * np.maximum(
            np.abs(err.lo), np.abs(err.hi)
        )
        inflated = IntervalVector(err.lo - pad, err.hi + pad)
        refined = z + mat_vec(c, inflated)
        if np.all(refined.lo > inflated.lo) and np.all(refined.hi < inflated.hi):
            return x0 + refined
        err = refined
    raise VerificationFailedError(
        f"no verified enclosure after {config.max_iterations} iterations"
    )


def point_least_squares(psi: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Classical least squares through an orthogonal factorization.

    Minimizes ||y - psi @ theta||_2; raises RankDeficientError when the
    smallest singular value falls below RANK_TOLERANCE times the largest.
    """
    psi = np.asarray(psi, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if psi.ndim != 2:
        raise DimensionMismatchError("regressor matrix must be 2-d")
    rows, cols = psi.shape
    if rows < cols:
        raise DimensionMismatchError(f"underdetermined system: {rows} rows, {cols} columns")
    if y.shape != (rows,):
        raise DimensionMismatchError(f"target length {y.shape} for {psi.shape} regressors")
    solution, _, _, singular_values = np.linalg.lstsq(psi, y, rcond=None)
    if singular_values.size == 0 or singular_values[-1] <= RANK_TOLERANCE * singular_values[0]:
        raise RankDeficientError(
            f"regressor matrix is rank deficient (sigma_min/sigma_max <= {RANK_TOLERANCE})"
        )
    return solution


def interval_least_squares(
    psi: IntervalMatrix, y: IntervalVector, config: SolverConfig = SolverConfig()
) -> IntervalVector:
    """Interval least squares via the normal equations.

    Forms (Psi^T Psi) theta = Psi^T y entirely in interval arithmetic and
    hands the square system to solve_verified.  The result encloses the
    exact least-squares solution of every member problem (Psi~, y~).  The
    conditioning penalty of the normal equations is accepted; when it is
    hopeless the verification step fails loudly rather than degrade.
    """
    rows, cols = psi.shape
    if rows < cols:
        raise DimensionMismatchError(f"underdetermined system: {rows} rows, {cols} columns")
    if len(y) != rows:
        raise DimensionMismatchError(f"target length {len(y)} for {psi.shape} regressors")
    mid_sv = np.linalg.svd(psi.mid(), compute_uv=False)
    if mid_sv[-1] <= RANK_TOLERANCE * mid_sv[0]:
        raise RankDeficientError("midpoint regressor matrix is rank deficient")
    psi_t = psi.transpose()
    gram = mat_mul(psi_t, psi)
    rhs = mat_vec(psi_t, y)
    return solve_verified(gram, rhs, config)


# -- CSV serialization ------------------------------------------------------


def _format_cell(lo: float, hi: float) -> str:
    if lo == hi:
        return repr(float(lo))
    return f"{float(lo)!r}:{float(hi)!r}"


def _parse_cell(cell: str) -> tuple[float, float]:
    cell = cell.strip()
    if ":" in cell:
        left, right = cell.split(":")
        return float(left), float(right)
    v = float(cell)
    return v, v


def save_interval_matrix_csv(path, matrix: IntervalMatrix) -> None:
    """Write a matrix as CSV with "lo:hi" cells (plain number if degenerate)."""
    rows, cols = matrix.shape
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(f"c{j}" for j in range(cols)) + "\n")
        for i in range(rows):
            fh.write(
                ",".join(
                    _format_cell(matrix.lo[i, j], matrix.hi[i, j]) for j in range(cols)
                )
                + "\n"
            )


def load_interval_matrix_csv(path) -> IntervalMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise InvalidIntervalError(f"empty interval matrix file: {path}")
    body = lines[1:]
    lo_rows = []
    hi_rows = []
    for line in body:
        cells = [_parse_cell(cell) for cell in line.split(",")]
        lo_rows.append([c[0] for c in cells])
        hi_rows.append([c[1] for c in cells])
    return IntervalMatrix(np.array(lo_rows), np.array(hi_rows))


def save_interval_vector_csv(path, vector: IntervalVector) -> None:
    """Write a vector as a one-column interval CSV."""
    save_interval_matrix_csv(
        path, IntervalMatrix(vector.lo.reshape(-1, 1), vector.hi.reshape(-1, 1))
    )


def load_interval_vector_csv(path) -> IntervalVector:
    matrix = load_interval_matrix_csv(path)
    if matrix.shape[1] != 1:
        raise DimensionMismatchError(f"expected one column, got {matrix.shape[1]}")
    return IntervalVector(matrix.lo[:, 0].copy(), matrix.hi[:, 0].copy())
