"""NARX polynomial model representation, evaluation, and simulation.

A model is an ordered list of regressor terms, each a monomial in lagged
outputs y(k-i) and lagged inputs u(k-j), paired with one coefficient per
term.  Noise-process regressors are deliberately not representable: model
structures here are pure NARX, and any moving-average error terms remain
outside the estimated model.

Terms are kept in a canonical form (output factors before input factors,
lags ascending, exponents merged) so that their text rendering is unique
and model files round-trip byte for byte.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from ._backend import kernels
from .errors import (
    DimensionMismatchError,
    DivergenceError,
    InsufficientDataError,
    ModelFileError,
    NonFiniteError,
)
from .interval import Interval
from .linalg import IntervalMatrix, IntervalVector, mat_vec

__all__ = [
    "RegressorTerm",
    "ModelStructure",
    "Dataset",
    "candidate_terms",
    "build_regressor_matrix",
    "build_interval_regressor_matrix",
    "one_step_ahead",
    "one_step_ahead_interval",
    "free_run",
    "free_run_interval",
    "read_dataset_csv",
    "write_dataset_csv",
    "read_model_file",
    "write_model_file",
]

_SIGNAL_ORDER = {"y": 0, "u": 1}
_FACTOR_RE = re.compile(r"^([yu])\(k-(\d+)\)(?:\^(\d+))?$")


@dataclass(frozen=True)
class RegressorTerm:
    """One monomial of lagged signals; factors are (signal, lag, exponent).

    The empty factor tuple is the constant term.  Construction normalizes:
    factors are sorted by (signal, lag) with y before u and duplicate
    (signal, lag) factors merged by adding exponents.
    """

    factors: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        merged: dict[tuple[str, int], int] = {}
        for signal, lag, exponent in self.factors:
            if signal not in _SIGNAL_ORDER:
                raise ValueError(f"unknown signal {signal!r}")
            lag = int(lag)
            exponent = int(exponent)
            if exponent < 1:
                raise ValueError(f"exponent must be >= 1, got {exponent}")
            min_lag = 1 if signal == "y" else 0
            if lag < min_lag:
                raise ValueError(f"lag {lag} too small for signal {signal!r}")
            key = (signal, lag)
            merged[key] = merged.get(key, 0) + exponent
        canonical = tuple(
            (signal, lag, merged[(signal, lag)])
            for signal, lag in sorted(merged, key=lambda k: (_SIGNAL_ORDER[k[0]], k[1]))
        )
        object.__setattr__(self, "factors", canonical)

    @classmethod
    def constant(cls) -> "RegressorTerm":
        return cls(())

    @classmethod
    def of(cls, *factors: tuple[str, int, int]) -> "RegressorTerm":
        return cls(tuple(factors))

    @property
    def degree(self) -> int:
        return sum(exponent for _, _, exponent in self.factors)

    def max_lag(self, signal: str | None = None) -> int:
        lags = [lag for sig, lag, _ in self.factors if signal is None or sig == signal]
        return max(lags, default=0)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for signal, lag, exponent in self.factors:
            text = f"{signal}(k-{lag})"
            if exponent > 1:
                text += f"^{exponent}"
            parts.append(text)
        return "*".join(parts)

    @classmethod
    def parse(cls, text: str) -> "RegressorTerm":
        body = text.strip()
        if body == "1":
            return cls.constant()
        factors = []
        for piece in body.split("*"):
            match = _FACTOR_RE.match(piece.strip())
            if match is None:
                raise ModelFileError(f"cannot parse regressor factor {piece!r}")
            signal, lag, exponent = match.group(1), int(match.group(2)), match.group(3)
            factors.append((signal, lag, int(exponent) if exponent else 1))
        return cls(tuple(factors))


@dataclass(frozen=True)
class ModelStructure:
    """Ordered regressor terms plus the lag/degree bounds they live in.

    n_y and n_u are the maximum output/input lag counts, d the input dead
    time (input lags run d .. d+n_u-1), l the maximum total degree.
    """

    terms: tuple[RegressorTerm, ...]
    n_y: int
    n_u: int
    d: int
    l: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("duplicate regressor terms")
        if self.l < 1:
            raise ValueError("maximum degree l must be >= 1")
        if self.n_y < 0 or self.n_u < 0 or self.d < 0:
            raise ValueError("lag bounds must be nonnegative")
        for term in self.terms:
            if term.degree > self.l:
                raise ValueError(f"term {term} exceeds degree bound l={self.l}")
            for signal, lag, _ in term.factors:
                if signal == "y" and not 1 <= lag <= self.n_y:
                    raise ValueError(f"term {term} uses y lag {lag} outside 1..{self.n_y}")
                if signal == "u" and not self.d <= lag <= self.d + self.n_u - 1:
                    raise ValueError(
                        f"term {term} uses u lag {lag} outside "
                        f"{self.d}..{self.d + self.n_u - 1}"
                    )

    @property
    def max_lag(self) -> int:
        return max((term.max_lag() for term in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class Dataset:
    """Paired input/output records u(k), y(k) with sample metadata."""

    u: np.ndarray
    y: np.ndarray
    sample_time: float = 1.0
    name: str = ""

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if u.ndim != 1 or y.ndim != 1:
            raise DimensionMismatchError("u and y must be 1-d")
        if u.shape != y.shape:
            raise DimensionMismatchError(f"u length {u.shape[0]} != y length {y.shape[0]}")
        if not (np.isfinite(u).all() and np.isfinite(y).all()):
            raise NonFiniteError("dataset contains non-finite samples")
        if self.sample_time <= 0:
            raise ValueError("sample_time must be positive")
        u.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.y.shape[0]


def candidate_terms(l: int, n_y: int, n_u: int, d: int = 1) -> list[RegressorTerm]:
    """All monomials of degree 0..l over y(k-1..n_y) and u(k-d..d+n_u-1).

    The constant term comes first, then degrees ascending with output lags
    before input lags, so the ordering is deterministic.  The count equals
    comb(n_y + n_u + l, l).
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if n_y < 0 or n_u < 0 or d < 0:
        raise ValueError("lag bounds must be nonnegative")
    variables = [("y", lag) for lag in range(1, n_y + 1)]
    variables += [("u", lag) for lag in range(d, d + n_u)]
    terms = [RegressorTerm.constant()]
    for degree in range(1, l + 1):
        for combo in combinations_with_replacement(variables, degree):
            factors = tuple((signal, lag, 1) for signal, lag in combo)
            terms.append(RegressorTerm(factors))
    assert len(terms) == comb(len(variables) + l, l)
    return terms


def _require_length(n_samples: int, max_lag: int) -> None:
    if n_samples <= max_lag:
        raise InsufficientDataError(
            f"need more than {max_lag} samples, got {n_samples}"
        )


def _term_column(term: RegressorTerm, u: np.ndarray, y: np.ndarray, start: int) -> np.ndarray:
    """Point evaluation of one term for rows k = start .. N-1.

    Factors multiply in canonical order, exponents expanded one product at a
    time, so results are reproducible and match a per-sample oracle exactly.
    """
    n = y.shape[0]
    col = np.ones(n - start)
    for signal, lag, exponent in term.factors:
        series = y if signal == "y" else u
        lagged = series[start - lag : n - lag]
        for _ in range(exponent):
            col = col * lagged
    return col


def build_regressor_matrix(
    data: Dataset, terms, max_lag: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Point regressor matrix and aligned target vector.

    Rows cover k = max_lag .. N-1; rows with incomplete history are dropped,
    never zero-padded.  max_lag defaults to the largest lag in terms but can
    be forced higher to align several term sets on identical rows.
    """
    terms = list(terms)
    effective = max(max((t.max_lag() for t in terms), default=0), 0)
    if max_lag is None:
        max_lag = effective
    elif max_lag < effective:
        raise ValueError(f"max_lag {max_lag} below largest term lag {effective}")
    _require_length(len(data), max_lag)
    columns = [_term_column(term, data.u, data.y, max_lag) for term in terms]
    psi = np.column_stack(columns) if columns else np.empty((len(data) - max_lag, 0))
    target = data.y[max_lag:].copy()
    return psi, target


def _interval_term_column(
    term: RegressorTerm,
    ulo: np.ndarray,
    uhi: np.ndarray,
    ylo: np.ndarray,
    yhi: np.ndarray,
    start: int,
) -> tuple[np.ndarray, np.ndarray]:
    n = ylo.shape[0]
    col_lo = np.ones(n - start)
    col_hi = np.ones(n - start)
    for signal, lag, exponent in term.factors:
        if signal == "y":
            series_lo, series_hi = ylo, yhi
        else:
            series_lo, series_hi = ulo, uhi
        lag_lo = np.ascontiguousarray(series_lo[start - lag : n - lag])
        lag_hi = np.ascontiguousarray(series_hi[start - lag : n - lag])
        plo, phi = kernels.pow_int(lag_lo, lag_hi, exponent)
        col_lo, col_hi = kernels.mul(col_lo, col_hi, plo, phi)
    return col_lo, col_hi


def build_interval_regressor_matrix(
    u: IntervalVector, y: IntervalVector, terms, max_lag: int | None = None
) -> tuple[IntervalMatrix, IntervalVector]:
    """Interval regressor matrix; lagged powers use the tight image power."""
    if len(u) != len(y):
        raise DimensionMismatchError("u and y lengths differ")
    terms = list(terms)
    effective = max(max((t.max_lag() for t in terms), default=0), 0)
    if max_lag is None:
        max_lag = effective
    elif max_lag < effective:
        raise ValueError(f"max_lag {max_lag} below largest term lag {effective}")
    _require_length(len(y), max_lag)
    cols_lo = []
    cols_hi = []
    for term in terms:
        clo, chi = _interval_term_column(term, u.lo, u.hi, y.lo, y.hi, max_lag)
        cols_lo.append(clo)
        cols_hi.append(chi)
    n_rows = len(y) - max_lag
    lo = np.column_stack(cols_lo) if cols_lo else np.empty((n_rows, 0))
    hi = np.column_stack(cols_hi) if cols_hi else np.empty((n_rows, 0))
    target = IntervalVector(y.lo[max_lag:], y.hi[max_lag:])
    return IntervalMatrix(lo, hi), target


def one_step_ahead(structure: ModelStructure, params: np.ndarray, data: Dataset) -> np.ndarray:
    """Predictions using measured outputs for every lag.

    Returns predictions for k = structure.max_lag .. N-1.
    """
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (len(structure),):
        raise DimensionMismatchError(
            f"{len(params)} coefficients for {len(structure)} terms"
        )
    psi, _ = build_regressor_matrix(data, structure.terms)
    return psi @ params


def one_step_ahead_interval(
    structure: ModelStructure, params: IntervalVector, u: IntervalVector, y: IntervalVector
) -> IntervalVector:
    """Interval predictions: encloses every point prediction of members."""
    if len(params) != len(structure):
        raise DimensionMismatchError(
            f"{len(params)} coefficients for {len(structure)} terms"
        )
    psi, _ = build_interval_regressor_matrix(u, y, structure.terms)
    return mat_vec(psi, params)


def free_run(
    structure: ModelStructure, params: np.ndarray, u: np.ndarray, y_init: np.ndarray
) -> np.ndarray:
    """Recursive simulation feeding predictions back as lagged outputs.

    y_init seeds the first max_lag samples; the returned array starts with
    those values.  Raises DivergenceError at the first non-finite step.
    """
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (len(structure),):
        raise DimensionMismatchError(
            f"{len(params)} coefficients for {len(structure)} terms"
        )
    u = np.asarray(u, dtype=np.float64)
    start = structure.max_lag
    y_init = np.asarray(y_init, dtype=np.float64)
    if y_init.shape[0] < start:
        raise InsufficientDataError(f"need {start} initial outputs, got {y_init.shape[0]}")
    n = u.shape[0]
    _require_length(n, start)
    u_list = u.tolist()
    out = y_init[:start].tolist()
    coeffs = params.tolist()
    term_factors = [term.factors for term in structure.terms]
    for k in range(start, n):
        total = 0.0
        for theta, factors in zip(coeffs, term_factors):
            value = theta
            for signal, lag, exponent in factors:
                base = out[k - lag] if signal == "y" else u_list[k - lag]
                for _ in range(exponent):
                    value *= base
            total += value
        if not math.isfinite(total):
            raise DivergenceError(f"free run diverged at step {k}", step=k)
        out.append(total)
    return np.array(out)


def free_run_interval(
    structure: ModelStructure,
    params: IntervalVector,
    u: IntervalVector,
    y_init: IntervalVector,
    width_cap: float | None = None,
) -> tuple[IntervalVector, int | None]:
    """Interval free run; prediction intervals are fed back as lagged outputs.

    Widths typically grow without bound.  When width_cap is given the run
    stops at the first step whose prediction width exceeds it and that step
    index is returned; otherwise the second element is None.  Interval
    overflow raises DivergenceError.
    """
    if len(params) != len(structure):
        raise DimensionMismatchError(
            f"{len(params)} coefficients for {len(structure)} terms"
        )
    start = structure.max_lag
    if len(y_init) < start:
        raise InsufficientDataError(f"need {start} initial outputs, got {len(y_init)}")
    n = len(u)
    _require_length(n, start)
    out: list[Interval] = [y_init[i] for i in range(start)]
    theta = list(params)
    capped_at: int | None = None
    for k in range(start, n):
        try:
            total = Interval.from_point(0.0)
            for coeff, term in zip(theta, structure.terms):
                value = coeff
                for signal, lag, exponent in term.factors:
                    base = out[k - lag] if signal == "y" else u[k - lag]
                    value = value * base.power(exponent)
                total = total + value
        except OverflowError as exc:
            raise DivergenceError(f"interval free run overflowed at step {k}", step=k) from exc
        out.append(total)
        if width_cap is not None and total.width() > width_cap:
            capped_at = k
            break
    return IntervalVector.from_intervals(out), capped_at


# -- dataset CSV -------------------------------------------------------------


def write_dataset_csv(path, data: Dataset) -> None:
    """Write k,u,y rows (header mandatory, '.' decimal separator)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,u,y\n")
        for k in range(len(data)):
            fh.write(f"{k},{float(data.u[k])!r},{float(data.y[k])!r}\n")


def read_dataset_csv(path, sample_time: float = 1.0, name: str = "") -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.split(",")[:3] != ["k", "u", "y"]:
            raise ModelFileError(f"expected 'k,u,y' header in {path}, got {header!r}")
        us = []
        ys = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 3:
                raise ModelFileError(f"short dataset row: {line!r}")
            us.append(float(parts[1]))
            ys.append(float(parts[2]))
    if not name:
        name = _stem(path)
    return Dataset(np.array(us), np.array(ys), sample_time=sample_time, name=name)


def _stem(path) -> str:
    text = str(path)
    base = text.rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0] if "." in base else base


# -- model files -------------------------------------------------------------


def write_model_file(path, structure: ModelStructure, coefficients: IntervalVector | None) -> None:
    """Line-oriented model file.

    Four header lines (n_y, n_u, d, l), then one line per term.  With
    coefficients each line is "term : lo:hi"; without them (a structure-only
    file) the line is just the term.
    """
    if coefficients is not None and len(coefficients) != len(structure):
        raise DimensionMismatchError(
            f"{len(coefficients)} coefficients for {len(structure)} terms"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"n_y={structure.n_y}\n")
        fh.write(f"n_u={structure.n_u}\n")
        fh.write(f"d={structure.d}\n")
        fh.write(f"l={structure.l}\n")
        for idx, term in enumerate(structure.terms):
            if coefficients is None:
                fh.write(f"{term}\n")
            else:
                iv = coefficients[idx]
                fh.write(f"{term} : {iv.lo!r}:{iv.hi!r}\n")


def read_model_file(path) -> tuple[ModelStructure, IntervalVector | None]:
    """Parse a model or structure file written by write_model_file."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    lines = [line for line in lines if line.strip()]
    if len(lines) < 4:
        raise ModelFileError(f"model file {path} is missing header lines")
    header = {}
    for expected, line in zip(("n_y", "n_u", "d", "l"), lines[:4]):
        key, _, value = line.partition("=")
        if key.strip() != expected:
            raise ModelFileError(f"expected header {expected}=..., got {line!r}")
        header[expected] = int(value)
    terms = []
    coeff_items: list[Interval] = []
    saw_coefficients: bool | None = None
    for line in lines[4:]:
        term_text, sep, coeff_text = line.partition(" : ")
        has_coeff = bool(sep)
        if saw_coefficients is None:
            saw_coefficients = has_coeff
        elif saw_coefficients != has_coeff:
            raise ModelFileError("mixed coefficient and structure-only term lines")
        terms.append(RegressorTerm.parse(term_text))
        if has_coeff:
            lo_text, _, hi_text = coeff_text.partition(":")
            try:
                coeff_items.append(Interval(float(lo_text), float(hi_text)))
            except ValueError as exc:
                raise ModelFileError(f"bad coefficient in line {line!r}") from exc
    if not terms:
        raise ModelFileError(f"model file {path} has no terms")
    structure = ModelStructure(
        terms=tuple(terms), n_y=header["n_y"], n_u=header["n_u"], d=header["d"], l=header["l"]
    )
    coefficients = IntervalVector.from_intervals(coeff_items) if saw_coefficients else None
    return structure, coefficients
