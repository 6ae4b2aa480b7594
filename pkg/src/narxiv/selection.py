"""Structure selection: error-reduction-ratio ranking plus AIC sizing.

err_rank performs forward orthogonal least squares: at every step the
remaining candidate columns are orthogonalized against the chosen ones and
the candidate explaining the largest fraction of the output energy is taken
next.  ERR values are that fraction, so they are scale-free, lie in [0, 1],
and sum to at most 1.

select_structure then fits every prefix of the ranking by ordinary least
squares and picks the prefix length minimizing the Akaike information
criterion (first minimum on ties).  Selection runs entirely in point
arithmetic; intervals enter only at final parameter estimation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, RankDeficientError
from .linalg import point_least_squares
from .model import Dataset, ModelStructure, RegressorTerm, build_regressor_matrix

__all__ = ["RankedTerm", "SelectionReport", "err_rank", "aic", "select_structure"]

COLLINEAR_TOLERANCE = 1e-12
# Residual energy below this fraction of the output energy counts as a
# perfect fit: the AIC log term would only chase rounding noise there.
PERFECT_FIT_FRACTION = 1e-24


@dataclass(frozen=True)
class RankedTerm:
    term: RegressorTerm
    err: float


@dataclass
class SelectionReport:
    """Outcome of one structure-selection run."""

    ranked: list[RankedTerm]
    aic_trace: list[tuple[int, float]]
    chosen: ModelStructure
    perfect_fit: bool = False

    @property
    def cumulative_err(self) -> np.ndarray:
        return np.cumsum([r.err for r in self.ranked])

    def save_err_csv(self, path) -> None:
        cumulative = self.cumulative_err
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("term,err,cumulative_err\n")
            for ranked, cum in zip(self.ranked, cumulative):
                fh.write(f"{ranked.term},{ranked.err!r},{float(cum)!r}\n")

    def save_aic_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("n_terms,aic\n")
            for n_terms, value in self.aic_trace:
                fh.write(f"{n_terms},{value!r}\n")


def aic(rss: float, n_params: int, n_samples: int) -> float:
    """N*ln(rss/N) + 2p.

    A non-positive rss means a perfect fit; the criterion is then reported
    as the -inf sentinel rather than an error.
    """
    if n_samples <= n_params:
        raise ValueError(f"need more samples ({n_samples}) than parameters ({n_params})")
    if rss <= 0.0:
        return -math.inf
    return n_samples * math.log(rss / n_samples) + 2 * n_params


def err_rank(
    candidates, data: Dataset, max_terms: int | None = None
) -> list[RankedTerm]:
    """Rank candidate terms by error reduction ratio (forward OLS).

    At each step the remaining candidate columns, orthogonalized against the
    already-chosen ones, compete on the fraction of output energy they
    explain; the winner is appended and the rest are deflated against it.

    Parameters
    ----------
    candidates : iterable of RegressorTerm
        Candidate regressors; their order fixes tie-breaking (lowest index
        wins).
    data : Dataset
        Identification record; rows without full lag history are dropped.
    max_terms : int, optional
        Stop after this many selections.  Defaults to every candidate that
        survives, capped at one less than the usable row count.

    Returns
    -------
    list of RankedTerm
        Terms in selection order with their ERR values.  Orthogonalized
        candidates whose norm collapses below COLLINEAR_TOLERANCE times the
        original column norm are dropped as collinear and never ranked.
    """
    candidates = list(candidates)
    if not candidates:
        return []
    psi, target = build_regressor_matrix(data, candidates)
    n_rows, n_cols = psi.shape
    if max_terms is None:
        max_terms = n_cols
    max_terms = min(max_terms, n_cols, n_rows - 1)
    if max_terms < 1:
        raise InsufficientDataError(
            f"{n_rows} usable rows cannot support even one term"
        )

    energy = float(target @ target)
    if energy <= 0.0:
        raise RankDeficientError("output record has zero energy; nothing to explain")
    original_norm2 = np.einsum("ij,ij->j", psi, psi)
    work = psi.copy()
    active = np.ones(n_cols, dtype=bool)
    ranked: list[RankedTerm] = []

    while len(ranked) < max_terms and active.any():
        norm2 = np.einsum("ij,ij->j", work, work)
        collinear = norm2 <= (COLLINEAR_TOLERANCE**2) * original_norm2
        active &= ~collinear
        if not active.any():
            break
        proj = work.T @ target
        with np.errstate(invalid="ignore", divide="ignore"):
            err_values = np.where(active, (proj * proj) / (norm2 * energy), -1.0)
        best = int(np.argmax(err_values))
        if err_values[best] < 0.0:
            break
        w = work[:, best].copy()
        ranked.append(RankedTerm(term=candidates[best], err=float(err_values[best])))
        active[best] = False
        # deflate the remaining candidates against the newly chosen direction
        w_norm2 = float(w @ w)
        coeffs = (w @ work) / w_norm2
        coeffs[~active] = 0.0
        work -= np.outer(w, coeffs)
    return ranked


def select_structure(
    candidates,
    data: Dataset,
    d: int = 1,
    max_terms: int | None = None,
) -> SelectionReport:
    """Rank by ERR, fit every ranking prefix, and size the model by AIC.

    Parameters
    ----------
    candidates : iterable of RegressorTerm
        Candidate regressors handed to err_rank.
    data : Dataset
        Identification record.
    d : int
        Input dead time, used when deriving the chosen structure's lag
        bounds from its terms.
    max_terms : int, optional
        Ranking depth; the AIC search never looks past it.

    Returns
    -------
    SelectionReport
        Ranked terms with ERR values, the AIC trace over prefix sizes, the
        chosen ModelStructure (global AIC minimum, first on ties), and a
        perfect_fit flag set when some prefix drives the residual to the
        numerical floor.
    """
    candidates = list(candidates)
    ranked = err_rank(candidates, data, max_terms=max_terms)
    if not ranked:
        raise RankDeficientError("no usable candidate terms")
    psi_full, target = build_regressor_matrix(data, [r.term for r in ranked])
    n_samples = target.shape[0]
    energy = float(target @ target)

    trace: list[tuple[int, float]] = []
    perfect = False
    for m in range(1, len(ranked) + 1):
        if n_samples <= m:
            break
        psi = psi_full[:, :m]
        try:
            params = point_least_squares(psi, target)
        except RankDeficientError:
            break
        residual = target - psi @ params
        rss = float(residual @ residual)
        if rss <= PERFECT_FIT_FRACTION * energy:
            rss = 0.0
            perfect = True
        trace.append((m, aic(rss, m, n_samples)))
    if not trace:
        raise RankDeficientError("could not fit any ranked prefix")

    best_index = min(range(len(trace)), key=lambda i: (trace[i][1], i))
    chosen_terms = tuple(r.term for r in ranked[: trace[best_index][0]])
    structure = _structure_from_terms(chosen_terms, d)
    return SelectionReport(
        ranked=ranked, aic_trace=trace, chosen=structure, perfect_fit=perfect
    )


def _structure_from_terms(terms: tuple[RegressorTerm, ...], d: int) -> ModelStructure:
    n_y = max((t.max_lag("y") for t in terms), default=0)
    max_u = max((t.max_lag("u") for t in terms), default=0)
    has_u = any(any(s == "u" for s, _, _ in t.factors) for t in terms)
    n_u = (max_u - d + 1) if has_u else 0
    degree = max((t.degree for t in terms), default=1)
    return ModelStructure(terms=terms, n_y=n_y, n_u=n_u, d=d, l=max(degree, 1))
