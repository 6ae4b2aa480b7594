"""Parameter estimation orchestration.

estimate() runs both estimation paths for a chosen structure: the classical
point least squares (orthogonal factorization) and the interval least
squares on data lifted to intervals.  The default lift is degenerate, i.e.
the intervals carry only the numerical error accumulated by the interval
computation itself; optional absolute/relative widening models measurement
uncertainty on top.

The two paths round differently: the verified box encloses the exact
least-squares solution of every member problem, while the orthogonal
factorization delivers its own floating-point approximation of one of those
solutions, which can sit a few ulps outside a box that is itself only ulps
wide.  cover_point_estimate bridges them: the returned interval is the hull
of the verified box and the point estimate, so containment holds by
construction and the box remains a rigorous enclosure (hulling only ever
widens it).  A point estimate further than rounding plausibly allows is a
real bug and raises ContainmentError instead of being absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ContainmentError
from .linalg import (
    IntervalVector,
    SolverConfig,
    interval_least_squares,
    point_least_squares,
)
from .model import (
    Dataset,
    ModelStructure,
    build_interval_regressor_matrix,
    build_regressor_matrix,
)

__all__ = ["WideningPolicy", "EstimationResult", "estimate", "cover_point_estimate"]

# largest relative gap between the two estimation paths that can still be
# blamed on rounding; anything larger means one of them is wrong
BRIDGE_TOLERANCE = 1e-6


def cover_point_estimate(box: IntervalVector, point: np.ndarray) -> IntervalVector:
    """Hull of a verified parameter box with the classical point estimate.

    Keeps every enclosure the box already provides while making the point
    estimate a member by construction.  Raises ContainmentError when the
    point sits further outside than floating-point disagreement between the
    two solution paths can explain.
    """
    point = np.asarray(point, dtype=np.float64)
    scale = 1.0 + np.abs(point)
    escape = np.maximum(box.lo - point, point - box.hi) / scale
    worst = float(escape.max())
    if worst > BRIDGE_TOLERANCE:
        raise ContainmentError(
            f"point estimate escaped its interval enclosure by {worst:.3e} relative"
        )
    if worst <= 0.0:
        return box
    return IntervalVector(np.minimum(box.lo, point), np.maximum(box.hi, point))


@dataclass(frozen=True)
class WideningPolicy:
    """How measured samples become intervals.

    degenerate: [v, v] (numerical-error tracking only, the default)
    absolute:   [v - r, v + r], outward rounded
    relative:   [v - r|v|, v + r|v|], outward rounded
    """

    mode: str = "degenerate"
    radius: float = 0.0

    def __post_init__(self):
        if self.mode not in ("degenerate", "absolute", "relative"):
            raise ValueError(f"unknown widening mode {self.mode!r}")
        if self.mode == "degenerate":
            if self.radius != 0.0:
                raise ValueError("degenerate widening takes no radius")
        elif self.radius < 0.0:
            raise ValueError("widening radius must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "WideningPolicy":
        """Parse "degenerate", "abs:RADIUS" or "rel:RADIUS"."""
        text = text.strip()
        if text in ("", "degenerate"):
            return cls()
        kind, _, radius = text.partition(":")
        if kind == "abs":
            return cls("absolute", float(radius))
        if kind == "rel":
            return cls("relative", float(radius))
        raise ValueError(f"cannot parse widening policy {text!r}")

    def describe(self) -> str:
        if self.mode == "degenerate":
            return "degenerate"
        prefix = "abs" if self.mode == "absolute" else "rel"
        return f"{prefix}:{self.radius!r}"

    def lift(self, values: np.ndarray) -> IntervalVector:
        values = np.asarray(values, dtype=np.float64)
        if self.mode == "degenerate":
            return IntervalVector.from_points(values)
        if self.mode == "absolute":
            radii = np.full(values.shape, self.radius)
        else:
            radii = self.radius * np.abs(values)
        lo, hi = kernels.add(values, values, -radii, radii)
        return IntervalVector(lo, hi)


@dataclass
class EstimationResult:
    """Point and interval parameter estimates for one structure."""

    structure: ModelStructure
    point_params: np.ndarray
    interval_params: IntervalVector
    residual_rss: float
    provenance: dict = field(default_factory=dict)


def estimate(
    data: Dataset,
    structure: ModelStructure,
    widening: WideningPolicy = WideningPolicy(),
    solver: SolverConfig = SolverConfig(),
) -> EstimationResult:
    """Estimate parameters for structure on data, point and interval.

    Guarantees point_params inside interval_params entrywise (see
    cover_point_estimate for how the two numeric paths are bridged).
    """
    psi, target = build_regressor_matrix(data, structure.terms)
    point = point_least_squares(psi, target)
    residual = target - psi @ point
    rss = float(residual @ residual)

    u_iv = widening.lift(data.u)
    y_iv = widening.lift(data.y)
    psi_iv, target_iv = build_interval_regressor_matrix(u_iv, y_iv, structure.terms)
    box = cover_point_estimate(interval_least_squares(psi_iv, target_iv, solver), point)

    return EstimationResult(
        structure=structure,
        point_params=point,
        interval_params=box,
        residual_rss=rss,
        provenance={"data": data.name, "widening": widening.describe()},
    )
