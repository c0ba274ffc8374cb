"""Chart-level primitives: points, tangent vectors, and C1 paths on [0, 1].

Everything lives in a single coordinate chart of R^n.  Paths are always
parametrized over the unit interval; constructors that accept another
parameter interval rescale it affinely on ingestion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "ChartPoint",
    "TangentVector",
    "PathCurve",
    "path_segment",
    "path_polyline",
    "path_circle",
    "path_reverse",
    "path_from_json",
]


def as_coords(x, what: str = "coords") -> np.ndarray:
    """Coerce a point-like value (ChartPoint, sequence, scalar) to a 1-d float array."""
    if isinstance(x, ChartPoint):
        return x.coords
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{what} must be a nonempty 1-d real vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must have finite entries, got {arr}")
    return arr


@dataclass(frozen=True)
class ChartPoint:
    """A point of the base space, given by its chart coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", as_coords(self.coords, "ChartPoint.coords"))

    @property
    def dimension(self) -> int:
        return self.coords.size


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector: fiber coordinates attached to a base point."""

    base: ChartPoint
    vec: np.ndarray

    def __post_init__(self):
        if not isinstance(self.base, ChartPoint):
            object.__setattr__(self, "base", ChartPoint(self.base))
        object.__setattr__(self, "vec", as_coords(self.vec, "TangentVector.vec"))
        if self.vec.size != self.base.dimension:
            raise ValueError(
                f"fiber coordinates have length {self.vec.size}, "
                f"base point has dimension {self.base.dimension}"
            )

    @property
    def dimension(self) -> int:
        return self.base.dimension


@dataclass(frozen=True)
class PathCurve:
    """A C1 curve gamma: [0, 1] -> R^n with an evaluable velocity.

    ``position`` and ``velocity`` are pure functions of t; they must be
    defined (and smooth) in a neighbourhood of [0, 1] so that centered
    finite differences are valid at the endpoints.
    """

    dimension: int
    position: Callable[[float], np.ndarray] = field(repr=False)
    velocity: Callable[[float], np.ndarray] = field(repr=False)
    kind: str = "custom"

    def sample(self, ts) -> np.ndarray:
        """Positions at the given parameter values, stacked as an (m, n) array."""
        return np.array([self.position(float(t)) for t in np.atleast_1d(ts)])

    @property
    def start(self) -> np.ndarray:
        return self.position(0.0)

    @property
    def end(self) -> np.ndarray:
        return self.position(1.0)


def path_segment(a, b) -> PathCurve:
    """Straight segment from a to b: gamma(t) = (1-t) a + t b."""
    pa = as_coords(a, "segment start")
    pb = as_coords(b, "segment end")
    if pa.size != pb.size:
        raise ValueError(f"segment endpoints have dimensions {pa.size} and {pb.size}")
    d = pb - pa

    def position(t: float) -> np.ndarray:
        return pa + t * d

    def velocity(t: float) -> np.ndarray:
        return d

    return PathCurve(pa.size, position, velocity, kind="segment")


def path_polyline(points, times) -> PathCurve:
    """C1 cubic Hermite interpolant through the given knots.

    Knot tangents come from centered finite differences at interior knots
    and one-sided differences at the ends.  ``times`` must be strictly
    increasing; any interval is affinely rescaled to [0, 1].

    Args:
        points: sequence of at least two points, all of one dimension.
        times: knot parameters, same length as ``points``.

    Returns:
        A PathCurve of kind ``polyline-hermite`` interpolating the knots.
    """
    pts = np.array([as_coords(p, "polyline point") for p in points], dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("polyline needs at least 2 points")
    tau = np.asarray(times, dtype=float)
    if tau.shape != (pts.shape[0],):
        raise ValueError(f"got {pts.shape[0]} points but {tau.size} times")
    if not np.all(np.diff(tau) > 0):
        raise ValueError("polyline times must be strictly increasing")
    # Normalize the parameter interval to [0, 1].
    tau = (tau - tau[0]) / (tau[-1] - tau[0])

    m, n = pts.shape
    tang = np.empty_like(pts)
    tang[0] = (pts[1] - pts[0]) / (tau[1] - tau[0])
    tang[-1] = (pts[-1] - pts[-2]) / (tau[-1] - tau[-2])
    if m > 2:
        tang[1:-1] = (pts[2:] - pts[:-2]) / (tau[2:] - tau[:-2])[:, None]

    def _segment_index(t: float) -> int:
        k = int(np.searchsorted(tau, t, side="right") - 1)
        return min(max(k, 0), m - 2)

    def position(t: float) -> np.ndarray:
        k = _segment_index(t)
        h = tau[k + 1] - tau[k]
        s = (t - tau[k]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return h00 * pts[k] + h10 * h * tang[k] + h01 * pts[k + 1] + h11 * h * tang[k + 1]

    def velocity(t: float) -> np.ndarray:
        k = _segment_index(t)
        h = tau[k + 1] - tau[k]
        s = (t - tau[k]) / h
        d00 = 6 * s * (s - 1)
        d10 = (1 - s) * (1 - 3 * s)
        d01 = -d00
        d11 = s * (3 * s - 2)
        return (d00 * pts[k] + d01 * pts[k + 1]) / h + d10 * tang[k] + d11 * tang[k + 1]

    return PathCurve(n, position, velocity, kind="polyline-hermite")


def path_circle(center, radius: float, plane=(0, 1)) -> PathCurve:
    """Closed circular loop of the given chart radius, traversed once.

    The loop lies in the coordinate plane spanned by axes ``plane``, starts
    at center + radius * e_i, and runs counterclockwise in (i, j).
    """
    c = as_coords(center, "circle center")
    r = float(radius)
    if r <= 0 or not np.isfinite(r):
        raise ValueError(f"circle radius must be positive and finite, got {radius}")
    i, j = int(plane[0]), int(plane[1])
    if i == j or not (0 <= i < c.size and 0 <= j < c.size):
        raise ValueError(f"circle plane {plane!r} invalid for dimension {c.size}")
    tau = 2 * np.pi

    def position(t: float) -> np.ndarray:
        p = c.copy()
        p[i] += r * np.cos(tau * t)
        p[j] += r * np.sin(tau * t)
        return p

    def velocity(t: float) -> np.ndarray:
        v = np.zeros_like(c)
        v[i] = -r * tau * np.sin(tau * t)
        v[j] = r * tau * np.cos(tau * t)
        return v

    return PathCurve(c.size, position, velocity, kind="circle-loop")


def path_reverse(path: PathCurve) -> PathCurve:
    """The same trace run backwards: gamma_r(t) = gamma(1 - t)."""
    pos, vel = path.position, path.velocity
    return PathCurve(
        path.dimension,
        lambda t: pos(1.0 - t),
        lambda t: -vel(1.0 - t),
        kind="custom",
    )


def path_from_json(spec) -> PathCurve:
    """Build a path from its JSON description (dict or JSON string).

    Recognized forms:
        {"kind": "segment", "from": [...], "to": [...]}
        {"kind": "polyline", "points": [[...], ...], "times": [...]}
        {"kind": "circle", "center": [...], "radius": r, "plane": [i, j]}
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("path spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "segment":
            return path_segment(spec["from"], spec["to"])
        if kind == "polyline":
            return path_polyline(spec["points"], spec["times"])
        if kind == "circle":
            return path_circle(spec["center"], spec["radius"], spec.get("plane", (0, 1)))
    except KeyError as e:
        raise ValueError(f"path spec of kind {kind!r} is missing field {e}") from None
    raise ValueError(f"unknown path kind {kind!r}")
