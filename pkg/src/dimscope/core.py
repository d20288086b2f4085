"""Point-cloud container and the shared sample transforms.

Clouds are immutable n x d float64 arrays with a provenance record.  The
transforms here (dimension lifting, coordinate noise, uniform background
points, subsampling) are pure functions of (inputs, seed).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng


class InvalidArgumentError(ValueError):
    """Raised when an operation precondition is violated."""


@dataclass(frozen=True)
class PointCloud:
    """n x d real matrix plus provenance metadata.

    ``meta`` carries the generator name, parameters, seed, and an ordered
    ``transforms`` list recording every lift/noise applied.
    """

    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise InvalidArgumentError(f"points must be 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidArgumentError(f"need n >= 1 and d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("points contain non-finite coordinates")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        meta = dict(self.meta)
        meta.setdefault("transforms", [])
        object.__setattr__(self, "meta", meta)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def with_points(self, points: np.ndarray, transform: dict | None = None) -> "PointCloud":
        meta = dict(self.meta)
        meta["transforms"] = list(meta.get("transforms", []))
        if transform is not None:
            meta["transforms"].append(transform)
        return PointCloud(points, meta)


# Appended coordinate k (0-indexed from the original d) is
# f_{k mod 4}(x_{k mod d}); fixed order for reproducibility.
_LIFT_FUNCS = (
    lambda x: np.sin(np.pi * x),
    lambda x: x * x,
    lambda x: np.cos(np.pi * x),
    lambda x: x * x * x,
)
LIFT_FUNC_NAMES = ("sin(pi*x)", "x^2", "cos(pi*x)", "x^3")


def lift_dimension(cloud: PointCloud, target_d: int) -> PointCloud:
    """Embed the cloud in a higher-dimensional space.

    New coordinates are smooth functions of existing ones (a graph
    embedding), so the intrinsic dimension is unchanged.
    """
    target_d = int(target_d)
    if target_d <= cloud.d:
        raise InvalidArgumentError(f"target_d must exceed d={cloud.d}, got {target_d}")
    d0 = cloud.d
    cols = [cloud.points]
    for k in range(target_d - d0):
        f = _LIFT_FUNCS[k % 4]
        cols.append(f(cloud.points[:, k % d0])[:, None])
    out = np.hstack(cols)
    return cloud.with_points(out, {"op": "lift_dimension", "target_d": target_d})


def add_gaussian_noise(cloud: PointCloud, sigma: float, seed: int) -> PointCloud:
    """Perturb every coordinate by independent Normal(0, sigma^2)."""
    sigma = float(sigma)
    if not math.isfinite(sigma) or sigma < 0:
        raise InvalidArgumentError(f"sigma must be finite and >= 0, got {sigma}")
    if sigma == 0.0:
        return cloud
    g = rng.stream(seed, "add_gaussian_noise")
    out = cloud.points + sigma * g.standard_normal(cloud.points.shape)
    return cloud.with_points(
        out, {"op": "add_gaussian_noise", "sigma": sigma, "seed": int(seed)}
    )


def add_uniform_background(cloud: PointCloud, fraction: float, seed: int) -> PointCloud:
    """Append round(fraction*n) uniform points from the cloud's bounding box."""
    fraction = float(fraction)
    if not math.isfinite(fraction) or not 0.0 <= fraction <= 1.0:
        raise InvalidArgumentError(f"fraction must be in [0, 1], got {fraction}")
    m = int(round(fraction * cloud.n))
    if m == 0:
        return cloud
    lo = cloud.points.min(axis=0)
    hi = cloud.points.max(axis=0)
    g = rng.stream(seed, "add_uniform_background")
    extra = lo + (hi - lo) * g.random((m, cloud.d))
    out = np.vstack([cloud.points, extra])
    return cloud.with_points(
        out, {"op": "add_uniform_background", "fraction": fraction, "seed": int(seed)}
    )


def subsample(cloud: PointCloud, m: int, seed: int) -> PointCloud:
    """Draw m points uniformly without replacement."""
    m = int(m)
    if not 1 <= m <= cloud.n:
        raise InvalidArgumentError(f"m must be in [1, {cloud.n}], got {m}")
    g = rng.stream(seed, "subsample")
    idx = g.choice(cloud.n, size=m, replace=False)
    return cloud.with_points(
        cloud.points[idx], {"op": "subsample", "m": m, "seed": int(seed)}
    )
