"""Samplers for the synthetic validation zoo.

Manifolds (cube, spheres, Mobius strip, Swiss roll, paraboloid) are
sampled uniformly with respect to surface area via Jacobian-weighted
rejection; fractals by chaos-game IFS iteration; the multifractal test
object is a dyadic lognormal cascade.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from . import backend, rng
from .core import InvalidArgumentError, PointCloud

MANIFOLD_KINDS = (
    "unit_cube",
    "unit_sphere",
    "unit_sphere_gaussian_mix",
    "mobius_strip",
    "swiss_roll",
    "paraboloid",
)
FRACTAL_KINDS = ("sierpinski_triangle", "sierpinski_carpet", "menger_sponge")

# Analytic Hausdorff dimensions of the IFS attractors.
FRACTAL_DIMENSIONS = {
    "sierpinski_triangle": math.log(3) / math.log(2),
    "sierpinski_carpet": math.log(8) / math.log(3),
    "menger_sponge": math.log(20) / math.log(3),
}

SWISS_ROLL_T_RANGE = (1.5 * math.pi, 4.5 * math.pi)
SWISS_ROLL_HEIGHT = 21.0


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    intrinsic_dim: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MANIFOLD_KINDS:
            raise InvalidArgumentError(f"unknown manifold kind {self.kind!r}")
        fixed = {"mobius_strip": 2, "swiss_roll": 2, "paraboloid": 2}
        default = {"unit_cube": 3, "unit_sphere": 2, "unit_sphere_gaussian_mix": 2}
        k = self.intrinsic_dim
        if self.kind in fixed:
            if k is not None and k != fixed[self.kind]:
                raise InvalidArgumentError(
                    f"{self.kind} has fixed intrinsic dimension {fixed[self.kind]}"
                )
            k = fixed[self.kind]
        elif k is None:
            k = default[self.kind]
        if k < 1:
            raise InvalidArgumentError(f"intrinsic_dim must be >= 1, got {k}")
        object.__setattr__(self, "intrinsic_dim", int(k))


@dataclass(frozen=True)
class FractalSpec:
    kind: str
    burn_in: int = 100

    def __post_init__(self):
        if self.kind not in FRACTAL_KINDS:
            raise InvalidArgumentError(f"unknown fractal kind {self.kind!r}")
        if self.burn_in < 0:
            raise InvalidArgumentError("burn_in must be >= 0")


@dataclass(frozen=True)
class CascadeSpec:
    levels: int
    log_sd: float = 0.3
    log_mean: float | None = None

    def __post_init__(self):
        if not 1 <= self.levels <= 24:
            raise InvalidArgumentError(f"levels must be in [1, 24], got {self.levels}")
        if self.log_sd < 0:
            raise InvalidArgumentError("log_sd must be >= 0")
        if self.log_mean is None:
            # mean multiplier 1/2 so mass is conserved in expectation
            object.__setattr__(
                self, "log_mean", -math.log(2) - 0.5 * self.log_sd**2
            )


# ---------------------------------------------------------------------------
# Manifolds


def _rejection(n, g, propose, weight):
    """Accept proposals with probability weight(u) (weight <= 1)."""
    out = []
    got = 0
    while got < n:
        m = max(2 * (n - got), 256)
        cand = propose(m, g)
        acc = g.random(len(cand)) < weight(cand)
        kept = cand[acc]
        out.append(kept)
        got += len(kept)
    return np.vstack(out)[:n]


def _sample_mobius(n, g):
    def propose(m, gg):
        u = gg.random(m) * 2 * np.pi
        v = gg.random(m) * 2 - 1
        return np.column_stack([u, v])

    def jacobian(uv):
        u, v = uv[:, 0], uv[:, 1]
        r = 1 + (v / 2) * np.cos(u / 2)
        ru = -(v / 4) * np.sin(u / 2)
        # P_u x P_v with P as the standard Mobius parameterization
        pu = np.column_stack(
            [
                ru * np.cos(u) - r * np.sin(u),
                ru * np.sin(u) + r * np.cos(u),
                (v / 4) * np.cos(u / 2),
            ]
        )
        pv = np.column_stack(
            [
                0.5 * np.cos(u / 2) * np.cos(u),
                0.5 * np.cos(u / 2) * np.sin(u),
                0.5 * np.sin(u / 2),
            ]
        )
        return np.linalg.norm(np.cross(pu, pv), axis=1)

    jmax = 1.6  # coarse upper bound on |P_u x P_v| for v in [-1, 1]
    uv = _rejection(n, g, propose, lambda c: jacobian(c) / jmax)
    u, v = uv[:, 0], uv[:, 1]
    r = 1 + (v / 2) * np.cos(u / 2)
    return np.column_stack([r * np.cos(u), r * np.sin(u), (v / 2) * np.sin(u / 2)])


def _sample_swiss_roll(n, g):
    t0, t1 = SWISS_ROLL_T_RANGE
    wmax = math.sqrt(1 + t1 * t1)

    def propose(m, gg):
        return (t0 + (t1 - t0) * gg.random(m))[:, None]

    t = _rejection(n, g, propose, lambda c: np.sqrt(1 + c[:, 0] ** 2) / wmax)[:, 0]
    y = SWISS_ROLL_HEIGHT * g.random(n)
    return np.column_stack([t * np.cos(t), y, t * np.sin(t)])


def _sample_paraboloid(n, g):
    def propose(m, gg):
        xy = gg.random((m, 2)) * 2 - 1
        return xy[np.einsum("ij,ij->i", xy, xy) <= 1.0]

    def weight(xy):
        r2 = np.einsum("ij,ij->i", xy, xy)
        return np.sqrt(1 + 4 * r2) / math.sqrt(5)

    xy = _rejection(n, g, propose, weight)
    z = np.einsum("ij,ij->i", xy, xy)
    return np.column_stack([xy, z])


def _sample_sphere(n, k, g):
    x = g.standard_normal((n, k + 1))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return x / norms


def _sample_sphere_gaussian_mix(n, k, g, sigma):
    pole = np.zeros(k + 1)
    pole[-1] = 1.0
    signs = np.where(g.random(n) < 0.5, 1.0, -1.0)
    x = signs[:, None] * pole + sigma * g.standard_normal((n, k + 1))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return x / norms


def sample_manifold(spec: ManifoldSpec, n: int, seed: int) -> PointCloud:
    """n points on the manifold, uniform with respect to surface area
    (except the Gaussian-mixture sphere, which is deliberately non-uniform).
    """
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    g = rng.stream(seed, "sample_manifold", spec.kind, spec.intrinsic_dim)
    k = spec.intrinsic_dim
    if spec.kind == "unit_cube":
        pts = g.random((n, k))
    elif spec.kind == "unit_sphere":
        pts = _sample_sphere(n, k, g)
    elif spec.kind == "unit_sphere_gaussian_mix":
        pts = _sample_sphere_gaussian_mix(n, k, g, spec.params.get("sigma", 0.5))
    elif spec.kind == "mobius_strip":
        pts = _sample_mobius(n, g)
    elif spec.kind == "swiss_roll":
        pts = _sample_swiss_roll(n, g)
    else:
        pts = _sample_paraboloid(n, g)
    meta = {
        "generator": spec.kind,
        "intrinsic_dim": k,
        "params": dict(spec.params),
        "n": n,
        "seed": int(seed),
    }
    return PointCloud(pts, meta)


# ---------------------------------------------------------------------------
# IFS fractals via the chaos game


def ifs_maps(kind: str):
    """Contraction ratio and offset list: x' = r * x + c."""
    if kind == "sierpinski_triangle":
        verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        return 0.5, verts * 0.5
    if kind == "sierpinski_carpet":
        cells = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]
        return 1.0 / 3.0, np.array(cells, dtype=np.float64) / 3.0
    if kind == "menger_sponge":
        cells = [
            (i, j, k)
            for i in range(3)
            for j in range(3)
            for k in range(3)
            if sum(c == 1 for c in (i, j, k)) < 2
        ]
        return 1.0 / 3.0, np.array(cells, dtype=np.float64) / 3.0
    raise InvalidArgumentError(f"unknown fractal kind {kind!r}")


_chaos_numba = None


def _get_chaos_numba():
    global _chaos_numba
    if _chaos_numba is None:
        from numba import njit

        @njit(cache=True)
        def chaos(ratio, offsets, x0):  # pragma: no cover - via dispatch
            m, d = offsets.shape
            out = np.empty((m, d))
            x = x0.copy()
            for i in range(m):
                for k in range(d):
                    x[k] = offsets[i, k] + ratio * x[k]
                    out[i, k] = x[k]
            return out

        _chaos_numba = chaos
    return _chaos_numba


def _chaos_trajectory(ratio, offsets, x0):
    if backend.use_numba():
        return _get_chaos_numba()(ratio, offsets, x0)
    # x_i = c_i + r * x_{i-1} is a first-order IIR filter per coordinate
    zi = (ratio * x0)[None, :]
    out, _ = lfilter([1.0], [1.0, -ratio], offsets, axis=0, zi=zi)
    return out


def sample_ifs_fractal(spec: FractalSpec, n: int, seed: int) -> PointCloud:
    """Chaos-game sample of the IFS attractor (unit square/cube)."""
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    ratio, offsets = ifs_maps(spec.kind)
    g = rng.stream(seed, "sample_ifs_fractal", spec.kind)
    idx = g.integers(0, len(offsets), size=spec.burn_in + n)
    x0 = np.full(offsets.shape[1], 0.5)
    traj = _chaos_trajectory(ratio, offsets[idx], x0)
    meta = {
        "generator": spec.kind,
        "hausdorff_dim": FRACTAL_DIMENSIONS[spec.kind],
        "burn_in": spec.burn_in,
        "n": n,
        "seed": int(seed),
    }
    return PointCloud(traj[spec.burn_in :], meta)


# ---------------------------------------------------------------------------
# Lognormal dyadic cascade (multifractal)


def sample_lognormal_cascade(spec: CascadeSpec, seed: int) -> PointCloud:
    """Graph of the 2^J leaf masses of a dyadic multiplicative cascade.

    Each leaf mass is the product of its J ancestor multipliers
    exp(log_mean + log_sd * N(0,1)); the ordinate is scaled by the maximum
    leaf mass so both axes are O(1).
    """
    g = rng.stream(seed, "sample_lognormal_cascade", spec.levels)
    log_mass = np.zeros(1)
    for level in range(spec.levels):
        w = spec.log_mean + spec.log_sd * g.standard_normal(2 ** (level + 1))
        log_mass = np.repeat(log_mass, 2) + w
    mass = np.exp(log_mass - log_mass.max())  # max-normalized leaf masses
    m = mass.size
    x = np.arange(m) / m
    meta = {
        "generator": "lognormal_cascade",
        "levels": spec.levels,
        "log_mean": spec.log_mean,
        "log_sd": spec.log_sd,
        "seed": int(seed),
    }
    return PointCloud(np.column_stack([x, mass]), meta)
