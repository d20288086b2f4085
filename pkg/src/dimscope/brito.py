"""Bayesian integer-dimension estimator from MST degree statistics.

Calibration draws uniform hypercube samples per candidate dimension and
records the mean and size-scaled variance of the mean squared MST vertex
degree.  A Gaussian posterior over candidates then turns an observed
statistic into an expected dimension and its rounded point estimate.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import rng
from .core import InvalidArgumentError, PointCloud, subsample
from .mst import build_emst, degree_statistic
from .schweinhart import SizeSchedule

DEFAULT_DIMS = range(2, 16)
DEFAULT_N_CAL = 2000
DEFAULT_L = 100


class PosteriorUnderflowError(RuntimeError):
    """Observed statistic lies impossibly far outside the calibrated family."""


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


@dataclass(frozen=True)
class BritoCalibration:
    """Per-candidate-dimension (mean, n-scaled variance) of the degree statistic."""

    entries: dict  # dim -> (mu_hat, sigma2_hat)
    n_cal: int
    L: int
    seed: int

    def __post_init__(self):
        if not self.entries:
            raise InvalidArgumentError("calibration table is empty")
        dims = sorted(self.entries)
        if dims != list(range(dims[0], dims[-1] + 1)):
            raise InvalidArgumentError(f"candidate dimensions must be contiguous: {dims}")
        for i, (mu, s2) in self.entries.items():
            if s2 <= 0:
                raise InvalidArgumentError(f"sigma2_hat must be > 0 at dim {i}")

    @property
    def dims(self):
        return sorted(self.entries)

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "n_cal": self.n_cal,
            "L": self.L,
            "seed": self.seed,
            "entries": [
                {"i": i, "mu_hat": self.entries[i][0], "sigma2_hat": self.entries[i][1]}
                for i in self.dims
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BritoCalibration":
        entries = {int(e["i"]): (float(e["mu_hat"]), float(e["sigma2_hat"])) for e in d["entries"]}
        return cls(entries=entries, n_cal=int(d["n_cal"]), L=int(d["L"]), seed=int(d["seed"]))


@dataclass(frozen=True)
class BritoEstimate:
    m_prime: float
    n_prime: int
    posterior: dict  # dim -> probability
    expected_dim: float
    d_bqy: int

    def to_dict(self) -> dict:
        return {
            "m_prime": self.m_prime,
            "n_prime": self.n_prime,
            "posterior": {str(i): p for i, p in sorted(self.posterior.items())},
            "expected_dim": self.expected_dim,
            "d_bqy": self.d_bqy,
        }


def calibrate(
    dims=DEFAULT_DIMS,
    n_cal: int = DEFAULT_N_CAL,
    L: int = DEFAULT_L,
    seed: int = 0,
) -> BritoCalibration:
    """Monte-Carlo calibration on uniform unit hypercubes.

    For every candidate dimension, L samples of n_cal points are drawn,
    their MSTs built, and the mean squared degree collected.  The stored
    variance is n_cal times the unbiased sample variance, a size-free
    asymptotic scale later divided by the evaluation size.
    """
    dims = sorted(int(i) for i in dims)
    if not dims or dims[0] < 1:
        raise InvalidArgumentError(f"dims must be nonempty positive integers: {dims}")
    if n_cal < 100:
        raise InvalidArgumentError(f"n_cal must be >= 100, got {n_cal}")
    if L < 2:
        raise InvalidArgumentError(f"L must be >= 2, got {L}")
    entries = {}
    for i in dims:
        stats = np.empty(L)
        for j in range(L):
            g = rng.stream(seed, "brito_calibrate", i, j)
            pts = g.random((n_cal, i))
            stats[j] = degree_statistic(build_emst(PointCloud(pts)))
        mu = float(stats.mean())
        # dim 1 is deterministic (path tree), leaving zero variance; floor
        # it so the Gaussian posterior stays defined
        sigma2 = max(float(n_cal * stats.var(ddof=1)), 1e-12)
        entries[i] = (mu, sigma2)
    return BritoCalibration(entries=entries, n_cal=int(n_cal), L=int(L), seed=int(seed))


def posterior(m_prime: float, n_prime: int, calib: BritoCalibration) -> BritoEstimate:
    """Gaussian posterior over candidate dimensions, in log space."""
    n_prime = int(n_prime)
    if n_prime < 2:
        raise InvalidArgumentError(f"n_prime must be >= 2, got {n_prime}")
    dims = calib.dims
    logd = np.empty(len(dims))
    for k, i in enumerate(dims):
        mu, s2 = calib.entries[i]
        var = s2 / n_prime
        logd[k] = -0.5 * math.log(2 * math.pi * var) - (m_prime - mu) ** 2 / (2 * var)
    if not np.any(np.isfinite(logd)):
        raise PosteriorUnderflowError(
            f"statistic {m_prime} is outside the calibrated range {dims[0]}..{dims[-1]}"
        )
    logp = logd - logsumexp(logd)
    p = np.exp(logp)
    expected = float(np.dot(p, dims))
    return BritoEstimate(
        m_prime=float(m_prime),
        n_prime=n_prime,
        posterior={i: float(pi) for i, pi in zip(dims, p)},
        expected_dim=expected,
        d_bqy=_round_half_away(expected),
    )


def estimate(cloud: PointCloud, calib: BritoCalibration) -> BritoEstimate:
    """Estimate from the full cloud's MST degree statistic."""
    if cloud.n < 2:
        raise InvalidArgumentError(f"estimation needs n >= 2, got {cloud.n}")
    m_prime = degree_statistic(build_emst(cloud))
    return posterior(m_prime, cloud.n, calib)


def convergence_curve(
    cloud: PointCloud,
    sizes: SizeSchedule,
    calib: BritoCalibration,
    seed: int = 0,
):
    """Unrounded and rounded estimates over a subsample-size schedule."""
    out = []
    for size in sizes.sizes:
        if size > cloud.n:
            raise InvalidArgumentError(f"size {size} exceeds n={cloud.n}")
        if size == cloud.n:
            est = estimate(cloud, calib)
        else:
            sub = subsample(cloud, size, rng.derive_seed(seed, "brito_curve", size))
            est = estimate(sub, calib)
        out.append((size, est.expected_dim, est.d_bqy))
    return out
