"""Growth-rate dimension estimator from MST edge-power sums.

For a sample schedule of subsample sizes m, the log of the edge-power sum
grows linearly in log m with slope 1 - alpha/d.  OLS on that line gives a
per-alpha dimension estimate with a t-based confidence interval; estimates
whose regression or parameter intervals are too wide (relative halfwidth
above gamma), whose slope interval reaches 1, or with alpha >= d_hat are
flagged inadmissible.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import t as t_dist

from .core import InvalidArgumentError, PointCloud, subsample
from .mst import build_emst

REJECTION_REASONS = (
    "none",
    "line_ci",
    "param_ci",
    "slope_ge_one",
    "alpha_ge_dhat",
    "degenerate",
)

DEFAULT_ALPHA_GRID = {"start": 1e-4, "stop": 10.0, "step": 0.1}
DEFAULT_GAMMA = 0.1
DEFAULT_REPLICATES = 3


class DegenerateFitError(RuntimeError):
    """Regression input carries no usable signal (constant or nonpositive E)."""


@dataclass(frozen=True)
class SizeSchedule:
    """Ascending subsample sizes with a replicate count per size."""

    sizes: tuple
    replicates: int = DEFAULT_REPLICATES

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise InvalidArgumentError("schedule needs at least one size")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise InvalidArgumentError(f"sizes must be strictly increasing: {sizes}")
        if sizes[0] < 2:
            raise InvalidArgumentError(f"minimum size must be >= 2, got {sizes[0]}")
        if self.replicates < 1:
            raise InvalidArgumentError("replicates must be >= 1")
        object.__setattr__(self, "sizes", sizes)


@dataclass(frozen=True)
class FitRecord:
    alpha: float
    d_hat: float | None
    slope: float
    intercept: float
    ci_low: float | None
    ci_high: float | None
    line_ci_rel: float
    param_ci_rel: float
    admissible: bool
    rejection_reason: str

    def to_dict(self) -> dict:
        def fin(v):
            return v if v is not None and math.isfinite(v) else None

        return {
            "alpha": self.alpha,
            "d_hat": fin(self.d_hat),
            "slope": fin(self.slope),
            "intercept": fin(self.intercept),
            "ci_low": fin(self.ci_low),
            "ci_high": fin(self.ci_high),
            "line_ci_rel": fin(self.line_ci_rel),
            "param_ci_rel": fin(self.param_ci_rel),
            "admissible": self.admissible,
            "rejection_reason": self.rejection_reason,
        }


@dataclass(frozen=True)
class SchweinhartReport:
    records: tuple
    d_min: float | None
    d_max: float | None
    admissible_alpha: tuple  # (lo, hi) grid intervals
    gamma: float
    sizes: tuple
    replicates: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "d_min": self.d_min,
            "d_max": self.d_max,
            "admissible_alpha": [list(iv) for iv in self.admissible_alpha],
            "gamma": self.gamma,
            "sizes": list(self.sizes),
            "replicates": self.replicates,
            "seed": self.seed,
        }


def schedule_sizes(n_total: int, n_min: int, count: int) -> SizeSchedule:
    """Geometric progression of subsample sizes, deduplicated after rounding."""
    n_total, n_min, count = int(n_total), int(n_min), int(count)
    if not 2 <= n_min < n_total:
        raise InvalidArgumentError(f"need 2 <= n_min < n_total, got {n_min}, {n_total}")
    if count < 5:
        raise InvalidArgumentError(f"count must be >= 5, got {count}")
    ratio = n_total / n_min
    sizes = sorted({int(round(n_min * ratio ** (k / (count - 1)))) for k in range(count)})
    return SizeSchedule(tuple(sizes))


def default_schedule(n_total: int, n_min: int = 2000, count: int = 8) -> SizeSchedule:
    n_min = min(n_min, max(2, n_total // 4))
    return schedule_sizes(n_total, n_min, count)


# ---------------------------------------------------------------------------


def _collect_log_weights(cloud: PointCloud, schedule: SizeSchedule, seed: int):
    """Per (size, replicate) subsample trees; returns log positive edge weights.

    The RNG stream depends only on (seed, size, replicate), never on alpha,
    so a sweep and a single fit at the same seed see identical trees.
    """
    out = []
    for size in schedule.sizes:
        if size > cloud.n:
            raise InvalidArgumentError(f"schedule size {size} exceeds n={cloud.n}")
        per_size = []
        for rep in range(schedule.replicates):
            sub = subsample(cloud, size, _subsample_seed(seed, size, rep))
            tree = build_emst(sub)
            w = tree.weights[tree.weights > 0]
            per_size.append(np.log(w) if w.size else np.empty(0))
        out.append(per_size)
    return out


def _subsample_seed(seed: int, size: int, rep: int) -> int:
    from .rng import derive_seed

    return derive_seed(seed, "schweinhart", size, rep)


def _log_e(log_weights, alpha: float) -> np.ndarray:
    """Mean log edge-power sum per size, averaged over replicates."""
    means = np.empty(len(log_weights))
    for i, per_size in enumerate(log_weights):
        vals = []
        for lw in per_size:
            if lw.size == 0:
                raise DegenerateFitError("tree has no positive edge weights")
            vals.append(logsumexp(alpha * lw))
        means[i] = float(np.mean(vals))
    return means


def fit_from_logs(log_sizes, log_e, alpha: float, gamma: float) -> FitRecord:
    """OLS of log E on log m, with admissibility per the gamma criteria."""
    alpha = float(alpha)
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    if not 0 < gamma < 1:
        raise InvalidArgumentError(f"gamma must be in (0, 1), got {gamma}")
    x = np.asarray(log_sizes, dtype=np.float64)
    y = np.asarray(log_e, dtype=np.float64)
    k = x.size
    if k < 3:
        raise InvalidArgumentError(f"regression needs >= 3 sizes, got {k}")
    if np.ptp(y) == 0.0:
        raise DegenerateFitError("edge-power sums are identical across sizes")
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    beta = float(((x - xbar) * (y - y.mean())).sum() / sxx)
    intercept = float(y.mean() - beta * xbar)
    resid = y - (intercept + beta * x)
    s2 = float((resid**2).sum() / (k - 2))
    tcrit = float(t_dist.ppf(0.975, k - 2))
    se_beta = math.sqrt(s2 / sxx)
    beta_lo, beta_hi = beta - tcrit * se_beta, beta + tcrit * se_beta

    yhat = intercept + beta * x
    half = tcrit * np.sqrt(s2 * (1.0 / k + (x - xbar) ** 2 / sxx))
    with np.errstate(divide="ignore"):
        line_ci_rel = float(np.max(half / np.abs(yhat)))
    param_ci_rel = (tcrit * se_beta) / abs(beta) if beta != 0 else math.inf

    d_hat = alpha / (1.0 - beta) if beta < 1.0 else None
    if beta_hi < 1.0:
        ci_low, ci_high = alpha / (1.0 - beta_lo), alpha / (1.0 - beta_hi)
    else:
        ci_low = ci_high = None

    reason = "none"
    if line_ci_rel > gamma:
        reason = "line_ci"
    elif param_ci_rel > gamma:
        reason = "param_ci"
    elif beta_hi >= 1.0:
        reason = "slope_ge_one"
    elif d_hat is None or alpha >= d_hat:
        reason = "alpha_ge_dhat"
    return FitRecord(
        alpha=alpha,
        d_hat=d_hat,
        slope=beta,
        intercept=intercept,
        ci_low=ci_low,
        ci_high=ci_high,
        line_ci_rel=line_ci_rel,
        param_ci_rel=param_ci_rel,
        admissible=reason == "none",
        rejection_reason=reason,
    )


def fit_power_law(sizes, e_values, alpha: float, gamma: float = DEFAULT_GAMMA) -> FitRecord:
    """Fit directly from (size, edge-power sum) pairs."""
    e = np.asarray(e_values, dtype=np.float64)
    if np.any(e <= 0):
        raise DegenerateFitError("edge-power sums must be positive")
    return fit_from_logs(np.log(np.asarray(sizes, float)), np.log(e), alpha, gamma)


def fit_dimension(
    cloud: PointCloud,
    alpha: float,
    schedule: SizeSchedule,
    gamma: float = DEFAULT_GAMMA,
    seed: int = 0,
) -> FitRecord:
    """Single-alpha dimension fit over the subsample-size schedule."""
    if len(schedule.sizes) < 5:
        raise InvalidArgumentError("fit needs at least 5 distinct sizes")
    lw = _collect_log_weights(cloud, schedule, seed)
    log_sizes = np.log(np.array(schedule.sizes, dtype=np.float64))
    return fit_from_logs(log_sizes, _log_e(lw, alpha), alpha, gamma)


def _alpha_values(alpha_grid: dict) -> np.ndarray:
    start = float(alpha_grid.get("start", DEFAULT_ALPHA_GRID["start"]))
    stop = float(alpha_grid.get("stop", DEFAULT_ALPHA_GRID["stop"]))
    step = float(alpha_grid.get("step", DEFAULT_ALPHA_GRID["step"]))
    if start <= 0 or step <= 0 or stop < start:
        raise InvalidArgumentError(f"bad alpha grid {alpha_grid}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def sweep_alpha(
    cloud: PointCloud,
    alpha_grid: dict | None = None,
    schedule: SizeSchedule | None = None,
    gamma: float = DEFAULT_GAMMA,
    seed: int = 0,
) -> SchweinhartReport:
    """One fit per grid alpha, reusing the same subsample trees throughout."""
    if schedule is None:
        schedule = default_schedule(cloud.n)
    if len(schedule.sizes) < 5:
        raise InvalidArgumentError("sweep needs at least 5 distinct sizes")
    alphas = _alpha_values(alpha_grid or DEFAULT_ALPHA_GRID)
    lw = _collect_log_weights(cloud, schedule, seed)
    log_sizes = np.log(np.array(schedule.sizes, dtype=np.float64))

    records = []
    for a in alphas:
        try:
            rec = fit_from_logs(log_sizes, _log_e(lw, a), float(a), gamma)
        except DegenerateFitError:
            rec = FitRecord(
                alpha=float(a),
                d_hat=None,
                slope=math.nan,
                intercept=math.nan,
                ci_low=None,
                ci_high=None,
                line_ci_rel=math.inf,
                param_ci_rel=math.inf,
                admissible=False,
                rejection_reason="degenerate",
            )
        records.append(rec)

    adm = [r for r in records if r.admissible]
    d_min = min(r.d_hat for r in adm) if adm else None
    d_max = max(r.d_hat for r in adm) if adm else None
    intervals = []
    run_start = None
    prev = None
    for r in records:
        if r.admissible:
            if run_start is None:
                run_start = r.alpha
            prev = r.alpha
        elif run_start is not None:
            intervals.append((run_start, prev))
            run_start = None
    if run_start is not None:
        intervals.append((run_start, prev))
    return SchweinhartReport(
        records=tuple(records),
        d_min=d_min,
        d_max=d_max,
        admissible_alpha=tuple(intervals),
        gamma=gamma,
        sizes=schedule.sizes,
        replicates=schedule.replicates,
        seed=int(seed),
    )
