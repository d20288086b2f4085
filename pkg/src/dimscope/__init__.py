"""Intrinsic dimension estimation for point clouds via Euclidean MSTs."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    InvalidArgumentError,
    PointCloud,
    add_gaussian_noise,
    add_uniform_background,
    lift_dimension,
    subsample,
)
from .geometry import (  # noqa: F401
    CascadeSpec,
    FractalSpec,
    ManifoldSpec,
    sample_ifs_fractal,
    sample_lognormal_cascade,
    sample_manifold,
)
from .mst import (  # noqa: F401
    MinimumSpanningTree,
    build_emst,
    degree_statistic,
    edge_power_sum,
)
from .schweinhart import (  # noqa: F401
    FitRecord,
    SchweinhartReport,
    SizeSchedule,
    fit_dimension,
    fit_power_law,
    schedule_sizes,
    sweep_alpha,
)
from .brito import (  # noqa: F401
    BritoCalibration,
    BritoEstimate,
    calibrate as brito_calibrate,
    convergence_curve,
    estimate as brito_estimate,
    posterior,
)
