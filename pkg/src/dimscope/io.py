"""File formats: point clouds (CSV / binary), MST exports, embedding tables.

CSV clouds carry a ``x0,...,x{d-1}`` header and 17-significant-digit
decimals so float64 values round-trip.  The binary format is
``DIMC`` + u32 version + u64 n + u32 d + row-major little-endian f64.
"""

import json
import struct
from pathlib import Path

import numpy as np

from .core import InvalidArgumentError, PointCloud

MAGIC = b"DIMC"
BINARY_VERSION = 1


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_cloud_csv(cloud: PointCloud, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(f"x{i}" for i in range(cloud.d)) + "\n")
        for row in cloud.points:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_cloud_csv(path) -> PointCloud:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        names = header.split(",")
        if names != [f"x{i}" for i in range(len(names))]:
            raise InvalidArgumentError(f"bad cloud CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2, dtype=np.float64)
    return PointCloud(data, {"source": str(path), "format": "csv"})


def write_cloud_binary(cloud: PointCloud, path) -> None:
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQI", BINARY_VERSION, cloud.n, cloud.d))
        fh.write(np.ascontiguousarray(cloud.points, dtype="<f8").tobytes())


def read_cloud_binary(path) -> PointCloud:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != MAGIC:
        raise InvalidArgumentError(f"{path}: not a DIMC cloud file")
    version, n, d = struct.unpack_from("<IQI", raw, 4)
    if version != BINARY_VERSION:
        raise InvalidArgumentError(f"{path}: unsupported version {version}")
    offset = 4 + struct.calcsize("<IQI")
    expected = offset + 8 * n * d
    if len(raw) != expected:
        raise InvalidArgumentError(f"{path}: truncated ({len(raw)} bytes, want {expected})")
    pts = np.frombuffer(raw, dtype="<f8", count=n * d, offset=offset).reshape(n, d)
    return PointCloud(pts, {"source": str(path), "format": "bin"})


def read_cloud(path) -> PointCloud:
    """Sniff CSV vs binary by the magic bytes."""
    path = Path(path)
    with path.open("rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_cloud_binary(path)
    return read_cloud_csv(path)


def write_cloud(cloud: PointCloud, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        write_cloud_csv(cloud, path)
    elif fmt == "bin":
        write_cloud_binary(cloud, path)
    else:
        raise InvalidArgumentError(f"unknown cloud format {fmt!r}")


def write_tree_csv(tree, path) -> None:
    """Edge list as ``u,v,weight`` rows."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("u,v,weight\n")
        for u, v, w in tree.edges:
            fh.write(f"{u},{v},{_fmt(w)}\n")


def tree_summary(tree) -> dict:
    degrees = tree.degrees()
    hist = np.bincount(degrees)
    return {
        "n": tree.n,
        "total_weight": float(tree.total_weight()),
        "degree_histogram": {str(k): int(c) for k, c in enumerate(hist) if c > 0},
    }


def write_json(obj, path) -> None:
    Path(path).write_text(
        json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8",
    )


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
