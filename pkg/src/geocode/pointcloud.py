"""Point-cloud sampling: area-uniform surface sampling, farthest point
sampling, training-cloud assembly, and the binary cloud file format.

Cloud files are little-endian float32 xyz triples behind an 8-byte magic
("PCXYZ001"), with a JSON sidecar recording count, seed, and provenance.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import LabeledMesh, face_areas
from .geometry.curves import GeometryError

PCXYZ_MAGIC = b"PCXYZ001"

# Pool the farthest-point selection draws from; dense enough that the
# selection is insensitive to mesh resolution.
FPS_POOL_SIZE = 16384
FPS_COUNT = 1500
RANDOM_COUNT = 1500
RANDOM_PICK = 800


@dataclass(frozen=True)
class PointCloud:
    """Ordered 3D points with sampling provenance and the RNG seed used."""

    points: np.ndarray
    provenance: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise GeometryError("point cloud must have shape (n, 3)")
        if len(self.points) < 1:
            raise GeometryError("point cloud is empty")
        if not np.isfinite(self.points).all():
            raise GeometryError("point cloud contains non-finite coordinates")

    def __len__(self):
        return len(self.points)


def as_points(cloud) -> np.ndarray:
    if isinstance(cloud, PointCloud):
        return cloud.points
    return np.asarray(cloud, dtype=float)


def surface_sample(mesh: LabeledMesh, n: int, seed: int) -> PointCloud:
    """Draw n points area-uniformly from the mesh surface.

    Faces are chosen with probability proportional to area, the point inside
    each face by uniform barycentric sampling; deterministic for fixed seed.
    """
    if n < 1:
        raise GeometryError("sample count must be >= 1")
    areas = face_areas(mesh)
    total = areas.sum()
    if not total > 0:
        raise GeometryError("cannot sample a mesh with zero surface area")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(areas), size=n, p=areas / total)
    u = rng.random(n)
    v = rng.random(n)
    su = np.sqrt(u)
    w0, w1, w2 = 1.0 - su, su * (1.0 - v), su * v
    tri = mesh.vertices[mesh.faces[idx]]
    pts = w0[:, None] * tri[:, 0] + w1[:, None] * tri[:, 1] + w2[:, None] * tri[:, 2]
    return PointCloud(pts, provenance="random", seed=seed)


def fps(cloud, k: int, start: int = 0) -> np.ndarray:
    """Greedy farthest-point selection; returns indices in selection order.

    Distances are tracked squared via |x|^2 - 2 x.p + |p|^2, which keeps the
    inner loop a single matrix-vector product.
    """
    pts = as_points(cloud)
    n = len(pts)
    if not 1 <= k <= n:
        raise GeometryError(f"fps count {k} outside [1, {n}]")
    if not 0 <= start < n:
        raise GeometryError(f"fps start index {start} out of range")
    selected = np.empty(k, dtype=np.int64)
    selected[0] = start
    sq = np.einsum("ij,ij->i", pts, pts)
    p = pts[start]
    dist = sq - 2.0 * (pts @ p) + (p @ p)
    for i in range(1, k):
        nxt = int(np.argmax(dist))
        selected[i] = nxt
        p = pts[nxt]
        d = sq - 2.0 * (pts @ p) + (p @ p)
        np.minimum(dist, d, out=dist)
    return selected


def make_training_cloud(mesh: LabeledMesh, seed: int) -> PointCloud:
    """2300-point training cloud: 1500 farthest-point-sampled points from a
    dense pool, followed by 800 drawn without replacement from a separate
    1500-point random cloud."""
    pool_seed, rand_seed, pick_seed = _derive_seeds(seed, 3)
    pool = surface_sample(mesh, FPS_POOL_SIZE, pool_seed)
    fps_pts = pool.points[fps(pool, FPS_COUNT, start=0)]
    rand = surface_sample(mesh, RANDOM_COUNT, rand_seed)
    rng = np.random.default_rng(pick_seed)
    pick = rng.permutation(RANDOM_COUNT)[:RANDOM_PICK]
    return PointCloud(np.concatenate([fps_pts, rand.points[pick]]),
                      provenance="mixed", seed=seed)


def sample_fps_cloud(mesh: LabeledMesh, seed: int) -> PointCloud:
    """The stored 1500-point farthest-point-sampled cloud of a shape."""
    pool_seed, _, _ = _derive_seeds(seed, 3)
    pool = surface_sample(mesh, FPS_POOL_SIZE, pool_seed)
    pts = pool.points[fps(pool, FPS_COUNT, start=0)]
    return PointCloud(pts, provenance="fps", seed=seed)


def sample_random_cloud(mesh: LabeledMesh, seed: int) -> PointCloud:
    """The stored 1500-point randomly sampled cloud of a shape."""
    _, rand_seed, _ = _derive_seeds(seed, 3)
    cloud = surface_sample(mesh, RANDOM_COUNT, rand_seed)
    return PointCloud(cloud.points, provenance="random", seed=seed)


def _derive_seeds(seed, n: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1)[0]) for s in ss.spawn(n)]


def write_pcxyz(path: str | Path, cloud: PointCloud):
    path = Path(path)
    data = PCXYZ_MAGIC + cloud.points.astype("<f4").tobytes()
    path.write_bytes(data)
    sidecar = {"count": len(cloud), "provenance": cloud.provenance, "seed": cloud.seed}
    path.with_suffix(".json").write_text(
        json.dumps(sidecar, sort_keys=True, separators=(",", ":")))


def read_pcxyz(path: str | Path) -> PointCloud:
    path = Path(path)
    data = path.read_bytes()
    if data[:8] != PCXYZ_MAGIC:
        raise GeometryError(f"{path}: not a PCXYZ001 file")
    pts = np.frombuffer(data[8:], dtype="<f4").astype(float).reshape(-1, 3)
    provenance, seed = "random", 0
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        provenance = meta.get("provenance", "random")
        seed = int(meta.get("seed", 0))
    return PointCloud(pts, provenance=provenance, seed=seed)
