"""Shape metrics: bi-directional Chamfer distance and structural stability.

Chamfer uses the squared-distance convention: the mean squared nearest
neighbor distance in each direction, summed.

Stability is a static check with two parts. First, no detached pieces:
mesh components (by shared vertices) are merged by contact, where contact
means vertex sets within a proximity tolerance or surfaces that actually
cross; everything must connect to the component that owns the lowest
vertex. Second, the shape must stand: the uniform-density center of mass
must project strictly inside the convex hull of the near-ground vertices,
with a margin of 1% of the bounding-box diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .geometry import LabeledMesh, face_areas, is_closed, volume_centroid
from .geometry.curves import GeometryError
from .pointcloud import PointCloud, as_points, surface_sample

# Contact proximity as a fraction of the bounding-box diagonal.
CONTACT_EPS_FRACTION = 1e-3
# Near-ground band for support points, as a fraction of shape height.
SUPPORT_BAND_FRACTION = 0.02
# Required center-of-mass margin, as a fraction of the bounding-box diagonal.
MARGIN_FRACTION = 0.01


def chamfer(a, b) -> float:
    """Symmetric Chamfer distance between two point sets (squared distances)."""
    pa, pb = as_points(a), as_points(b)
    if len(pa) == 0 or len(pb) == 0:
        raise GeometryError("chamfer requires nonempty clouds")
    d_ab, _ = cKDTree(pb).query(pa)
    d_ba, _ = cKDTree(pa).query(pb)
    return float(np.mean(d_ab ** 2) + np.mean(d_ba ** 2))


def mesh_chamfer(ma: LabeledMesh, mb: LabeledMesh, n: int = 10000, seed: int = 0) -> float:
    """Chamfer over area-uniform surface samples of both meshes."""
    return chamfer(surface_sample(ma, n, seed), surface_sample(mb, n, seed))


def normalize_mesh(mesh: LabeledMesh) -> LabeledMesh:
    """Center the mesh and scale it to unit bounding-box diagonal."""
    lo, hi = mesh.bounds()
    diag = float(np.linalg.norm(hi - lo))
    if diag <= 0:
        raise GeometryError("cannot normalize a degenerate mesh")
    center = 0.5 * (lo + hi)
    return LabeledMesh((mesh.vertices - center) / diag, mesh.faces.copy(), mesh.face_part)


def contact_eps(mesh: LabeledMesh) -> float:
    return CONTACT_EPS_FRACTION * mesh.bbox_diagonal()


# ---------------------------------------------------------------------------
# connectivity

def _vertex_components(mesh: LabeledMesh) -> list[np.ndarray]:
    """Face components by shared vertex indices."""
    nv = len(mesh.vertices)
    f = mesh.faces
    rows = np.concatenate([f[:, 0], f[:, 1], f[:, 2]])
    cols = np.concatenate([f[:, 1], f[:, 2], f[:, 0]])
    adj = sparse.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(nv, nv))
    _, vlabel = sparse.csgraph.connected_components(adj, directed=False)
    flabel = vlabel[f[:, 0]]
    return [np.nonzero(flabel == c)[0] for c in np.unique(flabel)]


def _segment_triangle_hits(seg_a: np.ndarray, seg_b: np.ndarray, tris: np.ndarray) -> bool:
    """Any segment (a->b) properly crossing any triangle (Moller-Trumbore)."""
    if len(seg_a) == 0 or len(tris) == 0:
        return False
    # all segment x triangle pairs, chunked to bound memory
    max_pairs = 2_000_000
    tri_chunk = max(1, max_pairs // max(len(seg_a), 1))
    for t0 in range(0, len(tris), tri_chunk):
        t = tris[t0:t0 + tri_chunk]
        e1 = t[:, 1] - t[:, 0]
        e2 = t[:, 2] - t[:, 0]
        d = (seg_b - seg_a)[:, None, :]
        h = np.cross(d, e2[None, :, :])
        det = np.einsum("ij,sij->si", e1, h)
        ok = np.abs(det) > 1e-14
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(ok, 1.0 / det, 0.0)
            s = seg_a[:, None, :] - t[None, :, 0]
            u = inv * np.einsum("sij,sij->si", s, h)
            q = np.cross(s, e1[None, :, :])
            v = inv * np.einsum("sij,sij->si", d, q)
            w = inv * np.einsum("ij,sij->si", e2, q)
        hit = ok & (u >= 0) & (u <= 1) & (v >= 0) & (u + v <= 1) & (w >= 0) & (w <= 1)
        if hit.any():
            return True
    return False


def _boundary_edges(mesh: LabeledMesh, faces: np.ndarray) -> np.ndarray:
    f = mesh.faces[faces]
    e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    return np.unique(np.sort(e, axis=1), axis=0)


def _components_touch(mesh: LabeledMesh, fa: np.ndarray, fb: np.ndarray, eps: float) -> bool:
    va = np.unique(mesh.faces[fa])
    vb = np.unique(mesh.faces[fb])
    pa, pb = mesh.vertices[va], mesh.vertices[vb]
    lo = np.maximum(pa.min(axis=0), pb.min(axis=0)) - eps
    hi = np.minimum(pa.max(axis=0), pb.max(axis=0)) + eps
    if (lo > hi).any():
        return False
    d, _ = cKDTree(pb).query(pa, distance_upper_bound=eps * 1.0000001)
    if np.isfinite(d).any():
        return True
    # surfaces may cross without near vertices; test edges against faces
    # restricted to the bbox overlap region
    margin = eps + 1e-9

    def near(faces):
        tri = mesh.vertices[mesh.faces[faces]]
        tlo, thi = tri.min(axis=1), tri.max(axis=1)
        keep = ((thi >= lo - margin) & (tlo <= hi + margin)).all(axis=1)
        return faces[keep]

    fa_n, fb_n = near(fa), near(fb)
    if len(fa_n) == 0 or len(fb_n) == 0:
        return False
    ea = _boundary_edges(mesh, fa_n)
    eb = _boundary_edges(mesh, fb_n)
    tris_a = mesh.vertices[mesh.faces[fa_n]]
    tris_b = mesh.vertices[mesh.faces[fb_n]]
    if _segment_triangle_hits(mesh.vertices[ea[:, 0]], mesh.vertices[ea[:, 1]], tris_b):
        return True
    return _segment_triangle_hits(mesh.vertices[eb[:, 0]], mesh.vertices[eb[:, 1]], tris_a)


def connected_components(mesh: LabeledMesh, eps: float | None = None) -> list[np.ndarray]:
    """Partition faces into components, merging pieces that are in contact.

    Contact means vertices within eps, or surfaces that cross. eps defaults
    to 1e-3 of the bounding-box diagonal.
    """
    if mesh.is_empty:
        return []
    if eps is None:
        eps = contact_eps(mesh)
    comps = _vertex_components(mesh)
    n = len(comps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if _components_touch(mesh, comps[i], comps[j], eps):
                parent[find(j)] = find(i)

    groups: dict[int, list[np.ndarray]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(comps[i])
    merged = [np.sort(np.concatenate(g)) for g in groups.values()]
    merged.sort(key=lambda a: int(a[0]))
    return merged


# ---------------------------------------------------------------------------
# stability

@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    detached_components: int
    com_margin: float

    def to_json(self) -> dict:
        return {"stable": self.stable,
                "detached_components": self.detached_components,
                "com_margin": self.com_margin}


def center_of_mass(mesh: LabeledMesh) -> np.ndarray:
    """Uniform-density center of mass: volume-weighted over closed
    components, with an area-weighted fallback when any piece is open."""
    comps = _vertex_components(mesh)
    subs = [mesh.submesh(c) for c in comps]
    if all(is_closed(s) for s in subs):
        total, acc = 0.0, np.zeros(3)
        for s in subs:
            vol, cen = volume_centroid(s)
            w = abs(vol)
            total += w
            acc += w * cen
        if total > 1e-15:
            return acc / total
    areas = face_areas(mesh)
    centroids = mesh.vertices[mesh.faces].mean(axis=1)
    return (areas[:, None] * centroids).sum(axis=0) / areas.sum()


def _hull_margin(xy: np.ndarray, point: np.ndarray) -> float:
    """Signed distance from point to the convex hull boundary (inside > 0)."""
    uniq = np.unique(np.round(xy, 12), axis=0)
    if len(uniq) < 3:
        return 0.0
    try:
        hull = ConvexHull(uniq)
    except QhullError:
        return 0.0
    # hull equations: a.x + b <= 0 inside
    dist = hull.equations[:, :2] @ point + hull.equations[:, 2]
    return float(-dist.max())


def stability(mesh: LabeledMesh) -> StabilityReport:
    """Detached-parts plus static standing check."""
    if mesh.is_empty:
        return StabilityReport(False, 0, 0.0)
    eps = contact_eps(mesh)
    groups = connected_components(mesh, eps)
    min_z = mesh.vertices.min(axis=0)[2]
    lowest_vertex = int(np.argmin(mesh.vertices[:, 2]))
    ground_group = None
    for gi, g in enumerate(groups):
        if lowest_vertex in mesh.faces[g]:
            ground_group = gi
            break
    detached = len(groups) - 1 if ground_group is not None else len(groups)

    lo, hi = mesh.bounds()
    height = hi[2] - lo[2]
    band = SUPPORT_BAND_FRACTION * height
    support = mesh.vertices[mesh.vertices[:, 2] <= min_z + band]
    com = center_of_mass(mesh)
    margin = _hull_margin(support[:, [0, 1]], com[[0, 1]]) if len(support) else 0.0

    tol = MARGIN_FRACTION * mesh.bbox_diagonal()
    stable = detached == 0 and margin > tol
    return StabilityReport(bool(stable), int(detached), float(margin))
