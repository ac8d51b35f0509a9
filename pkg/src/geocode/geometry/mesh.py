"""Part-labeled triangle meshes and the rigid/symmetry operations on them.

Meshes carry one semantic part name per face. Joining never welds coincident
vertices: part boundaries stay separable for segmentation and component
analysis, and contact between parts is detected by proximity instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import Frame, GeometryError


@dataclass(frozen=True)
class LabeledMesh:
    """Vertices (n,3), triangle faces (m,3), and one part name per face."""

    vertices: np.ndarray
    faces: np.ndarray
    face_part: tuple[str, ...] = field(default_factory=tuple)

    @staticmethod
    def create(vertices, faces, face_part) -> "LabeledMesh":
        vertices = np.ascontiguousarray(np.asarray(vertices, dtype=float).reshape(-1, 3))
        faces = np.ascontiguousarray(np.asarray(faces, dtype=np.int64).reshape(-1, 3))
        return LabeledMesh(vertices, faces, tuple(face_part))

    @staticmethod
    def empty() -> "LabeledMesh":
        return LabeledMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), ())

    @property
    def is_empty(self) -> bool:
        return len(self.faces) == 0

    def validate(self) -> "LabeledMesh":
        if len(self.face_part) != len(self.faces):
            raise GeometryError("face_part length does not match face count")
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise GeometryError("face index out of range")
        if len(self.faces):
            areas = face_areas(self)
            if areas.min() <= 1e-12:
                raise GeometryError("mesh contains a zero-area face")
        return self

    @property
    def parts(self) -> tuple[str, ...]:
        """Distinct part names in first-occurrence order."""
        seen: dict[str, None] = {}
        for p in self.face_part:
            seen.setdefault(p)
        return tuple(seen)

    def part_faces(self, part: str) -> np.ndarray:
        return np.array([i for i, p in enumerate(self.face_part) if p == part], dtype=np.int64)

    def submesh(self, face_indices) -> "LabeledMesh":
        """Mesh restricted to the given faces, with vertices compacted."""
        face_indices = np.asarray(face_indices, dtype=np.int64)
        faces = self.faces[face_indices]
        used, inverse = np.unique(faces, return_inverse=True)
        return LabeledMesh(self.vertices[used].copy(), inverse.reshape(-1, 3).astype(np.int64),
                           tuple(self.face_part[i] for i in face_indices))

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if not len(self.vertices):
            return np.zeros(3), np.zeros(3)
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bounds()
        return float(np.linalg.norm(hi - lo))


def face_areas(mesh: LabeledMesh) -> np.ndarray:
    v = mesh.vertices
    f = mesh.faces
    cross = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    return 0.5 * np.linalg.norm(cross, axis=1)


def signed_volume(mesh: LabeledMesh) -> float:
    """Divergence-theorem volume; positive for outward-oriented closed meshes."""
    v = mesh.vertices
    f = mesh.faces
    if not len(f):
        return 0.0
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def volume_centroid(mesh: LabeledMesh) -> tuple[float, np.ndarray]:
    """(signed volume, uniform-density centroid) of a closed mesh."""
    v = mesh.vertices
    f = mesh.faces
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    vol = det.sum() / 6.0
    if abs(vol) < 1e-15:
        return 0.0, np.zeros(3)
    centroid = (det[:, None] * (a + b + c)).sum(axis=0) / (24.0 * vol)
    return float(vol), centroid


def is_closed(mesh: LabeledMesh) -> bool:
    """True when every edge is shared by exactly two faces."""
    if mesh.is_empty:
        return False
    f = mesh.faces
    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    return bool((counts == 2).all())


def transform(mesh: LabeledMesh, rotation: np.ndarray, translation: np.ndarray) -> LabeledMesh:
    if mesh.is_empty:
        return mesh
    return LabeledMesh(mesh.vertices @ rotation.T + translation, mesh.faces.copy(),
                       mesh.face_part)


def translate(mesh: LabeledMesh, offset) -> LabeledMesh:
    if mesh.is_empty:
        return mesh
    return LabeledMesh(mesh.vertices + np.asarray(offset, float), mesh.faces.copy(),
                       mesh.face_part)


def reflect_points(points: np.ndarray, plane_point, plane_normal) -> np.ndarray:
    p0 = np.asarray(plane_point, float)
    n = np.asarray(plane_normal, float)
    d = (points - p0) @ n
    return points - 2.0 * d[:, None] * n


def mirror(mesh: LabeledMesh, plane_point, plane_normal) -> LabeledMesh:
    """Input plus its reflection across the plane, winding flipped."""
    n = np.asarray(plane_normal, float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise GeometryError("plane normal must be unit length")
    if mesh.is_empty:
        return mesh
    refl_v = reflect_points(mesh.vertices, plane_point, n)
    refl_f = mesh.faces[:, [0, 2, 1]] + len(mesh.vertices)
    return LabeledMesh(np.concatenate([mesh.vertices, refl_v]),
                       np.concatenate([mesh.faces, refl_f]),
                       mesh.face_part + mesh.face_part)


def rotation_about_axis(axis_dir, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    k = np.asarray(axis_dir, float)
    k = k / np.linalg.norm(k)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * (kx @ kx)


def rotational_replicate(mesh: LabeledMesh, axis_point, axis_dir, k: int) -> LabeledMesh:
    """k copies at angles 2*pi*j/k about the axis; k=1 is the identity."""
    if k < 1:
        raise GeometryError("replication count must be >= 1")
    if k == 1 or mesh.is_empty:
        return mesh
    p0 = np.asarray(axis_point, float)
    copies = []
    for j in range(k):
        rot = rotation_about_axis(axis_dir, 2.0 * np.pi * j / k)
        copies.append(LabeledMesh((mesh.vertices - p0) @ rot.T + p0, mesh.faces.copy(),
                                  mesh.face_part))
    return join(copies)


def join(parts: list[LabeledMesh]) -> LabeledMesh:
    """Concatenate meshes, reindexing faces; no vertex welding."""
    if not parts:
        raise GeometryError("join requires at least one mesh")
    if len(parts) == 1:
        return parts[0]
    verts, faces, labels = [], [], []
    offset = 0
    for m in parts:
        if m.is_empty:
            continue
        verts.append(m.vertices)
        faces.append(m.faces + offset)
        labels.extend(m.face_part)
        offset += len(m.vertices)
    if not verts:
        return LabeledMesh.empty()
    return LabeledMesh(np.concatenate(verts), np.concatenate(faces), tuple(labels))


def retag(mesh: LabeledMesh, part: str) -> LabeledMesh:
    return LabeledMesh(mesh.vertices.copy(), mesh.faces.copy(), (part,) * len(mesh.faces))


def attach(element: LabeledMesh, local_anchor: Frame, target: Frame,
           fit_width: float | None = None, fit_axis=None) -> LabeledMesh:
    """Rigidly map the element's anchor frame onto the target frame.

    With ``fit_width``, the element is first scaled about the anchor origin
    along ``fit_axis`` (element-local, defaults to the anchor tangent) so its
    bounding extent along that axis equals fit_width.
    """
    if element.is_empty:
        return element
    verts = element.vertices
    if fit_width is not None:
        if fit_width <= 0:
            raise GeometryError("fit_width must be positive")
        axis = np.asarray(fit_axis, float) if fit_axis is not None else local_anchor.tangent
        axis = axis / np.linalg.norm(axis)
        proj = (verts - local_anchor.origin) @ axis
        extent = proj.max() - proj.min()
        if extent <= 1e-12:
            raise GeometryError("cannot width-fit an element with zero extent")
        scale = fit_width / extent
        verts = verts + (scale - 1.0) * proj[:, None] * axis
    rot = target.axes @ local_anchor.axes.T
    verts = (verts - local_anchor.origin) @ rot.T + target.origin
    return LabeledMesh(verts, element.faces.copy(), element.face_part)
