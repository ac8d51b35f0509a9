"""Wavefront OBJ export/import with part labels carried as face groups."""

from __future__ import annotations

import numpy as np

from .curves import GeometryError
from .mesh import LabeledMesh


def export_obj(mesh: LabeledMesh) -> bytes:
    """Serialize a mesh to OBJ text.

    Vertices are printed with 6 decimal places; faces are grouped by part
    with ``g <part>`` lines in first-occurrence order. Output bytes are
    deterministic for identical meshes.
    """
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.6f} {v[1]:.6f} {v[2]:.6f}")
    for part in mesh.parts:
        lines.append(f"g {part}")
        for i in mesh.part_faces(part):
            a, b, c = mesh.faces[i] + 1
            lines.append(f"f {a} {b} {c}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_obj(data: bytes | str) -> LabeledMesh:
    """Parse OBJ text; ``g`` groups become part labels (default "default")."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    verts, faces, labels = [], [], []
    part = "default"
    for lineno, line in enumerate(data.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "v":
            if len(tokens) < 4:
                raise GeometryError(f"line {lineno}: malformed vertex")
            verts.append([float(x) for x in tokens[1:4]])
        elif tag == "g":
            part = tokens[1] if len(tokens) > 1 else "default"
        elif tag == "f":
            idx = [int(t.split("/")[0]) for t in tokens[1:]]
            if len(idx) < 3:
                raise GeometryError(f"line {lineno}: face with fewer than 3 vertices")
            # fan-triangulate polygons; OBJ indices are 1-based
            for k in range(1, len(idx) - 1):
                faces.append([idx[0] - 1, idx[k] - 1, idx[k + 1] - 1])
                labels.append(part)
    if not verts:
        raise GeometryError("OBJ contains no vertices")
    return LabeledMesh(np.asarray(verts, dtype=float),
                       np.asarray(faces, dtype=np.int64).reshape(-1, 3),
                       tuple(labels))
