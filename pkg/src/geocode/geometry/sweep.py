"""Profile-along-path sweeping with variable cross-section scale."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .curves import GeometryError, PathCurve, ProfileCurve
from .mesh import LabeledMesh


def sweep(profile: ProfileCurve, path: PathCurve, scale_at: Callable[[float], float],
          profile_samples: int = 16, path_samples: int = 32,
          part: str = "element") -> LabeledMesh:
    """Extrude a profile along a path, scaling the cross-section per position.

    The mesh has profile_samples * path_samples ring vertices plus two
    cap-center vertices; each cross-section is the profile scaled by
    scale_at(t) and oriented by the path's rotation-minimizing frame at t.
    Caps are triangulated as fans from the cross-section centroid, which is
    the frame origin since profiles are centered by construction.
    """
    p, q = profile_samples, path_samples
    if p < 3:
        raise GeometryError("profile sample count must be >= 3")
    if q < 2:
        raise GeometryError("path sample count must be >= 2")
    ring2d = profile.ring(p)
    ts = np.linspace(0.0, 1.0, q)
    verts = np.empty((p * q + 2, 3))
    for i, t in enumerate(ts):
        s = float(scale_at(float(t)))
        if not s > 0.0:
            raise GeometryError(f"non-positive sweep scale {s} at t={t}")
        f = path.frame_at(float(t))
        verts[i * p:(i + 1) * p] = (f.origin
                                    + (s * ring2d[:, 0])[:, None] * f.normal
                                    + (s * ring2d[:, 1])[:, None] * f.binormal)
        if i == 0:
            verts[p * q] = f.origin
        if i == q - 1:
            verts[p * q + 1] = f.origin

    faces = np.empty((2 * p * (q - 1) + 2 * p, 3), dtype=np.int64)
    n = 0
    for i in range(q - 1):
        base, nxt = i * p, (i + 1) * p
        for j in range(p):
            j1 = (j + 1) % p
            faces[n] = (base + j, base + j1, nxt + j1)
            faces[n + 1] = (base + j, nxt + j1, nxt + j)
            n += 2
    c0, c1 = p * q, p * q + 1
    for j in range(p):
        j1 = (j + 1) % p
        faces[n] = (c0, j1, j)
        faces[n + 1] = (c1, (q - 1) * p + j, (q - 1) * p + j1)
        n += 2
    return LabeledMesh(verts, faces, (part,) * len(faces))
