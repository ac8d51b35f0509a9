"""Path curves, profile curves, and rotation-minimizing frames.

A path curve is a chain of cubic Bezier segments in 3D, parameterized by
relative arc length. Orientation along the path uses a rotation-minimizing
frame propagated from t=0 with the double-reflection method; a Frenet frame
would be undefined on the straight segments furniture is full of.

A profile curve is a closed planar cross-section given as a roundness blend:
the boundary of an axis-aligned rectangle is blended toward the matching
ellipse at equal angular parameter, so roundness 0 is the rectangle and
roundness 1 the ellipse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GeometryError(ValueError):
    """Degenerate or invalid geometric input."""


_AXES = np.eye(3)

# Dense samples per Bezier segment for the arc-length table and frame grid.
_GRID_PER_SEGMENT = 64


@dataclass(frozen=True)
class Frame:
    """Right-handed orthonormal frame at a point: tangent, normal, binormal."""

    origin: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray

    def validate(self, tol: float = 1e-9) -> "Frame":
        for v in (self.tangent, self.normal, self.binormal):
            if abs(np.linalg.norm(v) - 1.0) > tol:
                raise GeometryError("frame axis is not unit length")
        if (abs(self.tangent @ self.normal) > tol
                or abs(self.tangent @ self.binormal) > tol
                or abs(self.normal @ self.binormal) > tol):
            raise GeometryError("frame axes are not orthogonal")
        if np.cross(self.tangent, self.normal) @ self.binormal < 0:
            raise GeometryError("frame is not right-handed")
        return self

    @property
    def axes(self) -> np.ndarray:
        """3x3 matrix with tangent, normal, binormal as columns."""
        return np.column_stack([self.tangent, self.normal, self.binormal])

    @staticmethod
    def identity() -> "Frame":
        return Frame(np.zeros(3), _AXES[0].copy(), _AXES[1].copy(), _AXES[2].copy())


def _bezier_point(ctrl: np.ndarray, u):
    u = np.asarray(u, dtype=float)
    w = u[..., None]
    q0 = ctrl[0] + (ctrl[1] - ctrl[0]) * w
    q1 = ctrl[1] + (ctrl[2] - ctrl[1]) * w
    q2 = ctrl[2] + (ctrl[3] - ctrl[2]) * w
    r0 = q0 + (q1 - q0) * w
    r1 = q1 + (q2 - q1) * w
    return r0 + (r1 - r0) * w


def _bezier_deriv(ctrl: np.ndarray, u):
    u = np.asarray(u, dtype=float)
    w = u[..., None]
    d0, d1, d2 = ctrl[1] - ctrl[0], ctrl[2] - ctrl[1], ctrl[3] - ctrl[2]
    e0 = d0 + (d1 - d0) * w
    e1 = d1 + (d2 - d1) * w
    return 3.0 * (e0 + (e1 - e0) * w)


def _double_reflect(p0, t0, n0, p1, t1):
    """One rotation-minimizing step (double reflection) from (p0,t0,n0) to (p1,t1)."""
    v1 = p1 - p0
    c1 = v1 @ v1
    if c1 < 1e-30:
        n_l, t_l = n0, t0
    else:
        n_l = n0 - (2.0 / c1) * (v1 @ n0) * v1
        t_l = t0 - (2.0 / c1) * (v1 @ t0) * v1
    v2 = t1 - t_l
    c2 = v2 @ v2
    if c2 < 1e-30:
        return n_l
    return n_l - (2.0 / c2) * (v2 @ n_l) * v2


def _default_normal(tangent: np.ndarray) -> np.ndarray:
    k = int(np.argmin(np.abs(_AXES @ tangent)))
    return _AXES[k]


class PathCurve:
    """Chain of C0-continuous cubic Bezier segments with arc-length lookup.

    ``init_normal`` optionally pins the frame normal at t=0 (projected
    perpendicular to the start tangent); by default the world axis least
    aligned with the start tangent is used.
    """

    def __init__(self, segments, init_normal=None):
        segments = np.asarray(segments, dtype=float)
        if segments.ndim != 3 or segments.shape[1:] != (4, 3):
            raise GeometryError("segments must have shape (k, 4, 3)")
        for a, b in zip(segments[:-1], segments[1:]):
            if np.linalg.norm(a[3] - b[0]) > 1e-9:
                raise GeometryError("segments are not C0-continuous")
        self.segments = segments

        # Dense grid: positions, tangents, cumulative lengths per grid point.
        seg_idx, us, pos, tan = [], [], [], []
        for k, ctrl in enumerate(segments):
            u = np.linspace(0.0, 1.0, _GRID_PER_SEGMENT + 1)
            p = _bezier_point(ctrl, u)
            d = _bezier_deriv(ctrl, u)
            seg_idx.append(np.full(len(u), k))
            us.append(u)
            pos.append(p)
            tan.append(d)
        self._seg = np.concatenate(seg_idx)
        self._u = np.concatenate(us)
        self._pos = np.concatenate(pos)
        tangents = np.concatenate(tan)
        norms = np.linalg.norm(tangents, axis=1)
        # Degenerate-derivative grid points fall back to chord direction.
        for i in np.nonzero(norms < 1e-12)[0]:
            j = i + 1 if i + 1 < len(self._pos) else i - 1
            chord = self._pos[j] - self._pos[i]
            cn = np.linalg.norm(chord)
            tangents[i] = chord / cn if cn > 1e-15 else _AXES[0]
            norms[i] = 1.0
            tangents[i] *= norms[i]
        self._tan = tangents / np.linalg.norm(tangents, axis=1, keepdims=True)

        steps = np.linalg.norm(np.diff(self._pos, axis=0), axis=1)
        self._cum = np.concatenate([[0.0], np.cumsum(steps)])
        self.length = float(self._cum[-1])
        if self.length <= 1e-12:
            raise GeometryError("degenerate curve: zero arc length")

        n0 = _default_normal(self._tan[0]) if init_normal is None else np.asarray(init_normal, float)
        n0 = n0 - (n0 @ self._tan[0]) * self._tan[0]
        ln = np.linalg.norm(n0)
        if ln < 1e-12:
            raise GeometryError("init_normal is parallel to the start tangent")
        n0 = n0 / ln

        normals = np.empty_like(self._pos)
        normals[0] = n0
        for i in range(len(self._pos) - 1):
            normals[i + 1] = _double_reflect(self._pos[i], self._tan[i], normals[i],
                                             self._pos[i + 1], self._tan[i + 1])
        self._nrm = normals

    def _locate(self, t: float):
        s = t * self.length
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(max(i, 0), len(self._cum) - 2)
        span = self._cum[i + 1] - self._cum[i]
        w = 0.0 if span <= 1e-300 else (s - self._cum[i]) / span
        return i, min(max(w, 0.0), 1.0)

    def point_at(self, t: float) -> np.ndarray:
        i, w = self._locate(t)
        k = int(self._seg[i])
        u = self._u[i] + w * (self._u[i + 1] - self._u[i]) if self._seg[i + 1] == k else self._u[i]
        return _bezier_point(self.segments[k], np.array(u))

    def frame_at(self, t: float) -> Frame:
        """Rotation-minimizing frame at relative arc length t in [0, 1]."""
        if not 0.0 <= t <= 1.0:
            raise GeometryError(f"curve parameter {t} outside [0, 1]")
        i, w = self._locate(t)
        k = int(self._seg[i])
        if self._seg[i + 1] == k:
            u = self._u[i] + w * (self._u[i + 1] - self._u[i])
        else:
            u = self._u[i]
        ctrl = self.segments[k]
        origin = _bezier_point(ctrl, np.array(u))
        d = _bezier_deriv(ctrl, np.array(u))
        dn = np.linalg.norm(d)
        tangent = self._tan[i] if dn < 1e-12 else d / dn
        normal = _double_reflect(self._pos[i], self._tan[i], self._nrm[i], origin, tangent)
        normal = normal - (normal @ tangent) * tangent
        normal = normal / np.linalg.norm(normal)
        binormal = np.cross(tangent, normal)
        return Frame(origin, tangent, normal, binormal)

    def grid_frames(self, q: int) -> list[Frame]:
        return [self.frame_at(t) for t in np.linspace(0.0, 1.0, q)]


def sample_curve(curve: PathCurve, t: float) -> Frame:
    """Frame at relative arc-length position t on a path curve."""
    return curve.frame_at(t)


@dataclass(frozen=True)
class ProfileCurve:
    """Closed planar cross-section: rectangle-to-ellipse roundness blend.

    half_width spans the local normal axis, half_depth the local binormal
    axis of the frame the profile is swept with.
    """

    roundness: float
    half_width: float
    half_depth: float

    def __post_init__(self):
        if not 0.0 <= self.roundness <= 1.0:
            raise GeometryError("roundness must lie in [0, 1]")
        if self.half_width <= 0 or self.half_depth <= 0:
            raise GeometryError("profile half extents must be positive")

    def point(self, theta) -> np.ndarray:
        """Boundary point(s) at angular parameter theta, shape (..., 2)."""
        theta = np.asarray(theta, dtype=float)
        c, s = np.cos(theta), np.sin(theta)
        a, b = self.half_width, self.half_depth
        with np.errstate(divide="ignore"):
            rx = np.where(np.abs(c) > 0, a / np.abs(c), np.inf)
            ry = np.where(np.abs(s) > 0, b / np.abs(s), np.inf)
        r_rect = np.minimum(rx, ry)
        rect = np.stack([r_rect * c, r_rect * s], axis=-1)
        ellipse = np.stack([a * c, b * s], axis=-1)
        return rect + (ellipse - rect) * self.roundness

    def boundary_point(self, t: float) -> np.ndarray:
        """Boundary point at relative position t in [0, 1] around the curve."""
        return self.point(2.0 * np.pi * t)

    def ring(self, n: int) -> np.ndarray:
        """n boundary points at uniform angular parameter, shape (n, 2)."""
        if n < 3:
            raise GeometryError("profile sample count must be >= 3")
        return self.point(2.0 * np.pi * np.arange(n) / n)


def straight_path(p0, p1, init_normal=None) -> PathCurve:
    """Single-segment straight path from p0 to p1."""
    p0, p1 = np.asarray(p0, float), np.asarray(p1, float)
    ctrl = np.stack([p0, p0 + (p1 - p0) / 3.0, p0 + 2.0 * (p1 - p0) / 3.0, p1])
    return PathCurve(ctrl[None, :, :], init_normal=init_normal)
