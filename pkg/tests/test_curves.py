import numpy as np
import pytest

from geocode.geometry import Frame, GeometryError, PathCurve, ProfileCurve, sample_curve
from geocode.geometry.curves import straight_path


def _de_casteljau(ctrl, u):
    pts = [np.asarray(p, float) for p in ctrl]
    while len(pts) > 1:
        pts = [(1 - u) * a + u * b for a, b in zip(pts[:-1], pts[1:])]
    return pts[0]


def test_straight_segment_midpoint():
    c = straight_path((0, 0, 0), (0, 0, 2))
    f = sample_curve(c, 0.5)
    assert np.allclose(f.origin, (0, 0, 1), atol=1e-12)
    assert np.allclose(f.tangent, (0, 0, 1), atol=1e-12)
    f.validate()


def test_t_zero_is_first_control_point():
    ctrl = np.array([[(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0)]], dtype=float)
    c = PathCurve(ctrl)
    f = sample_curve(c, 0.0)
    assert np.allclose(f.origin, (0, 0, 0), atol=1e-12)


def test_generic_cubic_against_arclength_oracle():
    ctrl = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0)]
    c = PathCurve(np.array([ctrl], dtype=float))
    # oracle: dense chord-length table over de Casteljau samples
    us = np.linspace(0, 1, 20001)
    pts = np.array([_de_casteljau(ctrl, u) for u in us])
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    for t in (0.25, 0.5, 0.75):
        target = t * cum[-1]
        i = np.searchsorted(cum, target)
        u_star = us[min(i, len(us) - 1)]
        expected = _de_casteljau(ctrl, u_star)
        got = sample_curve(c, t).origin
        assert np.linalg.norm(got - expected) < 1e-3


def test_c0_continuity_enforced():
    segs = np.array([
        [(0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)],
        [(3.1, 0, 0), (4, 0, 0), (5, 0, 0), (6, 0, 0)],
    ], dtype=float)
    with pytest.raises(GeometryError):
        PathCurve(segs)


def test_zero_length_curve_rejected():
    segs = np.zeros((1, 4, 3))
    with pytest.raises(GeometryError):
        PathCurve(segs)


def test_frames_are_orthonormal_and_right_handed():
    ctrl = np.array([[(0, 0, 0), (0.2, 0.5, 0.1), (0.8, 0.4, 0.6), (1, 1, 1)]])
    c = PathCurve(ctrl)
    for t in np.linspace(0, 1, 17):
        sample_curve(c, float(t)).validate()


def test_rotation_minimizing_twist_bound():
    # twist between consecutive frames stays small on a curly path
    ctrl = np.array([[(0, 0, 0), (1, 0, 1), (1, 1, 2), (0, 1, 3)]])
    c = PathCurve(ctrl)
    frames = c.grid_frames(32)
    for a, b in zip(frames[:-1], frames[1:]):
        cosang = float(np.clip(a.normal @ b.normal, -1, 1))
        assert np.degrees(np.arccos(cosang)) < 30.0


def test_init_normal_override():
    c = straight_path((0, 0, 0), (0, 0, 1), init_normal=(0, 1, 0))
    f = sample_curve(c, 0.0)
    assert np.allclose(f.normal, (0, 1, 0), atol=1e-12)


def test_init_normal_parallel_to_tangent_rejected():
    with pytest.raises(GeometryError):
        straight_path((0, 0, 0), (0, 0, 1), init_normal=(0, 0, 1))


def test_parameter_outside_range_rejected():
    c = straight_path((0, 0, 0), (0, 0, 1))
    with pytest.raises(GeometryError):
        c.frame_at(1.5)


def test_planar_curve_keeps_out_of_plane_normal():
    ctrl = np.array([[(-0.5, 0, 0), (-1 / 6, 0.3, 0), (1 / 6, 0.3, 0), (0.5, 0, 0)]])
    c = PathCurve(ctrl, init_normal=(0, 0, 1))
    for t in np.linspace(0, 1, 9):
        f = c.frame_at(float(t))
        assert np.allclose(f.normal, (0, 0, 1), atol=1e-12)


def test_profile_roundness_endpoints():
    sq = ProfileCurve(0.0, 0.05, 0.05)
    # rectangle corner at 45 degrees
    assert np.allclose(sq.point(np.pi / 4), (0.05, 0.05), atol=1e-12)
    ell = ProfileCurve(1.0, 0.05, 0.03)
    theta = 0.7
    assert np.allclose(ell.point(theta), (0.05 * np.cos(theta), 0.03 * np.sin(theta)),
                       atol=1e-12)


def test_profile_axis_points_invariant_to_roundness():
    for r in (0.0, 0.3, 1.0):
        p = ProfileCurve(r, 0.04, 0.02)
        assert np.allclose(p.point(0.0), (0.04, 0.0), atol=1e-12)
        assert np.allclose(p.point(np.pi / 2), (0.0, 0.02), atol=1e-12)


def test_profile_invalid_arguments():
    with pytest.raises(GeometryError):
        ProfileCurve(1.5, 0.1, 0.1)
    with pytest.raises(GeometryError):
        ProfileCurve(0.5, 0.0, 0.1)


def test_profile_ring_is_simple_closed():
    p = ProfileCurve(0.4, 0.05, 0.03)
    ring = p.ring(64)
    radii = np.linalg.norm(ring, axis=1)
    assert (radii > 0).all()
    # angular parameter increases monotonically around the boundary
    angles = np.unwrap(np.arctan2(ring[:, 1], ring[:, 0]))
    assert (np.diff(angles) > 0).all()
