import numpy as np
import pytest

from geocode.geometry import (Frame, GeometryError, LabeledMesh, attach,
                              is_closed, join, mirror, rotational_replicate,
                              signed_volume, translate)
from geocode.geometry.curves import ProfileCurve, straight_path
from geocode.geometry.sweep import sweep
from geocode.metrics import connected_components


def _cuboid(w=0.2, d=0.2, h=0.2, center=(0.0, 0.0, 0.0), part="box"):
    path = straight_path((center[0], center[1], center[2] - h / 2),
                         (center[0], center[1], center[2] + h / 2),
                         init_normal=(1, 0, 0))
    return sweep(ProfileCurve(0.0, w / 2, d / 2), path, lambda t: 1.0,
                 profile_samples=4, path_samples=2, part=part)


def test_mirror_reflects_vertices():
    m = LabeledMesh.create([(0.3, 0.2, 0.5), (0.4, 0.2, 0.5), (0.3, 0.3, 0.6)],
                           [(0, 1, 2)], ["a"])
    out = mirror(m, (0, 0, 0), (1, 0, 0))
    assert any(np.allclose(v, (-0.3, 0.2, 0.5)) for v in out.vertices)


def test_mirror_doubles_counts_and_keeps_labels():
    m = _cuboid(center=(0.5, 0, 0))
    out = mirror(m, (0, 0, 0), (1, 0, 0))
    assert len(out.vertices) == 2 * len(m.vertices)
    assert len(out.faces) == 2 * len(m.faces)
    assert out.face_part == m.face_part * 2


def test_mirror_preserves_orientation_volume():
    m = _cuboid(center=(0.5, 0, 0))
    v0 = signed_volume(m)
    out = mirror(m, (0, 0, 0), (1, 0, 0))
    assert signed_volume(out) == pytest.approx(2 * v0, rel=1e-12)


def test_mirror_requires_unit_normal():
    m = _cuboid()
    with pytest.raises(GeometryError):
        mirror(m, (0, 0, 0), (2, 0, 0))


def test_reflection_is_involution():
    m = _cuboid(center=(0.4, 0.1, 0.0))
    once = mirror(m, (0, 0, 0), (1, 0, 0))
    twice = mirror(once, (0, 0, 0), (1, 0, 0))
    assert len(twice.faces) == 4 * len(m.faces)
    # applying the reflection map twice returns every vertex
    n = np.array([1.0, 0, 0])
    refl = m.vertices - 2 * (m.vertices @ n)[:, None] * n[None, :]
    back = refl - 2 * (refl @ n)[:, None] * n[None, :]
    assert np.abs(back - m.vertices).max() < 1e-12


def test_rotational_replicate_identity():
    m = _cuboid()
    out = rotational_replicate(m, (0, 0, 0), (0, 0, 1), 1)
    assert out is m


def test_rotational_replicate_positions():
    m = LabeledMesh.create([(1, 0, 0), (1.1, 0, 0), (1, 0.1, 0.1)], [(0, 1, 2)], ["a"])
    out = rotational_replicate(m, (0, 0, 0), (0, 0, 1), 3)
    ang = 2 * np.pi / 3
    assert any(np.allclose(v, (np.cos(ang), np.sin(ang), 0), atol=1e-12)
               for v in out.vertices)
    assert any(np.allclose(v, (np.cos(2 * ang), np.sin(2 * ang), 0), atol=1e-12)
               for v in out.vertices)


def test_rotational_replicate_component_count():
    handle = _cuboid(w=0.05, d=0.05, h=0.3, center=(0.5, 0, 0))
    out = rotational_replicate(handle, (0, 0, 0), (0, 0, 1), 4)
    assert len(connected_components(out, eps=1e-6)) == 4


def test_rotational_replicate_rejects_bad_count():
    with pytest.raises(GeometryError):
        rotational_replicate(_cuboid(), (0, 0, 0), (0, 0, 1), 0)


def test_join_singleton():
    m = _cuboid()
    assert join([m]) is m


def test_join_counts_and_labels():
    a, b = _cuboid(part="a"), _cuboid(center=(1, 0, 0), part="b")
    out = join([a, b])
    assert len(out.vertices) == len(a.vertices) + len(b.vertices)
    assert out.face_part == a.face_part + b.face_part
    assert out.faces.max() == len(out.vertices) - 1


def test_join_empty_list_rejected():
    with pytest.raises(GeometryError):
        join([])


def test_join_skips_empty_meshes():
    a = _cuboid()
    out = join([a, LabeledMesh.empty()])
    assert len(out.faces) == len(a.faces)


def test_attach_identity():
    m = _cuboid()
    f = Frame.identity()
    out = attach(m, f, f)
    assert np.abs(out.vertices - m.vertices).max() < 1e-15


def test_attach_moves_anchor_to_target():
    m = _cuboid()
    anchor = Frame.identity()
    target = Frame(np.array([1.0, 2.0, 3.0]), np.array([0.0, 1.0, 0.0]),
                   np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    out = attach(m, anchor, target)
    # the anchor origin maps exactly onto the target origin
    centroid_before = m.vertices.mean(axis=0)
    assert np.allclose(centroid_before, 0, atol=1e-12)
    assert np.allclose(out.vertices.mean(axis=0), target.origin, atol=1e-12)


def test_attach_to_curve_start():
    path = straight_path((0.1, 0.2, 0.5), (0.1, 0.2, 0.0), init_normal=(1, 0, 0))
    target = path.frame_at(0.0)
    m = _cuboid()
    out = attach(m, Frame.identity(), target)
    assert np.allclose(out.vertices.mean(axis=0), (0.1, 0.2, 0.5), atol=1e-12)


def test_attach_fit_width():
    m = _cuboid(w=0.4, d=0.1, h=0.1)
    f = Frame.identity()  # tangent +x is the width axis
    fit = 0.77
    out = attach(m, f, f, fit_width=fit)
    lo, hi = out.bounds()
    assert hi[0] - lo[0] == pytest.approx(fit, abs=1e-9)
    # other axes untouched
    assert hi[1] - lo[1] == pytest.approx(0.1, abs=1e-12)


def test_attach_fit_zero_width_rejected():
    m = LabeledMesh.create([(0, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)], ["a"])
    with pytest.raises(GeometryError):
        attach(m, Frame.identity(), Frame.identity(), fit_width=1.0)


def test_rigid_transforms_preserve_distances():
    m = _cuboid()
    target = Frame(np.array([0.3, -0.2, 1.0]), *(np.linalg.qr(
        np.random.default_rng(5).normal(size=(3, 3)))[0].T))
    t, n = target.tangent, target.normal
    bn = np.cross(t, n)
    target = Frame(target.origin, t, n, bn)
    out = attach(m, Frame.identity(), target)
    rng = np.random.default_rng(0)
    idx = rng.integers(0, len(m.vertices), size=(50, 2))
    before = np.linalg.norm(m.vertices[idx[:, 0]] - m.vertices[idx[:, 1]], axis=1)
    after = np.linalg.norm(out.vertices[idx[:, 0]] - out.vertices[idx[:, 1]], axis=1)
    assert np.abs(before - after).max() < 1e-9


def test_validate_catches_zero_area_face():
    bad = LabeledMesh.create([(0, 0, 0), (1, 0, 0), (2, 0, 0)], [(0, 1, 2)], ["a"])
    with pytest.raises(GeometryError):
        bad.validate()


def test_validate_catches_index_out_of_range():
    bad = LabeledMesh.create([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 3)], ["a"])
    with pytest.raises(GeometryError):
        bad.validate()


def test_submesh_compacts_vertices():
    a = _cuboid(part="a")
    b = translate(_cuboid(part="b"), (1, 0, 0))
    m = join([a, b])
    sub = m.submesh(m.part_faces("b"))
    assert len(sub.faces) == len(b.faces)
    assert is_closed(sub)
