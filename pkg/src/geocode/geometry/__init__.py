"""Curve and mesh primitives for procedural shape construction."""

from .curves import (Frame, GeometryError, PathCurve, ProfileCurve,
                     sample_curve, straight_path)
from .mesh import (LabeledMesh, attach, face_areas, is_closed, join, mirror,
                   retag, rotation_about_axis, rotational_replicate,
                   signed_volume, transform, translate, volume_centroid)
from .objio import export_obj, load_obj
from .sweep import sweep

__all__ = [
    "Frame", "GeometryError", "PathCurve", "ProfileCurve", "sample_curve",
    "straight_path", "LabeledMesh", "attach", "face_areas", "is_closed",
    "join", "mirror", "retag", "rotation_about_axis", "rotational_replicate",
    "signed_volume", "transform", "translate", "volume_centroid",
    "export_obj", "load_obj", "sweep",
]
