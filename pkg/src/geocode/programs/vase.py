"""Vase program: profiled body on a base pad, with rotationally replicated handles.

The body is a roundness-blended profile swept up a vertical path; its
cross-section radius runs smoothly from the base radius through the belly
radius (at the belly position) to the neck radius. Handles are tubes whose
endpoints sit on the body surface, so edits to the radii carry the handles
along and keep them connected.
"""

from __future__ import annotations

from ..graph import GraphBuilder, ProgramGraph
from ..params import (CONTINUOUS, DISCRETE, ParameterSchema, ParameterSpec,
                      VisibilityRule)
from .chair import _straight


def vase_schema() -> ParameterSchema:
    specs = [
        ParameterSpec("body_height", CONTINUOUS, min=0.25, max=0.61, granularity=5, part="body"),
        ParameterSpec("base_radius", CONTINUOUS, min=0.04, max=0.115, granularity=4, part="body"),
        ParameterSpec("belly_radius", CONTINUOUS, min=0.09, max=0.21, granularity=5, part="body"),
        ParameterSpec("neck_radius", CONTINUOUS, min=0.03, max=0.12, granularity=4, part="body"),
        ParameterSpec("belly_position", CONTINUOUS, min=0.25, max=0.70, granularity=4, part="body"),
        ParameterSpec("body_roundness", CONTINUOUS, min=0.0, max=1.0, granularity=5, part="body"),
        ParameterSpec("handle_count", DISCRETE, lo=0, hi=4, part="handle"),
        ParameterSpec("handle_attach_low", CONTINUOUS, min=0.10, max=0.45, granularity=3,
                      can_be_invisible=True, part="handle"),
        ParameterSpec("handle_attach_high", CONTINUOUS, min=0.55, max=0.90, granularity=3,
                      can_be_invisible=True, part="handle"),
        ParameterSpec("handle_thickness", CONTINUOUS, min=0.008, max=0.02, granularity=3,
                      can_be_invisible=True, part="handle"),
        ParameterSpec("base_thickness", CONTINUOUS, min=0.012, max=0.036, granularity=3, part="base"),
    ]
    rules = [
        VisibilityRule("handle_count", 0,
                       ("handle_attach_low", "handle_attach_high", "handle_thickness")),
    ]
    return ParameterSchema(specs, rules)


VASE_PARTS = ("body", "base", "handle")

VASE_DEFAULTS = {
    "body_height": 0.43,
    "base_radius": 0.065,
    "belly_radius": 0.15,
    "neck_radius": 0.06,
    "belly_position": 0.4,
    "body_roundness": 1.0,
    "handle_count": 0,
    "handle_attach_low": 0.275,
    "handle_attach_high": 0.725,
    "handle_thickness": 0.014,
    "base_thickness": 0.024,
}


def _smoothstep_expr(b: GraphBuilder, x: str) -> str:
    x = b.math("min", b.math("max", x, 0.0), 1.0)
    return b.math("mul", b.math("mul", x, x), b.math("sub", 3.0, b.math("mul", x, 2.0)))


def build_vase() -> ProgramGraph:
    schema = vase_schema()
    b = GraphBuilder(schema)

    height = b.param("body_height")
    base_r = b.param("base_radius")
    belly_r = b.param("belly_radius")
    neck_r = b.param("neck_radius")
    belly_pos = b.param("belly_position")
    roundness = b.param("body_roundness")
    handle_n = b.param("handle_count")
    attach_lo = b.param("handle_attach_low")
    attach_hi = b.param("handle_attach_high")
    handle_th = b.param("handle_thickness")
    base_th = b.param("base_thickness")

    profile = b.profile(roundness, 1.0, 1.0)

    # base pad, slightly wider than the body foot
    base_path = b.curve(_straight(b, b.vec(0.0, 0.0, 0.0), b.vec(0.0, 0.0, base_th)),
                        init_normal=(1.0, 0.0, 0.0))
    base = b.sweep(profile, base_path, ("constant", b.math("mul", base_r, 1.06)), part="base")

    # body rises out of the base pad; its radius profile peaks at the belly
    body_z0 = b.math("mul", base_th, 0.25)
    body_path = b.curve(_straight(b, b.vec(0.0, 0.0, body_z0), b.vec(0.0, 0.0, height)),
                        init_normal=(1.0, 0.0, 0.0))
    span = b.math("sub", height, body_z0)
    belly_t = b.math("div", b.math("sub", b.math("mul", belly_pos, height), body_z0), span)
    body = b.sweep(profile, body_path, ("peak", base_r, belly_r, neck_r, belly_t), part="body")

    # body radius at a path fraction, mirroring the sweep's peak scale
    pos_c = b.math("min", b.math("max", belly_t, 0.05), 0.95)

    def radius_at(t: str) -> str:
        rising = b.math("add", base_r, b.math(
            "mul", b.math("sub", belly_r, base_r),
            _smoothstep_expr(b, b.math("div", t, pos_c))))
        falling = b.math("add", belly_r, b.math(
            "mul", b.math("sub", neck_r, belly_r),
            _smoothstep_expr(b, b.math("div", b.math("sub", t, pos_c),
                                       b.math("sub", 1.0, pos_c)))))
        return b.math("where", rising, falling, c=b.math("lt", t, pos_c))

    r_lo, r_hi = radius_at(attach_lo), radius_at(attach_hi)
    z_lo = b.math("add", body_z0, b.math("mul", span, attach_lo))
    z_hi = b.math("add", body_z0, b.math("mul", span, attach_hi))
    dz = b.math("sub", z_hi, z_lo)
    reach = b.math("add", b.math("mul", dz, 0.3), 0.015)

    handle_pts = [
        b.vec(b.math("mul", r_lo, 0.97), 0.0, z_lo),
        b.vec(b.math("add", r_lo, reach), 0.0, b.math("add", z_lo, b.math("mul", dz, 0.15))),
        b.vec(b.math("add", r_hi, reach), 0.0, b.math("sub", z_hi, b.math("mul", dz, 0.15))),
        b.vec(b.math("mul", r_hi, 0.97), 0.0, z_hi),
    ]
    handle_path = b.curve(handle_pts, init_normal=(0.0, 1.0, 0.0))
    handle = b.sweep(b.profile(0.7, handle_th, handle_th), handle_path,
                     ("constant", 1.0), part="handle")
    handles = b.switch(b.replicate_z(handle, handle_n), b.math("ge", handle_n, 1.0))

    b.output(b.join(base, body, handles))
    return b.build()
