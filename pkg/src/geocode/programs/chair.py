"""Chair program: seat, legs (or swivel base), backrest frame, rails, armrests.

Construction order: the seat is swept from its roundness-blended profile,
attachment corners are read off that profile boundary, legs and backrest
posts rise from the shrunk corners, the left half (legs, post, armrest) is
mirrored across the sagittal plane x=0, and the top/cross rails are attached
to post samples with a width fit spanning both sides.

The seat profile is the single propagation source for widths: raising
roundness pulls the profile corners inward, which moves the legs, posts,
rails, and armrests inward with it while the seat's own silhouette keeps its
extents, so the chair narrows but never widens.
"""

from __future__ import annotations

import math

from ..graph import GraphBuilder, ProgramGraph
from ..params import (BOOLEAN, CONTINUOUS, DISCRETE, ParameterSchema,
                      ParameterSpec, VisibilityRule)

# How far attachment corners are pulled in from the profile boundary so legs
# and posts stay under the seat at every roundness.
CORNER_SHRINK = 0.92

# Rail bow: control-point offset per unit backrest curvature (meters);
# the apex of the bow is 0.75x this. Sized so bowed rails still overlap the
# vertical rails and posts at every parameter combination.
RAIL_BOW = 0.0467

# Slant-curve blend coefficients at one third and two thirds of the rise
# (the backrest lean curve has y(u) = y0 + d * (1.2*(1-u)*u^2 + u^3)).
_C13 = 1.2 * (2.0 / 3.0) * (1.0 / 9.0) + 1.0 / 27.0
_C23 = 1.2 * (1.0 / 3.0) * (4.0 / 9.0) + 8.0 / 27.0


def chair_schema() -> ParameterSchema:
    specs = [
        ParameterSpec("seat_width", CONTINUOUS, min=0.38, max=0.62, granularity=5, part="seat"),
        ParameterSpec("seat_depth", CONTINUOUS, min=0.38, max=0.60, granularity=5, part="seat"),
        ParameterSpec("seat_thickness", CONTINUOUS, min=0.025, max=0.07, granularity=4, part="seat"),
        ParameterSpec("seat_height", CONTINUOUS, min=0.35, max=0.55, granularity=5, part="seat"),
        ParameterSpec("seat_roundness", CONTINUOUS, min=0.0, max=1.0, granularity=5, part="seat"),
        ParameterSpec("leg_thickness", CONTINUOUS, min=0.024, max=0.06, granularity=4,
                      can_be_invisible=True, part="leg"),
        ParameterSpec("leg_bottom_scale", CONTINUOUS, min=0.7, max=1.5, granularity=5,
                      can_be_invisible=True, part="leg"),
        ParameterSpec("frame_width", CONTINUOUS, min=0.02, max=0.044, granularity=4, part="frame"),
        ParameterSpec("frame_height", CONTINUOUS, min=0.28, max=0.50, granularity=5, part="frame"),
        ParameterSpec("backrest_slant", CONTINUOUS, min=0.0, max=0.3, granularity=4, part="frame"),
        ParameterSpec("backrest_curvature", CONTINUOUS, min=0.0, max=1.0, granularity=4, part="frame"),
        ParameterSpec("top_rail_thickness", CONTINUOUS, min=0.024, max=0.06, granularity=4,
                      part="top_rail"),
        ParameterSpec("cross_rail_count", DISCRETE, lo=0, hi=4, part="cross_rail"),
        ParameterSpec("vertical_rail_count", DISCRETE, lo=0, hi=6, part="vertical_rail"),
        ParameterSpec("armrests_exist", BOOLEAN, part="armrest"),
        ParameterSpec("armrest_height", CONTINUOUS, min=0.25, max=0.64, granularity=4,
                      can_be_invisible=True, part="armrest"),
        ParameterSpec("armrest_thickness", CONTINUOUS, min=0.02, max=0.044, granularity=3,
                      can_be_invisible=True, part="armrest"),
        ParameterSpec("is_swivel", BOOLEAN, part="leg"),
    ]
    rules = [
        VisibilityRule("armrests_exist", False, ("armrest_height", "armrest_thickness")),
        VisibilityRule("is_swivel", True, ("leg_thickness", "leg_bottom_scale")),
    ]
    return ParameterSchema(specs, rules)


CHAIR_PARTS = ("seat", "leg", "frame", "top_rail", "cross_rail", "vertical_rail", "armrest")

CHAIR_DEFAULTS = {
    "seat_width": 0.50,
    "seat_depth": 0.49,
    "seat_thickness": 0.04,
    "seat_height": 0.45,
    "seat_roundness": 0.25,
    "leg_thickness": 0.036,
    "leg_bottom_scale": 1.1,
    "frame_width": 0.028,
    "frame_height": 0.39,
    "backrest_slant": 0.1,
    "backrest_curvature": 1.0 / 3.0,
    "top_rail_thickness": 0.036,
    "cross_rail_count": 2,
    "vertical_rail_count": 3,
    "armrests_exist": True,
    "armrest_height": 0.38,
    "armrest_thickness": 0.032,
    "is_swivel": False,
}


def _straight(b: GraphBuilder, p0: str, p3: str) -> list[str]:
    """Control points of a straight cubic segment between two endpoint vectors."""
    delta = b.vadd(p3, b.vscale(p0, -1.0))
    return [p0, b.vadd(p0, b.vscale(delta, 1.0 / 3.0)),
            b.vadd(p0, b.vscale(delta, 2.0 / 3.0)), p3]


def build_chair() -> ProgramGraph:
    schema = chair_schema()
    b = GraphBuilder(schema)

    seat_w = b.param("seat_width")
    seat_d = b.param("seat_depth")
    seat_th = b.param("seat_thickness")
    seat_h = b.param("seat_height")
    roundness = b.param("seat_roundness")
    leg_th = b.param("leg_thickness")
    leg_bs = b.param("leg_bottom_scale")
    frame_w = b.param("frame_width")
    frame_h = b.param("frame_height")
    slant = b.param("backrest_slant")
    curvature = b.param("backrest_curvature")
    top_th = b.param("top_rail_thickness")
    n_cross = b.param("cross_rail_count")
    n_vert = b.param("vertical_rail_count")
    arms_on = b.param("armrests_exist")
    arm_h = b.param("armrest_height")
    arm_th = b.param("armrest_thickness")
    is_swivel = b.param("is_swivel")

    half_w = b.math("mul", seat_w, 0.5)
    half_d = b.math("mul", seat_d, 0.5)
    seat_bot = b.math("sub", seat_h, seat_th)

    # seat: horizontal profile extruded through its own thickness
    seat_profile = b.profile(roundness, half_w, half_d)
    seat_path = b.curve(_straight(b, b.vec(0.0, 0.0, seat_bot), b.vec(0.0, 0.0, seat_h)),
                        init_normal=(1.0, 0.0, 0.0))
    seat = b.sweep(seat_profile, seat_path, ("constant", 1.0), part="seat")

    # attachment corners on the seat profile boundary (left side, x < 0)
    theta_c = b.math("atan2", half_d, half_w)
    t_front = b.math("div", b.math("add", math.pi, theta_c), 2.0 * math.pi)
    t_back = b.math("div", b.math("sub", math.pi, theta_c), 2.0 * math.pi)
    corner_front = b.vscale(b.vop("profile_point", {"profile": seat_profile, "t": t_front}),
                            CORNER_SHRINK)
    corner_back = b.vscale(b.vop("profile_point", {"profile": seat_profile, "t": t_back}),
                           CORNER_SHRINK)
    cfx, cfy = b.component(corner_front, 0), b.component(corner_front, 1)
    cbx, cby = b.component(corner_back, 0), b.component(corner_back, 1)

    # straight legs from under the seat to the ground, thicker at the bottom
    leg_top_z = b.math("sub", seat_h, b.math("mul", seat_th, 0.75))
    leg_half = b.math("mul", leg_th, 0.5)
    leg_profile = b.profile(0.2, leg_half, leg_half)
    leg_front = b.sweep(leg_profile,
                        b.curve(_straight(b, b.vec(cfx, cfy, leg_top_z), b.vec(cfx, cfy, 0.0)),
                                init_normal=(1.0, 0.0, 0.0)),
                        ("linear", 1.0, leg_bs), part="leg")
    leg_back = b.sweep(leg_profile,
                       b.curve(_straight(b, b.vec(cbx, cby, leg_top_z), b.vec(cbx, cby, 0.0)),
                               init_normal=(1.0, 0.0, 0.0)),
                       ("linear", 1.0, leg_bs), part="leg")
    straight_legs = b.switch(b.join(leg_front, leg_back), b.math("not", is_swivel))

    # swivel base: central column plus five arms, one pointing straight back
    # so the replicated set stays mirror-symmetric
    column = b.sweep(b.profile(1.0, 0.027, 0.027),
                     b.curve(_straight(b, b.vec(0.0, 0.0, leg_top_z), b.vec(0.0, 0.0, 0.06)),
                             init_normal=(1.0, 0.0, 0.0)),
                     ("constant", 1.0), part="leg")
    base_r = b.math("mul", b.math("min", seat_w, seat_d), 0.45)
    arm_pts = [b.vec(0.0, 0.0, 0.075),
               b.vec(0.0, b.math("mul", base_r, 0.35), 0.055),
               b.vec(0.0, b.math("mul", base_r, 0.8), 0.028),
               b.vec(0.0, base_r, 0.016)]
    base_arm = b.sweep(b.profile(0.6, 0.016, 0.016),
                       b.curve(arm_pts, init_normal=(1.0, 0.0, 0.0)),
                       ("constant", 1.0), part="leg")
    swivel_base = b.switch(b.join(column, b.replicate_z(base_arm, 5.0)), is_swivel)

    # backrest post rising from the back corner, leaning back with the slant
    post_z0 = b.math("sub", seat_h, b.math("mul", seat_th, 0.5))
    lean = b.math("mul", slant, frame_h)
    post_pts = [
        b.vec(cbx, cby, post_z0),
        b.vec(cbx, cby, b.math("add", post_z0, b.math("mul", frame_h, 1.0 / 3.0))),
        b.vec(cbx, b.math("add", cby, b.math("mul", lean, 0.4)),
              b.math("add", post_z0, b.math("mul", frame_h, 2.0 / 3.0))),
        b.vec(cbx, b.math("add", cby, lean), b.math("add", post_z0, frame_h)),
    ]
    post_path = b.curve(post_pts, init_normal=(0.0, 1.0, 0.0))
    frame_half = b.math("mul", frame_w, 0.5)
    post = b.sweep(b.profile(0.25, frame_half, frame_half), post_path,
                   ("constant", 1.0), part="frame")

    # armrest: horizontal bar from the post toward the seat front
    arm_anchor = b.sample(post_path, arm_h)
    arm_p0 = b.vop("frame_origin", {"f": arm_anchor})
    arm_p3 = b.vadd(arm_p0, b.vec(0.0, b.math("neg", b.math("mul", seat_d, 0.8)), 0.0))
    arm_path = b.curve(_straight(b, arm_p0, arm_p3), init_normal=(0.0, 0.0, 1.0))
    armrest = b.sweep(b.profile(0.5, b.math("mul", arm_th, 0.5), b.math("mul", arm_th, 0.65)),
                      arm_path, ("constant", 1.0), part="armrest")
    armrest_sw = b.switch(armrest, arms_on)

    left_side = b.join(straight_legs, post, armrest_sw)
    both_sides = b.mirror_x(left_side)

    # rails: a bowed element built around the origin, then width-fitted
    # between the mirrored post samples
    anchor_path = b.curve(_straight(b, b.vec(-1.0, 0.0, 0.0), b.vec(1.0, 0.0, 0.0)),
                          init_normal=(0.0, 0.0, 1.0))
    rail_anchor = b.sample(anchor_path, 0.5)
    post_x = b.math("abs", cbx)
    fit_w = b.math("mul", post_x, 2.0)
    bow = b.math("mul", curvature, RAIL_BOW)

    def rail_element(half_th: str, part: str) -> str:
        pts = [b.vec(-0.5, 0.0, 0.0), b.vec(-1.0 / 6.0, bow, 0.0),
               b.vec(1.0 / 6.0, bow, 0.0), b.vec(0.5, 0.0, 0.0)]
        path = b.curve(pts, init_normal=(0.0, 0.0, 1.0))
        return b.sweep(b.profile(0.4, half_th, half_th), path, ("constant", 1.0), part=part)

    s_top = b.sample(post_path, 1.0)
    span_top = b.vop("span_frame_x", {"f": s_top})
    top_rail = b.attach(rail_element(b.math("mul", top_th, 0.5), "top_rail"),
                        rail_anchor, span_top, fit_width=fit_w)

    cross_element = rail_element(b.math("mul", top_th, 0.35), "cross_rail")
    cross_div = b.math("add", n_cross, 1.0)
    cross_rails = []
    for j in range(1, 5):
        t_j = b.math("min", b.math("div", float(j), cross_div), 1.0)
        span_j = b.vop("span_frame_x", {"f": b.sample(post_path, t_j)})
        rail = b.attach(cross_element, rail_anchor, span_j, fit_width=fit_w)
        cross_rails.append(b.switch(rail, b.math("ge", n_cross, float(j))))

    # vertical rails follow the slant curve from the seat up into the top rail
    v_half = b.math("mul", top_th, 0.275)
    v_profile = b.profile(0.3, v_half, v_half)
    top_origin = b.vop("frame_origin", {"f": span_top})
    top_binormal = b.vop("frame_binormal", {"f": span_top})
    vrail_z0 = b.math("sub", seat_h, b.math("mul", seat_th, 0.3))
    vert_div = b.math("add", n_vert, 1.0)
    vert_rails = []
    for j in range(1, 7):
        frac = b.math("sub", b.math("div", 2.0 * j, vert_div), 1.0)
        x_j = b.math("mul", post_x, frac)
        q = b.math("div", x_j, fit_w)
        bulge = b.math("mul", b.math("mul", b.math("sub", 0.25, b.math("mul", q, q)), 3.0), bow)
        p3 = b.vadd(b.vadd(top_origin, b.vec(x_j, 0.0, 0.0)),
                    b.vscale(top_binormal, b.math("neg", bulge)))
        p0 = b.vec(x_j, cby, vrail_z0)
        rise = b.math("sub", b.component(p3, 2), vrail_z0)
        p1 = b.vec(x_j, b.math("add", cby, b.math("mul", lean, _C13)),
                   b.math("add", vrail_z0, b.math("mul", rise, 1.0 / 3.0)))
        p2 = b.vec(x_j, b.math("add", cby, b.math("mul", lean, _C23)),
                   b.math("add", vrail_z0, b.math("mul", rise, 2.0 / 3.0)))
        v_path = b.curve([p0, p1, p2, p3], init_normal=(0.0, 1.0, 0.0))
        vrail = b.sweep(v_profile, v_path, ("constant", 1.0), part="vertical_rail")
        vert_rails.append(b.switch(vrail, b.math("ge", n_vert, float(j))))

    b.output(b.join(seat, both_sides, swivel_base, top_rail, *cross_rails, *vert_rails))
    return b.build()
