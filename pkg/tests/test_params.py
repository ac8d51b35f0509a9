import json
import math

import numpy as np
import pytest

from geocode.params import (BOOLEAN, CONTINUOUS, DISCRETE, INVISIBLE,
                            LabelEncoding, ParamError, ParameterSchema,
                            ParameterSpec, ParameterVector, Recipe,
                            VisibilityRule, canonical_key, canonicalize,
                            decode_onehot, denormalize, effective_grid,
                            encode_onehot, enumerate_sweep, grid_values,
                            interpolate, load_recipe, make_vector, mix,
                            normalize, normalized_vector_from_map,
                            vector_from_map, vector_to_map)
from geocode.programs import get_schema


# ---------------------------------------------------------------------------
# schema and vector validation

def test_spec_class_counts():
    c = ParameterSpec("a", CONTINUOUS, min=0.0, max=1.0, granularity=7)
    d = ParameterSpec("b", DISCRETE, lo=2, hi=6)
    bl = ParameterSpec("c", BOOLEAN)
    inv = ParameterSpec("d", CONTINUOUS, min=0.0, max=1.0, granularity=4,
                        can_be_invisible=True)
    assert c.classes == 7
    assert d.classes == 5
    assert bl.classes == 2
    assert inv.classes == 5  # 4 value classes plus the existence class


def test_schema_rejects_duplicate_names():
    with pytest.raises(ParamError):
        ParameterSchema([ParameterSpec("x", BOOLEAN), ParameterSpec("x", BOOLEAN)])


def test_schema_rejects_self_dependent_rule():
    with pytest.raises(ParamError):
        ParameterSchema([ParameterSpec("x", BOOLEAN, can_be_invisible=True)],
                        [VisibilityRule("x", False, ("x",))])


def test_schema_rejects_rule_cycle():
    specs = [ParameterSpec("a", BOOLEAN, can_be_invisible=True),
             ParameterSpec("b", BOOLEAN, can_be_invisible=True)]
    with pytest.raises(ParamError):
        ParameterSchema(specs, [VisibilityRule("a", False, ("b",)),
                                VisibilityRule("b", False, ("a",))])


def test_vector_range_validation(gated_schema):
    with pytest.raises(ParamError):
        make_vector(gated_schema, {"count": 5, "size": 0.4, "width": 0.5})
    with pytest.raises(ParamError):
        make_vector(gated_schema, {"count": 1, "size": 0.9, "width": 0.5})
    v = make_vector(gated_schema, {"count": 1, "size": 0.4, "width": 0.5})
    assert v.values == (1, 0.4, 0.5)


def test_label_only_on_invisible_capable(gated_schema):
    v = make_vector(gated_schema, {"count": 0, "size": -1.0, "width": 0.5})
    assert v.values[1] is INVISIBLE
    with pytest.raises(ParamError):
        make_vector(gated_schema, {"count": 0, "size": 0.4, "width": -1.0})


# ---------------------------------------------------------------------------
# normalization

def test_normalize_continuous_midpoint():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.2, max=0.8, granularity=4)])
    v = make_vector(s, {"x": 0.5})
    assert normalize(v, s).values[0] == pytest.approx(0.5, abs=1e-15)


def test_normalize_discrete_starts_at_zero():
    s = ParameterSchema([ParameterSpec("n", DISCRETE, lo=2, hi=6)])
    assert normalize(make_vector(s, {"n": 4}), s).values[0] == 2.0


def test_normalize_invisible_becomes_minus_one():
    schema = get_schema("chair")
    mapping = {sp.name: _default_raw(sp) for sp in schema}
    mapping["armrests_exist"] = False
    v = canonicalize(make_vector(schema, mapping), schema)
    n = normalize(v, schema)
    assert n.values[schema.index("armrest_height")] == -1.0


def test_normalize_out_of_range_rejected():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=3)])
    with pytest.raises(ParamError):
        normalize(ParameterVector((2.0,)), s)


def test_denormalize_endpoint():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.2, max=0.8, granularity=4)])
    assert denormalize(ParameterVector((0.0,)), s).values[0] == 0.2
    assert denormalize(ParameterVector((1.0,)), s).values[0] == 0.8


def test_denormalize_label_preserved(gated_schema):
    v = denormalize(ParameterVector((1.0, -1.0, 0.25)), gated_schema)
    assert v.values[1] is INVISIBLE


def test_denormalize_rejects_bad_values(gated_schema):
    with pytest.raises(ParamError):
        denormalize(ParameterVector((1.5, 0.0, 0.25)), gated_schema)  # non-integer discrete
    with pytest.raises(ParamError):
        denormalize(ParameterVector((1.0, 0.0, 1.25)), gated_schema)  # out of [0,1]


def _default_raw(spec):
    if spec.kind == CONTINUOUS:
        return 0.5 * (spec.min + spec.max)
    if spec.kind == DISCRETE:
        return spec.lo
    return True


def _random_raw(spec, rng):
    if spec.kind == CONTINUOUS:
        return float(spec.min + (spec.max - spec.min) * rng.random())
    if spec.kind == DISCRETE:
        return int(rng.integers(spec.lo, spec.hi + 1))
    return bool(rng.integers(0, 2))


def test_normalize_denormalize_roundtrip_100_random():
    schema = get_schema("chair")
    rng = np.random.default_rng(42)
    for _ in range(100):
        v = make_vector(schema, {sp.name: _random_raw(sp, rng) for sp in schema})
        back = denormalize(normalize(v, schema), schema)
        for a, b, sp in zip(v.values, back.values, schema):
            if sp.kind == CONTINUOUS:
                assert abs(a - b) < 1e-12
            else:
                assert a == b


# ---------------------------------------------------------------------------
# canonicalization

def test_canonicalize_armrests_off():
    schema = get_schema("chair")
    mapping = {sp.name: _default_raw(sp) for sp in schema}
    mapping["armrests_exist"] = False
    v = canonicalize(make_vector(schema, mapping), schema)
    assert v.values[schema.index("armrest_height")] is INVISIBLE
    assert v.values[schema.index("armrest_thickness")] is INVISIBLE


def test_canonicalize_armrests_on_unchanged():
    schema = get_schema("chair")
    mapping = {sp.name: _default_raw(sp) for sp in schema}
    mapping["armrests_exist"] = True
    mapping["is_swivel"] = False
    v = make_vector(schema, mapping)
    assert canonicalize(v, schema) == v


def test_canonicalize_vase_handles_off():
    schema = get_schema("vase")
    mapping = {sp.name: _default_raw(sp) for sp in schema}
    mapping["handle_count"] = 0
    v = canonicalize(make_vector(schema, mapping), schema)
    for name in ("handle_attach_low", "handle_attach_high", "handle_thickness"):
        assert v.values[schema.index(name)] is INVISIBLE


def test_canonicalize_idempotent_random():
    schema = get_schema("chair")
    rng = np.random.default_rng(7)
    for _ in range(50):
        v = make_vector(schema, {sp.name: _random_raw(sp, rng) for sp in schema})
        c1 = canonicalize(v, schema)
        assert canonicalize(c1, schema) == c1


# ---------------------------------------------------------------------------
# one-hot encoding

def test_encode_discrete_block():
    s = ParameterSchema([ParameterSpec("n", DISCRETE, lo=0, hi=4)])
    e = encode_onehot(ParameterVector((2.0,)), s)
    assert e.blocks == ((0, 0, 1, 0, 0),)


def test_encode_continuous_grid_index():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=4)])
    e = encode_onehot(ParameterVector((1.0 / 3.0,)), s)
    assert e.blocks == ((0, 1, 0, 0),)


def test_encode_existence_class():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=4,
                                       can_be_invisible=True)])
    e = encode_onehot(ParameterVector((-1.0,)), s)
    assert e.blocks == ((0, 0, 0, 0, 1),)


def test_encode_off_grid_rejected():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=4)])
    with pytest.raises(ParamError):
        encode_onehot(ParameterVector((0.4,)), s)


def test_decode_inverse_onehot():
    s = ParameterSchema([ParameterSpec("n", DISCRETE, lo=0, hi=4)])
    v = decode_onehot(LabelEncoding(((0, 0, 1, 0, 0),)), s)
    assert v.values == (2.0,)


def test_decode_existence_class(gated_schema):
    spec = gated_schema.spec("size")
    block = [0] * spec.classes
    block[-1] = 1
    enc = LabelEncoding(((0, 1, 0, 0), tuple(block), (1, 0, 0, 0, 0)))
    v = decode_onehot(enc, gated_schema)
    assert v.values[1] == -1.0


def test_decode_rejects_non_onehot():
    s = ParameterSchema([ParameterSpec("n", DISCRETE, lo=0, hi=2)])
    with pytest.raises(ParamError):
        decode_onehot(LabelEncoding(((0, 0, 0),)), s)
    with pytest.raises(ParamError):
        decode_onehot(LabelEncoding(((1, 1, 0),)), s)


def test_roundtrip_exhaustive_toy(toy_schema):
    # all 6 combinations of the 3-class discrete and the boolean
    for level in (0, 1, 2):
        for flag in (False, True):
            v = make_vector(toy_schema, {"level": level, "flag": flag})
            n = normalize(canonicalize(v, toy_schema), toy_schema)
            assert decode_onehot(encode_onehot(n, toy_schema), toy_schema) == n


# ---------------------------------------------------------------------------
# interpolation

def _chair_vec(**overrides):
    schema = get_schema("chair")
    mapping = {sp.name: _default_raw(sp) for sp in schema}
    mapping.update(overrides)
    return canonicalize(make_vector(schema, mapping), schema), schema


def test_interpolate_endpoints_exact():
    a, schema = _chair_vec(seat_width=0.38)
    b, _ = _chair_vec(seat_width=0.62, cross_rail_count=4)
    assert interpolate(a, b, 0.0, schema) == a
    assert interpolate(a, b, 1.0, schema) == b


def test_interpolate_continuous_midpoint():
    s = ParameterSchema([ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=5)])
    a, b = ParameterVector((0.2,)), ParameterVector((0.6,))
    assert interpolate(a, b, 0.5, s).values[0] == pytest.approx(0.4, abs=1e-15)


def test_interpolate_discrete_round_half_even():
    s = ParameterSchema([ParameterSpec("n", DISCRETE, lo=0, hi=4)])
    a, b = ParameterVector((1,)), ParameterVector((4,))
    # blend at 0.5 is 2.5; round-half-to-even gives 2
    assert interpolate(a, b, 0.5, s).values[0] == 2
    # audited sweep of the rounding rule
    expected = {0.0: 1, 0.2: 2, 0.4: 2, 0.6: 3, 0.8: 3, 1.0: 4}
    for alpha, want in expected.items():
        assert interpolate(a, b, alpha, s).values[0] == want


def test_interpolate_boolean_switch():
    s = ParameterSchema([ParameterSpec("f", BOOLEAN)])
    a, b = ParameterVector((False,)), ParameterVector((True,))
    assert interpolate(a, b, 0.49, s).values[0] is False
    assert interpolate(a, b, 0.5, s).values[0] is True


def test_interpolate_label_switch(gated_schema):
    a = canonicalize(make_vector(gated_schema, {"count": 0, "size": 0.4, "width": 0.0}),
                     gated_schema)
    b = canonicalize(make_vector(gated_schema, {"count": 2, "size": 0.8, "width": 1.0}),
                     gated_schema)
    assert a.values[1] is INVISIBLE
    lo = interpolate(a, b, 0.25, gated_schema)
    hi = interpolate(a, b, 0.75, gated_schema)
    assert lo.values[1] is INVISIBLE  # count rounds to 0 or 1... recanonicalized
    assert hi.values[1] == 0.8


def test_interpolate_self_identity():
    a, schema = _chair_vec(armrests_exist=False)
    for alpha in (0.0, 0.3, 0.5, 0.7, 1.0):
        assert interpolate(a, a, alpha, schema) == a


def test_interpolate_alpha_out_of_range():
    a, schema = _chair_vec()
    with pytest.raises(ParamError):
        interpolate(a, a, 1.5, schema)


# ---------------------------------------------------------------------------
# mixing

def test_mix_empty_selection_is_source():
    a, schema = _chair_vec(seat_width=0.38)
    b, _ = _chair_vec(seat_width=0.62)
    assert mix(a, b, set(), schema) == a


def test_mix_full_selection_is_donor():
    a, schema = _chair_vec(seat_width=0.38)
    b, _ = _chair_vec(seat_width=0.62, cross_rail_count=3)
    assert mix(a, b, set(schema.names), schema) == b


def test_mix_handle_group_transfers():
    schema = get_schema("vase")
    base = {sp.name: _default_raw(sp) for sp in schema}
    source = canonicalize(make_vector(schema, dict(base, handle_count=0)), schema)
    donor = canonicalize(make_vector(schema, dict(base, handle_count=2,
                                                  handle_thickness=0.02)), schema)
    group = {"handle_count", "handle_attach_low", "handle_attach_high", "handle_thickness"}
    out = mix(source, donor, group, schema)
    assert out.values[schema.index("handle_count")] == 2
    assert out.values[schema.index("handle_thickness")] == 0.02


def test_mix_unclosed_selection_rejected():
    schema = get_schema("vase")
    base = {sp.name: _default_raw(sp) for sp in schema}
    v = canonicalize(make_vector(schema, base), schema)
    with pytest.raises(ParamError):
        mix(v, v, {"handle_thickness"}, schema)


def test_mix_disjoint_selections_commute():
    schema = get_schema("chair")
    rng = np.random.default_rng(12)
    for _ in range(10):
        src = canonicalize(make_vector(
            schema, {sp.name: _random_raw(sp, rng) for sp in schema}), schema)
        d1 = canonicalize(make_vector(
            schema, {sp.name: _random_raw(sp, rng) for sp in schema}), schema)
        d2 = canonicalize(make_vector(
            schema, {sp.name: _random_raw(sp, rng) for sp in schema}), schema)
        g1 = {"seat_width", "seat_depth"}
        g2 = {"armrests_exist", "armrest_height", "armrest_thickness"}
        one = mix(mix(src, d1, g1, schema), d2, g2, schema)
        two = mix(mix(src, d2, g2, schema), d1, g1, schema)
        assert one == two


# ---------------------------------------------------------------------------
# serialization

def test_vector_map_roundtrip():
    v, schema = _chair_vec(armrests_exist=False)
    mapping = vector_to_map(v, schema)
    assert mapping["armrest_height"] == -1.0
    assert vector_from_map(mapping, schema) == v


def test_normalized_map_roundtrip():
    v, schema = _chair_vec(armrests_exist=False)
    n = normalize(v, schema)
    mapping = vector_to_map(n, schema)
    assert normalized_vector_from_map(mapping, schema) == n


# ---------------------------------------------------------------------------
# recipes

def _gated_recipe(**kw):
    doc = {"program": "toy", "seed": 1, "samples_per_value": 1, "params": {}}
    doc.update(kw)
    return json.dumps(doc)


def test_load_recipe_granularity_override(gated_schema):
    doc = _gated_recipe(params={"width": {"granularity": 5}})
    r = load_recipe(doc, gated_schema)
    assert r.overrides["width"].granularity == 5


def test_load_recipe_unknown_parameter(gated_schema):
    doc = _gated_recipe(params={"seat_hight": {"granularity": 5}})
    with pytest.raises(ParamError):
        load_recipe(doc, gated_schema)


def test_load_recipe_min_above_max(gated_schema):
    doc = _gated_recipe(params={"width": {"min": 0.9, "max": 0.1}})
    with pytest.raises(ParamError):
        load_recipe(doc, gated_schema)


def test_load_recipe_unknown_keys_rejected(gated_schema):
    with pytest.raises(ParamError):
        load_recipe(_gated_recipe(extra=1), gated_schema)
    with pytest.raises(ParamError):
        load_recipe(_gated_recipe(params={"width": {"steps": 3}}), gated_schema)


def test_load_recipe_range_outside_spec(gated_schema):
    doc = _gated_recipe(params={"width": {"min": -0.5}})
    with pytest.raises(ParamError):
        load_recipe(doc, gated_schema)


def test_load_recipe_granularity_too_small(gated_schema):
    doc = _gated_recipe(params={"width": {"granularity": 1}})
    with pytest.raises(ParamError):
        load_recipe(doc, gated_schema)


# ---------------------------------------------------------------------------
# sweeps

def test_grid_values_normalized_form():
    s = ParameterSpec("x", CONTINUOUS, min=0.0, max=1.0, granularity=5)
    assert grid_values(s) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_sweep_dedups_invisible_duplicates(gated_schema):
    # two raw vectors differing only in a hidden entry canonicalize equal
    a = canonicalize(make_vector(gated_schema, {"count": 0, "size": 0.2, "width": 0.5}),
                     gated_schema)
    b = canonicalize(make_vector(gated_schema, {"count": 0, "size": 0.8, "width": 0.5}),
                     gated_schema)
    assert a == b
    assert canonical_key(a, gated_schema) == canonical_key(b, gated_schema)


def _replay_sweep(recipe, schema):
    """Independent reimplementation of the documented sweep contract."""
    grids = [effective_grid(sp, recipe) for sp in schema]
    seen, out = set(), []
    for pi in range(len(schema)):
        for gi in range(len(grids[pi])):
            for si in range(recipe.samples_per_value):
                rng = np.random.default_rng(
                    np.random.SeedSequence((recipe.seed, pi, gi, si)))
                vals = []
                for qi in range(len(schema)):
                    if qi == pi:
                        vals.append(grids[pi][gi])
                    else:
                        vals.append(grids[qi][int(rng.integers(0, len(grids[qi])))])
                vec = canonicalize(ParameterVector(tuple(vals)), schema)
                key = canonical_key(vec, schema)
                if key not in seen:
                    seen.add(key)
                    out.append(vec)
    return out


def test_sweep_toy_count_matches_replay(toy_schema):
    doc = json.dumps({"program": "toy", "seed": 3, "samples_per_value": 1, "params": {}})
    recipe = load_recipe(doc, toy_schema)
    got = list(enumerate_sweep(recipe, toy_schema))
    want = _replay_sweep(recipe, toy_schema)
    assert got == want
    # at most one vector per (parameter, value) pair: 3 + 2
    assert len(got) <= 5
    # and never more than the full cartesian product of the toy grids
    assert len({canonical_key(v, toy_schema) for v in got}) == len(got)


def test_sweep_no_duplicates_any_seed(gated_schema):
    for seed in (0, 1, 99):
        doc = json.dumps({"program": "toy", "seed": seed, "samples_per_value": 3,
                          "params": {}})
        recipe = load_recipe(doc, gated_schema)
        vecs = list(enumerate_sweep(recipe, gated_schema))
        keys = [canonical_key(v, gated_schema) for v in vecs]
        assert len(set(keys)) == len(keys)


def test_sweep_deterministic(gated_schema):
    doc = json.dumps({"program": "toy", "seed": 5, "samples_per_value": 2, "params": {}})
    recipe = load_recipe(doc, gated_schema)
    assert list(enumerate_sweep(recipe, gated_schema)) == \
        list(enumerate_sweep(recipe, gated_schema))
