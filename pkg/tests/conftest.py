import json

import pytest

from geocode.dataset import generate
from geocode.params import (CONTINUOUS, DISCRETE, BOOLEAN, ParameterSchema,
                            ParameterSpec, VisibilityRule, load_recipe)
from geocode.programs import get_schema


@pytest.fixture(scope="session")
def toy_schema():
    """Two-parameter schema: a 3-class discrete and a boolean."""
    return ParameterSchema([
        ParameterSpec("level", DISCRETE, lo=0, hi=2, part="body"),
        ParameterSpec("flag", BOOLEAN, part="body"),
    ])


@pytest.fixture(scope="session")
def gated_schema():
    """Controller/dependent schema for visibility tests."""
    return ParameterSchema(
        [
            ParameterSpec("count", DISCRETE, lo=0, hi=3, part="extra"),
            ParameterSpec("size", CONTINUOUS, min=0.2, max=0.8, granularity=4,
                          can_be_invisible=True, part="extra"),
            ParameterSpec("width", CONTINUOUS, min=0.0, max=1.0, granularity=5, part="body"),
        ],
        [VisibilityRule("count", 0, ("size",))],
    )


def tiny_vase_recipe_doc() -> str:
    continuous = ["body_height", "base_radius", "belly_radius", "neck_radius",
                  "belly_position", "body_roundness", "handle_attach_low",
                  "handle_attach_high", "handle_thickness", "base_thickness"]
    return json.dumps({
        "program": "vase", "seed": 11, "samples_per_value": 1,
        "params": {n: {"granularity": 2} for n in continuous},
    })


@pytest.fixture(scope="session")
def tiny_vase_dataset(tmp_path_factory):
    """Small generated vase dataset shared by fit/cli/service tests."""
    out = tmp_path_factory.mktemp("vase_data")
    recipe = load_recipe(tiny_vase_recipe_doc(), get_schema("vase"))
    manifest = generate(recipe, out)
    return out, manifest
