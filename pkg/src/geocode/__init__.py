"""Procedural shape programs with interpretable parameter spaces."""

__version__ = "0.1.0"

from .geometry import (Frame, LabeledMesh, PathCurve, ProfileCurve, export_obj,
                       load_obj, sweep)
from .graph import evaluate, graph_from_json, graph_to_json, topo_order, validate
from .params import (INVISIBLE, ParameterSchema, ParameterSpec, ParameterVector,
                     Recipe, VisibilityRule, canonicalize, decode_onehot,
                     denormalize, encode_onehot, enumerate_sweep, interpolate,
                     load_recipe, make_vector, mix, normalize, vector_from_map,
                     vector_to_map)
from .programs import default_params, get_graph, get_schema, program_ids

__all__ = [
    "__version__", "Frame", "LabeledMesh", "PathCurve", "ProfileCurve",
    "export_obj", "load_obj", "sweep", "evaluate", "graph_from_json",
    "graph_to_json", "topo_order", "validate", "INVISIBLE", "ParameterSchema",
    "ParameterSpec", "ParameterVector", "Recipe", "VisibilityRule",
    "canonicalize", "decode_onehot", "denormalize", "encode_onehot",
    "enumerate_sweep", "interpolate", "load_recipe", "make_vector", "mix",
    "normalize", "vector_from_map", "vector_to_map", "default_params",
    "get_graph", "get_schema", "program_ids",
]
