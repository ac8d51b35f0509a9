"""Registry of shipped shape programs."""

from __future__ import annotations

from ..errors import UnknownProgramError
from ..graph import ProgramGraph
from ..params import ParameterSchema, ParameterVector, canonicalize, make_vector
from .chair import CHAIR_DEFAULTS, CHAIR_PARTS, build_chair, chair_schema
from .vase import VASE_DEFAULTS, VASE_PARTS, build_vase, vase_schema

_BUILDERS = {"chair": build_chair, "vase": build_vase}
_SCHEMAS = {"chair": chair_schema, "vase": vase_schema}
_DEFAULTS = {"chair": CHAIR_DEFAULTS, "vase": VASE_DEFAULTS}

PROGRAM_PARTS = {"chair": CHAIR_PARTS, "vase": VASE_PARTS}

_graph_cache: dict[str, ProgramGraph] = {}
_schema_cache: dict[str, ParameterSchema] = {}


def program_ids() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def _check(program_id: str):
    if program_id not in _BUILDERS:
        raise UnknownProgramError(f"unknown program {program_id!r}; "
                                  f"available: {', '.join(program_ids())}")


def get_schema(program_id: str) -> ParameterSchema:
    _check(program_id)
    if program_id not in _schema_cache:
        _schema_cache[program_id] = _SCHEMAS[program_id]()
    return _schema_cache[program_id]


def get_graph(program_id: str) -> ProgramGraph:
    _check(program_id)
    if program_id not in _graph_cache:
        _graph_cache[program_id] = _BUILDERS[program_id]()
    return _graph_cache[program_id]


def default_params(program_id: str) -> ParameterVector:
    """Documented default vector of a program, in canonical form."""
    _check(program_id)
    schema = get_schema(program_id)
    return canonicalize(make_vector(schema, dict(_DEFAULTS[program_id])), schema)


__all__ = ["program_ids", "get_schema", "get_graph", "default_params",
           "PROGRAM_PARTS", "build_chair", "build_vase", "chair_schema",
           "vase_schema", "CHAIR_PARTS", "VASE_PARTS"]
