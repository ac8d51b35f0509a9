"""Stateless JSON-over-HTTP service backing the editor UI.

All handlers operate on immutable shared program graphs (and an optional
read-only fit index), so identical request bodies produce byte-identical
responses across requests and server restarts.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response

from .errors import GeocodeError, UnknownProgramError
from .geometry import LabeledMesh, export_obj
from .geometry.curves import GeometryError
from .graph import NodeEvalError, evaluate
from .metrics import stability
from .params import ParamError, canonicalize, interpolate, mix, vector_from_map, vector_to_map
from .pointcloud import PCXYZ_MAGIC, PointCloud
from .programs import get_graph, get_schema, program_ids

import numpy as np

_STATUS = {"bad_request": 400, "invalid_params": 400, "unknown_program": 404,
           "not_found": 404, "eval_failed": 422}


class _HttpError(Exception):
    def __init__(self, code: str, message: str, status: int | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status or _STATUS[code]


def _json_response(payload, status: int = 200) -> Response:
    return Response(content=json.dumps(payload, sort_keys=True, separators=(",", ":")),
                    status_code=status, media_type="application/json")


def _error_response(e: _HttpError) -> Response:
    return _json_response({"code": e.code, "message": e.message}, status=e.status)


def _schema_for(program_id: str):
    try:
        return get_schema(program_id)
    except UnknownProgramError as err:
        raise _HttpError("unknown_program", str(err)) from None


def _require_keys(body: dict, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(body, dict):
        raise _HttpError("invalid_params", "request body must be a JSON object")
    unknown = set(body) - required - optional
    if unknown:
        raise _HttpError("invalid_params",
                         f"unexpected key(s) in request body: {', '.join(sorted(unknown))}")
    missing = required - set(body)
    if missing:
        raise _HttpError("invalid_params",
                         f"missing key(s) in request body: {', '.join(sorted(missing))}")


def _parse_params(program_id: str, mapping) -> tuple:
    schema = _schema_for(program_id)
    try:
        vec = canonicalize(vector_from_map(mapping, schema), schema)
    except ParamError as e:
        raise _HttpError("invalid_params", str(e)) from None
    return vec, schema


def _evaluate(program_id: str, vec) -> LabeledMesh:
    try:
        return evaluate(get_graph(program_id), vec)
    except (NodeEvalError, GeometryError) as e:
        raise _HttpError("eval_failed", str(e)) from None


def _mesh_payload(mesh: LabeledMesh) -> dict:
    return {"vertices": [float(x) for x in mesh.vertices.reshape(-1)],
            "faces": [int(x) for x in mesh.faces.reshape(-1)],
            "face_part": list(mesh.face_part)}


def _mesh_response(mesh: LabeledMesh, request: Request, extra: dict | None = None) -> Response:
    accept = request.headers.get("accept", "")
    if "text/plain" in accept:
        return Response(content=export_obj(mesh), media_type="text/plain")
    payload = {"mesh": _mesh_payload(mesh)}
    if extra:
        payload.update(extra)
    return _json_response(payload)


async def _read_json(request: Request) -> dict:
    try:
        return json.loads(await request.body())
    except json.JSONDecodeError as e:
        raise _HttpError("bad_request", f"request body is not valid JSON: {e}") from None


def create_app(dataset_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="geocode", docs_url=None, redoc_url=None)

    index = None
    if dataset_dir and (Path(dataset_dir) / "manifest.json").exists():
        from .fit import load_index

        index = load_index(dataset_dir)

    @app.exception_handler(_HttpError)
    async def _handle(request, exc: _HttpError):  # noqa: ARG001
        return _error_response(exc)

    @app.get("/programs")
    async def programs():
        return _json_response({"programs": list(program_ids())})

    @app.get("/programs/{program_id}/schema")
    async def schema(program_id: str):
        return _json_response(_schema_for(program_id).to_json())

    @app.post("/programs/{program_id}/evaluate")
    async def evaluate_endpoint(program_id: str, request: Request):
        body = await _read_json(request)
        _require_keys(body, {"params"})
        vec, _ = _parse_params(program_id, body["params"])
        return _mesh_response(_evaluate(program_id, vec), request)

    @app.post("/programs/{program_id}/interpolate")
    async def interpolate_endpoint(program_id: str, request: Request):
        body = await _read_json(request)
        _require_keys(body, {"a", "b", "alpha"})
        va, schema = _parse_params(program_id, body["a"])
        vb, _ = _parse_params(program_id, body["b"])
        try:
            alpha = float(body["alpha"])
            vec = interpolate(va, vb, alpha, schema)
        except (ParamError, TypeError, ValueError) as e:
            raise _HttpError("invalid_params", str(e)) from None
        mesh = _evaluate(program_id, vec)
        return _mesh_response(mesh, request, extra={"params": vector_to_map(vec, schema)})

    @app.post("/programs/{program_id}/mix")
    async def mix_endpoint(program_id: str, request: Request):
        body = await _read_json(request)
        _require_keys(body, {"source", "donor", "selection"})
        vs, schema = _parse_params(program_id, body["source"])
        vd, _ = _parse_params(program_id, body["donor"])
        selection = body["selection"]
        if (not isinstance(selection, list)
                or not all(isinstance(s, str) for s in selection)):
            raise _HttpError("invalid_params", "selection must be a list of parameter names")
        try:
            vec = mix(vs, vd, set(selection), schema)
        except ParamError as e:
            raise _HttpError("invalid_params", str(e)) from None
        mesh = _evaluate(program_id, vec)
        return _mesh_response(mesh, request, extra={"params": vector_to_map(vec, schema)})

    @app.post("/programs/{program_id}/fit")
    async def fit_endpoint(program_id: str, request: Request):
        from .fit import fit as run_fit

        schema = _schema_for(program_id)
        if index is None:
            return _json_response({"code": "bad_request",
                                   "message": "fit requires a dataset; start the "
                                              "service with one"}, status=503)
        if index.program != program_id:
            raise _HttpError("invalid_params",
                             f"loaded dataset is for program {index.program!r}")
        raw = await request.body()
        if raw[:8] != PCXYZ_MAGIC:
            raise _HttpError("bad_request", "fit body must be a PCXYZ001 cloud")
        pts = np.frombuffer(raw[8:], dtype="<f4").astype(float).reshape(-1, 3)
        try:
            cloud = PointCloud(pts)
        except GeometryError as e:
            raise _HttpError("bad_request", str(e)) from None
        result = run_fit(cloud, index, get_graph(program_id))
        return _json_response({"params": vector_to_map(result.params, schema),
                               "objective": result.objective,
                               "low_confidence": result.low_confidence})

    @app.post("/programs/{program_id}/metrics/stability")
    async def stability_endpoint(program_id: str, request: Request):
        body = await _read_json(request)
        _require_keys(body, {"params"})
        vec, _ = _parse_params(program_id, body["params"])
        mesh = _evaluate(program_id, vec)
        return _json_response(stability(mesh).to_json())

    return app
