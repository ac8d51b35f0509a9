"""Inverse parameter recovery from point clouds.

A generated dataset doubles as a retrieval index: each sample contributes a
compact farthest-point signature of its stored cloud. Fitting a query cloud
retrieves the closest signatures, re-scores the candidates with a full
sampled-Chamfer objective, and refines the best one by cyclic coordinate
descent over the parameter grids, accepting only strict improvements. The
interface (point cloud in, canonical parameter vector out) stays fixed so a
learned predictor could replace the retrieval stage behind it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import DatasetManifest, load_entry_cloud
from .errors import BadRequestError, NotFoundError
from .graph import NodeEvalError, ProgramGraph, evaluate
from .metrics import chamfer
from .params import (BOOLEAN, DISCRETE, INVISIBLE, ParameterSchema,
                     ParameterVector, canonicalize, denormalize, grid_values,
                     normalized_vector_from_map)
from .pointcloud import PointCloud, as_points, fps, surface_sample

SIGNATURE_SIZE = 256
# Fixed sampling for the refinement objective keeps candidate comparisons stable.
OBJECTIVE_SAMPLES = 2048
OBJECTIVE_SEED = 7
RETRIEVE_CANDIDATES = 5
LOW_CONFIDENCE_FACTOR = 10.0
# The fixed-seed 2048-sample objective carries a few percent of sampling
# noise; a move is accepted only when it clears both an absolute floor and a
# relative margin, so the true vector is a fixpoint of the descent.
MIN_IMPROVEMENT = 1e-6
REL_IMPROVEMENT = 0.05


def _improves(candidate_obj: float, best_obj: float) -> bool:
    margin = max(MIN_IMPROVEMENT, REL_IMPROVEMENT * best_obj)
    return candidate_obj < best_obj - margin


@dataclass(frozen=True)
class FitIndex:
    program: str
    vectors: tuple[ParameterVector, ...]
    signatures: tuple[np.ndarray, ...]
    median_floor: float


@dataclass(frozen=True)
class FitResult:
    params: ParameterVector
    objective: float
    low_confidence: bool
    evaluations: int = 0


def _signature(points: np.ndarray) -> np.ndarray:
    if len(points) <= SIGNATURE_SIZE:
        return points
    return points[fps(points, SIGNATURE_SIZE, start=0)]


def build_index(manifest: DatasetManifest, data_dir: str | Path,
                schema: ParameterSchema) -> FitIndex:
    """Index a dataset for retrieval: one signature per sample.

    The stored floor (median Chamfer between each sample's two stored
    clouds) calibrates the low-confidence flag on fit results.
    """
    if not manifest.entries:
        raise BadRequestError("cannot build an index from an empty manifest")
    vectors, signatures, floors = [], [], []
    for entry in sorted(manifest.entries, key=lambda e: e.sample_id):
        fps_cloud = load_entry_cloud(data_dir, entry, "pc_fps")
        rand_cloud = load_entry_cloud(data_dir, entry, "pc_rand")
        norm_vec = normalized_vector_from_map(entry.params_normalized, schema)
        vectors.append(denormalize(norm_vec, schema))
        signatures.append(_signature(fps_cloud.points))
        floors.append(chamfer(fps_cloud, rand_cloud))
    return FitIndex(manifest.program, tuple(vectors), tuple(signatures),
                    float(np.median(floors)))


def retrieve(cloud, index: FitIndex, k: int) -> list[ParameterVector]:
    """Top-k canonical vectors by signature Chamfer distance, ascending."""
    if not index.vectors:
        raise BadRequestError("empty index")
    if not 1 <= k <= len(index.vectors):
        raise BadRequestError(f"k={k} outside [1, {len(index.vectors)}]")
    sig = _signature(as_points(cloud))
    dists = np.array([chamfer(sig, s) for s in index.signatures])
    order = np.argsort(dists, kind="stable")[:k]
    return [index.vectors[i] for i in order]


class _Objective:
    def __init__(self, graph: ProgramGraph, target_points: np.ndarray, budget: int):
        self.graph = graph
        self.target = target_points
        self.budget = budget
        self.evaluations = 0
        self.skipped: list[str] = []

    @property
    def exhausted(self) -> bool:
        return self.evaluations >= self.budget

    def __call__(self, vec: ParameterVector) -> float | None:
        if self.exhausted:
            return None
        self.evaluations += 1
        try:
            mesh = evaluate(self.graph, vec)
            samples = surface_sample(mesh, OBJECTIVE_SAMPLES, OBJECTIVE_SEED)
        except NodeEvalError as e:
            self.skipped.append(str(e))
            return None
        return chamfer(samples.points, self.target)


def _neighbors(vec: ParameterVector, i: int, schema: ParameterSchema) -> list[ParameterVector]:
    spec = schema.specs[i]
    value = vec.values[i]
    if value is INVISIBLE:
        return []  # existence toggles happen through the controller
    out = []
    if spec.kind == BOOLEAN:
        out.append(vec.replace(i, not value))
    elif spec.kind == DISCRETE:
        for cand in (value - 1, value + 1):
            if spec.lo <= cand <= spec.hi:
                out.append(vec.replace(i, cand))
    else:
        grid = grid_values(spec)
        step = (spec.max - spec.min) / (spec.granularity - 1)
        idx = int(round((value - spec.min) / step))
        for j in (idx - 1, idx + 1):
            if 0 <= j < len(grid) and abs(grid[j] - value) > 1e-12:
                out.append(vec.replace(i, grid[j]))
    return out


def refine(cloud, start: ParameterVector, graph: ProgramGraph,
           budget: int = 300) -> FitResult:
    """Cyclic coordinate descent over the parameter grids.

    Tries one grid step in each direction per parameter (booleans toggle),
    accepting a candidate only when the objective strictly decreases by more
    than the sampling-noise floor. Stops at the evaluation budget or after a
    full pass with no improvement.
    """
    if budget < 1:
        raise BadRequestError("refine budget must be >= 1")
    target = as_points(cloud)
    objective = _Objective(graph, target, budget)
    schema = graph.schema
    best = canonicalize(start, schema)
    best_obj = objective(best)
    if best_obj is None:
        raise BadRequestError("could not evaluate the starting vector")
    improved = True
    while improved and not objective.exhausted:
        improved = False
        for i in range(len(schema)):
            for cand in _neighbors(best, i, schema):
                cand = canonicalize(cand, schema)
                if cand == best:
                    continue
                obj = objective(cand)
                if obj is None:
                    if objective.exhausted:
                        return FitResult(best, best_obj, False, objective.evaluations)
                    continue
                if _improves(obj, best_obj):
                    best, best_obj = cand, obj
                    improved = True
    return FitResult(best, best_obj, False, objective.evaluations)


def fit(cloud, index: FitIndex, graph: ProgramGraph, budget: int = 300) -> FitResult:
    """Retrieve, re-score, and refine; deterministic for fixed seeds.

    The result is flagged low-confidence when the final objective exceeds
    10x the dataset's stored sampling floor.
    """
    k = min(RETRIEVE_CANDIDATES, len(index.vectors))
    candidates = retrieve(cloud, index, k)
    target = as_points(cloud)
    scorer = _Objective(graph, target, budget=len(candidates))
    scored = []
    for rank, c in enumerate(candidates):
        obj = scorer(c)
        if obj is not None:
            scored.append((obj, rank, c))
    if not scored:
        raise BadRequestError("no retrieval candidate could be evaluated")
    # lowest objective wins; retrieval order breaks sub-noise ties
    best_obj = min(s[0] for s in scored)
    margin = max(MIN_IMPROVEMENT, REL_IMPROVEMENT * best_obj)
    start = min((s for s in scored if s[0] <= best_obj + margin),
                key=lambda s: s[1])[2]
    result = refine(cloud, start, graph, budget=budget)
    low = result.objective > LOW_CONFIDENCE_FACTOR * index.median_floor
    return FitResult(result.params, result.objective, bool(low),
                     result.evaluations + scorer.evaluations)


def load_index(data_dir: str | Path) -> FitIndex:
    """Build a FitIndex from a generated dataset directory."""
    from .programs import get_schema

    manifest_path = Path(data_dir) / "manifest.json"
    if not manifest_path.exists():
        raise NotFoundError(f"no manifest found in {data_dir}")
    manifest = DatasetManifest.load(manifest_path)
    return build_index(manifest, data_dir, get_schema(manifest.program))
