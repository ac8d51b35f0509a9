"""Recipe-driven dataset generation.

For every vector of the recipe's sweep the generator evaluates the program
and writes four artifacts: the OBJ mesh, a labels JSON holding the
normalized canonical vector, and two point-cloud files (farthest-point
sampled and random). A manifest indexes the samples by canonical-vector
hash; re-running on a complete directory is a no-op, and partially present
directories resume where they left off.

Per-sample RNG is seeded by (recipe seed, vector hash), so the file set is
byte-identical for a fixed recipe regardless of worker count or scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .geometry import export_obj
from .graph import NodeEvalError, evaluate
from .params import (ParameterSchema, ParameterVector, Recipe, canonical_key,
                     enumerate_sweep, normalize, vector_from_map, vector_to_map)
from .pointcloud import (read_pcxyz, sample_fps_cloud, sample_random_cloud,
                         write_pcxyz)
from .programs import get_graph, get_schema

_SUBDIRS = ("obj", "labels", "pc_fps", "pc_rand")


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    vector_hash: str
    params_normalized: dict
    files: dict

    def to_json(self) -> dict:
        return {"id": self.sample_id, "hash": self.vector_hash,
                "params_normalized": self.params_normalized, "files": self.files}

    @staticmethod
    def from_json(d: dict) -> "ManifestEntry":
        return ManifestEntry(d["id"], d["hash"], d["params_normalized"], d["files"])


@dataclass
class DatasetManifest:
    program: str
    recipe: dict
    generator_version: str
    entries: list[ManifestEntry] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"program": self.program, "recipe": self.recipe,
                "generator_version": self.generator_version,
                "entries": [e.to_json() for e in sorted(self.entries, key=lambda e: e.sample_id)],
                "failures": sorted(self.failures, key=lambda f: f["hash"])}

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True, indent=1))

    @staticmethod
    def load(path: str | Path) -> "DatasetManifest":
        d = json.loads(Path(path).read_text())
        m = DatasetManifest(d["program"], d["recipe"], d["generator_version"])
        m.entries = [ManifestEntry.from_json(e) for e in d["entries"]]
        m.failures = list(d.get("failures", []))
        return m


def _sample_seed(recipe_seed: int, vector_hash: str) -> int:
    ss = np.random.SeedSequence((recipe_seed, int(vector_hash[:16], 16)))
    return int(ss.generate_state(1)[0])


def _generate_one(program: str, vec_map: dict, vector_hash: str, recipe_seed: int,
                  out_dir: str) -> dict:
    """Worker: evaluate one vector and write its four files."""
    out = Path(out_dir)
    schema = get_schema(program)
    graph = get_graph(program)
    vec = vector_from_map(vec_map, schema)
    sample_id = vector_hash[:16]
    files = {
        "obj": f"obj/{sample_id}.obj",
        "labels": f"labels/{sample_id}.json",
        "pc_fps": f"pc_fps/{sample_id}.pcxyz",
        "pc_rand": f"pc_rand/{sample_id}.pcxyz",
    }
    mesh = evaluate(graph, vec)
    seed = _sample_seed(recipe_seed, vector_hash)
    (out / files["obj"]).write_bytes(export_obj(mesh))
    norm_map = vector_to_map(normalize(vec, schema), schema)
    (out / files["labels"]).write_text(
        json.dumps(norm_map, sort_keys=True, separators=(",", ":")))
    write_pcxyz(out / files["pc_fps"], sample_fps_cloud(mesh, seed))
    write_pcxyz(out / files["pc_rand"], sample_random_cloud(mesh, seed))
    return {"id": sample_id, "hash": vector_hash, "params_normalized": norm_map,
            "files": files}


def _entry_complete(out: Path, entry: ManifestEntry) -> bool:
    return all((out / p).exists() for p in entry.files.values())


def generate(recipe: Recipe, out_dir: str | Path, workers: int = 1) -> DatasetManifest:
    """Generate (or resume) a dataset for a recipe.

    Evaluation failures are recorded in the manifest and skipped; I/O errors
    abort. The manifest is written last.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for sub in _SUBDIRS:
        (out / sub).mkdir(exist_ok=True)

    schema = get_schema(recipe.program)
    manifest_path = out / "manifest.json"
    existing: dict[str, ManifestEntry] = {}
    if manifest_path.exists():
        prior = DatasetManifest.load(manifest_path)
        existing = {e.vector_hash: e for e in prior.entries if _entry_complete(out, e)}

    manifest = DatasetManifest(recipe.program, recipe.to_json(), __version__)
    todo: list[tuple[dict, str]] = []
    for vec in enumerate_sweep(recipe, schema):
        h = canonical_key(vec, schema)
        if h in existing:
            manifest.entries.append(existing[h])
        else:
            todo.append((vector_to_map(vec, schema), h))

    if workers <= 1:
        for vec_map, h in todo:
            _collect(manifest, vec_map, h, recipe, out)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(h, pool.submit(_generate_one, recipe.program, vec_map, h,
                                       recipe.seed, str(out)))
                       for vec_map, h in todo]
            for h, fut in futures:
                try:
                    manifest.entries.append(ManifestEntry.from_json(fut.result()))
                except NodeEvalError as e:
                    manifest.failures.append({"hash": h, "error": str(e)})

    manifest.save(manifest_path)
    return manifest


def _collect(manifest: DatasetManifest, vec_map: dict, h: str, recipe: Recipe, out: Path):
    try:
        entry = _generate_one(recipe.program, vec_map, h, recipe.seed, str(out))
    except NodeEvalError as e:
        manifest.failures.append({"hash": h, "error": str(e)})
        return
    manifest.entries.append(ManifestEntry.from_json(entry))


def load_entry_cloud(out_dir: str | Path, entry: ManifestEntry, which: str):
    """Read one of an entry's stored clouds ("pc_fps" or "pc_rand")."""
    return read_pcxyz(Path(out_dir) / entry.files[which])
