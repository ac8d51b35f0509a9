"""Command-line entry points for evaluation, datasets, metrics, editing,
fitting, and the HTTP service."""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from .dataset import generate as generate_dataset
from .errors import (ApiError, EvalFailedError, GeocodeError,
                     InvalidParamsError, NotFoundError, UnknownProgramError)
from .geometry import export_obj, load_obj
from .geometry.curves import GeometryError
from .graph import NodeEvalError, evaluate
from .metrics import mesh_chamfer, stability
from .params import (ParamError, Recipe, canonicalize, interpolate, load_recipe,
                     mix, vector_from_map, vector_to_map)
from .pointcloud import read_pcxyz
from .programs import default_params, get_graph, get_schema, program_ids

DATA_ENV = "GEOCODE_DATA"

_EXIT_CODES = {"bad_request": 2, "unknown_program": 2, "invalid_params": 2,
               "not_found": 2, "eval_failed": 3}


def _fail(e: Exception):
    if isinstance(e, ParamError):
        err = ApiError("invalid_params", str(e))
    elif isinstance(e, (GeometryError, NodeEvalError)):
        err = ApiError("eval_failed", str(e))
    elif isinstance(e, GeocodeError):
        err = ApiError.from_exception(e)
    else:
        raise e
    click.echo(json.dumps(err.to_json()), err=True)
    sys.exit(_EXIT_CODES[err.code])


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as e:  # noqa: BLE001 - rethrown for unknown types
            _fail(e)

    return wrapper


def _load_params(program: str, path: str):
    schema = get_schema(program)
    mapping = json.loads(Path(path).read_text())
    return canonicalize(vector_from_map(mapping, schema), schema), schema


@click.group()
def main():
    """Procedural shape programs: evaluate, edit, measure, fit."""


@main.command("eval")
@click.argument("program")
@click.argument("params_file", type=click.Path(exists=True))
@click.argument("out_path", type=click.Path())
@handle_errors
def cmd_eval(program, params_file, out_path):
    """Evaluate PROGRAM on PARAMS_FILE and write an OBJ to OUT_PATH."""
    vec, _ = _load_params(program, params_file)
    mesh = evaluate(get_graph(program), vec)
    Path(out_path).write_bytes(export_obj(mesh))
    click.echo(f"wrote {out_path}")


@main.command("defaults")
@click.argument("program")
@handle_errors
def cmd_defaults(program):
    """Print PROGRAM's default parameter vector as JSON."""
    schema = get_schema(program)
    click.echo(json.dumps(vector_to_map(default_params(program), schema), sort_keys=True))


@main.command("generate")
@click.option("--recipe", "recipe_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--workers", default=1, show_default=True)
@click.option("--seed", default=None, type=int, help="Override the recipe seed.")
@handle_errors
def cmd_generate(recipe_path, out_dir, workers, seed):
    """Generate a dataset from a recipe file."""
    doc = Path(recipe_path).read_text()
    program = json.loads(doc).get("program")
    if not isinstance(program, str):
        raise InvalidParamsError("recipe is missing a program id")
    recipe = load_recipe(doc, get_schema(program))
    if seed is not None:
        recipe = Recipe(recipe.program, seed, recipe.samples_per_value, recipe.overrides)
    manifest = generate_dataset(recipe, out_dir, workers=workers)
    click.echo(f"generated {len(manifest.entries)} samples "
               f"({len(manifest.failures)} failures) in {out_dir}")


@main.command("chamfer")
@click.argument("obj_a", type=click.Path(exists=True))
@click.argument("obj_b", type=click.Path(exists=True))
@click.option("--n", default=10000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@handle_errors
def cmd_chamfer(obj_a, obj_b, n, seed):
    """Chamfer distance between two OBJ meshes."""
    ma = load_obj(Path(obj_a).read_bytes())
    mb = load_obj(Path(obj_b).read_bytes())
    click.echo(f"{mesh_chamfer(ma, mb, n=n, seed=seed):.10g}")


@main.command("stability")
@click.argument("obj_path", type=click.Path(exists=True))
@handle_errors
def cmd_stability(obj_path):
    """Stability report for an OBJ mesh, as JSON."""
    mesh = load_obj(Path(obj_path).read_bytes())
    click.echo(json.dumps(stability(mesh).to_json(), sort_keys=True))


@main.command("interpolate")
@click.option("--program", required=True)
@click.option("--a", "a_path", required=True, type=click.Path(exists=True))
@click.option("--b", "b_path", required=True, type=click.Path(exists=True))
@click.option("--alpha", required=True, type=float)
@click.option("--out", "out_path", default=None, type=click.Path(),
              help="Also write the blended shape as OBJ.")
@handle_errors
def cmd_interpolate(program, a_path, b_path, alpha, out_path):
    """Blend two parameter files; prints the result vector as JSON."""
    va, schema = _load_params(program, a_path)
    vb, _ = _load_params(program, b_path)
    vec = interpolate(va, vb, alpha, schema)
    click.echo(json.dumps(vector_to_map(vec, schema), sort_keys=True))
    if out_path:
        Path(out_path).write_bytes(export_obj(evaluate(get_graph(program), vec)))


@main.command("mix")
@click.option("--program", required=True)
@click.option("--source", "source_path", required=True, type=click.Path(exists=True))
@click.option("--donor", "donor_path", required=True, type=click.Path(exists=True))
@click.option("--select", "selection", required=True,
              help="Comma-separated parameter names taken from the donor.")
@click.option("--out", "out_path", default=None, type=click.Path())
@handle_errors
def cmd_mix(program, source_path, donor_path, selection, out_path):
    """Overwrite selected source parameters with donor values."""
    vs, schema = _load_params(program, source_path)
    vd, _ = _load_params(program, donor_path)
    names = {s.strip() for s in selection.split(",") if s.strip()}
    vec = mix(vs, vd, names, schema)
    click.echo(json.dumps(vector_to_map(vec, schema), sort_keys=True))
    if out_path:
        Path(out_path).write_bytes(export_obj(evaluate(get_graph(program), vec)))


@main.command("fit")
@click.option("--pc", "pc_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", "data_dir", default=None, type=click.Path(),
              help=f"Dataset directory (defaults to ${DATA_ENV}).")
@click.option("--program", required=True)
@click.option("--budget", default=300, show_default=True)
@handle_errors
def cmd_fit(pc_path, data_dir, program, budget):
    """Fit parameters to a point cloud; prints params and objective."""
    from .fit import fit, load_index

    data_dir = data_dir or os.environ.get(DATA_ENV)
    if not data_dir:
        raise NotFoundError(f"no dataset directory; pass --dataset or set ${DATA_ENV}")
    index = load_index(data_dir)
    if index.program != program:
        raise InvalidParamsError(f"dataset is for program {index.program!r}, not {program!r}")
    cloud = read_pcxyz(pc_path)
    result = fit(cloud, index, get_graph(program), budget=budget)
    schema = get_schema(program)
    click.echo(json.dumps({"params": vector_to_map(result.params, schema),
                           "objective": result.objective,
                           "low_confidence": result.low_confidence}, sort_keys=True))


@main.command("serve")
@click.option("--dataset", "data_dir", default=None, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@handle_errors
def cmd_serve(data_dir, host, port):
    """Run the JSON-over-HTTP editor service."""
    import uvicorn

    from .service import create_app

    data_dir = data_dir or os.environ.get(DATA_ENV)
    uvicorn.run(create_app(data_dir), host=host, port=port)


if __name__ == "__main__":
    main()
