"""Interpretable parameter spaces for shape programs.

A shape program is driven by an ordered list of named parameters, each
discrete, boolean, or continuous. Parameters that control a switchable part
can additionally take a dedicated *existence label*, meaning "this part is
not present in the shape". Visibility rules relate a controller parameter
(e.g. ``armrests_exist``) to the dependent parameters that become meaningless
when the controlled part is hidden; canonicalization stamps the existence
label onto those entries so that two vectors producing the same shape compare
equal.

The module also covers the surrounding machinery: normalization to the
network-facing form (continuous values in [0, 1], integers shifted to start
at 0, labels as -1.0), one-hot encoding over per-parameter uniform grids,
parameter-space editing (interpolation and mixing), and recipe-driven
enumeration of dataset sweeps.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

DISCRETE = "discrete"
BOOLEAN = "boolean"
CONTINUOUS = "continuous"

_KINDS = (DISCRETE, BOOLEAN, CONTINUOUS)

# Normalized encoding of the existence label.
LABEL_VALUE = -1.0

# Tolerance for "a continuous value sits on its grid" checks.
GRID_TOL = 1e-9


class ParamError(ValueError):
    """Invalid parameter value, schema, or recipe."""


class _Invisible:
    """Singleton marker for the existence label in raw vectors."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INVISIBLE"


INVISIBLE = _Invisible()


@dataclass(frozen=True)
class ParameterSpec:
    """One named parameter: kind, allowed range, and grid resolution.

    ``granularity`` is the number of uniform samples used when a continuous
    range is discretized; it is ignored for discrete and boolean kinds.
    ``part`` names the semantic part this parameter controls.
    """

    name: str
    kind: str
    lo: int = 0
    hi: int = 1
    min: float = 0.0
    max: float = 1.0
    granularity: int = 2
    can_be_invisible: bool = False
    part: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParamError(f"unknown parameter kind {self.kind!r}")
        if self.kind == DISCRETE and self.lo > self.hi:
            raise ParamError(f"{self.name}: discrete range [{self.lo}, {self.hi}] is empty")
        if self.kind == CONTINUOUS:
            if not self.min < self.max:
                raise ParamError(f"{self.name}: continuous range [{self.min}, {self.max}] is empty")
            if self.granularity < 2:
                raise ParamError(f"{self.name}: granularity must be >= 2")

    @property
    def value_classes(self) -> int:
        """Number of value classes, excluding the existence class."""
        if self.kind == DISCRETE:
            return self.hi - self.lo + 1
        if self.kind == BOOLEAN:
            return 2
        return self.granularity

    @property
    def classes(self) -> int:
        """One-hot block length: value classes plus the existence class."""
        return self.value_classes + (1 if self.can_be_invisible else 0)

    def contains(self, value) -> bool:
        if self.kind == DISCRETE:
            return isinstance(value, (int, np.integer)) and self.lo <= value <= self.hi
        if self.kind == BOOLEAN:
            return isinstance(value, (bool, np.bool_))
        return isinstance(value, (int, float, np.floating)) and self.min <= value <= self.max

    def to_json(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "kind": self.kind, "part": self.part,
                             "can_be_invisible": self.can_be_invisible}
        if self.kind == DISCRETE:
            d["lo"], d["hi"] = self.lo, self.hi
        elif self.kind == CONTINUOUS:
            d["min"], d["max"], d["granularity"] = self.min, self.max, self.granularity
        return d

    @staticmethod
    def from_json(d: dict) -> "ParameterSpec":
        kind = d["kind"]
        kw = dict(name=d["name"], kind=kind, part=d.get("part", ""),
                  can_be_invisible=d.get("can_be_invisible", False))
        if kind == DISCRETE:
            kw["lo"], kw["hi"] = int(d["lo"]), int(d["hi"])
        elif kind == CONTINUOUS:
            kw["min"], kw["max"] = float(d["min"]), float(d["max"])
            kw["granularity"] = int(d["granularity"])
        return ParameterSpec(**kw)


@dataclass(frozen=True)
class VisibilityRule:
    """Dependent parameters take the existence label when the controller
    equals ``hide_value`` (or is itself labeled)."""

    controller: str
    hide_value: Any
    dependents: tuple[str, ...]

    def to_json(self) -> dict:
        return {"controller": self.controller, "hide_value": self.hide_value,
                "dependents": list(self.dependents)}

    @staticmethod
    def from_json(d: dict) -> "VisibilityRule":
        return VisibilityRule(d["controller"], d["hide_value"], tuple(d["dependents"]))


class ParameterSchema:
    """Ordered parameter specs plus the visibility rules that relate them."""

    def __init__(self, specs: list[ParameterSpec], visibility_rules: list[VisibilityRule] = ()):
        self.specs = tuple(specs)
        self.visibility_rules = tuple(visibility_rules)
        self._index = {s.name: i for i, s in enumerate(self.specs)}
        if len(self._index) != len(self.specs):
            raise ParamError("duplicate parameter names in schema")
        for rule in self.visibility_rules:
            if rule.controller not in self._index:
                raise ParamError(f"visibility rule controller {rule.controller!r} not in schema")
            for dep in rule.dependents:
                if dep not in self._index:
                    raise ParamError(f"visibility rule dependent {dep!r} not in schema")
                if dep == rule.controller:
                    raise ParamError(f"visibility rule controller {rule.controller!r} depends on itself")
        self._check_rules_acyclic()

    def _check_rules_acyclic(self):
        edges: dict[str, set[str]] = {}
        for rule in self.visibility_rules:
            edges.setdefault(rule.controller, set()).update(rule.dependents)
        state: dict[str, int] = {}

        def visit(n):
            state[n] = 1
            for m in edges.get(n, ()):
                if state.get(m) == 1:
                    raise ParamError("visibility rule graph has a cycle")
                if state.get(m, 0) == 0:
                    visit(m)
            state[n] = 2

        for n in list(edges):
            if state.get(n, 0) == 0:
                visit(n)

    def __len__(self):
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ParamError(f"unknown parameter {name!r}") from None

    def spec(self, name: str) -> ParameterSpec:
        return self.specs[self.index(name)]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.specs)

    def to_json(self) -> dict:
        return {"specs": [s.to_json() for s in self.specs],
                "visibility_rules": [r.to_json() for r in self.visibility_rules]}

    @staticmethod
    def from_json(d: dict) -> "ParameterSchema":
        return ParameterSchema([ParameterSpec.from_json(s) for s in d["specs"]],
                               [VisibilityRule.from_json(r) for r in d.get("visibility_rules", [])])


@dataclass(frozen=True)
class ParameterVector:
    """Ordered per-parameter values; entries may carry the existence label."""

    values: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def replace(self, i: int, value) -> "ParameterVector":
        vals = list(self.values)
        vals[i] = value
        return ParameterVector(tuple(vals))


def make_vector(schema: ParameterSchema, mapping: dict) -> ParameterVector:
    """Build a vector from a name->value map, validating against the schema.

    The number -1.0 is accepted as the existence label for invisible-capable
    parameters whose range does not include it.
    """
    missing = [n for n in schema.names if n not in mapping]
    if missing:
        raise ParamError(f"missing parameter(s): {', '.join(missing)}")
    unknown = [n for n in mapping if n not in schema.names]
    if unknown:
        raise ParamError(f"unknown parameter(s): {', '.join(unknown)}")
    values = []
    for spec in schema:
        raw = mapping[spec.name]
        if raw is INVISIBLE or (spec.can_be_invisible and isinstance(raw, (int, float))
                                and not isinstance(raw, bool) and float(raw) == LABEL_VALUE
                                and not spec.contains(raw)):
            if not spec.can_be_invisible:
                raise ParamError(f"{spec.name} cannot take the existence label")
            values.append(INVISIBLE)
            continue
        values.append(_coerce(spec, raw))
    return validate_vector(ParameterVector(tuple(values)), schema)


def _coerce(spec: ParameterSpec, raw):
    if spec.kind == BOOLEAN:
        if isinstance(raw, (bool, np.bool_)):
            return bool(raw)
        raise ParamError(f"{spec.name}: expected boolean, got {raw!r}")
    if spec.kind == DISCRETE:
        if isinstance(raw, (bool, np.bool_)):
            raise ParamError(f"{spec.name}: expected integer, got {raw!r}")
        f = float(raw)
        if f != int(f):
            raise ParamError(f"{spec.name}: expected integer, got {raw!r}")
        return int(f)
    if isinstance(raw, (bool, np.bool_)):
        raise ParamError(f"{spec.name}: expected real, got {raw!r}")
    return float(raw)


def validate_vector(v: ParameterVector, schema: ParameterSchema) -> ParameterVector:
    if len(v) != len(schema):
        raise ParamError(f"vector length {len(v)} does not match schema length {len(schema)}")
    for spec, value in zip(schema, v.values):
        if value is INVISIBLE:
            if not spec.can_be_invisible:
                raise ParamError(f"{spec.name} cannot take the existence label")
            continue
        if not spec.contains(value):
            raise ParamError(f"{spec.name}: value {value!r} outside allowed range")
    return v


def vector_to_map(v: ParameterVector, schema: ParameterSchema) -> dict:
    """Serialize to a name->value map; the existence label becomes -1.0."""
    return {s.name: (LABEL_VALUE if val is INVISIBLE else val)
            for s, val in zip(schema, v.values)}


def vector_from_map(mapping: dict, schema: ParameterSchema) -> ParameterVector:
    return make_vector(schema, mapping)


def normalized_vector_from_map(mapping: dict, schema: ParameterSchema) -> ParameterVector:
    """Load a normalized-form vector (as stored in label files) from a
    name->value map; values stay in normalized form, labels as -1.0."""
    missing = [n for n in schema.names if n not in mapping]
    if missing:
        raise ParamError(f"missing parameter(s): {', '.join(missing)}")
    return ParameterVector(tuple(float(mapping[s.name]) for s in schema))


def canonical_key(v: ParameterVector, schema: ParameterSchema) -> str:
    """Stable dedup identity of a canonical vector."""
    payload = json.dumps(vector_to_map(v, schema), sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(payload.encode()).hexdigest()


# ---------------------------------------------------------------------------
# normalization

def normalize(v: ParameterVector, schema: ParameterSchema) -> ParameterVector:
    """Map raw values to the normalized form.

    Continuous values go linearly to [0, 1], discrete values are shifted so
    the smallest allowed value is 0, booleans become 0/1, and existence
    labels become -1.0.
    """
    validate_vector(v, schema)
    out = []
    for spec, value in zip(schema, v.values):
        if value is INVISIBLE:
            out.append(LABEL_VALUE)
        elif spec.kind == CONTINUOUS:
            out.append((value - spec.min) / (spec.max - spec.min))
        elif spec.kind == DISCRETE:
            out.append(float(value - spec.lo))
        else:
            out.append(1.0 if value else 0.0)
    return ParameterVector(tuple(out))


def denormalize(v: ParameterVector, schema: ParameterSchema) -> ParameterVector:
    """Inverse of :func:`normalize`; labels (-1.0) are preserved."""
    if len(v) != len(schema):
        raise ParamError("vector length does not match schema")
    out = []
    for spec, value in zip(schema, v.values):
        value = float(value)
        if spec.can_be_invisible and value == LABEL_VALUE:
            out.append(INVISIBLE)
            continue
        if spec.kind == CONTINUOUS:
            if not -GRID_TOL <= value <= 1.0 + GRID_TOL:
                raise ParamError(f"{spec.name}: normalized value {value} outside [0, 1]")
            x = min(max(value, 0.0), 1.0)
            out.append(spec.min * (1.0 - x) + spec.max * x)
        elif spec.kind == DISCRETE:
            if value != int(value):
                raise ParamError(f"{spec.name}: normalized discrete value {value} is not an integer")
            out.append(spec.lo + int(value))
        else:
            if value not in (0.0, 1.0):
                raise ParamError(f"{spec.name}: normalized boolean value {value} is not 0/1")
            out.append(bool(value))
    return validate_vector(ParameterVector(tuple(out)), schema)


# ---------------------------------------------------------------------------
# canonical form

def _rule_fires(rule: VisibilityRule, controller_value) -> bool:
    if controller_value is INVISIBLE:
        return True
    return controller_value == rule.hide_value


def canonicalize(v: ParameterVector, schema: ParameterSchema) -> ParameterVector:
    """Apply visibility rules, stamping the existence label on hidden entries.

    Idempotent; vectors that generate the same shape become equal.
    """
    validate_vector(v, schema)
    values = list(v.values)
    # Rules may chain (a controller may itself be hidden by another rule),
    # so iterate to a fixpoint; the rule graph is acyclic, so this terminates.
    changed = True
    while changed:
        changed = False
        for rule in schema.visibility_rules:
            cv = values[schema.index(rule.controller)]
            if _rule_fires(rule, cv):
                for dep in rule.dependents:
                    i = schema.index(dep)
                    if values[i] is not INVISIBLE:
                        if not schema.specs[i].can_be_invisible:
                            raise ParamError(f"{dep} is hidden by {rule.controller} "
                                             "but cannot take the existence label")
                        values[i] = INVISIBLE
                        changed = True
    return ParameterVector(tuple(values))


# ---------------------------------------------------------------------------
# one-hot encoding

@dataclass(frozen=True)
class LabelEncoding:
    """Concatenated per-parameter one-hot blocks."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def concatenated(self) -> tuple[int, ...]:
        return tuple(x for b in self.blocks for x in b)


def grid_values(spec: ParameterSpec) -> list:
    """Raw-value grid of a spec: uniform samples for continuous, the integer
    range for discrete, False/True for boolean."""
    if spec.kind == CONTINUOUS:
        return _uniform_grid(spec.min, spec.max, spec.granularity)
    if spec.kind == DISCRETE:
        return list(range(spec.lo, spec.hi + 1))
    return [False, True]


def _uniform_grid(lo: float, hi: float, g: int) -> list[float]:
    # endpoints exact in floating point; interior points are strict convex
    # combinations, safely inside the range
    return [lo if i == 0 else hi if i == g - 1 else
            (lo * (g - 1 - i) + hi * i) / (g - 1) for i in range(g)]


def _class_index(spec: ParameterSpec, norm_value: float) -> int:
    if spec.can_be_invisible and norm_value == LABEL_VALUE:
        return spec.value_classes  # dedicated final class
    if spec.kind == CONTINUOUS:
        g = spec.granularity
        idx = norm_value * (g - 1)
        nearest = int(round(idx))
        if abs(idx - nearest) > GRID_TOL * (g - 1) + GRID_TOL:
            raise ParamError(f"{spec.name}: value off the uniform grid by {abs(idx - nearest) / (g - 1)}")
        return min(max(nearest, 0), g - 1)
    return int(norm_value)


def encode_onehot(v: ParameterVector, schema: ParameterSchema) -> LabelEncoding:
    """One-hot encode a canonical, normalized, on-grid vector."""
    blocks = []
    for spec, value in zip(schema, v.values):
        k = _class_index(spec, float(value))
        block = [0] * spec.classes
        block[k] = 1
        blocks.append(tuple(block))
    return LabelEncoding(tuple(blocks))


def decode_onehot(e: LabelEncoding, schema: ParameterSchema) -> ParameterVector:
    """Inverse of :func:`encode_onehot`, back to the normalized form."""
    if len(e.blocks) != len(schema):
        raise ParamError("encoding block count does not match schema")
    out = []
    for spec, block in zip(schema, e.blocks):
        if len(block) != spec.classes:
            raise ParamError(f"{spec.name}: block length {len(block)} != {spec.classes}")
        ones = [i for i, x in enumerate(block) if x == 1]
        if len(ones) != 1 or any(x not in (0, 1) for x in block):
            raise ParamError(f"{spec.name}: block is not one-hot")
        k = ones[0]
        if spec.can_be_invisible and k == spec.value_classes:
            out.append(LABEL_VALUE)
        elif spec.kind == CONTINUOUS:
            out.append(k / (spec.granularity - 1))
        else:
            out.append(float(k))
    return ParameterVector(tuple(out))


# ---------------------------------------------------------------------------
# parameter-space editing

def interpolate(a: ParameterVector, b: ParameterVector, alpha: float,
                schema: ParameterSchema) -> ParameterVector:
    """Blend two canonical vectors.

    Continuous entries blend linearly in normalized space, discrete entries
    round the blend half-to-even, booleans take b's value from alpha >= 0.5.
    When exactly one side is labeled, the entry switches sides at alpha >= 0.5.
    The result is re-canonicalized; alpha 0/1 return a/b exactly.
    """
    if len(a) != len(schema) or len(b) != len(schema):
        raise ParamError("vector length does not match schema")
    if not 0.0 <= alpha <= 1.0:
        raise ParamError(f"alpha {alpha} outside [0, 1]")
    if alpha == 0.0:
        return canonicalize(a, schema)
    if alpha == 1.0:
        return canonicalize(b, schema)
    na, nb = normalize(a, schema), normalize(b, schema)
    out = []
    for spec, va, vb, ra, rb in zip(schema, na.values, nb.values, a.values, b.values):
        a_lab, b_lab = ra is INVISIBLE, rb is INVISIBLE
        if a_lab and b_lab:
            out.append(INVISIBLE)
        elif a_lab or b_lab:
            out.append(rb if alpha >= 0.5 else ra)
        elif spec.kind == CONTINUOUS:
            blend = min(max(va + (vb - va) * alpha, 0.0), 1.0)
            out.append(spec.min * (1.0 - blend) + spec.max * blend)
        elif spec.kind == DISCRETE:
            blend = va + (vb - va) * alpha
            idx = int(_round_half_even(blend))
            out.append(spec.lo + min(max(idx, 0), spec.hi - spec.lo))
        else:
            out.append(rb if alpha >= 0.5 else ra)
    return canonicalize(ParameterVector(tuple(out)), schema)


def _round_half_even(x: float) -> float:
    f = math.floor(x)
    frac = x - f
    if frac < 0.5:
        return f
    if frac > 0.5:
        return f + 1
    return f if f % 2 == 0 else f + 1


def selection_closure_violations(selection: set[str], schema: ParameterSchema) -> list[str]:
    """Dependents selected without their controller, if any."""
    bad = []
    for rule in schema.visibility_rules:
        for dep in rule.dependents:
            if dep in selection and rule.controller not in selection:
                bad.append(dep)
    return bad


def mix(source: ParameterVector, donor: ParameterVector, selection: set[str],
        schema: ParameterSchema) -> ParameterVector:
    """Overwrite the selected coordinates of source with donor's values.

    The selection must be closed under visibility rules: selecting a
    dependent requires selecting its controller.
    """
    for name in selection:
        schema.index(name)
    bad = selection_closure_violations(selection, schema)
    if bad:
        raise ParamError("selection not closed under visibility rules; "
                         f"missing controller(s) for: {', '.join(sorted(bad))}")
    out = [donor.values[i] if s.name in selection else source.values[i]
           for i, s in enumerate(schema)]
    return canonicalize(ParameterVector(tuple(out)), schema)


# ---------------------------------------------------------------------------
# recipes and sweeps

@dataclass(frozen=True)
class RangeOverride:
    min: float | None = None
    max: float | None = None
    granularity: int | None = None


@dataclass(frozen=True)
class Recipe:
    """Dataset generation settings: which program, parameter range/grid
    overrides, samples per grid value, and the sweep seed."""

    program: str
    seed: int
    samples_per_value: int
    overrides: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        params = {}
        for name, ov in self.overrides.items():
            d = {}
            if ov.min is not None:
                d["min"] = ov.min
            if ov.max is not None:
                d["max"] = ov.max
            if ov.granularity is not None:
                d["granularity"] = ov.granularity
            params[name] = d
        return {"program": self.program, "seed": self.seed,
                "samples_per_value": self.samples_per_value, "params": params}


_RECIPE_KEYS = {"program", "seed", "samples_per_value", "params"}
_OVERRIDE_KEYS = {"min", "max", "granularity"}


def load_recipe(doc: str, schema: ParameterSchema) -> Recipe:
    """Parse and validate a JSON recipe document against a schema."""
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as e:
        raise ParamError(f"recipe is not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ParamError("recipe must be a JSON object")
    unknown = set(data) - _RECIPE_KEYS
    if unknown:
        raise ParamError(f"unknown recipe key(s): {', '.join(sorted(unknown))}")
    for key in ("program", "seed", "samples_per_value"):
        if key not in data:
            raise ParamError(f"recipe missing required key {key!r}")
    spv = int(data["samples_per_value"])
    if spv < 1:
        raise ParamError("samples_per_value must be >= 1")
    overrides = {}
    for name, od in (data.get("params") or {}).items():
        spec = schema.spec(name)  # raises on unknown names
        unknown = set(od) - _OVERRIDE_KEYS
        if unknown:
            raise ParamError(f"{name}: unknown override key(s): {', '.join(sorted(unknown))}")
        if spec.kind == BOOLEAN and od:
            raise ParamError(f"{name}: boolean parameters take no overrides")
        ov = RangeOverride(
            min=float(od["min"]) if "min" in od else None,
            max=float(od["max"]) if "max" in od else None,
            granularity=int(od["granularity"]) if "granularity" in od else None,
        )
        _check_override(spec, ov)
        overrides[name] = ov
    return Recipe(program=str(data["program"]), seed=int(data["seed"]),
                  samples_per_value=spv, overrides=overrides)


def _check_override(spec: ParameterSpec, ov: RangeOverride):
    if ov.granularity is not None:
        if spec.kind != CONTINUOUS:
            raise ParamError(f"{spec.name}: granularity override on non-continuous parameter")
        if ov.granularity < 2:
            raise ParamError(f"{spec.name}: granularity must be >= 2")
    lo = ov.min if ov.min is not None else (spec.min if spec.kind == CONTINUOUS else spec.lo)
    hi = ov.max if ov.max is not None else (spec.max if spec.kind == CONTINUOUS else spec.hi)
    if lo > hi or (spec.kind == CONTINUOUS and lo >= hi):
        raise ParamError(f"{spec.name}: override range [{lo}, {hi}] is empty")
    if spec.kind == CONTINUOUS:
        if lo < spec.min - GRID_TOL or hi > spec.max + GRID_TOL:
            raise ParamError(f"{spec.name}: override range outside spec range")
    elif spec.kind == DISCRETE:
        if int(lo) < spec.lo or int(hi) > spec.hi:
            raise ParamError(f"{spec.name}: override range outside spec range")


def effective_grid(spec: ParameterSpec, recipe: Recipe) -> list:
    """Raw-value grid of a parameter after recipe overrides."""
    ov = recipe.overrides.get(spec.name)
    if ov is None:
        return grid_values(spec)
    if spec.kind == CONTINUOUS:
        lo = ov.min if ov.min is not None else spec.min
        hi = ov.max if ov.max is not None else spec.max
        g = ov.granularity if ov.granularity is not None else spec.granularity
        return _uniform_grid(lo, hi, g)
    if spec.kind == DISCRETE:
        lo = int(ov.min) if ov.min is not None else spec.lo
        hi = int(ov.max) if ov.max is not None else spec.hi
        return list(range(lo, hi + 1))
    return [False, True]


def enumerate_sweep(recipe: Recipe, schema: ParameterSchema) -> Iterator[ParameterVector]:
    """Yield the canonical dataset sweep for a recipe.

    For every parameter and every one of its grid values, emits
    ``samples_per_value`` vectors holding that value fixed with all other
    parameters drawn uniformly from their grids. Each draw is seeded by
    (recipe seed, parameter index, grid index, sample index), so the stream
    is deterministic and independent of consumption order. Duplicates under
    canonicalization are dropped.
    """
    grids = [effective_grid(s, recipe) for s in schema]
    seen: set[str] = set()
    for pi, spec in enumerate(schema):
        for gi, fixed in enumerate(grids[pi]):
            for si in range(recipe.samples_per_value):
                rng = np.random.default_rng(np.random.SeedSequence((recipe.seed, pi, gi, si)))
                values = []
                for qi, qspec in enumerate(schema):
                    if qi == pi:
                        values.append(fixed)
                    else:
                        g = grids[qi]
                        values.append(g[int(rng.integers(0, len(g)))])
                vec = canonicalize(ParameterVector(tuple(values)), schema)
                key = canonical_key(vec, schema)
                if key not in seen:
                    seen.add(key)
                    yield vec
