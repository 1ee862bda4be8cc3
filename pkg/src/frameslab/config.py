"""Experiment configs: JSON validated against the shipped schema."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from .convex_body import ConvexBody
from .decay_profile import DEFAULT_DELTA, DEFAULT_J0, DEFAULT_P
from .errors import DomainError, ParseError
from .pointsets import (PointSet, bessel_zero_line_set, lattice, load_points, perturb,
                        progression_line_set)

__all__ = [
    "ANALYSIS_DEFAULTS",
    "ExperimentConfig",
    "load_schema",
    "validate_output",
    "parse_config",
    "load_config",
]

ANALYSIS_DEFAULTS = {
    "p": DEFAULT_P,
    "delta": DEFAULT_DELTA,
    "j0": DEFAULT_J0,
    "pins": [0],
    "shell": "euclidean",
    "gram": True,
    "erdos": True,
    "residual_tol": 1e-9,
    "line_tol": 1e-9,
    "size_threshold": 3,
}

SCHEMAS = ("config", "report", "gram", "erdos", "coarea")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("frameslab.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in SCHEMAS:
        res = Resource.from_contents(load_schema(name))
        pairs.append((f"{name}.schema.json", res))
        pairs.append((load_schema(name)["$id"], res))
    return Registry().with_resources(pairs)


def _validator(name: str) -> Draft202012Validator:
    return Draft202012Validator(load_schema(name), registry=_registry())


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def _violations(name: str, doc) -> list:
    errs = sorted(_validator(name).iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    return [(_pointer(e.absolute_path), e.message) for e in errs]


def validate_output(name: str, doc) -> None:
    """Raise ParseError listing every violation of the named output schema."""
    bad = _violations(name, doc)
    if bad:
        raise ParseError("; ".join(f"{p}: {m}" for p, m in bad), violations=bad)


@dataclass(frozen=True)
class ExperimentConfig:
    body: ConvexBody
    pointset: dict
    analysis: dict
    output: dict
    seed: int
    tol: float
    base_dir: Path

    def build_pointset(self) -> PointSet:
        spec = self.pointset
        d = self.body.dim
        if "file" in spec:
            path = Path(spec["file"])
            A = load_points(path if path.is_absolute() else self.base_dir / path)
            if A.dimension != d:
                raise DomainError(f"point file has dimension {A.dimension}, body has {d}")
        elif spec["generator"] == "lattice":
            A = lattice(d, spec["spacing"], spec["extent"])
        elif spec["generator"] == "progression":
            A = progression_line_set(d, spec["step"], spec.get("offset", 0.0), spec["count"],
                                     spec.get("direction"))
        else:
            A = bessel_zero_line_set(d, spec["count"])
        if spec.get("perturb"):
            A = perturb(A, float(spec["perturb"]), self.seed)
        return A


def parse_config(text: str, base_dir=".") -> ExperimentConfig:
    """Validate config JSON and fill analysis defaults.

    Every schema violation is collected into one :class:`ParseError` whose
    ``violations`` are (JSON pointer, message) pairs.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}", lineno=exc.lineno) from None
    bad = _violations("config", doc)
    if bad:
        raise ParseError("config is invalid:\n" + "\n".join(f"  {p}: {m}" for p, m in bad), violations=bad)
    try:
        body = ConvexBody.from_spec(doc["body"])
    except DomainError as exc:
        raise ParseError(f"/body: {exc}", violations=[("/body", str(exc))]) from None
    analysis = copy.deepcopy(ANALYSIS_DEFAULTS)
    analysis.update(doc.get("analysis", {}))
    if ("j_min" in analysis) != ("j_max" in analysis):
        raise ParseError("/analysis: give both j_min and j_max or neither",
                         violations=[("/analysis", "give both j_min and j_max or neither")])
    return ExperimentConfig(body, dict(doc["pointset"]), analysis, dict(doc.get("output", {})),
                            int(doc.get("seed", 0)), float(doc.get("tol", 1e-10)), Path(base_dir))


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


def as_jsonable(x):
    """numpy scalars and arrays to plain Python, recursively."""
    if isinstance(x, dict):
        return {str(k): as_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [as_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return as_jsonable(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x
