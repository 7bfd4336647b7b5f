"""Versioned JSON schemas: geometry, post parameters, fields, reports.

All documents carry {"version": 1, "kind": ...}; unknown fields are
rejected so that typos fail loudly.
"""

import json

import numpy as np

from .complex import Polyhedron, TruncationSpec, build_truncated
from .errors import SchemaError
from .field import DirectorField, Resolution, SampledDirectorPatch, sample_edge
from .generators import make_generator
from .geometry import director_distance, normalize
from .post import build_post_domain

GEOMETRY_KEYS = {"version", "kind", "vertices", "faces", "epsilon", "tol_planar"}
POST_KEYS = {"version", "kind", "w", "d", "h", "H", "mode", "epsilon"}
FIELD_KEYS = {"version", "kind", "generator", "params", "sampled"}


def _check_keys(doc, allowed, what):
    if not isinstance(doc, dict):
        raise SchemaError(f"{what}: expected a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise SchemaError(f"{what}: unknown fields {sorted(unknown)}")
    if doc.get("version") != 1:
        raise SchemaError(f"{what}: unsupported version {doc.get('version')!r}")


def load_geometry(doc):
    """{"version":1, "kind":"polyhedron", "vertices":[[x,y,z]..],
    "faces":[[i,j,k,..]..], "epsilon": number | [per-vertex]}"""
    _check_keys(doc, GEOMETRY_KEYS, "geometry")
    if doc.get("kind") != "polyhedron":
        raise SchemaError(f"geometry: kind must be 'polyhedron', got {doc.get('kind')!r}")
    try:
        p = Polyhedron(doc["vertices"], doc["faces"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"geometry: {exc}") from exc
    spec = None
    if "epsilon" in doc:
        eps = doc["epsilon"]
        spec = TruncationSpec(np.asarray(eps, float) if isinstance(eps, list) else float(eps))
    return build_truncated(p, spec, tol_planar=doc.get("tol_planar"))


def load_post_params(doc):
    """{"version":1, "kind":"post_params", "w","d","h","H","mode","epsilon"}"""
    _check_keys(doc, POST_KEYS, "post_params")
    if doc.get("kind") != "post_params":
        raise SchemaError("post_params: kind must be 'post_params'")
    try:
        return build_post_domain(
            float(doc["w"]), float(doc["d"]), float(doc["h"]), float(doc["H"]),
            str(doc["mode"]), float(doc["epsilon"]),
        )
    except KeyError as exc:
        raise SchemaError(f"post_params: missing field {exc}") from exc


def load_field(doc, domain, res=None):
    """Either {"generator": name, "params": {...}} or
    {"sampled": {"cells": {cell_id: [[x,y,z], ...]}, "params": {cell_id:
    [t, ...]}}} for 1-cells. Sampled data must satisfy the angle bound."""
    _check_keys(doc, FIELD_KEYS, "field")
    if doc.get("kind") != "field":
        raise SchemaError("field: kind must be 'field'")
    if ("generator" in doc) == ("sampled" in doc):
        raise SchemaError("field: provide exactly one of 'generator' or 'sampled'")
    if "generator" in doc:
        try:
            return make_generator(domain, doc)
        except KeyError as exc:
            raise SchemaError(f"field: {exc}") from exc
    return _sampled_field(doc["sampled"], domain, res or Resolution())


def _sampled_field(spec, domain, res):
    """Per-1-cell sample arrays with linear sign-aligned interpolation."""
    if not isinstance(spec, dict) or "cells" not in spec:
        raise SchemaError("field.sampled: expected {'cells': {...}, 'params': {...}}")
    cells = spec["cells"]
    params = spec.get("params", {})
    tables = {}
    from .complex import TangentComplex
    from .post import PostDomain

    lookup = domain.cell if isinstance(domain, PostDomain) else domain.cell
    for cell_id, arr in cells.items():
        vals = np.asarray(arr, float)
        if vals.ndim != 2 or vals.shape[1] != 3:
            raise SchemaError(f"field.sampled: {cell_id}: expected an (n,3) array")
        vals = normalize(vals)
        ts = np.asarray(
            params.get(cell_id, np.linspace(0.0, 1.0, len(vals))), float
        )
        if len(ts) != len(vals) or np.any(np.diff(ts) <= 0):
            raise SchemaError(f"field.sampled: {cell_id}: bad parameter grid")
        dots = np.abs(np.einsum("ij,ij->i", vals[:-1], vals[1:]))
        if np.any(np.arccos(np.clip(dots, -1, 1)) > res.theta_max):
            raise SchemaError(
                f"field.sampled: {cell_id}: consecutive samples exceed the "
                "angle bound"
            )
        tables[cell_id] = (ts, vals)

    def fn(cell_id, pts):
        if cell_id not in tables:
            raise SchemaError(f"sampled field has no data for {cell_id}")
        ts, vals = tables[cell_id]
        cell = lookup(cell_id)
        pts = np.atleast_2d(pts)
        # recover the chart parameter by projecting onto the cell chart
        ref = cell.chart(ts)
        out = np.zeros((len(pts), 3))
        for k, p in enumerate(pts):
            i = int(np.argmin(np.linalg.norm(ref - p, axis=1)))
            lo = max(0, i - 1)
            hi = min(len(ts) - 1, i + 1)
            seg = np.linalg.norm(ref[hi] - ref[lo])
            lam = 0.0 if seg == 0 else float(
                np.clip(np.dot(p - ref[lo], ref[hi] - ref[lo]) / seg**2, 0, 1)
            )
            a, b = vals[lo], vals[hi]
            if float(np.dot(a, b)) < 0:
                b = -b
            out[k] = normalize((1 - lam) * a + lam * b)
        return out

    return DirectorField(fn, name="sampled", params={"cells": sorted(tables)})


def read_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def write_json(doc, path=None):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
