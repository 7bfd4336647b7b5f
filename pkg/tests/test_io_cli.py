import json

import numpy as np
import pytest

from nematic_topo.cli import main
from nematic_topo.errors import SchemaError
from nematic_topo.io import load_field, load_geometry, load_post_params


CUBE_DOC = {
    "version": 1,
    "kind": "polyhedron",
    "vertices": [
        [-0.5, -0.5, -0.5], [0.5, -0.5, -0.5], [0.5, 0.5, -0.5], [-0.5, 0.5, -0.5],
        [-0.5, -0.5, 0.5], [0.5, -0.5, 0.5], [0.5, 0.5, 0.5], [-0.5, 0.5, 0.5],
    ],
    "faces": [
        [0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4],
        [2, 3, 7, 6], [1, 2, 6, 5], [0, 4, 7, 3],
    ],
    "epsilon": 0.1,
}

POST_DOC = {
    "version": 1, "kind": "post_params",
    "w": 0.3, "d": 0.3, "h": 0.5, "H": 1.0, "mode": "T", "epsilon": 0.05,
}

BASE_FIELD = {"version": 1, "kind": "field",
              "generator": "tangent_base", "params": {}}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_geometry_roundtrip():
    cx = load_geometry(CUBE_DOC)
    assert cx.counts()["cleaved_edges"] == 24


def test_unknown_fields_rejected():
    bad = dict(CUBE_DOC)
    bad["extra"] = 1
    with pytest.raises(SchemaError):
        load_geometry(bad)
    with pytest.raises(SchemaError):
        load_post_params({**POST_DOC, "tilt": 2})
    with pytest.raises(SchemaError):
        load_field({"version": 1, "kind": "field"}, load_geometry(CUBE_DOC))


def test_bad_version_rejected():
    with pytest.raises(SchemaError):
        load_geometry({**CUBE_DOC, "version": 2})


def test_sampled_field_loading():
    cx = load_geometry(CUBE_DOC)
    te = cx.edge_ids()[0]
    doc = {
        "version": 1, "kind": "field",
        "sampled": {"cells": {te: [[1, 0, 0], [1, 0, 0], [1, 0, 0]]}},
    }
    f = load_field(doc, cx)
    cell = cx.truncated_edges[te]
    v = f.evaluate(te, cell.chart(np.array([0.25])))
    assert np.allclose(np.abs(v @ np.array([1.0, 0, 0])), 1.0)


def test_sampled_field_angle_bound_rejected():
    cx = load_geometry(CUBE_DOC)
    te = cx.edge_ids()[0]
    doc = {
        "version": 1, "kind": "field",
        "sampled": {"cells": {te: [[1, 0, 0], [0, 1, 0]]}},
    }
    with pytest.raises(SchemaError):
        load_field(doc, cx)


def test_cli_validate(tmp_path, capsys):
    geo = write(tmp_path, "cube.json", CUBE_DOC)
    good = write(tmp_path, "base.json", BASE_FIELD)
    assert main(["validate", "--geometry", geo, "--field", good]) == 0
    tilted = write(tmp_path, "tilted.json", {
        "version": 1, "kind": "field",
        "generator": "uniform", "params": {"dir": [1, 0, 0]},
    })
    assert main(["validate", "--geometry", geo, "--field", tilted]) == 1
    bad = tmp_path / "broken.json"
    bad.write_text("{nope")
    assert main(["validate", "--geometry", str(bad), "--field", good]) == 2


def test_cli_compare(tmp_path, capsys):
    geo = write(tmp_path, "cube.json", CUBE_DOC)
    base = write(tmp_path, "base.json", BASE_FIELD)
    twist = write(tmp_path, "twist.json", {
        "version": 1, "kind": "field",
        "generator": "edge_twist",
        "params": {"base": BASE_FIELD, "face": "tf:f0",
                   "arc1": "ce:v0:tf:f0", "arc2": "ce:v2:tf:f0", "n": 2},
    })
    out = tmp_path / "report.json"
    code = main(["compare", "--geometry", geo, "--field", base, "--field", base,
                 "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "Homotopic"

    code = main(["compare", "--geometry", geo, "--field", base, "--field", twist,
                 "--out", str(out)])
    assert code == 1
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "DistinguishedByD1"
    # determinism: byte-identical reports for identical runs
    first = out.read_text()
    main(["compare", "--geometry", geo, "--field", base, "--field", twist,
          "--out", str(out)])
    assert out.read_text() == first


def test_cli_compare_invalid_field(tmp_path):
    geo = write(tmp_path, "cube.json", CUBE_DOC)
    base = write(tmp_path, "base.json", BASE_FIELD)
    tilted = write(tmp_path, "tilted.json", {
        "version": 1, "kind": "field",
        "generator": "uniform", "params": {"dir": [0, 0, 1]},
    })
    assert main(["compare", "--geometry", geo, "--field", base,
                 "--field", tilted]) == 2


def test_cli_post(tmp_path):
    params = write(tmp_path, "post.json", POST_DOC)
    base = write(tmp_path, "base.json", {
        "version": 1, "kind": "field", "generator": "post_base", "params": {},
    })
    rotor = write(tmp_path, "rotor.json", {
        "version": 1, "kind": "field",
        "generator": "cell_rotor",
        "params": {"alpha": 1, "base": {"generator": "post_base", "params": {}}},
    })
    assert main(["post", "--post-params", params, "--field", base,
                 "--field", base, "--mode", "T", "--grid", "24"]) == 0
    assert main(["post", "--post-params", params, "--field", base,
                 "--field", rotor, "--mode", "T", "--grid", "24"]) == 1
    # mode omitted: usage error
    assert main(["post", "--post-params", params, "--field", base,
                 "--field", base]) == 2


def test_cli_catalog(tmp_path):
    geo = write(tmp_path, "cube.json", CUBE_DOC)
    base = write(tmp_path, "base.json", BASE_FIELD)
    twist = write(tmp_path, "twist.json", {
        "version": 1, "kind": "field",
        "generator": "edge_twist",
        "params": {"base": BASE_FIELD, "face": "tf:f0",
                   "arc1": "ce:v0:tf:f0", "arc2": "ce:v2:tf:f0", "n": 2},
    })
    out = tmp_path / "atlas.json"
    code = main(["catalog", "--geometry", geo, "--field", base, "--field", twist,
                 "--field", base, "--out", str(out)])
    assert code == 0
    atlas = json.loads(out.read_text())
    assert atlas["classes"] == [[0, 2], [1]]


def test_cli_field_count_enforced(tmp_path):
    geo = write(tmp_path, "cube.json", CUBE_DOC)
    base = write(tmp_path, "base.json", BASE_FIELD)
    assert main(["compare", "--geometry", geo, "--field", base]) == 2
