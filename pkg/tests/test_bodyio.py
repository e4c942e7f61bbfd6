import json
from pathlib import Path

import numpy as np
import pytest

from hilbert_lab.bodies import Ellipsoid, HPolytope, RadialBody, VPolytope, hausdorff_distance
from hilbert_lab.bodyio import body_from_dict, body_to_dict, load_body, save_body
from hilbert_lab.errors import BodyFormatError, DimensionUnsupported

BODY_DIR = Path(__file__).resolve().parent.parent / "bodies"


@pytest.mark.parametrize("path", sorted(BODY_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_sample_bodies_load_and_round_trip(path, tmp_path):
    body = load_body(path)
    assert body.contains(body.interior_point[None, :])[0]
    out = tmp_path / path.name
    save_body(body, out)
    again = load_body(out)
    assert type(again) is type(body)
    assert hausdorff_distance(body, again) < 1e-12


def test_kinds():
    assert isinstance(body_from_dict({"dim": 2, "type": "hpoly", "normals": [[1, 0], [0, 1], [-1, -1]],
                                      "offsets": [1, 1, 1]}), HPolytope)
    assert isinstance(body_from_dict({"dim": 2, "type": "vpoly", "vertices": [[0, 0], [1, 0], [0, 1]]}), VPolytope)
    e = body_from_dict({"dim": 2, "type": "ellipsoid", "center": [0, 0], "shape": [[0.25, 0], [0, 1]]})
    assert isinstance(e, Ellipsoid)
    np.testing.assert_allclose(sorted(e.semi_axes), [1.0, 2.0])
    r = body_from_dict({"dim": 3, "type": "radial", "constant": 1.0, "coefficients": [[2, 0, 0.05]]})
    assert isinstance(r, RadialBody) and r.dim == 3


@pytest.mark.parametrize("spec, err", [
    ([1, 2], BodyFormatError),
    ({"format": "other/1", "dim": 2, "type": "vpoly", "vertices": [[0, 0], [1, 0], [0, 1]]}, BodyFormatError),
    ({"dim": 4, "type": "vpoly", "vertices": [[0, 0, 0, 0]]}, DimensionUnsupported),
    ({"dim": 2, "type": "blob"}, BodyFormatError),
    ({"dim": 2, "type": "hpoly", "normals": [[1, 0]]}, BodyFormatError),
    ({"dim": 3, "type": "vpoly", "vertices": [[0, 0], [1, 0], [0, 1]]}, BodyFormatError),
    ({"dim": 2, "type": "ellipsoid", "center": [0, 0], "shape": "round"}, BodyFormatError),
], ids=["not-object", "format", "dim", "type", "missing-field", "dim-mismatch", "bad-value"])
def test_format_errors(spec, err):
    with pytest.raises(err):
        body_from_dict(spec)


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(BodyFormatError):
        load_body(p)


def test_to_dict_is_json():
    d = body_to_dict(Ellipsoid.axes([2.0, 1.0]))
    assert json.loads(json.dumps(d))["type"] == "ellipsoid"
