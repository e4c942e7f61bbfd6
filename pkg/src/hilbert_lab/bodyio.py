"""Reading and writing body specification files (``"format": "hilbert-body/1"``).

Schema::

    {"format": "hilbert-body/1", "dim": 2 | 3, "type": "hpoly", "normals": [[...]], "offsets": [...]}
    {"format": "hilbert-body/1", "dim": 2 | 3, "type": "vpoly", "vertices": [[...]]}
    {"format": "hilbert-body/1", "dim": 2 | 3, "type": "ellipsoid", "center": [...], "shape": [[...]]}
    {"format": "hilbert-body/1", "dim": 2 | 3, "type": "radial", "center": [...],
     "constant": c0, "coefficients": [[k, a_k, b_k], ...] (dim 2) or [[l, m, c_lm], ...] (dim 3),
     "linear": [[...]] (optional)}

``"interior_point"`` is optional for polytopes.
"""

import json
from pathlib import Path

import numpy as np

from .bodies import Ellipsoid, HPolytope, Polytope, RadialBody, VPolytope
from .errors import BodyFormatError, DegenerateBody, DimensionUnsupported
from .radial import FourierRadial, HarmonicRadial

FORMAT = "hilbert-body/1"


def body_from_dict(spec):
    if not isinstance(spec, dict):
        raise BodyFormatError("body specification must be a JSON object")
    fmt = spec.get("format", FORMAT)
    if fmt != FORMAT:
        raise BodyFormatError(f"unsupported format {fmt!r}")
    dim = spec.get("dim")
    if dim not in (2, 3):
        raise DimensionUnsupported(f"dim must be 2 or 3, got {dim!r}")
    kind = spec.get("type")
    try:
        if kind == "hpoly":
            normals = np.asarray(spec["normals"], dtype=float)
            body = HPolytope(normals, spec["offsets"], interior_point=spec.get("interior_point"))
        elif kind == "vpoly":
            body = VPolytope(spec["vertices"], interior_point=spec.get("interior_point"))
        elif kind == "ellipsoid":
            body = Ellipsoid(spec["center"], spec["shape"])
        elif kind == "radial":
            terms = spec.get("coefficients", [])
            radial = FourierRadial(spec["constant"], terms) if dim == 2 else HarmonicRadial(spec["constant"], terms)
            center = spec.get("center", [0.0] * dim)
            body = RadialBody(center, radial, linear=spec.get("linear"))
        else:
            raise BodyFormatError(f"unknown body type {kind!r}")
    except KeyError as exc:
        raise BodyFormatError(f"missing field {exc.args[0]!r} for type {kind!r}") from exc
    except (TypeError, ValueError) as exc:
        raise BodyFormatError(str(exc)) from exc
    if body.dim != dim:
        raise BodyFormatError(f"declared dim {dim} but data has dim {body.dim}")
    return body


def body_to_dict(body):
    out = {"format": FORMAT, "dim": int(body.dim), "type": body.kind}
    if isinstance(body, HPolytope):
        out.update(normals=body.normals.tolist(), offsets=body.offsets.tolist())
    elif isinstance(body, VPolytope):
        out.update(vertices=body.vertices.tolist())
    elif isinstance(body, Ellipsoid):
        out.update(center=body.center.tolist(), shape=body.shape.tolist())
    elif isinstance(body, RadialBody):
        if not hasattr(body.radial, "to_json"):
            raise DegenerateBody("radial body has no serializable radial function")
        out.update(center=body.center.tolist(), linear=body.linear.tolist(), **body.radial.to_json())
    if isinstance(body, Polytope):
        out["interior_point"] = body.interior_point.tolist()
    return out


def load_body(path):
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BodyFormatError(f"{path}: {exc}") from exc
    return body_from_dict(spec)


def save_body(body, path):
    Path(path).write_text(json.dumps(body_to_dict(body), indent=2) + "\n")
