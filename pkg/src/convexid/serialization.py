"""JSON form of bodies, maps and certificates.

Body files are JSON objects with a ``type`` key:

* ``vpolytope``: ``vertices`` (list of points)
* ``ellipsoid``: ``center``, ``shape`` (the body is ``shape @ D + center``)
* ``ball``: ``center``, ``radius``
* ``reuleaux``: optional ``width`` (2), ``m`` (360), ``center`` ([0, 0])
* ``ellipsoid_params``: ``R``, ``r``, ``delta`` and optional ``n`` (2)
"""
from __future__ import annotations

import json

import numpy as np

from .bodies import Body, Ellipsoid, EllipsoidParams, VPolytope, ball, polytope, reuleaux
from .errors import InvalidParams
from .projective import FLMap


def body_to_dict(K: Body) -> dict:
    if isinstance(K, VPolytope):
        return {"type": "vpolytope", "vertices": K.vertices.tolist()}
    if isinstance(K, Ellipsoid):
        return {"type": "ellipsoid", "center": K.center.tolist(), "shape": K.shape.tolist()}
    raise InvalidParams(f"cannot serialize {type(K).__name__}")


def body_from_dict(data) -> Body:
    if not isinstance(data, dict) or "type" not in data:
        raise InvalidParams("body JSON must be an object with a 'type' key")
    kind = data["type"]
    try:
        if kind == "vpolytope":
            return polytope(np.asarray(data["vertices"], dtype=float))
        if kind == "ellipsoid":
            return Ellipsoid(np.asarray(data["center"], dtype=float), np.asarray(data["shape"], dtype=float))
        if kind == "ball":
            return ball(data["center"], float(data["radius"]))
        if kind == "reuleaux":
            return reuleaux(float(data.get("width", 2.0)), int(data.get("m", 360)), data.get("center", (0.0, 0.0)))
        if kind == "ellipsoid_params":
            p = EllipsoidParams(float(data["R"]), float(data["r"]), float(data["delta"]))
            return p.ellipsoid(int(data.get("n", 2)))
    except KeyError as exc:
        raise InvalidParams(f"body of type {kind!r} is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f"malformed {kind!r} body: {exc}") from None
    raise InvalidParams(f"unknown body type {kind!r}")


def load_body(path) -> Body:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"{path}: invalid JSON ({exc})") from None
    return body_from_dict(data)


def dump_body(K: Body, path) -> None:
    with open(path, "w") as fh:
        json.dump(body_to_dict(K), fh)


def flmap_from_json(text: str) -> FLMap:
    return FLMap.from_dict(json.loads(text))
