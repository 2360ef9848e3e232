"""JSON (de)serialization of bodies, hyperplanes, and step functions.

Body JSON:        {"n": int, "vertices": [[...], ...]}
                  or {"box": {"lo": [...], "hi": [...]}}
Hyperplane JSON:  {"normal": [...], "offset": r}
Step function:    {"n": int, "pieces": [{"weight": r, "region": <body>}]}
"""
from __future__ import annotations

import numpy as np

from . import geom
from .functrans import StepFunction
from .geom import Hyperplane, Polytope


class ParseError(Exception):
    pass


def body_from_dict(obj) -> Polytope:
    if not isinstance(obj, dict):
        raise ParseError("body must be a JSON object")
    if "box" in obj:
        box = obj["box"]
        try:
            return geom.box_polytope(box["lo"], box["hi"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad box description: {exc}") from exc
    try:
        n = int(obj["n"])
        verts = np.asarray(obj["vertices"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad body description: {exc}") from exc
    if verts.ndim != 2 or verts.shape[1] != n:
        raise ParseError("vertex rows must match the declared dimension")
    return geom.convex_hull(verts)


def body_to_dict(P: Polytope) -> dict:
    if P.box is not None:
        lo, hi = P.box
        return {"box": {"lo": lo.tolist(), "hi": hi.tolist()}}
    return {"n": P.n, "vertices": P.vertices.tolist()}


def hyperplane_from_dict(obj) -> Hyperplane:
    try:
        return Hyperplane(obj["normal"], float(obj["offset"]))
    except (KeyError, TypeError, ValueError, geom.GeometryError) as exc:
        raise ParseError(f"bad hyperplane description: {exc}") from exc


def hyperplane_to_dict(H: Hyperplane) -> dict:
    return {"normal": H.normal.tolist(), "offset": H.offset}


def step_from_dict(obj) -> StepFunction:
    try:
        n = int(obj["n"])
        pieces = [
            (float(p["weight"]), body_from_dict(p["region"])) for p in obj["pieces"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad step-function description: {exc}") from exc
    return StepFunction.build(pieces, n)


def step_to_dict(f: StepFunction) -> dict:
    return {
        "n": f.n,
        "pieces": [{"weight": w, "region": body_to_dict(E)} for w, E in f.pieces],
    }
