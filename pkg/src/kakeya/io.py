"""JSON and OBJ serialization of bodies, rotations and reports."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geometry import HPolytope, Rotation, Segment, VPolytope


def body_to_json(body) -> dict:
    if isinstance(body, HPolytope):
        return {"dim": body.dim,
                "hrep": [{"normal": n.tolist(), "offset": float(b)}
                         for n, b in zip(body.normals, body.offsets)]}
    if isinstance(body, VPolytope):
        return {"dim": body.dim, "vrep": body.vertices.tolist()}
    if isinstance(body, Segment):
        return {"segment": {"base": body.base.tolist(), "dir": body.direction.tolist(),
                            "len": float(body.length)}}
    raise TypeError(f"cannot serialize {type(body).__name__}")


def body_from_json(obj: dict):
    if "segment" in obj:
        s = obj["segment"]
        return Segment(s["base"], s["dir"], float(s.get("len", 1.0)))
    if "hrep" in obj:
        body = HPolytope.from_halfspaces([(h["normal"], h["offset"]) for h in obj["hrep"]])
    elif "vrep" in obj:
        body = VPolytope(obj["vrep"])
    else:
        raise ValueError("body JSON needs one of 'hrep', 'vrep', 'segment'")
    if "dim" in obj and int(obj["dim"]) != body.dim:
        raise ValueError(f"declared dim {obj['dim']} does not match data dim {body.dim}")
    return body


def load_body(path):
    return body_from_json(json.loads(Path(path).read_text()))


def save_body(body, path) -> None:
    Path(path).write_text(json.dumps(body_to_json(body), indent=1))


def rotation_from_json(obj: dict) -> Rotation:
    """Accepts {"matrix": [[...]]}, {"angle": a} (planar) or {"axis": [...], "angle": a}."""
    if "matrix" in obj:
        return Rotation(np.array(obj["matrix"], dtype=float))
    if "axis" in obj:
        return Rotation.axis_angle(obj["axis"], float(obj["angle"]))
    if "angle" in obj:
        return Rotation.planar(float(obj["angle"]))
    raise ValueError("rotation JSON needs 'matrix', 'angle' or 'axis'+'angle'")


def load_rotation(path) -> Rotation:
    return rotation_from_json(json.loads(Path(path).read_text()))


def to_jsonable(x):
    """Recursively convert numpy values so json.dumps accepts them."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return x


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(to_jsonable(obj), indent=1))


def write_obj(points, facets, path) -> None:
    """Wavefront OBJ mesh with 1-based triangle indices."""
    lines = [f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in np.asarray(points)]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in np.asarray(facets)]
    Path(path).write_text("\n".join(lines) + "\n")
