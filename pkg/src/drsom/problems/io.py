"""Versioned JSON instance files.

Files carry the generator parameters (seed included) and the complete
instance data, so a benchmark can be replayed without the RNG. Floats are
written with ``repr`` precision and round-trip exactly.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Union

import numpy as np

from ..objective import Objective
from .classic import CLASSIC
from .lp import LpInstance, lp_objective
from .snl import SnlInstance, snl_objective

FORMAT = "drsom-instance"
VERSION = 1


def _arr(a) -> list:
    return np.asarray(a).tolist()


def instance_to_dict(inst) -> dict:
    if isinstance(inst, LpInstance):
        params = {"n": inst.A.shape[0], "m": inst.A.shape[1], "r": inst.r, "p": inst.p, "eps": inst.eps, "seed": inst.seed}
        data = {"A": _arr(inst.A), "b": _arr(inst.b), "lam": inst.lam, "p": inst.p, "eps": inst.eps}
        if inst.v_true is not None:
            data["v_true"] = _arr(inst.v_true)
        kind = "lp"
    elif isinstance(inst, SnlInstance):
        params = {
            "n": inst.n_sensors + inst.anchors.shape[0],
            "m": inst.anchors.shape[0],
            "rd": inst.radio_range,
            "nf": inst.noise,
            "seed": inst.seed,
        }
        data = {
            "anchors": _arr(inst.anchors),
            "sensor_edges": _arr(inst.sensor_edges),
            "sensor_dist": _arr(inst.sensor_dist),
            "anchor_edges": _arr(inst.anchor_edges),
            "anchor_dist": _arr(inst.anchor_dist),
            "n_sensors": inst.n_sensors,
        }
        if inst.truth is not None:
            data["truth"] = _arr(inst.truth)
        kind = "snl"
    elif isinstance(inst, dict) and inst.get("kind") == "classic":
        return {"format": FORMAT, "version": VERSION, "kind": "classic", "params": dict(inst["params"]), "data": {}}
    else:
        raise TypeError(f"cannot serialize {type(inst).__name__}")
    return {"format": FORMAT, "version": VERSION, "kind": kind, "params": params, "data": data}


def instance_from_dict(doc: dict):
    if doc.get("format") != FORMAT:
        raise ValueError("not a drsom instance file")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported instance version {doc.get('version')}")
    kind, params, data = doc["kind"], doc["params"], doc["data"]
    if kind == "lp":
        return LpInstance(
            A=np.array(data["A"], dtype=float),
            b=np.array(data["b"], dtype=float),
            lam=float(data["lam"]),
            p=float(data["p"]),
            eps=float(data["eps"]),
            seed=params.get("seed"),
            v_true=np.array(data["v_true"]) if "v_true" in data else None,
            r=params.get("r"),
        )
    if kind == "snl":
        return SnlInstance(
            anchors=np.array(data["anchors"], dtype=float).reshape(-1, 2),
            sensor_edges=np.array(data["sensor_edges"], dtype=int).reshape(-1, 2),
            sensor_dist=np.array(data["sensor_dist"], dtype=float),
            anchor_edges=np.array(data["anchor_edges"], dtype=int).reshape(-1, 2),
            anchor_dist=np.array(data["anchor_dist"], dtype=float),
            n_sensors=int(data["n_sensors"]),
            truth=np.array(data["truth"], dtype=float) if "truth" in data else None,
            seed=params.get("seed"),
            radio_range=params.get("rd"),
            noise=params.get("nf"),
        )
    if kind == "classic":
        return {"kind": "classic", "params": dict(params)}
    raise ValueError(f"unknown instance kind {kind!r}")


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def save_instance(inst, path: Union[str, Path]) -> str:
    doc = instance_to_dict(inst)
    Path(path).write_text(canonical_json(doc))
    return digest(doc)


def load_instance(path: Union[str, Path]):
    doc = json.loads(Path(path).read_text())
    return instance_from_dict(doc), digest(doc)


def classic_objective(params: dict) -> Objective:
    params = dict(params)
    name = params.pop("name")
    if name not in CLASSIC:
        raise ValueError(f"unknown classic problem {name!r}; choose from {sorted(CLASSIC)}")
    return CLASSIC[name](**params)


def objective_for(inst) -> Objective:
    if isinstance(inst, LpInstance):
        return lp_objective(inst)
    if isinstance(inst, SnlInstance):
        return snl_objective(inst)
    if isinstance(inst, dict) and inst.get("kind") == "classic":
        return classic_objective(inst["params"])
    raise TypeError(f"no objective for {type(inst).__name__}")
