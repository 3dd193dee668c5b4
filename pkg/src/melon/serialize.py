"""JSON and CSV encodings.

The map schema is the wire format for everything else: arrays ``twin``,
``next``, ``edge_kind``, ``arc_id`` indexed by dart, object ``faces``
mapping face index to the sorted puncture list, and ``boundary_root``.
Watermelon files add ``n`` and an ``arcs`` array (id, display name, ordered
dart list).  Round-trips are bit-exact.
"""

from __future__ import annotations

import json
from typing import Any

from .diskmap import ArrangementMap
from .homology import (CANONICAL, HomologyTable, HomologyVector,
                       InequivalenceCertificate)
from .melons import SurfaceSpec, Watermelon


def json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- arrangement maps -------------------------------------------------------

def map_to_obj(m: ArrangementMap) -> dict:
    return {
        "twin": list(m.twin),
        "next": list(m.succ),
        "edge_kind": list(m.edge_kind),
        "arc_id": list(m.arc_id),
        "faces": {str(i): list(labels) for i, labels in enumerate(m.face_labels)},
        "boundary_root": m.boundary_root,
    }


def map_from_obj(obj: dict) -> ArrangementMap:
    twin = tuple(obj["twin"])
    succ = tuple(obj["next"])
    kind = tuple(obj["edge_kind"])
    arc = tuple(obj["arc_id"])
    probe = ArrangementMap(twin, succ, kind, arc, (), obj["boundary_root"])
    nfaces = len(probe.faces)
    keys = sorted(obj["faces"], key=int)
    if keys != [str(i) for i in range(nfaces)]:
        raise ValueError(f"face table keys {keys} do not match {nfaces} faces")
    face_labels = tuple(tuple(sorted(obj["faces"][str(i)])) for i in range(nfaces))
    return ArrangementMap(twin, succ, kind, arc, face_labels, obj["boundary_root"])


# -- watermelons -------------------------------------------------------------

def watermelon_to_obj(w: Watermelon) -> dict:
    obj = map_to_obj(w.map)
    obj["n"] = w.n
    obj["arcs"] = [{"id": a.id, "name": a.name, "segments": list(a.segments)}
                   for a in w.arcs]
    return obj


def watermelon_from_obj(obj: dict) -> Watermelon:
    m = map_from_obj(obj)
    names = tuple((entry["id"], entry["name"]) for entry in obj["arcs"])
    w = Watermelon(SurfaceSpec(obj["n"]), m, names)
    declared = {entry["id"]: tuple(entry["segments"]) for entry in obj["arcs"]}
    derived = {a: m.arc_segments(a) for a in m.arc_ids}
    if declared != derived:
        raise ValueError("arc segment lists do not match the map")
    return w


# -- homology tables ----------------------------------------------------------

def table_to_obj(t: HomologyTable) -> dict:
    return {
        "n": t.n,
        "columns": [{"label": label, "bits": "".join(map(str, v.bits))}
                    for label, v in t.columns],
    }


def table_from_obj(obj: dict) -> HomologyTable:
    cols = tuple((c["label"], HomologyVector(tuple(int(b) for b in c["bits"]),
                                             CANONICAL))
                 for c in obj["columns"])
    return HomologyTable(obj["n"], cols)


def table_to_csv(t: HomologyTable) -> str:
    lines = ["," + ",".join(t.labels)]
    for row in range(t.n + 1):
        cells = [str(v.bits[row]) for _, v in t.columns]
        lines.append(f"g_{row}," + ",".join(cells))
    return "\n".join(lines) + "\n"


# -- certificates ---------------------------------------------------------------

def certificate_to_obj(c: InequivalenceCertificate) -> dict:
    return {
        "n": c.n,
        "profile_a": list(c.profile_a),
        "profile_b": list(c.profile_b),
        "distinguishing_value": c.distinguishing_value,
        "transforms_tried": c.transforms_tried,
    }
