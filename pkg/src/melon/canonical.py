"""Canonical codes for arrangement maps.

Two valid maps get equal codes iff they are related by an orientation
preserving homeomorphism of the disk (boundary to boundary) matching face
puncture data — puncture counts per face when ``labeled`` is False, exact
label sets when True.  With ``allow_reflection`` the code is additionally
mirror invariant.

The code is the lexicographic minimum, over all inner boundary darts taken
as root (and over the mirrored map when allowed), of a breadth-first
traversal trace.  The trace records, per visited dart, references for its
``succ`` and ``twin`` neighbours (index if already seen, -1 if new), then
edge kinds and arc-id first-occurrence ranks in visit order, then face data
keyed by the smallest visit index in each face.
"""

from __future__ import annotations

from .diskmap import ARC, BOUNDARY, ArrangementMap


def mirrored(m: ArrangementMap) -> ArrangementMap:
    """The same arrangement with the reversed orientation.

    Reversal inverts every face cycle; orbits (hence the face table) are
    unchanged as sets, so all decorations carry over verbatim.
    """
    H = m.dart_count
    inv = [0] * H
    for h, s in enumerate(m.succ):
        inv[s] = h
    return ArrangementMap(m.twin, tuple(inv), m.edge_kind, m.arc_id,
                          m.face_labels, m.boundary_root)


def _trace(m: ArrangementMap, root: int, labeled: bool) -> tuple:
    index = {root: 0}
    order = [root]
    rec: list[int] = []
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for nb in (m.succ[h], m.twin[h]):
            j = index.get(nb)
            if j is None:
                index[nb] = len(order)
                order.append(nb)
                rec.append(-1)
            else:
                rec.append(j)
    arc_rank: dict[int, int] = {}
    dec: list[int] = []
    for h in order:
        if m.edge_kind[h] == BOUNDARY:
            dec.append(-1)
        else:
            a = m.arc_id[h]
            if a not in arc_rank:
                arc_rank[a] = len(arc_rank)
            dec.append(arc_rank[a])
    face_keys = []
    for f, cyc in enumerate(m.faces):
        key = min(index[h] for h in cyc)
        data = m.face_labels[f] if labeled else (len(m.face_labels[f]),)
        face_keys.append((key, data))
    face_keys.sort()
    return (tuple(rec), tuple(dec), tuple(face_keys))


def _roots(m: ArrangementMap) -> list[int]:
    return [h for h in range(m.dart_count)
            if m.edge_kind[h] == BOUNDARY and m.face_of[h] != m.outer_face]


def canonical_code(m: ArrangementMap, labeled: bool = False,
                   allow_reflection: bool = False) -> str:
    """Canonical string invariant of a map under dart renumbering and
    root choice (and puncture relabeling when ``labeled`` is False)."""
    variants = [m] + ([mirrored(m)] if allow_reflection else [])
    best = None
    for mv in variants:
        for r in _roots(mv):
            t = _trace(mv, r, labeled)
            if best is None or t < best:
                best = t
    rec, dec, faces = best
    parts = [
        f"v1;h{m.dart_count};l{int(labeled)};r{int(allow_reflection)}",
        ".".join(str(x) for x in rec),
        ".".join(str(x) for x in dec),
        ";".join(f"{k}:" + ",".join(str(x) for x in data) for k, data in faces),
    ]
    return "|".join(parts)


def maps_isomorphic(m1: ArrangementMap, m2: ArrangementMap,
                    labeled: bool = False) -> bool:
    """Direct root-matching isomorphism search, independent of the trace
    encoding: try every root of ``m2`` against a fixed root of ``m1`` and
    walk both maps in lockstep."""
    if m1.dart_count != m2.dart_count:
        return False
    roots1 = _roots(m1)
    if not roots1:
        return False
    r1 = roots1[0]
    for r2 in _roots(m2):
        if _lockstep(m1, r1, m2, r2, labeled):
            return True
    return False


def _lockstep(m1: ArrangementMap, r1: int, m2: ArrangementMap, r2: int,
              labeled: bool) -> bool:
    phi = {r1: r2}
    order = [r1]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for f1, f2 in ((m1.succ, m2.succ), (m1.twin, m2.twin)):
            a, b = f1[h], f2[phi[h]]
            if a in phi:
                if phi[a] != b:
                    return False
            elif b in phi.values():
                return False
            else:
                phi[a] = b
                order.append(a)
    arc_map: dict[int, int] = {}
    for h, g in phi.items():
        if m1.edge_kind[h] != m2.edge_kind[g]:
            return False
        a1, a2 = m1.arc_id[h], m2.arc_id[g]
        if (a1 is None) != (a2 is None):
            return False
        if a1 is not None:
            if arc_map.setdefault(a1, a2) != a2:
                return False
    for h, g in phi.items():
        d1 = m1.face_labels[m1.face_of[h]]
        d2 = m2.face_labels[m2.face_of[g]]
        if labeled:
            if d1 != d2:
                return False
        elif len(d1) != len(d2):
            return False
    return True
