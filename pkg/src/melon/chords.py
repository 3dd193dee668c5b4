"""Build arrangement maps from convex chord models.

A chord model lists slots in circular order around the disk boundary; each
slot is either an endpoint of a named chord or a puncture.  Chords are drawn
as straight segments between rational points on the unit circle (parameter
``t`` of ``((1-t²)/(1+t²), 2t/(1+t²))``, strictly increasing with the slot),
so every crossing test, crossing order and rotation order is computed in
exact `fractions.Fraction` arithmetic.  Two chords cross iff their slots
interleave, which depends only on the circular order; the finer data (order
of crossings along a chord, i.e. which empty triangles point which way) may
depend on the chosen parameters, but any two convex realizations differ only
by moves across empty triangles, which never change the watermelon realized.

If a realization degenerates (three chords through a point) the builder
retries with a perturbed parameter schedule; the choice is deterministic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .diskmap import ARC, BOUNDARY, ArrangementMap, make_map, validate_map


@dataclass(frozen=True)
class ChordEnd:
    arc: int


@dataclass(frozen=True)
class Puncture:
    label: int


Slot = Union[ChordEnd, Puncture]


def _point(t: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _ccw_sorted(origin, items):
    """Items = (payload, point); returns payloads in ccw order of direction."""
    def half(q):
        dx, dy = q[0] - origin[0], q[1] - origin[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a[1]), half(b[1])
        if ha != hb:
            return -1 if ha < hb else 1
        c = _cross(origin, a[1], b[1])
        if c == 0:
            raise DegenerateModel("coincident directions at a vertex")
        return -1 if c > 0 else 1

    return [payload for payload, _ in sorted(items, key=functools.cmp_to_key(cmp))]


class DegenerateModel(RuntimeError):
    pass


def empty_disk_map(labels: Sequence[int]) -> ArrangementMap:
    """The arrangement with no arcs: two boundary vertices, two edges."""
    # darts 0,1 inner side (face 0), 2,3 outer; edges (0,2) and (1,3)
    twin = (2, 3, 0, 1)
    succ = (1, 0, 3, 2)
    kinds = (BOUNDARY,) * 4
    arcs: tuple[Optional[int], ...] = (None,) * 4
    return make_map(twin, succ, kinds, arcs, {l: 0 for l in labels}, 0)


def build_from_chords(slots: Sequence[Slot]) -> ArrangementMap:
    """Realize a convex chord model as an arrangement map."""
    for attempt in range(3):
        try:
            return _build(slots, attempt)
        except DegenerateModel:
            if attempt == 2:
                raise
    raise AssertionError("unreachable")


def _build(slots: Sequence[Slot], attempt: int) -> ArrangementMap:
    K = len(slots)
    ts = []
    for k in range(K):
        t = Fraction(k)
        if attempt:
            t += Fraction((k * k + attempt) % 7, 8 + attempt)
        ts.append(t)
    if sorted(ts) != ts or len(set(ts)) != K:
        raise DegenerateModel("parameter schedule not increasing")
    pos = [_point(t) for t in ts]

    end_slots = [k for k, s in enumerate(slots) if isinstance(s, ChordEnd)]
    labels = [s.label for s in slots if isinstance(s, Puncture)]
    if not end_slots:
        return empty_disk_map(labels)

    chord_slots: dict[int, list[int]] = {}
    for k in end_slots:
        chord_slots.setdefault(slots[k].arc, []).append(k)
    for arc, ks in chord_slots.items():
        if len(ks) != 2:
            raise ValueError(f"chord {arc} has {len(ks)} endpoints")

    # crossings: pairs of chords with interleaved slots
    arcs = sorted(chord_slots)
    crossings = []  # (point, arc_a, arc_b)
    per_chord: dict[int, list[tuple[Fraction, int]]] = {a: [] for a in arcs}
    for i, a in enumerate(arcs):
        a0, a1 = chord_slots[a]
        for b in arcs[i + 1:]:
            b0, b1 = chord_slots[b]
            if (a0 < b0 < a1) != (a0 < b1 < a1):
                pa, pb = pos[a0], pos[a1]
                qa, qb = pos[b0], pos[b1]
                den = _cross((0, 0), (pb[0] - pa[0], pb[1] - pa[1]),
                             (qb[0] - qa[0], qb[1] - qa[1]))
                if den == 0:
                    raise DegenerateModel("parallel interleaved chords")
                s = ((qa[0] - pa[0]) * (qb[1] - qa[1])
                     - (qa[1] - pa[1]) * (qb[0] - qa[0])) / den
                r = ((qa[0] - pa[0]) * (pb[1] - pa[1])
                     - (qa[1] - pa[1]) * (pb[0] - pa[0])) / den
                if not (0 < s < 1 and 0 < r < 1):
                    raise DegenerateModel("crossing escaped its segments")
                x = (pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1]))
                idx = len(crossings)
                crossings.append(x)
                per_chord[a].append((s, idx))
                per_chord[b].append((r, idx))

    # vertices: boundary endpoints then crossings
    vertex_pos: list[tuple[Fraction, Fraction]] = []
    bd_vertex: dict[int, int] = {}
    for k in end_slots:
        bd_vertex[k] = len(vertex_pos)
        vertex_pos.append(pos[k])
    x_vertex = []
    for x in crossings:
        x_vertex.append(len(vertex_pos))
        vertex_pos.append(x)

    # edges: (u, v, kind, arc); direction data comes from vertex positions
    edges: list[tuple[int, int, str, Optional[int]]] = []
    # boundary edges between consecutive end slots (punctures ride along)
    edge_labels: dict[int, list[int]] = {}
    for idx, k in enumerate(end_slots):
        nxt = end_slots[(idx + 1) % len(end_slots)]
        e = len(edges)
        edges.append((bd_vertex[k], bd_vertex[nxt], BOUNDARY, None))
        span = (range(k + 1, nxt) if nxt > k
                else list(range(k + 1, K)) + list(range(0, nxt)))
        for j in span:
            if isinstance(slots[j], Puncture):
                edge_labels.setdefault(e, []).append(slots[j].label)
    # chord edges, subdivided at crossings ordered along the chord
    for a in arcs:
        a0, a1 = chord_slots[a]
        stops = [bd_vertex[a0]]
        for _, idx in sorted(per_chord[a]):
            stops.append(x_vertex[idx])
        stops.append(bd_vertex[a1])
        if len(set(stops)) != len(stops):
            raise DegenerateModel(f"coincident crossings along chord {a}")
        for u, v in zip(stops, stops[1:]):
            edges.append((u, v, ARC, a))

    # darts 2e (u→v), 2e+1 (v→u)
    H = 2 * len(edges)
    twin = [0] * H
    kind = [""] * H
    arcid: list[Optional[int]] = [None] * H
    bd_ccw: dict[int, int] = {}   # boundary vertex -> ccw-pointing out-dart
    bd_cw: dict[int, int] = {}
    chord_out: dict[int, list[tuple[int, int]]] = {}  # vertex -> (ccw dist, dart)
    cross_out: dict[int, list[tuple[int, tuple[Fraction, Fraction]]]] = {}
    slot_of_vertex = {v: k for k, v in bd_vertex.items()}
    for e, (u, v, kd, a) in enumerate(edges):
        twin[2 * e], twin[2 * e + 1] = 2 * e + 1, 2 * e
        kind[2 * e] = kind[2 * e + 1] = kd
        arcid[2 * e] = arcid[2 * e + 1] = a
        if kd == BOUNDARY:
            bd_ccw[u] = 2 * e           # boundary edges run counterclockwise
            bd_cw[v] = 2 * e + 1
        else:
            a0, a1 = chord_slots[a]
            for dart, tail, far_slot in ((2 * e, u, None), (2 * e + 1, v, None)):
                if tail in slot_of_vertex:
                    here = slot_of_vertex[tail]
                    far = a1 if here == a0 else a0
                    chord_out.setdefault(tail, []).append(((far - here) % K, dart))
                else:
                    other = v if tail == u else u
                    cross_out.setdefault(tail, []).append((dart, vertex_pos[other]))

    succ = [0] * H

    def wire(rot: Sequence[int]) -> None:
        deg = len(rot)
        for i, d in enumerate(rot):
            # succ = rotation⁻¹ ∘ twin: the face left of twin(d) turns to
            # the dart counterclockwise-before d at this vertex
            succ[twin[d]] = rot[(i - 1) % deg]

    for k in end_slots:
        vtx = bd_vertex[k]
        # ccw rotation: along the boundary counterclockwise, then chords in
        # increasing circular distance of their far endpoint, then back
        rot = [bd_ccw[vtx]]
        rot += [d for _, d in sorted(chord_out.get(vtx, []))]
        rot.append(bd_cw[vtx])
        wire(rot)
    for vtx, items in cross_out.items():
        wire(_ccw_sorted(vertex_pos[vtx], items))

    anchors: dict[int, int] = {}
    for e, ls in edge_labels.items():
        for l in ls:
            anchors[l] = 2 * e  # inner side: u→v runs counterclockwise
    root = 0  # dart of the first boundary edge, inner side
    m = make_map(twin, succ, kind, arcid, anchors, root)
    outcome = validate_map(m)
    if not outcome:
        raise DegenerateModel(f"built map invalid: {outcome.rule}: {outcome.detail}")
    return m


# -- integer slot tables for the two explicit constructions ------------------

def standard_slot_table(n: int) -> list[Slot]:
    """Slots of the standard maximal arrangement on ``n`` punctures.

    Angles in units of a 1/n² turn: puncture ``t`` sits at ``n(t-1)``; the
    chord of the arc named (i,j) runs from ``n(i-1)-(j-i)`` to
    ``n(j-2)+(j-i)``.  Arc ids follow the homology-table column order:
    the n short arcs (i,i+1), (1,n) first, then the rest lexicographically.
    """
    if n < 2:
        raise ValueError("need at least 2 punctures")
    N = n * n
    entries: dict[int, Slot] = {}
    for t in range(1, n + 1):
        entries[(n * (t - 1)) % N] = Puncture(t)
    for aid, (i, j) in enumerate(standard_arc_order(n)):
        d = j - i
        w = (n * (i - 1) - d) % N
        z = (n * (j - 2) + d) % N
        for p in (w, z):
            if p in entries:
                raise AssertionError("slot collision")
        entries[w] = ChordEnd(aid)
        entries[z] = ChordEnd(aid)
    return [entries[p] for p in sorted(entries)]


def standard_arc_order(n: int) -> list[tuple[int, int]]:
    shorts = [(i, i + 1) for i in range(1, n)] + ([(1, n)] if n > 2 else [])
    rest = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
            if (i, j) not in shorts]
    return shorts + rest


def alt_chord_slot_table(n: int) -> tuple[list[Slot], list[tuple[int, str]], dict]:
    """Chord part of the arrangement with n-1 short arcs (n ≥ 4).

    Angle unit: one tick = 1/((n+1)(n-1)²) turn.  The standard arrangement
    on m = n-1 punctures is scaled by (n+1) ticks per 1/m² turn; the extra
    puncture sits at ``n`` ticks, and the n-2 companion chords hug it with
    one endpoint in the cluster 2..n-1 ticks.  Returns (slots, arc names in
    id order, bookkeeping for the bent-arc insertion).
    """
    if n < 4:
        raise ValueError("need at least 4 punctures")
    m = n - 1
    T = (n + 1) * (n - 1) ** 2
    entries: dict[int, Slot] = {}
    for t in range(1, m + 1):
        entries[((t - 1) * (n + 1) * (n - 1)) % T] = Puncture(t)
    entries[n % T] = Puncture(n)

    names: list[tuple[int, str]] = []
    base_ids: dict[tuple[int, int], int] = {}

    def add_chord(w: int, z: int, name: str) -> int:
        aid = len(names)
        names.append((aid, name))
        for p in (w % T, z % T):
            if p in entries:
                raise AssertionError("slot collision")
            entries[p % T] = ChordEnd(aid)
        return aid

    for (i, j) in standard_arc_order(m):
        d = j - i
        w = (m * (i - 1) - d) * (n + 1)
        z = (m * (j - 2) + d) * (n + 1)
        base_ids[(i, j)] = add_chord(w, z, f"{i}_{j}")
    prime_ids: dict[int, int] = {}
    for j in range(3, n):
        prime_ids[j] = add_chord((j - 2) * n * (n + 1) + 1, n + 2 - j, f"2_{j}p")
    prime_ids[n] = add_chord(T - n, 2, f"2_{n}p")

    slots = [entries[p] for p in sorted(entries)]
    # forced crossing set for the bent arc with sides {1,2} | rest
    bent_crosses = {base_ids[(1, 2)]}
    bent_crosses.update(base_ids[(2, j)] for j in range(4, m + 1))
    bent_crosses.update(prime_ids[j] for j in range(3, n))
    info = {"bent_crosses": frozenset(bent_crosses), "bent_name": "1_3p"}
    return slots, names, info
