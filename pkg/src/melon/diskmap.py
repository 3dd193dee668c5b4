"""Half-edge maps of arc arrangements on a punctured disk.

An arrangement of pairwise-transverse embedded arcs (endpoints on the
boundary) in a disk with labelled interior punctures is stored as a
combinatorial map:

- an even set of darts (directed half-edges) ``0..H-1``;
- ``twin``, a fixed-point-free involution pairing the two darts of each edge;
- ``succ``, a permutation giving the successor dart counterclockwise around
  the face lying to the left of each dart.

Faces are the orbits of ``succ``; vertices are the orbits of
``twin ∘ succ⁻¹`` (all darts sharing a tail).  Every edge is either a
``boundary`` edge or an ``arc`` segment carrying an arc id.  The boundary
edges form a single cycle.  Puncture labels live on faces.  A distinguished
dart ``boundary_root`` lies on the inner side of a boundary edge and fixes
the counterclockwise orientation: the face of ``twin(boundary_root)`` is the
outer face and must be empty.

Everything here is an immutable value; all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

BOUNDARY = "boundary"
ARC = "arc"


class MalformedMapError(ValueError):
    """Raised when twin/succ are not permutations of the expected shape."""


@dataclass(frozen=True)
class ValidationOutcome:
    """Result of :func:`validate_map`.

    ``ok`` is True iff every structural invariant holds.  On failure,
    ``rule`` names the first violated invariant and ``detail`` points at the
    offending dart / face / arc.  ``malformed`` distinguishes broken
    permutation data from topological violations.
    """

    ok: bool
    rule: Optional[str] = None
    detail: Optional[str] = None
    malformed: bool = False

    def __bool__(self) -> bool:
        return self.ok


def _orbits(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = perm[h]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True, eq=True)
class ArrangementMap:
    """Combinatorial map of an arc arrangement on a punctured disk.

    ``face_labels[i]`` is the sorted tuple of puncture labels carried by the
    i-th face, where faces are the orbits of ``succ`` sorted by smallest
    dart.
    """

    twin: tuple[int, ...]
    succ: tuple[int, ...]
    edge_kind: tuple[str, ...]
    arc_id: tuple[Optional[int], ...]
    face_labels: tuple[tuple[int, ...], ...]
    boundary_root: int

    # -- derived structure -------------------------------------------------

    @cached_property
    def dart_count(self) -> int:
        return len(self.twin)

    @cached_property
    def prev(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for h, s in enumerate(self.succ):
            out[s] = h
        return tuple(out)

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(_orbits(self.succ), key=min))

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for i, cyc in enumerate(self.faces):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @cached_property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        # vertex permutation: twin ∘ prev, orbits = darts sharing a tail
        perm = [self.twin[self.prev[h]] for h in range(self.dart_count)]
        return tuple(sorted(_orbits(perm), key=min))

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for i, orb in enumerate(self.vertices):
            for h in orb:
                out[h] = i
        return tuple(out)

    @cached_property
    def outer_face(self) -> int:
        return self.face_of[self.twin[self.boundary_root]]

    @cached_property
    def arc_ids(self) -> tuple[int, ...]:
        return tuple(sorted({a for a in self.arc_id if a is not None}))

    @cached_property
    def puncture_labels(self) -> tuple[int, ...]:
        return tuple(sorted(l for labels in self.face_labels for l in labels))

    @cached_property
    def label_face(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, labels in enumerate(self.face_labels):
            for l in labels:
                out[l] = i
        return out

    @cached_property
    def crossing_pairs(self) -> dict[tuple[int, int], int]:
        """Number of interior crossings per unordered arc pair."""
        counts: dict[tuple[int, int], int] = {}
        for orb in self.vertices:
            if len(orb) == 4 and all(self.edge_kind[h] == ARC for h in orb):
                a, b = self.arc_id[orb[0]], self.arc_id[orb[1]]
                key = (min(a, b), max(a, b))
                counts[key] = counts.get(key, 0) + 1
        return counts

    def arc_darts(self, arc: int) -> tuple[int, ...]:
        return tuple(h for h in range(self.dart_count) if self.arc_id[h] == arc)

    def arc_segments(self, arc: int) -> tuple[int, ...]:
        """Darts of ``arc`` ordered along the arc, endpoint to endpoint.

        The walk starts at the boundary endpoint carrying the smaller dart
        index, which makes the result deterministic.
        """
        darts = self.arc_darts(arc)
        if not darts:
            raise KeyError(f"unknown arc {arc}")
        at_vertex: dict[int, list[int]] = {}
        for h in darts:
            at_vertex.setdefault(self.vertex_of[h], []).append(h)
        ends = [h for h in darts if len(at_vertex[self.vertex_of[h]]) == 1]
        start = min(ends)
        path = [start]
        h = start
        while True:
            head = self.vertex_of[self.twin[h]]
            outgoing = [d for d in at_vertex.get(head, []) if d != self.twin[h]]
            if not outgoing:
                break
            h = outgoing[0]
            path.append(h)
        return tuple(path)

    def __hash__(self) -> int:
        return hash((self.twin, self.succ, self.edge_kind, self.arc_id,
                     self.face_labels, self.boundary_root))


def make_map(twin: Sequence[int], succ: Sequence[int],
             edge_kind: Sequence[str], arc_id: Sequence[Optional[int]],
             label_anchor: Mapping[int, int], boundary_root: int) -> ArrangementMap:
    """Assemble an :class:`ArrangementMap`, resolving puncture anchors.

    ``label_anchor`` sends each puncture label to a dart whose face carries
    it.  Face indices and the ``face_labels`` table are derived here.
    """
    m = ArrangementMap(tuple(twin), tuple(succ), tuple(edge_kind),
                       tuple(arc_id), (), boundary_root)
    per_face: dict[int, list[int]] = {}
    for label, dart in label_anchor.items():
        per_face.setdefault(m.face_of[dart], []).append(label)
    face_labels = tuple(tuple(sorted(per_face.get(i, ()))) for i in range(len(m.faces)))
    return ArrangementMap(m.twin, m.succ, m.edge_kind, m.arc_id,
                          face_labels, boundary_root)


# -- validation -------------------------------------------------------------

def validate_map(m: ArrangementMap) -> ValidationOutcome:
    """Check every structural invariant of an arrangement map.

    Malformed permutation data (twin not a fixed-point-free involution,
    succ not a bijection, kind/arc tables inconsistent across twins) is
    reported with ``malformed=True``; topological violations (degrees,
    boundary cycle, Euler characteristic, arc connectivity, puncture
    placement) with ``malformed=False``.
    """
    H = m.dart_count
    if H == 0 or H % 2:
        return ValidationOutcome(False, "malformed-permutation", f"dart count {H}", True)
    if (len(m.succ) != H or len(m.edge_kind) != H or len(m.arc_id) != H):
        return ValidationOutcome(False, "malformed-permutation", "array length mismatch", True)
    for h in range(H):
        t = m.twin[h]
        if not 0 <= t < H or m.twin[t] != h or t == h:
            return ValidationOutcome(False, "malformed-permutation",
                                     f"twin broken at dart {h}", True)
    if sorted(m.succ) != list(range(H)):
        return ValidationOutcome(False, "malformed-permutation", "succ is not a bijection", True)
    for h in range(H):
        if m.edge_kind[h] not in (BOUNDARY, ARC):
            return ValidationOutcome(False, "malformed-permutation",
                                     f"unknown edge kind at dart {h}", True)
        if m.edge_kind[h] != m.edge_kind[m.twin[h]]:
            return ValidationOutcome(False, "malformed-permutation",
                                     f"edge kind differs across twin at dart {h}", True)
        has_arc = m.arc_id[h] is not None
        if has_arc != (m.edge_kind[h] == ARC) or m.arc_id[h] != m.arc_id[m.twin[h]]:
            return ValidationOutcome(False, "malformed-permutation",
                                     f"arc id inconsistent at dart {h}", True)
    if not 0 <= m.boundary_root < H or m.edge_kind[m.boundary_root] != BOUNDARY:
        return ValidationOutcome(False, "malformed-permutation",
                                 "boundary_root is not a boundary dart", True)

    # connectivity: one orbit under the group generated by succ and twin
    seen = {0}
    stack = [0]
    while stack:
        h = stack.pop()
        for nb in (m.succ[h], m.twin[h]):
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != H:
        return ValidationOutcome(False, "disconnected", f"{H - len(seen)} darts unreachable")

    # vertex degrees and kinds
    for orb in m.vertices:
        kinds = [m.edge_kind[h] for h in orb]
        n_bd = kinds.count(BOUNDARY)
        if n_bd == 0:
            if len(orb) != 4:
                return ValidationOutcome(False, "bad-vertex-degree",
                                         f"interior vertex {orb} has degree {len(orb)}")
            ids = [m.arc_id[h] for h in orb]
            if ids[0] != ids[2] or ids[1] != ids[3] or ids[0] == ids[1]:
                return ValidationOutcome(False, "bad-crossing",
                                         f"arc ids do not alternate at {orb}")
        elif n_bd == 2:
            if len(orb) not in (2, 3):
                return ValidationOutcome(False, "bad-vertex-degree",
                                         f"boundary vertex {orb} has degree {len(orb)}")
        else:
            return ValidationOutcome(False, "bad-vertex-degree",
                                     f"vertex {orb} has {n_bd} boundary darts")

    # boundary forms a single cycle: outer face = all outer-side boundary darts
    outer = m.faces[m.outer_face]
    n_boundary_edges = sum(1 for h in range(H) if m.edge_kind[h] == BOUNDARY) // 2
    if any(m.edge_kind[h] != BOUNDARY for h in outer) or len(outer) != n_boundary_edges:
        return ValidationOutcome(False, "boundary-not-a-cycle",
                                 f"outer face {m.outer_face} does not close the boundary")
    if m.face_of[m.boundary_root] == m.outer_face:
        return ValidationOutcome(False, "boundary-not-a-cycle",
                                 "boundary_root lies on the outer side")

    # Euler characteristic of the closed-up map (disk + outer face = sphere)
    V, E, F = len(m.vertices), H // 2, len(m.faces)
    if V - E + F != 2:
        return ValidationOutcome(False, "euler", f"V-E+F = {V - E + F}")

    # arcs are simple boundary-to-boundary paths
    for arc in m.arc_ids:
        darts = m.arc_darts(arc)
        at_vertex: dict[int, list[int]] = {}
        for h in darts:
            at_vertex.setdefault(m.vertex_of[h], []).append(h)
        ends = [v for v, ds in at_vertex.items() if len(ds) == 1]
        if len(ends) != 2:
            return ValidationOutcome(False, "arc-not-a-path",
                                     f"arc {arc} has {len(ends)} endpoints")
        try:
            seg = m.arc_segments(arc)
        except KeyError:
            return ValidationOutcome(False, "arc-not-a-path", f"arc {arc} empty")
        if len(seg) != len(darts) // 2:
            return ValidationOutcome(False, "arc-not-a-path",
                                     f"arc {arc} is not connected")
        visited = [m.vertex_of[h] for h in seg] + [m.vertex_of[m.twin[seg[-1]]]]
        if len(set(visited)) != len(visited):
            return ValidationOutcome(False, "arc-not-a-path",
                                     f"arc {arc} revisits a vertex")

    # punctures: each label on exactly one face, outer face empty
    if len(m.face_labels) != len(m.faces):
        return ValidationOutcome(False, "puncture-placement", "face table size mismatch")
    labels = [l for labels in m.face_labels for l in labels]
    if len(labels) != len(set(labels)):
        return ValidationOutcome(False, "puncture-placement", "duplicate puncture label")
    if m.face_labels[m.outer_face]:
        return ValidationOutcome(False, "puncture-placement", "outer face holds punctures")
    return ValidationOutcome(True)


# -- side masks -------------------------------------------------------------

@dataclass(frozen=True)
class SideMask:
    """Two-coloring of the inner faces by complement component of one arc.

    ``bits[f]`` is 0 or 1 for inner faces and ``None`` for the outer face.
    Faces adjacent across a segment of the chosen arc get opposite bits;
    faces adjacent across any other edge get equal bits.  The face of the
    boundary root gets bit 0.
    """

    arc: int
    bits: tuple[Optional[int], ...]

    def side_labels(self, m: ArrangementMap) -> tuple[frozenset[int], frozenset[int]]:
        zero, one = set(), set()
        for f, labels in enumerate(m.face_labels):
            if not labels:
                continue
            (zero if self.bits[f] == 0 else one).update(labels)
        return frozenset(zero), frozenset(one)


def side_mask(m: ArrangementMap, arc: int) -> SideMask:
    """Color inner faces by the two complement components of ``arc``."""
    if arc not in m.arc_ids:
        raise KeyError(f"unknown arc {arc}")
    nf = len(m.faces)
    bits: list[Optional[int]] = [None] * nf
    root = m.face_of[m.boundary_root]
    bits[root] = 0
    stack = [root]
    while stack:
        f = stack.pop()
        for h in m.faces[f]:
            if m.edge_kind[h] == BOUNDARY:
                continue
            g = m.face_of[m.twin[h]]
            if g == m.outer_face:
                continue
            b = bits[f] ^ (1 if m.arc_id[h] == arc else 0)
            if bits[g] is None:
                bits[g] = b
                stack.append(g)
            elif bits[g] != b:
                raise RuntimeError(f"arc {arc} does not separate the disk")
    if any(b is None for f, b in enumerate(bits) if f != m.outer_face):
        raise RuntimeError("inner faces are not connected")
    return SideMask(arc, tuple(bits))
