"""Local surgery on arrangement maps.

A :class:`MapBuilder` is the mutable counterpart of an ArrangementMap.  It
supports the edits every higher-level operation is built from:

- ``split_edge`` / ``split_face``: carve a new vertex into an edge, route a
  new edge through a face (the two steps of inserting an arc along a path);
- ``delete_arc``: remove an arc and smooth the degree-2 vertices left over;
- ``smooth_crossing``: replace a crossing by two disjoint strands (the local
  move that removes an empty bigon or empty half-bigon);
- ``triangle_flip``: slide one arc of three pairwise-crossing arcs across the
  opposite crossing, through an empty triangular face.

``settle`` drives these moves to put a map in pairwise minimal position:
empty bigon and half-bigon faces are removed greedily, and when a violation
persists without an exposed bigon/half-bigon face, empty triangles are
flipped (breadth-first with a visited set) until one is exposed.

Every move keeps each arc in its isotopy class: the slid strand only ever
sweeps a region that contains no punctures.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence

from .canonical import canonical_code
from .diskmap import ARC, BOUNDARY, ArrangementMap, make_map, side_mask


class MapBuilder:
    """Mutable dart arrays with tombstones; freeze() compacts and checks."""

    def __init__(self, m: ArrangementMap):
        self.twin = list(m.twin)
        self.succ = list(m.succ)
        self.kind = list(m.edge_kind)
        self.arc = list(m.arc_id)
        self.alive = [True] * m.dart_count
        self.prev = list(m.prev)
        self.anchors: dict[int, int] = {}
        for f, labels in enumerate(m.face_labels):
            for l in labels:
                self.anchors[l] = m.faces[f][0]
        self.root = m.boundary_root

    # -- low-level ----------------------------------------------------------

    def set_succ(self, h: int, s: int) -> None:
        self.succ[h] = s
        self.prev[s] = h

    def new_darts(self, kind: str, arc: Optional[int]) -> tuple[int, int]:
        h = len(self.twin)
        self.twin += [h + 1, h]
        self.succ += [h, h + 1]
        self.prev += [h, h + 1]
        self.kind += [kind, kind]
        self.arc += [arc, arc]
        self.alive += [True, True]
        return h, h + 1

    def kill(self, darts: Iterable[int]) -> None:
        for h in darts:
            self.alive[h] = False

    def face_darts(self, h: int) -> list[int]:
        out = [h]
        g = self.succ[h]
        while g != h:
            out.append(g)
            g = self.succ[g]
        return out

    def face_labels_of(self, h: int) -> list[int]:
        cyc = set(self.face_darts(h))
        return sorted(l for l, a in self.anchors.items() if a in cyc)

    def vertex_darts(self, h: int) -> list[int]:
        """Counterclockwise rotation of out-darts sharing h's tail."""
        out = [h]
        g = self.twin[self.prev[h]]
        while g != h:
            out.append(g)
            g = self.twin[self.prev[g]]
        return out

    def reanchor_off(self, dying: set[int]) -> None:
        for label, a in list(self.anchors.items()):
            if a in dying:
                for d in self.face_darts(a):
                    if d not in dying:
                        self.anchors[label] = d
                        break
                else:
                    raise RuntimeError("no surviving anchor dart in face")

    # -- edits ----------------------------------------------------------------

    def split_edge(self, h: int) -> tuple[int, int]:
        """Subdivide h's edge with a new degree-2 vertex.

        Returns ``(h2, k2)``: h2 continues h's direction from the new vertex,
        k2 continues twin(h)'s.  h keeps its tail, its head becomes the new
        vertex.
        """
        k = self.twin[h]
        h2, k2 = self.new_darts(self.kind[h], self.arc[h])
        self.twin[h], self.twin[k2] = k2, h
        self.twin[h2], self.twin[k] = k, h2
        sh, sk = self.succ[h], self.succ[k]
        self.set_succ(h2, sh)
        self.set_succ(h, h2)
        self.set_succ(k2, sk)
        self.set_succ(k, k2)
        return h2, k2

    def split_face(self, ca: int, cb: int, kind: str, arc: Optional[int],
                   left_labels: Iterable[int]) -> tuple[int, int]:
        """Insert an edge from tail(ca) to tail(cb) across their shared face.

        ``left_labels`` (a subset of the face's labels) move to the side of
        the new dart g, i.e. the new face containing cb; the rest stay with
        the side containing ca.  Returns ``(g, gb)``.
        """
        if ca == cb:
            raise ValueError("cannot split a face at a single corner")
        pa, pb = self.prev[ca], self.prev[cb]
        g, gb = self.new_darts(kind, arc)
        self.set_succ(pa, g)
        self.set_succ(g, cb)
        self.set_succ(pb, gb)
        self.set_succ(gb, ca)
        left = set(left_labels)
        g_side = set(self.face_darts(g))
        for label, a in list(self.anchors.items()):
            in_g = a in g_side
            if label in left and not in_g:
                self.anchors[label] = g
            elif label not in left and in_g:
                self.anchors[label] = gb
        return g, gb

    def remove_edge(self, h: int) -> None:
        k = self.twin[h]
        self.reanchor_off({h, k})
        ph, pk = self.prev[h], self.prev[k]
        sh, sk = self.succ[h], self.succ[k]
        if sh == k and sk == h:
            raise RuntimeError("removing an isolated edge")
        if sh == k:        # dangling head
            self.set_succ(ph, sk)
        elif sk == h:      # dangling tail
            self.set_succ(pk, sh)
        else:
            self.set_succ(ph, sk)
            self.set_succ(pk, sh)
        self.kill((h, k))

    def smooth_vertex(self, d1: int, d2: int) -> None:
        """Merge the two edges at a degree-2 vertex with out-darts d1, d2."""
        t1, t2 = self.twin[d1], self.twin[d2]
        if self.kind[d1] != self.kind[d2] or self.arc[d1] != self.arc[d2]:
            raise RuntimeError("smoothing across distinct edge kinds")
        self.reanchor_off({d1, d2})
        if self.root in (d1, d2):
            self.root = self.prev[self.root]
        s1, s2 = self.succ[d1], self.succ[d2]
        self.twin[t1], self.twin[t2] = t2, t1
        self.set_succ(t1, s2)
        self.set_succ(t2, s1)
        self.kill((d1, d2))

    def smooth_crossing(self, x_out: Sequence[int],
                        pairs: Sequence[tuple[int, int, int]]) -> None:
        """Remove a crossing: ``x_out`` are the four out-darts at the vertex,
        each ``(da, db, arc)`` pair joins da's and db's edges into one edge
        of the given arc id."""
        dying = set(x_out)
        if {d for p in pairs for d in p[:2]} != dying or len(dying) != 4:
            raise ValueError("pairs must partition the four out-darts")
        self.reanchor_off(dying)
        succ_old = {d: self.succ[d] for d in dying}
        for da, db, aid in pairs:
            ta, tb = self.twin[da], self.twin[db]
            self.twin[ta], self.twin[tb] = tb, ta
            self.set_succ(ta, succ_old[db])
            self.set_succ(tb, succ_old[da])
            self.arc[ta] = self.arc[tb] = aid
        self.kill(dying)

    def delete_arc(self, arc: int) -> None:
        darts = [h for h in range(len(self.twin))
                 if self.alive[h] and self.arc[h] == arc]
        edges = sorted({min(h, self.twin[h]) for h in darts})
        for h in edges:
            self.remove_edge(h)

    def triangle_flip(self, cycle: Sequence[int]) -> None:
        """Slide one arc across the opposite crossing of an empty triangle.

        ``cycle`` is the face cycle (u, v, w), all arc darts of three
        distinct arcs."""
        u, v, w = cycle
        internal = {u, v, w, self.twin[u], self.twin[v], self.twin[w]}
        self.reanchor_off(internal)
        rotations = []
        for fd in (v, w, u):  # out-dart at head(u), head(v), head(w)
            rot = self.vertex_darts(fd)
            if len(rot) != 4:
                raise RuntimeError("triangle corner is not a crossing")
            rotations.append(rot)
        # at each corner, swap each external dart for the same arc's other
        # external dart at the neighbouring corner
        ext: dict[int, list[int]] = {}
        for rot in rotations:
            for d in rot:
                if d not in internal:
                    ext.setdefault(self.arc[d], []).append(d)
        swap: dict[int, int] = {}
        for a, (d1, d2) in ext.items():
            swap[d1], swap[d2] = d2, d1
        for rot in rotations:
            new_rot = [swap.get(d, d) for d in rot]
            deg = len(new_rot)
            for i, d in enumerate(new_rot):
                self.set_succ(self.twin[d], new_rot[(i - 1) % deg])

    # -- normalization and freeze ---------------------------------------------

    def normalize(self) -> None:
        """Smooth every degree-2 vertex, keeping at least 2 boundary vertices.

        Smoothing never creates new degree-2 vertices, so one sweep over the
        vertex list suffices.
        """
        info = self._vertices()
        n_boundary = sum(1 for orb in info
                         if any(self.kind[d] == BOUNDARY for d in orb))
        for orb in info:
            if len(orb) != 2:
                continue
            d1, d2 = orb
            if self.kind[d1] == BOUNDARY:
                if n_boundary <= 2:
                    continue
                n_boundary -= 1
            elif self.arc[d1] != self.arc[d2]:
                continue
            self.smooth_vertex(d1, d2)

    def _vertices(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for h in range(len(self.twin)):
            if not self.alive[h] or h in seen:
                continue
            orb = tuple(self.vertex_darts(h))
            seen.update(orb)
            out.append(orb)
        return out

    def freeze(self) -> ArrangementMap:
        self.normalize()
        live = [h for h in range(len(self.twin)) if self.alive[h]]
        remap = {h: i for i, h in enumerate(live)}
        twin = [remap[self.twin[h]] for h in live]
        succ = [remap[self.succ[h]] for h in live]
        kind = [self.kind[h] for h in live]
        arc = [self.arc[h] for h in live]
        anchors = {}
        for label, a in self.anchors.items():
            if not self.alive[a]:
                raise RuntimeError(f"anchor for puncture {label} died")
            anchors[label] = remap[a]
        return make_map(twin, succ, kind, arc, anchors, remap[self.root])


# -- empty-face moves on frozen maps ----------------------------------------

def empty_bigon_faces(m: ArrangementMap) -> list[int]:
    out = []
    for f, cyc in enumerate(m.faces):
        if (f != m.outer_face and len(cyc) == 2 and not m.face_labels[f]
                and all(m.edge_kind[h] == ARC for h in cyc)
                and m.arc_id[cyc[0]] != m.arc_id[cyc[1]]):
            out.append(f)
    return out


def empty_halfbigon_faces(m: ArrangementMap) -> list[int]:
    out = []
    for f, cyc in enumerate(m.faces):
        if f == m.outer_face or len(cyc) != 3 or m.face_labels[f]:
            continue
        kinds = [m.edge_kind[h] for h in cyc]
        if sorted(kinds) != [ARC, ARC, BOUNDARY]:
            continue
        arcs = {m.arc_id[h] for h in cyc if m.arc_id[h] is not None}
        if len(arcs) != 2:
            continue
        if _halfbigon_corner(m, cyc) is not None:
            out.append(f)
    return out


def _halfbigon_corner(m: ArrangementMap, cyc: Sequence[int]) -> Optional[tuple[int, int]]:
    """The consecutive (d, e) arc darts of the cycle meeting at a crossing."""
    k = len(cyc)
    for i in range(k):
        d, e = cyc[i], cyc[(i + 1) % k]
        if m.edge_kind[d] == ARC and m.edge_kind[e] == ARC:
            x = m.vertex_of[e]
            orb = m.vertices[x]
            if len(orb) == 4 and all(m.edge_kind[h] == ARC for h in orb):
                return d, e
    return None


def empty_triangle_faces(m: ArrangementMap) -> list[int]:
    out = []
    for f, cyc in enumerate(m.faces):
        if (f != m.outer_face and len(cyc) == 3 and not m.face_labels[f]
                and all(m.edge_kind[h] == ARC for h in cyc)
                and len({m.arc_id[h] for h in cyc}) == 3):
            out.append(f)
    return out


def apply_halfbigon_move(m: ArrangementMap, face: int) -> ArrangementMap:
    b = MapBuilder(m)
    cyc = m.faces[face]
    d, e = _halfbigon_corner(m, cyc)
    x_out = b.vertex_darts(e)
    td = m.twin[d]                      # F-side dart of d's arc, tail at x
    a, c = m.arc_id[d], m.arc_id[e]
    fa = next(h for h in x_out if m.arc_id[h] == a and h != td)
    fc = next(h for h in x_out if m.arc_id[h] == c and h != e)
    b.smooth_crossing(x_out, [(fa, e, a), (fc, td, c)])
    return b.freeze()


def apply_bigon_move(m: ArrangementMap, face: int) -> ArrangementMap:
    b = MapBuilder(m)
    d, e = m.faces[face]
    a, c = m.arc_id[d], m.arc_id[e]
    td, te = m.twin[d], m.twin[e]
    x_out = b.vertex_darts(d)           # out-darts at tail(d)
    fa_x = next(h for h in x_out if m.arc_id[h] == a and h != d)
    fc_x = next(h for h in x_out if m.arc_id[h] == c and h != te)
    y_out = b.vertex_darts(e)           # out-darts at tail(e) = head(d)
    fa_y = next(h for h in y_out if m.arc_id[h] == a and h != td)
    fc_y = next(h for h in y_out if m.arc_id[h] == c and h != e)
    b.smooth_crossing(x_out, [(fa_x, te, a), (fc_x, d, c)])
    b.smooth_crossing(y_out, [(fa_y, e, a), (fc_y, td, c)])
    return b.freeze()


def apply_triangle_flip(m: ArrangementMap, face: int) -> ArrangementMap:
    b = MapBuilder(m)
    b.triangle_flip(m.faces[face])
    return b.freeze()


# -- settling to pairwise minimal position -----------------------------------

def _pair_violations(m: ArrangementMap) -> bool:
    masks = {a: side_mask(m, a) for a in m.arc_ids}
    for a in m.arc_ids:
        sides = masks[a].side_labels(m)
        if not sides[0] or not sides[1]:
            raise RuntimeError(f"arc {a} became inessential")
    pair_count = dict(m.crossing_pairs)
    arcs = m.arc_ids
    for i, a in enumerate(arcs):
        for c in arcs[i + 1:]:
            k = pair_count.get((a, c), 0)
            if k >= 2:
                return True
            if k == 1:
                quads = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
                for f, labels in enumerate(m.face_labels):
                    if labels and f != m.outer_face:
                        quads[(masks[a].bits[f], masks[c].bits[f])] += len(labels)
                if any(v == 0 for v in quads.values()):
                    return True
    return False


def settle(m: ArrangementMap, max_states: int = 20000) -> ArrangementMap:
    """Drive a map to pairwise minimal position by local empty-face moves."""
    start_key = canonical_code(m, labeled=True)
    queue = deque([m])
    seen = {start_key}
    states = 0
    while queue:
        cur = queue.popleft()
        states += 1
        if states > max_states:
            raise RuntimeError("settle exceeded state budget")
        if not _pair_violations(cur):
            return cur
        bigons = empty_bigon_faces(cur)
        halfs = empty_halfbigon_faces(cur)
        if bigons:
            children = [apply_bigon_move(cur, bigons[0])]
        elif halfs:
            children = [apply_halfbigon_move(cur, halfs[0])]
        else:
            tris = empty_triangle_faces(cur)
            if not tris:
                raise RuntimeError("violations remain but no local move applies")
            children = [apply_triangle_flip(cur, f) for f in tris]
        for child in children:
            key = canonical_code(child, labeled=True)
            if key not in seen:
                seen.add(key)
                queue.append(child)
    raise RuntimeError("settle search exhausted without reaching minimal position")
