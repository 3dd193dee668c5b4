"""Watermelons: 1-systems of arcs on a punctured disk.

A watermelon is a validated arrangement map together with its indexed arc
set.  Validity means every arc is essential (both complementary sides hold a
puncture), arcs pairwise cross at most once, once-crossing pairs leave a
puncture in each of the four regions of the disk they cut (no half-bigon),
and disjoint pairs induce distinct puncture bipartitions (no isotopic pair).

This module provides the validity report, the bipartition map, short arcs,
the two explicit maximal constructions, arc insertion enumeration,
P-parallelism, P-reduction, saturation and maximality tests, and the
flip-normalized canonical key used to compare watermelons up to equivalence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import chords
from .canonical import canonical_code
from .diskmap import (ARC, BOUNDARY, ArrangementMap, MalformedMapError,
                      SideMask, side_mask, validate_map)
from .surgery import MapBuilder, apply_triangle_flip, empty_triangle_faces, settle


@dataclass(frozen=True)
class SurfaceSpec:
    """A disk with n ≥ 2 labelled punctures 1..n."""

    n_punctures: int

    def __post_init__(self):
        if self.n_punctures < 2:
            raise ValueError("a watermelon needs at least 2 punctures")

    @property
    def puncture_labels(self) -> tuple[int, ...]:
        return tuple(range(1, self.n_punctures + 1))


@dataclass(frozen=True)
class Bipartition:
    """Unordered nontrivial 2-partition of the puncture labels."""

    sides: tuple[frozenset[int], frozenset[int]]

    @staticmethod
    def of(a: Iterable[int], b: Iterable[int]) -> "Bipartition":
        fa, fb = frozenset(a), frozenset(b)
        if not fa or not fb or fa & fb:
            raise ValueError("sides must be disjoint and nonempty")
        key = lambda s: (len(s), sorted(s))
        lo, hi = sorted((fa, fb), key=key)
        return Bipartition((lo, hi))

    def side_with(self, label: int) -> frozenset[int]:
        return self.sides[0] if label in self.sides[0] else self.sides[1]

    def drop(self, label: int) -> Optional["Bipartition"]:
        """The partition after filling ``label``; None if a side empties."""
        a, b = (s - {label} for s in self.sides)
        if not a or not b:
            return None
        return Bipartition.of(a, b)

    def interleaves(self, other: "Bipartition") -> bool:
        a0, a1 = self.sides
        b0, b1 = other.sides
        return all(s & t for s in (a0, a1) for t in (b0, b1))


@dataclass(frozen=True)
class Arc:
    id: int
    name: str
    segments: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    verdict: str                                  # "valid" | "invalid"
    violations: tuple[tuple[str, tuple], ...]

    def __bool__(self) -> bool:
        return self.verdict == "valid"


@dataclass(frozen=True)
class Watermelon:
    spec: SurfaceSpec
    map: ArrangementMap
    arc_names: tuple[tuple[int, str], ...]

    @property
    def n(self) -> int:
        return self.spec.n_punctures

    @property
    def arc_ids(self) -> tuple[int, ...]:
        return self.map.arc_ids

    @property
    def arcs(self) -> tuple[Arc, ...]:
        names = dict(self.arc_names)
        return tuple(Arc(a, names.get(a, str(a)), self.map.arc_segments(a))
                     for a in self.arc_ids)

    def name_of(self, arc: int) -> str:
        return dict(self.arc_names).get(arc, str(arc))

    @staticmethod
    def from_map(m: ArrangementMap,
                 names: Optional[Sequence[tuple[int, str]]] = None) -> "Watermelon":
        labels = m.puncture_labels
        n = len(labels)
        if labels != tuple(range(1, n + 1)):
            raise ValueError(f"puncture labels must be 1..n, got {labels}")
        names = tuple(names) if names is not None else tuple()
        return Watermelon(SurfaceSpec(n), m, names)


# -- bipartitions and validity ------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _mask(m: ArrangementMap, arc: int) -> SideMask:
    return side_mask(m, arc)


@lru_cache(maxsize=1 << 16)
def _par_of_map(m: ArrangementMap, arc: int) -> Bipartition:
    zero, one = _mask(m, arc).side_labels(m)
    return Bipartition.of(zero, one)


def par(w: Watermelon, arc: int) -> Bipartition:
    """The bipartition of puncture labels induced by the two sides of an arc."""
    if arc not in w.arc_ids:
        raise KeyError(f"unknown arc {arc}")
    return _par_of_map(w.map, arc)


def validate_watermelon(w: Watermelon) -> ValidationReport:
    """Check the 1-system rules; returns a report, raising only for
    structurally malformed maps."""
    mo = validate_map(w.map)
    if mo.malformed:
        raise MalformedMapError(f"{mo.rule}: {mo.detail}")
    if not mo.ok:
        return ValidationReport("invalid", (("map-defect", (mo.rule, mo.detail)),))
    labels = w.map.puncture_labels
    if labels != tuple(range(1, w.n + 1)):
        return ValidationReport("invalid", (("map-defect", ("labels", labels)),))

    violations: list[tuple[str, tuple]] = []
    sides = {}
    for a in w.arc_ids:
        zero, one = _mask(w.map, a).side_labels(w.map)
        sides[a] = (zero, one)
        if not zero or not one:
            violations.append(("inessential-arc", (a,)))
    crossings = w.map.crossing_pairs
    pars = {a: Bipartition.of(*sides[a]) for a in w.arc_ids
            if sides[a][0] and sides[a][1]}
    for a, c in itertools.combinations(w.arc_ids, 2):
        if a not in pars or c not in pars:
            continue
        k = crossings.get((a, c), 0)
        if k >= 2:
            violations.append(("excess-crossing", (a, c)))
        elif k == 1:
            if not pars[a].interleaves(pars[c]):
                violations.append(("half-bigon", (a, c)))
        else:
            if pars[a] == pars[c]:
                violations.append(("isotopic-pair", (a, c)))
    verdict = "valid" if not violations else "invalid"
    return ValidationReport(verdict, tuple(violations))


@lru_cache(maxsize=1 << 16)
def _valid(w: Watermelon) -> bool:
    return bool(validate_watermelon(w))


def is_valid(w: Watermelon) -> bool:
    return _valid(w)


def short_arcs(w: Watermelon) -> tuple[tuple[int, int], ...]:
    """Arcs one of whose sides is a single puncture, with the isolated label.

    With two punctures both sides are singletons and the smaller label is
    reported.
    """
    out = []
    for a in w.arc_ids:
        p = par(w, a)
        small = p.sides[0]
        if len(small) == 1:
            out.append((a, min(small)))
    return tuple(out)


# -- canonical keys up to watermelon equivalence ------------------------------

@lru_cache(maxsize=1 << 14)
def _flip_orbit(m: ArrangementMap) -> tuple[ArrangementMap, ...]:
    """All maps reachable by sliding arcs across empty triangles.

    Maps in one orbit realize the same watermelon: the slid strand sweeps a
    puncture-free triangle, so every arc keeps its isotopy class.
    """
    seen = {canonical_code(m, labeled=True): m}
    queue = [m]
    while queue:
        cur = queue.pop()
        for f in empty_triangle_faces(cur):
            child = apply_triangle_flip(cur, f)
            key = canonical_code(child, labeled=True)
            if key not in seen:
                if len(seen) > 2000:
                    raise RuntimeError("triangle-flip orbit too large")
                seen[key] = child
                queue.append(child)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=1 << 16)
def canonical_key(w: Watermelon, labeled: bool = False,
                  allow_reflection: bool = False) -> str:
    """Canonical code minimized over the triangle-flip orbit: equal keys iff
    equal watermelons up to (label-preserving when ``labeled``) equivalence."""
    return min(canonical_code(m, labeled, allow_reflection)
               for m in _flip_orbit(w.map))


# -- explicit constructions ----------------------------------------------------

@lru_cache(maxsize=None)
def empty_watermelon(n: int) -> Watermelon:
    if n < 2:
        raise ValueError("need at least 2 punctures")
    return Watermelon.from_map(chords.empty_disk_map(range(1, n + 1)))


@lru_cache(maxsize=None)
def standard_watermelon(n: int) -> Watermelon:
    """The maximal watermelon with n short arcs: all consecutive-block
    bipartitions, arcs indexed in homology-table column order."""
    if n < 2:
        raise ValueError("need at least 2 punctures")
    m = chords.build_from_chords(chords.standard_slot_table(n))
    names = tuple((aid, f"{i}_{j}")
                  for aid, (i, j) in enumerate(chords.standard_arc_order(n)))
    w = Watermelon.from_map(m, names)
    report = validate_watermelon(w)
    if not report:
        raise RuntimeError(f"standard construction invalid: {report.violations}")
    return w


@lru_cache(maxsize=None)
def alt_watermelon(n: int) -> Watermelon:
    """The maximal watermelon with exactly n-1 short arcs (n ≥ 4): the
    standard arrangement on n-1 punctures, an extra puncture hugged by n-2
    companion chords, plus one bent arc separating punctures {1, 2}."""
    if n < 4:
        raise ValueError("need at least 4 punctures")
    slots, names, info = chords.alt_chord_slot_table(n)
    m = chords.build_from_chords(slots)
    w = Watermelon.from_map(m, tuple(names))
    report = validate_watermelon(w)
    if not report:
        raise RuntimeError(f"companion chords invalid: {report.violations}")
    side = frozenset({1, 2})
    target = _forced_crossings(w, side)
    if target != info["bent_crosses"]:
        raise RuntimeError("bent-arc crossing set does not match its derivation")
    cands = _insertion_candidates(w, side, info["bent_name"], first_only=True)
    if not cands:
        raise RuntimeError("no valid route for the bent arc")
    w2 = cands[0]
    if len(short_arcs(w2)) != n - 1 or not is_maximal(w2):
        raise RuntimeError("bent-arc insertion broke the construction")
    return w2


# -- insertion enumeration ------------------------------------------------------

def _forced_crossings(w: Watermelon, side: frozenset[int]) -> frozenset[int]:
    comp = frozenset(range(1, w.n + 1)) - side
    cand = Bipartition.of(side, comp)
    return frozenset(a for a in w.arc_ids if par(w, a).interleaves(cand))


def _candidate_sides(n: int) -> list[frozenset[int]]:
    labels = list(range(2, n + 1))
    out = []
    for r in range(0, n - 1):
        for extra in itertools.combinations(labels, r):
            out.append(frozenset({1, *extra}))
    return out


def _insertion_paths(m: ArrangementMap, target: frozenset[int],
                     max_paths: int = 200000):
    """Yield (entry, crossed-dart path, exit, variant) normal-path specs
    crossing exactly the ``target`` arcs, in deterministic order."""
    inner_bd = [h for h in range(m.dart_count)
                if m.edge_kind[h] == BOUNDARY and m.face_of[h] != m.outer_face]
    bd_by_face: dict[int, list[int]] = {}
    for h in inner_bd:
        bd_by_face.setdefault(m.face_of[h], []).append(h)
    budget = [max_paths]

    def dfs(entry: int, face: int, crossed: frozenset[int], path: tuple[int, ...]):
        if budget[0] <= 0:
            raise RuntimeError("insertion path search budget exceeded")
        budget[0] -= 1
        if crossed == target:
            for exit_dart in bd_by_face.get(face, ()):
                if exit_dart == entry:
                    yield entry, path, exit_dart, 0
                    yield entry, path, exit_dart, 1
                else:
                    yield entry, path, exit_dart, -1
        for d in m.faces[face]:
            a = m.arc_id[d]
            if a is not None and a in target and a not in crossed:
                yield from dfs(entry, m.face_of[m.twin[d]], crossed | {a},
                               path + (d,))

    for entry in inner_bd:
        yield from dfs(entry, m.face_of[entry], frozenset(), ())


def _insertion_candidates(w: Watermelon, side: frozenset[int],
                          name: Optional[str] = None,
                          first_only: bool = False) -> list[Watermelon]:
    """All watermelons w ∪ {new arc} with the new arc separating ``side``
    from its complement, deduplicated by labeled canonical code.  With
    ``first_only`` the search stops at the first realizable candidate."""
    comp = frozenset(range(1, w.n + 1)) - side
    target_partition = Bipartition.of(side, comp)
    if any(par(w, a) == target_partition for a in w.arc_ids):
        return []
    target = _forced_crossings(w, side)
    new_id = max(w.arc_ids, default=-1) + 1
    new_name = name if name is not None else f"x{new_id}"

    results: dict[str, Watermelon] = {}
    for entry, path, exit_dart, variant in _insertion_paths(w.map, target):
        child = _execute_insertion(w, side, entry, path, exit_dart, variant,
                                   new_id, new_name)
        if child is None:
            continue
        if first_only:
            return [child]
        key = canonical_code(child.map, labeled=True)
        if key not in results:
            results[key] = child
    return [results[k] for k in sorted(results)]


def _execute_insertion(w: Watermelon, side: frozenset[int], entry: int,
                       path: Sequence[int], exit_dart: int, variant: int,
                       new_id: int, new_name: str) -> Optional[Watermelon]:
    b = MapBuilder(w.map)
    entry_after, _ = b.split_edge(entry)
    corner = entry_after

    def face_and_labels(c: int) -> tuple[list[int], list[int]]:
        cyc = b.face_darts(c)
        in_face = set(cyc)
        labels = [l for l, a in b.anchors.items() if a in in_face]
        return cyc, labels

    for d in path:
        cyc, labels = face_and_labels(corner)
        if d not in cyc:
            return None
        left = [l for l in labels if l in side]
        d2, k2 = b.split_edge(d)
        b.split_face(corner, d2, ARC, new_id, left)
        corner = k2
    cyc, labels = face_and_labels(corner)
    if variant == -1:
        live_exit = exit_dart
    else:
        # same boundary edge as the entry: variant 0 exits through the stub
        # before the entry point, variant 1 through the stub after it
        live_exit = exit_dart if variant == 0 else entry_after
    if live_exit not in cyc:
        return None
    left = [l for l in labels if l in side]
    e2, _ = b.split_edge(live_exit)
    b.split_face(corner, e2, ARC, new_id, left)
    m2 = b.freeze()

    # realized side must be exactly the requested bipartition
    try:
        zero, one = _mask(m2, new_id).side_labels(m2)
    except (RuntimeError, KeyError):
        return None
    if not zero or not one:
        return None
    if Bipartition.of(zero, one) != Bipartition.of(side, frozenset(range(1, w.n + 1)) - side):
        return None
    # targeted validity: quadrant rule against each crossed arc
    for (a, c), k in m2.crossing_pairs.items():
        if new_id not in (a, c):
            continue
        other = a if c == new_id else c
        if k != 1:
            return None
        if not _par_of_map(m2, new_id).interleaves(_par_of_map(m2, other)):
            return None
    child = Watermelon(SurfaceSpec(w.n), m2, w.arc_names + ((new_id, new_name),))
    return child


def enumerate_insertions(w: Watermelon) -> list[Watermelon]:
    """Every valid single-arc extension, deduplicated by labeled canonical
    key and sorted by it."""
    results: dict[str, Watermelon] = {}
    for side in _candidate_sides(w.n):
        for child in _insertion_candidates(w, side):
            key = canonical_code(child.map, labeled=True)
            results.setdefault(key, child)
    return [results[k] for k in sorted(results)]


def is_saturated(w: Watermelon) -> bool:
    """True iff no arc can be added."""
    for side in _candidate_sides(w.n):
        if _insertion_candidates(w, side):
            return False
    return True


def is_maximal(w: Watermelon) -> bool:
    """True iff the watermelon is valid with the full n(n-1)/2 arcs."""
    return len(w.arc_ids) == w.n * (w.n - 1) // 2 and is_valid(w)


# -- deletion, P-parallelism, P-reduction --------------------------------------

def delete_arc(w: Watermelon, arc: int) -> Watermelon:
    if arc not in w.arc_ids:
        raise KeyError(f"unknown arc {arc}")
    b = MapBuilder(w.map)
    b.delete_arc(arc)
    names = tuple((a, nm) for a, nm in w.arc_names if a != arc)
    return Watermelon(w.spec, b.freeze(), names)


def p_parallel_classes(w: Watermelon, p: int) -> tuple[tuple[tuple[int, ...], ...],
                                                       frozenset[int]]:
    """Partition of the arcs by isotopy after filling puncture ``p``.

    Returns (classes, discarded): discarded arcs isolate exactly {p} and
    become boundary-parallel; the remaining arcs are P-parallel iff their
    bipartitions agree after deleting p.  Classes come back sorted, each of
    size at most 2 with disjoint members (anything else is impossible for a
    valid watermelon and raises).
    """
    if w.n < 3:
        raise ValueError("need at least 3 punctures to fill one")
    if p not in range(1, w.n + 1):
        raise KeyError(f"unknown puncture {p}")
    if not is_valid(w):
        raise ValueError("watermelon is not valid")
    discarded = set()
    groups: dict[Bipartition, list[int]] = {}
    for a in w.arc_ids:
        reduced = par(w, a).drop(p)
        if reduced is None:
            discarded.add(a)
        else:
            groups.setdefault(reduced, []).append(a)
    classes = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    crossings = w.map.crossing_pairs
    for g in classes:
        if len(g) > 2:
            raise RuntimeError(f"more than two arcs parallel after filling: {g}")
        if len(g) == 2 and crossings.get((g[0], g[1]), 0):
            raise RuntimeError(f"parallel arcs {g} are not disjoint")
    return classes, frozenset(discarded)


def p_reduce(w: Watermelon, p: int) -> Watermelon:
    """Fill puncture ``p``: drop boundary-parallel arcs, keep the lowest-id
    representative of each parallel class, restore minimal position, and
    relabel punctures order-preservingly to 1..n-1."""
    classes, discarded = p_parallel_classes(w, p)
    b = MapBuilder(w.map)
    doomed = set(discarded)
    for g in classes:
        doomed.update(g[1:])
    for a in sorted(doomed):
        b.delete_arc(a)
    del b.anchors[p]
    m = settle(b.freeze())
    mapping = {old: new for new, old in
               enumerate((l for l in range(1, w.n + 1) if l != p), start=1)}
    m = _relabel(m, mapping)
    names = tuple((a, nm) for a, nm in w.arc_names if a not in doomed)
    out = Watermelon(SurfaceSpec(w.n - 1), m, names)
    report = validate_watermelon(out)
    if not report:
        raise RuntimeError(f"reduction produced an invalid watermelon: {report.violations}")
    return out


def _relabel(m: ArrangementMap, mapping: dict[int, int]) -> ArrangementMap:
    face_labels = tuple(tuple(sorted(mapping[l] for l in labels))
                        for labels in m.face_labels)
    return ArrangementMap(m.twin, m.succ, m.edge_kind, m.arc_id,
                          face_labels, m.boundary_root)
