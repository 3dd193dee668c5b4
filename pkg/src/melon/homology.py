"""Mod-2 homology tables of complete 1-systems of loops.

A watermelon on n punctures corresponds to a marked complete 1-system of
loops on the once-crosscapped surface obtained by identifying antipodal
boundary points.  Homology with Z/2 coefficients has generators g₀..g_n
(boundary class and one horocycle per puncture) with the single relation
g₁+⋯+g_n = 0, so each loop has exactly two coefficient vectors
(ε₀,…,ε_n), flipped in positions 1..n; the canonical one has ε_n = 0.
Every loop of a maximal system is 1-sided, so ε₀ = 1 throughout.

The mapping classes act on tables by swapping rows among g₁..g_n (half
twists) and adding the g₀ row to a g_i row (puncture slides).  The
homological difference δ₂ and the relative-short-loop counts #S(γ) are
invariant, which powers the inequivalence certificates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .melons import Watermelon, is_valid, par

CANONICAL = "canonical"
ANTI_CANONICAL = "anti-canonical"


@dataclass(frozen=True)
class HomologyVector:
    """Coefficients (ε₀,…,ε_n) of a loop class, in one of the two modes."""

    bits: tuple[int, ...]
    mode: str = CANONICAL

    def __post_init__(self):
        if self.mode not in (CANONICAL, ANTI_CANONICAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        if any(b not in (0, 1) for b in self.bits) or len(self.bits) < 3:
            raise ValueError("bits must be 0/1 with at least three entries")
        want = 0 if self.mode == CANONICAL else 1
        if self.bits[-1] != want:
            raise ValueError(f"{self.mode} coefficients need ε_n = {want}")

    @property
    def n(self) -> int:
        return len(self.bits) - 1

    def flipped(self) -> "HomologyVector":
        """The other coefficient representative: flips ε₁..ε_n."""
        bits = (self.bits[0],) + tuple(1 - b for b in self.bits[1:])
        mode = ANTI_CANONICAL if self.mode == CANONICAL else CANONICAL
        return HomologyVector(bits, mode)


def mark_vector(n: int) -> HomologyVector:
    """The column of the mark loop: (1, 0, …, 0)."""
    return HomologyVector((1,) + (0,) * n)


def homology_vector(w: Watermelon, arc: int, mode: str = CANONICAL) -> HomologyVector:
    """Class of the loop associated with an arc: ε₀ = 1 and ε_i = 1 exactly
    on the side of the arc's bipartition not containing puncture n."""
    p = par(w, arc)
    side = p.sides[0] if w.n not in p.sides[0] else p.sides[1]
    bits = [1] + [1 if i in side else 0 for i in range(1, w.n + 1)]
    v = HomologyVector(tuple(bits), CANONICAL)
    return v if mode == CANONICAL else v.flipped()


@dataclass(frozen=True)
class HomologyTable:
    """Rows g₀..g_n; column 0 is the mark, then one column per arc."""

    n: int
    columns: tuple[tuple[str, HomologyVector], ...]

    def __post_init__(self):
        for label, v in self.columns:
            if v.n != self.n:
                raise ValueError(f"column {label} has {v.n + 1} rows, expected {self.n + 1}")
            if v.mode != CANONICAL:
                raise ValueError(f"column {label} is not in canonical mode")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.columns)

    def vector(self, col: int) -> HomologyVector:
        return self.columns[col][1]


def homology_table(w: Watermelon) -> HomologyTable:
    if not is_valid(w):
        raise ValueError("watermelon is not valid")
    cols = [("gamma_0", mark_vector(w.n))]
    for a in w.arc_ids:
        cols.append((f"gamma_{w.name_of(a)}", homology_vector(w, a)))
    return HomologyTable(w.n, tuple(cols))


def delta2(u: HomologyVector, v: HomologyVector) -> int:
    """min(d, n-d) where d counts disagreements among ε₁..ε_n; independent
    of each argument's mode."""
    if u.n != v.n:
        raise ValueError("vectors live on different surfaces")
    d = sum(1 for a, b in zip(u.bits[1:], v.bits[1:]) if a != b)
    return min(d, u.n - d)


def relative_short_set(t: HomologyTable, col: int) -> frozenset[int]:
    """Indices of the other columns at δ₂-distance exactly 1."""
    if not 0 <= col < len(t.columns):
        raise IndexError(f"column {col} out of range")
    v = t.vector(col)
    return frozenset(j for j in range(len(t.columns))
                     if j != col and delta2(v, t.vector(j)) == 1)


def s_profile(t: HomologyTable) -> tuple[int, ...]:
    """Sorted multiset of #S(γ) over all columns."""
    return tuple(sorted(len(relative_short_set(t, j))
                        for j in range(len(t.columns))))


@dataclass(frozen=True)
class RowOp:
    """swap(i, j) exchanges rows g_i, g_j (1 ≤ i < j ≤ n); slide(i) adds the
    g₀ row to row g_i (1 ≤ i ≤ n)."""

    kind: str
    i: int
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind == "swap":
            if self.j is None or not 1 <= self.i < self.j:
                raise ValueError("swap needs 1 ≤ i < j")
        elif self.kind == "slide":
            if self.j is not None or self.i < 1:
                raise ValueError("slide needs a single index ≥ 1")
        else:
            raise ValueError(f"unknown row op {self.kind!r}")


def apply_row_op(t: HomologyTable, op: RowOp) -> HomologyTable:
    """Apply the op to every column and renormalize to canonical mode."""
    if op.i > t.n or (op.j is not None and op.j > t.n):
        raise ValueError("row index out of range")
    cols = []
    for label, v in t.columns:
        bits = list(v.bits)
        if op.kind == "swap":
            bits[op.i], bits[op.j] = bits[op.j], bits[op.i]
        else:
            bits[op.i] ^= bits[0]
        if bits[-1] == 1:
            bits = [bits[0]] + [1 - b for b in bits[1:]]
        cols.append((label, HomologyVector(tuple(bits), CANONICAL)))
    return HomologyTable(t.n, tuple(cols))


# -- orbit search over the table symmetry group -------------------------------

@dataclass(frozen=True)
class OrbitWitness:
    """A row transform carrying one table's columns onto another's.

    ``row_permutation[i]`` is the old row feeding new row i (rows 1..n);
    ``slides`` is the set of rows receiving the g₀ row; ``column_map[k]`` is
    the column of the second table matching column k of the first.
    """

    row_permutation: tuple[int, ...]
    slides: frozenset[int]
    column_map: tuple[int, ...]


def _encode(bits: Sequence[int]) -> int:
    # ε₀ in the most significant position so integer order = lexicographic
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


def _canon(v: int, n: int) -> int:
    flip = v ^ ((1 << n) - 1)     # flips ε₁..ε_n, fixes ε₀
    return min(v, flip)


def tables_orbit_equivalent(t1: HomologyTable, t2: HomologyTable,
                            allow_large: bool = False) -> Optional[OrbitWitness]:
    """Exhaustive search over all n!·2ⁿ row transforms for one matching the
    two tables' column multisets (a necessary condition for equivalence of
    the underlying systems, exact at the homology level)."""
    if t1.n != t2.n or len(t1.columns) != len(t2.columns):
        raise ValueError("tables have different shapes")
    n = t1.n
    if n > 7 and not allow_large:
        raise ValueError("orbit search over n ≥ 8 requires allow_large=True")
    cols1 = [_encode(v.bits) for _, v in t1.columns]
    cols2 = [_canon(_encode(v.bits), n) for _, v in t2.columns]
    target = sorted(cols2)
    if any(not b & (1 << n) for b in cols1):
        raise ValueError("orbit search expects ε₀ = 1 in every column")

    k = len(cols1)
    for perm in itertools.permutations(range(1, n + 1)):
        # lookup table: permuted[v] moves old row perm[i-1] into row i
        lut = [0] * (1 << (n + 1))
        for v in range(1 << (n + 1)):
            w = v & (1 << n)
            for i in range(1, n + 1):
                if v & (1 << (n - perm[i - 1])):
                    w |= 1 << (n - i)
            lut[v] = w
        base = [lut[c] for c in cols1]
        for smask in range(1 << n):
            moved = sorted(range(k), key=lambda idx: _canon(base[idx] ^ smask, n))
            got = [_canon(base[idx] ^ smask, n) for idx in moved]
            if got == target:
                slides = frozenset(i for i in range(1, n + 1)
                                   if smask & (1 << (n - i)))
                order2 = sorted(range(k), key=lambda idx: cols2[idx])
                column_map = [0] * k
                for pos, idx in enumerate(moved):
                    column_map[idx] = order2[pos]
                return OrbitWitness(tuple(perm), slides, tuple(column_map))
    return None


def orbit_transform_count(n: int) -> int:
    return math.factorial(n) * (1 << n)


def verify_witness(t1: HomologyTable, t2: HomologyTable,
                   wit: OrbitWitness) -> bool:
    """Re-apply a witness and confirm it carries each column of t1 onto its
    image column of t2 exactly (up to the coefficient flip)."""
    n = t1.n
    if sorted(wit.row_permutation) != list(range(1, n + 1)):
        return False
    smask = 0
    for i in wit.slides:
        smask |= 1 << (n - i)
    for k, (_, v) in enumerate(t1.columns):
        bits = v.bits
        new_bits = [bits[0]] + [bits[wit.row_permutation[i - 1]]
                                for i in range(1, n + 1)]
        moved = _encode(new_bits) ^ smask
        goal = _encode(t2.columns[wit.column_map[k]][1].bits)
        if _canon(moved, n) != _canon(goal, n):
            return False
    return sorted(wit.column_map) == list(range(len(t1.columns)))


# -- inequivalence certificates -----------------------------------------------

@dataclass(frozen=True)
class InequivalenceCertificate:
    """Machine-checkable witness that two systems are not equivalent.

    Either the S-profiles differ (``distinguishing_value`` is an integer in
    exactly one profile's support, or None when only multiplicities differ),
    or the exhaustive orbit search failed (``transforms_tried`` = n!·2ⁿ).
    """

    n: int
    profile_a: tuple[int, ...]
    profile_b: tuple[int, ...]
    distinguishing_value: Optional[int] = None
    transforms_tried: Optional[int] = None


def certify_inequivalent(w1: Watermelon, w2: Watermelon,
                         allow_large: bool = False) -> Optional[InequivalenceCertificate]:
    """Certificate that the associated loop systems are inequivalent, or
    None when homology invariants cannot separate them (inconclusive: equal
    tables do not imply equivalent systems)."""
    if w1.n != w2.n:
        raise ValueError("watermelons live on different surfaces")
    t1, t2 = homology_table(w1), homology_table(w2)
    p1, p2 = s_profile(t1), s_profile(t2)
    if p1 != p2:
        diff = sorted(set(p1) ^ set(p2))
        value = diff[0] if diff else None
        return InequivalenceCertificate(w1.n, p1, p2, distinguishing_value=value)
    if tables_orbit_equivalent(t1, t2, allow_large=allow_large) is None:
        return InequivalenceCertificate(
            w1.n, p1, p2, transforms_tried=orbit_transform_count(w1.n))
    return None
