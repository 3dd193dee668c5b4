"""Deterministic SVG rendering of arrangement maps.

Presentation only: boundary vertices are spread around a circle in boundary
cycle order (fixed-point integer trigonometry, no libm), interior crossings
are placed by an exact barycentric relaxation solved over Fractions, arcs
are drawn as polylines through their crossing chain.  Same input, same
bytes, on every platform.
"""

from __future__ import annotations

from fractions import Fraction

from .diskmap import ARC, BOUNDARY, ArrangementMap

_SCALE = 10 ** 18
_PI = 3141592653589793238          # π · 1e18, floor
_SIZE = 1000
_RADIUS = 460
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
            "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5")


def _cos_sin(k: int, K: int) -> tuple[int, int]:
    """cos/sin of 2πk/K scaled by 1e18, by integer Taylor series."""
    x = (2 * _PI * (k % K)) // K
    if x > _PI:
        x -= 2 * _PI
    x2 = (x * x) // _SCALE
    cos, term = _SCALE, _SCALE
    for j in range(1, 24):
        term = -(term * x2) // _SCALE // ((2 * j - 1) * (2 * j))
        cos += term
    sin, term = x, x
    for j in range(1, 24):
        term = -(term * x2) // _SCALE // ((2 * j) * (2 * j + 1))
        sin += term
    return cos, sin


def _boundary_vertex_order(m: ArrangementMap) -> list[int]:
    order = []
    h = m.boundary_root
    while True:
        order.append(m.vertex_of[h])
        head = m.vertex_of[m.twin[h]]
        nxt = None
        for d in m.vertices[head]:
            if (m.edge_kind[d] == BOUNDARY and m.face_of[d] != m.outer_face
                    and d != m.twin[h]):
                nxt = d
                break
        if nxt is None:  # two-vertex boundary: the way back is the other edge
            cands = [d for d in m.vertices[head]
                     if m.edge_kind[d] == BOUNDARY and m.face_of[d] != m.outer_face]
            nxt = cands[0]
        h = nxt
        if h == m.boundary_root:
            return order


def _positions(m: ArrangementMap) -> dict[int, tuple[Fraction, Fraction]]:
    bd = _boundary_vertex_order(m)
    K = len(bd)
    pos: dict[int, tuple[Fraction, Fraction]] = {}
    for i, v in enumerate(bd):
        c, s = _cos_sin(i, K)
        pos[v] = (Fraction(_SIZE, 2) + Fraction(_RADIUS * c, _SCALE),
                  Fraction(_SIZE, 2) - Fraction(_RADIUS * s, _SCALE))
    interior = [i for i in range(len(m.vertices)) if i not in pos]
    if not interior:
        return pos
    index = {v: i for i, v in enumerate(interior)}
    k = len(interior)
    ax = [[Fraction(0)] * (k + 1) for _ in range(k)]
    ay = [[Fraction(0)] * (k + 1) for _ in range(k)]
    for h in range(m.dart_count):
        u = m.vertex_of[h]
        if u not in index:
            continue
        v = m.vertex_of[m.twin[h]]
        r = index[u]
        ax[r][r] += 1
        ay[r][r] += 1
        if v in index:
            ax[r][index[v]] -= 1
            ay[r][index[v]] -= 1
        else:
            ax[r][k] += pos[v][0]
            ay[r][k] += pos[v][1]
    xs = _solve(ax)
    ys = _solve(ay)
    for v, i in index.items():
        pos[v] = (xs[i], ys[i])
    return pos


def _solve(rows: list[list[Fraction]]) -> list[Fraction]:
    k = len(rows)
    a = [row[:] for row in rows]
    for col in range(k):
        piv = next(r for r in range(col, k) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][k] for r in range(k)]


def _fmt(q: Fraction) -> str:
    v = round(q * 100)  # Fraction.__round__: exact, no floats anywhere
    sign = "-" if v < 0 else ""
    v = abs(v)
    return f"{sign}{v // 100}.{v % 100:02d}"


def render_svg(m: ArrangementMap, arc_names: dict[int, str] | None = None) -> str:
    pos = _positions(m)
    names = arc_names or {}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" '
        f'height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<circle cx="{_SIZE // 2}" cy="{_SIZE // 2}" r="{_RADIUS}" '
        'fill="none" stroke="#444" stroke-width="2"/>',
    ]
    for idx, arc in enumerate(m.arc_ids):
        chain = m.arc_segments(arc)
        pts = [pos[m.vertex_of[chain[0]]]]
        for h in chain:
            pts.append(pos[m.vertex_of[m.twin[h]]])
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        color = _PALETTE[idx % len(_PALETTE)]
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                   'stroke-width="2.5"/>')
        mx, my = pts[len(pts) // 2]
        label = names.get(arc, str(arc))
        out.append(f'<text x="{_fmt(mx)}" y="{_fmt(my)}" font-size="13" '
                   f'fill="{color}">{label}</text>')
    for f, labels in enumerate(m.face_labels):
        if not labels:
            continue
        verts = sorted({m.vertex_of[h] for h in m.faces[f]})
        cx = sum(pos[v][0] for v in verts) / len(verts)
        cy = sum(pos[v][1] for v in verts) / len(verts)
        for t, label in enumerate(labels):
            y = cy + 16 * t
            out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(y)}" r="5" '
                       'fill="#111"/>')
            out.append(f'<text x="{_fmt(cx + 8)}" y="{_fmt(y + 4)}" '
                       f'font-size="15" fill="#111">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
