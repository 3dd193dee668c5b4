"""Command-line interface.

Exit codes: 0 success, 1 domain failure (invalid input system), 2 usage
error, 3 budget exhaustion.  Machine output goes to stdout or --out;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from typing import Optional

from . import homology, melons, render, search, serialize
from .canonical import canonical_code


class DomainError(RuntimeError):
    pass


def _worker_count() -> int:
    raw = os.environ.get("MELON_THREADS", "1")
    try:
        v = int(raw)
    except ValueError:
        raise DomainError(f"MELON_THREADS must be an integer, got {raw!r}")
    if v < 1:
        raise DomainError("MELON_THREADS must be >= 1")
    return v


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_watermelon(path: str) -> melons.Watermelon:
    import json
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        return serialize.watermelon_from_obj(obj)
    except (OSError, ValueError, KeyError) as exc:
        raise DomainError(f"cannot read watermelon from {path}: {exc}")


def _require_valid(w: melons.Watermelon, path: str) -> None:
    report = melons.validate_watermelon(w)
    if not report:
        raise DomainError(
            f"{path} is not a valid watermelon: "
            + "; ".join(f"{rule}{ids}" for rule, ids in report.violations))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="melon",
        description="curve systems on punctured disks: construction, "
                    "homology invariants, enumeration")
    p.add_argument("--out", help="write machine output to this file")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="emit an explicit maximal watermelon")
    b.add_argument("family", choices=["standard", "alt"])
    b.add_argument("--n", type=int, required=True)

    v = sub.add_parser("validate", help="validate a watermelon file")
    v.add_argument("file")

    t = sub.add_parser("table", help="homology table of a watermelon")
    t.add_argument("file")
    t.add_argument("--format", choices=["json", "csv"], default="json")

    iv = sub.add_parser("invariants", help="arc counts, S-profile, δ₂ matrix")
    iv.add_argument("file")

    r = sub.add_parser("reduce", help="fill a puncture and reduce")
    r.add_argument("file")
    r.add_argument("--puncture", type=int, required=True)

    ins = sub.add_parser("insertions", help="all single-arc extensions")
    ins.add_argument("file")

    c = sub.add_parser("compare", help="inequivalence certificate search")
    c.add_argument("file1")
    c.add_argument("file2")

    e = sub.add_parser("enumerate", help="enumerate maximal watermelons")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--allow-n5", action="store_true")
    e.add_argument("--node-budget", type=int, default=10_000_000)
    e.add_argument("--time-budget", type=float, default=7200.0)
    e.add_argument("--checkpoint", default=None)

    rp = sub.add_parser("report", help="uniqueness / non-uniqueness report")
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--allow-n5", action="store_true")
    rp.add_argument("--node-budget", type=int, default=10_000_000)
    rp.add_argument("--time-budget", type=float, default=7200.0)

    rd = sub.add_parser("render", help="deterministic SVG figure")
    rd.add_argument("file")
    rd.add_argument("--format", choices=["svg"], default="svg")
    return p


def _cmd_build(args) -> str:
    if args.n < 2:
        raise DomainError("--n must be at least 2")
    if args.family == "standard":
        w = melons.standard_watermelon(args.n)
    else:
        if args.n < 4:
            raise DomainError("the alternative construction needs --n >= 4")
        w = melons.alt_watermelon(args.n)
    return serialize.json_text(serialize.watermelon_to_obj(w))


def _cmd_validate(args) -> str:
    w = _load_watermelon(args.file)
    report = melons.validate_watermelon(w)
    text = serialize.json_text({
        "verdict": report.verdict,
        "violations": [{"rule": rule, "ids": list(ids)}
                       for rule, ids in report.violations],
    })
    if not report:
        sys.stderr.write("invalid: "
                         + "; ".join(r for r, _ in report.violations) + "\n")
        _emit(text, args.out)
        raise DomainError("validation failed")
    return text


def _cmd_table(args) -> str:
    w = _load_watermelon(args.file)
    _require_valid(w, args.file)
    t = homology.homology_table(w)
    if args.format == "csv":
        return serialize.table_to_csv(t)
    return serialize.json_text(serialize.table_to_obj(t))


def _cmd_invariants(args) -> str:
    w = _load_watermelon(args.file)
    _require_valid(w, args.file)
    t = homology.homology_table(w)
    k = len(t.columns)
    d2 = [[homology.delta2(t.vector(i), t.vector(j)) for j in range(k)]
          for i in range(k)]
    return serialize.json_text({
        "n": w.n,
        "arc_count": len(w.arc_ids),
        "short_arc_count": len(melons.short_arcs(w)),
        "short_arcs": [{"arc": a, "isolates": p}
                       for a, p in melons.short_arcs(w)],
        "s_profile": list(homology.s_profile(t)),
        "delta2": d2,
        "canonical_code": canonical_code(w.map),
    })


def _cmd_reduce(args) -> str:
    w = _load_watermelon(args.file)
    _require_valid(w, args.file)
    if w.n < 3:
        raise DomainError("reduction needs at least 3 punctures")
    if not 1 <= args.puncture <= w.n:
        raise DomainError(f"no puncture {args.puncture} on this surface")
    reduced = melons.p_reduce(w, args.puncture)
    return serialize.json_text(serialize.watermelon_to_obj(reduced))


def _cmd_insertions(args) -> str:
    w = _load_watermelon(args.file)
    _require_valid(w, args.file)
    children = melons.enumerate_insertions(w)
    return serialize.json_text([serialize.watermelon_to_obj(c) for c in children])


def _cmd_compare(args) -> str:
    w1 = _load_watermelon(args.file1)
    w2 = _load_watermelon(args.file2)
    _require_valid(w1, args.file1)
    _require_valid(w2, args.file2)
    if w1.n != w2.n:
        raise DomainError("different puncture counts")
    cert = homology.certify_inequivalent(w1, w2)
    if cert is None:
        t1, t2 = homology.homology_table(w1), homology.homology_table(w2)
        wit = homology.tables_orbit_equivalent(t1, t2)
        return serialize.json_text({
            "inequivalent": False,
            "note": "homology invariants cannot separate these systems; "
                    "this is NOT a proof of equivalence",
            "witness": {
                "row_permutation": list(wit.row_permutation),
                "slides": sorted(wit.slides),
                "column_map": list(wit.column_map),
            },
        })
    obj = serialize.certificate_to_obj(cert)
    obj["inequivalent"] = True
    return serialize.json_text(obj)


def _cmd_enumerate(args) -> str:
    limits = search.SearchLimits(max_n=max(5, args.n),
                                 node_budget=args.node_budget,
                                 time_budget=args.time_budget,
                                 allow_n5=args.allow_n5)
    records = search.enumerate_maximal(args.n, limits,
                                       checkpoint=args.checkpoint)
    return serialize.json_text([{
        "canonical_code": r.canonical_code,
        "short_arc_count": r.short_arc_count,
        "s_profile": list(r.s_profile),
        "table_digest": r.table_digest,
        "watermelon": serialize.watermelon_to_obj(r.representative),
    } for r in records])


def _cmd_report(args) -> str:
    limits = search.SearchLimits(max_n=max(5, args.n),
                                 node_budget=args.node_budget,
                                 time_budget=args.time_budget,
                                 allow_n5=args.allow_n5)
    return serialize.json_text(search.uniqueness_report(args.n, limits))


def _cmd_render(args) -> str:
    w = _load_watermelon(args.file)
    _require_valid(w, args.file)
    return render.render_svg(w.map, dict(w.arc_names))


_HANDLERS = {
    "build": _cmd_build,
    "validate": _cmd_validate,
    "table": _cmd_table,
    "invariants": _cmd_invariants,
    "reduce": _cmd_reduce,
    "insertions": _cmd_insertions,
    "compare": _cmd_compare,
    "enumerate": _cmd_enumerate,
    "report": _cmd_report,
    "render": _cmd_render,
}


def run(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        _worker_count()
        text = _HANDLERS[args.command](args)
    except search.BudgetExhaustedError as exc:
        sys.stderr.write(f"budget exhausted: {exc} "
                         f"({len(exc.partial)} classes found)\n")
        return 3
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    _emit(text, args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
