"""Command-line interface.

Subcommands: group, cells, facets, verify-a, verify-bminus, scan,
invariances, cache.  Reports are written to stdout as JSON (default) or
a short text rendering; JSON output is byte-identical across runs with
the same inputs and cache state.  Exit codes: 0 all checks passed, 1 a
conjecture check failed, 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from dataclasses import asdict

from . import cells, hecke, paramspace, verify
from .coxeter import CoxeterSystem, from_type
from .errors import KLCellsError, ValidationError
from .paramspace import Arrangement, PositiveSubset

SCHEMA = "klcells/1"

EXIT_OK = 0
EXIT_CONJECTURE_FAILED = 1
EXIT_USAGE = 2


def _build_system(args) -> CoxeterSystem:
    if getattr(args, "matrix", None):
        with open(args.matrix, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        return CoxeterSystem(
            spec["generators"], spec["matrix"], None, args.element_cap
        )
    if not getattr(args, "type", None):
        raise ValidationError("one of --type or --matrix is required")
    return from_type(args.type, args.element_cap)


def _parse_weights(text: str, sys: CoxeterSystem) -> PositiveSubset:
    """Per-class integers, e.g. ``s=1,t=2``."""
    values = {}
    for chunk in text.split(","):
        if "=" not in chunk:
            raise ValidationError(f"expected name=integer, got {chunk!r}")
        name, _, raw = chunk.partition("=")
        values[name.strip()] = int(raw)
    form = []
    for name in sys.class_names:
        if name not in values:
            raise ValidationError(f"missing weight for class {name!r}")
        form.append(values.pop(name))
    if values:
        raise ValidationError(f"unknown class names: {sorted(values)}")
    return PositiveSubset(sys.num_classes, (tuple(form),) if any(form) else ())


def _parse_flag(text: str, sys: CoxeterSystem) -> PositiveSubset:
    """Rows-as-forms matrix, e.g. ``1,2;0,1``."""
    forms = []
    for row in text.split(";"):
        forms.append(tuple(int(x) for x in row.split(",")))
    return PositiveSubset(sys.num_classes, forms)


def _positive_subset(args, sys: CoxeterSystem) -> PositiveSubset:
    if getattr(args, "flag", None):
        return _parse_flag(args.flag, sys)
    if getattr(args, "weights", None):
        return _parse_weights(args.weights, sys)
    raise ValidationError("one of --weights or --flag is required")


def _arrangement(args, sys: CoxeterSystem) -> Arrangement:
    if not args.elements:
        raise ValidationError("--elements is required")
    elems = [paramspace.parse_element(x, sys) for x in args.elements.split(",")]
    if args.symmetrize:
        elems = paramspace.symmetrize(elems)
    return Arrangement(elems, sys.num_classes)


def _cache_dir(args) -> str | None:
    env = os.environ.get("KLCELLS_CACHE_DIR")
    if env:
        return env
    return args.cache_dir


def _emit(doc: dict, args) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        _emit_text(doc)


def _emit_text(doc: dict, indent: int = 0) -> None:
    pad = " " * indent
    for key, value in doc.items():
        if key == "schema":
            continue
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _emit_text(value, indent + 2)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                print(f"{pad}{key}[{i}]:")
                _emit_text(item, indent + 2)
        else:
            print(f"{pad}{key}: {value}")


def _cmd_group(args) -> int:
    sys = _build_system(args)
    classes = sys.conjugacy_classes()
    doc = {
        "schema": SCHEMA,
        "type": sys.catalog_type,
        "generators": list(sys.generators),
        "order": sys.order,
        "classes": {
            name: [sys.generators[i] for i in members]
            for name, members in zip(sys.class_names, sys.classes)
        },
        "longest_word": sys.word_text(sys.longest_element()),
        "conjugacy_classes": len(classes),
    }
    _emit(doc, args)
    return EXIT_OK


def _cmd_cells(args) -> int:
    sys = _build_system(args)
    pos = _positive_subset(args, sys)
    side = {"left": "L", "right": "R", "two-sided": "LR"}[args.side]
    table = hecke.kl_table(hecke.specialize(sys, pos), _cache_dir(args))
    partition = cells.cells_for_side(table, side)
    doc = cells.partition_json(partition, sys)
    doc["flag"] = [list(f) for f in pos.flag]
    doc["fingerprint"] = cells.partition_fingerprint(partition, sys)
    _emit(doc, args)
    return EXIT_OK


def _cmd_facets(args) -> int:
    sys = _build_system(args)
    arr = _arrangement(args, sys)
    doc = {
        "schema": SCHEMA,
        "elements": [paramspace.format_element(v, sys) for v in arr.elements],
        "facets": [
            {
                "signs": f.sign_text(),
                "representative_form": list(f.representative.flag[0])
                if f.representative.flag
                else None,
                "dimension": f.dimension,
            }
            for f in arr.facets
        ],
        "count": len(arr.facets),
        "chambers": len(arr.chambers),
    }
    _emit(doc, args)
    return EXIT_OK


def _cmd_verify_a(args) -> int:
    sys = _build_system(args)
    arr = _arrangement(args, sys)
    cache = verify.TableCache(sys, _cache_dir(args))
    reports = [
        verify.facet_report(sys, arr, f, args.witnesses, cache) for f in arr.facets
    ]
    doc = {
        "schema": SCHEMA,
        "facets": [asdict(r) for r in reports],
        "all_ok": all(r.ok for r in reports),
    }
    _emit(doc, args)
    return EXIT_OK if doc["all_ok"] else EXIT_CONJECTURE_FAILED


def _cmd_verify_bminus(args) -> int:
    sys = _build_system(args)
    arr = _arrangement(args, sys)
    cache = verify.TableCache(sys, _cache_dir(args))
    results = []
    all_ok = True
    for facet in arr.facets:
        for chamber in arr.adjacent_chambers(facet):
            for side in ("L", "R"):
                try:
                    ok = verify.check_bminus(sys, facet, chamber, side, cache)
                    failure = None
                except verify.BMinusViolation as exc:
                    ok = False
                    failure = exc.kind
                all_ok &= ok
                results.append(
                    {
                        "facet": facet.sign_text(),
                        "chamber": chamber.sign_text(),
                        "side": side,
                        "ok": ok,
                        **({"failure": failure} if failure else {}),
                    }
                )
    doc = {"schema": SCHEMA, "pairs": results, "all_ok": all_ok}
    _emit(doc, args)
    return EXIT_OK if all_ok else EXIT_CONJECTURE_FAILED


def _cmd_scan(args) -> int:
    sys = _build_system(args)
    cache = verify.TableCache(sys, _cache_dir(args))
    report = verify.scan_walls_rank2(sys, args.max_denominator, cache, jobs=args.jobs)
    doc = {
        "schema": SCHEMA,
        "slopes": report.slopes,
        "fingerprints": report.fingerprints,
        "walls": report.walls,
        "constant_between_walls": report.constant_between_walls(),
    }
    _emit(doc, args)
    return EXIT_OK if doc["constant_between_walls"] else EXIT_CONJECTURE_FAILED


def _cmd_invariances(args) -> int:
    sys = _build_system(args)
    cache = verify.TableCache(sys, _cache_dir(args))
    report = verify.check_invariances(sys, args.samples, args.seed, cache)
    doc = {
        "schema": SCHEMA,
        "draws": report.draws,
        "scaling_ok": report.scaling_ok,
        "flag_equivalence_ok": report.flag_equivalence_ok,
        "tau_ok": report.tau_ok,
        "zero_class_ok": report.zero_class_ok,
        "failures": [list(map(str, f)) for f in report.failures],
        "all_ok": report.ok,
    }
    _emit(doc, args)
    return EXIT_OK if report.ok else EXIT_CONJECTURE_FAILED


def _cmd_cache(args) -> int:
    cache_dir = _cache_dir(args)
    if not cache_dir:
        raise ValidationError("cache commands need --cache-dir or KLCELLS_CACHE_DIR")
    if args.action == "stat":
        entries = []
        if os.path.isdir(cache_dir):
            for name in sorted(os.listdir(cache_dir)):
                if not name.endswith(".json.gz"):
                    continue
                path = os.path.join(cache_dir, name)
                entries.append({"key": name[: -len(".json.gz")],
                                "bytes": os.path.getsize(path)})
        doc = {"schema": SCHEMA, "cache_dir": cache_dir, "entries": entries}
        _emit(doc, args)
        return EXIT_OK
    if args.action == "clear":
        removed = 0
        if os.path.isdir(cache_dir):
            for name in os.listdir(cache_dir):
                if name.endswith(".json.gz"):
                    os.unlink(os.path.join(cache_dir, name))
                    removed += 1
        _emit({"schema": SCHEMA, "removed": removed}, args)
        return EXIT_OK
    if args.action == "warm":
        sys = _build_system(args)
        pos = _positive_subset(args, sys)
        ctx = hecke.specialize(sys, pos)
        key = hecke.table_fingerprint(ctx)
        path = os.path.join(cache_dir, key + ".json.gz")
        hit = os.path.exists(path)
        hecke.kl_table(ctx, cache_dir)
        _emit({"schema": SCHEMA, "key": key, "hit": hit}, args)
        return EXIT_OK
    raise ValidationError(f"unknown cache action {args.action!r}")


def _add_common(parser: argparse.ArgumentParser, need_group=True) -> None:
    if need_group:
        parser.add_argument("--type", help="catalog type, e.g. B3, F4, I2:6")
        parser.add_argument(
            "--matrix", help="path to a JSON file with {generators, matrix}"
        )
    parser.add_argument(
        "--element-cap", "--element_cap", dest="element_cap",
        type=int, default=None, help="enumeration safety cap",
    )
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--cache-dir", default=None,
                        help="KL table cache directory (env KLCELLS_CACHE_DIR wins)")
    parser.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klcells",
        description="Kazhdan-Lusztig cells with unequal parameters, exactly",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="group facts: order, classes, longest word")
    _add_common(p)
    p.set_defaults(fn=_cmd_group)

    p = sub.add_parser("cells", help="cell partition at one parameter")
    _add_common(p)
    p.add_argument("--weights", help="per-class integers, e.g. s=1,t=2")
    p.add_argument("--flag", help="flag rows, e.g. '1,2;0,1'")
    p.add_argument("--side", choices=("left", "right", "two-sided"), default="left")
    p.set_defaults(fn=_cmd_cells)

    p = sub.add_parser("facets", help="facets of an arrangement")
    _add_common(p)
    p.add_argument("--elements", help="comma-separated, e.g. s,t,t-s,t+s")
    p.add_argument("--symmetrize", action="store_true")
    p.set_defaults(fn=_cmd_facets)

    p = sub.add_parser("verify-a", help="facet constancy + supremum formula")
    _add_common(p)
    p.add_argument("--elements")
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--witnesses", type=int, default=3, metavar="K")
    p.set_defaults(fn=_cmd_verify_a)

    p = sub.add_parser("verify-bminus", help="character decomposition checks")
    _add_common(p)
    p.add_argument("--elements")
    p.add_argument("--symmetrize", action="store_true")
    p.set_defaults(fn=_cmd_verify_bminus)

    p = sub.add_parser("scan", help="rank-2 wall scan")
    _add_common(p)
    p.add_argument("--max-denominator", type=int, required=True)
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("invariances", help="randomized invariance checks")
    _add_common(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_invariances)

    p = sub.add_parser("cache", help="cache administration")
    p.add_argument("action", choices=("stat", "clear", "warm"))
    _add_common(p)
    p.add_argument("--weights")
    p.add_argument("--flag")
    p.set_defaults(fn=_cmd_cache)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except KLCellsError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())
