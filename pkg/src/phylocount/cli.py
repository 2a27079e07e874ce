"""Command-line interface.

Subcommands: count, table, blocks, verify, asympt, enumerate, patterns.
All exact values are printed as full decimal integers; floating-point output
carries explicit precision annotations.  Exit codes: 0 success, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from phylocount import galled, io, onecomp, oracle, retvis
from phylocount import verify as verify_mod

CLASSES = ("pn", "rv", "gn", "tc", "normal", "onecomp", "trees")
METHODS = ("auto", "series", "closed", "treesum", "dagsum", "brute")


class UsageError(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phylocount",
        description="Exact and asymptotic counts of phylogenetic network classes.",
    )
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("count", help="count one class at one (leaves, rets) cell")
    p.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--rets", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--trunc-order", type=int, default=None)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("table", help="matrix of exact counts")
    p.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("blocks", help="building-block count table as CSV")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=_cmd_blocks)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "--suite",
        default="all",
        choices=("all",) + tuple(sorted(verify_mod.SUITES)),
    )
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("asympt", help="exact counts against the asymptotic main term")
    p.add_argument("--class", dest="cls", required=True, choices=("gn", "rv"))
    p.add_argument("--rets", type=int, required=True)
    p.add_argument("--leaves", required=True, help="comma-separated leaf counts")
    p.set_defaults(handler=_cmd_asympt)

    p = sub.add_parser("enumerate", help="write every network of a cell to disk")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--rets", type=int, required=True)
    p.add_argument("--class", dest="cls", default=None, choices=tuple(oracle.CLASS_PREDICATES))
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("json", "dot", "both"), default="both")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("patterns", help="emit the DAG-pattern catalog")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dot", type=Path, default=None, help="directory for DOT files")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_patterns)

    return parser


def _series_count(cls: str, leaves: int, rets: int, order: int | None) -> int:
    order = max(order or 0, leaves)
    if cls == "gn":
        return galled.galled_egf(rets, order).count(leaves)
    if cls == "rv":
        return retvis.rv_egf(rets, order).coeff(leaves) * math.factorial(leaves)
    raise UsageError(f"no series method for class {cls!r}")


def _closed_count(cls: str, leaves: int, rets: int):
    if cls == "trees":
        if rets not in (0, None):
            raise UsageError("trees have no reticulations; use --rets 0")
        return onecomp.tree_count(leaves), "validated"
    if cls == "onecomp":
        return onecomp.one_component_count(leaves, rets), "validated"
    if rets == 0:
        return onecomp.tree_count(leaves), "validated"
    if rets == 1 and cls in ("pn", "rv", "gn", "tc"):
        return onecomp.single_reticulation_count(leaves), "validated"
    if cls == "gn" and rets in (2, 3):
        value = galled.galled_closed_form(leaves, rets)
        flag = "validated" if leaves >= galled.closed_form_threshold(rets) else "below-threshold"
        return value, flag
    if cls == "rv" and rets in (2, 3):
        value = retvis.rv_closed_form(leaves, rets)
        flag = "validated" if leaves >= retvis.closed_form_threshold(rets) else "below-threshold"
        return value, flag
    if cls == "normal" and rets == 2:
        return onecomp.normal_two_reticulation_count(leaves), "validated"
    raise UsageError(f"no closed form for class {cls!r} at rets={rets}")


def _bound_for(cls: str, leaves: int) -> int | None:
    bounds = {
        "gn": 2 * leaves - 2,
        "rv": 3 * leaves - 3,
        "tc": leaves - 1,
        "normal": leaves - 2,
        "onecomp": leaves,
        "trees": 0,
    }
    return bounds.get(cls)


def _cmd_count(args) -> int:
    cls, leaves, rets = args.cls, args.leaves, args.rets
    if leaves < 1:
        raise UsageError("--leaves must be >= 1")
    if rets is None:
        if cls == "trees":
            rets = 0
        elif args.method == "treesum":
            return _cmd_count_total(args)
        else:
            raise UsageError("--rets is required (or use --method treesum for totals)")
    if rets < 0:
        raise UsageError("--rets must be >= 0")
    method = args.method
    validity = "validated"
    bound = _bound_for(cls, leaves)
    if bound is not None and rets > max(bound, 0):
        value: object = 0
        method = "bound"
        validity = "bound"
    elif method == "auto":
        try:
            value, validity = _closed_count(cls, leaves, rets)
            method = "closed"
            if validity == "below-threshold":
                raise UsageError("retry with series")
        except UsageError:
            if cls == "gn":
                value, method, validity = _series_count(cls, leaves, rets, args.trunc_order), "series", "validated"
            elif cls == "rv":
                if rets + 1 > retvis.MAX_PATTERN_VERTICES:
                    raise UsageError(f"rv series supports rets <= {retvis.MAX_PATTERN_VERTICES - 1}")
                value, method, validity = _series_count(cls, leaves, rets, args.trunc_order), "dagsum", "validated"
            else:
                value, method, validity = _brute_count(cls, leaves, rets), "brute", "validated"
    elif method == "closed":
        value, validity = _closed_count(cls, leaves, rets)
    elif method in ("series", "dagsum"):
        value = _series_count(cls, leaves, rets, args.trunc_order)
    elif method == "treesum":
        if cls != "gn":
            raise UsageError("treesum counts per cell exist for the galled class only")
        by_rets = galled.galled_tree_sum_by_rets(leaves)
        value = by_rets[rets] if rets < len(by_rets) else 0
    elif method == "brute":
        value = _brute_count(cls, leaves, rets)
    else:
        raise UsageError(f"unsupported method {method!r}")
    record = {
        "class": cls,
        "leaves": leaves,
        "rets": rets,
        "method": method,
        "value": str(value),
        "validity": validity,
    }
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(f"{cls}({leaves},{rets}) = {value}  [{method}, {validity}]")
    return 0


def _cmd_count_total(args) -> int:
    cls, leaves = args.cls, args.leaves
    if cls == "gn":
        value = galled.galled_tree_sum(leaves)
    elif cls == "rv":
        value = retvis.rv_component_sum(leaves)
    else:
        raise UsageError("totals via treesum exist for classes gn and rv")
    record = {
        "class": cls,
        "leaves": leaves,
        "rets": "all",
        "method": "treesum",
        "value": str(value),
        "validity": "validated",
    }
    print(json.dumps(record, sort_keys=True))
    return 0


def _brute_count(cls: str, leaves: int, rets: int) -> int:
    try:
        counts = oracle.count_by_class(leaves, rets)
    except ValueError as exc:
        raise UsageError(str(exc))
    return getattr(counts, cls) if cls != "trees" else counts.pn


def _cmd_table(args) -> int:
    cls, lmax, kmax = args.cls, args.lmax, args.kmax
    if lmax < 1 or kmax < 0:
        raise UsageError("need --lmax >= 1 and --kmax >= 0")
    if cls == "trees" and kmax != 0:
        raise UsageError("trees support --kmax 0 only")
    columns = list(range(kmax + 1))
    rows = []
    for l in range(1, lmax + 1):
        row = []
        for k in columns:
            bound = _bound_for(cls, l)
            if bound is not None and k > max(bound, 0):
                row.append(0)
            elif cls == "trees":
                row.append(onecomp.tree_count(l))
            elif cls == "onecomp":
                row.append(onecomp.one_component_count(l, k))
            elif cls == "gn":
                row.append(galled.galled_egf(k, max(lmax, l)).count(l))
            elif cls == "rv":
                if k + 1 > retvis.MAX_PATTERN_VERTICES:
                    raise UsageError(
                        f"rv tables support kmax <= {retvis.MAX_PATTERN_VERTICES - 1}"
                    )
                row.append(retvis.rv_egf(k, max(lmax, l)).coeff(l) * math.factorial(l))
            elif k == 0:
                row.append(onecomp.tree_count(l))
            elif k == 1 and cls in ("pn", "tc"):
                row.append(onecomp.single_reticulation_count(l))
            elif cls == "normal" and k == 2:
                row.append(onecomp.normal_two_reticulation_count(l))
            else:
                row.append(_brute_count(cls, l, k))
        rows.append(row)
    if args.format == "csv":
        lines = ["leaves," + ",".join(f"k={k}" for k in columns)]
        for l, row in zip(range(1, lmax + 1), rows):
            lines.append(str(l) + "," + ",".join(str(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            {"class": cls, "rows": {str(l): [str(v) for v in row] for l, row in zip(range(1, lmax + 1), rows)}},
            sort_keys=True,
        ) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_blocks(args) -> int:
    if args.lmax < 1 or args.kmax < 0:
        raise UsageError("need --lmax >= 1 and --kmax >= 0")
    text = onecomp.block_table_csv(args.lmax, args.kmax)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_suite(args.suite)
    failures = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        detail = f"  ({r.detail})" if r.detail and not r.ok else ""
        print(f"[{r.suite}] {status}: {r.name}{detail}")
        failures += 0 if r.ok else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _cmd_asympt(args) -> int:
    cls, rets = args.cls, args.rets
    if rets > 3:
        raise UsageError("asymptotic comparison supports rets <= 3")
    try:
        leaf_list = [int(part) for part in args.leaves.split(",")]
    except ValueError:
        raise UsageError("--leaves must be a comma-separated list of integers")
    for leaves in leaf_list:
        if rets == 0:
            count = onecomp.tree_count(leaves)
        elif rets == 1:
            count = onecomp.single_reticulation_count(leaves)
        elif cls == "gn":
            count = galled.galled_closed_form(leaves, rets)
        else:
            count = retvis.rv_closed_form(leaves, rets)
        mantissa, exponent = galled.asymptotic_main_term(leaves, rets)
        ratio = galled.asymptotic_ratio(int(count), leaves, rets)
        print(
            json.dumps(
                {
                    "class": cls,
                    "leaves": leaves,
                    "rets": rets,
                    "count": str(count),
                    "main_term": f"{mantissa:.12f}e{exponent}",
                    "ratio": f"{ratio:.12f}",
                    "precision": "double (~1e-12 relative)",
                },
                sort_keys=True,
            )
        )
    return 0


def _cmd_enumerate(args) -> int:
    try:
        job = oracle.EnumerationJob(args.leaves, args.rets, args.cls)
    except ValueError as exc:
        raise UsageError(str(exc))
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    predicate = oracle.CLASS_PREDICATES[job.class_filter] if job.class_filter else None
    kept = 0
    for index, net in enumerate(oracle.enumerate_networks(args.leaves, args.rets)):
        if predicate is not None and not predicate(net):
            continue
        kept += 1
        stem = out_dir / f"net_{args.leaves}_{args.rets}_{index:06d}"
        if args.format in ("json", "both"):
            stem.with_suffix(".json").write_text(io.network_to_json(net) + "\n")
        if args.format in ("dot", "both"):
            stem.with_suffix(".dot").write_text(io.network_to_dot(net))
    print(json.dumps({"written": kept, "directory": str(out_dir)}, sort_keys=True))
    return 0


def _cmd_patterns(args) -> int:
    try:
        catalog = retvis.enumerate_patterns(args.m)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.dot:
        args.dot.mkdir(parents=True, exist_ok=True)
        for index, (pattern, symmetry) in enumerate(catalog):
            path = args.dot / f"pattern_{args.m}_{index:04d}.dot"
            path.write_text(io.pattern_to_dot(pattern, symmetry, name=f"pattern_{index}"))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "m": args.m,
                    "count": len(catalog),
                    "patterns": [
                        json.loads(io.pattern_to_json(p, s)) for p, s in catalog
                    ],
                },
                sort_keys=True,
            )
        )
    else:
        print(f"{len(catalog)} patterns with {args.m} vertices")
        for pattern, symmetry in catalog:
            print(f"  edges={pattern.edges} symmetries={symmetry}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
