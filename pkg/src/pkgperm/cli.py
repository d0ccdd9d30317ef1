"""pkgperm command line: infer, audit, compose, check-import, rewrite,
instrument, diff.

Exit codes: 0 ok/allow, 1 usage error, 2 analysis failure under
--strict, 3 policy denial (denied import, or --fail-on-increase with an
escalating update).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from pkgperm import permissions as P
from pkgperm.depgraph import (
    INCREASED,
    DependencyGraph,
    PackageId,
    PackageNode,
    RegistrySnapshot,
    ResolutionFailure,
    compose_effective,
    load_tree,
    replay_timeline,
    summarize_events,
)
from pkgperm.inference import (
    DYNAMIC_ALL,
    DYNAMIC_WARN_ONLY,
    infer_package,
    load_native_map,
    read_package_identity,
)
from pkgperm.instrument import InstrumentError, instrument_tree
from pkgperm.rewriter import rewrite_module

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANALYSIS = 2
EXIT_DENIED = 3

#: Table-I-shaped audit categories, in display order
AUDIT_CATEGORIES = (
    ("none", "no perm."),
    ("network-only", "only network perm."),
    ("filesystem-only", "only filesys. perm."),
    ("process-only", "only process perm."),
    ("multiple", "multiple perm."),
    ("all", "all perm."),
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="pkgperm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--native-map", metavar="FILE", help="override the native-module permission table")
        p.add_argument(
            "--dynamic-imports", choices=[DYNAMIC_ALL, DYNAMIC_WARN_ONLY], default=DYNAMIC_ALL,
            help="treat computed require targets as requiring all (default) or warn only",
        )

    p = sub.add_parser("infer", help="infer a package's direct permissions")
    p.add_argument("path")
    p.add_argument("--strict", action="store_true", help="exit 2 on parse failures")
    common(p)

    p = sub.add_parser("audit", help="categorize a corpus of packages by effective permissions")
    p.add_argument("corpus")
    common(p)

    p = sub.add_parser("compose", help="effective permissions over an installed tree")
    p.add_argument("tree")
    p.add_argument("--no-declared", action="store_true", help="ignore permissions.json, always infer")
    common(p)

    p = sub.add_parser("check-import", help="may importer import importee?")
    p.add_argument("importer")
    p.add_argument("importee")
    p.add_argument("--infer", action="store_true", help="fall back to inference when undeclared")
    common(p)

    p = sub.add_parser("rewrite", help="rewrite one module to stdout")
    p.add_argument("file")
    p.add_argument("--perms", default="", help="comma-separated permission tags of the module")
    p.add_argument("--seed", help="hex seed for check-function names")
    common(p)

    p = sub.add_parser("instrument", help="write an enforced mirror of an installed tree")
    p.add_argument("tree")
    p.add_argument("-o", "--out", required=True, metavar="OUTDIR")
    p.add_argument("--seed", help="hex seed for check-function names")
    p.add_argument("--no-declared", action="store_true", help="ignore permissions.json, always infer")
    common(p)

    p = sub.add_parser("diff", help="classify permission changes between two registry snapshots")
    p.add_argument("snapshot_a")
    p.add_argument("snapshot_b")
    p.add_argument("root_manifest", help="package.json whose dependency tree is replayed")
    p.add_argument("--fail-on-increase", action="store_true", help="exit 3 when any update increases permissions")
    common(p)

    return parser


def _seed_from(args) -> int:
    text = getattr(args, "seed", None) or os.environ.get("PKGPERM_SEED")
    if not text:
        return 0
    try:
        return int(text, 16)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def _native_map(args) -> Optional[dict]:
    if args.native_map:
        return load_native_map(args.native_map)
    return None


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (FileNotFoundError, InstrumentError, P.ManifestError, ValueError) as exc:
        print(f"pkgperm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    if args.command == "infer":
        return cmd_infer(args)
    if args.command == "audit":
        return cmd_audit(args)
    if args.command == "compose":
        return cmd_compose(args)
    if args.command == "check-import":
        return cmd_check_import(args)
    if args.command == "rewrite":
        return cmd_rewrite(args)
    if args.command == "instrument":
        return cmd_instrument(args)
    if args.command == "diff":
        return cmd_diff(args)
    raise AssertionError(args.command)


def cmd_infer(args) -> int:
    if not os.path.isdir(args.path):
        print(f"pkgperm: error: not a package directory: {args.path}", file=sys.stderr)
        return EXIT_USAGE
    report = infer_package(
        args.path, native_map=_native_map(args), dynamic_policy=args.dynamic_imports
    )
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(f"package:  {report.package}@{report.version}")
        print(f"direct:   {P.perm_str(report.direct)}")
        if report.declared is not None:
            print(f"declared: {P.perm_str(report.declared)}")
        for ev in report.evidence:
            print(f"  [{ev.kind}] {ev.file}:{ev.span[0]}-{ev.span[1]} {ev.detail}")
        for w in report.warnings:
            print(f"  warning: {w}")
    had_parse_failure = any("unparsable" in w for w in report.warnings)
    if args.strict and had_parse_failure:
        return EXIT_ANALYSIS
    return EXIT_OK


def categorize(effective: P.PermissionSet) -> str:
    s = P.normalize(effective)
    if not s:
        return "none"
    if s == P.ALL_SET:
        return "all"
    if len(s) > 1:
        return "multiple"
    return {
        P.NETWORK: "network-only",
        P.FILESYSTEM: "filesystem-only",
        P.PROCESS: "process-only",
    }[next(iter(s))]


def audit_corpus(corpus_dir: str, native_map=None, dynamic_policy=DYNAMIC_ALL):
    """Infer every corpus package, compose across intra-corpus dependency
    edges (matched by name), and categorize each package."""
    subdirs = sorted(
        d for d in os.listdir(corpus_dir)
        if os.path.isdir(os.path.join(corpus_dir, d))
    )
    if not subdirs:
        raise ValueError(f"empty corpus: {corpus_dir}")
    graph = DependencyGraph()
    by_name: dict[str, PackageId] = {}
    deps: dict[PackageId, list[str]] = {}
    for d in subdirs:
        pkg_dir = os.path.join(corpus_dir, d)
        report = infer_package(pkg_dir, native_map=native_map, dynamic_policy=dynamic_policy)
        pid = PackageId(report.package, report.version)
        graph.nodes[pid] = PackageNode(
            id=pid, direct=report.direct, declared=report.declared, paths=[pkg_dir]
        )
        by_name[report.package] = pid
        manifest_path = os.path.join(pkg_dir, "package.json")
        try:
            with open(manifest_path, encoding="utf-8") as fh:
                manifest = json.load(fh)
            deps[pid] = sorted((manifest.get("dependencies") or {}).keys())
        except (OSError, json.JSONDecodeError):
            deps[pid] = []
    for pid, names in deps.items():
        for name in names:
            if name in by_name:
                graph.add_edge(pid, by_name[name])
            else:
                graph.unresolved.append((pid, name))
    effective = compose_effective(graph)
    categories = {pid: categorize(eff) for pid, eff in effective.items()}
    return graph, effective, categories


def cmd_audit(args) -> int:
    if not os.path.isdir(args.corpus):
        print(f"pkgperm: error: not a directory: {args.corpus}", file=sys.stderr)
        return EXIT_USAGE
    graph, effective, categories = audit_corpus(
        args.corpus, native_map=_native_map(args), dynamic_policy=args.dynamic_imports
    )
    total = len(categories)
    counts = {key: 0 for key, _ in AUDIT_CATEGORIES}
    for cat in categories.values():
        counts[cat] += 1
    if args.json:
        doc = {
            "total": total,
            "categories": {
                key: {"count": counts[key], "percent": round(100.0 * counts[key] / total, 1)}
                for key, _ in AUDIT_CATEGORIES
            },
            "packages": {
                str(pid): {"effective": sorted(effective[pid]), "category": categories[pid]}
                for pid in sorted(categories)
            },
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"{'Permissions':<22}{'Count':>8}{'%':>8}")
        for key, label in AUDIT_CATEGORIES:
            pct = 100.0 * counts[key] / total
            print(f"{label:<22}{counts[key]:>8}{pct:>7.1f}%")
        print(f"{'total':<22}{total:>8}")
    return EXIT_OK


def cmd_compose(args) -> int:
    graph = load_tree(
        args.tree,
        prefer_declared=not args.no_declared,
        native_map=_native_map(args),
        dynamic_policy=args.dynamic_imports,
    )
    effective = compose_effective(graph)
    if args.json:
        doc = {
            "root": str(graph.root),
            "effective": {str(pid): sorted(s) for pid, s in sorted(effective.items())},
            "warnings": graph.warnings,
        }
        print(json.dumps(doc, indent=2))
    else:
        for pid in sorted(effective):
            print(f"{pid}: {P.perm_str(effective[pid])}")
        for w in graph.warnings:
            print(f"warning: {w}")
    return EXIT_OK


def _package_perms(path: str, infer: bool, args) -> P.PermissionSet:
    declared = P.read_declared(path)
    if declared is not None:
        return declared
    if infer:
        return infer_package(
            path, native_map=_native_map(args), dynamic_policy=args.dynamic_imports
        ).direct
    return P.EMPTY


def cmd_check_import(args) -> int:
    for path in (args.importer, args.importee):
        if not os.path.isdir(path):
            print(f"pkgperm: error: not a package directory: {path}", file=sys.stderr)
            return EXIT_USAGE
    importer = _package_perms(args.importer, args.infer, args)
    importee = _package_perms(args.importee, args.infer, args)
    allowed = P.import_allowed(importer, importee)
    if args.json:
        print(json.dumps({
            "importer": sorted(importer),
            "importee": sorted(importee),
            "allowed": allowed,
        }))
    else:
        verdict = "allow" if allowed else "deny"
        print(f"{verdict}: importer {P.perm_str(importer)}, importee {P.perm_str(importee)}")
    return EXIT_OK if allowed else EXIT_DENIED


def cmd_rewrite(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    perms = P.perm_set(*[t for t in args.perms.split(",") if t])
    result = rewrite_module(
        source, perms, seed=_seed_from(args), module_path=os.path.basename(args.file)
    )
    if args.json:
        print(json.dumps({
            "skipped": result.skipped,
            "skipReason": result.skip_reason,
            "insertedChecks": result.inserted_checks,
            "normalizedGlobals": result.normalized_globals,
            "checkFnName": result.check_fn_name,
            "code": result.code,
        }))
    else:
        print(result.code)
    return EXIT_OK


def cmd_instrument(args) -> int:
    graph = load_tree(
        args.tree,
        prefer_declared=not args.no_declared,
        native_map=_native_map(args),
        dynamic_policy=args.dynamic_imports,
    )
    effective = compose_effective(graph)
    summary = instrument_tree(
        graph, args.out, seed=_seed_from(args),
        native_map=_native_map(args), effective=effective,
    )
    if args.json:
        print(json.dumps(summary.to_json(), indent=2))
    else:
        for m in summary.modules:
            state = f"skipped ({m.reason})" if m.skipped else f"checks={m.inserted_checks}"
            print(f"{m.path}: {state}")
        print(f"total inserted checks: {summary.total_checks}")
        for w in summary.warnings:
            print(f"warning: {w}")
    return EXIT_OK


def cmd_diff(args) -> int:
    with open(args.root_manifest, encoding="utf-8") as fh:
        manifest = json.load(fh)
    root_deps = dict(manifest.get("dependencies") or {})
    snap_a = RegistrySnapshot.load(args.snapshot_a)
    snap_b = RegistrySnapshot.load(args.snapshot_b)
    events = replay_timeline(
        root_deps, [snap_a, snap_b],
        native_map=_native_map(args), dynamic_policy=args.dynamic_imports,
    )
    summary = summarize_events(events)
    if args.json:
        for ev in events:
            print(json.dumps(ev.to_json()))
        print(json.dumps({"summary": summary}))
    else:
        for ev in events:
            if isinstance(ev, ResolutionFailure):
                print(f"resolution failure in {ev.snapshot}: {ev.reason}")
            else:
                print(
                    f"{ev.package}: {ev.old_version} -> {ev.new_version} "
                    f"[{ev.klass}] {P.perm_str(ev.old_effective)} -> {P.perm_str(ev.new_effective)}"
                )
        print(f"summary: {json.dumps(summary)}")
    if args.fail_on_increase and any(
        not isinstance(ev, ResolutionFailure) and ev.klass == INCREASED for ev in events
    ):
        return EXIT_DENIED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
