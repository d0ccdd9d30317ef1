"""Batch instrumentation: write an enforced mirror of an installed tree.

Every module of every package whose effective permissions lack `all`
is rewritten and prefixed with its shim; `all` packages are copied
verbatim (the skip rule).  Each package's mirrored directory receives a
permissions.json carrying its composed effective set, which is what the
emitted require-wrapper reads at runtime.  Output files are written
atomically and carry a marker header so a second run never
double-instruments.
"""

from __future__ import annotations

import hashlib
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from typing import Optional

from pkgperm import permissions as P
from pkgperm.depgraph import DependencyGraph, PackageId, compose_effective
from pkgperm.restricted import DEFAULT_TABLE, RestrictedTable
from pkgperm.rewriter import rewrite_module
from pkgperm.js.parser import JsSyntaxError
from pkgperm.shim import emit_shim

MARKER_PREFIX = "/* pkgperm-instrumented v1 "


class InstrumentError(Exception):
    pass


@dataclass
class ModuleReport:
    path: str  # relative to the tree root
    package: str
    skipped: bool
    reason: Optional[str] = None
    inserted_checks: int = 0
    normalized_globals: int = 0


@dataclass
class InstrumentSummary:
    out_dir: str
    modules: list[ModuleReport] = field(default_factory=list)
    effective: dict[PackageId, P.PermissionSet] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def total_checks(self) -> int:
        return sum(m.inserted_checks for m in self.modules)

    def to_json(self) -> dict:
        return {
            "outDir": self.out_dir,
            "totalChecks": self.total_checks,
            "modules": [
                {
                    "path": m.path,
                    "package": m.package,
                    "skipped": m.skipped,
                    "reason": m.reason,
                    "insertedChecks": m.inserted_checks,
                    "normalizedGlobals": m.normalized_globals,
                }
                for m in self.modules
            ],
            "effective": {str(pid): sorted(s) for pid, s in sorted(self.effective.items())},
            "warnings": list(self.warnings),
        }


def marker_line(source: str) -> str:
    checksum = hashlib.sha256(source.encode("utf-8")).hexdigest()
    return f"{MARKER_PREFIX}{checksum} */"


def is_instrumented(source: str) -> bool:
    return source.startswith(MARKER_PREFIX)


def assemble_module(source: str, rewritten, shim_text: str) -> str:
    """marker + directive prologue + shim + rewritten body."""
    lines = rewritten.code.split("\n")
    n_directives = len(rewritten.directives)
    head = [marker_line(source)]
    head.extend(lines[:n_directives])
    head.append(shim_text)
    body = "\n".join(lines[n_directives:])
    return "\n".join(head) + "\n" + body + "\n"


def _write_atomic(dest: str, data: bytes) -> None:
    os.makedirs(os.path.dirname(dest), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(dest), prefix=".pkgperm-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, dest)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def instrument_tree(
    graph: DependencyGraph,
    out_dir: str,
    seed: int = 0,
    table: RestrictedTable = DEFAULT_TABLE,
    native_map: Optional[dict[str, str]] = None,
    effective: Optional[dict[PackageId, P.PermissionSet]] = None,
) -> InstrumentSummary:
    if graph.root is None:
        raise InstrumentError("graph has no root package")
    root_dir = os.path.abspath(graph.nodes[graph.root].paths[0])
    out_dir = os.path.abspath(out_dir)
    if out_dir.startswith(root_dir + os.sep) or out_dir == root_dir:
        raise InstrumentError(f"output directory {out_dir} lies inside the source tree")
    if effective is None:
        effective = compose_effective(graph)

    # deepest-prefix ownership: module file -> containing package
    owners: list[tuple[str, PackageId]] = []
    for pid, node in graph.nodes.items():
        for p in node.paths:
            owners.append((os.path.abspath(p) + os.sep, pid))
    owners.sort(key=lambda item: len(item[0]), reverse=True)

    def owner_of(path: str) -> Optional[PackageId]:
        apath = os.path.abspath(path) + os.sep
        for prefix, pid in owners:
            if apath.startswith(prefix):
                return pid
        return None

    summary = InstrumentSummary(out_dir=out_dir, effective=effective)
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise InstrumentError(f"cannot create output directory {out_dir}: {exc}") from exc

    try:
        for cur, dirs, files in os.walk(root_dir):
            dirs.sort()
            for name in sorted(files):
                src_path = os.path.join(cur, name)
                rel = os.path.relpath(src_path, root_dir)
                dest = os.path.join(out_dir, rel)
                if not name.endswith(".js"):
                    os.makedirs(os.path.dirname(dest), exist_ok=True)
                    shutil.copyfile(src_path, dest)
                    continue
                pid = owner_of(src_path)
                perms = effective.get(pid, P.ALL_SET) if pid else P.ALL_SET
                _instrument_file(
                    src_path, dest, rel,
                    str(pid) if pid else "<unowned>",
                    perms, seed, table, native_map, summary,
                )
        for pid, node in graph.nodes.items():
            for p in node.paths:
                rel = os.path.relpath(os.path.abspath(p), root_dir)
                pkg_out = out_dir if rel == "." else os.path.join(out_dir, rel)
                os.makedirs(pkg_out, exist_ok=True)
                _write_atomic(
                    os.path.join(pkg_out, P.MANIFEST_NAME),
                    P.serialize_manifest(effective[pid]).encode("utf-8"),
                )
    except OSError as exc:
        raise InstrumentError(f"I/O failure under {out_dir}: {exc}") from exc
    return summary


def _instrument_file(
    src_path: str,
    dest: str,
    rel: str,
    package: str,
    perms: P.PermissionSet,
    seed: int,
    table: RestrictedTable,
    native_map: Optional[dict[str, str]],
    summary: InstrumentSummary,
) -> None:
    with open(src_path, encoding="utf-8", errors="replace") as fh:
        source = fh.read()
    if is_instrumented(source):
        _write_atomic(dest, source.encode("utf-8"))
        summary.modules.append(
            ModuleReport(rel, package, skipped=True, reason="already instrumented")
        )
        return
    if P.ALL in perms:
        _write_atomic(dest, source.encode("utf-8"))
        summary.modules.append(ModuleReport(rel, package, skipped=True, reason="holds all"))
        return
    try:
        result = rewrite_module(source, perms, table=table, seed=seed, module_path=rel)
    except JsSyntaxError as exc:
        _write_atomic(dest, source.encode("utf-8"))
        summary.modules.append(ModuleReport(rel, package, skipped=True, reason=f"parse error: {exc}"))
        summary.warnings.append(
            f"{rel}: unparsable module copied verbatim; inference treats it as opaque ({exc})"
        )
        return
    if result.skipped:
        _write_atomic(dest, source.encode("utf-8"))
        summary.modules.append(ModuleReport(rel, package, skipped=True, reason=result.skip_reason))
        if result.skip_reason not in ("holds all",):
            summary.warnings.append(f"{rel}: not rewritten ({result.skip_reason})")
        return
    shim_text = emit_shim(rel, result.check_fn_name, table=table, native_map=native_map)
    _write_atomic(dest, assemble_module(source, result, shim_text).encode("utf-8"))
    summary.modules.append(
        ModuleReport(
            rel, package, skipped=False,
            inserted_checks=result.inserted_checks,
            normalized_globals=result.normalized_globals,
        )
    )
