"""Dependency graphs: installed-tree ingestion, registry snapshots,
version resolution, transitive permission composition, and update
classification.

Effective permissions are the least fixpoint of

    effective(p) = direct(p) ∪ ⋃ { effective(q) : p depends on q }

computed over the resolved graph (installed copies), which is what the
runtime would load.  Cycles are fine: union is idempotent, the lattice
is finite, and iteration stops at the first unchanged round.
"""

from __future__ import annotations

import json
import os
import tarfile
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from pkgperm import permissions as P
from pkgperm.inference import infer_package, read_package_identity
from pkgperm.semver import Range, Version, max_satisfying

NO_PERMISSION = "no-permission"
UNCHANGED = "unchanged"
INCREASED = "increased"
DECREASED = "decreased"
MIXED = "mixed"


@dataclass(frozen=True, order=True)
class PackageId:
    name: str
    version: str

    def __str__(self) -> str:
        return f"{self.name}@{self.version}"


@dataclass
class PackageNode:
    id: PackageId
    direct: P.PermissionSet
    declared: Optional[P.PermissionSet] = None
    paths: list[str] = field(default_factory=list)
    dependencies: dict[str, str] = field(default_factory=dict)  # name -> range text


@dataclass
class DependencyGraph:
    nodes: dict[PackageId, PackageNode] = field(default_factory=dict)
    edges: dict[PackageId, list[PackageId]] = field(default_factory=dict)
    root: Optional[PackageId] = None
    unresolved: list[tuple[PackageId, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add_edge(self, src: PackageId, dst: PackageId) -> None:
        deps = self.edges.setdefault(src, [])
        if dst not in deps:
            deps.append(dst)

    def dependencies_of(self, pid: PackageId) -> list[PackageId]:
        return self.edges.get(pid, [])


class ResolutionError(Exception):
    pass


# --- installed trees ---------------------------------------------------------


def _read_manifest(package_dir: str) -> dict:
    try:
        with open(os.path.join(package_dir, "package.json"), encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return {}


def _package_direct(package_dir: str, prefer_declared: bool, **infer_kwargs):
    declared = None
    try:
        declared = P.read_declared(package_dir)
    except P.ManifestError:
        declared = None
    if prefer_declared and declared is not None:
        return declared, declared
    report = infer_package(package_dir, **infer_kwargs)
    return report.direct, declared


def load_tree(
    root_dir: str,
    prefer_declared: bool = True,
    **infer_kwargs,
) -> DependencyGraph:
    """Build the graph of physically installed packages under `root_dir`.

    A package's direct permissions come from its permissions.json when
    present (and `prefer_declared` holds), falling back to inference.
    Dependency edges follow the platform rule: the nearest enclosing
    node_modules directory that contains the named package.  Missing
    targets become unresolved-edge warnings, not failures.
    """
    root_dir = os.path.abspath(root_dir)
    graph = DependencyGraph()
    package_dirs: list[str] = []

    def scan(dir_: str) -> None:
        if os.path.isfile(os.path.join(dir_, "package.json")):
            package_dirs.append(dir_)
        nm = os.path.join(dir_, "node_modules")
        if os.path.isdir(nm):
            for entry in sorted(os.listdir(nm)):
                sub = os.path.join(nm, entry)
                if entry.startswith("@") and os.path.isdir(sub):
                    for scoped in sorted(os.listdir(sub)):
                        scan(os.path.join(sub, scoped))
                elif os.path.isdir(sub):
                    scan(sub)

    scan(root_dir)
    if not package_dirs:
        raise FileNotFoundError(f"no package.json found under {root_dir}")

    by_dir: dict[str, PackageId] = {}
    for pkg_dir in package_dirs:
        manifest = _read_manifest(pkg_dir)
        name, version = read_package_identity(pkg_dir)
        pid = PackageId(name, version)
        by_dir[pkg_dir] = pid
        if pid in graph.nodes:
            graph.nodes[pid].paths.append(pkg_dir)
            continue
        direct, declared = _package_direct(pkg_dir, prefer_declared, **infer_kwargs)
        deps = dict(manifest.get("dependencies") or {})
        graph.nodes[pid] = PackageNode(
            id=pid, direct=P.normalize(direct), declared=declared,
            paths=[pkg_dir], dependencies=deps,
        )
    graph.root = by_dir[root_dir]

    for pkg_dir, pid in by_dir.items():
        node = graph.nodes[pid]
        for dep_name in node.dependencies:
            target = _resolve_installed(pkg_dir, dep_name, root_dir)
            if target is None or target not in by_dir:
                graph.unresolved.append((pid, dep_name))
                graph.warnings.append(f"{pid}: dependency {dep_name!r} not installed")
            else:
                graph.add_edge(pid, by_dir[target])
    return graph


def _resolve_installed(from_dir: str, name: str, root_dir: str) -> Optional[str]:
    parts = name.split("/") if name.startswith("@") else [name]
    dir_ = os.path.abspath(from_dir)
    root_dir = os.path.abspath(root_dir)
    while True:
        candidate = os.path.join(dir_, "node_modules", *parts)
        if os.path.isfile(os.path.join(candidate, "package.json")):
            return candidate
        if dir_ == root_dir:
            return None
        parent = os.path.dirname(dir_)
        if parent == dir_:
            return None
        dir_ = parent


# --- registry snapshots --------------------------------------------------


@dataclass
class RegistrySnapshot:
    """A point-in-time registry: every (name, version) with its unpacked
    package contents, indexed by index.json = {name: [{version, path}]}."""

    label: str
    base_dir: str
    packages: dict[str, dict[str, str]]  # name -> {version -> package dir}

    @classmethod
    def load(cls, path: str, label: Optional[str] = None) -> "RegistrySnapshot":
        if os.path.isfile(path) and path.endswith((".tar", ".tgz", ".tar.gz")):
            extract_dir = tempfile.mkdtemp(prefix="pkgperm-snap-")
            with tarfile.open(path) as tf:
                tf.extractall(extract_dir)
            path = extract_dir
        index_path = os.path.join(path, "index.json")
        with open(index_path, encoding="utf-8") as fh:
            index = json.load(fh)
        packages: dict[str, dict[str, str]] = {}
        for name, entries in index.items():
            versions: dict[str, str] = {}
            for entry in entries:
                v = str(entry["version"])
                if v in versions:
                    raise ValueError(f"duplicate version {name}@{v} in {index_path}")
                versions[v] = os.path.join(path, entry["path"])
            packages[name] = versions
        return cls(label=label or os.path.basename(path.rstrip("/")), base_dir=path, packages=packages)

    def versions(self, name: str) -> list[Version]:
        return [Version.parse(v) for v in self.packages.get(name, {})]

    def package_dir(self, name: str, version: str) -> str:
        return self.packages[name][version]

    def manifest(self, name: str, version: str) -> dict:
        return _read_manifest(self.package_dir(name, version))


def resolve_versions(
    ranges: dict[str, str], registry: RegistrySnapshot
) -> dict[str, Version]:
    """Resolve each declared range to the highest satisfying version."""
    resolved: dict[str, Version] = {}
    for name, range_text in sorted(ranges.items()):
        range_ = Range.parse(range_text)
        available = registry.versions(name)
        best = max_satisfying(available, range_)
        if best is None:
            raise ResolutionError(
                f"no version of {name!r} satisfies {range_text!r}"
                f" (available: {', '.join(str(v) for v in sorted(available)) or 'none'})"
            )
        resolved[name] = best
    return resolved


def resolve_tree(
    root_deps: dict[str, str],
    registry: RegistrySnapshot,
    root_name: str = "<root>",
    root_version: str = "0.0.0",
    perm_cache: Optional[dict[PackageId, tuple]] = None,
    prefer_declared: bool = True,
    **infer_kwargs,
) -> DependencyGraph:
    """Resolve the full dependency tree of a manifest against a snapshot."""
    graph = DependencyGraph()
    root_id = PackageId(root_name, root_version)
    graph.root = root_id
    graph.nodes[root_id] = PackageNode(id=root_id, direct=P.EMPTY, dependencies=dict(root_deps))
    if perm_cache is None:
        perm_cache = {}

    queue: list[PackageId] = [root_id]
    while queue:
        pid = queue.pop()
        node = graph.nodes[pid]
        resolved = resolve_versions(node.dependencies, registry)
        for dep_name, dep_version in sorted(resolved.items()):
            dep_id = PackageId(dep_name, str(dep_version))
            if dep_id not in graph.nodes:
                pkg_dir = registry.package_dir(dep_name, str(dep_version))
                if dep_id in perm_cache:
                    direct, declared = perm_cache[dep_id]
                else:
                    direct, declared = _package_direct(pkg_dir, prefer_declared, **infer_kwargs)
                    perm_cache[dep_id] = (direct, declared)
                manifest = registry.manifest(dep_name, str(dep_version))
                graph.nodes[dep_id] = PackageNode(
                    id=dep_id, direct=P.normalize(direct), declared=declared,
                    paths=[pkg_dir], dependencies=dict(manifest.get("dependencies") or {}),
                )
                queue.append(dep_id)
            graph.add_edge(pid, dep_id)
    return graph


# --- composition -------------------------------------------------------------


def compose_effective(graph: DependencyGraph) -> dict[PackageId, P.PermissionSet]:
    effective, _rounds = compose_effective_with_rounds(graph)
    return effective


def compose_effective_with_rounds(
    graph: DependencyGraph,
) -> tuple[dict[PackageId, P.PermissionSet], int]:
    effective = {pid: P.normalize(node.direct) for pid, node in graph.nodes.items()}
    rounds = 0
    changed = True
    while changed:
        rounds += 1
        changed = False
        for pid in graph.nodes:
            acc = effective[pid]
            for dep in graph.dependencies_of(pid):
                if dep in effective:
                    acc = P.union(acc, effective[dep])
            if acc != effective[pid]:
                effective[pid] = acc
                changed = True
    return effective, rounds


# --- update classification --------------------------------------------------


def classify_update(old: P.PermissionSet, new: P.PermissionSet) -> str:
    if not old and not new:
        return NO_PERMISSION
    if old == new:
        return UNCHANGED
    if P.subset_of(old, new):
        return INCREASED
    if P.subset_of(new, old):
        return DECREASED
    return MIXED


@dataclass
class UpdateEvent:
    package: str
    old_version: str
    new_version: str
    old_effective: P.PermissionSet
    new_effective: P.PermissionSet
    klass: str

    def to_json(self) -> dict:
        return {
            "type": "update",
            "package": self.package,
            "oldVersion": self.old_version,
            "newVersion": self.new_version,
            "oldEffective": sorted(self.old_effective),
            "newEffective": sorted(self.new_effective),
            "class": self.klass,
        }


@dataclass
class ResolutionFailure:
    snapshot: str
    reason: str

    def to_json(self) -> dict:
        return {"type": "resolution-failure", "snapshot": self.snapshot, "reason": self.reason}


ReplayEvent = Union[UpdateEvent, ResolutionFailure]


def replay_timeline(
    root_deps: dict[str, str],
    snapshots: Iterable[RegistrySnapshot],
    **tree_kwargs,
) -> list[ReplayEvent]:
    """Resolve the tree once per snapshot (in order) and emit one event per
    package version change between consecutive resolvable snapshots, with
    effective permissions composed within each snapshot."""
    events: list[ReplayEvent] = []
    perm_cache: dict[PackageId, tuple] = {}
    prev: Optional[tuple[dict[str, str], dict]] = None  # (name->version, name->effective)

    for snapshot in snapshots:
        try:
            graph = resolve_tree(root_deps, snapshot, perm_cache=perm_cache, **tree_kwargs)
        except ResolutionError as exc:
            events.append(ResolutionFailure(snapshot.label, str(exc)))
            continue
        effective = compose_effective(graph)
        versions = {
            pid.name: pid.version for pid in graph.nodes if pid != graph.root
        }
        eff_by_name = {
            pid.name: effective[pid] for pid in graph.nodes if pid != graph.root
        }
        if prev is not None:
            old_versions, old_eff = prev
            for name in sorted(set(old_versions) & set(versions)):
                if old_versions[name] == versions[name]:
                    continue
                events.append(
                    UpdateEvent(
                        package=name,
                        old_version=old_versions[name],
                        new_version=versions[name],
                        old_effective=old_eff[name],
                        new_effective=eff_by_name[name],
                        klass=classify_update(old_eff[name], eff_by_name[name]),
                    )
                )
        prev = (versions, eff_by_name)
    return events


def summarize_events(events: Iterable[ReplayEvent]) -> dict:
    by_class: dict[str, int] = {}
    failures = 0
    total = 0
    for ev in events:
        if isinstance(ev, ResolutionFailure):
            failures += 1
            continue
        total += 1
        by_class[ev.klass] = by_class.get(ev.klass, 0) + 1
    summary = {"total": total, "byClass": by_class}
    if failures:
        summary["resolutionFailures"] = failures
    return summary
