import json
import os
import random

import pytest

from pkgperm import permissions as P
from pkgperm.depgraph import (
    DECREASED,
    INCREASED,
    MIXED,
    NO_PERMISSION,
    UNCHANGED,
    DependencyGraph,
    PackageId,
    PackageNode,
    RegistrySnapshot,
    ResolutionError,
    UpdateEvent,
    classify_update,
    compose_effective,
    compose_effective_with_rounds,
    load_tree,
    replay_timeline,
    resolve_versions,
    summarize_events,
)
from pkgperm.semver import Version

from tests.conftest import ESCALATION, write_package


def make_graph(direct: dict, edges: list) -> DependencyGraph:
    g = DependencyGraph()
    ids = {name: PackageId(name, "1.0.0") for name in direct}
    for name, perms in direct.items():
        g.nodes[ids[name]] = PackageNode(id=ids[name], direct=P.normalize(frozenset(perms)))
    for src, dst in edges:
        g.add_edge(ids[src], ids[dst])
    g.root = next(iter(ids.values()), None)
    return g


def eff_by_name(graph):
    return {pid.name: s for pid, s in compose_effective(graph).items()}


class TestCompose:
    def test_chain_propagates(self):
        g = make_graph({"A": [], "B": [], "C": ["network"]}, [("A", "B"), ("B", "C")])
        eff = eff_by_name(g)
        assert eff["A"] == eff["B"] == frozenset({"network"})

    def test_two_cycle(self):
        g = make_graph({"A": ["filesystem"], "B": []}, [("A", "B"), ("B", "A")])
        eff = eff_by_name(g)
        assert eff["A"] == eff["B"] == frozenset({"filesystem"})

    def test_all_inherited(self):
        g = make_graph({"A": [], "B": ["all"]}, [("A", "B")])
        assert eff_by_name(g)["A"] == P.ALL_SET

    def test_effective_superset_of_direct(self):
        g = make_graph(
            {"A": ["network"], "B": ["filesystem"], "C": ["process"]},
            [("A", "B"), ("B", "C"), ("C", "A")],
        )
        eff = compose_effective(g)
        for pid, node in g.nodes.items():
            assert P.subset_of(node.direct, eff[pid])

    def test_unresolved_edges_ignored(self):
        g = make_graph({"A": []}, [])
        g.unresolved.append((PackageId("A", "1.0.0"), "ghost"))
        assert eff_by_name(g)["A"] == frozenset()


def random_graph(rng: random.Random) -> DependencyGraph:
    n = rng.randint(1, 8)
    direct = {}
    for i in range(n):
        tags = [t for t in ("network", "filesystem", "process", "all") if rng.random() < 0.25]
        direct[f"p{i}"] = tags
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.3:
                edges.append((f"p{i}", f"p{j}"))
    return make_graph(direct, edges)


def reachable_union_oracle(graph: DependencyGraph) -> dict:
    """Brute force: effective = union of direct over all reachable nodes."""
    out = {}
    for start in graph.nodes:
        seen = set()
        stack = [start]
        acc = P.EMPTY
        while stack:
            pid = stack.pop()
            if pid in seen:
                continue
            seen.add(pid)
            acc = P.union(acc, graph.nodes[pid].direct)
            stack.extend(graph.dependencies_of(pid))
        out[start] = acc
    return out


class TestCompositionOracle:
    def test_matches_on_random_graphs(self):
        for seed in range(120):
            g = random_graph(random.Random(seed))
            assert compose_effective(g) == reachable_union_oracle(g), seed

    def test_round_bound(self):
        for seed in range(120):
            g = random_graph(random.Random(1000 + seed))
            _, rounds = compose_effective_with_rounds(g)
            assert rounds <= 4 * len(g.nodes), seed

    def test_monotone_under_edge_addition(self):
        for seed in range(40):
            rng = random.Random(seed)
            g = random_graph(rng)
            before = compose_effective(g)
            nodes = list(g.nodes)
            src, dst = rng.choice(nodes), rng.choice(nodes)
            g.add_edge(src, dst)
            after = compose_effective(g)
            for pid in g.nodes:
                assert P.subset_of(before[pid], after[pid]), seed


class TestClassify:
    @pytest.mark.parametrize("old,new,expected", [
        (set(), set(), NO_PERMISSION),
        ({"network"}, {"network"}, UNCHANGED),
        (set(), {"network"}, INCREASED),
        ({"network"}, {"network", "filesystem"}, INCREASED),
        ({"network", "filesystem"}, {"network"}, DECREASED),
        ({"all"}, {"network"}, DECREASED),
        ({"network"}, {"filesystem"}, MIXED),
        ({"network"}, {"all"}, INCREASED),
    ])
    def test_classes(self, old, new, expected):
        assert classify_update(frozenset(old), frozenset(new)) == expected

    def test_exhaustive_properties(self):
        import itertools
        tags = ("network", "filesystem", "process", "all")
        sets = {P.normalize(frozenset(c)) for r in range(5) for c in itertools.combinations(tags, r)}
        for a in sets:
            for b in sets:
                klass = classify_update(a, b)
                if a == b:
                    assert klass in (NO_PERMISSION, UNCHANGED)
                if klass == INCREASED:
                    assert P.subset_of(a, b) and a != b
                if klass == DECREASED:
                    assert P.subset_of(b, a) and a != b


class TestLoadTree:
    def test_two_nodes_one_edge(self, tmp_path):
        root = write_package(tmp_path, "root", {"index.js": 'require("a")'},
                             dependencies={"a": "^1.0.0"})
        write_package(os.path.join(root, "node_modules"), "a", {"index.js": "1"})
        g = load_tree(root)
        assert len(g.nodes) == 2
        assert len(g.edges.get(g.root, [])) == 1
        assert not g.unresolved

    def test_nearest_ancestor_resolution(self, tmp_path):
        root = write_package(
            tmp_path, "root", {"index.js": ""},
            dependencies={"a": "*", "b": "*"},
        )
        nm = os.path.join(root, "node_modules")
        a_dir = write_package(nm, "a", {"index.js": 'require("b")'}, dependencies={"b": "^1.0.0"})
        write_package(os.path.join(a_dir, "node_modules"), "b", {"index.js": ""}, version="1.0.0")
        write_package(nm, "b", {"index.js": ""}, version="2.0.0")
        g = load_tree(root)
        a_id = PackageId("a", "1.0.0")
        (a_dep,) = g.edges[a_id]
        assert a_dep == PackageId("b", "1.0.0")  # nested copy wins for a
        assert PackageId("b", "2.0.0") in g.edges[g.root]

    def test_missing_dependency_warns(self, tmp_path):
        root = write_package(tmp_path, "root", {"index.js": ""}, dependencies={"c": "*"})
        g = load_tree(root)
        assert g.unresolved == [(g.root, "c")]
        assert g.warnings

    def test_declared_preferred_over_inference(self, tmp_path):
        root = write_package(tmp_path, "root", {"index.js": 'require("fs")'}, declared=[])
        assert load_tree(root).nodes[PackageId("root", "1.0.0")].direct == frozenset()
        assert load_tree(root, prefer_declared=False).nodes[
            PackageId("root", "1.0.0")
        ].direct == frozenset({"filesystem"})


class TestResolveVersions:
    def make_snapshot(self, tmp_path, spec):
        snap_dir = tmp_path / "snap"
        index = {}
        for name, versions in spec.items():
            index[name] = []
            for v in versions:
                pdir = f"{name}-{v}"
                write_package(str(snap_dir), pdir, {"index.js": ""}, version=v)
                os.replace(
                    os.path.join(snap_dir, pdir, "package.json"),
                    os.path.join(snap_dir, pdir, "package.json"),
                )
                with open(os.path.join(snap_dir, pdir, "package.json"), "w") as fh:
                    json.dump({"name": name, "version": v}, fh)
                index[name].append({"version": v, "path": pdir})
        with open(snap_dir / "index.json", "w") as fh:
            json.dump(index, fh)
        return RegistrySnapshot.load(str(snap_dir))

    def test_caret_resolves_highest(self, tmp_path):
        snap = self.make_snapshot(tmp_path, {"x": ["1.2.3", "1.9.0", "2.0.0"]})
        assert resolve_versions({"x": "^1.2.0"}, snap) == {"x": Version.parse("1.9.0")}

    def test_exact_pin(self, tmp_path):
        snap = self.make_snapshot(tmp_path, {"x": ["1.4.2"]})
        assert resolve_versions({"x": "1.4.2"}, snap) == {"x": Version.parse("1.4.2")}

    def test_tilde(self, tmp_path):
        snap = self.make_snapshot(tmp_path, {"x": ["1.2.5", "1.3.0"]})
        assert resolve_versions({"x": "~1.2.0"}, snap) == {"x": Version.parse("1.2.5")}

    def test_unsatisfiable_names_range_and_available(self, tmp_path):
        snap = self.make_snapshot(tmp_path, {"x": ["1.0.0"]})
        with pytest.raises(ResolutionError, match=r"\^3\.0\.0.*1\.0\.0"):
            resolve_versions({"x": "^3.0.0"}, snap)


class TestReplay:
    def load_escalation(self):
        day1 = RegistrySnapshot.load(os.path.join(ESCALATION, "day1"))
        day2 = RegistrySnapshot.load(os.path.join(ESCALATION, "day2"))
        with open(os.path.join(ESCALATION, "root.json")) as fh:
            deps = json.load(fh)["dependencies"]
        return deps, day1, day2

    def test_escalation_classified_increased(self):
        deps, day1, day2 = self.load_escalation()
        events = replay_timeline(deps, [day1, day2])
        assert len(events) == 1
        ev = events[0]
        assert isinstance(ev, UpdateEvent)
        assert (ev.old_version, ev.new_version) == ("3.7.1", "3.7.2")
        assert ev.old_effective == frozenset()
        assert ev.klass == INCREASED

    def test_identical_snapshots_no_events(self):
        deps, day1, _ = self.load_escalation()
        assert replay_timeline(deps, [day1, day1]) == []

    def test_no_permission_update(self, tmp_path):
        for day, version in (("d1", "1.0.0"), ("d2", "1.0.1")):
            base = tmp_path / day
            write_package(str(base), f"lib-{version}", {"index.js": "module.exports = 1"})
            with open(base / f"lib-{version}" / "package.json", "w") as fh:
                json.dump({"name": "lib", "version": version}, fh)
            with open(base / "index.json", "w") as fh:
                json.dump({"lib": [{"version": version, "path": f"lib-{version}"}]}, fh)
        s1 = RegistrySnapshot.load(str(tmp_path / "d1"))
        s2 = RegistrySnapshot.load(str(tmp_path / "d2"))
        events = replay_timeline({"lib": "^1.0.0"}, [s1, s2])
        assert [e.klass for e in events] == [NO_PERMISSION]
        assert summarize_events(events) == {"total": 1, "byClass": {NO_PERMISSION: 1}}

    def test_resolution_failure_marker(self, tmp_path):
        deps, day1, day2 = self.load_escalation()
        empty = tmp_path / "empty"
        empty.mkdir()
        with open(empty / "index.json", "w") as fh:
            json.dump({}, fh)
        snap_bad = RegistrySnapshot.load(str(empty))
        events = replay_timeline(deps, [day1, snap_bad, day2])
        kinds = [type(e).__name__ for e in events]
        assert kinds == ["ResolutionFailure", "UpdateEvent"]
        assert summarize_events(events)["resolutionFailures"] == 1

    def test_duplicate_version_rejected(self, tmp_path):
        write_package(str(tmp_path), "x-1", {"index.js": ""})
        with open(tmp_path / "index.json", "w") as fh:
            json.dump({"x": [{"version": "1.0.0", "path": "x-1"}, {"version": "1.0.0", "path": "x-1"}]}, fh)
        with pytest.raises(ValueError, match="duplicate version"):
            RegistrySnapshot.load(str(tmp_path))
