import json
import os

import pytest

from pkgperm.cli import main

from tests.conftest import CORPUS30, ESCALATION, write_package


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestInfer:
    def test_pure_package(self, capsys, tmp_path):
        pkg = write_package(str(tmp_path), "pure", {"index.js": "module.exports = (a, b) => a + b"})
        code, out, _ = run_cli(capsys, "infer", pkg)
        assert code == 0
        assert "direct:   {}" in out

    def test_fig1b_fixture(self, capsys, tmp_path):
        pkg = write_package(str(tmp_path), "leaky", {
            "index.js": 'var fs = require("fs");\nvar p = require("path");\nvar https = require("https");\n'
        })
        code, out, _ = run_cli(capsys, "infer", pkg, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["direct"] == ["filesystem", "network"]

    def test_missing_path_usage_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "infer", str(tmp_path / "missing"))
        assert code == 1

    def test_strict_parse_failure(self, capsys, tmp_path):
        pkg = write_package(str(tmp_path), "broken", {"index.js": "var x = ;"})
        code, _, _ = run_cli(capsys, "infer", pkg, "--strict")
        assert code == 2
        code, _, _ = run_cli(capsys, "infer", pkg)
        assert code == 0

    def test_json_schema(self, capsys, tmp_path):
        pkg = write_package(str(tmp_path), "s", {"index.js": 'require("fs")'})
        _, out, _ = run_cli(capsys, "infer", pkg, "--json")
        doc = json.loads(out)
        assert set(doc) == {"package", "version", "direct", "declared", "evidence", "warnings"}


class TestAudit:
    def test_corpus_table(self, capsys):
        code, out, _ = run_cli(capsys, "audit", CORPUS30)
        assert code == 0
        assert "no perm." in out and "all perm." in out

    def test_corpus_json_percentages(self, capsys):
        code, out, _ = run_cli(capsys, "audit", CORPUS30, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] == 30
        total_pct = sum(c["percent"] for c in doc["categories"].values())
        assert abs(total_pct - 100.0) < 0.5
        assert set(doc["categories"]) == {
            "none", "network-only", "filesystem-only", "process-only", "multiple", "all",
        }

    def test_single_fs_package_is_100_percent(self, capsys, tmp_path):
        corpus = tmp_path / "corpus"
        write_package(str(corpus), "only-fs", {"index.js": 'require("fs")'})
        code, out, _ = run_cli(capsys, "audit", str(corpus), "--json")
        doc = json.loads(out)
        assert doc["categories"]["filesystem-only"] == {"count": 1, "percent": 100.0}

    def test_dependency_on_all_package_lands_in_all_bucket(self, capsys, tmp_path):
        corpus = tmp_path / "corpus"
        write_package(str(corpus), "evil-dep", {"index.js": "eval(x)"})
        write_package(str(corpus), "user", {"index.js": 'require("evil-dep")'},
                      dependencies={"evil-dep": "*"})
        _, out, _ = run_cli(capsys, "audit", str(corpus), "--json")
        doc = json.loads(out)
        assert doc["packages"]["user@1.0.0"]["category"] == "all"

    def test_empty_corpus_is_error(self, capsys, tmp_path):
        empty = tmp_path / "corpus"
        empty.mkdir()
        code, _, err = run_cli(capsys, "audit", str(empty))
        assert code == 1
        assert "empty corpus" in err


class TestCheckImport:
    def test_allow(self, capsys, tmp_path):
        imp = write_package(str(tmp_path), "imp", {"index.js": ""}, declared=["all"])
        dep = write_package(str(tmp_path), "dep", {"index.js": ""}, declared=["network", "process"])
        code, out, _ = run_cli(capsys, "check-import", imp, dep)
        assert code == 0 and out.startswith("allow")

    def test_deny_exit_3(self, capsys, tmp_path):
        imp = write_package(str(tmp_path), "imp", {"index.js": ""}, declared=[])
        dep = write_package(str(tmp_path), "dep", {"index.js": ""}, declared=["filesystem"])
        code, out, _ = run_cli(capsys, "check-import", imp, dep)
        assert code == 3 and out.startswith("deny")

    def test_infer_fallback(self, capsys, tmp_path):
        imp = write_package(str(tmp_path), "imp", {"index.js": 'require("https")'})
        dep = write_package(str(tmp_path), "dep", {"index.js": 'require("net")'})
        code, out, _ = run_cli(capsys, "check-import", imp, dep, "--infer", "--json")
        assert code == 0
        assert json.loads(out) == {"importer": ["network"], "importee": ["network"], "allowed": True}


class TestDiff:
    ROOT = os.path.join(ESCALATION, "root.json")
    DAY1 = os.path.join(ESCALATION, "day1")
    DAY2 = os.path.join(ESCALATION, "day2")

    def test_escalation_increased(self, capsys):
        code, out, _ = run_cli(capsys, "diff", self.DAY1, self.DAY2, self.ROOT, "--json")
        assert code == 0
        lines = [json.loads(line) for line in out.strip().splitlines()]
        events = [l for l in lines if l.get("type") == "update"]
        assert len(events) == 1
        assert events[0]["class"] == "increased"
        summary = lines[-1]["summary"]
        assert summary == {"total": 1, "byClass": {"increased": 1}}

    def test_fail_on_increase_exit_3(self, capsys):
        code, _, _ = run_cli(capsys, "diff", self.DAY1, self.DAY2, self.ROOT, "--fail-on-increase")
        assert code == 3

    def test_identical_snapshots_empty(self, capsys):
        code, out, _ = run_cli(capsys, "diff", self.DAY1, self.DAY1, self.ROOT, "--json")
        assert code == 0
        lines = [json.loads(line) for line in out.strip().splitlines()]
        assert lines[-1]["summary"]["total"] == 0


class TestRewrite:
    def test_stdout_rewrite(self, capsys, tmp_path):
        src = tmp_path / "m.js"
        src.write_text("z.cache;")
        code, out, _ = run_cli(capsys, "rewrite", str(src))
        assert code == 0
        assert out.strip() == "global['z']['cache']"

    def test_all_perms_skip(self, capsys, tmp_path):
        src = tmp_path / "m.js"
        src.write_text("eval(x)")
        code, out, _ = run_cli(capsys, "rewrite", str(src), "--perms", "all", "--json")
        doc = json.loads(out)
        assert doc["skipped"] and doc["code"] == "eval(x)"


class TestInstrumentCommand:
    def test_instrument_tree(self, capsys, tmp_path):
        root = write_package(str(tmp_path / "tree"), "app", {"index.js": "console.log(1)"})
        out_dir = str(tmp_path / "out")
        code, out, _ = run_cli(capsys, "instrument", root, "-o", out_dir, "--json")
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"outDir", "totalChecks", "modules", "effective", "warnings"}
        assert os.path.exists(os.path.join(out_dir, "index.js"))


class TestUsage:
    def test_no_command(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == 1

    def test_unknown_command(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 1

    def test_missing_required_argument(self, capsys):
        code, _, _ = run_cli(capsys, "diff", "just-one-arg")
        assert code == 1
