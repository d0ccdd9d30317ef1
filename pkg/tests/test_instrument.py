import json
import os

import pytest

from pkgperm import permissions as P
from pkgperm.depgraph import PackageId, load_tree
from pkgperm.instrument import (
    MARKER_PREFIX,
    InstrumentError,
    instrument_tree,
    is_instrumented,
    marker_line,
)

from tests.conftest import write_package


def simple_tree(tmp_path, root_declared=None, dep_files=None):
    root = write_package(
        str(tmp_path / "tree"), "app",
        {"index.js": 'var h = require("helper")\nconsole.log(h.go())'},
        dependencies={"helper": "*"},
        declared=root_declared,
    )
    write_package(
        os.path.join(root, "node_modules"), "helper",
        dep_files or {"index.js": "exports.go = function () { return 1 }"},
    )
    return root


class TestInstrumentTree:
    def test_marker_and_shim_present(self, tmp_path):
        root = simple_tree(tmp_path)
        out_dir = str(tmp_path / "out")
        summary = instrument_tree(load_tree(root), out_dir)
        with open(os.path.join(out_dir, "index.js")) as fh:
            text = fh.read()
        assert text.startswith(MARKER_PREFIX)
        assert "wrapRequire" in text
        assert summary.total_checks >= 0
        assert not summary.warnings

    def test_permissions_json_written_with_effective(self, tmp_path):
        root = simple_tree(tmp_path)
        out_dir = str(tmp_path / "out")
        instrument_tree(load_tree(root), out_dir)
        with open(os.path.join(out_dir, "permissions.json")) as fh:
            assert json.load(fh) == {"permissions": []}
        with open(os.path.join(out_dir, "node_modules", "helper", "permissions.json")) as fh:
            assert json.load(fh) == {"permissions": []}

    def test_all_package_copied_verbatim(self, tmp_path):
        root = simple_tree(tmp_path, root_declared=["all"])
        out_dir = str(tmp_path / "out")
        summary = instrument_tree(load_tree(root), out_dir)
        with open(os.path.join(root, "index.js")) as fh:
            original = fh.read()
        with open(os.path.join(out_dir, "index.js")) as fh:
            assert fh.read() == original
        by_path = {m.path: m for m in summary.modules}
        assert by_path["index.js"].skipped
        assert by_path["index.js"].reason == "holds all"
        # dependency still rewritten per its own permissions
        assert not by_path[os.path.join("node_modules", "helper", "index.js")].skipped

    def test_double_instrumentation_detected(self, tmp_path):
        root = simple_tree(tmp_path)
        out1 = str(tmp_path / "out1")
        out2 = str(tmp_path / "out2")
        instrument_tree(load_tree(root), out1)
        summary = instrument_tree(load_tree(out1), out2)
        for mod in summary.modules:
            if mod.path.endswith("index.js"):
                assert mod.skipped and mod.reason == "already instrumented"
        with open(os.path.join(out1, "index.js")) as fh:
            a = fh.read()
        with open(os.path.join(out2, "index.js")) as fh:
            assert fh.read() == a

    def test_unparsable_module_forces_all_by_inference(self, tmp_path):
        root = simple_tree(tmp_path, dep_files={"index.js": "exports.go = () => 1", "bad.js": "var x = ;"})
        out_dir = str(tmp_path / "out")
        summary = instrument_tree(load_tree(root), out_dir)
        by_path = {m.path: m for m in summary.modules}
        bad = by_path[os.path.join("node_modules", "helper", "bad.js")]
        assert bad.skipped and bad.reason == "holds all"

    def test_unparsable_module_with_declared_perms_warns(self, tmp_path):
        root = simple_tree(tmp_path, dep_files={"index.js": "exports.go = () => 1", "bad.js": "var x = ;"})
        helper_dir = os.path.join(root, "node_modules", "helper")
        with open(os.path.join(helper_dir, "permissions.json"), "w") as fh:
            json.dump({"permissions": []}, fh)
        out_dir = str(tmp_path / "out")
        summary = instrument_tree(load_tree(root), out_dir)
        assert any("bad.js" in w for w in summary.warnings)
        with open(os.path.join(root, "node_modules", "helper", "bad.js")) as fh:
            original = fh.read()
        with open(os.path.join(out_dir, "node_modules", "helper", "bad.js")) as fh:
            assert fh.read() == original

    def test_non_js_files_copied(self, tmp_path):
        root = simple_tree(tmp_path)
        with open(os.path.join(root, "data.txt"), "w") as fh:
            fh.write("payload")
        out_dir = str(tmp_path / "out")
        instrument_tree(load_tree(root), out_dir)
        with open(os.path.join(out_dir, "data.txt")) as fh:
            assert fh.read() == "payload"

    def test_unwritable_out_dir_reports_path(self, tmp_path):
        root = simple_tree(tmp_path)
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not dir")
        bad_out = str(blocker / "out")
        with pytest.raises(InstrumentError, match="blocker"):
            instrument_tree(load_tree(root), bad_out)

    def test_out_dir_inside_tree_rejected(self, tmp_path):
        root = simple_tree(tmp_path)
        with pytest.raises(InstrumentError, match="inside"):
            instrument_tree(load_tree(root), os.path.join(root, "mirror"))

    def test_seed_changes_check_fn_names(self, tmp_path):
        root = simple_tree(
            tmp_path, dep_files={"index.js": "exports.go = function () { return o[k] }"}
        )
        out1, out2 = str(tmp_path / "o1"), str(tmp_path / "o2")
        instrument_tree(load_tree(root), out1, seed=1)
        instrument_tree(load_tree(root), out2, seed=2)
        helper = os.path.join("node_modules", "helper", "index.js")
        with open(os.path.join(out1, helper)) as fh:
            a = fh.read()
        with open(os.path.join(out2, helper)) as fh:
            b = fh.read()
        assert a != b

    def test_summary_json_shape(self, tmp_path):
        root = simple_tree(tmp_path)
        summary = instrument_tree(load_tree(root), str(tmp_path / "out"))
        doc = summary.to_json()
        assert set(doc) == {"outDir", "totalChecks", "modules", "effective", "warnings"}


def test_marker_helpers():
    line = marker_line("source text")
    assert line.startswith(MARKER_PREFIX) and line.endswith("*/")
    assert is_instrumented(line + "\nrest")
    assert not is_instrumented("plain source")
