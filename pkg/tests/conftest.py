import json
import os
import shutil
import subprocess

import pytest

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
CORPUS30 = os.path.join(FIXTURES, "corpus30")
ESCALATION = os.path.join(FIXTURES, "escalation")

NODE = shutil.which("node")

requires_node = pytest.mark.skipif(NODE is None, reason="node engine not available")


def run_node(path: str, *args, env=None, cwd=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [NODE, path, *args], capture_output=True, text=True, env=full_env, cwd=cwd,
        timeout=60,
    )


def write_package(root, name, files, version="1.0.0", dependencies=None, declared=None):
    """Lay out a package directory under `root` and return its path."""
    pkg_dir = os.path.join(root, name)
    os.makedirs(pkg_dir, exist_ok=True)
    manifest = {"name": name, "version": version}
    if dependencies:
        manifest["dependencies"] = dependencies
    with open(os.path.join(pkg_dir, "package.json"), "w") as fh:
        json.dump(manifest, fh)
    for rel, source in files.items():
        path = os.path.join(pkg_dir, rel)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(source)
    if declared is not None:
        with open(os.path.join(pkg_dir, "permissions.json"), "w") as fh:
            json.dump({"permissions": sorted(declared)}, fh)
    return pkg_dir
