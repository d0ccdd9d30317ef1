"""Permission inference: approximate which permissions a package's own
code requires by scanning its modules.

Triggers, in order of the scan:
  * calls to the module-provided `require` (or a one-step unreassigned
    alias of it) with a string-literal argument naming a permission-
    mapped native module;
  * free references to `eval` or `Function`, any `with` statement,
    statically detectable accesses to restricted object/property pairs
    (module.parent, Object.prototype, global.process, ...), and opaque
    constructs, all of which require the `all` permission;
  * `require` calls with computed arguments, handled per the
    dynamic-import policy.

Inference over-approximates: the runtime checks remain the authority.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from pkgperm import permissions as P
from pkgperm.js import ast as A
from pkgperm.js.parser import JsSyntaxError, parse_module
from pkgperm.js.scopes import ScopeTable, analyze_scopes
from pkgperm.restricted import DEFAULT_TABLE, GLOBAL, MODULE, REQUIRE, RestrictedTable, native_object

#: dynamic-import policies: "all" adds the all permission (conservative
#: default); "warn-only" merely records the warning
DYNAMIC_ALL = "all"
DYNAMIC_WARN_ONLY = "warn-only"


def load_native_map(path: Optional[str] = None) -> dict[str, str]:
    """Native-module → permission tag table (overridable data file)."""
    if path is None:
        text = resources.files("pkgperm").joinpath("native_modules.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    table = json.loads(text)
    for mod, tag in table.items():
        if tag not in P.TAGS:
            raise ValueError(f"native map entry {mod!r} has unknown tag {tag!r}")
    return table


DEFAULT_NATIVE_MAP = load_native_map()


def native_permission_of(module_name: str, native_map: Optional[dict[str, str]] = None) -> P.PermissionSet:
    """Permissions required to import a bare module specifier.

    Unmapped natives (path, util, crypto, ...) and third-party package
    names yield the empty set: package-to-package comparisons happen in
    composition and at the runtime import check, not here.
    """
    table = native_map if native_map is not None else DEFAULT_NATIVE_MAP
    name = module_name[5:] if module_name.startswith("node:") else module_name
    tag = table.get(name)
    return frozenset({tag}) if tag else P.EMPTY


@dataclass
class Evidence:
    kind: str  # native-import | eval-like | with-statement | restricted-path | dynamic-import | opaque
    file: str
    span: tuple[int, int]
    detail: str
    grants: P.PermissionSet

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "file": self.file,
            "span": list(self.span),
            "detail": self.detail,
            "grants": sorted(self.grants),
        }


@dataclass
class InferenceReport:
    package: str
    version: str
    direct: P.PermissionSet
    declared: Optional[P.PermissionSet]
    evidence: list[Evidence] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        doc = {
            "package": self.package,
            "version": self.version,
            "direct": sorted(self.direct),
            "declared": sorted(self.declared) if self.declared is not None else None,
            "evidence": [e.to_json() for e in self.evidence],
            "warnings": list(self.warnings),
        }
        return doc


def infer_module(
    ast: A.Program,
    scopes: ScopeTable,
    table: RestrictedTable = DEFAULT_TABLE,
    native_map: Optional[dict[str, str]] = None,
    dynamic_policy: str = DYNAMIC_ALL,
    file: str = "<module>",
) -> tuple[P.PermissionSet, list[Evidence]]:
    evidence: list[Evidence] = []
    perms: P.PermissionSet = P.EMPTY

    def add(ev: Evidence) -> None:
        nonlocal perms
        evidence.append(ev)
        perms = P.union(perms, ev.grants)

    # require("...") through the wrapper parameter or a one-step alias
    for call, literal in _require_calls(ast, scopes):
        if literal is not None:
            grants = native_permission_of(literal, native_map)
            if grants:
                add(Evidence("native-import", file, (call.start, call.end), literal, grants))
        else:
            grants = P.ALL_SET if dynamic_policy == DYNAMIC_ALL else P.EMPTY
            add(Evidence("dynamic-import", file, (call.start, call.end), "computed require target", grants))

    seen_eval: set[int] = set()
    for ident, scope in scopes.bindings.items():
        if scope is None and ident.name in ("eval", "Function") and id(ident) not in seen_eval:
            seen_eval.add(id(ident))
            add(Evidence("eval-like", file, (ident.start, ident.end), ident.name, P.ALL_SET))

    for node in A.walk(ast):
        t = type(node)
        if t is A.WithStatement:
            add(Evidence("with-statement", file, (node.start, node.end), "with", P.ALL_SET))
        elif t is A.OpaqueStatement:
            add(Evidence("opaque", file, (node.start, node.end), node.text[:40], P.ALL_SET))
        elif t is A.Identifier:
            # free reference to a global-designated restricted name other
            # than eval/Function (those are reported as eval-like)
            if (
                scopes.bindings.get(node, "absent") is None
                and node.name not in ("eval", "Function")
                and GLOBAL in table.designators(node.name)
            ):
                add(Evidence("restricted-path", file, (node.start, node.end), node.name, P.ALL_SET))
        elif t is A.MemberExpression:
            prop = _static_key(node)
            if prop is None or not table.is_restricted_name(prop):
                continue
            designators = table.designators(prop)
            base = _static_base(node.object, scopes)
            if base is not None and base in designators:
                detail = f"{base.js_expr()}.{prop}"
                add(Evidence("restricted-path", file, (node.start, node.end), detail, P.ALL_SET))

    return P.normalize(perms), evidence


def _static_key(node: A.MemberExpression) -> Optional[str]:
    if not node.computed:
        return node.property.name
    p = node.property
    if isinstance(p, A.Literal) and p.kind == "string":
        return p.value
    return None


def _static_base(node: A.Node, scopes: ScopeTable):
    """Designator the base expression statically denotes, if any."""
    if isinstance(node, A.Identifier):
        binding = scopes.bindings.get(node, "absent")
        if binding is scopes.module_scope:
            if node.name == "module":
                return MODULE
            if node.name == "require":
                return REQUIRE
        if binding is None:
            if node.name == "global":
                return GLOBAL
            return native_object(node.name)
    if isinstance(node, A.MemberExpression):
        # global.Object and friends: peel one `global.` prefix
        obj = node.object
        if (
            isinstance(obj, A.Identifier)
            and obj.name == "global"
            and scopes.bindings.get(obj, "absent") is None
        ):
            key = _static_key(node)
            if key is not None:
                return native_object(key)
    return None


def _require_calls(ast: A.Program, scopes: ScopeTable):
    """Require call sites: direct calls plus one-step aliases
    (`var r = require` with no later reassignment)."""
    yield from scopes.require_calls

    # candidate aliases: (scope, name) -> number of initializing declarators
    candidates: dict[tuple[int, str], int] = {}
    scope_by_key = {}
    for node in A.walk(ast):
        if isinstance(node, A.VariableDeclarator) and isinstance(node.id, A.Identifier):
            init = node.init
            if (
                isinstance(init, A.Identifier)
                and init.name == "require"
                and scopes.bindings.get(init, "absent") is scopes.module_scope
            ):
                scope = scopes.decl_scopes.get(node)
                if scope is not None:
                    key = (id(scope), node.id.name)
                    candidates[key] = candidates.get(key, 0) + 1
                    scope_by_key[key] = scope

    if not candidates:
        return
    # disqualify aliases that are ever written again
    for node in A.walk(ast):
        target = None
        if isinstance(node, A.AssignmentExpression) and isinstance(node.left, A.Identifier):
            target = node.left
        elif isinstance(node, A.UpdateExpression) and isinstance(node.argument, A.Identifier):
            target = node.argument
        if target is None:
            continue
        binding = scopes.bindings.get(target)
        if binding is None:
            continue
        key = (id(binding), target.name)
        if key in candidates:
            del candidates[key]

    if not candidates:
        return
    for node in A.walk(ast):
        if not isinstance(node, A.CallExpression):
            continue
        callee = node.callee
        if not isinstance(callee, A.Identifier) or callee.name == "require":
            continue
        binding = scopes.bindings.get(callee)
        if binding is None:
            continue
        key = (id(binding), callee.name)
        if key not in candidates or candidates[key] != 1:
            continue
        literal = None
        if len(node.arguments) == 1:
            arg = node.arguments[0]
            if isinstance(arg, A.Literal) and arg.kind == "string":
                literal = arg.value
        yield node, literal


def iter_module_files(package_dir: str):
    """Yield the package's own .js files (nested node_modules excluded)."""
    for root, dirs, files in os.walk(package_dir):
        dirs[:] = sorted(d for d in dirs if d not in ("node_modules", ".git"))
        for name in sorted(files):
            if name.endswith(".js"):
                yield os.path.join(root, name)


def infer_package(
    package_dir: str,
    table: RestrictedTable = DEFAULT_TABLE,
    native_map: Optional[dict[str, str]] = None,
    dynamic_policy: str = DYNAMIC_ALL,
) -> InferenceReport:
    """Scan every module of the package; the package's direct permissions
    are the union over modules.  Unreadable or unparsable modules are
    recorded as opaque (requiring all) and never abort the scan."""
    name, version = read_package_identity(package_dir)
    declared = None
    try:
        declared = P.read_declared(package_dir)
    except P.ManifestError as exc:
        declared = None
        manifest_warning = f"invalid permissions.json: {exc}"
    else:
        manifest_warning = None

    direct: P.PermissionSet = P.EMPTY
    evidence: list[Evidence] = []
    warnings: list[str] = []
    if manifest_warning:
        warnings.append(manifest_warning)

    for path in iter_module_files(package_dir):
        rel = os.path.relpath(path, package_dir)
        try:
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
            ast = parse_module(source)
        except (OSError, JsSyntaxError, UnicodeDecodeError) as exc:
            evidence.append(Evidence("opaque", rel, (0, 0), str(exc), P.ALL_SET))
            warnings.append(f"{rel}: unparsable module treated as opaque ({exc})")
            direct = P.union(direct, P.ALL_SET)
            continue
        scopes = analyze_scopes(ast)
        mod_perms, mod_evidence = infer_module(
            ast, scopes, table=table, native_map=native_map,
            dynamic_policy=dynamic_policy, file=rel,
        )
        for ev in mod_evidence:
            if ev.kind == "dynamic-import":
                warnings.append(f"{rel}: dynamic import at offset {ev.span[0]}")
        evidence.extend(mod_evidence)
        direct = P.union(direct, mod_perms)

    if declared is not None and not P.subset_of(direct, declared):
        warnings.append(
            f"declared permissions {P.perm_str(declared)} do not cover inferred {P.perm_str(direct)}"
        )
    return InferenceReport(
        package=name, version=version, direct=direct, declared=declared,
        evidence=evidence, warnings=warnings,
    )


def read_package_identity(package_dir: str) -> tuple[str, str]:
    manifest = os.path.join(package_dir, "package.json")
    try:
        with open(manifest, encoding="utf-8") as fh:
            doc = json.load(fh)
        return str(doc.get("name") or os.path.basename(package_dir)), str(doc.get("version", "0.0.0"))
    except (OSError, json.JSONDecodeError):
        return os.path.basename(os.path.abspath(package_dir)), "0.0.0"
