"""Package permission lattice.

A permission set is a plain ``frozenset`` of tag strings drawn from the
four canonical tags.  ``all`` is the top of the lattice: it subsumes the
three atoms, so the canonical (normalized) form of any set containing
``all`` is exactly ``{all}``.  Every operation below expects or produces
normalized sets unless stated otherwise; all of them are pure.

Declared permissions live in a ``permissions.json`` file at the package
root: a JSON object with a single ``"permissions"`` key mapping to an
array of tag strings.
"""

from __future__ import annotations

import json
import os
from typing import Iterable, Optional

PermissionSet = frozenset[str]

NETWORK = "network"
FILESYSTEM = "filesystem"
PROCESS = "process"
ALL = "all"

TAGS = frozenset({NETWORK, FILESYSTEM, PROCESS, ALL})
ATOMS = (NETWORK, FILESYSTEM, PROCESS)

#: Hints for tags people plausibly type instead of the canonical ones.
_TAG_HINTS = {
    "fs": FILESYSTEM,
    "file": FILESYSTEM,
    "files": FILESYSTEM,
    "net": NETWORK,
    "http": NETWORK,
    "proc": PROCESS,
    "child_process": PROCESS,
}

EMPTY: PermissionSet = frozenset()
ALL_SET: PermissionSet = frozenset({ALL})

MANIFEST_NAME = "permissions.json"


class ManifestError(ValueError):
    """Raised for a malformed or unknown-tag permissions manifest."""


def perm_set(*tags: str) -> PermissionSet:
    """Build a normalized set from tag strings, validating each tag."""
    for t in tags:
        if t not in TAGS:
            raise ValueError(f"unknown permission tag {t!r}")
    return normalize(frozenset(tags))


def normalize(s: Iterable[str]) -> PermissionSet:
    """Canonical form: collapse any set containing ``all`` to ``{all}``."""
    s = frozenset(s)
    if ALL in s:
        return ALL_SET
    return s


def subset_of(a: PermissionSet, b: PermissionSet) -> bool:
    """Lattice order on normalized sets.

    ``{all}`` is above everything; otherwise ordinary set inclusion of
    the atoms.
    """
    if b == ALL_SET:
        return True
    return ALL not in a and a <= b


def union(a: PermissionSet, b: PermissionSet) -> PermissionSet:
    """Least upper bound (normalized)."""
    return normalize(a | b)


def import_allowed(importer: PermissionSet, importee: PermissionSet) -> bool:
    """May a module with ``importer`` permissions import one with ``importee``?

    Allowed when the importer holds ``all`` or when the importee's
    permissions are the same or fewer than the importer's.
    """
    if importer == ALL_SET:
        return True
    return subset_of(importee, importer)


def parse_manifest(text: str) -> PermissionSet:
    """Parse a ``permissions.json`` document into a normalized set.

    Duplicate tags are tolerated on input.  Unknown tags are rejected,
    with a hint when the tag looks like a common alias.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid permissions manifest: {exc}") from exc
    if not isinstance(doc, dict) or "permissions" not in doc:
        raise ManifestError(
            'invalid permissions manifest: expected an object with a "permissions" key'
        )
    entries = doc["permissions"]
    if not isinstance(entries, list):
        raise ManifestError('invalid permissions manifest: "permissions" must be an array')
    tags = []
    for entry in entries:
        if not isinstance(entry, str):
            raise ManifestError(f"invalid permissions manifest: non-string entry {entry!r}")
        if entry not in TAGS:
            hint = _TAG_HINTS.get(entry)
            if hint:
                raise ManifestError(
                    f"unknown permission tag {entry!r}; canonical tag is {hint!r}"
                )
            raise ManifestError(f"unknown permission tag {entry!r}")
        tags.append(entry)
    return normalize(tags)


def serialize_manifest(s: PermissionSet) -> str:
    """Render a manifest document for a (normalized) set; order-independent."""
    return json.dumps({"permissions": sorted(normalize(s))}, indent=2) + "\n"


def read_declared(package_dir: str) -> Optional[PermissionSet]:
    """Read the package's declared permissions, or None when undeclared.

    Absence of the manifest file means "undeclared"; the caller decides
    whether to fall back to inference.
    """
    path = os.path.join(package_dir, MANIFEST_NAME)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        return None
    return parse_manifest(text)


def write_declared(package_dir: str, s: PermissionSet) -> None:
    path = os.path.join(package_dir, MANIFEST_NAME)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_manifest(s))


def perm_str(s: PermissionSet) -> str:
    """Stable human-readable rendering, e.g. ``{filesystem, network}``."""
    return "{" + ", ".join(sorted(s)) + "}"
