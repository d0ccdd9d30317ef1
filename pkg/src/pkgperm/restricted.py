"""Restricted object/property pairs guarded by the dynamic checks.

A property name maps to the set of base-object designators for which
access is restricted: the module-local `require` and `module` objects,
the global object, or a named native object (Object, Array, ...).
Accessing one of these pairs would bypass import mediation or enable
non-local mutation (prototype pollution), so the rewriter routes every
potentially matching access through a runtime check.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Designator:
    kind: str  # require | module | global | native
    name: str = ""  # native object name when kind == "native"

    def js_expr(self) -> str:
        """The module-local expression that evaluates to this object."""
        if self.kind == "native":
            return self.name
        return self.kind


REQUIRE = Designator("require")
MODULE = Designator("module")
GLOBAL = Designator("global")


def native_object(name: str) -> Designator:
    return Designator("native", name)


NATIVE_OBJECTS = (
    "Object", "Function", "Array", "String", "Number",
    "Boolean", "RegExp", "Date", "Reflect",
)

_MODULE_PROPS = ("paths", "_load", "globalPaths", "constructor", "parent", "children")
_GLOBAL_PROPS = ("eval", "Function", "process")
_PROTO_PROPS = ("prototype", "__proto__", "create", "setPrototypeOf")


@dataclass
class RestrictedTable:
    entries: dict[str, frozenset[Designator]] = field(default_factory=dict)

    def is_restricted_name(self, prop: str) -> bool:
        return prop in self.entries

    def designators(self, prop: str) -> frozenset[Designator]:
        return self.entries.get(prop, frozenset())

    def extended(self, prop: str, designators: frozenset[Designator]) -> "RestrictedTable":
        entries = dict(self.entries)
        entries[prop] = entries.get(prop, frozenset()) | designators
        return RestrictedTable(entries)


def default_table() -> RestrictedTable:
    natives = frozenset(native_object(n) for n in NATIVE_OBJECTS)
    entries: dict[str, frozenset[Designator]] = {"main": frozenset({REQUIRE})}
    for prop in _MODULE_PROPS:
        entries[prop] = frozenset({MODULE})
    for prop in _GLOBAL_PROPS:
        entries[prop] = frozenset({GLOBAL})
    for prop in _PROTO_PROPS:
        entries[prop] = natives
    return RestrictedTable(entries)


DEFAULT_TABLE = default_table()
