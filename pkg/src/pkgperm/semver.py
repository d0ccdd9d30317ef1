"""Simplified semantic versioning: `major.minor.patch` with an optional
prerelease, and the range forms needed for update replay: exact,
caret (^), tilde (~), wildcard (*) and `>=`.

Prerelease versions only satisfy a range that itself carries a
prerelease with the same release tuple (the npm rule), so ordinary
ranges never resolve to prereleases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Optional

_VERSION_RE = re.compile(
    r"^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(?:-([0-9A-Za-z.-]+))?$"
)


class VersionError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Version:
    major: int
    minor: int
    patch: int
    prerelease: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "Version":
        m = _VERSION_RE.match(text.strip())
        if not m:
            raise VersionError(f"invalid version {text!r}")
        pre = ()
        if m.group(4) is not None:
            pre = tuple(
                int(part) if part.isdigit() else part
                for part in m.group(4).split(".")
            )
            if any(part == "" for part in m.group(4).split(".")):
                raise VersionError(f"invalid prerelease in {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)), pre)

    @property
    def release(self) -> tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def __str__(self) -> str:
        s = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            s += "-" + ".".join(str(p) for p in self.prerelease)
        return s

    def _key(self):
        # a prerelease sorts below its release; identifiers compare
        # numerically when both numeric, else numeric < alphanumeric
        pre = self.prerelease
        if not pre:
            pre_key = (1,)
        else:
            pre_key = (0,) + tuple(
                (0, p, "") if isinstance(p, int) else (1, 0, p) for p in pre
            )
        return (self.release, pre_key)

    def __lt__(self, other: "Version") -> bool:
        return self._key() < other._key()


@dataclass(frozen=True)
class Range:
    """One of: exact version, ^version, ~version, >=version, or *."""

    op: str  # "exact" | "caret" | "tilde" | "gte" | "any"
    base: Optional[Version] = None

    @classmethod
    def parse(cls, text: str) -> "Range":
        text = text.strip()
        if text in ("*", "", "x"):
            return cls("any")
        if text.startswith(">="):
            return cls("gte", Version.parse(text[2:]))
        if text.startswith("^"):
            return cls("caret", Version.parse(text[1:]))
        if text.startswith("~"):
            return cls("tilde", Version.parse(text[1:]))
        return cls("exact", Version.parse(text))

    def __str__(self) -> str:
        if self.op == "any":
            return "*"
        prefix = {"exact": "", "caret": "^", "tilde": "~", "gte": ">="}[self.op]
        return prefix + str(self.base)

    def allows_prerelease_of(self, v: Version) -> bool:
        return (
            self.base is not None
            and bool(self.base.prerelease)
            and self.base.release == v.release
        )

    def satisfies(self, v: Version) -> bool:
        if v.prerelease and not (self.op != "any" and self.allows_prerelease_of(v)):
            return False
        if self.op == "any":
            return True
        base = self.base
        if self.op == "exact":
            return v == base
        if self.op == "gte":
            return v >= base
        if self.op == "caret":
            if v < base:
                return False
            # ^ keeps the leftmost non-zero component fixed
            if base.major > 0:
                return v.major == base.major
            if base.minor > 0:
                return v.major == 0 and v.minor == base.minor
            return v.release == base.release
        if self.op == "tilde":
            if v < base:
                return False
            return v.major == base.major and v.minor == base.minor
        raise AssertionError(self.op)


def max_satisfying(versions, range_: Range) -> Optional[Version]:
    """Highest version satisfying the range, or None."""
    best = None
    for v in versions:
        if range_.satisfies(v) and (best is None or v > best):
            best = v
    return best
