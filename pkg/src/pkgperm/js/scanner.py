"""Scanner kernel selection.

Prefers the compiled Cython kernel when it has been built; otherwise the
pure-Python twin is used.  Both produce identical token streams.
"""

from __future__ import annotations

try:
    from pkgperm.js._scanner_c import scan  # type: ignore[import-not-found]

    COMPILED = True
except ImportError:
    from pkgperm.js._scanner_py import scan  # noqa: F401

    COMPILED = False
