"""pkgperm: per-package least-privilege for JavaScript dependency trees."""

__version__ = "0.1.0"

from pkgperm.permissions import (  # noqa: F401
    ALL,
    ALL_SET,
    EMPTY,
    FILESYSTEM,
    NETWORK,
    PROCESS,
    PermissionSet,
    import_allowed,
    normalize,
    parse_manifest,
    perm_set,
    subset_of,
    union,
)
