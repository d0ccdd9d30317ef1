from pkgperm.js.parser import JsSyntaxError, parse_module  # noqa: F401
from pkgperm.js.codegen import generate  # noqa: F401
from pkgperm.js.scopes import ScopeTable, analyze_scopes  # noqa: F401
