"""Per-module enforcement shim.

The shim is emitted inline at the top of every rewritten module so the
instrumented tree runs under a stock engine.  It provides, under
module-unique names derived from the check-function name:

  * the restricted map binding property names to the module-local
    `require`/`module`/global/native objects;
  * the read check `<fn>(obj, p)`: undefined-safe, throws a
    PermissionViolation when (obj, p) is a restricted pair (identity
    comparison), otherwise returns obj[p];
  * write/update/delete companions `<fn>Assign` / `<fn>Update`;
  * a wrapped `require` comparing the importer's lazily loaded
    permissions against the importee's (declared permissions.json,
    absent means none; native modules use the built-in table).

Executed check counts are kept on `global.__pkgperm_counters__` and
written to $PKGPERM_COUNTERS_FILE at exit when that variable is set.
"""

from __future__ import annotations

import json
from typing import Optional

from pkgperm.inference import DEFAULT_NATIVE_MAP
from pkgperm.restricted import DEFAULT_TABLE, RestrictedTable


def emit_shim(
    module_path: str,
    check_fn_name: str,
    table: RestrictedTable = DEFAULT_TABLE,
    native_map: Optional[dict[str, str]] = None,
) -> str:
    fn = check_fn_name
    natives = native_map if native_map is not None else DEFAULT_NATIVE_MAP
    native_json = json.dumps({k: [v] for k, v in sorted(natives.items())})

    regs = []
    for prop in sorted(table.entries):
        for designator in sorted(table.entries[prop], key=lambda d: (d.kind, d.name)):
            regs.append(f"  reg({json.dumps(prop)}, {designator.js_expr()});")
    reg_lines = "\n".join(regs)

    # __filename identifies the module at runtime; the build-time path is
    # only a fallback for engines that do not provide it
    path_fallback = json.dumps(module_path)
    return f"""var {fn}_rt = (function (module, require, filename) {{
'use strict';
var fs = require('fs');
var path = require('path');
var natives = {native_json};
var counters = global.__pkgperm_counters__;
if (!counters) {{
  counters = global.__pkgperm_counters__ = {{ importChecks: 0, propertyChecks: 0 }};
  if (typeof process !== 'undefined' && process.env && process.env.PKGPERM_COUNTERS_FILE) {{
    process.on('exit', function () {{
      try {{
        fs.writeFileSync(process.env.PKGPERM_COUNTERS_FILE, JSON.stringify(counters));
      }} catch (e) {{}}
    }});
  }}
}}
function violation(site, message) {{
  var err = new Error('pkgperm violation (' + site + '): ' + message);
  err.name = 'PermissionViolation';
  err.pkgpermSite = site;
  return err;
}}
function readPerms(dir) {{
  try {{
    var doc = JSON.parse(fs.readFileSync(path.join(dir, 'permissions.json'), 'utf8'));
    if (doc && doc.permissions && doc.permissions.length !== undefined) {{
      return doc.permissions;
    }}
  }} catch (e) {{}}
  return null;
}}
function packageRoot(file) {{
  var dir = path.dirname(file);
  for (;;) {{
    if (fs.existsSync(path.join(dir, 'package.json'))) return dir;
    var parent = path.dirname(dir);
    if (parent === dir) return null;
    dir = parent;
  }}
}}
var ownPerms = null;
function importerPerms() {{
  if (ownPerms === null) {{
    var root = packageRoot(filename);
    ownPerms = (root && readPerms(root)) || [];
  }}
  return ownPerms;
}}
function importAllowed(importer, importee) {{
  if (importer.indexOf('all') !== -1) return true;
  for (var i = 0; i < importee.length; i++) {{
    if (importee[i] === 'all' || importer.indexOf(importee[i]) === -1) return false;
  }}
  return true;
}}
function wrapRequire(orig) {{
  function wrapped(spec) {{
    counters.importChecks++;
    if (typeof spec !== 'string' || spec.charAt(0) === '.' || path.isAbsolute(spec)) {{
      return orig(spec);
    }}
    var bare = spec.indexOf('node:') === 0 ? spec.slice(5) : spec;
    var needed;
    if (natives[bare]) {{
      needed = natives[bare];
    }} else {{
      var resolved = null;
      try {{ resolved = orig.resolve(spec); }} catch (e) {{ resolved = null; }}
      if (resolved === null || resolved === spec || resolved === 'node:' + bare) {{
        needed = [];
      }} else {{
        var root = packageRoot(resolved);
        needed = (root && readPerms(root)) || [];
      }}
    }}
    if (!importAllowed(importerPerms(), needed)) {{
      throw violation('import', 'require("' + spec + '") needs {{' + needed.join(', ') +
        '}} but importer holds {{' + importerPerms().join(', ') + '}} at ' + filename);
    }}
    return orig(spec);
  }}
  for (var k in orig) {{ try {{ wrapped[k] = orig[k]; }} catch (e) {{}} }}
  wrapped.resolve = orig.resolve;
  return wrapped;
}}
return {{ wrapRequire: wrapRequire, counters: counters, violation: violation, filename: filename, importerPerms: importerPerms }};
}})(module, require, typeof __filename !== 'undefined' ? __filename : {path_fallback});
require = {fn}_rt.wrapRequire(require);
var {fn}_map = Object.create(null);
(function (m) {{
  function reg(name, obj) {{ (m[name] || (m[name] = [])).push(obj); }}
{reg_lines}
}})({fn}_map);
function {fn}(obj, p) {{
  {fn}_rt.counters.propertyChecks++;
  if (obj == undefined) return undefined;
  var r = {fn}_map[p];
  if (r) {{
    for (var i = 0; i < r.length; i++) {{
      if (r[i] === obj) throw {fn}_rt.violation('property', 'read of restricted property "' + p + '" requires the all permission; holder has {{' + {fn}_rt.importerPerms().join(', ') + '}} at ' + {fn}_rt.filename);
    }}
  }}
  return obj[p];
}}
function {fn}Assign(obj, p, v, del) {{
  {fn}_rt.counters.propertyChecks++;
  var r = {fn}_map[p];
  if (r) {{
    for (var i = 0; i < r.length; i++) {{
      if (r[i] === obj) throw {fn}_rt.violation('assign', 'write to restricted property "' + p + '" requires the all permission; holder has {{' + {fn}_rt.importerPerms().join(', ') + '}} at ' + {fn}_rt.filename);
    }}
  }}
  if (del) return delete obj[p];
  obj[p] = v;
  return v;
}}
function {fn}Update(obj, p, op, v, post) {{
  {fn}_rt.counters.propertyChecks++;
  var r = {fn}_map[p];
  if (r) {{
    for (var i = 0; i < r.length; i++) {{
      if (r[i] === obj) throw {fn}_rt.violation('assign', 'update of restricted property "' + p + '" requires the all permission; holder has {{' + {fn}_rt.importerPerms().join(', ') + '}} at ' + {fn}_rt.filename);
    }}
  }}
  var old = obj[p];
  var val;
  switch (op) {{
    case 'inc': old = +old; val = old + 1; break;
    case 'dec': old = +old; val = old - 1; break;
    case '+': val = old + v; break;
    case '-': val = old - v; break;
    case '*': val = old * v; break;
    case '/': val = old / v; break;
    case '%': val = old % v; break;
    case '**': val = Math.pow(old, v); break;
    case '<<': val = old << v; break;
    case '>>': val = old >> v; break;
    case '>>>': val = old >>> v; break;
    case '&': val = old & v; break;
    case '|': val = old | v; break;
    case '^': val = old ^ v; break;
    default: throw {fn}_rt.violation('assign', 'unknown update operator ' + op);
  }}
  obj[p] = val;
  return post ? old : val;
}}"""
