"""Lexical scope analysis: classify every identifier reference as bound
or free (global).

The module itself is modeled as the platform's wrapper function, so
`require`, `module`, `exports`, `__dirname` and `__filename` are bound
parameters, never free.  `var` and function declarations hoist to the
nearest function-like scope; `let`/`const`/`class` bind in their block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from pkgperm.js import ast as A

MODULE_PARAMS = ("require", "module", "exports", "__dirname", "__filename")

FUNCTION_SCOPES = ("module", "function", "arrow")


@dataclass(eq=False)
class Scope:
    kind: str  # module | function | arrow | block | catch | for | class-name
    parent: Optional["Scope"] = None
    declared: dict[str, str] = field(default_factory=dict)  # name -> decl kind

    def declare(self, name: str, decl_kind: str) -> None:
        self.declared.setdefault(name, decl_kind)

    def function_scope(self) -> "Scope":
        s = self
        while s.kind not in FUNCTION_SCOPES:
            s = s.parent
        return s

    def lookup(self, name: str) -> Optional["Scope"]:
        s = self
        while s is not None:
            if name in s.declared:
                return s
            s = s.parent
        return None


@dataclass
class ScopeTable:
    bindings: dict[A.Identifier, Optional[Scope]]  # None = free
    module_scope: Scope
    has_with: bool = False
    has_eval_identifier: bool = False
    dynamic_require_sites: list[tuple[int, int]] = field(default_factory=list)
    #: every call whose callee is the module-provided `require`, paired with
    #: the string argument when it is a single plain literal
    require_calls: list[tuple[A.CallExpression, Optional[str]]] = field(default_factory=list)
    #: scope each variable declarator binds into (alias tracking needs it)
    decl_scopes: dict[A.VariableDeclarator, Scope] = field(default_factory=dict)

    def is_free(self, ident: A.Identifier) -> bool:
        return self.bindings.get(ident, None) is None

    def free_names(self) -> set[str]:
        return {i.name for i, s in self.bindings.items() if s is None}


def analyze_scopes(ast: A.Program) -> ScopeTable:
    analyzer = _Analyzer()
    analyzer.run(ast)
    table = ScopeTable(
        bindings=analyzer.bindings,
        module_scope=analyzer.module_scope,
        has_with=analyzer.has_with,
        decl_scopes=analyzer.decl_scopes,
    )
    table.has_eval_identifier = any(
        s is None and i.name == "eval" for i, s in table.bindings.items()
    )
    _collect_require_calls(ast, table)
    return table


def _collect_require_calls(ast: A.Program, table: ScopeTable) -> None:
    module_scope = table.module_scope
    for node in A.walk(ast):
        if not isinstance(node, A.CallExpression):
            continue
        callee = node.callee
        if not (isinstance(callee, A.Identifier) and callee.name == "require"):
            continue
        if table.bindings.get(callee) is not module_scope:
            continue  # shadowed require is an ordinary binding
        literal = None
        if len(node.arguments) == 1:
            arg = node.arguments[0]
            if isinstance(arg, A.Literal) and arg.kind == "string":
                literal = arg.value
        table.require_calls.append((node, literal))
        if literal is None:
            table.dynamic_require_sites.append((node.start, node.end))


class _Analyzer:
    def __init__(self) -> None:
        self.bindings: dict[A.Identifier, Optional[Scope]] = {}
        self.has_with = False
        self.module_scope = Scope(kind="module")
        for name in MODULE_PARAMS:
            self.module_scope.declare(name, "module-param")
        self.module_scope.declare("arguments", "implicit")
        self.scope_of: dict[A.Node, Scope] = {}
        self.decl_scopes: dict[A.VariableDeclarator, Scope] = {}

    def run(self, ast: A.Program) -> None:
        self.scope_of[ast] = self.module_scope
        for stmt in ast.body:
            self._declare(stmt, self.module_scope)
        for stmt in ast.body:
            self._resolve(stmt, self.module_scope)

    # -- pass A: declarations --------------------------------------------

    def _bind_pattern(self, pattern: A.Node, scope: Scope, decl_kind: str) -> None:
        if pattern is None:
            return
        t = type(pattern)
        if t is A.Identifier:
            scope.declare(pattern.name, decl_kind)
        elif t is A.AssignmentPattern:
            self._bind_pattern(pattern.left, scope, decl_kind)
        elif t is A.RestElement:
            self._bind_pattern(pattern.argument, scope, decl_kind)
        elif t is A.ArrayPattern:
            for el in pattern.elements:
                if el is not None:
                    self._bind_pattern(el, scope, decl_kind)
        elif t is A.ObjectPattern:
            for p in pattern.properties:
                if isinstance(p, A.RestElement):
                    self._bind_pattern(p.argument, scope, decl_kind)
                else:
                    self._bind_pattern(p.value, scope, decl_kind)

    def _declare(self, node: A.Node, scope: Scope) -> None:
        """Walk a statement subtree declaring names, creating nested scopes."""
        t = type(node)
        if t is A.VariableDeclaration:
            target = scope if node.kind != "var" else scope.function_scope()
            for d in node.declarations:
                self.decl_scopes[d] = target
                self._bind_pattern(d.id, target, node.kind)
                if d.init is not None:
                    self._declare(d.init, scope)
        elif t is A.FunctionDeclaration:
            if node.id is not None:
                scope.declare(node.id.name, "function")
                scope.function_scope().declare(node.id.name, "function")
            self._declare_function(node, scope, arrow=False)
        elif t is A.ClassDeclaration:
            if node.id is not None:
                scope.declare(node.id.name, "class")
            self._declare_class(node, scope)
        elif t is A.FunctionExpression:
            self._declare_function(node, scope, arrow=False, named_expr=True)
        elif t is A.ArrowFunctionExpression:
            self._declare_function(node, scope, arrow=True)
        elif t is A.ClassExpression:
            self._declare_class(node, scope)
        elif t is A.BlockStatement:
            inner = Scope(kind="block", parent=scope)
            self.scope_of[node] = inner
            for stmt in node.body:
                self._declare(stmt, inner)
        elif t is A.CatchClause:
            inner = Scope(kind="catch", parent=scope)
            self.scope_of[node] = inner
            if node.param is not None:
                self._bind_pattern(node.param, inner, "catch-param")
            # the catch block is its own block scope nested in the catch scope
            self._declare(node.body, inner)
        elif t in (A.ForStatement, A.ForInStatement, A.ForOfStatement):
            inner = Scope(kind="for", parent=scope)
            self.scope_of[node] = inner
            for child in node.children():
                self._declare(child, inner)
        elif t is A.SwitchStatement:
            self._declare(node.discriminant, scope)
            inner = Scope(kind="block", parent=scope)
            self.scope_of[node] = inner
            for case in node.cases:
                if case.test is not None:
                    self._declare(case.test, inner)
                for stmt in case.consequent:
                    self._declare(stmt, inner)
        elif t is A.WithStatement:
            self.has_with = True
            for child in node.children():
                self._declare(child, scope)
        elif t is A.Property:
            # value of a *pattern* property is a binding, handled by
            # _bind_pattern; this branch only sees expression properties
            for child in node.children():
                self._declare(child, scope)
        else:
            for child in node.children():
                self._declare(child, scope)

    def _declare_function(self, node, scope: Scope, arrow: bool, named_expr: bool = False) -> None:
        fn_scope = Scope(kind="arrow" if arrow else "function", parent=scope)
        self.scope_of[node] = fn_scope
        if not arrow:
            fn_scope.declare("arguments", "implicit")
        if named_expr and node.id is not None:
            fn_scope.declare(node.id.name, "function-name")
        for p in node.params:
            self._bind_pattern(p, fn_scope, "param")
            self._declare_pattern_defaults(p, fn_scope)
        body = node.body
        if isinstance(body, A.BlockStatement):
            # the body block shares the function scope for hoisting purposes
            # but still introduces a block scope for let/const
            inner = Scope(kind="block", parent=fn_scope)
            self.scope_of[body] = inner
            for stmt in body.body:
                self._declare(stmt, inner)
        else:
            self._declare(body, fn_scope)

    def _declare_pattern_defaults(self, pattern: A.Node, scope: Scope) -> None:
        """Default-value expressions inside parameter patterns may declare
        nested functions; walk them."""
        if pattern is None:
            return
        t = type(pattern)
        if t is A.AssignmentPattern:
            self._declare(pattern.right, scope)
            self._declare_pattern_defaults(pattern.left, scope)
        elif t is A.RestElement:
            self._declare_pattern_defaults(pattern.argument, scope)
        elif t is A.ArrayPattern:
            for el in pattern.elements:
                if el is not None:
                    self._declare_pattern_defaults(el, scope)
        elif t is A.ObjectPattern:
            for p in pattern.properties:
                if isinstance(p, A.RestElement):
                    self._declare_pattern_defaults(p.argument, scope)
                else:
                    if p.computed:
                        self._declare(p.key, scope)
                    self._declare_pattern_defaults(p.value, scope)

    def _declare_class(self, node, scope: Scope) -> None:
        cls_scope = Scope(kind="class-name", parent=scope)
        self.scope_of[node] = cls_scope
        if node.id is not None:
            cls_scope.declare(node.id.name, "class-name")
        if node.superclass is not None:
            self._declare(node.superclass, cls_scope)
        for m in node.body.body:
            if m.computed:
                self._declare(m.key, cls_scope)
            self._declare_function(m.value, cls_scope, arrow=False)

    # -- pass B: reference resolution ----------------------------------------

    def _ref(self, ident: A.Identifier, scope: Scope) -> None:
        self.bindings[ident] = scope.lookup(ident.name)

    def _resolve_pattern(self, pattern: A.Node, scope: Scope, binding: bool) -> None:
        """Identifiers in binding patterns are declarations (skipped); in
        assignment patterns they are write references."""
        if pattern is None:
            return
        t = type(pattern)
        if t is A.Identifier:
            if not binding:
                self._ref(pattern, scope)
        elif t is A.MemberExpression:
            self._resolve(pattern, scope)
        elif t is A.AssignmentPattern:
            self._resolve_pattern(pattern.left, scope, binding)
            self._resolve(pattern.right, scope)
        elif t is A.RestElement:
            self._resolve_pattern(pattern.argument, scope, binding)
        elif t is A.ArrayPattern:
            for el in pattern.elements:
                if el is not None:
                    self._resolve_pattern(el, scope, binding)
        elif t is A.ObjectPattern:
            for p in pattern.properties:
                if isinstance(p, A.RestElement):
                    self._resolve_pattern(p.argument, scope, binding)
                else:
                    if p.computed:
                        self._resolve(p.key, scope)
                    self._resolve_pattern(p.value, scope, binding)
        else:
            self._resolve(pattern, scope)

    def _resolve(self, node: A.Node, scope: Scope) -> None:
        if node is None:
            return
        t = type(node)
        if t is A.Identifier:
            self._ref(node, scope)
        elif t is A.VariableDeclaration:
            for d in node.declarations:
                self._resolve_pattern(d.id, scope, binding=True)
                if d.init is not None:
                    self._resolve(d.init, scope)
        elif t in (A.FunctionDeclaration, A.FunctionExpression, A.ArrowFunctionExpression):
            fn_scope = self.scope_of[node]
            for p in node.params:
                self._resolve_pattern(p, fn_scope, binding=True)
            body = node.body
            if isinstance(body, A.BlockStatement):
                inner = self.scope_of[body]
                for stmt in body.body:
                    self._resolve(stmt, inner)
            else:
                self._resolve(body, fn_scope)
        elif t in (A.ClassDeclaration, A.ClassExpression):
            cls_scope = self.scope_of[node]
            if node.superclass is not None:
                self._resolve(node.superclass, cls_scope)
            for m in node.body.body:
                if m.computed:
                    self._resolve(m.key, cls_scope)
                self._resolve(m.value, cls_scope)
        elif t is A.BlockStatement:
            inner = self.scope_of[node]
            for stmt in node.body:
                self._resolve(stmt, inner)
        elif t is A.CatchClause:
            inner = self.scope_of[node]
            if node.param is not None:
                self._resolve_pattern(node.param, inner, binding=True)
            self._resolve(node.body, inner)
        elif t in (A.ForStatement, A.ForInStatement, A.ForOfStatement):
            inner = self.scope_of[node]
            if t is A.ForStatement:
                self._resolve(node.init, inner)
                self._resolve(node.test, inner)
                self._resolve(node.update, inner)
            else:
                if isinstance(node.left, A.VariableDeclaration):
                    self._resolve(node.left, inner)
                else:
                    self._resolve_pattern(node.left, inner, binding=False)
                self._resolve(node.right, inner)
            self._resolve(node.body, inner)
        elif t is A.SwitchStatement:
            self._resolve(node.discriminant, scope)
            inner = self.scope_of[node]
            for case in node.cases:
                if case.test is not None:
                    self._resolve(case.test, inner)
                for stmt in case.consequent:
                    self._resolve(stmt, inner)
        elif t is A.MemberExpression:
            self._resolve(node.object, scope)
            if node.computed:
                self._resolve(node.property, scope)
        elif t is A.Property:
            if node.computed:
                self._resolve(node.key, scope)
            self._resolve(node.value, scope)
        elif t is A.AssignmentExpression:
            if node.operator == "=":
                self._resolve_pattern(node.left, scope, binding=False)
            else:
                self._resolve(node.left, scope)
            self._resolve(node.right, scope)
        elif t in (A.LabeledStatement, A.BreakStatement, A.ContinueStatement):
            if t is A.LabeledStatement:
                self._resolve(node.body, scope)
        elif t is A.MetaProperty or t is A.OpaqueStatement:
            pass
        elif t is A.WithStatement:
            self._resolve(node.object, scope)
            self._resolve(node.body, scope)
        else:
            for child in node.children():
                self._resolve(child, scope)
