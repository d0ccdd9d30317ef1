"""Source rewriting for enforcement: global-reference normalization and
conservative insertion of dynamic property checks.

The transformation has two steps.  First every free identifier
reference `x` becomes `global['x']`, making all global access visible
as property reads.  Second, every property read `x.y` / `x[y]` whose
key either cannot be resolved statically or resolves to a restricted
name is replaced by a call to the module's check function, a fresh name
derived deterministically from (seed, module path).  Property writes,
compound updates and deletes on such keys are routed through companion
helpers emitted with the shim.

Modules holding the `all` permission are returned unchanged, as are
modules the rewrite cannot treat soundly (opaque constructs, `with`);
those require `all` anyway under inference.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from pkgperm import permissions as P
from pkgperm.js import ast as A
from pkgperm.js.codegen import generate
from pkgperm.js.parser import parse_module
from pkgperm.js.scopes import ScopeTable, analyze_scopes
from pkgperm.restricted import DEFAULT_TABLE, RestrictedTable


class RewriteError(Exception):
    """A construct the rewrite cannot mediate soundly."""


@dataclass
class RewriteResult:
    code: str
    skipped: bool
    inserted_checks: int
    normalized_globals: int
    check_fn_name: str
    skip_reason: Optional[str] = None
    directives: list[str] = field(default_factory=list)


def check_fn_name(seed: int, module_path: str) -> str:
    digest = hashlib.sha256(
        seed.to_bytes(8, "big", signed=False) + module_path.encode("utf-8")
    ).hexdigest()
    return "$$prop_" + digest[:12]


def rewrite_module(
    source: str,
    perms: P.PermissionSet,
    table: RestrictedTable = DEFAULT_TABLE,
    seed: int = 0,
    module_path: str = "<module>",
) -> RewriteResult:
    """Rewrite one module per its permissions; pure and deterministic."""
    fn_name = check_fn_name(seed, module_path)
    if P.ALL in perms:
        return RewriteResult(source, True, 0, 0, fn_name, skip_reason="holds all")
    ast = parse_module(source)
    if any(isinstance(n, A.OpaqueStatement) for n in A.walk(ast)):
        return RewriteResult(source, True, 0, 0, fn_name, skip_reason="opaque construct")
    scopes = analyze_scopes(ast)
    if scopes.has_with:
        # `with` defeats scope analysis; such modules need `all`
        return RewriteResult(source, True, 0, 0, fn_name, skip_reason="with statement")
    rw = _Rewriter(scopes, table, fn_name)
    try:
        rw.rewrite_program(ast)
    except RewriteError as exc:
        return RewriteResult(source, True, 0, 0, fn_name, skip_reason=str(exc))
    code = generate(ast)
    directives = [
        s.directive for s in ast.body
        if isinstance(s, A.ExpressionStatement) and s.directive is not None
    ]
    return RewriteResult(
        code=code,
        skipped=False,
        inserted_checks=rw.inserted_checks,
        normalized_globals=rw.normalized_globals,
        check_fn_name=fn_name,
        directives=directives,
    )


_UPDATE_OPS = {"++": "inc", "--": "dec"}


class _Rewriter:
    def __init__(self, scopes: ScopeTable, table: RestrictedTable, fn_name: str) -> None:
        self.scopes = scopes
        self.table = table
        self.fn = fn_name
        self.inserted_checks = 0
        self.normalized_globals = 0
        self._normalized: set[int] = set()  # ids of global-rooted chain nodes

    # -- node builders ----------------------------------------------------

    def _global_ident(self) -> A.Identifier:
        return A.Identifier(name="global")

    def _key_literal(self, name: str) -> A.Literal:
        return A.Literal(value=name, raw=repr(name), kind="string")

    def _check_call(self, suffix: str, args: list[A.Node]) -> A.CallExpression:
        self.inserted_checks += 1
        return A.CallExpression(callee=A.Identifier(name=self.fn + suffix), arguments=args)

    def _normalize_free(self, ident: A.Identifier) -> A.Node:
        """Free identifier -> global['name'], checked when the name is a
        global-designated restricted property (eval, Function, process)."""
        self.normalized_globals += 1
        base = self._global_ident()
        if self.table.is_restricted_name(ident.name):
            return self._check_call("", [base, self._key_literal(ident.name)])
        member = A.MemberExpression(
            object=base, property=self._key_literal(ident.name), computed=True
        )
        self._normalized.add(id(member))
        return member

    def _is_free_ident(self, node: A.Node) -> bool:
        return (
            isinstance(node, A.Identifier)
            and self.scopes.bindings.get(node, "absent") is None
        )

    @staticmethod
    def _static_key(node: A.MemberExpression) -> Optional[str]:
        if not node.computed:
            return node.property.name
        p = node.property
        if isinstance(p, A.Literal) and p.kind in ("string", "number", "boolean", "null"):
            return str(p.value)
        return None

    def _member_read(self, node: A.MemberExpression) -> A.Node:
        """Apply the step-2 read rule to a member expression whose object
        has NOT yet been rewritten."""
        obj = self.expr(node.object)
        key = self._static_key(node)
        if key is not None and not self.table.is_restricted_name(key):
            # statically safe: keep the plain access, bracket-rendered
            # when the base chain was normalized
            if id(obj) in self._normalized and not node.computed:
                member = A.MemberExpression(
                    object=obj, property=self._key_literal(key), computed=True,
                    optional=node.optional,
                )
                self._normalized.add(id(member))
                return member
            node.object = obj
            if id(obj) in self._normalized:
                self._normalized.add(id(node))
            return node
        if key is not None:
            key_expr: A.Node = self._key_literal(key)
        else:
            key_expr = self.expr(node.property)
        return self._check_call("", [obj, key_expr])

    # -- write positions ------------------------------------------------------

    def _member_write_parts(self, node: A.MemberExpression):
        """(object', key_expr, checked) for an assignment target."""
        if isinstance(node.object, A.Super):
            raise RewriteError("write through super with restricted key")
        obj = self.expr(node.object)
        key = self._static_key(node)
        if key is not None and not self.table.is_restricted_name(key):
            if id(obj) in self._normalized and not node.computed:
                member = A.MemberExpression(
                    object=obj, property=self._key_literal(key), computed=True
                )
                self._normalized.add(id(member))
                return member, None, False
            node.object = obj
            return node, None, False
        key_expr = self._key_literal(key) if key is not None else self.expr(node.property)
        return obj, key_expr, True

    def _target_for_free_ident(self, ident: A.Identifier):
        """(plain_target | None, (base, key) | None) for a free identifier
        in write position."""
        self.normalized_globals += 1
        base = self._global_ident()
        key = self._key_literal(ident.name)
        if self.table.is_restricted_name(ident.name):
            return None, (base, key)
        member = A.MemberExpression(object=base, property=key, computed=True)
        self._normalized.add(id(member))
        return member, None

    def _assignment(self, node: A.AssignmentExpression) -> A.Node:
        left = node.left
        right = self.expr(node.right)
        node.right = right
        if isinstance(left, A.Identifier):
            if self._is_free_ident(left):
                plain, checked = self._target_for_free_ident(left)
                if plain is not None:
                    node.left = plain
                    return node
                base, key = checked
                if node.operator == "=":
                    return self._check_call("Assign", [base, key, right])
                return self._check_call(
                    "Update", [base, key, self._op_literal(node.operator), right]
                )
            return node
        if isinstance(left, A.MemberExpression):
            target, key_expr, checked = self._member_write_parts(left)
            if not checked:
                node.left = target
                return node
            if node.operator == "=":
                return self._check_call("Assign", [target, key_expr, right])
            return self._check_call(
                "Update", [target, key_expr, self._op_literal(node.operator), right]
            )
        # destructuring target
        node.left = self._pattern_target(left)
        return node

    def _op_literal(self, operator: str) -> A.Literal:
        op = operator[:-1]  # '+=' -> '+'
        return A.Literal(value=op, raw=repr(op), kind="string")

    def _pattern_target(self, node: A.Node) -> A.Node:
        t = type(node)
        if t is A.Identifier:
            if self._is_free_ident(node):
                plain, checked = self._target_for_free_ident(node)
                if plain is None:
                    raise RewriteError("restricted global write in destructuring")
                return plain
            return node
        if t is A.MemberExpression:
            target, _key, checked = self._member_write_parts(node)
            if checked:
                raise RewriteError("restricted property write in destructuring")
            return target
        if t is A.AssignmentPattern:
            node.left = self._pattern_target(node.left)
            node.right = self.expr(node.right)
            return node
        if t is A.RestElement:
            node.argument = self._pattern_target(node.argument)
            return node
        if t is A.ArrayPattern:
            node.elements = [
                None if el is None else self._pattern_target(el) for el in node.elements
            ]
            return node
        if t is A.ObjectPattern:
            for p in node.properties:
                if isinstance(p, A.RestElement):
                    p.argument = self._pattern_target(p.argument)
                else:
                    if p.computed:
                        p.key = self.expr(p.key)
                    p.value = self._pattern_target(p.value)
            return node
        return self.expr(node)

    def _update(self, node: A.UpdateExpression) -> A.Node:
        arg = node.argument
        op = self._UPDATE_NAME(node.operator)
        if isinstance(arg, A.Identifier):
            if self._is_free_ident(arg):
                plain, checked = self._target_for_free_ident(arg)
                if plain is not None:
                    node.argument = plain
                    return node
                base, key = checked
                return self._check_call(
                    "Update", [base, key, op, A.Literal(value=1, raw="1", kind="number"),
                               self._bool_literal(not node.prefix)]
                )
            return node
        if isinstance(arg, A.MemberExpression):
            target, key_expr, checked = self._member_write_parts(arg)
            if not checked:
                node.argument = target
                return node
            return self._check_call(
                "Update", [target, key_expr, op, A.Literal(value=1, raw="1", kind="number"),
                           self._bool_literal(not node.prefix)]
            )
        node.argument = self.expr(arg)
        return node

    def _UPDATE_NAME(self, operator: str) -> A.Literal:
        name = _UPDATE_OPS[operator]
        return A.Literal(value=name, raw=repr(name), kind="string")

    def _bool_literal(self, value: bool) -> A.Literal:
        raw = "true" if value else "false"
        return A.Literal(value=value, raw=raw, kind="boolean")

    def _delete(self, node: A.UnaryExpression) -> A.Node:
        arg = node.argument
        if isinstance(arg, A.MemberExpression):
            target, key_expr, checked = self._member_write_parts(arg)
            if not checked:
                node.argument = target
                return node
            return self._check_call(
                "Assign",
                [target, key_expr,
                 A.UnaryExpression(operator="void", argument=A.Literal(value=0, raw="0", kind="number")),
                 self._bool_literal(True)],
            )
        node.argument = self.expr(arg)
        return node

    # -- traversal -------------------------------------------------------

    def rewrite_program(self, ast: A.Program) -> None:
        for stmt in ast.body:
            self.stmt(stmt)

    def stmt(self, node: A.Node) -> None:
        """Rewrite expressions inside a statement in place."""
        if node is None:
            return
        t = type(node)
        if t is A.ExpressionStatement:
            if node.directive is None:
                node.expression = self.expr(node.expression)
        elif t is A.VariableDeclaration:
            for d in node.declarations:
                d.id = self._binding_pattern(d.id)
                if d.init is not None:
                    d.init = self.expr(d.init)
        elif t in (A.FunctionDeclaration, A.ClassDeclaration):
            self._function_or_class(node)
        elif t is A.BlockStatement:
            for s in node.body:
                self.stmt(s)
        elif t is A.IfStatement:
            node.test = self.expr(node.test)
            self.stmt(node.consequent)
            self.stmt(node.alternate)
        elif t is A.ForStatement:
            if isinstance(node.init, A.VariableDeclaration):
                self.stmt(node.init)
            elif node.init is not None:
                node.init = self.expr(node.init)
            if node.test is not None:
                node.test = self.expr(node.test)
            if node.update is not None:
                node.update = self.expr(node.update)
            self.stmt(node.body)
        elif t in (A.ForInStatement, A.ForOfStatement):
            if isinstance(node.left, A.VariableDeclaration):
                self.stmt(node.left)
            else:
                node.left = self._pattern_target(node.left)
            node.right = self.expr(node.right)
            self.stmt(node.body)
        elif t in (A.WhileStatement, A.DoWhileStatement):
            node.test = self.expr(node.test)
            self.stmt(node.body)
        elif t is A.SwitchStatement:
            node.discriminant = self.expr(node.discriminant)
            for case in node.cases:
                if case.test is not None:
                    case.test = self.expr(case.test)
                for s in case.consequent:
                    self.stmt(s)
        elif t is A.ReturnStatement:
            if node.argument is not None:
                node.argument = self.expr(node.argument)
        elif t is A.ThrowStatement:
            node.argument = self.expr(node.argument)
        elif t is A.TryStatement:
            self.stmt(node.block)
            if node.handler is not None:
                if node.handler.param is not None:
                    node.handler.param = self._binding_pattern(node.handler.param)
                self.stmt(node.handler.body)
            if node.finalizer is not None:
                self.stmt(node.finalizer)
        elif t is A.LabeledStatement:
            self.stmt(node.body)
        elif t is A.WithStatement:
            raise RewriteError("with statement")
        else:
            pass  # empty/debugger/break/continue/opaque

    def _binding_pattern(self, node: A.Node) -> A.Node:
        """Declaration patterns bind names (left alone) but carry default
        and computed-key expressions that must be rewritten."""
        t = type(node)
        if t is A.AssignmentPattern:
            node.left = self._binding_pattern(node.left)
            node.right = self.expr(node.right)
        elif t is A.RestElement:
            node.argument = self._binding_pattern(node.argument)
        elif t is A.ArrayPattern:
            node.elements = [
                None if el is None else self._binding_pattern(el) for el in node.elements
            ]
        elif t is A.ObjectPattern:
            for p in node.properties:
                if isinstance(p, A.RestElement):
                    p.argument = self._binding_pattern(p.argument)
                else:
                    if p.computed:
                        p.key = self.expr(p.key)
                    p.value = self._binding_pattern(p.value)
        return node

    def _function_or_class(self, node: A.Node) -> None:
        if isinstance(node, (A.ClassDeclaration, A.ClassExpression)):
            if node.superclass is not None:
                node.superclass = self.expr(node.superclass)
            for m in node.body.body:
                if m.computed:
                    m.key = self.expr(m.key)
                self._function_or_class(m.value)
            return
        for i, p in enumerate(node.params):
            node.params[i] = self._binding_pattern(p)
        if isinstance(node.body, A.BlockStatement):
            self.stmt(node.body)
        else:
            node.body = self.expr(node.body)

    def expr(self, node: A.Node) -> A.Node:
        if node is None:
            return node
        t = type(node)
        if t is A.Identifier:
            if self._is_free_ident(node):
                return self._normalize_free(node)
            return node
        if t is A.MemberExpression:
            return self._member_read(node)
        if t is A.AssignmentExpression:
            return self._assignment(node)
        if t is A.UpdateExpression:
            return self._update(node)
        if t is A.UnaryExpression:
            if node.operator == "delete":
                return self._delete(node)
            node.argument = self.expr(node.argument)
            return node
        if t is A.CallExpression:
            node.callee = self.expr(node.callee)
            node.arguments = [self.expr(a) for a in node.arguments]
            return node
        if t is A.NewExpression:
            node.callee = self.expr(node.callee)
            node.arguments = [self.expr(a) for a in node.arguments]
            return node
        if t in (A.FunctionExpression, A.ArrowFunctionExpression, A.ClassExpression):
            self._function_or_class(node)
            return node
        if t is A.ObjectExpression:
            for p in node.properties:
                if isinstance(p, A.SpreadElement):
                    p.argument = self.expr(p.argument)
                    continue
                if p.computed:
                    p.key = self.expr(p.key)
                if p.method or p.kind in ("get", "set"):
                    self._function_or_class(p.value)
                else:
                    p.value = self.expr(p.value)
            return node
        if t is A.ArrayExpression:
            node.elements = [
                None if el is None else self.expr(el) for el in node.elements
            ]
            return node
        if t is A.SpreadElement:
            node.argument = self.expr(node.argument)
            return node
        if t in (A.BinaryExpression, A.LogicalExpression):
            node.left = self.expr(node.left)
            node.right = self.expr(node.right)
            return node
        if t is A.ConditionalExpression:
            node.test = self.expr(node.test)
            node.consequent = self.expr(node.consequent)
            node.alternate = self.expr(node.alternate)
            return node
        if t is A.SequenceExpression:
            node.expressions = [self.expr(e) for e in node.expressions]
            return node
        if t is A.TemplateLiteral:
            node.expressions = [self.expr(e) for e in node.expressions]
            return node
        if t is A.TaggedTemplateExpression:
            node.tag = self.expr(node.tag)
            node.quasi = self.expr(node.quasi)
            return node
        if t is A.YieldExpression:
            if node.argument is not None:
                node.argument = self.expr(node.argument)
            return node
        if t is A.AwaitExpression:
            node.argument = self.expr(node.argument)
            return node
        if t in (A.ObjectPattern, A.ArrayPattern, A.AssignmentPattern, A.RestElement):
            return self._pattern_target(node)
        # literals, this, super, templates elements, meta properties
        return node
