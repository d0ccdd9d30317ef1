"""JavaScript code generation from the AST.

Canonical style: statements newline-separated without trailing
semicolons (a leading `;` is prepended to sequence lines that would
otherwise continue the previous statement), single-quoted strings,
spaced binary operators, bracket member access rendered without inner
padding.  Formatting of the input is not preserved; behavior and tree
structure are.
"""

from __future__ import annotations

from pkgperm.js import ast as A

_SEQ = 1
_ASSIGN = 2
_COND = 3
_UNARY = 15
_POSTFIX = 16
_CALL = 18
_MEMBER = 19
_PRIMARY = 20

_BIN_PREC = {
    "??": 4, "||": 4, "&&": 5,
    "|": 6, "^": 7, "&": 8,
    "==": 9, "!=": 9, "===": 9, "!==": 9,
    "<": 10, ">": 10, "<=": 10, ">=": 10, "in": 10, "instanceof": 10,
    "<<": 11, ">>": 11, ">>>": 11,
    "+": 12, "-": 12,
    "*": 13, "/": 13, "%": 13,
    "**": 14,
}

#: a statement line starting with one of these could merge with the previous
#: (semicolon-less) statement, so it gets a leading `;` in sequence position
_ASI_HAZARD = "([`+-/.*"

_STR_ESCAPES = {
    "\\": "\\\\", "'": "\\'", "\n": "\\n", "\r": "\\r", "\t": "\\t",
    "\b": "\\b", "\f": "\\f", "\v": "\\v", "\0": "\\0",
    " ": "\\u2028", " ": "\\u2029",
}


def quote_string(value: str) -> str:
    out = ["'"]
    for ch in value:
        esc = _STR_ESCAPES.get(ch)
        out.append(esc if esc is not None else ch)
    out.append("'")
    return "".join(out)


def generate(node: A.Node) -> str:
    """Render a Program (or any statement/expression node) as source text."""
    g = _Gen()
    if isinstance(node, A.Program):
        lines: list[str] = []
        for stmt in node.body:
            if isinstance(stmt, A.EmptyStatement):
                continue  # inert in sequence position
            lines.extend(g.seq_lines(stmt, 0))
        return "\n".join(lines)
    if node.type.endswith(("Statement", "Declaration")):
        return "\n".join(g.stmt(node))
    return g.expr(node, _SEQ)


class _Gen:
    # -- statement sequences ------------------------------------------------

    def seq_lines(self, node: A.Node, indent: int) -> list[str]:
        """Lines for a statement in sequence position: indented, with the
        automatic-semicolon-insertion guard applied to the first line."""
        pad = "  " * indent
        lines = self.stmt(node)
        out = []
        first = True
        for ln in lines:
            if first:
                if ln[:1] in _ASI_HAZARD:
                    ln = ";" + ln
                first = False
            out.append(pad + ln if ln else ln)
        return out

    def block_body(self, body: list[A.Node]) -> list[str]:
        lines: list[str] = []
        for stmt in body:
            if isinstance(stmt, A.EmptyStatement):
                continue  # inert in sequence position
            lines.extend(self.seq_lines(stmt, 1))
        return lines

    def _attach(self, head: str, stmt: A.Node) -> list[str]:
        lines = self.stmt(stmt)
        lines[0] = head + lines[0]
        return lines

    # -- statements -----------------------------------------------------

    def stmt(self, node: A.Node) -> list[str]:
        t = type(node)
        if t is A.ExpressionStatement:
            if node.directive is not None:
                return ["'" + node.directive + "'"]
            text = self.expr(node.expression, _SEQ)
            if text.startswith(("{", "function", "class", "async function", "let [")):
                text = "(" + text + ")"
            return text.split("\n")
        if t is A.VariableDeclaration:
            return self.var_decl(node).split("\n")
        if t is A.BlockStatement:
            return ["{"] + self.block_body(node.body) + ["}"]
        if t is A.EmptyStatement:
            return [";"]
        if t is A.FunctionDeclaration:
            return self.function(node).split("\n")
        if t is A.ClassDeclaration:
            return self.class_str(node).split("\n")
        if t is A.IfStatement:
            head = "if (" + self.expr(node.test, _SEQ) + ") "
            lines = self._attach(head, node.consequent)
            if node.alternate is not None:
                alt = self._attach("else ", node.alternate)
                if lines[-1].endswith("}"):
                    lines[-1] = lines[-1] + " " + alt[0]
                    lines.extend(alt[1:])
                else:
                    lines.extend(alt)
            return lines
        if t is A.ForStatement:
            init = ""
            if isinstance(node.init, A.VariableDeclaration):
                init = self.var_decl(node.init)
            elif node.init is not None:
                init = self.expr(node.init, _SEQ)
            test = " " + self.expr(node.test, _SEQ) if node.test is not None else ""
            update = " " + self.expr(node.update, _SEQ) if node.update is not None else ""
            return self._attach(f"for ({init};{test};{update}) ", node.body)
        if t in (A.ForInStatement, A.ForOfStatement):
            word = "in" if t is A.ForInStatement else "of"
            if isinstance(node.left, A.VariableDeclaration):
                left = self.var_decl(node.left)
            else:
                left = self.target(node.left)
            head = f"for ({left} {word} " + self.expr(node.right, _ASSIGN) + ") "
            return self._attach(head, node.body)
        if t is A.WhileStatement:
            return self._attach("while (" + self.expr(node.test, _SEQ) + ") ", node.body)
        if t is A.DoWhileStatement:
            lines = self._attach("do ", node.body)
            tail = "while (" + self.expr(node.test, _SEQ) + ")"
            if lines[-1].endswith("}"):
                lines[-1] = lines[-1] + " " + tail
            else:
                lines.append(tail)
            return lines
        if t is A.SwitchStatement:
            lines = ["switch (" + self.expr(node.discriminant, _SEQ) + ") {"]
            for case in node.cases:
                if case.test is not None:
                    lines.append("case " + self.expr(case.test, _SEQ) + ":")
                else:
                    lines.append("default:")
                for stmt in case.consequent:
                    if isinstance(stmt, A.EmptyStatement):
                        continue
                    lines.extend(self.seq_lines(stmt, 1))
            lines.append("}")
            return lines
        if t is A.ReturnStatement:
            if node.argument is None:
                return ["return"]
            return ("return " + self.expr(node.argument, _SEQ)).split("\n")
        if t is A.ThrowStatement:
            return ("throw " + self.expr(node.argument, _SEQ)).split("\n")
        if t is A.BreakStatement:
            return ["break" + (" " + node.label.name if node.label else "")]
        if t is A.ContinueStatement:
            return ["continue" + (" " + node.label.name if node.label else "")]
        if t is A.LabeledStatement:
            return self._attach(node.label.name + ": ", node.body)
        if t is A.TryStatement:
            lines = ["try {"] + self.block_body(node.block.body) + ["}"]
            if node.handler is not None:
                h = node.handler
                head = "catch "
                if h.param is not None:
                    head += "(" + self.target(h.param) + ") "
                lines[-1] += " " + head + "{"
                lines.extend(self.block_body(h.body.body))
                lines.append("}")
            if node.finalizer is not None:
                lines[-1] += " finally {"
                lines.extend(self.block_body(node.finalizer.body))
                lines.append("}")
            return lines
        if t is A.WithStatement:
            return self._attach("with (" + self.expr(node.object, _SEQ) + ") ", node.body)
        if t is A.DebuggerStatement:
            return ["debugger"]
        if t is A.OpaqueStatement:
            return node.text.split("\n")
        raise TypeError(f"cannot generate statement for {node.type}")

    def var_decl(self, node: A.VariableDeclaration) -> str:
        parts = []
        for d in node.declarations:
            s = self.target(d.id)
            if d.init is not None:
                s += " = " + self.expr(d.init, _ASSIGN)
            parts.append(s)
        return node.kind + " " + ", ".join(parts)

    # -- functions / classes ---------------------------------------------

    def function(self, node) -> str:
        head = "async " if node.is_async else ""
        head += "function"
        if node.is_generator:
            head += "*"
        if node.id is not None:
            head += " " + node.id.name
        head += "(" + ", ".join(self.target(p) for p in node.params) + ") {"
        return "\n".join([head] + self.block_body(node.body.body) + ["}"])

    def class_str(self, node) -> str:
        head = "class"
        if node.id is not None:
            head += " " + node.id.name
        if node.superclass is not None:
            head += " extends " + self.expr(node.superclass, _MEMBER)
        lines = [head + " {"]
        for m in node.body.body:
            lines.extend(self.method_lines(m))
        lines.append("}")
        return "\n".join(lines)

    def method_lines(self, m: A.MethodDefinition) -> list[str]:
        head = "static " if m.static else ""
        fn = m.value
        if m.kind in ("get", "set"):
            head += m.kind + " "
        else:
            if fn.is_async:
                head += "async "
            if fn.is_generator:
                head += "*"
        key = "[" + self.expr(m.key, _SEQ) + "]" if m.computed else self.key_str(m.key)
        head += key + "(" + ", ".join(self.target(p) for p in fn.params) + ") {"
        lines = ["  " + head]
        for stmt in fn.body.body:
            if isinstance(stmt, A.EmptyStatement):
                continue
            lines.extend(self.seq_lines(stmt, 2))
        lines.append("  }")
        return lines

    def key_str(self, key: A.Node) -> str:
        if isinstance(key, A.Identifier):
            return key.name
        if isinstance(key, A.Literal):
            if key.kind == "string":
                return quote_string(key.value)
            return key.raw
        raise TypeError(f"bad property key {key.type}")

    # -- patterns / assignment targets -------------------------------------

    def target(self, node: A.Node) -> str:
        t = type(node)
        if t is A.Identifier:
            return node.name
        if t is A.MemberExpression:
            return self.expr(node, _MEMBER)
        if t is A.AssignmentPattern:
            return self.target(node.left) + " = " + self.expr(node.right, _ASSIGN)
        if t is A.RestElement:
            return "..." + self.target(node.argument)
        if t is A.ArrayPattern:
            parts = ["" if el is None else self.target(el) for el in node.elements]
            tail = "," if node.elements and node.elements[-1] is None else ""
            return "[" + ", ".join(parts) + tail + "]"
        if t is A.ObjectPattern:
            parts = []
            for p in node.properties:
                if isinstance(p, A.RestElement):
                    parts.append("..." + self.target(p.argument))
                elif p.shorthand:
                    parts.append(self.target(p.value))
                else:
                    key = "[" + self.expr(p.key, _SEQ) + "]" if p.computed else self.key_str(p.key)
                    parts.append(key + ": " + self.target(p.value))
            return "{" + ", ".join(parts) + "}"
        return self.expr(node, _ASSIGN)

    # -- expressions ---------------------------------------------------------

    def expr(self, node: A.Node, min_prec: int) -> str:
        text, prec = self._expr(node)
        if prec < min_prec:
            return "(" + text + ")"
        return text

    def _expr(self, node: A.Node) -> tuple[str, int]:
        t = type(node)
        if t is A.Identifier:
            return node.name, _PRIMARY
        if t is A.Literal:
            if node.kind == "string":
                return quote_string(node.value), _PRIMARY
            return node.raw, _PRIMARY
        if t is A.ThisExpression:
            return "this", _PRIMARY
        if t is A.Super:
            return "super", _PRIMARY
        if t is A.MetaProperty:
            return node.meta + "." + node.property, _PRIMARY
        if t is A.TemplateLiteral:
            return self.template(node), _PRIMARY
        if t is A.TaggedTemplateExpression:
            return self.expr(node.tag, _CALL) + self.template(node.quasi), _CALL
        if t is A.ArrayExpression:
            parts = []
            for el in node.elements:
                if el is None:
                    parts.append("")
                elif isinstance(el, A.SpreadElement):
                    parts.append("..." + self.expr(el.argument, _ASSIGN))
                else:
                    parts.append(self.expr(el, _ASSIGN))
            tail = "," if node.elements and node.elements[-1] is None else ""
            return "[" + ", ".join(parts) + tail + "]", _PRIMARY
        if t is A.ObjectExpression:
            if not node.properties:
                return "{}", _PRIMARY
            return "{ " + ", ".join(self.property_str(p) for p in node.properties) + " }", _PRIMARY
        if t is A.FunctionExpression:
            return self.function(node), _PRIMARY
        if t is A.ClassExpression:
            return self.class_str(node), _PRIMARY
        if t is A.ArrowFunctionExpression:
            return self.arrow(node), _ASSIGN
        if t is A.MemberExpression:
            obj = self.expr(node.object, _CALL)
            if isinstance(node.object, A.Literal) and node.object.kind == "number":
                obj = "(" + obj + ")"
            if node.computed:
                prop = "[" + self.expr(node.property, _SEQ) + "]"
                return obj + ("?." if node.optional else "") + prop, _CALL if node.optional else _MEMBER
            if node.optional:
                return obj + "?." + node.property.name, _CALL
            return obj + "." + node.property.name, _MEMBER
        if t is A.CallExpression:
            callee = self.expr(node.callee, _CALL)
            args = ", ".join(self._arg(a) for a in node.arguments)
            opt = "?." if node.optional else ""
            return callee + opt + "(" + args + ")", _CALL
        if t is A.NewExpression:
            callee = self.expr(node.callee, _MEMBER)
            if _contains_call(node.callee):
                callee = "(" + callee + ")"
            args = ", ".join(self._arg(a) for a in node.arguments)
            return "new " + callee + "(" + args + ")", _CALL
        if t is A.UnaryExpression:
            arg = self.expr(node.argument, _UNARY)
            if node.operator.isalpha():
                return node.operator + " " + arg, _UNARY
            if arg and (arg[0] == node.operator or arg[:2] in ("++", "--")):
                arg = " " + arg
            return node.operator + arg, _UNARY
        if t is A.AwaitExpression:
            return "await " + self.expr(node.argument, _UNARY), _UNARY
        if t is A.UpdateExpression:
            if node.prefix:
                return node.operator + self.expr(node.argument, _UNARY), _UNARY
            return self.expr(node.argument, _POSTFIX) + node.operator, _POSTFIX
        if t in (A.BinaryExpression, A.LogicalExpression):
            prec = _BIN_PREC[node.operator]
            if node.operator == "**":
                left = self.expr(node.left, prec + 1)
                right = self.expr(node.right, prec)
            else:
                left = self.expr(node.left, prec)
                right = self.expr(node.right, prec + 1)
            return left + " " + node.operator + " " + right, prec
        if t is A.ConditionalExpression:
            return (
                self.expr(node.test, _COND + 1)
                + " ? "
                + self.expr(node.consequent, _ASSIGN)
                + " : "
                + self.expr(node.alternate, _ASSIGN)
            ), _COND
        if t is A.AssignmentExpression:
            return (
                self.target(node.left) + " " + node.operator + " " + self.expr(node.right, _ASSIGN)
            ), _ASSIGN
        if t is A.SequenceExpression:
            return ", ".join(self.expr(e, _ASSIGN) for e in node.expressions), _SEQ
        if t is A.YieldExpression:
            s = "yield"
            if node.delegate:
                s += "*"
            if node.argument is not None:
                s += " " + self.expr(node.argument, _ASSIGN)
            return s, _ASSIGN
        if t is A.SpreadElement:
            return "..." + self.expr(node.argument, _ASSIGN), _ASSIGN
        if t in (A.ObjectPattern, A.ArrayPattern, A.AssignmentPattern, A.RestElement):
            return self.target(node), _PRIMARY
        raise TypeError(f"cannot generate expression for {node.type}")

    def _arg(self, a: A.Node) -> str:
        if isinstance(a, A.SpreadElement):
            return "..." + self.expr(a.argument, _ASSIGN)
        return self.expr(a, _ASSIGN)

    def property_str(self, p: A.Node) -> str:
        if isinstance(p, A.SpreadElement):
            return "..." + self.expr(p.argument, _ASSIGN)
        if p.kind in ("get", "set") or p.method:
            fn = p.value
            head = ""
            if p.kind in ("get", "set"):
                head = p.kind + " "
            else:
                if fn.is_async:
                    head += "async "
                if fn.is_generator:
                    head += "*"
            key = "[" + self.expr(p.key, _SEQ) + "]" if p.computed else self.key_str(p.key)
            head += key + "(" + ", ".join(self.target(x) for x in fn.params) + ") {"
            return "\n".join([head] + self.block_body(fn.body.body) + ["}"])
        if p.shorthand:
            if isinstance(p.value, A.AssignmentPattern):
                return self.target(p.value)
            return p.value.name
        key = "[" + self.expr(p.key, _SEQ) + "]" if p.computed else self.key_str(p.key)
        return key + ": " + self.expr(p.value, _ASSIGN)

    def template(self, node: A.TemplateLiteral) -> str:
        out = ["`"]
        for i, quasi in enumerate(node.quasis):
            out.append(quasi.raw)
            if not quasi.tail and i < len(node.expressions):
                out.append("${" + self.expr(node.expressions[i], _SEQ) + "}")
        out.append("`")
        return "".join(out)

    def arrow(self, node: A.ArrowFunctionExpression) -> str:
        head = "async " if node.is_async else ""
        if len(node.params) == 1 and isinstance(node.params[0], A.Identifier):
            head += node.params[0].name
        else:
            head += "(" + ", ".join(self.target(p) for p in node.params) + ")"
        head += " => "
        if node.expression:
            body = self.expr(node.body, _ASSIGN)
            if body.startswith("{"):
                body = "(" + body + ")"
            return head + body
        return head + "\n".join(["{"] + self.block_body(node.body.body) + ["}"])


def _contains_call(node: A.Node) -> bool:
    """Does a `new` callee contain a call that would bind to `new`'s parens?"""
    if isinstance(node, A.CallExpression):
        return True
    if isinstance(node, A.MemberExpression):
        return _contains_call(node.object)
    if isinstance(node, A.TaggedTemplateExpression):
        return True
    return False
