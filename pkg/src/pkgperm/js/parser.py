"""Recursive-descent parser for the supported JavaScript subset.

Targets the ES2017 expression/statement grammar plus optional chaining.
ESM `import`/`export` declarations are recognized but kept as opaque
statements (balanced token spans preserved verbatim); downstream passes
treat modules containing them conservatively.
"""

from __future__ import annotations

from typing import Optional

from pkgperm.js import ast as A
from pkgperm.js.scanner import scan
from pkgperm.js.tokens import (
    EOF,
    NAME,
    NUM,
    PUNCT,
    REGEX,
    STR,
    TEMPLATE_FULL,
    TEMPLATE_HEAD,
    TEMPLATE_MIDDLE,
    TEMPLATE_TAIL,
    ScanError,
)


class JsSyntaxError(SyntaxError):
    def __init__(self, message: str, line: int, col: int, pos: int) -> None:
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
        self.pos = pos


_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=",
})

# Binary operator precedence; logical ops are modeled separately but share
# the table so the climbing loop stays uniform.
_BINOP_PREC = {
    "??": 4, "||": 4, "&&": 5,
    "|": 6, "^": 7, "&": 8,
    "==": 9, "!=": 9, "===": 9, "!==": 9,
    "<": 10, ">": 10, "<=": 10, ">=": 10, "in": 10, "instanceof": 10,
    "<<": 11, ">>": 11, ">>>": 11,
    "+": 12, "-": 12,
    "*": 13, "/": 13, "%": 13,
    "**": 14,
}
_LOGICAL = frozenset({"&&", "||", "??"})

_UNARY_OPS = frozenset({"+", "-", "!", "~", "typeof", "void", "delete"})


def parse_module(source: str) -> A.Program:
    """Parse module source text into a Program.

    Raises JsSyntaxError with line/column on malformed input.
    """
    return Parser(source).parse_program()


def decode_string(raw: str) -> str:
    """Cooked value of a string literal token (quotes included in `raw`)."""
    return _decode(raw[1:-1])


def _decode(body: str) -> str:
    if "\\" not in body:
        return body
    out = []
    i = 0
    n = len(body)
    while i < n:
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        i += 1
        if i >= n:
            break
        e = body[i]
        i += 1
        if e == "n":
            out.append("\n")
        elif e == "t":
            out.append("\t")
        elif e == "r":
            out.append("\r")
        elif e == "b":
            out.append("\b")
        elif e == "f":
            out.append("\f")
        elif e == "v":
            out.append("\v")
        elif e == "0" and (i >= n or not body[i].isdigit()):
            out.append("\0")
        elif e == "x" and i + 2 <= n:
            try:
                out.append(chr(int(body[i : i + 2], 16)))
                i += 2
            except ValueError:
                out.append(e)
        elif e == "u":
            if i < n and body[i] == "{":
                close = body.find("}", i)
                if close > 0:
                    try:
                        out.append(chr(int(body[i + 1 : close], 16)))
                        i = close + 1
                        continue
                    except ValueError:
                        pass
                out.append(e)
            elif i + 4 <= n:
                try:
                    out.append(chr(int(body[i : i + 4], 16)))
                    i += 4
                except ValueError:
                    out.append(e)
            else:
                out.append(e)
        elif e in "\n\r  ":
            if e == "\r" and i < n and body[i] == "\n":
                i += 1
        elif e.isdigit():
            j = i - 1
            while j < n and j < i + 2 and body[j] in "01234567":
                j += 1
            try:
                out.append(chr(int(body[i - 1 : j], 8)))
                i = j
            except ValueError:
                out.append(e)
        else:
            out.append(e)
    return "".join(out)


def number_value(raw: str):
    body = raw
    if body.endswith("n"):
        body = body[:-1]
    low = body.lower()
    try:
        if low.startswith("0x"):
            return int(low[2:], 16)
        if low.startswith("0o"):
            return int(low[2:], 8)
        if low.startswith("0b"):
            return int(low[2:], 2)
        if len(body) > 1 and body[0] == "0" and body.isdigit():
            try:
                return int(body, 8)  # legacy octal
            except ValueError:
                return int(body, 10)
        if any(ch in body for ch in ".eE"):
            return float(body)
        return int(body)
    except ValueError:
        return float("nan")


class Parser:
    def __init__(self, source: str) -> None:
        self.src = source
        try:
            self.toks = scan(source)
        except ScanError as exc:
            raise JsSyntaxError(str(exc).rsplit(" (", 1)[0], exc.line, exc.col, exc.pos) from exc
        self.pos = 0
        self.in_generator = [False]
        self.in_async = [False]

    # -- token helpers ------------------------------------------------------

    def tok(self, offset: int = 0):
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else self.toks[-1]

    def text(self, t) -> str:
        return self.src[t[1] : t[2]]

    def kind(self, offset: int = 0) -> int:
        return self.tok(offset)[0]

    def at_punct(self, p: str, offset: int = 0) -> bool:
        t = self.tok(offset)
        return t[0] == PUNCT and self.src[t[1] : t[2]] == p

    def at_name(self, w: str, offset: int = 0) -> bool:
        t = self.tok(offset)
        return t[0] == NAME and self.src[t[1] : t[2]] == w

    def nl_before(self, offset: int = 0) -> bool:
        return bool(self.tok(offset)[5])

    def advance(self):
        t = self.tok()
        if t[0] != EOF:
            self.pos += 1
        return t

    def error(self, message: str, t=None) -> JsSyntaxError:
        t = t or self.tok()
        return JsSyntaxError(message, t[3], t[4], t[1])

    def expect_punct(self, p: str):
        if not self.at_punct(p):
            raise self.error(f"expected {p!r}, found {self.describe()}")
        return self.advance()

    def expect_name(self, w: str):
        if not self.at_name(w):
            raise self.error(f"expected {w!r}, found {self.describe()}")
        return self.advance()

    def describe(self) -> str:
        t = self.tok()
        if t[0] == EOF:
            return "end of input"
        return repr(self.src[t[1] : t[2]])

    def eat_punct(self, p: str) -> bool:
        if self.at_punct(p):
            self.advance()
            return True
        return False

    def consume_semicolon(self) -> None:
        if self.eat_punct(";"):
            return
        if self.at_punct("}") or self.kind() == EOF or self.nl_before():
            return  # automatic semicolon insertion
        raise self.error(f"expected ';', found {self.describe()}")

    # -- program ------------------------------------------------------------

    def parse_program(self) -> A.Program:
        body = self.parse_statement_list(top=True)
        if self.kind() != EOF:
            raise self.error(f"unexpected {self.describe()}")
        return A.Program(body=body, start=0, end=len(self.src))

    def parse_statement_list(self, top: bool = False, until: str = "}") -> list[A.Node]:
        body: list[A.Node] = []
        directives = True
        while self.kind() != EOF and not (not top and self.at_punct(until)):
            stmt = self.parse_statement()
            if directives:
                if (
                    isinstance(stmt, A.ExpressionStatement)
                    and isinstance(stmt.expression, A.Literal)
                    and stmt.expression.kind == "string"
                ):
                    stmt.directive = stmt.expression.raw[1:-1]
                else:
                    directives = False
            body.append(stmt)
        return body

    # -- statements ---------------------------------------------------------

    def parse_statement(self) -> A.Node:
        t = self.tok()
        k = t[0]
        if k == PUNCT:
            txt = self.text(t)
            if txt == "{":
                return self.parse_block()
            if txt == ";":
                self.advance()
                return A.EmptyStatement(start=t[1], end=t[2])
        elif k == NAME:
            word = self.text(t)
            if word in ("var", "const"):
                return self.parse_var_statement(word)
            if word == "let" and (self.kind(1) == NAME or self.at_punct("[", 1) or self.at_punct("{", 1)):
                return self.parse_var_statement("let")
            if word == "function":
                return self.parse_function(declaration=True)
            if word == "async" and self.at_name("function", 1) and not self.nl_before(1):
                return self.parse_function(declaration=True)
            if word == "class":
                return self.parse_class(declaration=True)
            if word == "if":
                return self.parse_if()
            if word == "for":
                return self.parse_for()
            if word == "while":
                return self.parse_while()
            if word == "do":
                return self.parse_do_while()
            if word == "switch":
                return self.parse_switch()
            if word == "return":
                return self.parse_return()
            if word == "throw":
                return self.parse_throw()
            if word == "try":
                return self.parse_try()
            if word == "with":
                return self.parse_with()
            if word in ("break", "continue"):
                return self.parse_break_continue(word)
            if word == "debugger":
                self.advance()
                self.consume_semicolon()
                return A.DebuggerStatement(start=t[1], end=t[2])
            if word in ("import", "export"):
                # `import(` / `import.meta` are expressions; declarations are opaque
                if word == "export" or not (self.at_punct("(", 1) or self.at_punct(".", 1)):
                    return self.parse_opaque()
            if self.kind(1) == PUNCT and self.text(self.tok(1)) == ":" and word != "default":
                label_tok = self.advance()
                self.advance()  # ':'
                body = self.parse_statement()
                return A.LabeledStatement(
                    label=A.Identifier(name=word, start=label_tok[1], end=label_tok[2]),
                    body=body,
                    start=t[1],
                    end=body.end,
                )
        expr = self.parse_expression()
        self.consume_semicolon()
        return A.ExpressionStatement(expression=expr, start=t[1], end=self.toks[self.pos - 1][2])

    def parse_opaque(self) -> A.OpaqueStatement:
        start_tok = self.tok()
        depth = 0
        end = start_tok[2]
        while True:
            t = self.tok()
            if t[0] == EOF:
                break
            if depth == 0 and t[5] and t[1] != start_tok[1]:
                # newline at depth 0 after the first token: statement ended
                break
            if t[0] == PUNCT:
                txt = self.text(t)
                if txt in "([{":
                    depth += 1
                elif txt in ")]}":
                    if depth == 0:
                        break
                    depth -= 1
                elif txt == ";" and depth == 0:
                    self.advance()
                    end = t[2]
                    break
            elif t[0] == TEMPLATE_HEAD:
                depth += 1
            elif t[0] == TEMPLATE_TAIL:
                depth -= 1
            self.advance()
            end = t[2]
        return A.OpaqueStatement(
            text=self.src[start_tok[1] : end], start=start_tok[1], end=end
        )

    def parse_block(self) -> A.BlockStatement:
        lb = self.expect_punct("{")
        body = self.parse_statement_list()
        rb = self.expect_punct("}")
        return A.BlockStatement(body=body, start=lb[1], end=rb[2])

    def parse_var_statement(self, kind: str) -> A.VariableDeclaration:
        decl = self.parse_var_declaration(kind, no_in=False)
        self.consume_semicolon()
        return decl

    def parse_var_declaration(self, kind: str, no_in: bool) -> A.VariableDeclaration:
        kw = self.advance()
        decls = []
        while True:
            target = self.parse_binding_target()
            init = None
            if self.eat_punct("="):
                init = self.parse_assignment(no_in=no_in)
            decls.append(
                A.VariableDeclarator(
                    id=target, init=init, start=target.start, end=(init or target).end
                )
            )
            if not self.eat_punct(","):
                break
        return A.VariableDeclaration(
            kind=kind, declarations=decls, start=kw[1], end=decls[-1].end
        )

    def parse_binding_target(self) -> A.Node:
        if self.at_punct("["):
            return self.parse_array_pattern()
        if self.at_punct("{"):
            return self.parse_object_pattern()
        t = self.tok()
        if t[0] != NAME:
            raise self.error(f"expected binding name, found {self.describe()}")
        self.advance()
        return A.Identifier(name=self.text(t), start=t[1], end=t[2])

    def parse_array_pattern(self) -> A.ArrayPattern:
        lb = self.expect_punct("[")
        elements: list[Optional[A.Node]] = []
        while not self.at_punct("]"):
            if self.eat_punct(","):
                elements.append(None)
                continue
            if self.at_punct("..."):
                rt = self.advance()
                arg = self.parse_binding_target()
                elements.append(A.RestElement(argument=arg, start=rt[1], end=arg.end))
            else:
                elements.append(self.parse_binding_element())
            if not self.at_punct("]"):
                self.expect_punct(",")
        rb = self.expect_punct("]")
        return A.ArrayPattern(elements=elements, start=lb[1], end=rb[2])

    def parse_object_pattern(self) -> A.ObjectPattern:
        lb = self.expect_punct("{")
        props: list[A.Node] = []
        while not self.at_punct("}"):
            if self.at_punct("..."):
                rt = self.advance()
                arg = self.parse_binding_target()
                props.append(A.RestElement(argument=arg, start=rt[1], end=arg.end))
            else:
                computed = False
                shorthand = False
                if self.at_punct("["):
                    self.advance()
                    key = self.parse_assignment()
                    self.expect_punct("]")
                    computed = True
                else:
                    key = self.parse_property_key()
                if self.eat_punct(":"):
                    value = self.parse_binding_element()
                else:
                    if not isinstance(key, A.Identifier):
                        raise self.error("invalid shorthand pattern property")
                    shorthand = True
                    value = A.Identifier(name=key.name, start=key.start, end=key.end)
                    if self.at_punct("="):
                        self.advance()
                        dflt = self.parse_assignment()
                        value = A.AssignmentPattern(
                            left=value, right=dflt, start=value.start, end=dflt.end
                        )
                props.append(
                    A.Property(
                        key=key,
                        value=value,
                        kind="init",
                        computed=computed,
                        shorthand=shorthand,
                        start=key.start,
                        end=value.end,
                    )
                )
            if not self.at_punct("}"):
                self.expect_punct(",")
        rb = self.expect_punct("}")
        return A.ObjectPattern(properties=props, start=lb[1], end=rb[2])

    def parse_binding_element(self) -> A.Node:
        target = self.parse_binding_target()
        if self.at_punct("="):
            self.advance()
            dflt = self.parse_assignment()
            return A.AssignmentPattern(left=target, right=dflt, start=target.start, end=dflt.end)
        return target

    def parse_property_key(self) -> A.Node:
        t = self.tok()
        if t[0] == NAME:
            self.advance()
            return A.Identifier(name=self.text(t), start=t[1], end=t[2])
        if t[0] == STR:
            self.advance()
            raw = self.text(t)
            return A.Literal(value=decode_string(raw), raw=raw, kind="string", start=t[1], end=t[2])
        if t[0] == NUM:
            self.advance()
            raw = self.text(t)
            return A.Literal(value=number_value(raw), raw=raw, kind="number", start=t[1], end=t[2])
        raise self.error(f"expected property name, found {self.describe()}")

    def parse_function(self, declaration: bool) -> A.Node:
        start_tok = self.tok()
        is_async = False
        if self.at_name("async"):
            is_async = True
            self.advance()
        self.expect_name("function")
        is_generator = self.eat_punct("*")
        fn_id = None
        if self.kind() == NAME and not self.at_punct("("):
            t = self.advance()
            fn_id = A.Identifier(name=self.text(t), start=t[1], end=t[2])
        params = self.parse_params()
        body = self.parse_function_body(is_async, is_generator)
        cls = A.FunctionDeclaration if declaration else A.FunctionExpression
        if declaration and fn_id is None:
            raise self.error("function declaration requires a name", start_tok)
        return cls(
            id=fn_id,
            params=params,
            body=body,
            is_async=is_async,
            is_generator=is_generator,
            start=start_tok[1],
            end=body.end,
        )

    def parse_params(self) -> list[A.Node]:
        self.expect_punct("(")
        params: list[A.Node] = []
        while not self.at_punct(")"):
            if self.at_punct("..."):
                rt = self.advance()
                arg = self.parse_binding_target()
                params.append(A.RestElement(argument=arg, start=rt[1], end=arg.end))
            else:
                params.append(self.parse_binding_element())
            if not self.at_punct(")"):
                self.expect_punct(",")
        self.expect_punct(")")
        return params

    def parse_function_body(self, is_async: bool, is_generator: bool) -> A.BlockStatement:
        self.in_async.append(is_async)
        self.in_generator.append(is_generator)
        try:
            return self.parse_block()
        finally:
            self.in_async.pop()
            self.in_generator.pop()

    def parse_class(self, declaration: bool) -> A.Node:
        kw = self.expect_name("class")
        cls_id = None
        if self.kind() == NAME and not self.at_name("extends"):
            t = self.advance()
            cls_id = A.Identifier(name=self.text(t), start=t[1], end=t[2])
        superclass = None
        if self.at_name("extends"):
            self.advance()
            superclass = self.parse_unary_and_postfix()
        body = self.parse_class_body()
        cls = A.ClassDeclaration if declaration else A.ClassExpression
        return cls(
            id=cls_id, superclass=superclass, body=body, start=kw[1], end=body.end
        )

    def parse_class_body(self) -> A.ClassBody:
        lb = self.expect_punct("{")
        members: list[A.Node] = []
        while not self.at_punct("}"):
            if self.eat_punct(";"):
                continue
            members.append(self.parse_method_definition())
        rb = self.expect_punct("}")
        return A.ClassBody(body=members, start=lb[1], end=rb[2])

    def _at_key_start(self, offset: int = 0) -> bool:
        k = self.kind(offset)
        return k in (NAME, STR, NUM) or self.at_punct("[", offset) or self.at_punct("*", offset)

    def parse_method_definition(self) -> A.MethodDefinition:
        start_tok = self.tok()
        is_static = False
        if self.at_name("static") and self._at_key_start(1):
            is_static = True
            self.advance()
        kind = "method"
        is_async = False
        is_generator = False
        if self.at_name("async") and self._at_key_start(1) and not self.nl_before(1):
            is_async = True
            self.advance()
        if self.eat_punct("*"):
            is_generator = True
        if (self.at_name("get") or self.at_name("set")) and self._at_key_start(1) and not self.at_punct("(", 1):
            kind = self.text(self.tok())
            self.advance()
        computed = False
        if self.at_punct("["):
            self.advance()
            key = self.parse_assignment()
            self.expect_punct("]")
            computed = True
        else:
            key = self.parse_property_key()
        params = self.parse_params()
        body = self.parse_function_body(is_async, is_generator)
        fn = A.FunctionExpression(
            id=None,
            params=params,
            body=body,
            is_async=is_async,
            is_generator=is_generator,
            start=key.end,
            end=body.end,
        )
        if (
            kind == "method"
            and not is_static
            and not computed
            and isinstance(key, A.Identifier)
            and key.name == "constructor"
        ):
            kind = "constructor"
        return A.MethodDefinition(
            key=key,
            value=fn,
            kind=kind,
            computed=computed,
            static=is_static,
            start=start_tok[1],
            end=body.end,
        )

    def parse_if(self) -> A.IfStatement:
        kw = self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        consequent = self.parse_statement()
        alternate = None
        if self.at_name("else"):
            self.advance()
            alternate = self.parse_statement()
        return A.IfStatement(
            test=test,
            consequent=consequent,
            alternate=alternate,
            start=kw[1],
            end=(alternate or consequent).end,
        )

    def parse_for(self) -> A.Node:
        kw = self.advance()
        self.expect_punct("(")
        init: Optional[A.Node] = None
        if self.at_punct(";"):
            self.advance()
        else:
            if (
                self.at_name("var")
                or self.at_name("const")
                or (self.at_name("let") and (self.kind(1) == NAME or self.at_punct("[", 1) or self.at_punct("{", 1)))
            ):
                init = self.parse_var_declaration(self.text(self.tok()), no_in=True)
            else:
                init = self.parse_expression(no_in=True)
            if self.at_name("in") or self.at_name("of"):
                is_of = self.at_name("of")
                self.advance()
                left = init
                if isinstance(left, A.VariableDeclaration):
                    if len(left.declarations) != 1:
                        raise self.error("for-in/of requires a single binding")
                else:
                    left = self._to_pattern(left, assignment=True)
                right = self.parse_assignment() if is_of else self.parse_expression()
                self.expect_punct(")")
                body = self.parse_statement()
                cls = A.ForOfStatement if is_of else A.ForInStatement
                return cls(left=left, right=right, body=body, start=kw[1], end=body.end)
            self.expect_punct(";")
        test = None
        if not self.at_punct(";"):
            test = self.parse_expression()
        self.expect_punct(";")
        update = None
        if not self.at_punct(")"):
            update = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return A.ForStatement(
            init=init, test=test, update=update, body=body, start=kw[1], end=body.end
        )

    def parse_while(self) -> A.WhileStatement:
        kw = self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return A.WhileStatement(test=test, body=body, start=kw[1], end=body.end)

    def parse_do_while(self) -> A.DoWhileStatement:
        kw = self.advance()
        body = self.parse_statement()
        self.expect_name("while")
        self.expect_punct("(")
        test = self.parse_expression()
        rp = self.expect_punct(")")
        end = rp[2]
        if self.at_punct(";"):
            end = self.advance()[2]
        return A.DoWhileStatement(body=body, test=test, start=kw[1], end=end)

    def parse_switch(self) -> A.SwitchStatement:
        kw = self.advance()
        self.expect_punct("(")
        discriminant = self.parse_expression()
        self.expect_punct(")")
        self.expect_punct("{")
        cases: list[A.SwitchCase] = []
        seen_default = False
        while not self.at_punct("}"):
            ct = self.tok()
            if self.at_name("case"):
                self.advance()
                test = self.parse_expression()
            elif self.at_name("default"):
                if seen_default:
                    raise self.error("multiple default clauses")
                seen_default = True
                self.advance()
                test = None
            else:
                raise self.error(f"expected 'case' or 'default', found {self.describe()}")
            self.expect_punct(":")
            consequent: list[A.Node] = []
            while not (self.at_punct("}") or self.at_name("case") or self.at_name("default")):
                consequent.append(self.parse_statement())
            end = consequent[-1].end if consequent else ct[2]
            cases.append(A.SwitchCase(test=test, consequent=consequent, start=ct[1], end=end))
        rb = self.expect_punct("}")
        return A.SwitchStatement(discriminant=discriminant, cases=cases, start=kw[1], end=rb[2])

    def parse_return(self) -> A.ReturnStatement:
        kw = self.advance()
        argument = None
        end = kw[2]
        if not (self.at_punct(";") or self.at_punct("}") or self.kind() == EOF or self.nl_before()):
            argument = self.parse_expression()
            end = argument.end
        self.consume_semicolon()
        return A.ReturnStatement(argument=argument, start=kw[1], end=end)

    def parse_throw(self) -> A.ThrowStatement:
        kw = self.advance()
        if self.nl_before():
            raise self.error("newline not allowed after 'throw'")
        argument = self.parse_expression()
        self.consume_semicolon()
        return A.ThrowStatement(argument=argument, start=kw[1], end=argument.end)

    def parse_try(self) -> A.TryStatement:
        kw = self.advance()
        block = self.parse_block()
        handler = None
        finalizer = None
        if self.at_name("catch"):
            ct = self.advance()
            param = None
            if self.eat_punct("("):
                param = self.parse_binding_target()
                self.expect_punct(")")
            cbody = self.parse_block()
            handler = A.CatchClause(param=param, body=cbody, start=ct[1], end=cbody.end)
        if self.at_name("finally"):
            self.advance()
            finalizer = self.parse_block()
        if handler is None and finalizer is None:
            raise self.error("try requires catch or finally")
        return A.TryStatement(
            block=block,
            handler=handler,
            finalizer=finalizer,
            start=kw[1],
            end=(finalizer or handler).end,
        )

    def parse_with(self) -> A.WithStatement:
        kw = self.advance()
        self.expect_punct("(")
        obj = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return A.WithStatement(object=obj, body=body, start=kw[1], end=body.end)

    def parse_break_continue(self, word: str) -> A.Node:
        kw = self.advance()
        label = None
        end = kw[2]
        if self.kind() == NAME and not self.nl_before() and not self.at_punct(";"):
            t = self.advance()
            label = A.Identifier(name=self.text(t), start=t[1], end=t[2])
            end = t[2]
        self.consume_semicolon()
        cls = A.BreakStatement if word == "break" else A.ContinueStatement
        return cls(label=label, start=kw[1], end=end)

    # -- expressions --------------------------------------------------------

    def parse_expression(self, no_in: bool = False) -> A.Node:
        expr = self.parse_assignment(no_in=no_in)
        if self.at_punct(","):
            exprs = [expr]
            while self.eat_punct(","):
                exprs.append(self.parse_assignment(no_in=no_in))
            return A.SequenceExpression(
                expressions=exprs, start=exprs[0].start, end=exprs[-1].end
            )
        return expr

    def parse_assignment(self, no_in: bool = False) -> A.Node:
        arrow = self.try_parse_arrow()
        if arrow is not None:
            return arrow
        if self.in_generator[-1] and self.at_name("yield"):
            return self.parse_yield(no_in)
        left = self.parse_conditional(no_in)
        t = self.tok()
        if t[0] == PUNCT:
            op = self.text(t)
            if op in _ASSIGN_OPS:
                self.advance()
                if op == "=":
                    left = self._to_pattern(left, assignment=True)
                elif not isinstance(left, (A.Identifier, A.MemberExpression)):
                    raise self.error("invalid assignment target", t)
                right = self.parse_assignment(no_in=no_in)
                return A.AssignmentExpression(
                    operator=op, left=left, right=right, start=left.start, end=right.end
                )
        return left

    def parse_yield(self, no_in: bool) -> A.YieldExpression:
        kw = self.advance()
        delegate = False
        argument = None
        end = kw[2]
        if not self.nl_before():
            if self.eat_punct("*"):
                delegate = True
            t = self.tok()
            starts_expr = not (
                t[0] == EOF
                or (t[0] == PUNCT and self.text(t) in (")", "]", "}", ",", ";", ":"))
            )
            if delegate or starts_expr:
                argument = self.parse_assignment(no_in=no_in)
                end = argument.end
        return A.YieldExpression(argument=argument, delegate=delegate, start=kw[1], end=end)

    def try_parse_arrow(self) -> Optional[A.Node]:
        t = self.tok()
        is_async = False
        if t[0] == NAME and self.text(t) == "async" and not self.nl_before(1):
            if self.kind(1) == NAME and self.at_punct("=>", 2) and not self.nl_before(2):
                is_async = True
            elif self.at_punct("(", 1):
                close = self._matching_paren(1)
                if close is not None and self.at_punct("=>", close + 1) and not self.nl_before(close + 1):
                    is_async = True
        if not is_async:
            if t[0] == NAME and self.at_punct("=>", 1) and not self.nl_before(1):
                pass  # single-parameter arrow
            elif self.at_punct("("):
                close = self._matching_paren(0)
                if close is None or not self.at_punct("=>", close + 1) or self.nl_before(close + 1):
                    return None
            else:
                return None
        start = self.tok()[1]
        if is_async:
            self.advance()  # async
        if self.at_punct("("):
            params = self.parse_params()
        else:
            nt = self.advance()
            if nt[0] != NAME:
                return None
            params = [A.Identifier(name=self.text(nt), start=nt[1], end=nt[2])]
        self.expect_punct("=>")
        self.in_async.append(is_async)
        self.in_generator.append(False)
        try:
            if self.at_punct("{"):
                body = self.parse_block()
                expression = False
            else:
                body = self.parse_assignment()
                expression = True
        finally:
            self.in_async.pop()
            self.in_generator.pop()
        return A.ArrowFunctionExpression(
            params=params,
            body=body,
            expression=expression,
            is_async=is_async,
            start=start,
            end=body.end,
        )

    def _matching_paren(self, offset: int) -> Optional[int]:
        """Token offset of the `)` matching the `(` at `offset`, else None."""
        depth = 0
        i = offset
        while True:
            t = self.tok(i)
            if t[0] == EOF:
                return None
            if t[0] == PUNCT:
                txt = self.src[t[1] : t[2]]
                if txt in "([{":
                    depth += 1
                elif txt in ")]}":
                    depth -= 1
                    if depth == 0:
                        return i
                    if depth < 0:
                        return None
            elif t[0] == TEMPLATE_HEAD:
                depth += 1
            elif t[0] == TEMPLATE_TAIL:
                depth -= 1
            i += 1

    def parse_conditional(self, no_in: bool = False) -> A.Node:
        test = self.parse_binary(0, no_in)
        if self.at_punct("?") :
            self.advance()
            consequent = self.parse_assignment()
            self.expect_punct(":")
            alternate = self.parse_assignment(no_in=no_in)
            return A.ConditionalExpression(
                test=test, consequent=consequent, alternate=alternate,
                start=test.start, end=alternate.end,
            )
        return test

    def parse_binary(self, min_prec: int, no_in: bool) -> A.Node:
        left = self.parse_unary_and_postfix()
        while True:
            t = self.tok()
            op = None
            if t[0] == PUNCT:
                txt = self.text(t)
                if txt in _BINOP_PREC:
                    op = txt
            elif t[0] == NAME:
                txt = self.text(t)
                if txt == "instanceof" or (txt == "in" and not no_in):
                    op = txt
            if op is None:
                return left
            prec = _BINOP_PREC[op]
            if prec < min_prec:
                return left
            self.advance()
            if op == "**":
                right = self.parse_binary(prec, no_in)  # right-assoc
            else:
                right = self.parse_binary(prec + 1, no_in)
            cls = A.LogicalExpression if op in _LOGICAL else A.BinaryExpression
            left = cls(operator=op, left=left, right=right, start=left.start, end=right.end)

    def parse_unary_and_postfix(self) -> A.Node:
        t = self.tok()
        if t[0] == PUNCT:
            txt = self.text(t)
            if txt in ("++", "--"):
                self.advance()
                arg = self.parse_unary_and_postfix()
                return A.UpdateExpression(
                    operator=txt, argument=arg, prefix=True, start=t[1], end=arg.end
                )
            if txt in ("+", "-", "!", "~"):
                self.advance()
                arg = self.parse_unary_and_postfix()
                return A.UnaryExpression(operator=txt, argument=arg, start=t[1], end=arg.end)
        elif t[0] == NAME:
            txt = self.text(t)
            if txt in ("typeof", "void", "delete"):
                self.advance()
                arg = self.parse_unary_and_postfix()
                return A.UnaryExpression(operator=txt, argument=arg, start=t[1], end=arg.end)
            if txt == "await" and self.in_async[-1]:
                self.advance()
                arg = self.parse_unary_and_postfix()
                return A.AwaitExpression(argument=arg, start=t[1], end=arg.end)
        expr = self.parse_call_member()
        t = self.tok()
        if t[0] == PUNCT and not self.nl_before():
            txt = self.text(t)
            if txt in ("++", "--"):
                self.advance()
                return A.UpdateExpression(
                    operator=txt, argument=expr, prefix=False, start=expr.start, end=t[2]
                )
        return expr

    def parse_call_member(self, allow_call: bool = True) -> A.Node:
        if self.at_name("new"):
            kw = self.advance()
            if self.at_punct("."):
                self.advance()
                prop = self.expect_name("target")
                return A.MetaProperty(meta="new", property="target", start=kw[1], end=prop[2])
            callee = self.parse_call_member(allow_call=False)
            args: list[A.Node] = []
            end = callee.end
            if self.at_punct("("):
                args, end = self.parse_arguments()
            expr: A.Node = A.NewExpression(callee=callee, arguments=args, start=kw[1], end=end)
        else:
            expr = self.parse_primary()
        return self.parse_member_chain(expr, allow_call)

    def parse_member_chain(self, expr: A.Node, allow_call: bool) -> A.Node:
        while True:
            if self.at_punct("."):
                self.advance()
                t = self.tok()
                if t[0] != NAME:
                    raise self.error(f"expected property name, found {self.describe()}")
                self.advance()
                prop = A.Identifier(name=self.text(t), start=t[1], end=t[2])
                expr = A.MemberExpression(
                    object=expr, property=prop, computed=False, start=expr.start, end=t[2]
                )
            elif self.at_punct("?."):
                self.advance()
                if self.at_punct("("):
                    if not allow_call:
                        raise self.error("unexpected optional call")
                    args, end = self.parse_arguments()
                    expr = A.CallExpression(
                        callee=expr, arguments=args, optional=True, start=expr.start, end=end
                    )
                elif self.at_punct("["):
                    self.advance()
                    prop = self.parse_expression()
                    rb = self.expect_punct("]")
                    expr = A.MemberExpression(
                        object=expr, property=prop, computed=True, optional=True,
                        start=expr.start, end=rb[2],
                    )
                else:
                    t = self.tok()
                    if t[0] != NAME:
                        raise self.error(f"expected property name, found {self.describe()}")
                    self.advance()
                    prop = A.Identifier(name=self.text(t), start=t[1], end=t[2])
                    expr = A.MemberExpression(
                        object=expr, property=prop, computed=False, optional=True,
                        start=expr.start, end=t[2],
                    )
            elif self.at_punct("["):
                self.advance()
                prop = self.parse_expression()
                rb = self.expect_punct("]")
                expr = A.MemberExpression(
                    object=expr, property=prop, computed=True, start=expr.start, end=rb[2]
                )
            elif allow_call and self.at_punct("("):
                args, end = self.parse_arguments()
                expr = A.CallExpression(callee=expr, arguments=args, start=expr.start, end=end)
            elif self.kind() in (TEMPLATE_FULL, TEMPLATE_HEAD):
                quasi = self.parse_template_literal()
                expr = A.TaggedTemplateExpression(
                    tag=expr, quasi=quasi, start=expr.start, end=quasi.end
                )
            else:
                return expr

    def parse_arguments(self) -> tuple[list[A.Node], int]:
        self.expect_punct("(")
        args: list[A.Node] = []
        while not self.at_punct(")"):
            if self.at_punct("..."):
                st = self.advance()
                arg = self.parse_assignment()
                args.append(A.SpreadElement(argument=arg, start=st[1], end=arg.end))
            else:
                args.append(self.parse_assignment())
            if not self.at_punct(")"):
                self.expect_punct(",")
        rp = self.expect_punct(")")
        return args, rp[2]

    def parse_template_literal(self) -> A.TemplateLiteral:
        t = self.advance()
        raw_full = self.text(t)
        if t[0] == TEMPLATE_FULL:
            raw = raw_full[1:-1]
            el = A.TemplateElement(raw=raw, cooked=_decode(raw), tail=True, start=t[1], end=t[2])
            return A.TemplateLiteral(quasis=[el], expressions=[], start=t[1], end=t[2])
        raw = raw_full[1:-2]  # strip ` and ${
        quasis = [A.TemplateElement(raw=raw, cooked=_decode(raw), tail=False, start=t[1], end=t[2])]
        expressions = []
        while True:
            expressions.append(self.parse_expression())
            nt = self.advance()
            raw_full = self.text(nt)
            if nt[0] == TEMPLATE_MIDDLE:
                raw = raw_full[1:-2]
                quasis.append(
                    A.TemplateElement(raw=raw, cooked=_decode(raw), tail=False, start=nt[1], end=nt[2])
                )
            elif nt[0] == TEMPLATE_TAIL:
                raw = raw_full[1:-1]
                quasis.append(
                    A.TemplateElement(raw=raw, cooked=_decode(raw), tail=True, start=nt[1], end=nt[2])
                )
                return A.TemplateLiteral(
                    quasis=quasis, expressions=expressions, start=t[1], end=nt[2]
                )
            else:
                raise self.error("unterminated template literal", nt)

    def parse_primary(self) -> A.Node:
        t = self.tok()
        k = t[0]
        if k == NUM:
            self.advance()
            raw = self.text(t)
            return A.Literal(value=number_value(raw), raw=raw, kind="number", start=t[1], end=t[2])
        if k == STR:
            self.advance()
            raw = self.text(t)
            return A.Literal(value=decode_string(raw), raw=raw, kind="string", start=t[1], end=t[2])
        if k == REGEX:
            self.advance()
            raw = self.text(t)
            body_end = raw.rindex("/")
            return A.Literal(
                value=None,
                raw=raw,
                kind="regexp",
                regex=(raw[1:body_end], raw[body_end + 1 :]),
                start=t[1],
                end=t[2],
            )
        if k in (TEMPLATE_FULL, TEMPLATE_HEAD):
            return self.parse_template_literal()
        if k == NAME:
            word = self.text(t)
            if word == "this":
                self.advance()
                return A.ThisExpression(start=t[1], end=t[2])
            if word == "super":
                self.advance()
                return A.Super(start=t[1], end=t[2])
            if word in ("true", "false"):
                self.advance()
                return A.Literal(value=(word == "true"), raw=word, kind="boolean", start=t[1], end=t[2])
            if word == "null":
                self.advance()
                return A.Literal(value=None, raw=word, kind="null", start=t[1], end=t[2])
            if word == "function":
                return self.parse_function(declaration=False)
            if word == "async" and self.at_name("function", 1) and not self.nl_before(1):
                return self.parse_function(declaration=False)
            if word == "class":
                return self.parse_class(declaration=False)
            self.advance()
            return A.Identifier(name=word, start=t[1], end=t[2])
        if k == PUNCT:
            txt = self.text(t)
            if txt == "(":
                self.advance()
                expr = self.parse_expression()
                self.expect_punct(")")
                return expr
            if txt == "[":
                return self.parse_array_literal()
            if txt == "{":
                return self.parse_object_literal()
        raise self.error(f"unexpected {self.describe()}")

    def parse_array_literal(self) -> A.ArrayExpression:
        lb = self.expect_punct("[")
        elements: list[Optional[A.Node]] = []
        while not self.at_punct("]"):
            if self.at_punct(","):
                self.advance()
                elements.append(None)
                continue
            if self.at_punct("..."):
                st = self.advance()
                arg = self.parse_assignment()
                elements.append(A.SpreadElement(argument=arg, start=st[1], end=arg.end))
            else:
                elements.append(self.parse_assignment())
            if not self.at_punct("]"):
                self.expect_punct(",")
        rb = self.expect_punct("]")
        return A.ArrayExpression(elements=elements, start=lb[1], end=rb[2])

    def parse_object_literal(self) -> A.ObjectExpression:
        lb = self.expect_punct("{")
        props: list[A.Node] = []
        while not self.at_punct("}"):
            props.append(self.parse_object_property())
            if not self.at_punct("}"):
                self.expect_punct(",")
        rb = self.expect_punct("}")
        return A.ObjectExpression(properties=props, start=lb[1], end=rb[2])

    def parse_object_property(self) -> A.Node:
        t = self.tok()
        if self.at_punct("..."):
            st = self.advance()
            arg = self.parse_assignment()
            return A.SpreadElement(argument=arg, start=st[1], end=arg.end)
        is_async = False
        is_generator = False
        kind = "init"
        if (self.at_name("get") or self.at_name("set")) and self._at_key_start(1) and not self.at_punct("*", 1):
            kind = self.text(t)
            self.advance()
        elif self.at_name("async") and self._at_key_start(1) and not self.nl_before(1):
            is_async = True
            self.advance()
            if self.eat_punct("*"):
                is_generator = True
        elif self.at_punct("*"):
            self.advance()
            is_generator = True
        computed = False
        if self.at_punct("["):
            self.advance()
            key = self.parse_assignment()
            self.expect_punct("]")
            computed = True
        else:
            key = self.parse_property_key()
        if kind in ("get", "set"):
            params = self.parse_params()
            body = self.parse_function_body(False, False)
            fn = A.FunctionExpression(
                id=None, params=params, body=body, start=key.end, end=body.end
            )
            return A.Property(
                key=key, value=fn, kind=kind, computed=computed,
                start=t[1], end=body.end,
            )
        if self.at_punct("("):
            params = self.parse_params()
            body = self.parse_function_body(is_async, is_generator)
            fn = A.FunctionExpression(
                id=None, params=params, body=body,
                is_async=is_async, is_generator=is_generator,
                start=key.end, end=body.end,
            )
            return A.Property(
                key=key, value=fn, kind="init", computed=computed, method=True,
                start=t[1], end=body.end,
            )
        if is_async or is_generator:
            raise self.error("expected method body")
        if self.eat_punct(":"):
            value = self.parse_assignment()
            return A.Property(
                key=key, value=value, kind="init", computed=computed,
                start=t[1], end=value.end,
            )
        if not isinstance(key, A.Identifier):
            raise self.error("invalid shorthand property")
        value: A.Node = A.Identifier(name=key.name, start=key.start, end=key.end)
        if self.at_punct("="):
            # cover grammar: only meaningful once converted to a pattern
            self.advance()
            dflt = self.parse_assignment()
            value = A.AssignmentPattern(left=value, right=dflt, start=key.start, end=dflt.end)
        return A.Property(
            key=key, value=value, kind="init", shorthand=True,
            start=t[1], end=value.end,
        )

    # -- expression→pattern conversion ---------------------------------------

    def _to_pattern(self, node: A.Node, assignment: bool = False) -> A.Node:
        """Reinterpret an expression parsed under the cover grammar as an
        assignment target."""
        if isinstance(node, (A.Identifier, A.MemberExpression, A.ObjectPattern,
                             A.ArrayPattern, A.AssignmentPattern, A.RestElement)):
            return node
        if isinstance(node, A.ArrayExpression):
            elements: list[Optional[A.Node]] = []
            for el in node.elements:
                if el is None:
                    elements.append(None)
                elif isinstance(el, A.SpreadElement):
                    elements.append(
                        A.RestElement(
                            argument=self._to_pattern(el.argument, assignment),
                            start=el.start, end=el.end,
                        )
                    )
                else:
                    elements.append(self._to_pattern(el, assignment))
            return A.ArrayPattern(elements=elements, start=node.start, end=node.end)
        if isinstance(node, A.ObjectExpression):
            props: list[A.Node] = []
            for p in node.properties:
                if isinstance(p, A.SpreadElement):
                    props.append(
                        A.RestElement(
                            argument=self._to_pattern(p.argument, assignment),
                            start=p.start, end=p.end,
                        )
                    )
                    continue
                if p.kind != "init" or p.method:
                    raise JsSyntaxError("invalid destructuring target", 0, 0, p.start)
                props.append(
                    A.Property(
                        key=p.key,
                        value=self._to_pattern(p.value, assignment),
                        kind="init",
                        computed=p.computed,
                        shorthand=p.shorthand,
                        start=p.start,
                        end=p.end,
                    )
                )
            return A.ObjectPattern(properties=props, start=node.start, end=node.end)
        if isinstance(node, A.AssignmentExpression) and node.operator == "=":
            return A.AssignmentPattern(
                left=self._to_pattern(node.left, assignment),
                right=node.right,
                start=node.start,
                end=node.end,
            )
        raise JsSyntaxError("invalid assignment target", 0, 0, node.start)
