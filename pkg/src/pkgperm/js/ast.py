"""AST node definitions for the supported JavaScript subset.

Nodes use identity semantics (eq=False) so they can key dicts in the
scope table.  Every node carries a [start, end) span of source offsets;
`line`/`col` are derivable from the offset and kept only on the objects
that report diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Optional


@dataclass(eq=False)
class Node:
    start: int = field(default=-1, kw_only=True)
    end: int = field(default=-1, kw_only=True)

    @property
    def type(self) -> str:
        return type(self).__name__

    def children(self) -> Iterator["Node"]:
        for f in fields(self):
            if f.name in ("start", "end"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, list):
                for item in v:
                    if isinstance(item, Node):
                        yield item


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    yield node
    for child in node.children():
        yield from walk(child)


def structurally_equal(a: Optional[Node], b: Optional[Node]) -> bool:
    """Deep equality ignoring spans and formatting metadata.

    `raw` is presentation (quote style); empty statements in statement
    lists are inert separators; both are ignored so that canonical
    re-printing round-trips.
    """
    if a is None or b is None:
        return a is b
    if type(a) is not type(b):
        return False
    for f in fields(a):
        if f.name in ("start", "end", "raw"):
            continue
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if isinstance(va, Node) or isinstance(vb, Node):
            if not (isinstance(va, Node) and isinstance(vb, Node)):
                return False
            if not structurally_equal(va, vb):
                return False
        elif isinstance(va, list):
            if f.name in ("body", "consequent"):
                va = [x for x in va if not isinstance(x, EmptyStatement)]
                vb = [x for x in vb if not isinstance(x, EmptyStatement)]
            if not isinstance(vb, list) or len(va) != len(vb):
                return False
            for xa, xb in zip(va, vb):
                if isinstance(xa, Node) or isinstance(xb, Node):
                    if not (isinstance(xa, Node) and isinstance(xb, Node)):
                        return False
                    if not structurally_equal(xa, xb):
                        return False
                elif xa != xb:
                    return False
        elif va != vb:
            return False
    return True


# --- program / statements ---------------------------------------------------


@dataclass(eq=False)
class Program(Node):
    body: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class ExpressionStatement(Node):
    expression: Node = None
    directive: Optional[str] = None  # 'use strict' etc., prologue only


@dataclass(eq=False)
class BlockStatement(Node):
    body: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class VariableDeclarator(Node):
    id: Node = None
    init: Optional[Node] = None


@dataclass(eq=False)
class VariableDeclaration(Node):
    kind: str = "var"  # var | let | const
    declarations: list[VariableDeclarator] = field(default_factory=list)


@dataclass(eq=False)
class FunctionDeclaration(Node):
    id: Optional[Node] = None
    params: list[Node] = field(default_factory=list)
    body: Node = None
    is_async: bool = False
    is_generator: bool = False


@dataclass(eq=False)
class ClassBody(Node):
    body: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class MethodDefinition(Node):
    key: Node = None
    value: Node = None  # FunctionExpression
    kind: str = "method"  # method | get | set | constructor
    computed: bool = False
    static: bool = False


@dataclass(eq=False)
class ClassDeclaration(Node):
    id: Optional[Node] = None
    superclass: Optional[Node] = None
    body: ClassBody = None


@dataclass(eq=False)
class ReturnStatement(Node):
    argument: Optional[Node] = None


@dataclass(eq=False)
class IfStatement(Node):
    test: Node = None
    consequent: Node = None
    alternate: Optional[Node] = None


@dataclass(eq=False)
class ForStatement(Node):
    init: Optional[Node] = None
    test: Optional[Node] = None
    update: Optional[Node] = None
    body: Node = None


@dataclass(eq=False)
class ForInStatement(Node):
    left: Node = None
    right: Node = None
    body: Node = None


@dataclass(eq=False)
class ForOfStatement(Node):
    left: Node = None
    right: Node = None
    body: Node = None


@dataclass(eq=False)
class WhileStatement(Node):
    test: Node = None
    body: Node = None


@dataclass(eq=False)
class DoWhileStatement(Node):
    body: Node = None
    test: Node = None


@dataclass(eq=False)
class SwitchCase(Node):
    test: Optional[Node] = None  # None ⇒ default
    consequent: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class SwitchStatement(Node):
    discriminant: Node = None
    cases: list[SwitchCase] = field(default_factory=list)


@dataclass(eq=False)
class BreakStatement(Node):
    label: Optional[Node] = None


@dataclass(eq=False)
class ContinueStatement(Node):
    label: Optional[Node] = None


@dataclass(eq=False)
class LabeledStatement(Node):
    label: Node = None
    body: Node = None


@dataclass(eq=False)
class ThrowStatement(Node):
    argument: Node = None


@dataclass(eq=False)
class CatchClause(Node):
    param: Optional[Node] = None
    body: Node = None


@dataclass(eq=False)
class TryStatement(Node):
    block: Node = None
    handler: Optional[CatchClause] = None
    finalizer: Optional[Node] = None


@dataclass(eq=False)
class WithStatement(Node):
    object: Node = None
    body: Node = None


@dataclass(eq=False)
class EmptyStatement(Node):
    pass


@dataclass(eq=False)
class DebuggerStatement(Node):
    pass


@dataclass(eq=False)
class OpaqueStatement(Node):
    """A valid-but-unsupported construct preserved verbatim.

    The scope analyzer and rewriter treat any module containing one of
    these conservatively (requires the all permission).
    """

    text: str = ""


# --- expressions -------------------------------------------------------------


@dataclass(eq=False)
class Identifier(Node):
    name: str = ""


@dataclass(eq=False)
class Literal(Node):
    value: Any = None
    raw: str = ""
    # kind: number | string | boolean | null | regexp
    kind: str = ""
    regex: Optional[tuple[str, str]] = None  # (pattern, flags)


@dataclass(eq=False)
class TemplateElement(Node):
    raw: str = ""
    cooked: Optional[str] = None
    tail: bool = False


@dataclass(eq=False)
class TemplateLiteral(Node):
    quasis: list[TemplateElement] = field(default_factory=list)
    expressions: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class TaggedTemplateExpression(Node):
    tag: Node = None
    quasi: TemplateLiteral = None


@dataclass(eq=False)
class ThisExpression(Node):
    pass


@dataclass(eq=False)
class Super(Node):
    pass


@dataclass(eq=False)
class MetaProperty(Node):
    meta: str = ""
    property: str = ""


@dataclass(eq=False)
class ArrayExpression(Node):
    elements: list[Optional[Node]] = field(default_factory=list)  # None = hole


@dataclass(eq=False)
class Property(Node):
    key: Node = None
    value: Node = None
    kind: str = "init"  # init | get | set
    computed: bool = False
    shorthand: bool = False
    method: bool = False


@dataclass(eq=False)
class ObjectExpression(Node):
    properties: list[Node] = field(default_factory=list)  # Property | SpreadElement


@dataclass(eq=False)
class FunctionExpression(Node):
    id: Optional[Node] = None
    params: list[Node] = field(default_factory=list)
    body: Node = None
    is_async: bool = False
    is_generator: bool = False


@dataclass(eq=False)
class ArrowFunctionExpression(Node):
    params: list[Node] = field(default_factory=list)
    body: Node = None  # BlockStatement or expression
    expression: bool = False
    is_async: bool = False


@dataclass(eq=False)
class ClassExpression(Node):
    id: Optional[Node] = None
    superclass: Optional[Node] = None
    body: ClassBody = None


@dataclass(eq=False)
class MemberExpression(Node):
    object: Node = None
    property: Node = None
    computed: bool = False
    optional: bool = False  # a?.b


@dataclass(eq=False)
class CallExpression(Node):
    callee: Node = None
    arguments: list[Node] = field(default_factory=list)
    optional: bool = False  # a?.()


@dataclass(eq=False)
class NewExpression(Node):
    callee: Node = None
    arguments: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class UnaryExpression(Node):
    operator: str = ""
    argument: Node = None


@dataclass(eq=False)
class UpdateExpression(Node):
    operator: str = ""
    argument: Node = None
    prefix: bool = False


@dataclass(eq=False)
class BinaryExpression(Node):
    operator: str = ""
    left: Node = None
    right: Node = None


@dataclass(eq=False)
class LogicalExpression(Node):
    operator: str = ""  # && || ??
    left: Node = None
    right: Node = None


@dataclass(eq=False)
class ConditionalExpression(Node):
    test: Node = None
    consequent: Node = None
    alternate: Node = None


@dataclass(eq=False)
class AssignmentExpression(Node):
    operator: str = "="
    left: Node = None
    right: Node = None


@dataclass(eq=False)
class SequenceExpression(Node):
    expressions: list[Node] = field(default_factory=list)


@dataclass(eq=False)
class SpreadElement(Node):
    argument: Node = None


@dataclass(eq=False)
class YieldExpression(Node):
    argument: Optional[Node] = None
    delegate: bool = False


@dataclass(eq=False)
class AwaitExpression(Node):
    argument: Node = None


# --- patterns ----------------------------------------------------------------


@dataclass(eq=False)
class ObjectPattern(Node):
    properties: list[Node] = field(default_factory=list)  # Property | RestElement


@dataclass(eq=False)
class ArrayPattern(Node):
    elements: list[Optional[Node]] = field(default_factory=list)


@dataclass(eq=False)
class RestElement(Node):
    argument: Node = None


@dataclass(eq=False)
class AssignmentPattern(Node):
    left: Node = None
    right: Node = None
