"""Token kinds and shared scanner tables.

Both scanner kernels (pure Python and the compiled twin) import these so
their outputs stay interchangeable: a token is the tuple

    (kind, start, end, line, col, nl_before)

where `start`/`end` are offsets into the source string, `line`/`col` are
1-based/0-based positions of `start`, and `nl_before` is 1 when a line
terminator separates this token from the previous one.
"""

from __future__ import annotations

EOF = 0
NAME = 1
NUM = 2
STR = 3
REGEX = 4
PUNCT = 5
TEMPLATE_FULL = 6  # `...`
TEMPLATE_HEAD = 7  # `...${
TEMPLATE_MIDDLE = 8  # }...${
TEMPLATE_TAIL = 9  # }...`

KIND_NAMES = {
    EOF: "end of input",
    NAME: "identifier",
    NUM: "number",
    STR: "string",
    REGEX: "regular expression",
    PUNCT: "punctuator",
    TEMPLATE_FULL: "template",
    TEMPLATE_HEAD: "template",
    TEMPLATE_MIDDLE: "template",
    TEMPLATE_TAIL: "template",
}

# Longest-match-first punctuator table.
PUNCTUATORS = (
    ">>>=",
    "===", "!==", ">>>", "**=", "<<=", ">>=", "...",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**", "?.",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".",
)

#: Keywords after which a `/` starts a regular expression, not division.
KEYWORDS_BEFORE_EXPR = frozenset({
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void",
    "throw", "case", "do", "else", "yield", "await", "extends",
})

#: Keywords after which `{` opens a block, not an object literal.
KEYWORDS_BEFORE_BLOCK = frozenset({"do", "else", "try", "finally"})

#: Keywords that introduce a parenthesized header (`if (...)` etc.); after
#: the matching `)` a `/` is a regex and `{` is a block.
PAREN_HEADER_KEYWORDS = frozenset({"if", "for", "while", "switch", "catch", "with"})

LINE_TERMINATORS = "\n\r  "


class ScanError(SyntaxError):
    """Lexical error with position info."""

    def __init__(self, message: str, pos: int, line: int, col: int) -> None:
        super().__init__(f"{message} (line {line}, column {col})")
        self.pos = pos
        self.line = line
        self.col = col
