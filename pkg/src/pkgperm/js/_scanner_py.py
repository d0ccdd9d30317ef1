"""Pure-Python scanner kernel.

One pass over the source producing the full token list.  This is the hot
loop of the whole toolchain when scanning package corpora; the compiled
twin in _scanner_c.pyx implements the identical algorithm.  Keep the two
in sync; tests/test_scanner.py runs them differentially.
"""

from __future__ import annotations

from pkgperm.js.tokens import (
    EOF,
    KEYWORDS_BEFORE_BLOCK,
    KEYWORDS_BEFORE_EXPR,
    NAME,
    NUM,
    PAREN_HEADER_KEYWORDS,
    PUNCT,
    REGEX,
    STR,
    TEMPLATE_FULL,
    TEMPLATE_HEAD,
    TEMPLATE_MIDDLE,
    TEMPLATE_TAIL,
    ScanError,
)

_PUNCT3 = (">>>=",)
_PUNCT3S = ("===", "!==", ">>>", "**=", "<<=", ">>=", "...")
_PUNCT2 = (
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**", "?.",
)
_PUNCT1 = "{}()[];,<>+-*/%&|^!~?:=."


def _is_id_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_" or ch == "$"


def _is_id_part(ch: str) -> bool:
    return ch.isalnum() or ch == "_" or ch == "$" or ch == "‌" or ch == "‍"


def scan(source: str) -> list[tuple[int, int, int, int, int, int]]:
    """Tokenize `source`, returning the token list ending with an EOF token.

    Raises ScanError on lexical errors (unterminated string/comment/regex,
    stray characters).
    """
    tokens: list[tuple[int, int, int, int, int, int]] = []
    n = len(source)
    i = 0
    line = 1
    line_start = 0
    nl_before = 0

    # context for `/` (regex vs division) and `{` (block vs object literal)
    prev_kind = -1
    prev_text = ""
    brace_stack: list[int] = []  # 1 = block, 0 = object literal
    template_braces: list[int] = []  # open-brace count per open template
    paren_stack: list[int] = []  # 1 = control-flow header paren
    after_paren_regex_ok = 0  # set when prev token is ')'
    after_brace_regex_ok = 1  # set when prev token is '}'

    if i < n and source[i] == "﻿":  # BOM
        i += 1
        line_start = i
    if source.startswith("#!", i):  # shebang on entry files
        while i < n and source[i] not in "\n\r  ":
            i += 1

    def err(msg: str, pos: int) -> ScanError:
        return ScanError(msg, pos, line, pos - line_start)

    while True:
        # -- skip whitespace and comments --
        while i < n:
            ch = source[i]
            if ch in " \t\v\f ﻿":
                i += 1
            elif ch in "\n\r  ":
                if ch == "\r" and i + 1 < n and source[i + 1] == "\n":
                    i += 1
                i += 1
                line += 1
                line_start = i
                nl_before = 1
            elif ch == "/" and i + 1 < n and source[i + 1] == "/":
                i += 2
                while i < n and source[i] not in "\n\r  ":
                    i += 1
            elif ch == "/" and i + 1 < n and source[i + 1] == "*":
                close = source.find("*/", i + 2)
                if close < 0:
                    raise err("unterminated block comment", i)
                j = i
                while j < close:
                    c2 = source[j]
                    if c2 in "\n\r  ":
                        if c2 == "\r" and j + 1 < close and source[j + 1] == "\n":
                            j += 1
                        line += 1
                        line_start = j + 1
                        nl_before = 1
                    j += 1
                i = close + 2
            elif ch.isspace():
                i += 1
            else:
                break

        if i >= n:
            tokens.append((EOF, n, n, line, n - line_start, nl_before))
            return tokens

        start = i
        col = i - line_start
        ch = source[i]

        # -- identifiers / keywords --
        if _is_id_start(ch):
            i += 1
            while i < n and _is_id_part(source[i]):
                i += 1
            kind = NAME
            text = source[start:i]

        # -- numbers --
        elif ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            i = _scan_number(source, i, n)
            kind = NUM
            text = ""

        # -- strings --
        elif ch == '"' or ch == "'":
            quote = ch
            i += 1
            while True:
                if i >= n:
                    raise err("unterminated string literal", start)
                c = source[i]
                if c == quote:
                    i += 1
                    break
                if c == "\\":
                    i += 1
                    if i < n:
                        c2 = source[i]
                        if c2 in "\n\r  ":  # line continuation
                            if c2 == "\r" and i + 1 < n and source[i + 1] == "\n":
                                i += 1
                            line += 1
                            line_start = i + 1
                        i += 1
                elif c in "\n\r  ":
                    raise err("unterminated string literal", start)
                else:
                    i += 1
            kind = STR
            text = ""

        # -- templates --
        elif ch == "`":
            i, kind, nlines, last_ls = _scan_template(source, i + 1, n, start, line, line_start)
            line += nlines
            if nlines:
                line_start = last_ls
            if kind == TEMPLATE_HEAD:
                template_braces.append(0)
            text = ""

        # -- punctuators, regex, template continuation --
        else:
            if ch == "}" and template_braces and template_braces[-1] == 0:
                template_braces.pop()
                i, kind, nlines, last_ls = _scan_template(source, i + 1, n, start, line, line_start)
                line += nlines
                if nlines:
                    line_start = last_ls
                if kind == TEMPLATE_HEAD:
                    kind = TEMPLATE_MIDDLE
                    template_braces.append(0)
                else:
                    kind = TEMPLATE_TAIL
                text = ""
            elif ch == "/" and _regex_allowed(
                prev_kind, prev_text, after_paren_regex_ok, after_brace_regex_ok
            ):
                i = _scan_regex(source, i, n, err)
                kind = REGEX
                text = ""
            else:
                text = _match_punct(source, i, n)
                if text is None:
                    raise err(f"unexpected character {ch!r}", i)
                i += len(text)
                kind = PUNCT
                if text == "{":
                    if template_braces:
                        template_braces[-1] += 1
                    brace_stack.append(
                        0 if _object_brace(prev_kind, prev_text, after_paren_regex_ok, brace_stack) else 1
                    )
                elif text == "}":
                    if template_braces:
                        template_braces[-1] -= 1
                    after_brace_regex_ok = brace_stack.pop() if brace_stack else 1
                elif text == "(":
                    paren_stack.append(
                        1 if (prev_kind == NAME and prev_text in PAREN_HEADER_KEYWORDS) else 0
                    )
                elif text == ")":
                    after_paren_regex_ok = paren_stack.pop() if paren_stack else 0

        prev_text = text if (kind == NAME or kind == PUNCT) else ""
        prev_kind = kind
        tokens.append((kind, start, i, line, col, nl_before))
        nl_before = 0


def _match_punct(source: str, i: int, n: int):
    if i + 4 <= n and source[i : i + 4] == ">>>=":
        return ">>>="
    if i + 3 <= n:
        three = source[i : i + 3]
        if three in _PUNCT3S:
            return three
    if i + 2 <= n:
        two = source[i : i + 2]
        if two in _PUNCT2:
            # `?.` only when not followed by a digit (else it's `cond ? .5 : x`)
            if two == "?.":
                if i + 2 < n and source[i + 2].isdigit():
                    return "?"
                return "?."
            return two
    ch = source[i]
    if ch in _PUNCT1:
        return ch
    return None


def _regex_allowed(prev_kind: int, prev_text: str, after_paren: int, after_brace: int) -> bool:
    if prev_kind == -1:
        return True
    if prev_kind == PUNCT:
        if prev_text == ")":
            return bool(after_paren)
        if prev_text == "}":
            return bool(after_brace)
        if prev_text == "]" or prev_text == "++" or prev_text == "--":
            return False
        return True
    if prev_kind == NAME:
        return prev_text in KEYWORDS_BEFORE_EXPR
    if prev_kind == TEMPLATE_HEAD or prev_kind == TEMPLATE_MIDDLE:
        return True
    return False  # NUM, STR, REGEX, finished templates


def _object_brace(prev_kind: int, prev_text: str, after_paren: int, brace_stack: list[int]) -> bool:
    """Is a `{` here an object literal (vs. a block)?"""
    if prev_kind == -1:
        return False
    if prev_kind == PUNCT:
        if prev_text == ")":
            return False  # `if (...) {`, `function f() {`
        if prev_text in ("}", ";", "{"):
            return False
        if prev_text == "=>":
            return False  # arrow body
        if prev_text == ":":
            # object value vs label/switch-case body: inherit from context
            return bool(brace_stack) and brace_stack[-1] == 0
        return True
    if prev_kind == NAME:
        if prev_text in KEYWORDS_BEFORE_BLOCK:
            return False
        return prev_text in KEYWORDS_BEFORE_EXPR
    if prev_kind == TEMPLATE_HEAD or prev_kind == TEMPLATE_MIDDLE:
        return True
    return False


def _scan_number(source: str, i: int, n: int) -> int:
    start = i
    if source[i] == "0" and i + 1 < n and source[i + 1] in "xXoObB":
        i += 2
        while i < n and (source[i].isalnum()):
            i += 1
        return i
    while i < n and source[i].isdigit():
        i += 1
    if i < n and source[i] == ".":
        i += 1
        while i < n and source[i].isdigit():
            i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] in "+-":
            j += 1
        if j < n and source[j].isdigit():
            i = j
            while i < n and source[i].isdigit():
                i += 1
    if i < n and source[i] == "n" and i > start:  # bigint suffix
        i += 1
    return i


def _scan_regex(source: str, i: int, n: int, err) -> int:
    start = i
    i += 1  # leading /
    in_class = False
    while True:
        if i >= n:
            raise err("unterminated regular expression", start)
        c = source[i]
        if c == "\\":
            i += 2
            continue
        if c in "\n\r  ":
            raise err("unterminated regular expression", start)
        if in_class:
            if c == "]":
                in_class = False
        elif c == "[":
            in_class = True
        elif c == "/":
            i += 1
            break
        i += 1
    while i < n and _is_id_part(source[i]):  # flags
        i += 1
    return i


def _scan_template(source, i, n, start, line, line_start):
    """Scan template text from just after the opening ` or }.

    Returns (end, kind, newline_count, last_line_start) where kind is
    TEMPLATE_FULL (ended at `) or TEMPLATE_HEAD (ended at ${).
    """
    nlines = 0
    last_ls = line_start
    while True:
        if i >= n:
            raise ScanError("unterminated template literal", start, line + nlines, 0)
        c = source[i]
        if c == "`":
            return i + 1, TEMPLATE_FULL, nlines, last_ls
        if c == "$" and i + 1 < n and source[i + 1] == "{":
            return i + 2, TEMPLATE_HEAD, nlines, last_ls
        if c == "\\":
            i += 2
            continue
        if c in "\n\r  ":
            if c == "\r" and i + 1 < n and source[i + 1] == "\n":
                i += 1
            nlines += 1
            last_ls = i + 1
        i += 1
