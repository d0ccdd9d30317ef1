# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scanner kernel: the same algorithm as _scanner_py.py with
typed positions and characters.  Outputs must stay bit-for-bit
interchangeable with the pure kernel; tests/test_scanner.py compares the
two on every fixture.
"""

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

cdef int _EOF = EOF
cdef int _NAME = NAME
cdef int _NUM = NUM
cdef int _STR = STR
cdef int _REGEX = REGEX
cdef int _PUNCT = PUNCT
cdef int _T_FULL = TEMPLATE_FULL
cdef int _T_HEAD = TEMPLATE_HEAD
cdef int _T_MIDDLE = TEMPLATE_MIDDLE
cdef int _T_TAIL = TEMPLATE_TAIL

_PUNCT3S = ("===", "!==", ">>>", "**=", "<<=", ">>=", "...")
_PUNCT2 = (
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**", "?.",
)
_PUNCT1 = "{}()[];,<>+-*/%&|^!~?:=."

KEYWORDS_BEFORE_EXPR_SET = frozenset(KEYWORDS_BEFORE_EXPR)
KEYWORDS_BEFORE_BLOCK_SET = frozenset(KEYWORDS_BEFORE_BLOCK)
PAREN_HEADER_SET = frozenset(PAREN_HEADER_KEYWORDS)


cdef inline bint _is_line_term(Py_UCS4 ch):
    return ch == u'\n' or ch == u'\r' or ch == u' ' or ch == u' '


cdef inline bint _is_id_start(Py_UCS4 ch):
    if (u'a' <= ch <= u'z') or (u'A' <= ch <= u'Z') or ch == u'_' or ch == u'$':
        return True
    if ch < 128:
        return False
    return ch.isalpha()


cdef inline bint _is_id_part(Py_UCS4 ch):
    if (u'a' <= ch <= u'z') or (u'A' <= ch <= u'Z') or (u'0' <= ch <= u'9') or ch == u'_' or ch == u'$':
        return True
    if ch < 128:
        return False
    return ch.isalnum() or ch == u'‌' or ch == u'‍'


cdef inline bint _is_digit(Py_UCS4 ch):
    return u'0' <= ch <= u'9'


def scan(str source):
    """Tokenize `source`; see the pure kernel for the contract."""
    cdef list tokens = []
    cdef Py_ssize_t n = len(source)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t line = 1
    cdef Py_ssize_t line_start = 0
    cdef int nl_before = 0
    cdef int prev_kind = -1
    cdef int kind
    cdef Py_ssize_t start, col, close, j
    cdef Py_UCS4 ch, c, c2, quote
    cdef int after_paren_regex_ok = 0
    cdef int after_brace_regex_ok = 1
    cdef int depth_tmp
    prev_text = ""
    brace_stack = []  # 1 = block, 0 = object literal
    template_braces = []
    paren_stack = []

    if i < n and source[i] == u'﻿':
        i += 1
        line_start = i
    if n >= i + 2 and source[i] == u'#' and source[i + 1] == u'!':
        while i < n and not _is_line_term(source[i]):
            i += 1

    while True:
        while i < n:
            ch = source[i]
            if ch == u' ' or ch == u'\t' or ch == u'\v' or ch == u'\f' or ch == u' ' or ch == u'﻿':
                i += 1
            elif _is_line_term(ch):
                if ch == u'\r' and i + 1 < n and source[i + 1] == u'\n':
                    i += 1
                i += 1
                line += 1
                line_start = i
                nl_before = 1
            elif ch == u'/' and i + 1 < n and source[i + 1] == u'/':
                i += 2
                while i < n and not _is_line_term(source[i]):
                    i += 1
            elif ch == u'/' and i + 1 < n and source[i + 1] == u'*':
                close = source.find("*/", i + 2)
                if close < 0:
                    raise ScanError("unterminated block comment", i, line, i - line_start)
                j = i
                while j < close:
                    c2 = source[j]
                    if _is_line_term(c2):
                        if c2 == u'\r' and j + 1 < close and source[j + 1] == u'\n':
                            j += 1
                        line += 1
                        line_start = j + 1
                        nl_before = 1
                    j += 1
                i = close + 2
            elif ch > 127 and source[i].isspace():
                i += 1
            else:
                break

        if i >= n:
            tokens.append((_EOF, n, n, line, n - line_start, nl_before))
            return tokens

        start = i
        col = i - line_start
        ch = source[i]
        text = ""

        if _is_id_start(ch):
            i += 1
            while i < n and _is_id_part(source[i]):
                i += 1
            kind = _NAME
            text = source[start:i]

        elif _is_digit(ch) or (ch == u'.' and i + 1 < n and _is_digit(source[i + 1])):
            i = _scan_number(source, i, n)
            kind = _NUM

        elif ch == u'"' or ch == u"'":
            quote = ch
            i += 1
            while True:
                if i >= n:
                    raise ScanError("unterminated string literal", start, line, start - line_start)
                c = source[i]
                if c == quote:
                    i += 1
                    break
                if c == u'\\':
                    i += 1
                    if i < n:
                        c2 = source[i]
                        if _is_line_term(c2):
                            if c2 == u'\r' and i + 1 < n and source[i + 1] == u'\n':
                                i += 1
                            line += 1
                            line_start = i + 1
                        i += 1
                elif _is_line_term(c):
                    raise ScanError("unterminated string literal", start, line, start - line_start)
                else:
                    i += 1
            kind = _STR

        elif ch == u'`':
            i, kind, nlines, last_ls = _scan_template(source, i + 1, n, start, line, line_start)
            line += nlines
            if nlines:
                line_start = last_ls
            if kind == _T_HEAD:
                template_braces.append(0)

        else:
            if ch == u'}' and template_braces and template_braces[len(template_braces) - 1] == 0:
                template_braces.pop()
                i, kind, nlines, last_ls = _scan_template(source, i + 1, n, start, line, line_start)
                line += nlines
                if nlines:
                    line_start = last_ls
                if kind == _T_HEAD:
                    kind = _T_MIDDLE
                    template_braces.append(0)
                else:
                    kind = _T_TAIL
            elif ch == u'/' and _regex_allowed(prev_kind, prev_text, after_paren_regex_ok, after_brace_regex_ok):
                i = _scan_regex(source, i, n, line, line_start)
                kind = _REGEX
            else:
                text = _match_punct(source, i, n)
                if text is None:
                    raise ScanError("unexpected character %r" % chr(ch), i, line, i - line_start)
                i += len(<str> text)
                kind = _PUNCT
                if text == "{":
                    if template_braces:
                        template_braces[len(template_braces) - 1] += 1
                    brace_stack.append(
                        0 if _object_brace(prev_kind, prev_text, after_paren_regex_ok, brace_stack) else 1
                    )
                elif text == "}":
                    if template_braces:
                        template_braces[len(template_braces) - 1] -= 1
                    after_brace_regex_ok = brace_stack.pop() if brace_stack else 1
                elif text == "(":
                    paren_stack.append(
                        1 if (prev_kind == _NAME and prev_text in PAREN_HEADER_SET) else 0
                    )
                elif text == ")":
                    after_paren_regex_ok = paren_stack.pop() if paren_stack else 0

        prev_text = text if (kind == _NAME or kind == _PUNCT) else ""
        prev_kind = kind
        tokens.append((kind, start, i, line, col, nl_before))
        nl_before = 0


cdef _match_punct(str source, Py_ssize_t i, Py_ssize_t n):
    if i + 4 <= n and source[i:i + 4] == ">>>=":
        return ">>>="
    cdef str three, two
    if i + 3 <= n:
        three = source[i:i + 3]
        if three in _PUNCT3S:
            return three
    if i + 2 <= n:
        two = source[i:i + 2]
        if two in _PUNCT2:
            if two == "?.":
                if i + 2 < n and _is_digit(source[i + 2]):
                    return "?"
                return "?."
            return two
    cdef Py_UCS4 ch = source[i]
    if ch < 128 and chr(ch) in _PUNCT1:
        return chr(ch)
    return None


cdef bint _regex_allowed(int prev_kind, prev_text, int after_paren, int after_brace):
    if prev_kind == -1:
        return True
    if prev_kind == _PUNCT:
        if prev_text == ")":
            return after_paren != 0
        if prev_text == "}":
            return after_brace != 0
        if prev_text == "]" or prev_text == "++" or prev_text == "--":
            return False
        return True
    if prev_kind == _NAME:
        return prev_text in KEYWORDS_BEFORE_EXPR_SET
    if prev_kind == _T_HEAD or prev_kind == _T_MIDDLE:
        return True
    return False


cdef bint _object_brace(int prev_kind, prev_text, int after_paren, list brace_stack):
    if prev_kind == -1:
        return False
    if prev_kind == _PUNCT:
        if prev_text == ")":
            return False
        if prev_text == "}" or prev_text == ";" or prev_text == "{":
            return False
        if prev_text == "=>":
            return False
        if prev_text == ":":
            return len(brace_stack) > 0 and brace_stack[len(brace_stack) - 1] == 0
        return True
    if prev_kind == _NAME:
        if prev_text in KEYWORDS_BEFORE_BLOCK_SET:
            return False
        return prev_text in KEYWORDS_BEFORE_EXPR_SET
    if prev_kind == _T_HEAD or prev_kind == _T_MIDDLE:
        return True
    return False


cdef Py_ssize_t _scan_number(str source, Py_ssize_t i, Py_ssize_t n):
    cdef Py_ssize_t start = i
    cdef Py_ssize_t j
    cdef Py_UCS4 c
    if source[i] == u'0' and i + 1 < n:
        c = source[i + 1]
        if c == u'x' or c == u'X' or c == u'o' or c == u'O' or c == u'b' or c == u'B':
            i += 2
            while i < n and source[i].isalnum():
                i += 1
            return i
    while i < n and _is_digit(source[i]):
        i += 1
    if i < n and source[i] == u'.':
        i += 1
        while i < n and _is_digit(source[i]):
            i += 1
    if i < n and (source[i] == u'e' or source[i] == u'E'):
        j = i + 1
        if j < n and (source[j] == u'+' or source[j] == u'-'):
            j += 1
        if j < n and _is_digit(source[j]):
            i = j
            while i < n and _is_digit(source[i]):
                i += 1
    if i < n and source[i] == u'n' and i > start:
        i += 1
    return i


cdef Py_ssize_t _scan_regex(str source, Py_ssize_t i, Py_ssize_t n, Py_ssize_t line, Py_ssize_t line_start) except -1:
    cdef Py_ssize_t start = i
    cdef bint in_class = False
    cdef Py_UCS4 c
    i += 1
    while True:
        if i >= n:
            raise ScanError("unterminated regular expression", start, line, start - line_start)
        c = source[i]
        if c == u'\\':
            i += 2
            continue
        if _is_line_term(c):
            raise ScanError("unterminated regular expression", start, line, start - line_start)
        if in_class:
            if c == u']':
                in_class = False
        elif c == u'[':
            in_class = True
        elif c == u'/':
            i += 1
            break
        i += 1
    while i < n and _is_id_part(source[i]):
        i += 1
    return i


cdef tuple _scan_template(str source, Py_ssize_t i, Py_ssize_t n, Py_ssize_t start, Py_ssize_t line, Py_ssize_t line_start):
    cdef Py_ssize_t nlines = 0
    cdef Py_ssize_t last_ls = line_start
    cdef Py_UCS4 c
    while True:
        if i >= n:
            raise ScanError("unterminated template literal", start, line + nlines, 0)
        c = source[i]
        if c == u'`':
            return i + 1, _T_FULL, nlines, last_ls
        if c == u'$' and i + 1 < n and source[i + 1] == u'{':
            return i + 2, _T_HEAD, nlines, last_ls
        if c == u'\\':
            i += 2
            continue
        if _is_line_term(c):
            if c == u'\r' and i + 1 < n and source[i + 1] == u'\n':
                i += 1
            nlines += 1
            last_ls = i + 1
        i += 1
