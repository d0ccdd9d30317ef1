"""Robustness fuzzing: malformed or adversarial input must produce a
clean diagnostic (ScanError/JsSyntaxError), never an internal crash, and
the two scanner kernels must never disagree."""

import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkgperm.js.parser import JsSyntaxError, parse_module
from pkgperm.js.tokens import ScanError
from pkgperm.js._scanner_py import scan as scan_py

try:
    from pkgperm.js._scanner_c import scan as scan_c
except ImportError:
    scan_c = None

JS_CHARS = string.ascii_letters + string.digits + " \t\n(){}[];,.<>+-*/%&|^!~?:=\"'`\\$_#@"


@settings(max_examples=400, deadline=None)
@given(st.text(alphabet=JS_CHARS, max_size=80))
def test_parser_never_crashes_on_ascii_soup(text):
    try:
        parse_module(text)
    except JsSyntaxError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=60))
def test_parser_never_crashes_on_unicode_soup(text):
    try:
        parse_module(text)
    except JsSyntaxError:
        pass


@pytest.mark.skipif(scan_c is None, reason="compiled scanner not built")
@settings(max_examples=400, deadline=None)
@given(st.text(alphabet=JS_CHARS, max_size=120))
def test_kernels_agree_on_random_input(text):
    try:
        expected = scan_py(text)
    except ScanError as err:
        with pytest.raises(ScanError) as got:
            scan_c(text)
        assert (got.value.pos, got.value.line) == (err.pos, err.line)
        return
    assert scan_c(text) == expected


def _random_program(rng: random.Random) -> str:
    """Structurally plausible programs: exercises deep nesting and mixed
    constructs rather than pure noise."""
    pieces = []
    ops = ["+", "-", "*", "/", "%", "&&", "||", "===", "<", ">>"]
    names = ["a", "b", "c", "obj", "fn", "x1"]
    for _ in range(rng.randint(1, 12)):
        kind = rng.random()
        n1, n2 = rng.choice(names), rng.choice(names)
        op = rng.choice(ops)
        if kind < 0.2:
            pieces.append(f"var {n1} = {n2} {op} {rng.randint(0, 99)}")
        elif kind < 0.35:
            pieces.append(f"function {n1}({n2}) {{ return {n2} {op} 1 }}")
        elif kind < 0.5:
            pieces.append(f"if ({n1}) {{ {n2}() }} else {{ {n2}.{n1} = 2 }}")
        elif kind < 0.6:
            pieces.append(f"for (var i = 0; i < {n1}; i++) {n2}[i] = i")
        elif kind < 0.7:
            pieces.append(f"{n1} = {n2} ? [{n1}, {n2}] : {{k: `${{{n1}}}`}}")
        elif kind < 0.8:
            pieces.append(f"try {{ {n1}() }} catch (e) {{ throw e }}")
        elif kind < 0.9:
            pieces.append(f"{n1}.{n2}({rng.randint(0, 9)}, /re{rng.randint(0, 9)}/g)")
        else:
            pieces.append(f"switch ({n1}) {{ case 1: {n2}(); break; default: ; }}")
    return "\n".join(pieces)


def test_generated_programs_parse_and_round_trip():
    from pkgperm.js.codegen import generate
    from pkgperm.js.ast import structurally_equal

    for seed in range(150):
        src = _random_program(random.Random(seed))
        tree = parse_module(src)
        printed = generate(tree)
        assert structurally_equal(tree, parse_module(printed)), f"seed={seed}\n{src}"


def test_generated_programs_rewrite_conservatively():
    from pkgperm.rewriter import rewrite_module
    from tests.test_rewriter import scan_unchecked_restricted_reads

    for seed in range(150):
        src = _random_program(random.Random(10_000 + seed))
        res = rewrite_module(src, frozenset(), module_path=f"fuzz{seed}.js")
        if res.skipped:
            continue
        assert res.inserted_checks == res.code.count(res.check_fn_name), f"seed={seed}"
        assert scan_unchecked_restricted_reads(res.code) == [], f"seed={seed}\n{src}"
        # rewritten output must itself parse
        parse_module(res.code)
