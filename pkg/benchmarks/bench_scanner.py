"""Compare the pure-Python and compiled scanner kernels.

Usage: python benchmarks/bench_scanner.py [repetitions]

Scans a synthetic module corpus with both kernels (verifying identical
token streams) and reports per-kernel throughput.
"""

from __future__ import annotations

import sys
import time

from pkgperm.js._scanner_py import scan as scan_py

try:
    from pkgperm.js._scanner_c import scan as scan_c
except ImportError:
    scan_c = None


def synthetic_module(functions: int = 400) -> str:
    parts = ["'use strict'"]
    for i in range(functions):
        parts.append(
            f"function fn{i}(a, b) {{\n"
            f"  var acc = 0;\n"
            f"  for (var j = 0; j < {i % 17 + 3}; j++) acc += a * j - b / (j + 1);\n"
            f"  return `fn{i}: ${{acc.toFixed(2)}} / ${{a}} ${{b}}`;\n"
            f"}}"
        )
        parts.append(
            f"var obj{i} = {{ id: {i}, tag: \"item-{i}\", run: (q) => q ? fn{i}(q, {i}) : /x{i}/.test('y') }};"
        )
    return "\n".join(parts)


def bench(scan, source: str, seconds: float = 2.0) -> tuple[float, int]:
    # warm up, then measure
    scan(source)
    t0 = time.perf_counter()
    n = 0
    while time.perf_counter() - t0 < seconds:
        scan(source)
        n += 1
    return (time.perf_counter() - t0) / n, n


def main() -> int:
    seconds = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
    source = synthetic_module()
    mb = len(source.encode("utf-8")) / 1e6
    print(f"corpus: {mb:.2f} MB of synthetic module source")

    if scan_c is not None and scan_c(source) != scan_py(source):
        print("FATAL: kernels disagree on the benchmark corpus")
        return 1

    t_py, n_py = bench(scan_py, source, seconds)
    print(f"pure python : {t_py * 1000:8.2f} ms/scan  {mb / t_py:7.1f} MB/s  ({n_py} runs)")
    if scan_c is None:
        print("compiled    : not built (python setup.py build_ext --inplace)")
        return 0
    t_c, n_c = bench(scan_c, source, seconds)
    print(f"compiled    : {t_c * 1000:8.2f} ms/scan  {mb / t_c:7.1f} MB/s  ({n_c} runs)")
    print(f"speedup     : {t_py / t_c:0.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
