import { spawnSync } from "child_process";
import * as fs from "fs";
import * as path from "path";

import { FIXTURE_BUILD, FIXTURE_SRC } from "./paths";
import { CaseVerdict, HarnessCase, RunResult } from "./types";

/** Fixture code never runs in the harness process: every execution is a
 * child engine process with captured output. */
export function runEntry(
  entryPath: string,
  env: NodeJS.ProcessEnv = {},
  args: string[] = [],
): RunResult {
  const started = process.hrtime.bigint();
  const proc = spawnSync(process.execPath, [entryPath, ...args], {
    encoding: "utf8",
    env: { ...process.env, ...env },
    timeout: 120_000,
  });
  const durationMs = Number(process.hrtime.bigint() - started) / 1e6;
  return {
    stdout: proc.stdout ?? "",
    stderr: proc.stderr ?? "",
    code: proc.status,
    durationMs,
  };
}

export function sourceTree(c: HarnessCase): string {
  return path.join(FIXTURE_SRC, c.tree);
}

export function instrumentedTree(c: HarnessCase): string {
  return path.join(FIXTURE_BUILD, c.tree);
}

const VIOLATION_RE = /pkgperm violation \((import|property|assign)\)/;

export function runCase(c: HarnessCase): CaseVerdict {
  const entry = path.join(instrumentedTree(c), c.entry);
  if (!fs.existsSync(entry)) {
    return {
      name: c.name,
      passed: false,
      skipped: true,
      detail: `instrumented entry missing: ${entry} (run prepare-fixtures)`,
      durationMs: 0,
    };
  }
  const run = runEntry(entry);

  if (c.expect.outcome === "permission-violation") {
    const match = VIOLATION_RE.exec(run.stderr);
    const site = match?.[1];
    const ok =
      run.code !== 0 &&
      site === c.expect.site &&
      (!c.expect.needle || run.stderr.includes(c.expect.needle));
    return {
      name: c.name,
      passed: ok,
      detail: ok
        ? `violation at ${site} check`
        : `expected ${c.expect.site} violation, got code=${run.code} site=${site ?? "none"}: ${firstLine(run.stderr)}`,
      durationMs: run.durationMs,
    };
  }

  if (run.code !== 0) {
    return {
      name: c.name,
      passed: false,
      detail: `expected completion, exited ${run.code}: ${firstLine(run.stderr)}`,
      durationMs: run.durationMs,
    };
  }
  let expected = c.expect.output;
  if (c.expect.matchBaseline) {
    const baseline = runEntry(path.join(sourceTree(c), c.entry));
    if (baseline.code !== 0) {
      return {
        name: c.name,
        passed: false,
        detail: `baseline run failed: ${firstLine(baseline.stderr)}`,
        durationMs: run.durationMs,
      };
    }
    expected = baseline.stdout;
  }
  const ok = expected === undefined || run.stdout === expected;
  return {
    name: c.name,
    passed: ok,
    detail: ok ? "output matches" : diffDetail(expected ?? "", run.stdout),
    durationMs: run.durationMs,
  };
}

function firstLine(text: string): string {
  return text.split("\n").find((l) => l.trim().length > 0) ?? "";
}

function diffDetail(expected: string, got: string): string {
  const n = Math.min(expected.length, got.length);
  let i = 0;
  while (i < n && expected[i] === got[i]) i++;
  return `stdout diverges at byte ${i}: expected ${JSON.stringify(
    expected.slice(i, i + 30),
  )}, got ${JSON.stringify(got.slice(i, i + 30))}`;
}

export function loadCases(file: string): HarnessCase[] {
  return JSON.parse(fs.readFileSync(file, "utf8")) as HarnessCase[];
}
