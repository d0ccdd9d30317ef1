import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { runEntry } from "./runner";
import { OverheadReport } from "./types";

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

/** Find an iteration count whose baseline run lasts at least floorMs. */
export function calibrate(baselineEntry: string, floorMs: number): number {
  let iterations = 1;
  for (let attempt = 0; attempt < 24; attempt++) {
    const run = runEntry(baselineEntry, {}, [String(iterations)]);
    if (run.code !== 0) {
      throw new Error(`workload failed during calibration: ${run.stderr}`);
    }
    if (run.durationMs >= floorMs) return iterations;
    const scale = Math.max(1.3, (floorMs * 1.15) / Math.max(run.durationMs, 1));
    iterations = Math.ceil(iterations * scale);
  }
  throw new Error("calibration did not converge");
}

export interface OverheadOptions {
  repetitions?: number;
  floorMs?: number;
  iterations?: number;
}

/** Interleaved baseline/instrumented runs with median comparison; check
 * counters come from the shim's counter file.  Throws if the workload's
 * output is nondeterministic (such a case is invalid). */
export function measureOverhead(
  baselineEntry: string,
  instrumentedEntry: string,
  options: OverheadOptions = {},
): OverheadReport {
  const repetitions = options.repetitions ?? 10;
  const floorMs = options.floorMs ?? 5000;
  const iterations =
    options.iterations ?? calibrate(baselineEntry, floorMs);
  const args = [String(iterations)];

  const countersFile = path.join(
    fs.mkdtempSync(path.join(os.tmpdir(), "pkgperm-bench-")),
    "counters.json",
  );

  const baselineTimes: number[] = [];
  const instrumentedTimes: number[] = [];
  let expectedOutput: string | undefined;
  let counters = { importChecks: 0, propertyChecks: 0 };

  for (let rep = 0; rep < repetitions; rep++) {
    const base = runEntry(baselineEntry, {}, args);
    if (base.code !== 0) throw new Error(`baseline failed: ${base.stderr}`);
    const inst = runEntry(
      instrumentedEntry,
      { PKGPERM_COUNTERS_FILE: countersFile },
      args,
    );
    if (inst.code !== 0) throw new Error(`instrumented failed: ${inst.stderr}`);

    if (expectedOutput === undefined) expectedOutput = base.stdout;
    if (base.stdout !== expectedOutput || inst.stdout !== expectedOutput) {
      throw new Error("nondeterministic workload output; case invalid");
    }
    baselineTimes.push(base.durationMs);
    instrumentedTimes.push(inst.durationMs);
    counters = JSON.parse(fs.readFileSync(countersFile, "utf8"));
  }

  const baselineMedianMs = median(baselineTimes);
  const instrumentedMedianMs = median(instrumentedTimes);
  return {
    baselineMedianMs,
    instrumentedMedianMs,
    overheadPct:
      ((instrumentedMedianMs - baselineMedianMs) / baselineMedianMs) * 100,
    importChecks: counters.importChecks,
    propertyChecks: counters.propertyChecks,
    repetitions,
    iterations,
  };
}
