import * as fs from "fs";
import * as path from "path";

import { measureOverhead } from "./bench";
import { CASES_FILE, FIXTURE_BUILD, FIXTURE_SRC, RESULTS_DIR } from "./paths";
import { toJsonSummary, toJUnitXml } from "./report";
import { loadCases, runCase } from "./runner";

function cmdRun(): number {
  const cases = loadCases(CASES_FILE);
  const results = cases.map((c) => {
    const verdict = runCase(c);
    const mark = verdict.skipped ? "SKIP" : verdict.passed ? "PASS" : "FAIL";
    console.log(`${mark}  ${verdict.name}  (${verdict.durationMs.toFixed(0)} ms)  ${verdict.detail}`);
    return verdict;
  });
  fs.mkdirSync(RESULTS_DIR, { recursive: true });
  fs.writeFileSync(path.join(RESULTS_DIR, "results.xml"), toJUnitXml(results));
  fs.writeFileSync(path.join(RESULTS_DIR, "summary.json"), toJsonSummary(results));
  const failed = results.filter((r) => !r.passed && !r.skipped).length;
  console.log(`\n${results.length} cases, ${failed} failures; reports in ${RESULTS_DIR}`);
  return failed === 0 ? 0 : 1;
}

function cmdBench(repetitions: number): number {
  const report = measureOverhead(
    path.join(FIXTURE_SRC, "workload", "index.js"),
    path.join(FIXTURE_BUILD, "workload", "index.js"),
    { repetitions },
  );
  console.log(JSON.stringify(report, null, 2));
  return 0;
}

function main(argv: string[]): number {
  const command = argv[0] ?? "run";
  if (command === "run") return cmdRun();
  if (command === "bench") return cmdBench(argv[1] ? Number(argv[1]) : 10);
  console.error(`unknown command: ${command} (expected run | bench)`);
  return 2;
}

process.exit(main(process.argv.slice(2)));
