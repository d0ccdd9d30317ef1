export type ExpectedOutcome =
  | {
      outcome: "completes";
      /** compare stdout byte-for-byte against a run of the uninstrumented tree */
      matchBaseline?: boolean;
      /** or against a literal expected output */
      output?: string;
    }
  | {
      outcome: "permission-violation";
      /** which check must fire */
      site: "import" | "property" | "assign";
      /** substring that must appear in the violation message */
      needle?: string;
    };

export interface HarnessCase {
  name: string;
  /** tree path relative to fixtures/src (instrumented mirror lives under fixtures/build) */
  tree: string;
  entry: string;
  expect: ExpectedOutcome;
}

export interface CaseVerdict {
  name: string;
  passed: boolean;
  skipped?: boolean;
  detail: string;
  durationMs: number;
}

export interface RunResult {
  stdout: string;
  stderr: string;
  code: number | null;
  durationMs: number;
}

export interface OverheadReport {
  baselineMedianMs: number;
  instrumentedMedianMs: number;
  overheadPct: number;
  importChecks: number;
  propertyChecks: number;
  repetitions: number;
  iterations: number;
}
