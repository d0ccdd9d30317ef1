import * as path from "path";

export const ROOT = path.resolve(__dirname, "..", "..");
export const FIXTURE_SRC = path.join(ROOT, "fixtures", "src");
export const FIXTURE_BUILD = path.join(ROOT, "fixtures", "build");
export const RESULTS_DIR = path.join(ROOT, "results");
export const CASES_FILE = path.join(ROOT, "cases.json");

/** How to invoke the analyzer CLI; override with PKGPERM_CLI. */
export function pkgpermCommand(): string[] {
  const env = process.env.PKGPERM_CLI;
  if (env) return env.split(" ");
  return ["python3", "-m", "pkgperm"];
}
