import { CaseVerdict } from "./types";

function xmlEscape(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function toJUnitXml(results: CaseVerdict[]): string {
  const failures = results.filter((r) => !r.passed && !r.skipped).length;
  const skipped = results.filter((r) => r.skipped).length;
  const lines = [
    '<?xml version="1.0" encoding="UTF-8"?>',
    `<testsuite name="pkgperm-harness" tests="${results.length}" failures="${failures}" skipped="${skipped}">`,
  ];
  for (const r of results) {
    const time = (r.durationMs / 1000).toFixed(3);
    lines.push(`  <testcase name="${xmlEscape(r.name)}" time="${time}">`);
    if (r.skipped) {
      lines.push(`    <skipped message="${xmlEscape(r.detail)}"/>`);
    } else if (!r.passed) {
      lines.push(`    <failure message="${xmlEscape(r.detail)}"/>`);
    }
    lines.push("  </testcase>");
  }
  lines.push("</testsuite>");
  return lines.join("\n") + "\n";
}

export function toJsonSummary(results: CaseVerdict[]): string {
  return JSON.stringify(
    {
      total: results.length,
      passed: results.filter((r) => r.passed).length,
      failed: results.filter((r) => !r.passed && !r.skipped).length,
      skipped: results.filter((r) => r.skipped).length,
      cases: results,
    },
    null,
    2,
  );
}
