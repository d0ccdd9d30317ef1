import * as assert from "node:assert";
import { describe, it } from "node:test";

import { toJsonSummary, toJUnitXml } from "../src/report";
import { CaseVerdict } from "../src/types";

const RESULTS: CaseVerdict[] = [
  { name: "ok-case", passed: true, detail: "output matches", durationMs: 12.5 },
  { name: "bad-case", passed: false, detail: 'expected <x> got "y"', durationMs: 3.1 },
  { name: "skipped-case", passed: false, skipped: true, detail: "engine missing", durationMs: 0 },
];

describe("junit report", () => {
  it("counts tests, failures and skips", () => {
    const xml = toJUnitXml(RESULTS);
    assert.match(xml, /tests="3"/);
    assert.match(xml, /failures="1"/);
    assert.match(xml, /skipped="1"/);
  });

  it("escapes xml metacharacters", () => {
    const xml = toJUnitXml(RESULTS);
    assert.ok(xml.includes("&lt;x&gt;"));
    assert.ok(!xml.includes('got "y"'));
  });

  it("is well-formed enough to round-trip names", () => {
    const xml = toJUnitXml(RESULTS);
    assert.match(xml, /<testcase name="ok-case" time="0\.013">/);
  });
});

describe("json summary", () => {
  it("aggregates totals", () => {
    const doc = JSON.parse(toJsonSummary(RESULTS));
    assert.deepStrictEqual(
      { total: doc.total, passed: doc.passed, failed: doc.failed, skipped: doc.skipped },
      { total: 3, passed: 1, failed: 1, skipped: 1 },
    );
    assert.strictEqual(doc.cases.length, 3);
  });
});
