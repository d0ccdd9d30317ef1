/** Build step: generate workload data and instrument every fixture tree
 * through the analyzer CLI (the harness only consumes that external
 * surface, never the analyzer's internals). */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as path from "path";

import { FIXTURE_BUILD, FIXTURE_SRC, pkgpermCommand } from "./paths";

const SEED = "5eed";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function generateWorkloadData(treeDir: string, records = 40000): string {
  const rand = mulberry32(0x5eed);
  const teams = ["core", "infra", "web", "data", "ops", "qa"];
  const rows = [];
  for (let i = 0; i < records; i++) {
    rows.push({
      id: i,
      name: `user-${Math.floor(rand() * 100000)}`,
      team: teams[Math.floor(rand() * teams.length)],
      score: Math.floor(rand() * 10000) / 100,
      active: rand() > 0.2,
      tags: ["t" + Math.floor(rand() * 50), "t" + Math.floor(rand() * 50)],
    });
  }
  const dataDir = path.join(treeDir, "data");
  fs.mkdirSync(dataDir, { recursive: true });
  const file = path.join(dataDir, "records.json");
  fs.writeFileSync(file, JSON.stringify(rows));
  return file;
}

export function instrumentTree(srcTree: string, outTree: string): void {
  fs.rmSync(outTree, { recursive: true, force: true });
  const [cmd, ...prefix] = pkgpermCommand();
  const proc = spawnSync(
    cmd,
    [...prefix, "instrument", srcTree, "-o", outTree, "--seed", SEED],
    { encoding: "utf8" },
  );
  if (proc.status !== 0) {
    throw new Error(
      `pkgperm instrument failed for ${srcTree}:\n${proc.stdout}\n${proc.stderr}`,
    );
  }
}

export function listTrees(): string[] {
  const trees: string[] = [];
  for (const top of fs.readdirSync(FIXTURE_SRC)) {
    const topPath = path.join(FIXTURE_SRC, top);
    if (!fs.statSync(topPath).isDirectory()) continue;
    if (top === "benign") {
      for (const sub of fs.readdirSync(topPath)) {
        trees.push(path.join("benign", sub));
      }
    } else {
      trees.push(top);
    }
  }
  return trees.sort();
}

export function prepareAll(): string[] {
  generateWorkloadData(path.join(FIXTURE_SRC, "workload", "node_modules", "report-lib"));
  const trees = listTrees();
  for (const tree of trees) {
    instrumentTree(path.join(FIXTURE_SRC, tree), path.join(FIXTURE_BUILD, tree));
  }
  return trees;
}

if (require.main === module) {
  const trees = prepareAll();
  console.log(`instrumented ${trees.length} fixture trees into ${FIXTURE_BUILD}`);
}
