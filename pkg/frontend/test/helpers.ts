import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { DinesPayload, DominancePayload, CounterfactualPayload, Meta, TraceWindow } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const loadMeta = () => fixture<Meta>("meta.json");
export const loadScenarioTrace = () => fixture<TraceWindow>("trace_scenario.json");
export const loadScenarioDines = () => fixture<DinesPayload>("dines_scenario.json");
export const loadWideTrace = () => fixture<TraceWindow>("trace_5k.json");
export const loadWideDines = (which: "rho03" | "rho06") =>
  fixture<DinesPayload>(`dines_5k_${which}.json`);
export const loadSelected = () => fixture<{ timestep: number }>("selected.json");
export const loadDominance = () => fixture<DominancePayload>("dominance_selected.json");
export const loadCounterfactual = () => fixture<CounterfactualPayload>("counterfactual_selected.json");

export function countMatches(haystack: string, pattern: RegExp): number {
  return (haystack.match(pattern) ?? []).length;
}

export function distinctDataT(svg: string, markerClass: string): Set<string> {
  const out = new Set<string>();
  const re = new RegExp(`class="${markerClass}"[^/]*data-t="(\\d+)"`, "g");
  for (const m of svg.matchAll(re)) out.add(m[1]);
  return out;
}
