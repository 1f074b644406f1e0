// Form state, its invariants, and the mapping to analysis requests.
//
// The compute button may only enable when this module says the form is
// valid; the request mapping is lossless so the state round-trips through
// an AnalysisRequest unchanged.

import type {
  AlphaMask,
  AnalysisRequest,
  Kernel,
  Method,
  Mode,
} from "./types.js";
import { KERNELS } from "./types.js";

export interface UiState {
  datasetId: string | null;
  geometryKind: "point" | "polygon" | null;
  variables: string[];
  mode: Mode;
  method: Method;
  varA: string | null;
  varB: string | null;
  controls: string[];
  kernel: Kernel;
  bandwidth: number;
  displayedPair: [string, string] | null;
  alphaMask: AlphaMask;
  opacity: number;
  selectedIndex: number | null;
}

export function initialState(): UiState {
  return {
    datasetId: null,
    geometryKind: null,
    variables: [],
    mode: "correlation",
    method: "pearson",
    varA: null,
    varB: null,
    controls: [],
    kernel: "bisquare",
    bandwidth: 0.25,
    displayedPair: null,
    alphaMask: null,
    opacity: 0.9,
    selectedIndex: null,
  };
}

/** Every reason the form cannot be submitted; empty means valid. */
export function formProblems(s: UiState): string[] {
  const problems: string[] = [];
  if (!s.datasetId) {
    problems.push("no dataset loaded");
  }
  if (!s.varA || !s.varB) {
    problems.push("choose both variables of the pair");
  } else if (s.varA === s.varB) {
    problems.push("the two variables must differ");
  }
  if (!(s.bandwidth > 0 && s.bandwidth <= 1)) {
    problems.push("bandwidth must be in (0, 1]");
  }
  if (!KERNELS.includes(s.kernel)) {
    problems.push("unknown kernel");
  }
  if (s.mode === "partial_correlation" && s.controls.length === 0) {
    problems.push("partial correlation needs at least one control");
  }
  if (s.mode === "correlation" && s.controls.length > 0) {
    problems.push("plain correlation takes no controls");
  }
  const pair = new Set([s.varA, s.varB]);
  if (s.controls.some((c) => pair.has(c))) {
    problems.push("controls must differ from the pair");
  }
  if (new Set(s.controls).size !== s.controls.length) {
    problems.push("duplicate control variable");
  }
  return problems;
}

export function canCompute(s: UiState): boolean {
  return formProblems(s).length === 0;
}

/** Ordered analysis variables: the pair first, then the controls. */
export function variableSet(s: UiState): string[] {
  if (!s.varA || !s.varB) {
    return [];
  }
  return [s.varA, s.varB, ...s.controls];
}

/** All unordered pairs of the analysis set, in the engine's order. */
export function analysisPairs(s: UiState): [string, string][] {
  const names = variableSet(s);
  const pairs: [string, string][] = [];
  for (let a = 0; a < names.length; a++) {
    for (let b = a + 1; b < names.length; b++) {
      pairs.push([names[a], names[b]]);
    }
  }
  return pairs;
}

export function toAnalysisRequest(s: UiState): AnalysisRequest {
  const problems = formProblems(s);
  if (problems.length > 0) {
    throw new Error(`form invalid: ${problems.join("; ")}`);
  }
  return {
    dataset_id: s.datasetId as string,
    mode: s.mode,
    method: s.method,
    var_a: s.varA as string,
    var_b: s.varB as string,
    controls: [...s.controls],
    kernel: s.kernel,
    bandwidth_proportion: s.bandwidth,
  };
}

/** Inverse of toAnalysisRequest over the request-backed fields. */
export function applyRequest(s: UiState, req: AnalysisRequest): UiState {
  return {
    ...s,
    datasetId: req.dataset_id,
    mode: req.mode,
    method: req.method,
    varA: req.var_a,
    varB: req.var_b,
    controls: [...req.controls],
    kernel: req.kernel,
    bandwidth: req.bandwidth_proportion,
  };
}

/** Case-insensitive substring filter for the searchable drop-downs. */
export function filterVariables(names: string[], query: string): string[] {
  const q = query.trim().toLowerCase();
  if (!q) {
    return [...names];
  }
  return names.filter((n) => n.toLowerCase().includes(q));
}
