// Application flow, independent of the DOM.
//
// Uploading stores the dataset and schema; computing posts exactly one
// analysis and caches its id; switching the displayed pair or toggling the
// significance mask only re-fetches or re-renders, never recomputes. At
// most one analysis request is in flight at a time.

import { ApiClient } from "./api.js";
import {
  UiState,
  analysisPairs,
  canCompute,
  initialState,
  toAnalysisRequest,
} from "./state.js";
import type {
  AlphaMask,
  AnalysisSummary,
  ResultDocument,
  ScatterRecord,
} from "./types.js";

export interface ViewHooks {
  renderMap(doc: ResultDocument, state: UiState): void;
  renderScatter(records: ScatterRecord[], pair: [string, string], state: UiState): void;
  renderSummary(summary: AnalysisSummary | null): void;
  renderStatus(message: string, isError?: boolean): void;
  syncForm(state: UiState): void;
}

export class AppController {
  state: UiState = initialState();
  analysisId: string | null = null;
  tilesUrl = "";
  computing = false;
  private doc: ResultDocument | null = null;
  private scatter: ScatterRecord[] | null = null;
  private summary: AnalysisSummary | null = null;

  constructor(
    private api: ApiClient,
    private hooks: ViewHooks,
  ) {}

  async loadConfig(): Promise<void> {
    try {
      this.tilesUrl = (await this.api.getConfig()).tiles_url;
    } catch {
      this.tilesUrl = "";
    }
  }

  /** One active dataset per session; uploading replaces it. */
  async upload(body: string | Blob, csv?: { xCol: string; yCol: string }): Promise<void> {
    const response = csv
      ? await this.api.uploadCsv(body, csv.xCol, csv.yCol)
      : await this.api.uploadGeoJson(body);
    this.state = {
      ...initialState(),
      datasetId: response.dataset_id,
      geometryKind: response.geometry_kind,
      variables: response.schema.variables.map((v) => v.name),
    };
    this.analysisId = null;
    this.doc = null;
    this.scatter = null;
    this.summary = null;
    this.hooks.renderSummary(null);
    this.hooks.syncForm(this.state);
    this.hooks.renderStatus(
      `loaded ${response.n} ${response.geometry_kind} features, ` +
      `${this.state.variables.length} variables`);
  }

  /** Form field updates; the mode switch clears controls per the invariant. */
  setField<K extends keyof UiState>(key: K, value: UiState[K]): void {
    this.state = { ...this.state, [key]: value };
    if (key === "mode" && value === "correlation") {
      this.state = { ...this.state, controls: [] };
    }
    this.hooks.syncForm(this.state);
  }

  get canCompute(): boolean {
    return canCompute(this.state) && !this.computing;
  }

  get displayedPair(): [string, string] | null {
    return this.state.displayedPair;
  }

  /** Pairs available to the switcher (all pairs of the analysis set). */
  get pairChoices(): [string, string][] {
    return this.state.mode === "partial_correlation" ? analysisPairs(this.state) : [];
  }

  async compute(): Promise<void> {
    if (!this.canCompute) {
      return;
    }
    this.computing = true;
    this.hooks.syncForm(this.state);
    try {
      const request = toAnalysisRequest(this.state);
      const response = await this.api.runAnalysis(request);
      this.analysisId = response.analysis_id;
      this.summary = response.summary;
      this.state = {
        ...this.state,
        displayedPair: [this.state.varA as string, this.state.varB as string],
        selectedIndex: null,
      };
      await this.refreshDisplayed();
      this.hooks.renderSummary(this.summary);
      this.hooks.renderStatus(
        `analysis done: ${response.summary.n_used} locations in ` +
        `${(response.summary.wall_ms ?? 0).toFixed(0)} ms`);
    } catch (err) {
      this.hooks.renderStatus(String(err), true);
    } finally {
      this.computing = false;
      this.hooks.syncForm(this.state);
    }
  }

  /** Re-fetch the displayed pair from the cached surface; no recompute. */
  async switchPair(pair: [string, string]): Promise<void> {
    if (!this.analysisId) {
      return;
    }
    this.state = { ...this.state, displayedPair: pair, selectedIndex: null };
    await this.refreshDisplayed();
    this.hooks.syncForm(this.state);
  }

  private async refreshDisplayed(): Promise<void> {
    if (!this.analysisId || !this.state.displayedPair) {
      return;
    }
    const pair = this.state.displayedPair;
    this.doc = await this.api.getResult(this.analysisId, pair);
    this.scatter = await this.api.getScatter(this.analysisId, pair);
    this.rerender();
  }

  /** Mask and opacity changes re-render from cached responses only. */
  setAlphaMask(alpha: AlphaMask): void {
    this.state = { ...this.state, alphaMask: alpha };
    this.rerender();
    this.hooks.syncForm(this.state);
  }

  setOpacity(opacity: number): void {
    this.state = { ...this.state, opacity };
    this.rerender();
  }

  /** Linked selection: clicking either panel highlights both. */
  select(index: number | null): void {
    this.state = { ...this.state, selectedIndex: index };
    this.rerender();
  }

  private rerender(): void {
    if (this.doc && this.state.displayedPair) {
      this.hooks.renderMap(this.doc, this.state);
      if (this.scatter) {
        this.hooks.renderScatter(this.scatter, this.state.displayedPair, this.state);
      }
    }
  }
}
