// DOM wiring for the three-panel explorer: parameter form, map, scatter.

import { ApiClient } from "./api.js";
import { AppController, ViewHooks } from "./controller.js";
import type { Viewport } from "./geometry.js";
import { applyMapModel, buildMapModel } from "./mapview.js";
import { applyScatterModel, buildScatterModel } from "./scatterview.js";
import { UiState, filterVariables, formProblems } from "./state.js";
import type { AlphaMask, AnalysisSummary, Kernel, ResultDocument, ScatterRecord } from "./types.js";
import { KERNELS } from "./types.js";

const MAP_VP: Viewport = { width: 760, height: 560, pad: 16 };
const SCATTER_VP: Viewport = { width: 420, height: 420, pad: 44 };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function option(value: string, label = value): HTMLOptionElement {
  const o = document.createElement("option");
  o.value = value;
  o.textContent = label;
  return o;
}

class Panel {
  mapSvg = el<HTMLElement>("map-svg") as unknown as SVGSVGElement;
  tileLayer = el<HTMLDivElement>("tile-layer");
  scatterSvg = el<HTMLElement>("scatter-svg") as unknown as SVGSVGElement;
  varA = el<HTMLSelectElement>("var-a");
  varB = el<HTMLSelectElement>("var-b");
  controls = el<HTMLSelectElement>("controls");
  search = el<HTMLInputElement>("var-search");
  kernel = el<HTMLSelectElement>("kernel");
  bandwidth = el<HTMLInputElement>("bandwidth");
  bandwidthLabel = el<HTMLSpanElement>("bandwidth-label");
  opacity = el<HTMLInputElement>("opacity");
  compute = el<HTMLButtonElement>("compute");
  problems = el<HTMLDivElement>("problems");
  status = el<HTMLDivElement>("status");
  summaryBox = el<HTMLDivElement>("summary");
  pairRow = el<HTMLDivElement>("pair-row");
  pairSelect = el<HTMLSelectElement>("pair-select");
  controlsRow = el<HTMLDivElement>("controls-row");
  fileInput = el<HTMLInputElement>("file-input");
  detail = el<HTMLDivElement>("detail");
}

function fillVariableSelects(panel: Panel, state: UiState): void {
  const names = filterVariables(state.variables, panel.search.value);
  for (const select of [panel.varA, panel.varB, panel.controls]) {
    const keep = select === panel.controls
      ? state.controls
      : [select === panel.varA ? state.varA : state.varB];
    select.innerHTML = "";
    if (select !== panel.controls) {
      select.appendChild(option("", "(choose)"));
    }
    // keep chosen values visible even when the search filter hides them
    const visible = new Set([...names, ...keep.filter((k): k is string => !!k)]);
    for (const name of state.variables.filter((n) => visible.has(n))) {
      select.appendChild(option(name));
    }
    if (select === panel.controls) {
      for (const o of Array.from(select.options)) {
        o.selected = state.controls.includes(o.value);
      }
    } else {
      select.value = (select === panel.varA ? state.varA : state.varB) ?? "";
    }
  }
}

function renderSummaryBox(box: HTMLDivElement, summary: AnalysisSummary | null): void {
  if (!summary) {
    box.textContent = "no analysis yet";
    return;
  }
  const fmt = (v: number | null) => (v === null ? "-" : v.toFixed(3));
  box.innerHTML = "";
  const rows: [string, string][] = [
    ["locations", `${summary.n_used} used, ${summary.n_dropped} dropped`],
    ["coefficient", `${fmt(summary.coef_min)} .. ${fmt(summary.coef_max)} (mean ${fmt(summary.coef_mean)})`],
    ["significant", `${summary.significant_at_001} @0.01, ${summary.significant_at_005} @0.05`],
    ["compute", `${(summary.wall_ms ?? 0).toFixed(0)} ms`],
  ];
  for (const [k, v] of rows) {
    const div = document.createElement("div");
    div.innerHTML = `<span class="key">${k}</span> ${v}`;
    box.appendChild(div);
  }
}

function main(): void {
  const panel = new Panel();
  const api = new ApiClient("");

  const hooks: ViewHooks = {
    renderMap(doc: ResultDocument, state: UiState) {
      const model = buildMapModel(doc, state.alphaMask, MAP_VP, controller.tilesUrl);
      panel.tileLayer.innerHTML = "";
      for (const tile of model.tiles) {
        const img = document.createElement("img");
        img.src = tile.url;
        img.style.left = `${tile.left}px`;
        img.style.top = `${tile.top}px`;
        img.style.width = `${tile.size}px`;
        img.style.height = `${tile.size}px`;
        panel.tileLayer.appendChild(img);
      }
      applyMapModel(panel.mapSvg, model, state.opacity, state.selectedIndex,
                    (index) => controller.select(index));
      const selected = state.selectedIndex;
      if (selected !== null && doc.features[selected]) {
        const props = doc.features[selected].properties;
        const fmt = (v: number | null) => (v === null ? "no data" : v.toPrecision(4));
        panel.detail.textContent =
          `#${selected}: coef ${fmt(props.coef)}, p ${fmt(props.pval)}, ` +
          `n_eff ${fmt(props.effective_n)}`;
      } else {
        panel.detail.textContent = "";
      }
    },
    renderScatter(records: ScatterRecord[], pair: [string, string], state: UiState) {
      const model = buildScatterModel(records, SCATTER_VP);
      applyScatterModel(panel.scatterSvg, model, SCATTER_VP, pair,
                        state.selectedIndex, (index) => controller.select(index));
    },
    renderSummary(summary) {
      renderSummaryBox(panel.summaryBox, summary);
    },
    renderStatus(message, isError) {
      panel.status.textContent = message;
      panel.status.className = isError ? "error" : "";
    },
    syncForm(state: UiState) {
      fillVariableSelects(panel, state);
      (document.querySelector(`input[name="mode"][value="${state.mode}"]`) as
        HTMLInputElement).checked = true;
      (document.querySelector(`input[name="method"][value="${state.method}"]`) as
        HTMLInputElement).checked = true;
      panel.kernel.value = state.kernel;
      panel.bandwidth.value = String(state.bandwidth);
      panel.bandwidthLabel.textContent = state.bandwidth.toFixed(2);
      panel.controlsRow.style.display =
        state.mode === "partial_correlation" ? "" : "none";
      const problems = formProblems(state);
      panel.problems.textContent = state.datasetId ? problems.join("; ") : "";
      panel.compute.disabled = !controller.canCompute;
      panel.compute.textContent = controller.computing ? "computing..." : "map results";
      const choices = controller.pairChoices;
      panel.pairRow.style.display =
        choices.length > 1 && controller.analysisId ? "" : "none";
      panel.pairSelect.innerHTML = "";
      for (const [a, b] of choices) {
        panel.pairSelect.appendChild(option(`${a},${b}`, `${a} ~ ${b}`));
      }
      if (state.displayedPair) {
        panel.pairSelect.value = state.displayedPair.join(",");
      }
      const active = state.alphaMask === null ? "none" : String(state.alphaMask);
      for (const btn of Array.from(document.querySelectorAll("[data-alpha]"))) {
        btn.classList.toggle("active",
                             (btn as HTMLElement).dataset.alpha === active);
      }
    },
  };

  const controller = new AppController(api, hooks);
  void controller.loadConfig();

  panel.fileInput.addEventListener("change", async () => {
    const file = panel.fileInput.files?.[0];
    if (!file) {
      return;
    }
    try {
      if (file.name.toLowerCase().endsWith(".csv")) {
        const xCol = window.prompt("x / longitude column name", "x") ?? "x";
        const yCol = window.prompt("y / latitude column name", "y") ?? "y";
        await controller.upload(file, { xCol, yCol });
      } else {
        await controller.upload(file);
      }
    } catch (err) {
      hooks.renderStatus(String(err), true);
    }
  });

  panel.search.addEventListener("input", () => hooks.syncForm(controller.state));
  panel.varA.addEventListener("change", () =>
    controller.setField("varA", panel.varA.value || null));
  panel.varB.addEventListener("change", () =>
    controller.setField("varB", panel.varB.value || null));
  panel.controls.addEventListener("change", () =>
    controller.setField("controls",
                        Array.from(panel.controls.selectedOptions).map((o) => o.value)));
  for (const radio of Array.from(document.querySelectorAll('input[name="mode"]'))) {
    radio.addEventListener("change", () =>
      controller.setField("mode", (radio as HTMLInputElement).value as UiState["mode"]));
  }
  for (const radio of Array.from(document.querySelectorAll('input[name="method"]'))) {
    radio.addEventListener("change", () =>
      controller.setField("method", (radio as HTMLInputElement).value as UiState["method"]));
  }
  panel.kernel.addEventListener("change", () =>
    controller.setField("kernel", panel.kernel.value as Kernel));
  panel.bandwidth.addEventListener("input", () =>
    controller.setField("bandwidth", Number(panel.bandwidth.value)));
  panel.opacity.addEventListener("input", () =>
    controller.setOpacity(Number(panel.opacity.value)));
  panel.compute.addEventListener("click", () => void controller.compute());
  panel.pairSelect.addEventListener("change", () => {
    const [a, b] = panel.pairSelect.value.split(",");
    void controller.switchPair([a, b]);
  });
  for (const btn of Array.from(document.querySelectorAll("[data-alpha]"))) {
    btn.addEventListener("click", () => {
      const raw = (btn as HTMLElement).dataset.alpha;
      const alpha: AlphaMask = raw === "none" ? null : (Number(raw) as 0.01 | 0.05);
      controller.setAlphaMask(alpha);
    });
  }

  panel.kernel.innerHTML = "";
  for (const kernel of KERNELS) {
    panel.kernel.appendChild(option(kernel));
  }
  hooks.syncForm(controller.state);
  hooks.renderSummary(null);
  hooks.renderStatus("load a GeoJSON or CSV dataset to begin");
}

main();
