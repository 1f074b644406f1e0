// Scatter panel view model: raw variable values per observation, points
// colored by the local coefficient on the same fixed viridis scale as the
// map.

import { coefColor } from "./color.js";
import type { Viewport } from "./geometry.js";
import type { ScatterRecord } from "./types.js";

export interface ScatterPoint {
  index: number;
  sx: number;
  sy: number;
  fill: string;
  record: ScatterRecord;
}

export interface AxisTick {
  pos: number;
  label: string;
}

export interface ScatterModel {
  points: ScatterPoint[];
  xTicks: AxisTick[];
  yTicks: AxisTick[];
}

function niceTicks(min: number, max: number, count: number): number[] {
  if (!(max > min)) {
    return [min];
  }
  const span = max - min;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step * 10, step * 5, step * 2, step];
  const chosen = candidates.reverse().find((s) => span / s <= count) ?? step * 10;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / chosen) * chosen; v <= max + 1e-12; v += chosen) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

export function buildScatterModel(records: ScatterRecord[], vp: Viewport): ScatterModel {
  const usable = records.filter(
    (r) => r.value_a !== null && r.value_b !== null,
  );
  if (usable.length === 0) {
    return { points: [], xTicks: [], yTicks: [] };
  }
  const xs = usable.map((r) => r.value_a as number);
  const ys = usable.map((r) => r.value_b as number);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-12);
  const spanY = Math.max(maxY - minY, 1e-12);
  const innerW = vp.width - 2 * vp.pad;
  const innerH = vp.height - 2 * vp.pad;

  const px = (v: number) => vp.pad + ((v - minX) / spanX) * innerW;
  const py = (v: number) => vp.height - vp.pad - ((v - minY) / spanY) * innerH;

  const points = usable.map((record) => ({
    index: record.index,
    sx: px(record.value_a as number),
    sy: py(record.value_b as number),
    fill: coefColor(record.coef),
    record,
  }));
  return {
    points,
    xTicks: niceTicks(minX, maxX, 6).map((v) => ({ pos: px(v), label: String(v) })),
    yTicks: niceTicks(minY, maxY, 6).map((v) => ({ pos: py(v), label: String(v) })),
  };
}

export function tooltipText(record: ScatterRecord, pair: [string, string]): string {
  const fmt = (v: number | null) => (v === null ? "no data" : v.toPrecision(4));
  return [
    `#${record.index}`,
    `${pair[0]} = ${fmt(record.value_a)}`,
    `${pair[1]} = ${fmt(record.value_b)}`,
    `coef = ${fmt(record.coef)}`,
    `p = ${fmt(record.pval)}`,
  ].join("\n");
}

/** Render the model into an SVG element (thin DOM layer). */
export function applyScatterModel(
  svg: SVGSVGElement,
  model: ScatterModel,
  vp: Viewport,
  pair: [string, string],
  selectedIndex: number | null,
  onSelect: (index: number | null) => void,
): void {
  svg.innerHTML = "";
  const ns = "http://www.w3.org/2000/svg";
  const axis = document.createElementNS(ns, "g");
  axis.setAttribute("class", "axes");
  const frame = document.createElementNS(ns, "rect");
  frame.setAttribute("x", String(vp.pad));
  frame.setAttribute("y", String(vp.pad));
  frame.setAttribute("width", String(vp.width - 2 * vp.pad));
  frame.setAttribute("height", String(vp.height - 2 * vp.pad));
  frame.setAttribute("fill", "none");
  frame.setAttribute("stroke", "#8888");
  axis.appendChild(frame);
  for (const tick of model.xTicks) {
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", tick.pos.toFixed(1));
    label.setAttribute("y", String(vp.height - vp.pad + 14));
    label.setAttribute("class", "tick");
    label.textContent = tick.label;
    axis.appendChild(label);
  }
  for (const tick of model.yTicks) {
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", String(vp.pad - 4));
    label.setAttribute("y", tick.pos.toFixed(1));
    label.setAttribute("class", "tick tick-y");
    label.textContent = tick.label;
    axis.appendChild(label);
  }
  const xName = document.createElementNS(ns, "text");
  xName.setAttribute("x", String(vp.width / 2));
  xName.setAttribute("y", String(vp.height - 4));
  xName.setAttribute("class", "axis-label");
  xName.textContent = pair[0];
  axis.appendChild(xName);
  const yName = document.createElementNS(ns, "text");
  yName.setAttribute("x", "12");
  yName.setAttribute("y", String(vp.height / 2));
  yName.setAttribute("class", "axis-label");
  yName.setAttribute("transform", `rotate(-90 12 ${vp.height / 2})`);
  yName.textContent = pair[1];
  axis.appendChild(yName);
  svg.appendChild(axis);

  const layer = document.createElementNS(ns, "g");
  for (const point of model.points) {
    const el = document.createElementNS(ns, "circle");
    el.setAttribute("cx", point.sx.toFixed(2));
    el.setAttribute("cy", point.sy.toFixed(2));
    el.setAttribute("r", point.index === selectedIndex ? "7" : "4");
    el.setAttribute("fill", point.fill);
    el.setAttribute("stroke", point.index === selectedIndex ? "#ff5533" : "#2228");
    el.setAttribute("stroke-width", point.index === selectedIndex ? "2.5" : "0.5");
    el.setAttribute("data-index", String(point.index));
    const tip = document.createElementNS(ns, "title");
    tip.textContent = tooltipText(point.record, pair);
    el.appendChild(tip);
    el.addEventListener("click", (event) => {
      event.stopPropagation();
      onSelect(point.index);
    });
    layer.appendChild(el);
  }
  svg.addEventListener("click", () => onSelect(null));
  svg.appendChild(layer);
}
