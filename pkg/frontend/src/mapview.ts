// Map panel view model: one shape per feature, colors resolved.
//
// Masking works purely from served properties: a feature is blacked out
// when it is valid but not significant at the active threshold. No-data
// features render gray regardless of the mask. Statistics are never
// re-derived client-side.

import { MASK_COLOR, NO_DATA_COLOR, coefColor } from "./color.js";
import type { Projector, Viewport } from "./geometry.js";
import { geometryPath, makeProjector, tileCover } from "./geometry.js";
import type { TileSpec } from "./geometry.js";
import type { AlphaMask, ResultDocument, ResultProps } from "./types.js";

export interface MapShape {
  index: number;
  kind: "circle" | "path";
  cx: number;
  cy: number;
  r: number;
  d: string;
  fill: string;
  masked: boolean;
  noData: boolean;
  props: ResultProps;
}

export interface MapModel {
  shapes: MapShape[];
  tiles: TileSpec[];
  lonLat: boolean;
}

/** True when the feature must render black under the active mask. */
export function isMasked(props: ResultProps, alpha: AlphaMask): boolean {
  if (alpha === null || props.valid !== true) {
    return false;
  }
  const significant = alpha === 0.01 ? props.sig_001 : props.sig_005;
  return significant === false;
}

export function shapeFill(props: ResultProps, alpha: AlphaMask): string {
  if (props.valid !== true) {
    return NO_DATA_COLOR;
  }
  if (isMasked(props, alpha)) {
    return MASK_COLOR;
  }
  return coefColor(props.coef);
}

function anchorOf(geomPath: string, project: Projector,
                  feature: ResultDocument["features"][number]): [number, number] {
  if (feature.geometry.type === "Point") {
    const [x, y] = feature.geometry.coordinates;
    return project(x, y);
  }
  // label anchor for polygons: midpoint of the path bounding box
  const xs: number[] = [];
  const ys: number[] = [];
  for (const move of geomPath.matchAll(/[ML]([-\d.]+) ([-\d.]+)/g)) {
    xs.push(Number(move[1]));
    ys.push(Number(move[2]));
  }
  return [
    (Math.min(...xs) + Math.max(...xs)) / 2,
    (Math.min(...ys) + Math.max(...ys)) / 2,
  ];
}

export function buildMapModel(doc: ResultDocument, alpha: AlphaMask,
                              vp: Viewport, tilesUrl = ""): MapModel {
  const { project, bounds, lonLat, mercatorTransform } = makeProjector(doc, vp);
  const shapes: MapShape[] = doc.features.map((feature, index) => {
    const isPoint = feature.geometry.type === "Point";
    const d = isPoint ? "" : geometryPath(feature.geometry, project);
    const [cx, cy] = anchorOf(d, project, feature);
    const props = feature.properties;
    return {
      index,
      kind: isPoint ? "circle" : "path",
      cx,
      cy,
      r: 5,
      d,
      fill: shapeFill(props, alpha),
      masked: isMasked(props, alpha),
      noData: props.valid !== true,
      props,
    };
  });
  const tiles = lonLat && mercatorTransform
    ? tileCover(bounds, mercatorTransform, tilesUrl)
    : [];
  return { shapes, tiles, lonLat };
}

/** Render the model into an SVG element (thin DOM layer). */
export function applyMapModel(
  svg: SVGSVGElement,
  model: MapModel,
  opacity: number,
  selectedIndex: number | null,
  onSelect: (index: number | null) => void,
): void {
  svg.innerHTML = "";
  const ns = "http://www.w3.org/2000/svg";
  const layer = document.createElementNS(ns, "g");
  layer.setAttribute("opacity", String(opacity));
  for (const shape of model.shapes) {
    const el = shape.kind === "circle"
      ? document.createElementNS(ns, "circle")
      : document.createElementNS(ns, "path");
    if (shape.kind === "circle") {
      el.setAttribute("cx", shape.cx.toFixed(2));
      el.setAttribute("cy", shape.cy.toFixed(2));
      el.setAttribute("r", String(shape.index === selectedIndex ? shape.r + 3 : shape.r));
    } else {
      el.setAttribute("d", shape.d);
    }
    el.setAttribute("fill", shape.fill);
    el.setAttribute("stroke", shape.index === selectedIndex ? "#ff5533" : "#ffffff");
    el.setAttribute("stroke-width", shape.index === selectedIndex ? "2.5" : "0.6");
    el.setAttribute("data-index", String(shape.index));
    el.addEventListener("click", (event) => {
      event.stopPropagation();
      onSelect(shape.index);
    });
    layer.appendChild(el);
  }
  svg.addEventListener("click", () => onSelect(null));
  svg.appendChild(layer);
}
