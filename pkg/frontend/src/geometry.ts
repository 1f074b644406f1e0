// Projection of GeoJSON geometries into an SVG viewport.
//
// Longitude/latitude data goes through Web Mercator so an optional slippy
// tile background lines up; planar data is fitted linearly. Everything here
// returns plain values so it can be tested without a DOM.

import type { Geometry, ResultDocument } from "./types.js";

export interface Bounds {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

export interface Viewport {
  width: number;
  height: number;
  pad: number;
}

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

function* geometryCoords(geom: Geometry): Generator<number[]> {
  if (geom.type === "Point") {
    yield geom.coordinates;
  } else if (geom.type === "Polygon") {
    for (const ring of geom.coordinates) {
      yield* ring;
    }
  } else {
    for (const part of geom.coordinates) {
      for (const ring of part) {
        yield* ring;
      }
    }
  }
}

export function dataBounds(doc: ResultDocument): Bounds {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const feature of doc.features) {
    for (const [x, y] of geometryCoords(feature.geometry)) {
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
    }
  }
  return { minX, maxX, minY, maxY };
}

export function looksLonLat(b: Bounds): boolean {
  return b.minX >= -180 && b.maxX <= 180 && b.minY >= -90 && b.maxY <= 90;
}

/** Web-Mercator position normalized to [0, 1] x [0, 1] (y grows south). */
export function mercator(lon: number, lat: number): [number, number] {
  const x = (lon + 180) / 360;
  const clamped = Math.max(-85.05112878, Math.min(85.05112878, lat));
  const rad = (clamped * Math.PI) / 180;
  const y = (1 - Math.log(Math.tan(Math.PI / 4 + rad / 2)) / Math.PI) / 2;
  return [x, y];
}

export type Projector = (x: number, y: number) => [number, number];

/**
 * Screen projector for the document: lon/lat goes through Web Mercator,
 * planar data through a y-flipping linear fit. Aspect ratio is preserved.
 */
export function makeProjector(doc: ResultDocument, vp: Viewport): {
  project: Projector;
  bounds: Bounds;
  lonLat: boolean;
  mercatorTransform: Transform | null;
} {
  const bounds = dataBounds(doc);
  const lonLat = looksLonLat(bounds);
  const innerW = vp.width - 2 * vp.pad;
  const innerH = vp.height - 2 * vp.pad;

  if (lonLat) {
    const [mx0, my0] = mercator(bounds.minX, bounds.maxY); // top-left
    const [mx1, my1] = mercator(bounds.maxX, bounds.minY); // bottom-right
    const spanX = Math.max(mx1 - mx0, 1e-12);
    const spanY = Math.max(my1 - my0, 1e-12);
    const scale = Math.min(innerW / spanX, innerH / spanY);
    const tx = vp.pad + (innerW - spanX * scale) / 2 - mx0 * scale;
    const ty = vp.pad + (innerH - spanY * scale) / 2 - my0 * scale;
    const transform = { scale, tx, ty };
    return {
      project: (x, y) => {
        const [mx, my] = mercator(x, y);
        return [mx * scale + tx, my * scale + ty];
      },
      bounds,
      lonLat,
      mercatorTransform: transform,
    };
  }

  const spanX = Math.max(bounds.maxX - bounds.minX, 1e-12);
  const spanY = Math.max(bounds.maxY - bounds.minY, 1e-12);
  const scale = Math.min(innerW / spanX, innerH / spanY);
  const tx = vp.pad + (innerW - spanX * scale) / 2 - bounds.minX * scale;
  // planar y grows upward; screen y grows downward
  const ty = vp.pad + (innerH - spanY * scale) / 2 + bounds.maxY * scale;
  return {
    project: (x, y) => [x * scale + tx, -y * scale + ty],
    bounds,
    lonLat,
    mercatorTransform: null,
  };
}

/** SVG path for a polygon or multipolygon under the projector. */
export function geometryPath(geom: Geometry, project: Projector): string {
  const rings: number[][][] =
    geom.type === "Polygon"
      ? geom.coordinates
      : geom.type === "MultiPolygon"
        ? geom.coordinates.flat()
        : [];
  const parts: string[] = [];
  for (const ring of rings) {
    ring.forEach(([x, y], i) => {
      const [sx, sy] = project(x, y);
      parts.push(`${i === 0 ? "M" : "L"}${sx.toFixed(2)} ${sy.toFixed(2)}`);
    });
    parts.push("Z");
  }
  return parts.join("");
}

export interface TileSpec {
  url: string;
  left: number;
  top: number;
  size: number;
}

/**
 * Slippy tiles covering the bounds under the same mercator transform, for
 * an optional base-map layer behind lon/lat data. Zoom is chosen so the
 * cover stays under ~20 tiles.
 */
export function tileCover(bounds: Bounds, transform: Transform,
                          urlTemplate: string): TileSpec[] {
  if (!urlTemplate) {
    return [];
  }
  const [mx0, my0] = mercator(bounds.minX, bounds.maxY);
  const [mx1, my1] = mercator(bounds.maxX, bounds.minY);
  let z = 18;
  while (z > 0) {
    const tiles = (Math.floor(mx1 * (1 << z)) - Math.floor(mx0 * (1 << z)) + 1)
      * (Math.floor(my1 * (1 << z)) - Math.floor(my0 * (1 << z)) + 1);
    if (tiles <= 20) {
      break;
    }
    z -= 1;
  }
  const n = 1 << z;
  const out: TileSpec[] = [];
  const x0 = Math.max(0, Math.floor(mx0 * n));
  const x1 = Math.min(n - 1, Math.floor(mx1 * n));
  const y0 = Math.max(0, Math.floor(my0 * n));
  const y1 = Math.min(n - 1, Math.floor(my1 * n));
  for (let ty = y0; ty <= y1; ty++) {
    for (let tx = x0; tx <= x1; tx++) {
      out.push({
        url: urlTemplate
          .replace("{z}", String(z))
          .replace("{x}", String(tx))
          .replace("{y}", String(ty)),
        left: (tx / n) * transform.scale + transform.tx,
        top: (ty / n) * transform.scale + transform.ty,
        size: transform.scale / n,
      });
    }
  }
  return out;
}
