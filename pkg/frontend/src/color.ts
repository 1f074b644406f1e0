// Viridis color scale over the fixed coefficient domain [-1, 1].
//
// The domain never adapts to the data, so maps and scatter plots from
// different parameter choices stay visually comparable, and both panels
// share this one mapping.

const VIRIDIS: [number, number, number][] = [
  [68, 1, 84],
  [72, 24, 106],
  [71, 45, 123],
  [66, 64, 134],
  [59, 82, 139],
  [51, 99, 141],
  [44, 114, 142],
  [38, 130, 142],
  [33, 145, 140],
  [31, 160, 136],
  [40, 174, 128],
  [63, 188, 115],
  [94, 201, 98],
  [132, 212, 75],
  [173, 220, 48],
  [216, 226, 25],
  [253, 231, 37],
];

/** Color for no-data cells (dropped rows, degenerate local variance). */
export const NO_DATA_COLOR = "rgb(178,178,178)";

/** Fill for features masked as insignificant at the active threshold. */
export const MASK_COLOR = "rgb(0,0,0)";

/** Viridis at t in [0, 1]; out-of-range values clamp. */
export function viridis(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const pos = clamped * (VIRIDIS.length - 1);
  const idx = Math.min(Math.floor(pos), VIRIDIS.length - 2);
  const frac = pos - idx;
  const lo = VIRIDIS[idx];
  const hi = VIRIDIS[idx + 1];
  const r = Math.round(lo[0] + frac * (hi[0] - lo[0]));
  const g = Math.round(lo[1] + frac * (hi[1] - lo[1]));
  const b = Math.round(lo[2] + frac * (hi[2] - lo[2]));
  return `rgb(${r},${g},${b})`;
}

/** Coefficient color on the fixed [-1, 1] domain; null means no data. */
export function coefColor(coef: number | null): string {
  if (coef === null || Number.isNaN(coef)) {
    return NO_DATA_COLOR;
  }
  return viridis((coef + 1) / 2);
}
