import { describe, expect, it } from "vitest";

import { MASK_COLOR, NO_DATA_COLOR, coefColor, viridis } from "../src/color.js";

describe("viridis scale", () => {
  it("hits the exact endpoint colors", () => {
    expect(viridis(0)).toBe("rgb(68,1,84)");
    expect(viridis(1)).toBe("rgb(253,231,37)");
  });

  it("clamps out-of-range inputs to the fixed domain", () => {
    expect(viridis(-3)).toBe(viridis(0));
    expect(viridis(42)).toBe(viridis(1));
  });

  it("is pure: same input, same output", () => {
    for (const t of [0, 0.123, 0.5, 0.9, 1]) {
      expect(viridis(t)).toBe(viridis(t));
    }
  });
});

describe("coefficient colors", () => {
  it("maps the fixed [-1, 1] domain regardless of data range", () => {
    expect(coefColor(-1)).toBe(viridis(0));
    expect(coefColor(0)).toBe(viridis(0.5));
    expect(coefColor(1)).toBe(viridis(1));
  });

  it("gives three distinct colors at -1, 0, +1", () => {
    const colors = new Set([coefColor(-1), coefColor(0), coefColor(1)]);
    expect(colors.size).toBe(3);
  });

  it("renders no-data as neutral gray, distinct from the mask black", () => {
    expect(coefColor(null)).toBe(NO_DATA_COLOR);
    expect(NO_DATA_COLOR).not.toBe(MASK_COLOR);
  });

  it("clamps coefficients that stray past the domain", () => {
    expect(coefColor(-1.0000001)).toBe(coefColor(-1));
    expect(coefColor(1.5)).toBe(coefColor(1));
  });
});
