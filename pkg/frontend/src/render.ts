/** Pure rendering helpers: grid cells to pixels and hover lookups.
 *
 * Colors: class 0 is red, class 1 green. Cell intensity is the selected
 * view's value through a linear transfer — value 0 paints black, value 1
 * the full class hue.
 */

import { GridCell, GridResponse, View } from "./types.js";

export const CLASS_HUES: [number, number, number][] = [
  [224, 54, 38],   // class 0: red
  [36, 176, 66],   // class 1: green
];

export function cellColor(cell: GridCell, view: View): [number, number, number] {
  const hue = CLASS_HUES[cell.label % CLASS_HUES.length];
  const value = view === "confidence" ? cell.confidence : cell.credibility;
  const v = Math.min(1, Math.max(0, value));
  return [Math.round(hue[0] * v), Math.round(hue[1] * v), Math.round(hue[2] * v)];
}

/** RGBA buffer (row-major, row 0 top) for ImageData of size w x h. */
export function cellsToRgba(resp: GridResponse,
                            view: View): Uint8ClampedArray<ArrayBuffer> {
  const h = resp.cells.length;
  const w = h > 0 ? resp.cells[0].length : 0;
  const out = new Uint8ClampedArray(w * h * 4);
  let offset = 0;
  for (let row = 0; row < h; row++) {
    for (let col = 0; col < w; col++) {
      const [r, g, b] = cellColor(resp.cells[row][col], view);
      out[offset] = r;
      out[offset + 1] = g;
      out[offset + 2] = b;
      out[offset + 3] = 255;
      offset += 4;
    }
  }
  return out;
}

/** Nearest cell for a unit-square position; null outside [0, 1]^2 or when
 * nothing has been rendered yet. */
export function cellAt(resp: GridResponse | null,
                       pos: { x: number; y: number }): GridCell | null {
  if (!resp || resp.cells.length === 0) return null;
  if (pos.x < 0 || pos.x > 1 || pos.y < 0 || pos.y > 1) return null;
  const h = resp.cells.length;
  const w = resp.cells[0].length;
  const row = Math.min(h - 1, Math.max(0, Math.floor(pos.y * h)));
  const col = Math.min(w - 1, Math.max(0, Math.floor(pos.x * w)));
  return resp.cells[row][col];
}

/** Distinct labels painted in a response (a quick region census). */
export function distinctLabels(resp: GridResponse): Set<number> {
  const labels = new Set<number>();
  for (const row of resp.cells) {
    for (const cell of row) labels.add(cell.label);
  }
  return labels;
}
