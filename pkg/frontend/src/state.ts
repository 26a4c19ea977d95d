/** Explorer state and its pure transitions.
 *
 * Training points live in the unit square with y growing downward, matching
 * both canvas pixels and the service's grid rows. The state never holds
 * locally computed p-values: every displayed number originates from the last
 * GridResponse.
 */

import { GridPoint, GridResponse, View } from "./types.js";

export interface ExplorerState {
  points: GridPoint[];
  k: number;
  metric: string;
  view: View;
  lastResponse: GridResponse | null;
  busy: boolean;
  banner: string | null;
}

export function initialState(): ExplorerState {
  return {
    points: [],
    k: 1,
    metric: "euclidean",
    view: "confidence",
    lastResponse: null,
    busy: false,
    banner: null,
  };
}

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

/** Map a canvas pixel to the unit square, clamping clicks on the border. */
export function pixelToUnit(px: number, py: number, width: number,
                            height: number): { x: number; y: number } {
  return { x: clamp01(px / width), y: clamp01(py / height) };
}

export type MouseButton = "left" | "right";

/** Left button adds a class-0 point, right button class-1. Coincident
 * points are permitted; the core handles duplicates. */
export function addPoint(state: ExplorerState, position: { x: number; y: number },
                         button: MouseButton): ExplorerState {
  const point: GridPoint = {
    x: clamp01(position.x),
    y: clamp01(position.y),
    label: button === "left" ? 0 : 1,
  };
  return { ...state, points: [...state.points, point], banner: null };
}

export function clearPoints(state: ExplorerState): ExplorerState {
  return { ...initialState(), k: state.k, metric: state.metric, view: state.view };
}

export function setView(state: ExplorerState, view: View): ExplorerState {
  return { ...state, view };
}

export function setK(state: ExplorerState, k: number): ExplorerState {
  return { ...state, k };
}

export function setMetric(state: ExplorerState, metric: string): ExplorerState {
  return { ...state, metric };
}

/** Count of points per referenced class. */
export function classCounts(points: GridPoint[]): number[] {
  if (points.length === 0) return [];
  const c = Math.max(...points.map((p) => p.label)) + 1;
  const counts = new Array(c).fill(0);
  for (const p of points) counts[p.label] += 1;
  return counts;
}

/** Client-side pre-validation of the structural prerequisites (points of
 * both classes, a sane k).  The k-vs-class-size bound is deliberately left
 * to the service, whose structured `k_too_large` answer is authoritative
 * and becomes the banner. Returns a human-readable problem or null. */
export function validateRunnable(state: ExplorerState): string | null {
  const counts = classCounts(state.points);
  if (counts.length < 2) {
    return "place at least one point of each class (left and right click)";
  }
  if (counts.some((n) => n === 0)) {
    return "every class needs at least one point";
  }
  if (state.k < 1) return "k must be at least 1";
  return null;
}
