/** Explorer controller: owns the state, talks to the service, and drives an
 * abstract painter. DOM-free so the logic is testable; main.ts binds it to
 * the canvas and controls.
 */

import { ApiClient, ServiceError } from "./api.js";
import {
  ExplorerState, MouseButton, addPoint, clearPoints, initialState,
  setK, setMetric, setView, validateRunnable,
} from "./state.js";
import { cellAt } from "./render.js";
import { GridCell, GridRequest, View } from "./types.js";

export interface Painter {
  /** Paint the cached response under the current view, then the markers. */
  paint(state: ExplorerState): void;
  /** Reflect busy/progress and banner changes. */
  status(state: ExplorerState): void;
}

export interface Readout {
  x: number;
  y: number;
  cell: GridCell | null;
  view: View;
}

export const DEFAULT_RESOLUTION = { w: 120, h: 120 };

export class ExplorerApp {
  state: ExplorerState = initialState();
  resolution = DEFAULT_RESOLUTION;
  timeoutMs = 30_000;

  constructor(private api: ApiClient, private painter: Painter) {}

  private update(next: ExplorerState): void {
    this.state = next;
    this.painter.status(this.state);
    this.painter.paint(this.state);
  }

  handleCanvasClick(pos: { x: number; y: number }, button: MouseButton): void {
    this.update(addPoint(this.state, pos, button));
  }

  clear(): void {
    this.update(clearPoints(this.state));
  }

  setView(view: View): void {
    // repaints from the cached response; no request is made
    this.update(setView(this.state, view));
  }

  setK(k: number): void {
    this.update(setK(this.state, k));
  }

  setMetric(metric: string): void {
    this.update(setMetric(this.state, metric));
  }

  /** One grid computation; rejected while one is already in flight. */
  async run(): Promise<boolean> {
    if (this.state.busy) return false;
    const problem = validateRunnable(this.state);
    if (problem !== null) {
      this.update({ ...this.state, banner: problem });
      return false;
    }
    const request: GridRequest = {
      points: this.state.points,
      config: { k: this.state.k, metric: this.state.metric },
      resolution: this.resolution,
    };
    this.update({ ...this.state, busy: true, banner: null });
    try {
      const response = await this.api.grid(request, this.timeoutMs);
      this.update({ ...this.state, busy: false, lastResponse: response });
      return true;
    } catch (err) {
      const banner = err instanceof ServiceError
        ? `${err.message} (${err.code})`
        : String(err);
      this.update({ ...this.state, busy: false, banner });
      return false;
    }
  }

  /** Hover readout from the cached response only (no server round-trip).
   * Before the first run it carries coordinates alone; outside the active
   * area it is null. */
  hover(pos: { x: number; y: number }): Readout | null {
    if (pos.x < 0 || pos.x > 1 || pos.y < 0 || pos.y > 1) return null;
    return {
      x: pos.x,
      y: pos.y,
      cell: cellAt(this.state.lastResponse, pos),
      view: this.state.view,
    };
  }
}
