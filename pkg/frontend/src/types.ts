/** Wire types of the tcmnn service. */

export interface GridPoint {
  x: number;
  y: number;
  label: number;
}

export interface GridConfig {
  k: number;
  metric: string;
}

export interface GridRequest {
  points: GridPoint[];
  config: GridConfig;
  resolution: { w: number; h: number };
}

export interface GridCell {
  label: number;
  confidence: number;
  credibility: number;
}

/** Row-major cells, row 0 at the top (y grows downward). */
export interface GridResponse {
  cells: GridCell[][];
}

export interface ErrorEnvelope {
  error: { code: string; message: string };
}

export type View = "confidence" | "credibility";
