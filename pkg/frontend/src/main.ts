/** Browser bootstrap: binds the explorer controller to the canvas and the
 * controls. Served by `tcmnn serve` from frontend/dist.
 */

import { ApiClient } from "./api.js";
import { ExplorerApp, Painter } from "./app.js";
import { CLASS_HUES, cellsToRgba } from "./render.js";
import { ExplorerState, pixelToUnit } from "./state.js";

const canvas = document.getElementById("surface") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const progress = document.getElementById("progress")!;
const readout = document.getElementById("readout")!;
const runButton = document.getElementById("run") as HTMLButtonElement;
const clearButton = document.getElementById("clear") as HTMLButtonElement;
const viewSelect = document.getElementById("view") as HTMLSelectElement;
const kInput = document.getElementById("k") as HTMLInputElement;
const metricSelect = document.getElementById("metric") as HTMLSelectElement;
const polyOptions = document.getElementById("poly-options")!;
const minkowskiOptions = document.getElementById("minkowski-options")!;
const degreeInput = document.getElementById("degree") as HTMLInputElement;
const constantInput = document.getElementById("constant") as HTMLInputElement;
const exponentInput = document.getElementById("exponent") as HTMLInputElement;
const settings = document.getElementById("settings")!;

function currentMetric(): string {
  const kind = metricSelect.value;
  polyOptions.classList.toggle("hidden", kind !== "poly");
  minkowskiOptions.classList.toggle("hidden", kind !== "minkowski");
  if (kind === "poly") {
    return `poly:${degreeInput.value}:${constantInput.value}`;
  }
  if (kind === "minkowski") {
    return `minkowski:${exponentInput.value}`;
  }
  return "euclidean";
}

const painter: Painter = {
  paint(state: ExplorerState) {
    ctx.fillStyle = "#1b1b1b";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    if (state.lastResponse) {
      const h = state.lastResponse.cells.length;
      const w = state.lastResponse.cells[0].length;
      const image = new ImageData(
        cellsToRgba(state.lastResponse, state.view), w, h);
      // draw at grid resolution, then stretch to the canvas
      const off = document.createElement("canvas");
      off.width = w;
      off.height = h;
      off.getContext("2d")!.putImageData(image, 0, 0);
      ctx.imageSmoothingEnabled = false;
      ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    }
    for (const p of state.points) {
      const [r, g, b] = CLASS_HUES[p.label % CLASS_HUES.length];
      ctx.beginPath();
      ctx.arc(p.x * canvas.width, p.y * canvas.height, 6, 0, 2 * Math.PI);
      ctx.fillStyle = `rgb(${r}, ${g}, ${b})`;
      ctx.fill();
      ctx.lineWidth = 2;
      ctx.strokeStyle = "#000";
      ctx.stroke();
    }
  },
  status(state: ExplorerState) {
    banner.textContent = state.banner ?? "";
    banner.classList.toggle("hidden", state.banner === null);
    progress.classList.toggle("hidden", !state.busy);
    runButton.disabled = state.busy;
    settings.textContent =
      `k=${state.k}  metric=${state.metric}  view=${state.view}  ` +
      `points=${state.points.length}`;
  },
};

const app = new ExplorerApp(new ApiClient(""), painter);

canvas.addEventListener("contextmenu", (e) => e.preventDefault());
canvas.addEventListener("mousedown", (e) => {
  const rect = canvas.getBoundingClientRect();
  const pos = pixelToUnit(e.clientX - rect.left, e.clientY - rect.top,
                          rect.width, rect.height);
  app.handleCanvasClick(pos, e.button === 2 ? "right" : "left");
});

canvas.addEventListener("mousemove", (e) => {
  const rect = canvas.getBoundingClientRect();
  const pos = pixelToUnit(e.clientX - rect.left, e.clientY - rect.top,
                          rect.width, rect.height);
  const info = app.hover(pos);
  if (info === null) {
    readout.textContent = "";
  } else if (info.cell === null) {
    readout.textContent = `(${info.x.toFixed(3)}, ${info.y.toFixed(3)})`;
  } else {
    const value = info.view === "confidence"
      ? info.cell.confidence : info.cell.credibility;
    readout.textContent =
      `(${info.x.toFixed(3)}, ${info.y.toFixed(3)})  class ${info.cell.label}` +
      `  ${info.view} ${value.toFixed(3)}`;
  }
});
canvas.addEventListener("mouseleave", () => { readout.textContent = ""; });

runButton.addEventListener("click", () => { void app.run(); });
clearButton.addEventListener("click", () => app.clear());
viewSelect.addEventListener("change", () => {
  app.setView(viewSelect.value === "credibility" ? "credibility" : "confidence");
});
kInput.addEventListener("change", () => app.setK(Number(kInput.value)));
for (const el of [metricSelect, degreeInput, constantInput, exponentInput]) {
  el.addEventListener("change", () => app.setMetric(currentMetric()));
}

app.setMetric(currentMetric());
