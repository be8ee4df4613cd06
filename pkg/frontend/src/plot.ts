/**
 * Determinant-curve figures from scan output: the chosen projection of W
 * against chi, root markers on the zero line, and distinct markers plus
 * guide lines for quasi-exact flags.
 */

import { writeFileSync } from "node:fs";

import { readRootsJson, readScanCsv, SchemaMismatch, Y_QUANTITIES,
         YQuantity } from "./scanData.js";
import { MARGIN, HEIGHT, WIDTH, Scene, ticks, tickLabel, Viewport,
         xPixel, yPixel } from "./svg.js";

export interface PlotSpec {
  inputCsv: string;
  rootsJson: string;
  outputPath: string;
  yQuantity: YQuantity;
}

export interface PlotResult {
  samples: number;
  rootsMarked: number;
  flagsMarked: number;
  warning?: string;
}

const CURVE_COLOR = "#2255aa";
const ROOT_COLOR = "#cc3333";
const FLAG_COLOR = "#e8a33d";
const AXIS_COLOR = "#222222";
const GRID_COLOR = "#d8d8d8";

export function render(spec: PlotSpec): PlotResult {
  if (!Y_QUANTITIES.includes(spec.yQuantity)) {
    throw new SchemaMismatch(String(spec.yQuantity),
      `y quantity must be one of ${Y_QUANTITIES.join(", ")}`);
  }
  const samples = readScanCsv(spec.inputCsv);
  const meta = readRootsJson(spec.rootsJson);
  const title = `W vs chi  (kappa=${meta.kappa}, mu=${round6(meta.mu)}, ` +
    `sector ${meta.sector})`;

  const scene = new Scene();
  let warning: string | undefined;
  let view: Viewport;
  if (samples.length === 0) {
    warning = "empty scan CSV: rendering empty axes";
    view = { xMin: 0, xMax: 1, yMin: -1, yMax: 1 };
  } else {
    const xs = samples.map((s) => s.chi);
    const ys = samples.map((s) => s[spec.yQuantity]);
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    let yMin = Math.min(...ys, 0);
    let yMax = Math.max(...ys, 0);
    const pad = 0.06 * (yMax - yMin || 1);
    yMin -= pad;
    yMax += pad;
    view = { xMin, xMax, yMin, yMax };
  }

  drawAxes(scene, view, spec.yQuantity);

  if (samples.length > 0) {
    const pts = samples.map((s): [number, number] =>
      [xPixel(view, s.chi), yPixel(view, s[spec.yQuantity])]);
    scene.polyline(pts, CURVE_COLOR, 1.6);
  }

  let rootsMarked = 0;
  const y0 = yPixel(view, 0);
  for (const r of meta.roots) {
    if (r.chi < view.xMin || r.chi > view.xMax) continue;
    scene.circle(xPixel(view, r.chi), y0, 4.5, ROOT_COLOR, "root-marker");
    rootsMarked += 1;
  }
  let flagsMarked = 0;
  for (const f of meta.emary_bishop) {
    if (f.chi < view.xMin || f.chi > view.xMax) continue;
    const x = xPixel(view, f.chi);
    scene.line(x, MARGIN.top, x, HEIGHT - MARGIN.bottom, FLAG_COLOR, 1,
               "6 4");
    scene.diamond(x, y0, 6.5, FLAG_COLOR, "quasi-exact-marker");
    flagsMarked += 1;
  }

  scene.text(WIDTH / 2, MARGIN.top - 16, title, 16);
  const svg = scene.render(title);
  writeFileSync(spec.outputPath, svg, "utf8");
  return { samples: samples.length, rootsMarked, flagsMarked, warning };
}

function drawAxes(scene: Scene, view: Viewport, yName: string): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const yTop = MARGIN.top;
  const yBot = HEIGHT - MARGIN.bottom;
  for (const t of ticks(view.xMin, view.xMax)) {
    const px = xPixel(view, t);
    scene.line(px, yTop, px, yBot, GRID_COLOR, 1);
    scene.text(px, yBot + 18, tickLabel(t), 12);
  }
  for (const t of ticks(view.yMin, view.yMax)) {
    const py = yPixel(view, t);
    scene.line(x0, py, x1, py, GRID_COLOR, 1);
    scene.text(x0 - 8, py + 4, tickLabel(t), 12, "end");
  }
  if (view.yMin < 0 && view.yMax > 0) {
    const py = yPixel(view, 0);
    scene.line(x0, py, x1, py, AXIS_COLOR, 1);
  }
  scene.line(x0, yTop, x0, yBot, AXIS_COLOR, 1.5);
  scene.line(x0, yBot, x1, yBot, AXIS_COLOR, 1.5);
  scene.text((x0 + x1) / 2, HEIGHT - 14, "chi", 14);
  scene.text(18, (yTop + yBot) / 2, yName, 14, "middle");
}

const round6 = (x: number): number => Math.round(x * 1e6) / 1e6;
