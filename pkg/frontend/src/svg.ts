/**
 * Minimal deterministic SVG scene builder: fixed canvas, no timestamps, no
 * randomness, so identical inputs produce byte-identical files.
 */

export const WIDTH = 900;
export const HEIGHT = 540;
export const MARGIN = { left: 72, right: 24, top: 44, bottom: 52 } as const;

export interface Viewport {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function xPixel(v: Viewport, x: number): number {
  const w = WIDTH - MARGIN.left - MARGIN.right;
  return MARGIN.left + ((x - v.xMin) / (v.xMax - v.xMin)) * w;
}

export function yPixel(v: Viewport, y: number): number {
  const h = HEIGHT - MARGIN.top - MARGIN.bottom;
  return MARGIN.top + h - ((y - v.yMin) / (v.yMax - v.yMin)) * h;
}

const fmt = (x: number): string => {
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

/** Tick positions: a round step (1/2/5 ladder) covering [lo, hi]. */
export function ticks(lo: number, hi: number, target = 7): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

export const tickLabel = (t: number): string =>
  Math.abs(t) >= 1e-11 && (Math.abs(t) < 1e-3 || Math.abs(t) >= 1e4)
    ? t.toExponential(1)
    : String(Math.round(t * 1e6) / 1e6);

export class Scene {
  private parts: string[] = [];

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  polyline(pts: Array<[number, number]>, stroke: string, width: number): void {
    if (pts.length < 2) return;
    const d = pts
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join("");
    this.add(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string,
       width = 1, dash?: string): void {
    const extra = dash ? ` stroke-dasharray="${dash}"` : "";
    this.add(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" ` +
             `y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${extra}/>`);
  }

  circle(cx: number, cy: number, r: number, fill: string, cls: string): void {
    this.add(`<circle class="${cls}" cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" ` +
             `fill="${fill}" stroke="#1d1d1d" stroke-width="1"/>`);
  }

  diamond(cx: number, cy: number, r: number, fill: string, cls: string): void {
    const d = `M${fmt(cx)} ${fmt(cy - r)}L${fmt(cx + r)} ${fmt(cy)}` +
              `L${fmt(cx)} ${fmt(cy + r)}L${fmt(cx - r)} ${fmt(cy)}Z`;
    this.add(`<path class="${cls}" d="${d}" fill="${fill}" ` +
             `stroke="#1d1d1d" stroke-width="1"/>`);
  }

  text(x: number, y: number, content: string, size: number,
       anchor: "start" | "middle" | "end" = "middle"): void {
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" ` +
             `font-family="sans-serif" text-anchor="${anchor}">${escapeXml(content)}</text>`);
  }

  render(title: string): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<desc>${escapeXml(title)}</desc>`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
