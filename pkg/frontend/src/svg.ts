/**
 * Minimal deterministic SVG scene builder: fixed float formatting so that
 * identical inputs give byte-identical files.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate ${x}`);
  return x.toFixed(2);
}

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  map(x: number): number {
    const t = (x - this.d0) / (this.d1 - this.d0 || 1);
    return this.r0 + t * (this.r1 - this.r0);
  }

  ticks(count: number): number[] {
    const span = this.d1 - this.d0;
    if (span <= 0) return [this.d0];
    const step = niceStep(span / Math.max(1, count));
    const start = Math.ceil(this.d0 / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.d1 + 1e-9 * Math.abs(span); v += step) {
      out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
  }
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / mag;
  const nice = frac < 1.5 ? 1 : frac < 3.5 ? 2 : frac < 7.5 ? 5 : 10;
  return nice * mag;
}

export function tickLabel(v: number): string {
  const a = Math.abs(v);
  if (v === 0) return "0";
  if (a >= 1000 || a < 0.001) return v.toExponential(1);
  return parseFloat(v.toPrecision(4)).toString();
}

export const PALETTE = [
  "#1f6fb4",
  "#d45500",
  "#2b8a3e",
  "#c02d4a",
  "#6a4fb0",
  "#8a6d1f",
  "#17808a",
  "#5c5c5c",
];

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    );
  }

  polyline(pts: Array<[number, number]>, stroke: string, width = 1.5, dash = "") {
    if (pts.length === 0) return;
    const d = pts.map((p) => `${fmt(p[0])},${fmt(p[1])}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = "") {
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string) {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, size = 11, anchor = "start", fill = "#333333") {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}">${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Frame {
  svg: Svg;
  x: LinearScale;
  y: LinearScale;
}

/** Axes, ticks, labels; returns the scales mapping data to pixels. */
export function makeFrame(
  svg: Svg,
  m: Margins,
  xdom: [number, number],
  ydom: [number, number],
  xlabel: string,
  ylabel: string,
  title: string,
): Frame {
  const x = new LinearScale(xdom[0], xdom[1], m.left, svg.width - m.right);
  const y = new LinearScale(ydom[0], ydom[1], svg.height - m.bottom, m.top);
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  for (const t of x.ticks(7)) {
    const px = x.map(t);
    svg.line(px, y0, px, y1, "#eeeeee", 1);
    svg.line(px, y0, px, y0 + 4, "#333333", 1);
    svg.text(px, y0 + 16, tickLabel(t), 10, "middle");
  }
  for (const t of y.ticks(6)) {
    const py = y.map(t);
    svg.line(x0, py, x1, py, "#eeeeee", 1);
    svg.line(x0 - 4, py, x0, py, "#333333", 1);
    svg.text(x0 - 7, py + 3.5, tickLabel(t), 10, "end");
  }
  svg.line(x0, y0, x1, y0, "#333333", 1.2);
  svg.line(x0, y0, x0, y1, "#333333", 1.2);
  svg.text((x0 + x1) / 2, svg.height - 8, xlabel, 12, "middle");
  svg.text(14, (y0 + y1) / 2, ylabel, 12, "middle");
  svg.text((x0 + x1) / 2, 18, title, 13, "middle", "#111111");
  return { svg, x, y };
}
