/**
 * The four figure kinds rendered from serrinband CLI outputs.  Pure
 * consumers: every curve comes straight from file columns, nothing is
 * recomputed.
 */

import { basename } from "path";
import {
  BranchFile,
  readBifpointsCsv,
  readBranchJson,
  readEmbedCsv,
  readSigmaCsv,
  SchemaError,
} from "./schemas.js";
import { makeFrame, Margins, PALETTE, Svg } from "./svg.js";

export type FigureKind = "eigencurves" | "bifpoints" | "branch" | "domain3d";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  /** style options */
  width?: number;
  height?: number;
  ymin?: number;
  ymax?: number;
  title?: string;
}

const MARGINS: Margins = { left: 56, right: 16, top: 30, bottom: 40 };

function label(path: string): string {
  return basename(path).replace(/\.(csv|json)$/, "");
}

export function renderEigencurves(spec: FigureSpec): string {
  if (spec.inputs.length === 0) throw new SchemaError("eigencurves needs at least one sigma CSV");
  const tables = spec.inputs.map(readSigmaCsv);
  const svg = new Svg(spec.width ?? 640, spec.height ?? 420);
  let xlo = Infinity;
  let xhi = -Infinity;
  for (const t of tables) {
    for (const r of t.rows) {
      xlo = Math.min(xlo, r[0]);
      xhi = Math.max(xhi, r[0]);
    }
  }
  const ylo = spec.ymin ?? -2.5;
  const yhi = spec.ymax ?? 6;
  const f = makeFrame(svg, MARGINS, [xlo, xhi], [ylo, yhi], "lambda", "sigma",
    spec.title ?? "eigenvalue curves sigma_j(lambda)");
  // zero line: the crossings are the bifurcation points
  svg.line(f.x.map(xlo), f.y.map(0), f.x.map(xhi), f.y.map(0), "#888888", 1, "4,3");
  tables.forEach((t, k) => {
    const pts: Array<[number, number]> = [];
    for (const r of t.rows) {
      const y = Math.max(ylo, Math.min(yhi, r[1]));
      pts.push([f.x.map(r[0]), f.y.map(y)]);
    }
    svg.polyline(pts, PALETTE[k % PALETTE.length]);
    svg.text(svg.width - MARGINS.right - 6, MARGINS.top + 14 + 14 * k, label(spec.inputs[k]),
      10, "end", PALETTE[k % PALETTE.length]);
  });
  return svg.render();
}

export function renderBifpoints(spec: FigureSpec): string {
  if (spec.inputs.length !== 1) throw new SchemaError("bifpoints takes exactly one CSV");
  const t = readBifpointsCsv(spec.inputs[0]);
  const svg = new Svg(spec.width ?? 560, spec.height ?? 400);
  const js = t.rows.map((r) => r[0]);
  const lams = t.rows.map((r) => r[1]);
  const f = makeFrame(svg, MARGINS, [Math.min(...js) - 0.5, Math.max(...js) + 0.5],
    [0, Math.max(...lams) * 1.15], "degree j", "lambda_j",
    spec.title ?? "bifurcation values lambda_j");
  const pts: Array<[number, number]> = t.rows.map((r) => [f.x.map(r[0]), f.y.map(r[1])]);
  svg.polyline(pts, "#bbbbbb", 1, "3,3");
  for (const p of pts) svg.circle(p[0], p[1], 4, PALETTE[0]);
  return svg.render();
}

export function renderBranch(spec: FigureSpec): string {
  if (spec.inputs.length === 0) throw new SchemaError("branch needs at least one branch JSON");
  const branches: BranchFile[] = spec.inputs.map(readBranchJson);
  const svg = new Svg(spec.width ?? 560, spec.height ?? 400);
  let slo = Infinity, shi = -Infinity, llo = Infinity, lhi = -Infinity;
  for (const b of branches) {
    for (const p of b.points) {
      slo = Math.min(slo, p.s);
      shi = Math.max(shi, p.s);
      llo = Math.min(llo, p.lambda);
      lhi = Math.max(lhi, p.lambda);
    }
  }
  const pad = Math.max(1e-6, (lhi - llo) * 0.2);
  const f = makeFrame(svg, MARGINS, [slo, shi], [llo - pad, lhi + pad],
    "amplitude s", "lambda_j(s)", spec.title ?? "bifurcation branch");
  branches.forEach((b, k) => {
    const color = PALETTE[k % PALETTE.length];
    svg.line(f.x.map(slo), f.y.map(b.lambda_star), f.x.map(shi), f.y.map(b.lambda_star),
      "#888888", 1, "4,3");
    const pts: Array<[number, number]> = b.points.map((p) => [f.x.map(p.s), f.y.map(p.lambda)]);
    svg.polyline(pts, color);
    for (const p of pts) svg.circle(p[0], p[1], 3, color);
    svg.text(svg.width - MARGINS.right - 6, MARGINS.top + 14 + 14 * k,
      `N=${b.dim} j=${b.j} (${b.status})`, 10, "end", color);
  });
  return svg.render();
}

/** Orthographic projection after a fixed tilt; front/back split by depth. */
function project(x: number, y: number, z: number): { u: number; v: number; depth: number } {
  const a = 0.45; // tilt about the x-axis
  const b = -0.6; // then about the y-axis
  const y1 = y * Math.cos(a) - z * Math.sin(a);
  const z1 = y * Math.sin(a) + z * Math.cos(a);
  const x2 = x * Math.cos(b) + z1 * Math.sin(b);
  const z2 = -x * Math.sin(b) + z1 * Math.cos(b);
  return { u: x2, v: -y1, depth: z2 };
}

export function renderDomain3d(spec: FigureSpec): string {
  if (spec.inputs.length === 0) throw new SchemaError("domain3d needs at least one embed CSV");
  const curves = spec.inputs.map(readEmbedCsv);
  const size = spec.width ?? 480;
  const svg = new Svg(size, spec.height ?? size);
  const cx = svg.width / 2;
  const cy = svg.height / 2;
  const R = Math.min(svg.width, svg.height) * 0.42;
  svg.text(cx, 18, spec.title ?? "band boundaries on the sphere", 13, "middle", "#111111");
  // sphere outline and wireframe (parallels and meridians), back first
  svg.circle(cx, cy, R, "none");
  svg.line(cx - R, cy, cx - R, cy, "#000000", 0); // keep structure deterministic
  const wire: Array<{ pts: Array<[number, number]>; front: boolean }> = [];
  const steps = 120;
  for (const lat of [-60, -30, 0, 30, 60]) {
    const th = (lat * Math.PI) / 180;
    for (const front of [false, true]) {
      const pts: Array<[number, number]> = [];
      for (let i = 0; i <= steps; i++) {
        const ph = (2 * Math.PI * i) / steps;
        const p = project(Math.cos(th) * Math.cos(ph), Math.cos(th) * Math.sin(ph), Math.sin(th));
        if (p.depth >= 0 === front) pts.push([cx + R * p.u, cy + R * p.v]);
        else {
          if (pts.length > 1) wire.push({ pts: pts.slice(), front });
          pts.length = 0;
        }
      }
      if (pts.length > 1) wire.push({ pts, front });
    }
  }
  for (const lon of [0, 45, 90, 135]) {
    const ph = (lon * Math.PI) / 180;
    for (const front of [false, true]) {
      const pts: Array<[number, number]> = [];
      for (let i = 0; i <= steps; i++) {
        const th = Math.PI * (i / steps) - Math.PI / 2;
        const p = project(Math.cos(th) * Math.cos(ph), Math.cos(th) * Math.sin(ph), Math.sin(th));
        if (p.depth >= 0 === front) pts.push([cx + R * p.u, cy + R * p.v]);
        else {
          if (pts.length > 1) wire.push({ pts: pts.slice(), front });
          pts.length = 0;
        }
      }
      if (pts.length > 1) wire.push({ pts, front });
    }
  }
  for (const w of wire.filter((w) => !w.front)) svg.polyline(w.pts, "#dddddd", 0.8);
  const outline: Array<[number, number]> = [];
  for (let i = 0; i <= 240; i++) {
    const t = (2 * Math.PI * i) / 240;
    outline.push([cx + R * Math.cos(t), cy + R * Math.sin(t)]);
  }
  svg.polyline(outline, "#999999", 1);
  for (const w of wire.filter((w) => w.front)) svg.polyline(w.pts, "#cccccc", 0.8);

  curves.forEach((t, k) => {
    if (t.rows.length < 2) throw new SchemaError(`${spec.inputs[k]}: embed curve needs >= 2 rows`);
    const color = PALETTE[k % PALETTE.length];
    for (const front of [false, true]) {
      const pts: Array<[number, number]> = [];
      // the embed CSV covers alpha in [0, pi]; mirror to the full circle
      for (const sign of [1, -1]) {
        const rows = sign === 1 ? t.rows : [...t.rows].reverse();
        for (const r of rows) {
          const p = project(r[0], sign * r[1], r[2]);
          if (p.depth >= 0 === front) pts.push([cx + R * p.u, cy + R * p.v]);
          else {
            if (pts.length > 1) svg.polyline(pts, color, front ? 2 : 1, front ? "" : "3,3");
            pts.length = 0;
          }
        }
      }
      if (pts.length > 1) svg.polyline(pts, color, front ? 2 : 1, front ? "" : "3,3");
    }
    svg.text(svg.width - 10, 34 + 14 * k, label(spec.inputs[k]), 10, "end", color);
  });
  return svg.render();
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "eigencurves":
      return renderEigencurves(spec);
    case "bifpoints":
      return renderBifpoints(spec);
    case "branch":
      return renderBranch(spec);
    case "domain3d":
      return renderDomain3d(spec);
    default:
      throw new SchemaError(`unknown figure kind ${(spec as { kind: string }).kind}`);
  }
}
