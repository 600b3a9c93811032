/**
 * Figure renderer for serrinband outputs.
 *
 * Usage:
 *   node dist/plots.js --spec figure.json
 *   node dist/plots.js --kind eigencurves --input a.csv,b.csv --output out.svg
 *
 * Exit codes: 0 written, 1 schema/render failure, 2 bad arguments.
 */

import { readFileSync, writeFileSync } from "fs";
import { FigureKind, FigureSpec, renderFigure } from "./figures.js";
import { SchemaError } from "./schemas.js";

const KINDS: FigureKind[] = ["eigencurves", "bifpoints", "branch", "domain3d"];

class UsageError extends Error {}

export function parseArgs(argv: string[]): FigureSpec {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (!a.startsWith("--")) throw new UsageError(`unexpected argument ${a}`);
    const eq = a.indexOf("=");
    if (eq >= 0) {
      flags.set(a.slice(2, eq), a.slice(eq + 1));
    } else {
      const v = argv[i + 1];
      if (v === undefined || v.startsWith("--")) throw new UsageError(`flag ${a} needs a value`);
      flags.set(a.slice(2), v);
      i++;
    }
  }
  if (flags.has("spec")) {
    let data: unknown;
    try {
      data = JSON.parse(readFileSync(flags.get("spec")!, "utf8"));
    } catch (err) {
      throw new UsageError(`cannot read spec: ${(err as Error).message}`);
    }
    const spec = data as Partial<FigureSpec>;
    if (!spec.kind || !KINDS.includes(spec.kind)) throw new UsageError(`spec.kind must be one of ${KINDS.join("|")}`);
    if (!Array.isArray(spec.inputs) || spec.inputs.length === 0) throw new UsageError("spec.inputs must be a non-empty array");
    if (typeof spec.output !== "string") throw new UsageError("spec.output must be a path");
    return spec as FigureSpec;
  }
  const kind = flags.get("kind") as FigureKind | undefined;
  if (!kind || !KINDS.includes(kind)) throw new UsageError(`--kind must be one of ${KINDS.join("|")}`);
  const input = flags.get("input");
  if (!input) throw new UsageError("--input is required (comma-separated paths)");
  const output = flags.get("output");
  if (!output) throw new UsageError("--output is required");
  const spec: FigureSpec = { kind, inputs: input.split(","), output };
  if (flags.has("width")) spec.width = Number(flags.get("width"));
  if (flags.has("height")) spec.height = Number(flags.get("height"));
  if (flags.has("ymin")) spec.ymin = Number(flags.get("ymin"));
  if (flags.has("ymax")) spec.ymax = Number(flags.get("ymax"));
  if (flags.has("title")) spec.title = flags.get("title");
  return spec;
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const svg = renderFigure(spec);
    writeFileSync(spec.output, svg);
    console.error(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`render failure: ${(err as Error).message}`);
    }
    return 1;
  }
}

const invokedDirectly = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
