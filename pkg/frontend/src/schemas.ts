/**
 * Readers for the serrinband CLI file formats, validated with zod.
 * A schema mismatch (wrong header, non-numeric cell, malformed JSON)
 * throws SchemaError; the CLI maps that to a nonzero exit.
 */

import { readFileSync } from "fs";
import { z } from "zod";

export class SchemaError extends Error {}

const finite = z.number().finite();

export interface CsvTable {
  header: string[];
  rows: number[][];
}

export function readCsv(path: string, expectedHeader: string[]): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) {
    throw new SchemaError(`${path}: expected a header row and at least one data row`);
  }
  const header = lines[0].split(",");
  if (header.length !== expectedHeader.length || header.some((h, i) => h !== expectedHeader[i])) {
    throw new SchemaError(
      `${path}: header [${header.join(",")}] does not match expected [${expectedHeader.join(",")}]`,
    );
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`${path}: row ${i} has ${cells.length} cells, expected ${header.length}`);
    }
    const row = cells.map(Number);
    const check = z.array(finite).length(header.length).safeParse(row);
    if (!check.success) {
      throw new SchemaError(`${path}: row ${i} has non-numeric cells: ${lines[i]}`);
    }
    rows.push(row);
  }
  return { header, rows };
}

export const SIGMA_HEADER = ["lambda", "sigma_j", "f_j", "bound_lo", "bound_hi"];
export const BIFPOINTS_HEADER = ["j", "lambda_j", "sigma_prime", "residual"];
export const BOUNDARY_HEADER = ["alpha", "phi"];
export const EMBED_HEADER = ["x0", "x1", "x2"];

export function readSigmaCsv(path: string): CsvTable {
  return readCsv(path, SIGMA_HEADER);
}

export function readBifpointsCsv(path: string): CsvTable {
  return readCsv(path, BIFPOINTS_HEADER);
}

export function readEmbedCsv(path: string): CsvTable {
  // embedded boundary curves on S^2 (three coordinates per node)
  return readCsv(path, EMBED_HEADER);
}

const branchPointSchema = z.object({
  s: finite,
  lambda: finite,
  w_coeffs: z.array(finite),
  residual_sup: finite,
  newton_iters: z.number().int().nonnegative(),
});

export const branchSchema = z.object({
  dim: z.number().int().min(2),
  j: z.number().int().min(2),
  grid: z.object({ n_alpha: z.number().int().positive(), n_t: z.number().int().positive() }),
  M: z.number().int().positive(),
  tol: finite,
  floor: finite,
  lambda_star: finite,
  status: z.string(),
  points: z.array(branchPointSchema).min(1),
});

export type BranchFile = z.infer<typeof branchSchema>;

export function readBranchJson(path: string): BranchFile {
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (err) {
    throw new SchemaError(`${path}: not valid JSON: ${(err as Error).message}`);
  }
  const parsed = branchSchema.safeParse(data);
  if (!parsed.success) {
    throw new SchemaError(`${path}: branch schema mismatch: ${parsed.error.message}`);
  }
  return parsed.data;
}
