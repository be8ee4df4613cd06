/**
 * Readers for the two files the solver's `scan` command produces: the
 * sample CSV (chi, re_w, im_w, abs_w, branch) and the roots JSON.  The
 * plotter never recomputes anything; these files are the whole contract.
 */

import { readFileSync } from "node:fs";

export const Y_QUANTITIES = ["re_w", "abs_w"] as const;
export type YQuantity = (typeof Y_QUANTITIES)[number];

export interface ScanSample {
  chi: number;
  re_w: number;
  im_w: number;
  abs_w: number;
  branch: string;
}

export interface RootEntry {
  chi: number;
  method: string;
  residual: number;
  parity?: string | null;
}

export interface QuasiExactFlag {
  chi: number;
  sector: string;
  deviation: number;
}

export interface RootsFile {
  kappa: number;
  mu: number;
  sector: string;
  roots: RootEntry[];
  emary_bishop: QuasiExactFlag[];
}

export class SchemaMismatch extends Error {
  constructor(public readonly column: string, detail: string) {
    super(`schema mismatch in column '${column}': ${detail}`);
    this.name = "SchemaMismatch";
  }
}

const REQUIRED_COLUMNS = ["chi", "re_w", "im_w", "abs_w", "branch"] as const;

/** Parse the scan CSV; rows are sorted by chi. */
export function readScanCsv(path: string): ScanSample[] {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaMismatch("chi", "file has no header row");
  }
  const header = (lines[0] ?? "").split(",").map((h) => h.trim());
  const index = new Map<string, number>();
  header.forEach((h, i) => index.set(h, i));
  for (const col of REQUIRED_COLUMNS) {
    if (!index.has(col)) {
      throw new SchemaMismatch(col, "column missing from header");
    }
  }
  const samples: ScanSample[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = (lines[i] ?? "").split(",");
    const num = (col: string): number => {
      const raw = cells[index.get(col)!];
      const v = Number(raw);
      if (raw === undefined || raw === "" || !Number.isFinite(v)) {
        throw new SchemaMismatch(col, `row ${i}: not a finite number (${raw})`);
      }
      return v;
    };
    samples.push({
      chi: num("chi"),
      re_w: num("re_w"),
      im_w: num("im_w"),
      abs_w: num("abs_w"),
      branch: cells[index.get("branch")!] ?? "",
    });
  }
  samples.sort((a, b) => a.chi - b.chi);
  return samples;
}

export function readRootsJson(path: string): RootsFile {
  const data = JSON.parse(readFileSync(path, "utf8")) as Partial<RootsFile>;
  for (const key of ["kappa", "mu", "sector", "roots"] as const) {
    if (data[key] === undefined) {
      throw new SchemaMismatch(key, "field missing from roots JSON");
    }
  }
  return {
    kappa: data.kappa as number,
    mu: data.mu as number,
    sector: data.sector as string,
    roots: (data.roots ?? []).map((r) => ({
      chi: r.chi,
      method: r.method,
      residual: r.residual,
      parity: r.parity ?? null,
    })),
    emary_bishop: data.emary_bishop ?? [],
  };
}
