/**
 * plot --csv scan.csv --roots roots.json --out w_vs_chi.svg [--y abs_w]
 *
 * Exit codes: 0 success (including the empty-CSV warning case), 2 bad
 * arguments or schema mismatch.
 */

import { render } from "./plot.js";
import { SchemaMismatch, Y_QUANTITIES, YQuantity } from "./scanData.js";

function usage(): string {
  return "usage: plot --csv <scan.csv> --roots <roots.json> " +
    "--out <figure.svg> [--y re_w|abs_w]";
}

export function main(argv: string[]): number {
  if (argv[0] !== "plot") {
    console.error(usage());
    return 2;
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key?.startsWith("--") || val === undefined) {
      console.error(usage());
      return 2;
    }
    opts.set(key.slice(2), val);
  }
  const csv = opts.get("csv");
  const roots = opts.get("roots");
  const out = opts.get("out");
  const y = (opts.get("y") ?? "re_w") as YQuantity;
  if (!csv || !roots || !out) {
    console.error(usage());
    return 2;
  }
  if (!Y_QUANTITIES.includes(y)) {
    console.error(`--y must be one of ${Y_QUANTITIES.join(", ")}`);
    return 2;
  }
  if (!out.endsWith(".svg")) {
    console.error("only SVG output is supported; use an .svg path");
    return 2;
  }
  try {
    const result = render({ inputCsv: csv, rootsJson: roots,
                            outputPath: out, yQuantity: y });
    if (result.warning) {
      console.warn(`warning: ${result.warning}`);
    }
    console.log(`wrote ${out}: ${result.samples} samples, ` +
      `${result.rootsMarked} roots, ${result.flagsMarked} quasi-exact flags`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaMismatch) {
      console.error(err.message);
      return 2;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      console.error(`input file missing: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
