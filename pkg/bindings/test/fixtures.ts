/**
 * Shared corpus for the binding tests: the core's own mixed-data fixture,
 * plus two purpose-built schemas the tests construct inline.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { nil, real, text, type Cell } from "../src/values.js";

const HERE = dirname(fileURLToPath(import.meta.url));
export const DATA_DIR = join(HERE, "..", "..", "tests", "data");

export const mixedSchema = readFileSync(join(DATA_DIR, "mixed.schema.json"), "utf8");
export const mixedCsv = readFileSync(join(DATA_DIR, "mixed.csv"), "utf8");

// Rows 1, 2, and 5 of mixed.csv as tagged cells (target column omitted).
export const ROW_1: Cell[] = [real(34), real(52000), text("good"), real(172.5), text("lyon")];
export const ROW_2: Cell[] = [real(29), real(41000), text("fair"), real(180.0), text("nice")];
export const ROW_MISSING: Cell[] = [real(23), nil, text("poor"), real(182.3), text("nice")];

// Minimal schema whose numeric values go negative, exercising records that
// open with a minus sign.
export const negSchema = JSON.stringify({
  attributes: [
    { name: "x", kind: "numeric", mode: "prob_empirical" },
    { name: "c", kind: "categorical", mode: "exact_match" },
  ],
  target: null,
});
export const negCsv = "x,c\n-3,u\n-1,v\n2,u\n5,w\n";

// Tokens that force CSV quoting on the way into the core.
export const quoteSchema = JSON.stringify({
  attributes: [
    { name: "tag", kind: "categorical", mode: "exact_match" },
    { name: "v", kind: "numeric", mode: "prob_empirical" },
  ],
  target: null,
});
export const quoteCsv =
  'tag,v\n"a,b",1\n"say ""hi""",2\nplain,3\n"a,b",4\n';
