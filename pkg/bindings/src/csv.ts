/**
 * Rendering of tagged cells into the headerless CSV records the core's
 * dist and predict commands accept.
 *
 * Numbers print in shortest round-trip decimal form; the core reparses
 * that to the bit-identical float64. The empty token and "NA" cannot be
 * expressed as data at all: the core reads them as missing even when
 * quoted, so they are rejected here instead of silently changing meaning.
 */

import { ProtocolError } from "./errors.js";
import type { Cell } from "./values.js";

// Must match the core's missing markers (docs/format.md).
const MISSING_TOKENS = new Set(["", "NA"]);

function renderReal(value: number, where: string): string {
  if (!Number.isFinite(value)) {
    throw new ProtocolError(`${where}: numeric cells must be finite, got ${value}`);
  }
  // String(-0) drops the sign
  return Object.is(value, -0) ? "-0" : String(value);
}

function renderText(value: string, where: string): string {
  if (MISSING_TOKENS.has(value)) {
    throw new ProtocolError(
      `${where}: token ${JSON.stringify(value)} collides with a missing-value ` +
        `marker; use a ("null", null) cell for missing`,
    );
  }
  return /[",\n\r]/.test(value) ? `"${value.replaceAll('"', '""')}"` : value;
}

export function renderRecord(cells: readonly Cell[], what: string): string {
  return cells
    .map((cell, i) => {
      const where = `${what}, cell ${i + 1}`;
      switch (cell[0]) {
        case "null":
          return "";
        case "real":
          return renderReal(cell[1], where);
        case "text":
          return renderText(cell[1], where);
      }
    })
    .join(",");
}
