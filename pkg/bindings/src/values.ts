/**
 * Tagged values.
 *
 * Every value crossing the binding boundary is a (tag, payload) pair, so a
 * reader can always dispatch on `value[0]` without guessing. Record rows
 * cross as lists of cells, one per non-target attribute in schema order; a
 * missing cell is the designated ("null", null) value, mirroring the empty
 * cell of the CSV format.
 */

import { ProtocolError } from "./errors.js";

export type Text = readonly ["text", string];
export type Real = readonly ["real", number];
export type Null = readonly ["null", null];
export type Int = readonly ["int", number];
export type Handle = readonly ["handle", number];

/** One record cell: a token, a number, or missing. */
export type Cell = Text | Real | Null;

export interface MatrixPayload {
  /** Record count. */
  readonly n: number;
  /**
   * Condensed upper triangle: n*(n-1)/2 float64 values in pair order
   * (0,1), (0,2), ..., (n-2,n-1). These are the engine's exact bits,
   * parsed from the binary matrix form.
   */
  readonly values: Float64Array;
}
export type Matrix = readonly ["matrix", MatrixPayload];

export interface PredictionPayload {
  readonly label: Text;
  /** One (class, vote total) pair per class, in sorted class order. */
  readonly scores: ReadonlyArray<readonly [Text, Real]>;
}
export type Prediction = readonly ["prediction", PredictionPayload];

export const text = (value: string): Text => ["text", value];
export const real = (value: number): Real => ["real", value];
export const nil: Null = ["null", null];
export const int = (value: number): Int => ["int", value];

function pair(value: unknown): readonly [unknown, unknown] | null {
  if (!Array.isArray(value) || value.length !== 2) return null;
  return [value[0], value[1]];
}

export function expectText(value: unknown, what: string): string {
  const p = pair(value);
  if (!p || p[0] !== "text" || typeof p[1] !== "string") {
    throw new ProtocolError(`${what}: expected a ("text", string) pair`);
  }
  return p[1];
}

export function expectInt(value: unknown, what: string): number {
  const p = pair(value);
  if (!p || p[0] !== "int" || typeof p[1] !== "number" || !Number.isInteger(p[1])) {
    throw new ProtocolError(`${what}: expected an ("int", integer) pair`);
  }
  return p[1];
}

export function expectHandleId(value: unknown, what: string): number {
  const p = pair(value);
  if (!p || p[0] !== "handle" || typeof p[1] !== "number" || !Number.isInteger(p[1])) {
    throw new ProtocolError(`${what}: expected a ("handle", id) pair`);
  }
  return p[1];
}

export function expectCell(value: unknown, what: string): Cell {
  const p = pair(value);
  if (p) {
    if (p[0] === "text" && typeof p[1] === "string") return ["text", p[1]];
    if (p[0] === "real" && typeof p[1] === "number") return ["real", p[1]];
    if (p[0] === "null" && p[1] === null) return nil;
  }
  throw new ProtocolError(`${what}: expected a ("text" | "real" | "null") tagged cell`);
}

export function expectRow(value: unknown, what: string): readonly Cell[] {
  if (!Array.isArray(value)) {
    throw new ProtocolError(`${what}: expected a list of tagged cells`);
  }
  return value.map((cell, i) => expectCell(cell, `${what}, cell ${i + 1}`));
}
