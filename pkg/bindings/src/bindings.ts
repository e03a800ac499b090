/**
 * The five binding operations.
 *
 * bind_fit materializes a fitted model inside a private working directory
 * and hands back an opaque handle; the other operations address that
 * directory through the handle. Handles own disk state, so callers must
 * bind_release every handle they are issued; using a handle after release
 * raises HandleError.
 */

import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { renderRecord } from "./csv.js";
import { parseMatrixBinary, runCore } from "./core.js";
import { HandleError, ProtocolError } from "./errors.js";
import {
  expectHandleId,
  expectInt,
  expectRow,
  expectText,
  type Handle,
  type Matrix,
  type Prediction,
  type Real,
} from "./values.js";

interface HandleState {
  dir: string;
  released: boolean;
  seq: number;
}

const handles = new Map<number, HandleState>();
let nextId = 1;

function stateOf(handle: unknown, what: string): HandleState {
  const id = expectHandleId(handle, what);
  const state = handles.get(id);
  if (state === undefined) {
    throw new HandleError(`handle ${id} was never issued`);
  }
  if (state.released) {
    throw new HandleError(`handle ${id} has been released`);
  }
  return state;
}

function rmQuiet(path: string): void {
  rmSync(path, { force: true });
}

export function bind_fit(schemaText: unknown, csvText: unknown): Handle {
  const schema = expectText(schemaText, "schema");
  const csv = expectText(csvText, "training data");
  const dir = mkdtempSync(join(tmpdir(), "mixmetric-bind-"));
  try {
    writeFileSync(join(dir, "schema.json"), schema, "utf8");
    writeFileSync(join(dir, "train.csv"), csv, "utf8");
    runCore(["fit", "--schema", "schema.json", "--data", "train.csv", "--out", "model.json"], dir);
  } catch (err) {
    rmSync(dir, { recursive: true, force: true });
    throw err;
  }
  const id = nextId;
  nextId += 1;
  handles.set(id, { dir, released: false, seq: 0 });
  return ["handle", id];
}

export function bind_distance(handle: unknown, rowA: unknown, rowB: unknown): Real {
  const state = stateOf(handle, "handle");
  const recA = renderRecord(expectRow(rowA, "row_a"), "row_a");
  const recB = renderRecord(expectRow(rowB, "row_b"), "row_b");
  // Records may open with a minus sign, so both rows ride the equals form.
  const out = runCore(
    ["dist", "--model", "model.json", `--a=${recA}`, `--b=${recB}`],
    state.dir,
  );
  const text = out.toString("utf8").trim();
  const value = Number(text);
  if (text === "" || !Number.isFinite(value)) {
    throw new ProtocolError(`core produced a non-numeric distance: ${JSON.stringify(text)}`);
  }
  return ["real", value];
}

export function bind_matrix(handle: unknown, csvText: unknown): Matrix {
  const state = stateOf(handle, "handle");
  const csv = expectText(csvText, "matrix data");
  state.seq += 1;
  const csvName = `matrix-${state.seq}.csv`;
  const binName = `matrix-${state.seq}.bin`;
  try {
    writeFileSync(join(state.dir, csvName), csv, "utf8");
    runCore(
      ["matrix", "--model", "model.json", "--data", csvName, "--out", binName,
       "--format", "binary"],
      state.dir,
    );
    const blob = readFileSync(join(state.dir, binName));
    return ["matrix", parseMatrixBinary(blob)];
  } finally {
    rmQuiet(join(state.dir, csvName));
    rmQuiet(join(state.dir, binName));
  }
}

export function bind_predict(handle: unknown, query: unknown, k: unknown): Prediction {
  const state = stateOf(handle, "handle");
  const rec = renderRecord(expectRow(query, "query"), "query");
  const kv = expectInt(k, "k");
  const out = runCore(
    ["predict", "--model", "model.json", "--data", "train.csv", `--query=${rec}`,
     "--k", String(kv)],
    state.dir,
  );
  const lines = out.toString("utf8").trimEnd().split("\n");
  const head = lines[0];
  if (head === undefined || !head.startsWith("label=")) {
    throw new ProtocolError(`core prediction did not begin with a label line: ${JSON.stringify(head ?? "")}`);
  }
  const label = head.slice("label=".length);
  const scores: Array<[["text", string], ["real", number]]> = [];
  for (const line of lines.slice(1)) {
    const cut = line.lastIndexOf("]=");
    if (!line.startsWith("score[") || cut < 6) {
      throw new ProtocolError(`core prediction carried a malformed score line: ${JSON.stringify(line)}`);
    }
    const cls = line.slice("score[".length, cut);
    const value = Number(line.slice(cut + 2));
    if (!Number.isFinite(value)) {
      throw new ProtocolError(`core prediction carried a non-numeric score: ${JSON.stringify(line)}`);
    }
    scores.push([["text", cls], ["real", value]]);
  }
  return ["prediction", { label: ["text", label], scores }];
}

export function bind_release(handle: unknown): void {
  const id = expectHandleId(handle, "handle");
  const state = handles.get(id);
  if (state === undefined) {
    throw new HandleError(`handle ${id} was never issued`);
  }
  if (state.released) {
    throw new HandleError(`handle ${id} has already been released`);
  }
  state.released = true;
  rmSync(state.dir, { recursive: true, force: true });
}
